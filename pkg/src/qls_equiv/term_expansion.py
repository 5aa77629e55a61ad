"""Symbolic expansion of the transmitted-probe two-point signal.

<a_out^+(t2) a_out(t1)> is expanded with a_out = a + L_H, where L_H is the
backward-Heisenberg series of nested commutators of L_pr with the interaction
Hamiltonian.  Each branch of the product is either the bare probe operator or
a chain: L_pr followed by the interactions picked up at successive nesting
levels.  Every interaction is a (field, dagger) pair: the probe (field 0,
contributing a_pr L_pr^+ or a_pr^+ L_pr) or classical pulse i (alpha_i L_i^+
or alpha_i^* L_i).  Terms are kept to second order in L_pr.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

import numpy as np

from .correlators import CorrelatorKind, MomentSignature, moment_signature
from .errors import CombinatorialLimitExceeded
from .phase_matching import BeamGeometry, signal_wavevector, survives_in_probe_direction
from .pulses import ProbeKind, ProbeState

PROBE = 0
MAX_CLASSICAL_FIELDS = 4
MAX_CLASSICAL_INTERACTIONS = 6
DEFAULT_MAX_CLASSICAL_INTERACTIONS = 4


@dataclass(frozen=True, order=True)
class Interaction:
    """One nesting level: ``field`` 0 is the probe, 1..n classical pulses;
    ``daggered`` selects L^+ (excitation) over L."""

    field: int
    daggered: bool

    @property
    def is_probe(self) -> bool:
        return self.field == PROBE

    def __str__(self):
        name = "P" if self.is_probe else f"C{self.field}"
        return name + ("+" if self.daggered else "-")


class TermClass(enum.Enum):
    ZEROTH = "Zeroth"
    FIRST_ORDER = "FirstOrder"
    SECOND_ORDER_TYPE1 = "SecondOrderType1"
    SECOND_ORDER_TYPE2_ABSORPTION = "SecondOrderType2Absorption"
    SECOND_ORDER_TYPE2_ANOMALOUS = "SecondOrderType2Anomalous"


@dataclass(frozen=True)
class TermDescriptor:
    """One term of the expansion.

    ``left_chain``/``right_chain`` are None for the bare a^+/a operator, or the
    tuple of interactions following L_pr^+ / L_pr (innermost first).
    """

    left_chain: Optional[tuple] = None
    right_chain: Optional[tuple] = None

    @property
    def lpr_order(self) -> int:
        order = 0
        for chain in (self.left_chain, self.right_chain):
            if chain is not None:
                order += 1 + sum(1 for i in chain if i.is_probe)
        return order

    @property
    def outer_field(self) -> str:
        """Probe operators left uncontracted by the input-output substitution."""
        bare = (self.left_chain is None, self.right_chain is None)
        return {(True, True): "both", (True, False): "a+", (False, True): "a", (False, False): "none"}[bare]

    @property
    def pure_field(self) -> bool:
        """No heterodyne between a matter-generated field and a bare probe operator."""
        return (self.left_chain is None) == (self.right_chain is None)

    @property
    def n_classical_interactions(self) -> int:
        return sum(1 for chain in (self.left_chain, self.right_chain) if chain is not None
                   for i in chain if not i.is_probe)

    def sort_key(self):
        def chain_key(chain):
            if chain is None:
                return (0,)
            return (1, len(chain), tuple((i.field, i.daggered) for i in chain))
        return (self.lpr_order, chain_key(self.left_chain), chain_key(self.right_chain))

    def __str__(self):
        def branch(chain, bare, op):
            if chain is None:
                return bare
            return f"{op}[{' '.join(str(i) for i in chain)}]"
        return f"<{branch(self.left_chain, 'a+', 'L+')} {branch(self.right_chain, 'a', 'L')}>"


class ScaleEstimate(NamedTuple):
    l_scale: float
    field_scale: float

    @property
    def ratio(self) -> float:
        """field_scale / l_scale; large values justify truncating in L_pr."""
        return self.field_scale / self.l_scale


def _check_guards(n_classical: int, max_classical_interactions: int):
    if n_classical < 0 or max_classical_interactions < 0:
        raise ValueError("counts must be non-negative")
    if n_classical > MAX_CLASSICAL_FIELDS:
        raise CombinatorialLimitExceeded(f"n_classical {n_classical} > {MAX_CLASSICAL_FIELDS}")
    if max_classical_interactions > MAX_CLASSICAL_INTERACTIONS:
        raise CombinatorialLimitExceeded(
            f"max_classical_interactions {max_classical_interactions} > {MAX_CLASSICAL_INTERACTIONS}")


def _chains(n_classical: int, n_interactions: int, with_probe: bool) -> Iterator[tuple]:
    classical = [Interaction(i, d) for i in range(1, n_classical + 1) for d in (False, True)]
    for seq in itertools.product(classical, repeat=n_interactions):
        if not with_probe:
            yield seq
            continue
        for pos in range(n_interactions + 1):
            for dag in (False, True):
                yield seq[:pos] + (Interaction(PROBE, dag),) + seq[pos:]


def iter_terms(n_classical: int, max_classical_interactions: int = DEFAULT_MAX_CLASSICAL_INTERACTIONS):
    """Lazily yield every term with L_pr order <= 2 (generation order, not canonical)."""
    _check_guards(n_classical, max_classical_interactions)
    budget = max_classical_interactions if n_classical else 0
    yield TermDescriptor(None, None)
    # one bare operator, one chain with zero or one probe interaction
    for c in range(budget + 1):
        for with_probe in (False, True):
            for chain in _chains(n_classical, c, with_probe):
                yield TermDescriptor(None, chain)
                yield TermDescriptor(chain, None)
    # two chains, classical interactions only
    for c_left in range(budget + 1):
        for c_right in range(budget - c_left + 1):
            for left in _chains(n_classical, c_left, False):
                for right in _chains(n_classical, c_right, False):
                    yield TermDescriptor(left, right)


def enumerate_terms(n_classical: int,
                    max_classical_interactions: int = DEFAULT_MAX_CLASSICAL_INTERACTIONS) -> list:
    """All distinct expansion terms up to second order in L_pr, canonically ordered."""
    return sorted(iter_terms(n_classical, max_classical_interactions), key=TermDescriptor.sort_key)


def _probe_interaction(term: TermDescriptor):
    for chain in (term.left_chain, term.right_chain):
        if chain is not None:
            for inter in chain:
                if inter.is_probe:
                    return inter
    return None


def classify(term: TermDescriptor) -> TermClass:
    order = term.lpr_order
    if order == 0:
        return TermClass.ZEROTH
    if order == 1:
        return TermClass.FIRST_ORDER
    if order != 2:
        raise ValueError(f"term {term} exceeds second order in L_pr")
    if term.left_chain is not None and term.right_chain is not None:
        return TermClass.SECOND_ORDER_TYPE1
    probe = _probe_interaction(term)
    # Right chain: a_pr L_pr^+ pairs with the bare a^+ as <a^+ a>.  The left
    # chain is the conjugate, so there a_pr^+ L_pr gives the normal moment.
    normal = probe.daggered if term.right_chain is not None else not probe.daggered
    return TermClass.SECOND_ORDER_TYPE2_ABSORPTION if normal else TermClass.SECOND_ORDER_TYPE2_ANOMALOUS


def factored_correlator(term: TermDescriptor) -> Optional[CorrelatorKind]:
    """Probe-field moment that factors out of ``term`` (None if no field operator)."""
    cls = classify(term)
    left_bare = term.left_chain is None
    if cls in (TermClass.ZEROTH, TermClass.SECOND_ORDER_TYPE2_ABSORPTION):
        return CorrelatorKind.NORMAL
    if cls is TermClass.SECOND_ORDER_TYPE1:
        return None
    if cls is TermClass.FIRST_ORDER:
        return CorrelatorKind.ONE_POINT_ADAG if left_bare else CorrelatorKind.ONE_POINT_A
    return CorrelatorKind.ANOMALOUS_ADAG_ADAG if left_bare else CorrelatorKind.ANOMALOUS_AA


def field_signature(term: TermDescriptor, state_kind: ProbeKind, m: float = 1.0) -> MomentSignature:
    """Whether the term's probe-field moment vanishes for the state, and its power of m."""
    return moment_signature(factored_correlator(term), state_kind, m)


def surviving_terms(n_classical: int, max_classical_interactions: int,
                    geometry: BeamGeometry, state: ProbeState) -> list:
    """(term, class) pairs that are non-vanishing for ``state`` and phase matched
    into the probe direction."""
    if n_classical > geometry.n_classical:
        raise ValueError(f"geometry has {geometry.n_classical} classical beams, need {n_classical}")
    m = 1.0 if state.kind is ProbeKind.FOCK1 else state.mean_photons
    out = []
    for term in enumerate_terms(n_classical, max_classical_interactions):
        if field_signature(term, state.kind, m).vanishes:
            continue
        if survives_in_probe_direction(term, geometry):
            out.append((term, classify(term)))
    return out


def interaction_scale(eta: float, tau_emission: float, tau_pulse: float, m: float) -> ScaleEstimate:
    """Order-of-magnitude sizes: L ~ sqrt(eta/tau_emission), a ~ sqrt(m/tau_pulse)."""
    if not 0 < eta <= 1:
        raise ValueError("eta must be in (0, 1]")
    if tau_emission <= 0 or tau_pulse <= 0 or m <= 0:
        raise ValueError("times and m must be positive")
    return ScaleEstimate(float(np.sqrt(eta / tau_emission)), float(np.sqrt(m / tau_pulse)))


def format_term_line(term: TermDescriptor, geometry: BeamGeometry, state_kind: ProbeKind,
                     m: float = 1.0) -> str:
    """One listing line: class, interaction sequence, k-signature, verdict."""
    cls = classify(term)
    # adding 0.0 turns -0.0 into 0.0 so listings do not show "-0.000000"
    k = signal_wavevector(term, geometry).as_array() + 0.0
    sig = field_signature(term, state_kind, m)
    matched = survives_in_probe_direction(term, geometry)
    if sig.vanishes:
        verdict = "vanishes"
    else:
        verdict = "survives" if matched else "unmatched"
    return (f"{cls.value}\t{term}\tk=({k[0]:+.6f},{k[1]:+.6f},{k[2]:+.6f})"
            f"\tm^{sig.m_scaling:g}\t{verdict}")
