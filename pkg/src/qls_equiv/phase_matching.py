"""Wavevector bookkeeping for the probe-direction phase-matching argument."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import CombinatorialLimitExceeded, IndexOutOfRange

MAX_ORDER_LIMIT = 12
DEFAULT_MAX_ORDER = 6
PARALLEL_TOL = 1e-9


@dataclass(frozen=True)
class WaveVector:
    x: float
    y: float
    z: float = 0.0

    @classmethod
    def of(cls, v) -> WaveVector:
        return cls(*(float(c) for c in v))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __add__(self, other):
        return WaveVector.of(self.as_array() + other.as_array())

    def __neg__(self):
        return WaveVector(-self.x, -self.y, -self.z)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return WaveVector.of(c * self.as_array())

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True)
class BeamGeometry:
    k_probe: WaveVector
    k_classical: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "k_classical", tuple(self.k_classical))

    @classmethod
    def from_lists(cls, k_probe, k_classical=()):
        return cls(WaveVector.of(k_probe), tuple(WaveVector.of(k) for k in k_classical))

    @property
    def n_classical(self) -> int:
        return len(self.k_classical)

    def wavevector(self, field: int) -> WaveVector:
        """Field 0 is the probe, 1..n the classical pulses."""
        if field == 0:
            return self.k_probe
        if not 1 <= field <= self.n_classical:
            raise IndexOutOfRange(f"classical field {field} not in 1..{self.n_classical}")
        return self.k_classical[field - 1]


class Witness(NamedTuple):
    orders: tuple
    signs: tuple


class GeometryCheck(NamedTuple):
    valid: bool
    witness: Optional[Witness] = None


def is_parallel(a, b, tol: float = PARALLEL_TOL) -> bool:
    """Same direction (not anti-parallel); zero vectors are parallel to nothing."""
    a = a.as_array() if isinstance(a, WaveVector) else np.asarray(a, dtype=float)
    b = b.as_array() if isinstance(b, WaveVector) else np.asarray(b, dtype=float)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return False
    return bool(np.linalg.norm(np.cross(a, b)) <= tol * na * nb and np.dot(a, b) > 0)


def _order_tuples(n: int, max_order: int):
    for total in range(1, max_order + 1):
        for orders in itertools.product(range(total + 1), repeat=n):
            if sum(orders) == total:
                yield orders


def is_geometry_valid(geometry: BeamGeometry, max_order: int = DEFAULT_MAX_ORDER) -> GeometryCheck:
    """Check that no integer combination sum(+/- b_i k_i) with 1 <= sum(b) <= max_order
    is parallel to the probe wavevector.

    Enumeration runs over increasing total order, then orders, then sign
    patterns (signs only for nonzero b_i), so the witness is deterministic.
    """
    if max_order > MAX_ORDER_LIMIT:
        raise CombinatorialLimitExceeded(f"max_order {max_order} > {MAX_ORDER_LIMIT}")
    if max_order < 1:
        raise ValueError("max_order must be positive")
    ks = np.array([k.as_array() for k in geometry.k_classical]).reshape(-1, 3)
    probe = geometry.k_probe.as_array()
    for orders in _order_tuples(geometry.n_classical, max_order):
        active = [i for i, b in enumerate(orders) if b]
        for pattern in itertools.product((1, -1), repeat=len(active)):
            signs = [1] * geometry.n_classical
            for i, s in zip(active, pattern):
                signs[i] = s
            combo = (np.array(orders) * np.array(signs)) @ ks
            if is_parallel(combo, probe):
                return GeometryCheck(False, Witness(tuple(orders), tuple(signs)))
    return GeometryCheck(True)


def _field_coefficients(chain: Sequence, geometry: BeamGeometry, sign: int = 1) -> dict:
    """Net integer multiple of each field's wavevector (+1 per L^+, -1 per L)."""
    coeffs = {}
    for inter in chain:
        geometry.wavevector(inter.field)  # index check
        coeffs[inter.field] = coeffs.get(inter.field, 0) + (sign if inter.daggered else -sign)
    return coeffs


def _combine(coeffs: dict, geometry: BeamGeometry) -> WaveVector:
    # summing integer multiples per field keeps cancelling interactions exactly zero
    total = np.zeros(3)
    for fld in sorted(coeffs):
        if coeffs[fld]:
            total = total + coeffs[fld] * geometry.wavevector(fld).as_array()
    return WaveVector.of(total)


def chain_wavevector(chain: Sequence, geometry: BeamGeometry) -> WaveVector:
    """Signed sum over interactions: +k for an L^+ (excitation), -k for an L."""
    return _combine(_field_coefficients(chain, geometry), geometry)


def signal_wavevector(term, geometry: BeamGeometry) -> WaveVector:
    """Wavevector of the matter-generated field in ``term``.

    The zeroth-order term passes the probe through unchanged and is assigned
    ``k_probe``.  A left-branch chain is the conjugate of the field it
    describes, hence the sign flip.  For two chains (spontaneous-emission
    terms) the result is the mismatch whose vanishing is their matching
    condition.
    """
    left, right = term.left_chain, term.right_chain
    if left is None and right is None:
        return geometry.k_probe
    coeffs = _field_coefficients(right or (), geometry)
    for fld, c in _field_coefficients(left or (), geometry, sign=-1).items():
        coeffs[fld] = coeffs.get(fld, 0) + c
    return _combine(coeffs, geometry)


def survives_in_probe_direction(term, geometry: BeamGeometry) -> bool:
    """True if the term contributes to the signal detected along ``k_probe``.

    Terms without a matter-field/probe heterodyne (zeroth order, and the
    product of two emission chains) survive unconditionally.
    """
    if term.pure_field:
        return True
    return is_parallel(signal_wavevector(term, geometry), geometry.k_probe)
