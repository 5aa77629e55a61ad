"""Frequency-domain field correlators of the probe states.

Only normal-ordered one- and two-point functions and the heralded four-point
function <a_r^+ a_r a^+ a> are representable; detection of higher-order
coherences is outside the model.
"""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

from .errors import UnsupportedState
from .pulses import BiphotonGaussianParams, ProbeKind, ProbeState, biphoton_amplitude
from .units import angular_time


class CorrelatorKind(enum.Enum):
    ONE_POINT_A = "<a>"
    ONE_POINT_ADAG = "<a+>"
    NORMAL = "<a+ a>"
    ANOMALOUS_AA = "<a a>"
    ANOMALOUS_ADAG_ADAG = "<a+ a+>"
    HERALDED_FOUR_POINT = "<ar+ ar a+ a>"


class MomentSignature(NamedTuple):
    vanishes: bool
    m_scaling: float


# Power of the mean photon number m carried by each correlator of a coherent state.
_M_EXPONENT = {
    None: 0.0,
    CorrelatorKind.ONE_POINT_A: 0.5,
    CorrelatorKind.ONE_POINT_ADAG: 0.5,
    CorrelatorKind.NORMAL: 1.0,
    CorrelatorKind.ANOMALOUS_AA: 1.0,
    CorrelatorKind.ANOMALOUS_ADAG_ADAG: 1.0,
}


def _single_mode(state: ProbeState, what: str):
    if state.kind is ProbeKind.HERALDED:
        raise UnsupportedState(
            f"{what} is not defined for a heralded biphoton probe; use heralded_four_point")
    m = 1.0 if state.kind is ProbeKind.FOCK1 else state.mean_photons
    return state.profile, m


def normal_two_point(state: ProbeState, omega2, omega1):
    """<a^+(omega2) a(omega1)> = m xi*(omega2) xi(omega1)  (m = 1 for Fock)."""
    profile, m = _single_mode(state, "normal_two_point")
    return (m * np.conj(profile.at(omega2))) * profile.at(omega1)


def one_point(state: ProbeState, omega, daggered: bool = False):
    """<a(omega)> (or <a^+(omega)>): zero for Fock, sqrt(m) xi(omega) for coherent."""
    profile, m = _single_mode(state, "one_point")
    if state.kind is ProbeKind.FOCK1:
        return np.zeros(np.shape(omega), dtype=complex)[()]
    value = np.sqrt(m) * profile.at(omega)
    return np.conj(value) if daggered else value


def anomalous_two_point(state: ProbeState, omega2, omega1, daggered: bool = False):
    """<a(omega2) a(omega1)> (or <a^+ a^+> when daggered)."""
    profile, m = _single_mode(state, "anomalous_two_point")
    if state.kind is ProbeKind.FOCK1:
        return np.zeros(np.broadcast(np.asarray(omega2), np.asarray(omega1)).shape, dtype=complex)[()]
    value = m * profile.at(omega2) * profile.at(omega1)
    return np.conj(value) if daggered else value


def heralded_four_point(params: BiphotonGaussianParams, omega_r, omega, omega_prime, t0=0.0):
    """<a_r^+(omega_r) a_r(omega_r) a^+(omega) a(omega')> for a probe delayed by t0 (fs).

    Phi*(omega, omega_r) Phi(omega', omega_r) exp(i (omega' - omega) t0).
    """
    phase = np.exp(1j * (np.asarray(omega_prime) - np.asarray(omega)) * angular_time(t0))
    return (np.conj(biphoton_amplitude(params, omega, omega_r))
            * biphoton_amplitude(params, omega_prime, omega_r) * phase)


def moment_signature(kind, state_kind: ProbeKind, m: float = 1.0) -> MomentSignature:
    """Whether correlator ``kind`` vanishes for a state, and its power of m.

    ``kind=None`` stands for a term with no probe field operator at all.
    """
    if state_kind is ProbeKind.HERALDED:
        raise UnsupportedState("heralded probes are described by the four-point correlator")
    exponent = _M_EXPONENT[kind]
    if kind is None or kind is CorrelatorKind.NORMAL:
        vanishes = state_kind is ProbeKind.COHERENT and m == 0
    else:
        # one-point and anomalous moments: zero for Fock, sqrt(m)/m for coherent
        vanishes = state_kind is ProbeKind.FOCK1 or m == 0
    return MomentSignature(vanishes, exponent)
