"""Two-state-jump four-level matter model.

Pump excites g -> e; e transfers irreversibly to e' at rate ``k_transfer``;
the probe drives e -> f and e' -> f.  The model enters the signal only through
the closed-form frequency-domain correlation function ``f_tilde``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .units import angular_time


@dataclass(frozen=True)
class MatterParams:
    """Rates and frequencies in cm^-1.  ``scale`` defaults to 20 so that roughly
    10% of the probe is absorbed at the spectral peak."""

    omega_fe: float = 11000.0
    delta: float = 200.0
    k_transfer: float = 120.0
    gamma: float = 100.0
    scale: float = 20.0

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.k_transfer < 0:
            raise ValueError("k_transfer must be >= 0")
        if self.scale < 0:
            raise ValueError("scale must be >= 0")


def peak_frequencies(matter: MatterParams):
    """(omega_plus, omega_minus) = omega_fe +/- delta."""
    return matter.omega_fe + matter.delta, matter.omega_fe - matter.delta


def delay_phase(omega_prime, omega, t0):
    """exp(-i (omega - omega') t0) with t0 in fs."""
    return np.exp(-1j * (np.asarray(omega) - np.asarray(omega_prime)) * angular_time(t0))


def f_tilde_static(matter: MatterParams, omega_prime, omega):
    """``scale`` times the delay-independent bracket of F~ (i.e. F~ at t0 = 0)."""
    omega_prime = np.asarray(omega_prime, dtype=float)
    omega = np.asarray(omega, dtype=float)
    w_plus, w_minus = peak_frequencies(matter)
    g, k, d = matter.gamma, matter.k_transfer, matter.delta
    branch = 2j * d / (k + 2j * d)
    diff = omega - omega_prime
    to_plus = 1.0 / (omega - w_plus + 2j * g)
    transferred = 1.0 / (diff + 1j * (k + g))
    bracket = (to_plus / (diff + 1j * g)
               + branch * transferred / (omega - w_minus + 1j * (k + 2 * g))
               - branch * transferred * to_plus)
    return matter.scale * bracket


def f_tilde(matter: MatterParams, omega_prime, omega, t0=0.0):
    """Matter correlation function F~(omega', omega; t0).

    Broadcasts over array arguments.  All poles sit at least ``gamma`` off the
    real axis, so the value is finite for every real input.
    """
    return delay_phase(omega_prime, omega, t0) * f_tilde_static(matter, omega_prime, omega)
