"""Probe pulse spectral profiles.

Gaussian classical pulses, the Gaussian biphoton wavefunction, heralded
single-photon profiles obtained by fixing the reference-photon frequency, and
the closed-form Gaussian those heralded profiles reduce to.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from functools import cached_property, partial
from typing import Callable, Optional

import numpy as np

from .errors import GridTooNarrow
from .units import angular_time

EDGE_TOLERANCE = 1e-8


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency grid in cm^-1."""

    omega_min: float
    omega_max: float
    n_points: int

    def __post_init__(self):
        if not self.omega_min < self.omega_max:
            raise ValueError("omega_min must be < omega_max")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError("n_points must be an integer >= 2")
        if self.omega_min <= 0:
            raise ValueError("grid frequencies must be strictly positive")

    @cached_property
    def omega(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.n_points)

    @property
    def spacing(self) -> float:
        return (self.omega_max - self.omega_min) / (self.n_points - 1)

    @cached_property
    def weights(self) -> np.ndarray:
        """Trapezoid weights."""
        w = np.full(self.n_points, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    def refined(self, factor: int = 2) -> FrequencyGrid:
        return FrequencyGrid(self.omega_min, self.omega_max, (self.n_points - 1) * factor + 1)

    def integrate(self, values, axis=-1):
        """Trapezoid rule along ``axis`` with a fixed summation order."""
        values = np.moveaxis(np.asarray(values), axis, -1)
        return np.sum(values * self.weights, axis=-1)

    def node_index(self, omega):
        """Fractional grid index of ``omega``."""
        return (np.asarray(omega, dtype=float) - self.omega_min) / self.spacing


# Quadrature grid; wide enough for the sigma=600 cm^-1 conventional probe.
DEFAULT_GRID = FrequencyGrid(7000.0, 15000.0, 3201)
# Reference-photon axis used for the joint biphoton normalization.
DEFAULT_REFERENCE_GRID = FrequencyGrid(4000.0, 18000.0, 2801)


@dataclass(frozen=True)
class BiphotonGaussianParams:
    """Gaussian biphoton wavefunction parameters (reference values by default).

    ``t1``/``t2`` are entanglement times in fs; ``norm`` is the joint
    normalization constant, 1.0 until :meth:`normalized` is called.
    """

    omega0: float = 22000.0
    sigma: float = 1000.0
    beta: float = 0.04822
    t1: float = -19.69
    t2: float = 70.31
    norm: float = 1.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.norm <= 0:
            raise ValueError("norm must be > 0")

    def normalized(self, grid: FrequencyGrid = DEFAULT_GRID,
                   reference_grid: FrequencyGrid = DEFAULT_REFERENCE_GRID) -> BiphotonGaussianParams:
        """Return a copy whose ``norm`` makes the joint density integrate to 1."""
        raw = replace(self, norm=1.0)
        density = np.abs(biphoton_amplitude(raw, grid.omega[:, None],
                                            reference_grid.omega[None, :])) ** 2
        total = reference_grid.integrate(grid.integrate(density, axis=0))
        return replace(self, norm=float(1.0 / np.sqrt(total)))


@dataclass(frozen=True)
class GaussianProfile:
    center: float
    width: float

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("width must be > 0")

    def sample(self, grid: FrequencyGrid = DEFAULT_GRID) -> SpectralProfile:
        return conventional_probe(self.center, self.width, grid)


@dataclass(frozen=True, eq=False)
class SpectralProfile:
    """Complex spectral amplitude xi(omega) sampled on ``grid``.

    ``amplitude`` has units of cm^(1/2) so that |xi|^2 is a density per cm^-1.
    """

    grid: FrequencyGrid
    amplitude: np.ndarray
    # optional exact evaluator used between grid nodes
    closed_form: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=complex)
        if amp.shape != (self.grid.n_points,):
            raise ValueError("amplitude length must equal grid.n_points")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitude", amp)

    def norm(self) -> float:
        return float(self.grid.integrate(np.abs(self.amplitude) ** 2))

    def at(self, omega):
        """Amplitude at ``omega``.

        Grid nodes return the stored samples.  Between nodes the closed form
        is used when the profile has one, otherwise linear interpolation.
        Frequencies outside the grid give 0.
        """
        omega = np.asarray(omega, dtype=float)
        idx = self.grid.node_index(omega)
        nearest = np.rint(idx)
        on_node = (np.abs(idx - nearest) < 1e-6) & (nearest >= 0) & (nearest < self.grid.n_points)
        if self.closed_form is not None:
            inside = (omega >= self.grid.omega_min) & (omega <= self.grid.omega_max)
            out = np.where(inside, self.closed_form(omega), 0.0).astype(complex)
        else:
            out = np.interp(omega, self.grid.omega, self.amplitude.real, left=0.0, right=0.0) \
                + 1j * np.interp(omega, self.grid.omega, self.amplitude.imag, left=0.0, right=0.0)
        exact = self.amplitude[np.clip(nearest, 0, self.grid.n_points - 1).astype(int)]
        return np.where(on_node, exact, out)


class ProbeKind(enum.Enum):
    FOCK1 = "fock1"
    COHERENT = "coherent"
    HERALDED = "heralded"


@dataclass(frozen=True, eq=False)
class ProbeState:
    """Probe field state: single-photon Fock, m-photon coherent, or heralded biphoton."""

    kind: ProbeKind
    profile: Optional[SpectralProfile] = None
    mean_photons: float = 1.0
    biphoton: Optional[BiphotonGaussianParams] = None
    omega_r: Optional[float] = None

    def __post_init__(self):
        if self.kind is ProbeKind.HERALDED:
            if self.biphoton is None or self.omega_r is None:
                raise ValueError("heralded probe needs biphoton params and omega_r")
        else:
            if self.profile is None:
                raise ValueError(f"{self.kind.value} probe needs a spectral profile")
            if self.kind is ProbeKind.FOCK1 and self.mean_photons != 1.0:
                raise ValueError("a single-photon Fock state has exactly one photon")
            if self.mean_photons < 0:
                raise ValueError("mean_photons must be >= 0")

    @classmethod
    def fock(cls, profile: SpectralProfile) -> ProbeState:
        return cls(ProbeKind.FOCK1, profile=profile)

    @classmethod
    def coherent(cls, profile: SpectralProfile, m: float = 1.0) -> ProbeState:
        return cls(ProbeKind.COHERENT, profile=profile, mean_photons=float(m))

    @classmethod
    def heralded(cls, params: BiphotonGaussianParams, omega_r: float) -> ProbeState:
        return cls(ProbeKind.HERALDED, biphoton=params, omega_r=float(omega_r))


def biphoton_amplitude(params: BiphotonGaussianParams, omega, omega_r):
    """Gaussian biphoton wavefunction Phi(omega, omega_r); broadcasts over arrays."""
    omega = np.asarray(omega, dtype=float)
    omega_r = np.asarray(omega_r, dtype=float)
    t1, t2 = angular_time(params.t1), angular_time(params.t2)
    half = 0.5 * params.omega0
    pump = (omega + omega_r - params.omega0) ** 2 / (2.0 * params.sigma ** 2)
    corr = params.beta * ((omega - half) * t2 + (omega_r - half) * t1) ** 2
    return params.norm * np.exp(-pump - corr)


def _check_edges(amplitude: np.ndarray, what: str):
    mag = np.abs(amplitude)
    peak = mag.max()
    if peak == 0 or max(mag[0], mag[-1]) > EDGE_TOLERANCE * peak:
        raise GridTooNarrow(
            f"{what}: edge amplitude {max(mag[0], mag[-1]):.3g} exceeds "
            f"{EDGE_TOLERANCE:g} of peak {peak:.3g}; widen the grid")


def condition_on_reference(params: BiphotonGaussianParams, omega_r: float,
                           grid: FrequencyGrid = DEFAULT_GRID):
    """Heralded single-photon profile for a reference photon detected at ``omega_r``.

    Returns ``(profile, herald_weight)`` where ``herald_weight`` is the
    unnormalized density int |Phi(w, omega_r)|^2 dw and ``profile`` is
    Phi(., omega_r) scaled to unit norm.
    """
    phi = biphoton_amplitude(params, grid.omega, omega_r)
    _check_edges(phi, f"heralded profile at omega_r={omega_r}")
    weight = float(grid.integrate(np.abs(phi) ** 2))
    scale = 1.0 / np.sqrt(weight)
    exact = partial(_scaled_biphoton, params, omega_r, scale)
    return SpectralProfile(grid, phi * scale, exact), weight


def _scaled_biphoton(params, omega_r, scale, omega):
    return scale * biphoton_amplitude(params, omega, omega_r)


def _scaled_gaussian(center, width, scale, omega):
    return scale * np.exp(-(np.asarray(omega, dtype=float) - center) ** 2 / (2.0 * width ** 2))


def gaussian_reduction(params: BiphotonGaussianParams, omega_r: float) -> GaussianProfile:
    """Closed-form center and width of Phi(., omega_r) viewed as a Gaussian in omega."""
    t1, t2 = angular_time(params.t1), angular_time(params.t2)
    precision = 1.0 / params.sigma ** 2 + 2.0 * params.beta * t2 ** 2
    width = precision ** -0.5
    center = ((params.omega0 - omega_r) / params.sigma ** 2
              + 2.0 * params.beta * t2 * (0.5 * params.omega0 * (t1 + t2) - omega_r * t1)) / precision
    return GaussianProfile(float(center), float(width))


def conventional_probe(center: float, width: float,
                       grid: FrequencyGrid = DEFAULT_GRID) -> SpectralProfile:
    """Unit-norm real Gaussian profile exp(-(w-center)^2 / 2 width^2)."""
    if width <= 0:
        raise ValueError("width must be > 0")
    amp = np.exp(-(grid.omega - center) ** 2 / (2.0 * width ** 2))
    _check_edges(amp, f"Gaussian probe ({center}, {width})")
    scale = 1.0 / np.sqrt(grid.integrate(amp ** 2))
    return SpectralProfile(grid, amp * scale, partial(_scaled_gaussian, center, width, scale))
