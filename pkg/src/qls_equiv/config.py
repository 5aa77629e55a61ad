"""Run configuration: TOML text with unit-suffixed keys.

Every key is optional; omitted values fall back to the reference parameters.
Example::

    experiment = "equivalence"

    [probe]
    omega_r_cm1 = 10400.0

    [matter]
    gamma_cm1 = 100.0
"""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np
import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ParseError, ValidationError
from .matter_response import MatterParams
from .phase_matching import DEFAULT_MAX_ORDER, MAX_ORDER_LIMIT, BeamGeometry
from .pulses import BiphotonGaussianParams, FrequencyGrid
from .term_expansion import DEFAULT_MAX_CLASSICAL_INTERACTIONS

EXPERIMENTS = ("conventional", "heralded", "pqip", "equivalence", "terms", "geometry")

# toml key -> dataclass attribute
_MATTER_KEYS = {
    "omega_fe_cm1": "omega_fe", "delta_cm1": "delta", "k_transfer_cm1": "k_transfer",
    "gamma_cm1": "gamma", "scale": "scale",
}
_BIPHOTON_KEYS = {
    "omega0_cm1": "omega0", "sigma_cm1": "sigma", "beta": "beta", "t1_fs": "t1", "t2_fs": "t2",
}


@dataclass(frozen=True)
class Grids:
    quad_min_cm1: float = 7000.0
    quad_max_cm1: float = 15000.0
    quad_points: int = 3201
    reference_min_cm1: float = 4000.0
    reference_max_cm1: float = 18000.0
    reference_points: int = 2801
    omega_min_cm1: float = 9000.0
    omega_max_cm1: float = 13000.0
    omega_points: int = 161
    t0_min_fs: float = 0.0
    t0_max_fs: float = 150.0
    t0_points: int = 76

    @property
    def quad(self) -> FrequencyGrid:
        return FrequencyGrid(self.quad_min_cm1, self.quad_max_cm1, self.quad_points)

    @property
    def reference(self) -> FrequencyGrid:
        return FrequencyGrid(self.reference_min_cm1, self.reference_max_cm1, self.reference_points)

    @property
    def omega_axis(self) -> FrequencyGrid:
        return FrequencyGrid(self.omega_min_cm1, self.omega_max_cm1, self.omega_points)

    @property
    def t0_axis(self) -> np.ndarray:
        return np.linspace(self.t0_min_fs, self.t0_max_fs, self.t0_points)


@dataclass(frozen=True)
class Probe:
    center_cm1: float = 11000.0
    width_cm1: float = 600.0
    mean_photons: float = 1e6
    omega_r_cm1: Optional[float] = None


@dataclass(frozen=True)
class Geometry:
    k_probe: tuple = (1.0, 0.0, 0.0)
    k_classical: tuple = ((0.9239, 0.3827, 0.0),)
    max_order: int = DEFAULT_MAX_ORDER

    def beam_geometry(self) -> BeamGeometry:
        return BeamGeometry.from_lists(self.k_probe, self.k_classical)


@dataclass(frozen=True)
class Terms:
    n_classical: int = 1
    max_classical_interactions: int = DEFAULT_MAX_CLASSICAL_INTERACTIONS
    state: str = "fock"


@dataclass(frozen=True)
class Output:
    threshold: float = 1e-9
    matrix: bool = False


@dataclass(frozen=True)
class RunConfig:
    experiment: str = "conventional"
    matter: MatterParams = field(default_factory=MatterParams)
    biphoton: BiphotonGaussianParams = field(default_factory=BiphotonGaussianParams)
    probe: Probe = field(default_factory=Probe)
    grids: Grids = field(default_factory=Grids)
    geometry: Geometry = field(default_factory=Geometry)
    terms: Terms = field(default_factory=Terms)
    output: Output = field(default_factory=Output)

    @property
    def omega_r(self) -> Optional[float]:
        return self.probe.omega_r_cm1

    @property
    def m(self) -> float:
        return self.probe.mean_photons

    def normalized_biphoton(self) -> BiphotonGaussianParams:
        return self.biphoton.normalized(self.grids.quad, self.grids.reference)


def _coerce(section: str, key: str, value, default):
    where = f"[{section}] {key}" if section else key
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ValidationError(f"{where}: expected true/false, got {value!r}")
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(f"{where}: expected an integer, got {value!r}")
        return value
    if isinstance(default, float) or (default is None and section == "probe"):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"{where}: expected a number, got {value!r}")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ValidationError(f"{where}: expected a string, got {value!r}")
        return value
    return value


def _section(data: dict, name: str, cls, key_map=None):
    raw = data.pop(name, {})
    if not isinstance(raw, dict):
        raise ValidationError(f"[{name}] must be a table")
    key_map = key_map or {f.name: f.name for f in fields(cls)}
    defaults = cls()
    kwargs = {}
    for key, value in raw.items():
        if key not in key_map:
            raise ValidationError(f"[{name}] unknown key {key!r}; allowed: {sorted(key_map)}")
        attr = key_map[key]
        kwargs[attr] = _coerce(name, key, value, getattr(defaults, attr))
    return kwargs


def _vectors(name, value, count=None):
    if count is None and isinstance(value, (list, tuple)) and not value:
        return ()
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"[geometry] {name}: expected numeric vectors") from None
    if arr.ndim != (1 if count == 1 else 2) or arr.shape[-1] != 3:
        raise ValidationError(f"[geometry] {name}: expected 3-component vector(s)")
    if count == 1:
        return tuple(float(x) for x in arr)
    return tuple(tuple(float(x) for x in v) for v in arr)


def config_from_dict(data: dict, experiment: Optional[str] = None) -> RunConfig:
    """Build and validate a RunConfig from parsed TOML data."""
    data = dict(data)
    exp = data.pop("experiment", None)
    if experiment is not None:
        exp = experiment
    exp = exp or "conventional"
    if exp not in EXPERIMENTS:
        raise ValidationError(f"experiment must be one of {EXPERIMENTS}, got {exp!r}")
    try:
        matter = MatterParams(**_section(data, "matter", MatterParams, _MATTER_KEYS))
        biphoton = BiphotonGaussianParams(**_section(data, "biphoton", BiphotonGaussianParams,
                                                     _BIPHOTON_KEYS))
        probe = Probe(**_section(data, "probe", Probe))
        grids = Grids(**_section(data, "grids", Grids))
        geo_raw = data.pop("geometry", {})
        geo_kwargs = {}
        for key, value in geo_raw.items():
            if key == "k_probe":
                geo_kwargs[key] = _vectors(key, value, count=1)
            elif key == "k_classical":
                geo_kwargs[key] = _vectors(key, value)
            elif key == "max_order":
                geo_kwargs[key] = _coerce("geometry", key, value, DEFAULT_MAX_ORDER)
            else:
                raise ValidationError(f"[geometry] unknown key {key!r}")
        geometry = Geometry(**geo_kwargs)
        terms = Terms(**_section(data, "terms", Terms))
        output = Output(**_section(data, "output", Output))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    if data:
        raise ValidationError(f"unknown top-level keys: {sorted(data)}")
    config = RunConfig(exp, matter, biphoton, probe, grids, geometry, terms, output)
    validate(config)
    return config


def validate(config: RunConfig):
    """Check per-experiment requirements and type invariants."""
    g = config.grids
    try:
        g.quad, g.reference, g.omega_axis
    except ValueError as exc:
        raise ValidationError(f"[grids] {exc}") from None
    if g.t0_points < 1 or g.t0_min_fs > g.t0_max_fs:
        raise ValidationError("[grids] t0 axis needs t0_points >= 1 and t0_min_fs <= t0_max_fs")
    if config.experiment in ("heralded", "pqip", "equivalence") and config.omega_r is None:
        raise ValidationError(f"experiment {config.experiment!r} requires [probe] omega_r_cm1")
    if config.probe.mean_photons <= 0:
        raise ValidationError("[probe] mean_photons must be > 0")
    if config.probe.width_cm1 <= 0:
        raise ValidationError("[probe] width_cm1 must be > 0")
    if config.matter.scale <= 0:
        raise ValidationError("[matter] scale must be > 0")
    if np.linalg.norm(config.geometry.k_probe) == 0:
        raise ValidationError("[geometry] k_probe must be nonzero")
    if not 1 <= config.geometry.max_order <= MAX_ORDER_LIMIT:
        raise ValidationError(f"[geometry] max_order must be in 1..{MAX_ORDER_LIMIT}")
    if config.terms.state not in ("fock", "coherent"):
        raise ValidationError("[terms] state must be 'fock' or 'coherent'")
    if config.terms.n_classical > len(config.geometry.k_classical):
        raise ValidationError("[terms] n_classical exceeds the number of [geometry] k_classical beams")
    if config.output.threshold <= 0:
        raise ValidationError("[output] threshold must be > 0")


def parse_config(text: str, experiment: Optional[str] = None) -> RunConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"config parse error: {exc}") from None
    return config_from_dict(data, experiment)


def load_config(path, experiment: Optional[str] = None) -> RunConfig:
    """Read, parse and validate a config file.  ``experiment`` overrides the file."""
    return parse_config(Path(path).read_text(), experiment)


def config_to_dict(config: RunConfig) -> dict:
    """Fully resolved parameter set with unit-suffixed keys."""
    matter = {key: getattr(config.matter, attr) for key, attr in _MATTER_KEYS.items()}
    biphoton = {key: getattr(config.biphoton, attr) for key, attr in _BIPHOTON_KEYS.items()}
    probe = {k: v for k, v in asdict(config.probe).items() if v is not None}
    geometry = {
        "k_probe": list(config.geometry.k_probe),
        "k_classical": [list(v) for v in config.geometry.k_classical],
        "max_order": config.geometry.max_order,
    }
    return {
        "experiment": config.experiment,
        "matter": matter,
        "biphoton": biphoton,
        "probe": probe,
        "grids": asdict(config.grids),
        "geometry": geometry,
        "terms": asdict(config.terms),
        "output": asdict(config.output),
    }


def serialize(config: RunConfig) -> str:
    return tomli_w.dumps(config_to_dict(config))
