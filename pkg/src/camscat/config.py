"""Run configuration for the command-line driver.

Configs live in a flat, diff-friendly key-value text format::

    # comment
    model.R = 1.0
    grid.e_min = 0.75
    seeds.lambda = 1.6+1.3j; 8.4+0.29j

All physical quantities are in the reduced units of :mod:`camscat.model`
(R is the natural length unit, so the dimensionless groupings are R^2 V,
Omega R and d/R).  Parsing is strict: unknown or duplicate keys and
malformed values raise :class:`~camscat.errors.ConfigError`, and
``parse_config(serialize_config(cfg))`` reproduces ``cfg`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import ConfigError
from .model import PotentialParams

#: spacing rules an energy grid may use
SPACINGS = ("linear", "log")
#: bundled configuration presets (see ``camscat/presets/*.cfg``)
PRESETS = ("fig2", "fig3", "fig4", "fig5")


@dataclass(frozen=True)
class EnergyGrid:
    """Real-energy sample grid: ``count`` points from ``e_min`` to ``e_max``."""

    e_min: float
    e_max: float
    count: int
    spacing: str = "linear"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.e_min) and math.isfinite(self.e_max)):
            raise ConfigError(f"energy grid bounds must be finite, got "
                              f"({self.e_min}, {self.e_max})")
        if not self.e_min < self.e_max:
            raise ConfigError(f"grid needs e_min < e_max, got "
                              f"({self.e_min}, {self.e_max})")
        if self.count < 2:
            raise ConfigError(f"grid needs count >= 2, got {self.count}")
        if self.spacing not in SPACINGS:
            raise ConfigError(f"grid.spacing must be one of {SPACINGS}, "
                              f"got '{self.spacing}'")
        if self.spacing == "log" and self.e_min <= 0.0:
            raise ConfigError(f"log spacing needs e_min > 0, got {self.e_min}")

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.e_min, self.e_max, self.count)
        return np.linspace(self.e_min, self.e_max, self.count)


@dataclass(frozen=True)
class Tolerances:
    """Numerical knobs shared by the driver commands.

    pole_tol bounds the accepted |Delta1|/scale at a pole, quad_tol the
    quadrature epsabs/epsrel, tail_tol the partial-wave tail cutoff, and
    pole_im_cutoff the largest Im lambda~ still counted as resonant.
    """

    pole_tol: float = 1e-10
    quad_tol: float = 1e-10
    tail_tol: float = 1e-12
    pole_im_cutoff: float = 3.0

    def __post_init__(self) -> None:
        for name in ("pole_tol", "quad_tol", "tail_tol", "pole_im_cutoff"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ConfigError(f"tol.{name} must be finite and > 0, got {value}")


@dataclass(frozen=True)
class RunConfig:
    """Everything one driver invocation needs.

    scan_region is the (re_min, re_max, im_min, im_max) lambda-plane
    rectangle used by the pole scan; seeds_lambda / seeds_energy optionally
    override the automatic trajectory seeding; output_path is the default
    CSV destination (``--out`` wins over it).
    """

    model: PotentialParams = field(
        default_factory=lambda: PotentialParams(V=165.0, R=1.0, d=0.29, Omega=0.5))
    grid: EnergyGrid = field(
        default_factory=lambda: EnergyGrid(e_min=1.0, e_max=20.0, count=39))
    scan_region: tuple = (-0.25, 25.0, -0.05, 3.0)
    tolerances: Tolerances = field(default_factory=Tolerances)
    seeds_lambda: tuple = ()
    seeds_energy: tuple = ()
    output_path: str | None = None

    def __post_init__(self) -> None:
        region = tuple(float(x) for x in self.scan_region)
        if len(region) != 4 or not all(math.isfinite(x) for x in region):
            raise ConfigError(f"scan region must be 4 finite numbers, got "
                              f"{self.scan_region}")
        re0, re1, im0, im1 = region
        if not (re0 < re1 and im0 < im1):
            raise ConfigError(f"scan region must satisfy re_min < re_max and "
                              f"im_min < im_max, got {region}")
        object.__setattr__(self, "scan_region", region)
        object.__setattr__(self, "seeds_lambda",
                           tuple(complex(z) for z in self.seeds_lambda))
        # Energy seeds are complex: a metastable anchor is E0 - i*gamma.
        object.__setattr__(self, "seeds_energy",
                           tuple(complex(e) for e in self.seeds_energy))

    def energies(self) -> np.ndarray:
        return self.grid.points()


# ----------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------

_FLOAT_KEYS = (
    "model.R", "model.V", "model.d", "model.Omega",
    "grid.e_min", "grid.e_max",
    "scan.re_min", "scan.re_max", "scan.im_min", "scan.im_max",
    "tol.pole_tol", "tol.quad_tol", "tol.tail_tol", "tol.pole_im_cutoff",
)
KNOWN_KEYS = _FLOAT_KEYS + (
    "grid.count", "grid.spacing", "seeds.lambda", "seeds.energy", "output.path",
)


def _parse_float(key: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: not a number: '{text}'") from exc
    if not math.isfinite(value):
        raise ConfigError(f"{key}: must be finite, got '{text}'")
    return value


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: not an integer: '{text}'") from exc


def _parse_complex_list(key: str, text: str) -> tuple:
    out = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        try:
            out.append(complex(item))
        except ValueError as exc:
            raise ConfigError(f"{key}: not a complex number: '{item}'") from exc
    return tuple(out)


def parse_config(text: str) -> RunConfig:
    """Parse the flat key-value format into a validated RunConfig.

    Raises
    ------
    ConfigError
        Unknown or duplicate key, malformed value, violated invariant.
    DomainError
        Propagated from PotentialParams for unphysical model values
        (e.g. d >= R); equally a validation failure to the caller.
    """
    raw: dict = {}
    for number, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {number}: expected 'section.key = value'")
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {number}: unknown key '{key}'")
        if key in raw:
            raise ConfigError(f"line {number}: duplicate key '{key}'")
        if not value:
            raise ConfigError(f"line {number}: empty value for '{key}'")
        raw[key] = value

    floats = {key: _parse_float(key, raw[key]) for key in _FLOAT_KEYS if key in raw}
    defaults = RunConfig()
    model = PotentialParams(
        R=floats.get("model.R", defaults.model.R),
        V=floats.get("model.V", defaults.model.V),
        d=floats.get("model.d", defaults.model.d),
        Omega=floats.get("model.Omega", defaults.model.Omega),
    )
    grid = EnergyGrid(
        e_min=floats.get("grid.e_min", defaults.grid.e_min),
        e_max=floats.get("grid.e_max", defaults.grid.e_max),
        count=_parse_int("grid.count", raw["grid.count"])
        if "grid.count" in raw else defaults.grid.count,
        spacing=raw.get("grid.spacing", defaults.grid.spacing),
    )
    region = tuple(
        floats.get(key, fallback) for key, fallback in
        zip(("scan.re_min", "scan.re_max", "scan.im_min", "scan.im_max"),
            defaults.scan_region))
    tolerances = Tolerances(
        pole_tol=floats.get("tol.pole_tol", defaults.tolerances.pole_tol),
        quad_tol=floats.get("tol.quad_tol", defaults.tolerances.quad_tol),
        tail_tol=floats.get("tol.tail_tol", defaults.tolerances.tail_tol),
        pole_im_cutoff=floats.get("tol.pole_im_cutoff",
                                  defaults.tolerances.pole_im_cutoff),
    )
    return RunConfig(
        model=model, grid=grid, scan_region=region, tolerances=tolerances,
        seeds_lambda=_parse_complex_list("seeds.lambda", raw.get("seeds.lambda", "")),
        seeds_energy=_parse_complex_list("seeds.energy", raw.get("seeds.energy", "")),
        output_path=raw.get("output.path"),
    )


# ----------------------------------------------------------------------
# Serialization
# ----------------------------------------------------------------------

def _format_complex(z: complex) -> str:
    return repr(complex(z)).strip("()")


def serialize_config(cfg: RunConfig) -> str:
    """Emit the flat key-value text; parse_config inverts it exactly."""
    lines = [
        f"model.R = {cfg.model.R!r}",
        f"model.V = {cfg.model.V!r}",
        f"model.d = {cfg.model.d!r}",
        f"model.Omega = {cfg.model.Omega!r}",
        f"grid.e_min = {cfg.grid.e_min!r}",
        f"grid.e_max = {cfg.grid.e_max!r}",
        f"grid.count = {cfg.grid.count}",
        f"grid.spacing = {cfg.grid.spacing}",
        f"scan.re_min = {cfg.scan_region[0]!r}",
        f"scan.re_max = {cfg.scan_region[1]!r}",
        f"scan.im_min = {cfg.scan_region[2]!r}",
        f"scan.im_max = {cfg.scan_region[3]!r}",
        f"tol.pole_tol = {cfg.tolerances.pole_tol!r}",
        f"tol.quad_tol = {cfg.tolerances.quad_tol!r}",
        f"tol.tail_tol = {cfg.tolerances.tail_tol!r}",
        f"tol.pole_im_cutoff = {cfg.tolerances.pole_im_cutoff!r}",
    ]
    if cfg.seeds_lambda:
        joined = "; ".join(_format_complex(z) for z in cfg.seeds_lambda)
        lines.append(f"seeds.lambda = {joined}")
    if cfg.seeds_energy:
        joined = "; ".join(_format_complex(e) for e in cfg.seeds_energy)
        lines.append(f"seeds.energy = {joined}")
    if cfg.output_path is not None:
        lines.append(f"output.path = {cfg.output_path}")
    return "\n".join(lines) + "\n"


def load_config(path: str) -> RunConfig:
    """Read and parse a config file; I/O failures become ConfigError."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config '{path}': {exc}") from exc
    return parse_config(text)


def preset_config(name: str) -> RunConfig:
    """Load one of the bundled presets (fig2, fig3, fig4, fig5)."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset '{name}', choose from {PRESETS}")
    text = resources.files(__package__).joinpath(f"presets/{name}.cfg").read_text(
        encoding="utf-8")
    return parse_config(text)
