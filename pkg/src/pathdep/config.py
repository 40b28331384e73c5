"""Run configuration: JSON sections with defaults, dotted overrides, and parameter builders."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path

from .params import ClaimParams, HawkesParams, MarketParams
from .volterra import TimeGrid


class ConfigError(ValueError):
    pass


@dataclass
class MarketSection:
    upsilon: float = 0.02
    theta: float = 5.0
    kappa: float = 0.173
    phi: float = 0.17
    sigma: float = 0.34
    rho: float = -0.615
    gamma: float = 1.0
    v0: float = 0.018
    x0: float = 1.0
    delta: float = 0.6


@dataclass
class ClaimsSection:
    mu: float = 4.0
    theta_tilde: float = 0.2


@dataclass
class HawkesSection:
    lambda_star: float = 6.310822
    rho1: float = 1.079113
    rho2: float = 0.001
    p: float = 0.556834
    a0: float = 2.233946
    a1: float = -2.167217


@dataclass
class GridSection:
    T: float = 10.0
    N: int = 2048


@dataclass
class SimSection:
    paths: int = 20_000
    steps: int = 256
    seed: int = 0
    clamp: str = "full"
    drift: str = "trapezoid"
    world: str = "vanilla"  # "vanilla": delta = 1 and rho1 = 0; "model": parameters as configured
    strategy: str = "vanilla"  # or "pd"


@dataclass
class SweepSection:
    delta: list = field(default_factory=lambda: [0.6, 0.7, 0.8, 0.9, 1.0])
    p: list = field(default_factory=lambda: [0.556834])
    gamma: list = field(default_factory=lambda: [0.5, 1.0, 1.5])


@dataclass
class CalibrateSection:
    starts: int = 8
    steps: int = 4096
    seed: int = 0
    min_magnitude: float = 5.0
    start: str | None = None
    end: str | None = None
    horizon: float | None = None  # only for already-normalised t_years catalogs


@dataclass
class RunConfig:
    market: MarketSection = field(default_factory=MarketSection)
    claims: ClaimsSection = field(default_factory=ClaimsSection)
    hawkes: HawkesSection = field(default_factory=HawkesSection)
    grid: GridSection = field(default_factory=GridSection)
    sim: SimSection = field(default_factory=SimSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    calibrate: CalibrateSection = field(default_factory=CalibrateSection)

    # builders
    def market_params(self) -> MarketParams:
        return MarketParams(**asdict(self.market))

    def claim_params(self) -> ClaimParams:
        return ClaimParams(**asdict(self.claims))

    def hawkes_params(self) -> HawkesParams:
        return HawkesParams.from_dict(asdict(self.hawkes))

    def time_grid(self) -> TimeGrid:
        return TimeGrid(float(self.grid.T), int(self.grid.N))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        cfg = cls()
        for section, values in (data or {}).items():
            if not hasattr(cfg, section):
                raise ConfigError(f"unknown config section {section!r}")
            if not isinstance(values, dict):
                raise ConfigError(f"section {section!r} must be an object")
            for key, value in values.items():
                cfg.set(f"{section}.{key}", value)
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)

    def set(self, dotted: str, value) -> None:
        try:
            section, key = dotted.split(".")
        except ValueError:
            raise ConfigError(f"override {dotted!r} must look like section.key") from None
        sec = getattr(self, section, None)
        if sec is None or not is_dataclass(sec):
            raise ConfigError(f"unknown config section {section!r}")
        names = {f.name: f for f in fields(sec)}
        if key not in names:
            raise ConfigError(f"unknown key {key!r} in section {section!r}")
        setattr(sec, key, _coerce(getattr(sec, key), value, dotted))

    def apply_overrides(self, items) -> None:
        for item in items or ():
            if "=" not in item:
                raise ConfigError(f"override {item!r} must look like section.key=value")
            k, v = item.split("=", 1)
            try:
                parsed = json.loads(v)
            except json.JSONDecodeError:
                parsed = v
            self.set(k.strip(), parsed)


def _coerce(current, value, where):
    if current is None or value is None:
        return value
    try:
        if isinstance(current, bool):
            return bool(value)
        if isinstance(current, int):
            if float(value) != int(float(value)):
                raise ValueError
            return int(float(value))
        if isinstance(current, float):
            return float(value)
        if isinstance(current, list):
            vals = value if isinstance(value, list) else [value]
            return [float(v) for v in vals]
        if isinstance(current, str):
            return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: cannot use {value!r} here") from None
    return value
