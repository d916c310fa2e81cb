"""Flat key = value run configuration with flag overrides.

The format is intentionally minimal and diff-friendly: one `key = value`
per line, `#` comments, unknown keys rejected. CLI flags override file
values. The resolved configuration can be emitted and reparsed to the same
object (round-trip tested).
"""

from dataclasses import dataclass, fields

from .core import (EconomyConfig, GeometricDividends, LogUtility,
                   ProductionTech, ZeroDividends)


class ConfigError(ValueError):
    pass


_FLOAT_KEYS = ("A", "alpha", "beta", "theta", "G", "Gd", "D0", "C", "sigma",
               "tol_p0", "tol_conv", "tol_v")
_OPT_FLOAT_KEYS = ("k0",)
_OPT_INT_KEYS = ("horizon",)


@dataclass
class RunConfig:
    """Parameters shared by all subcommands.

    k0 and horizon stay None until a subcommand resolves its own default
    (the shooter starts at the bubbly steady state, the path builder at a
    small capital stock).
    """

    A: float = 0.25
    alpha: float = 2.0 / 3.0
    beta: float = 0.5
    theta: float = 23.0 / 6.0
    G: float = 1.0
    Gd: float = 0.95
    D0: float = 1e-6
    C: float = 5.0
    sigma: float = 1.01
    k0: float | None = None
    horizon: int | None = None
    tol_p0: float = 1e-14
    tol_conv: float = 1e-12
    tol_v: float = 1e-10

    def tech(self) -> ProductionTech:
        try:
            return ProductionTech(A=self.A, alpha=self.alpha, theta=self.theta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def savings(self) -> LogUtility:
        try:
            return LogUtility(beta=self.beta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def economy(self, *, k0, dividends=None) -> EconomyConfig:
        if dividends is None:
            dividends = (GeometricDividends(D0=self.D0, Gd=self.Gd)
                         if self.D0 > 0.0 else ZeroDividends())
        try:
            return EconomyConfig(G=self.G, tech=self.tech(),
                                 savings=self.savings(), dividends=dividends,
                                 k0=k0)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def validate(self):
        self.tech()
        self.savings()
        if not self.G > 0.0:
            raise ConfigError(f"G must be positive, got {self.G}")
        if not 0.0 < self.Gd < self.G:
            raise ConfigError(f"Gd must be in (0, G), got {self.Gd}")
        if self.D0 < 0.0:
            raise ConfigError(f"D0 must be >= 0, got {self.D0}")
        if not self.sigma > 0.0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.k0 is not None and not self.k0 > 0.0:
            raise ConfigError(f"k0 must be positive, got {self.k0}")
        if self.horizon is not None and self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        for name in ("tol_p0", "tol_conv", "tol_v"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be positive")
        return self

    def resolved_text(self):
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            lines.append(f"{f.name} = {v!r}")
        return "\n".join(lines) + "\n"


def parse_value(key, raw):
    raw = raw.strip()
    if key in _OPT_INT_KEYS:
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"key {key!r} needs an integer, got {raw!r}") from exc
    if key in _FLOAT_KEYS or key in _OPT_FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"key {key!r} needs a number, got {raw!r}") from exc
    raise ConfigError(f"unknown configuration key: {key!r}")


def parse_text(text) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        out[key] = parse_value(key, raw)
    return out


def load(path=None, overrides=None) -> RunConfig:
    """RunConfig from defaults, then file values, then flag overrides."""
    cfg = RunConfig()
    merged = {}
    if path is not None:
        with open(path) as fh:
            merged.update(parse_text(fh.read()))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        merged[key] = parse_value(key, str(value))
    for key, value in merged.items():
        setattr(cfg, key, value)
    return cfg.validate()
