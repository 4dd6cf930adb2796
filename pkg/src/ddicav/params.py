"""Physical parameter set, complex detunings and the geometric DDI formula.

All rates are in units of the atom-cavity coupling ``g`` by convention
(``g = 1`` unless stated otherwise).
"""
from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import ConfigError

PARAM_KEYS = ("g", "kappa", "gamma", "gamma_prime", "eta", "delta_c", "delta", "j_ddi")
# eta**2 / kappa**2, the pump measure used for the saturated figures
PUMP_RATIO_KEY = "pump_ratio"


@dataclass(frozen=True)
class SystemParams:
    """One simulation instance.

    ``delta_c`` is the pump-cavity detuning, ``delta`` the atom-cavity
    detuning; the pump-atom detuning is derived as ``delta_c - delta``.
    """

    g: float = 1.0
    kappa: float = 0.12
    gamma: float = 0.0767
    gamma_prime: float = 0.05
    eta: float = 0.12
    delta_c: float = 0.0
    delta: float = 0.0
    j_ddi: float = 0.0

    def __post_init__(self):
        for key in PARAM_KEYS:
            value = getattr(self, key)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ConfigError(f"{key} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ConfigError(f"{key} must be finite, got {value!r}")
            object.__setattr__(self, key, float(value))
        # g = 0 is the decoupled (empty-cavity) limit; dressed states need g > 0
        for key in ("g", "kappa", "gamma", "gamma_prime", "eta"):
            if getattr(self, key) < 0:
                raise ConfigError(f"{key} must be >= 0, got {getattr(self, key)}")

    @property
    def delta_a(self) -> float:
        return self.delta_c - self.delta

    @property
    def pump_ratio(self) -> float:
        """eta**2 / kappa**2 (infinite for a lossless cavity)."""
        if self.kappa == 0:
            return math.inf
        return self.eta**2 / self.kappa**2

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return {key: getattr(self, key) for key in PARAM_KEYS}


@dataclass(frozen=True)
class ComplexDetunings:
    delta_a_tilde: complex
    delta_c_tilde: complex
    j_tilde: complex


def complex_detunings(p: SystemParams) -> ComplexDetunings:
    return ComplexDetunings(
        delta_a_tilde=complex(p.delta_a, p.gamma),
        delta_c_tilde=complex(p.delta_c, p.kappa),
        j_tilde=complex(p.j_ddi, -p.gamma_prime),
    )


@dataclass(frozen=True)
class DdiGeometry:
    """Two parallel dipoles a distance ``r`` apart at angle ``phi`` to their axis."""

    gamma0: float
    omega_a: float
    r: float
    phi: float = math.pi / 2
    c_light: float = 1.0

    def __post_init__(self):
        if not self.r > 0:
            raise ConfigError(f"interatomic distance must be > 0, got {self.r}")
        for key in ("gamma0", "omega_a", "c_light"):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} must be > 0, got {getattr(self, key)}")


def ddi_strength(geom: DdiGeometry) -> float:
    """J = 3/4 * Gamma0 c^3 / (omega_a^3 r^3) * (1 - 3 cos^2 phi)."""
    if not geom.r > 0:
        raise ConfigError(f"interatomic distance must be > 0, got {geom.r}")
    scale = geom.gamma0 * (geom.c_light / (geom.omega_a * geom.r)) ** 3
    return 0.75 * scale * (1.0 - 3.0 * math.cos(geom.phi) ** 2)


def _coerce(key: str, raw) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"value for {key!r} is not a number: {raw!r}") from None


def read_config_file(path: str | Path) -> dict[str, float]:
    """Read a flat ``key = value`` file (``#`` comments allowed)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string("[params]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from None
    return {key: _coerce(key, value) for key, value in parser["params"].items()}


def parse_overrides(items) -> dict[str, float]:
    """Parse ``key=value`` strings from repeated ``--set`` flags."""
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        out[key.strip()] = _coerce(key.strip(), value.strip())
    return out


def resolve_params(values: Mapping[str, float], base: SystemParams | None = None) -> SystemParams:
    """Build parameters from ``base`` updated by ``values``.

    ``pump_ratio`` (eta^2/kappa^2) is applied after the other keys and fixes
    eta from the resolved kappa; giving both ``eta`` and ``pump_ratio`` is an
    error.
    """
    base = base if base is not None else SystemParams()
    known = set(PARAM_KEYS) | {PUMP_RATIO_KEY}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"unknown parameter(s): {', '.join(unknown)}")
    fields = {k: v for k, v in values.items() if k in PARAM_KEYS}
    p = base.replace(**fields)
    if PUMP_RATIO_KEY in values:
        if "eta" in values:
            raise ConfigError("give either eta or pump_ratio, not both")
        ratio = values[PUMP_RATIO_KEY]
        if ratio < 0:
            raise ConfigError(f"pump_ratio must be >= 0, got {ratio}")
        p = p.replace(eta=math.sqrt(ratio) * p.kappa)
    return p
