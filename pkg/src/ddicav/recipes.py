"""Run configurations and the figure-reproduction recipes."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigError
from .params import SystemParams

SWEEP_AXES = ("delta_c", "delta", "j_ddi", "eta")

# decays of the low-excitation figures: (eta, kappa, gamma, gamma') in units of g
LOW_EXC_DECAYS = dict(eta=0.12, kappa=0.12, gamma=0.0767, gamma_prime=0.05)

# values the captions leave open
FIGURE_DEFAULTS = {
    1: {"j_ddi": (0.0, 1.0, 2.0)},
    2: {"delta": (1.0, 0.0, -1.0)},
    3: {"delta_a": (-1.0, 0.0, 1.0), "delta_b": (-2.0, -1.0, 0.0, 1.0)},
    4: {"pump_ratio": (0.25, 1.0, 2.0, 4.0)},
    5: {"delta": (0.0, 1.0, 3.0, 5.0)},
    6: {"j_ddi": (0.0, 0.5, 1.0, 5.0, 20.0)},
}


class RunRegime(str, Enum):
    low = "low"
    saturated = "saturated"
    oracle = "oracle"
    dressed = "dressed"
    avoided_crossing = "avoided-crossing"
    bistability = "bistability"
    relax = "relax"
    hysteresis = "hysteresis"


@dataclass(frozen=True)
class Sweep:
    axis: str = "delta_c"
    start: float = -5.0
    stop: float = 5.0
    count: int = 2001

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"unknown sweep axis {self.axis!r}; choose from {SWEEP_AXES}")
        if int(self.count) != self.count or self.count < 1:
            raise ConfigError(f"sweep count must be an integer >= 1, got {self.count}")
        if self.start > self.stop:
            raise ConfigError(f"sweep start {self.start} exceeds stop {self.stop}")
        if self.count > 1 and self.start == self.stop:
            raise ConfigError("a multi-point sweep needs start < stop")

    def grid(self) -> np.ndarray:
        if self.count == 1:
            return np.array([float(self.start)])
        return np.linspace(self.start, self.stop, int(self.count))


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    regime: RunRegime
    sweep: Sweep = Sweep()
    output: str | None = None
    fmt: str = "csv"
    label: str = ""
    options: dict = field(default_factory=dict)
    filled: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.fmt!r}")


def _low(label, **kw):
    p = SystemParams(**{**LOW_EXC_DECAYS, **kw})
    return RunConfig(p, RunRegime.low, Sweep("delta_c", -5.0, 5.0, 2001), label=label)


def _saturated(label, **kw):
    pump = kw.pop("pump_ratio")
    p = SystemParams(eta=0.0, **kw)
    p = p.replace(eta=float(np.sqrt(pump)) * p.kappa)
    return RunConfig(p, RunRegime.saturated, Sweep("delta_c", -5.0, 5.0, 1001), label=label)


def figure_recipe(n: int) -> list[RunConfig]:
    """Ready-to-run configurations for figure ``n`` (1..6).

    Caption values are used verbatim; open values come from
    ``FIGURE_DEFAULTS`` and are recorded in each config's ``filled``.
    """
    if n not in FIGURE_DEFAULTS:
        raise ConfigError(f"figure number must be in 1..6, got {n!r}")
    filled = {k: list(v) for k, v in FIGURE_DEFAULTS[n].items()}
    configs = []
    if n == 1:
        configs = [_low(f"J={j:g}", delta=0.0, j_ddi=j) for j in FIGURE_DEFAULTS[1]["j_ddi"]]
    elif n == 2:
        p = SystemParams(**LOW_EXC_DECAYS, j_ddi=1.0)
        configs.append(RunConfig(p, RunRegime.avoided_crossing, Sweep("delta", -4.0, 4.0, 401),
                                 label="avoided-crossing"))
        configs += [_low(f"delta={d:g}", delta=d, j_ddi=1.0) for d in FIGURE_DEFAULTS[2]["delta"]]
    elif n == 3:
        decays = {**LOW_EXC_DECAYS, "gamma_prime": 0.0}
        configs += [RunConfig(SystemParams(**decays, delta=d, j_ddi=0.0), RunRegime.low,
                              Sweep("delta_c", -5.0, 5.0, 2001), label=f"a:delta={d:g}")
                    for d in FIGURE_DEFAULTS[3]["delta_a"]]
        configs += [_low(f"b:delta={d:g}", delta=d, j_ddi=1.0) for d in FIGURE_DEFAULTS[3]["delta_b"]]
    elif n == 4:
        configs = [_saturated(f"pump_ratio={r:g}", pump_ratio=r, j_ddi=0.5, kappa=0.1, gamma=0.1,
                              delta=0.0, gamma_prime=0.01)
                   for r in FIGURE_DEFAULTS[4]["pump_ratio"]]
    elif n == 5:
        configs = [_saturated(f"delta={d:g}", pump_ratio=4.0, j_ddi=0.0, kappa=0.1, gamma=0.1,
                              gamma_prime=0.1, delta=d)
                   for d in FIGURE_DEFAULTS[5]["delta"]]
    elif n == 6:
        configs = [_saturated(f"J={j:g}", pump_ratio=4.0, delta=0.0, kappa=0.1, gamma=0.1,
                              gamma_prime=0.1, j_ddi=j)
                   for j in FIGURE_DEFAULTS[6]["j_ddi"]]
    return [RunConfig(c.params, c.regime, c.sweep, c.output, c.fmt, c.label, c.options,
                      {"figure": n, **filled}) for c in configs]
