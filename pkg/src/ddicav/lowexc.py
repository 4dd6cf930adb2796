"""Low-excitation (linear response) steady state and transmission spectrum.

Both atoms are kept near the ground state (inversion -1), so atoms and
field behave as coupled damped harmonic oscillators.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SingularParameterError
from .params import SystemParams, complex_detunings
from .spectrum import Regime, Spectrum, SpectrumPoint, validate_grid

DEFAULT_GRID = (-5.0, 5.0, 2001)


@dataclass(frozen=True)
class LowExcSteadyState:
    a0: complex
    sigma0: complex
    photon_number: float
    v: complex

    # both atoms are driven identically, so a single coherence is stored
    @property
    def sigma1(self) -> complex:
        return self.sigma0

    @property
    def sigma2(self) -> complex:
        return self.sigma0


def coupling_factor_v(p: SystemParams) -> complex:
    """v = 2 g^2 / (D_c (D_a - J~)) with the complex detunings."""
    cd = complex_detunings(p)
    atom = cd.delta_a_tilde - cd.j_tilde
    if cd.delta_c_tilde == 0 or atom == 0:
        raise SingularParameterError("coupling factor v is singular (lossless resonance)")
    return 2.0 * p.g**2 / (cd.delta_c_tilde * atom)


def steady_state_low(p: SystemParams) -> LowExcSteadyState:
    cd = complex_detunings(p)
    v = coupling_factor_v(p)
    if v == 1:
        raise SingularParameterError("1 - v vanishes: undamped normal-mode resonance")
    a0 = p.eta / cd.delta_c_tilde / (1.0 - v)
    # g <a> / (D_a - J~) == eta v / (2 g (1 - v)), finite at g = 0
    sigma0 = p.g * a0 / (cd.delta_a_tilde - cd.j_tilde)
    photon_number = a0.real**2 + a0.imag**2
    return LowExcSteadyState(a0=a0, sigma0=sigma0, photon_number=photon_number, v=v)


def spectrum_low(p: SystemParams, delta_c_grid: Sequence[float]) -> Spectrum:
    grid = validate_grid(delta_c_grid)
    points = []
    for dc in grid:
        try:
            state = steady_state_low(p.replace(delta_c=float(dc)))
        except SingularParameterError as exc:
            raise SingularParameterError(str(exc), point=float(dc)) from exc
        points.append(SpectrumPoint(float(dc), (state,)))
    return Spectrum(tuple(points), Regime.low)


def default_grid(start=DEFAULT_GRID[0], stop=DEFAULT_GRID[1], count=DEFAULT_GRID[2]) -> np.ndarray:
    return np.linspace(start, stop, count)
