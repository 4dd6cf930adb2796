"""Dressed states of the effective single-atom model.

The two coupled atoms are replaced by one bright atom at frequency
``omega_a + J`` coupled with strength ``sqrt(2) g``; the dark combination
decouples from the field.  Dressed states of the n-excitation manifold mix
``|e, n-1>`` and ``|g, n>``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .params import SystemParams, complex_detunings


class Branch(str, Enum):
    minus = "minus"
    plus = "plus"


@dataclass(frozen=True)
class DressedLevel:
    n: int
    branch: Branch
    energy: float
    theta_n: float

    @property
    def atom_amplitude(self) -> float:
        """Amplitude on |e, n-1>."""
        if self.branch is Branch.plus:
            return math.cos(self.theta_n / 2)
        return math.sin(self.theta_n / 2)

    @property
    def cavity_amplitude(self) -> float:
        """Amplitude on |g, n>."""
        if self.branch is Branch.plus:
            return math.sin(self.theta_n / 2)
        return -math.cos(self.theta_n / 2)


@dataclass(frozen=True)
class NormalModePair:
    omega_minus: complex
    omega_plus: complex

    @property
    def splitting(self) -> float:
        return self.omega_plus.real - self.omega_minus.real


def mixing_angle(n: int, delta: float, j_ddi: float, g: float = 1.0) -> float:
    """theta_n in (0, pi) with tan(theta_n) = 2 sqrt(2) g sqrt(n) / (delta + J)."""
    if n < 1:
        raise ValueError(f"excitation number must be >= 1, got {n}")
    if g <= 0:
        raise ValueError(f"g must be > 0, got {g}")
    return math.atan2(2.0 * math.sqrt(2.0 * n) * g, delta + j_ddi)


def dressed_energies(n: int, p: SystemParams, omega_c_ref: float = 0.0):
    """Return ``(minus, plus)`` levels of the n-excitation doublet.

    Energies are ``n * omega_c_ref + (delta + J)/2 -/+ sqrt((delta + J)^2 + 8 g^2 n)/2``.
    """
    if n < 1:
        raise ValueError(f"excitation number must be >= 1, got {n}")
    shift = p.delta + p.j_ddi
    half_split = 0.5 * math.sqrt(shift * shift + 8.0 * p.g * p.g * n)
    centre = n * omega_c_ref + 0.5 * shift
    theta = mixing_angle(n, p.delta, p.j_ddi, p.g)
    return (
        DressedLevel(n, Branch.minus, centre - half_split, theta),
        DressedLevel(n, Branch.plus, centre + half_split, theta),
    )


def normal_mode_frequencies(p: SystemParams) -> NormalModePair:
    """Complex normal-mode frequencies of the linearised atom-cavity system.

    Real parts are the resonance positions relative to the pump, imaginary
    parts the widths.  The principal square root is used and the labels are
    swapped if needed so that ``Re(omega_plus) >= Re(omega_minus)``.
    """
    cd = complex_detunings(p)
    atom = cd.delta_a_tilde - cd.j_tilde
    root = cmath.sqrt(8.0 * p.g**2 + (atom - cd.delta_c_tilde) ** 2)
    centre = -0.5 * (atom + cd.delta_c_tilde)
    lo, hi = centre - 0.5 * root, centre + 0.5 * root
    if hi.real < lo.real:
        lo, hi = hi, lo
    return NormalModePair(lo, hi)


def avoided_crossing(p: SystemParams, delta_grid: Sequence[float]):
    """Normal modes across atom-cavity detunings at fixed J and pump detuning."""
    if len(delta_grid) == 0:
        raise ValueError("delta grid must be nonempty")
    return [(float(d), normal_mode_frequencies(p.replace(delta=float(d)))) for d in delta_grid]
