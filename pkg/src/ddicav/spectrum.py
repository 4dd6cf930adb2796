"""Spectrum container and peak location shared by the semiclassical layers."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np


class Regime(str, Enum):
    low = "low"
    saturated = "saturated"


@dataclass(frozen=True)
class SpectrumPoint:
    delta_c: float
    branches: tuple


@dataclass(frozen=True)
class Spectrum:
    points: tuple
    regime: Regime

    def __len__(self):
        return len(self.points)

    @property
    def delta_c(self) -> np.ndarray:
        return np.array([pt.delta_c for pt in self.points])

    def branch_counts(self) -> np.ndarray:
        return np.array([len(pt.branches) for pt in self.points])

    def photon_number(self) -> np.ndarray:
        """Photon number per point; requires a single-valued spectrum."""
        counts = self.branch_counts()
        if np.any(counts != 1):
            raise ValueError("spectrum is multivalued; use stable_photon_number or branches")
        return np.array([pt.branches[0].photon_number for pt in self.points])

    def stable_photon_number(self, pick: str = "max") -> np.ndarray:
        """Photon number of the highest (or lowest) stable branch per point."""
        select = max if pick == "max" else min
        out = []
        for pt in self.points:
            values = [b.photon_number for b in pt.branches if getattr(b, "stable", True)]
            out.append(select(values) if values else np.nan)
        return np.array(out)


def validate_grid(grid: Sequence[float]) -> np.ndarray:
    arr = np.asarray(grid, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("sweep grid must be a nonempty 1-d sequence")
    if arr.size > 1 and np.any(np.diff(arr) <= 0):
        raise ValueError("sweep grid must be strictly increasing")
    return arr


def find_peaks(x: Sequence[float], y: Sequence[float]):
    """Local maxima of ``y(x)`` refined by a three-point parabola.

    Returns ``[(x_peak, y_peak), ...]`` sorted by decreasing height.  Plateau
    points count once; grid end points are never reported.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    peaks = []
    for i in range(1, len(y) - 1):
        if y[i] > y[i - 1] and y[i] >= y[i + 1]:
            peaks.append(_parabolic_vertex(x[i - 1 : i + 2], y[i - 1 : i + 2]))
    peaks.sort(key=lambda pk: -pk[1])
    return peaks


def _parabolic_vertex(x3, y3):
    (x0, x1, x2), (y0, y1, y2) = x3, y3
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
    if a >= 0:
        return float(x1), float(y1)
    xv = -b / (2 * a)
    c = y1 - a * x1 * x1 - b * x1
    return float(xv), float(a * xv * xv + b * xv + c)


def peak_separation(x, y) -> float:
    """Distance between the two tallest local maxima."""
    peaks = find_peaks(x, y)
    if len(peaks) < 2:
        raise ValueError(f"expected two peaks, found {len(peaks)}")
    (x1, _), (x2, _) = peaks[:2]
    return abs(x2 - x1)
