"""Saturated semiclassical steady states, multistability and stability.

With inversion ``-1/(1 + s0)`` the field obeys

    <a>0 = eta / Dc~ / (1 - mu),   mu = 2 g^2 / (Dc~ (Da~ (1 + s0) - J~))

and the saturation parameter ``s0`` solves a cubic obtained by clearing the
denominator of the self-consistency condition.  Two forms of that condition
are available:

``"two_term"`` (default)
    ``s0 |Q|^2 = 2 g^2 eta^2 (1 + s0) (1 + s0 + gp/gamma)``, the two-term
    saturation equation with ``<a^+ a>0`` eliminated.  Its roots are exact
    fixed points of the mean-field equations in :mod:`ddicav.meanfield`.
``"printed"``
    ``s0 |Q|^2 = 2 g^2 eta^2 (1 + s0)^2 (1 + gp/gamma)``, the combined
    closed form.  It agrees with ``"two_term"`` only when ``gp = 0``.

Here ``Q = Dc~ ((Dc - delta + i gamma)(1 + s0) - J~) - 2 g^2``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (ConfigError, MarginalStabilityError, NumericalError,
                     RootPolishError, SingularParameterError)
from .meanfield import MeanFieldState, jacobian, rhs_vector
from .params import SystemParams, complex_detunings
from .spectrum import Regime, Spectrum, SpectrumPoint, validate_grid

FORMS = ("two_term", "printed")
DEFAULT_FORM = "two_term"
ROOT_MERGE_TOL = 1e-9
RESIDUAL_TOL = 1e-10
MARGINAL_TOL = 1e-10
# candidates with |Im| below this (relative) are polished on the real axis
_IMAG_ACCEPT = 1e-6


@dataclass(frozen=True)
class SaturatedBranch:
    s0: float
    a0: complex
    sigma0: complex
    sigma_z0: float
    photon_number: float
    stable: bool | None = None
    mu: complex = 0j


def _check(p: SystemParams, form: str):
    if p.gamma <= 0:
        raise ConfigError("saturation equation needs gamma > 0 (gamma'/gamma diverges)")
    if form not in FORMS:
        raise ConfigError(f"unknown saturation form {form!r}; choose from {FORMS}")


def _q_coefficients(p: SystemParams):
    """Q(s) = alpha s + beta."""
    cd = complex_detunings(p)
    alpha = cd.delta_c_tilde * cd.delta_a_tilde
    beta = cd.delta_c_tilde * (cd.delta_a_tilde - cd.j_tilde) - 2.0 * p.g**2
    return alpha, beta


def saturation_polynomial(p: SystemParams, form: str = DEFAULT_FORM) -> np.ndarray:
    """Real coefficients (ascending powers of s0) of the cleared cubic."""
    _check(p, form)
    alpha, beta = _q_coefficients(p)
    lhs = np.array([0.0, abs(beta) ** 2, 2.0 * (alpha * beta.conjugate()).real, abs(alpha) ** 2])
    k = 2.0 * p.g**2 * p.eta**2
    r = p.gamma_prime / p.gamma
    if form == "two_term":
        rhs = k * np.array([1.0 + r, 2.0 + r, 1.0, 0.0])
    else:
        rhs = k * (1.0 + r) * np.array([1.0, 2.0, 1.0, 0.0])
    return lhs - rhs


def saturation_map(p: SystemParams, s0: float, form: str = DEFAULT_FORM) -> float:
    """Right-hand side F(s0) of the un-cleared equation s0 = F(s0)."""
    _check(p, form)
    alpha, beta = _q_coefficients(p)
    q2 = abs(alpha * s0 + beta) ** 2
    k = 2.0 * p.g**2 * p.eta**2
    r = p.gamma_prime / p.gamma
    if form == "two_term":
        return k * (1.0 + s0) * (1.0 + s0 + r) / q2
    return k * (1.0 + s0) ** 2 * (1.0 + r) / q2


def relative_residual(p: SystemParams, s0: float, form: str = DEFAULT_FORM) -> float:
    rhs = saturation_map(p, s0, form)
    scale = max(abs(s0), abs(rhs))
    return 0.0 if scale == 0 else abs(s0 - rhs) / scale


def two_term_residual(p: SystemParams, branch: SaturatedBranch) -> float:
    """Residual of the two-term equation with the branch's own photon number."""
    cd = complex_detunings(p)
    s = branch.s0
    d2 = abs(cd.delta_a_tilde * (1.0 + s) - cd.j_tilde) ** 2
    n = branch.photon_number
    rhs = 2.0 * p.g**2 * (1 + s) ** 2 * n / d2 + 2.0 * p.g**2 * (1 + s) * n * p.gamma_prime / (d2 * p.gamma)
    scale = max(abs(s), abs(rhs))
    return 0.0 if scale == 0 else abs(s - rhs) / scale


def _polish(coeffs: np.ndarray, x: float, iters: int = 50) -> float:
    deriv = P.polyder(coeffs)
    for _ in range(iters):
        f = P.polyval(x, coeffs)
        df = P.polyval(x, deriv)
        if df == 0 or not np.isfinite(df):
            break
        step = f / df
        x_new = x - step
        if not np.isfinite(x_new):
            break
        if abs(step) <= 4e-16 * max(1.0, abs(x_new)):
            return x_new
        x = x_new
    return x


def saturation_roots(p: SystemParams, form: str = DEFAULT_FORM) -> list[float]:
    """All nonnegative real roots s0 of the saturation cubic, ascending.

    Companion-matrix roots are polished by Newton iteration on the cubic;
    roots within ``ROOT_MERGE_TOL`` are merged and tiny negative roots
    (>= -1e-12) are clamped to zero.  Each root is checked against the
    un-cleared equation.
    """
    coeffs = saturation_polynomial(p, form)
    if p.eta == 0:
        return [0.0]
    trimmed = np.trim_zeros(coeffs, "b")
    candidates = P.polyroots(trimmed) if trimmed.size > 1 else np.array([])
    roots = []
    for z in np.atleast_1d(candidates):
        re, im = float(np.real(z)), float(np.imag(z))
        if abs(im) > _IMAG_ACCEPT * max(1.0, abs(re)):
            continue
        x = _polish(trimmed, re)
        if x < -1e-12:
            continue
        x = max(x, 0.0)
        res = relative_residual(p, x, form)
        if res > RESIDUAL_TOL:
            if im == 0.0:
                raise RootPolishError(
                    f"saturation root {x:.12g} has residual {res:.3e} after polishing")
            continue  # genuine complex pair near a fold
        roots.append(x)
    roots.sort()
    merged = []
    for x in roots:
        if merged and abs(x - merged[-1]) <= ROOT_MERGE_TOL * max(1.0, abs(x)):
            continue
        merged.append(x)
    return merged


def branch_from_root(p: SystemParams, s0: float) -> SaturatedBranch:
    if s0 < 0:
        raise ValueError(f"s0 must be >= 0, got {s0}")
    cd = complex_detunings(p)
    atom = cd.delta_a_tilde * (1.0 + s0) - cd.j_tilde
    if cd.delta_c_tilde == 0 or atom == 0:
        raise SingularParameterError("mu is singular (lossless resonance)")
    mu = 2.0 * p.g**2 / (cd.delta_c_tilde * atom)
    if mu == 1:
        raise SingularParameterError("1 - mu vanishes")
    a0 = p.eta / cd.delta_c_tilde / (1.0 - mu)
    sigma0 = p.g * a0 / atom
    return SaturatedBranch(
        s0=float(s0),
        a0=a0,
        sigma0=sigma0,
        sigma_z0=-1.0 / (1.0 + s0),
        photon_number=a0.real**2 + a0.imag**2,
        mu=mu,
    )


def fixed_point_residual(p: SystemParams, branch) -> float:
    """Norm of the mean-field RHS at the branch's symmetric state."""
    return float(np.linalg.norm(rhs_vector(p, MeanFieldState.from_branch(branch).to_vector())))


def stability_spectrum(p: SystemParams, branch) -> np.ndarray:
    return np.linalg.eigvals(jacobian(p, MeanFieldState.from_branch(branch)))


def classify_stability(p: SystemParams, b: SaturatedBranch, fixed_point_tol: float = 1e-8) -> SaturatedBranch:
    """Set ``stable`` from the mean-field Jacobian eigenvalues."""
    res = fixed_point_residual(p, b)
    if res > fixed_point_tol:
        raise NumericalError(f"branch s0={b.s0:.6g} is not a mean-field fixed point (|rhs|={res:.3e})")
    growth = stability_spectrum(p, b).real
    if np.any(np.abs(growth) <= MARGINAL_TOL):
        raise MarginalStabilityError(
            f"marginal eigenvalue at s0={b.s0:.6g} (max Re = {growth.max():.3e})")
    return replace(b, stable=bool(np.all(growth < -MARGINAL_TOL)))


def steady_states(p: SystemParams, form: str = DEFAULT_FORM, classify: bool = True) -> list[SaturatedBranch]:
    branches = [branch_from_root(p, s) for s in saturation_roots(p, form)]
    if classify:
        branches = [classify_stability(p, b) for b in branches]
    return branches


def spectrum_saturated(p: SystemParams, delta_c_grid: Sequence[float], form: str = DEFAULT_FORM,
                       classify: bool = True) -> Spectrum:
    """Saturated spectrum; ``classify`` requires the default two-term form."""
    grid = validate_grid(delta_c_grid)
    _check(p, form)
    if classify and form != DEFAULT_FORM:
        raise ConfigError("stability classification needs the two-term form")
    points = []
    for dc in grid:
        try:
            branches = steady_states(p.replace(delta_c=float(dc)), form, classify)
        except NumericalError as exc:
            exc.point = float(dc)
            raise
        points.append(SpectrumPoint(float(dc), tuple(branches)))
    return Spectrum(tuple(points), Regime.saturated)


def root_count(p: SystemParams, form: str = DEFAULT_FORM) -> int:
    return len(saturation_roots(p, form))


def fold_points(p: SystemParams, delta_c_grid: Sequence[float], form: str = DEFAULT_FORM,
                xtol: float = 1e-10) -> list[float]:
    """Pump detunings where the number of steady states changes.

    Brackets are located on the grid and refined by bisection on the root
    count.
    """
    grid = validate_grid(delta_c_grid)
    counts = [root_count(p.replace(delta_c=float(dc)), form) for dc in grid]
    folds = []
    for i in range(len(grid) - 1):
        if counts[i] == counts[i + 1]:
            continue
        lo, hi = float(grid[i]), float(grid[i + 1])
        c_lo = counts[i]
        while hi - lo > xtol:
            mid = 0.5 * (lo + hi)
            if root_count(p.replace(delta_c=mid), form) == c_lo:
                lo = mid
            else:
                hi = mid
        folds.append(0.5 * (lo + hi))
    return folds


def multistable_windows(p: SystemParams, delta_c_grid: Sequence[float], form: str = DEFAULT_FORM):
    """Grid intervals ``(first, last)`` where three steady states coexist."""
    grid = validate_grid(delta_c_grid)
    counts = np.array([root_count(p.replace(delta_c=float(dc)), form) for dc in grid])
    windows = []
    start = None
    for dc, c in zip(grid, counts):
        if c == 3 and start is None:
            start = last = float(dc)
        elif c == 3:
            last = float(dc)
        elif start is not None:
            windows.append((start, last))
            start = None
    if start is not None:
        windows.append((start, last))
    return windows
