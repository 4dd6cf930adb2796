"""Factorised mean-field equations of motion and their time integration.

Products are factorised as <a s_z> -> <a><s_z> and <a^+ s> -> conj(<a>)<s>.
The equations are used exactly in the printed form

    d<a>/dt   = i (Dc~ a - g s1 - g s2 - eta)
    d<s1>/dt  = i (Da~ s1 + g a z1 + J~ s1 z2)
    d<z1>/dt  = 2 i g (conj(a) s1 - a conj(s1)) - 2 gamma (1 + z1)

(and atom 1 <-> 2), whose steady states are exactly the algebraic
saturated branches of :mod:`ddicav.saturation`.

State vectors are real with layout
``[Re a, Im a, Re s1, Im s1, Re s2, Im s2, z1, z2]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NonConvergenceError, NumericalError
from .params import SystemParams, complex_detunings

INVERSION_SLACK = 1e-6
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class MeanFieldState:
    a: complex = 0j
    sigma1: complex = 0j
    sigma2: complex = 0j
    sigma1z: float = -1.0
    sigma2z: float = -1.0

    @property
    def photon_number(self) -> float:
        return self.a.real**2 + self.a.imag**2

    def to_vector(self) -> np.ndarray:
        return np.array([
            self.a.real, self.a.imag,
            self.sigma1.real, self.sigma1.imag,
            self.sigma2.real, self.sigma2.imag,
            self.sigma1z, self.sigma2z,
        ])

    @classmethod
    def from_vector(cls, x) -> "MeanFieldState":
        x = np.asarray(x, dtype=float)
        return cls(complex(x[0], x[1]), complex(x[2], x[3]), complex(x[4], x[5]),
                   float(x[6]), float(x[7]))

    @classmethod
    def from_branch(cls, branch) -> "MeanFieldState":
        """Symmetric state of a low-excitation or saturated steady state."""
        z = getattr(branch, "sigma_z0", -1.0)
        return cls(branch.a0, branch.sigma0, branch.sigma0, z, z)

    def swapped(self) -> "MeanFieldState":
        return MeanFieldState(self.a, self.sigma2, self.sigma1, self.sigma2z, self.sigma1z)


def _rhs_vector(x, g, dc, da, jt, eta, gamma):
    a = complex(x[0], x[1])
    s1 = complex(x[2], x[3])
    s2 = complex(x[4], x[5])
    z1, z2 = x[6], x[7]
    da_ = 1j * (dc * a - g * (s1 + s2) - eta)
    ds1 = 1j * (da * s1 + g * a * z1 + jt * s1 * z2)
    ds2 = 1j * (da * s2 + g * a * z2 + jt * s2 * z1)
    # 2ig(conj(a)s - a conj(s)) = -4g Im(conj(a) s)
    dz1 = -4.0 * g * (a.conjugate() * s1).imag - 2.0 * gamma * (1.0 + z1)
    dz2 = -4.0 * g * (a.conjugate() * s2).imag - 2.0 * gamma * (1.0 + z2)
    return np.array([da_.real, da_.imag, ds1.real, ds1.imag, ds2.real, ds2.imag, dz1, dz2])


def _coefficients(p: SystemParams):
    cd = complex_detunings(p)
    return p.g, cd.delta_c_tilde, cd.delta_a_tilde, cd.j_tilde, p.eta, p.gamma


def mean_field_rhs(p: SystemParams, s: MeanFieldState) -> MeanFieldState:
    """Time derivative of the mean-field state (same container type)."""
    return MeanFieldState.from_vector(_rhs_vector(s.to_vector(), *_coefficients(p)))


def rhs_vector(p: SystemParams, x) -> np.ndarray:
    return _rhs_vector(np.asarray(x, dtype=float), *_coefficients(p))


def _cblock(c: complex) -> np.ndarray:
    # real 2x2 form of z -> c z
    return np.array([[c.real, -c.imag], [c.imag, c.real]])


def jacobian(p: SystemParams, s: MeanFieldState) -> np.ndarray:
    """Analytic 8x8 real Jacobian of :func:`mean_field_rhs`."""
    g, dc, da, jt, _, gamma = _coefficients(p)
    a, s1, s2, z1, z2 = s.a, s.sigma1, s.sigma2, s.sigma1z, s.sigma2z
    jac = np.zeros((8, 8))
    jac[0:2, 0:2] = _cblock(1j * dc)
    jac[0:2, 2:4] = _cblock(-1j * g)
    jac[0:2, 4:6] = _cblock(-1j * g)

    for row, sk, zk, zo, zcol_own, zcol_other in ((2, s1, z1, z2, 6, 7), (4, s2, z2, z1, 7, 6)):
        jac[row:row + 2, row:row + 2] = _cblock(1j * (da + jt * zo))
        jac[row:row + 2, 0:2] = _cblock(1j * g * zk)
        col = 1j * g * a
        jac[row, zcol_own], jac[row + 1, zcol_own] = col.real, col.imag
        col = 1j * jt * sk
        jac[row, zcol_other], jac[row + 1, zcol_other] = col.real, col.imag

    for zrow, scol, sk in ((6, 2, s1), (7, 4, s2)):
        jac[zrow, 0] = -4.0 * g * sk.imag
        jac[zrow, 1] = 4.0 * g * sk.real
        jac[zrow, scol] = 4.0 * g * a.imag
        jac[zrow, scol + 1] = -4.0 * g * a.real
        jac[zrow, zrow] = -2.0 * gamma
    return jac


def default_t_max(p: SystemParams) -> float:
    rates = [r for r in (p.kappa, p.gamma) if r > 0]
    return 200.0 / min(rates) if rates else 200.0 / p.g


@dataclass(frozen=True)
class RelaxResult:
    state: MeanFieldState
    t: float
    converged: bool
    rhs_norm: float


def relax_to_steady_state(
    p: SystemParams,
    init: MeanFieldState | None = None,
    t_max: float | None = None,
    tol: float = DEFAULT_TOL,
    strict: bool = True,
) -> RelaxResult:
    """Integrate the mean-field equations until the RHS norm drops below ``tol``.

    Uses the adaptive DOP853 embedded Runge-Kutta pair in chunks; the RHS
    norm is checked between chunks.  Raises :class:`NonConvergenceError`
    when ``t_max`` is reached (unless ``strict`` is false) and
    :class:`NumericalError` if an inversion leaves [-1, 1] by more than
    ``INVERSION_SLACK``.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    t_max = default_t_max(p) if t_max is None else float(t_max)
    if t_max <= 0:
        raise ValueError("t_max must be > 0")
    coeffs = _coefficients(p)
    x = (init if init is not None else MeanFieldState()).to_vector()

    def fun(_t, y):
        return _rhs_vector(y, *coeffs)

    def out_of_range(_t, y):
        return 1.0 + INVERSION_SLACK - max(abs(y[6]), abs(y[7]))
    out_of_range.terminal = True

    rates = [r for r in (p.kappa, p.gamma, p.gamma_prime) if r > 0]
    chunk = min(t_max, 5.0 / min(rates) if rates else t_max)
    t = 0.0
    norm = float(np.linalg.norm(fun(t, x)))
    while norm >= tol and t < t_max:
        t_end = min(t + chunk, t_max)
        sol = solve_ivp(fun, (t, t_end), x, method="DOP853", rtol=1e-11, atol=1e-13,
                        events=out_of_range)
        if sol.status == 1:
            raise NumericalError(
                f"inversion left [-1, 1] at t = {sol.t_events[0][0]:.6g}")
        if not sol.success:
            raise NumericalError(f"integrator failed: {sol.message}")
        x = sol.y[:, -1]
        t = t_end
        norm = float(np.linalg.norm(fun(t, x)))
    converged = norm < tol
    state = MeanFieldState.from_vector(x)
    if not converged and strict:
        raise NonConvergenceError(
            f"mean-field relaxation not converged by t = {t:.6g} (|rhs| = {norm:.3e})",
            rhs_norm=norm, state=state)
    return RelaxResult(state, t, converged, norm)


def hysteresis_sweep(
    p: SystemParams,
    delta_c_path: Sequence[float],
    init: MeanFieldState | None = None,
    t_max: float | None = None,
    tol: float = DEFAULT_TOL,
):
    """Quasi-static sweep: each point is relaxed from the previous point's state."""
    out = []
    state = init
    for dc in delta_c_path:
        try:
            res = relax_to_steady_state(p.replace(delta_c=float(dc)), state, t_max, tol)
        except NumericalError as exc:
            exc.point = float(dc)
            raise
        state = res.state
        out.append((float(dc), state))
    return out


def relax_trajectory(p: SystemParams, init: MeanFieldState | None = None,
                     t_max: float | None = None, samples: int = 201):
    """Sampled trajectory ``[(t, MeanFieldState), ...]`` on a uniform time grid."""
    t_max = default_t_max(p) if t_max is None else float(t_max)
    if t_max <= 0 or samples < 1:
        raise ValueError("need t_max > 0 and samples >= 1")
    coeffs = _coefficients(p)
    x0 = (init if init is not None else MeanFieldState()).to_vector()
    t_eval = np.linspace(0.0, t_max, samples)
    sol = solve_ivp(lambda _t, y: _rhs_vector(y, *coeffs), (0.0, t_max), x0,
                    method="DOP853", rtol=1e-10, atol=1e-12, t_eval=t_eval)
    if not sol.success:
        raise NumericalError(f"integrator failed: {sol.message}")
    return [(float(t), MeanFieldState.from_vector(sol.y[:, i])) for i, t in enumerate(sol.t)]
