"""Exact quantum steady state of the driven two-atom cavity master equation.

Hilbert space: Fock states 0..n_max of the cavity times two two-level atoms,
ordered photon-major, then atom 1, then atom 2.  A basis index is
``4 * n + 2 * e1 + e2`` with ``e_k = 1`` for the excited atom.

Density matrices are vectorised row-major (``rho.reshape(-1)``), so that
``vec(A rho B) = kron(A, B.T) vec(rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConfigError, DegenerateNullSpaceError, NumericalError
from .params import SystemParams

NULL_SPACE_TOL = 1e-8
DEFAULT_N_MAX = 12
STRONG_PUMP_N_MAX = 20


@dataclass(frozen=True)
class HilbertSpec:
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ConfigError(f"n_max must be an integer >= 1, got {self.n_max}")

    @property
    def dim(self) -> int:
        return 4 * (self.n_max + 1)


class Observable(str, Enum):
    photon_number = "photon_number"
    sigma1z = "sigma1z"
    sigma2z = "sigma2z"
    a_amp = "a_amp"


@dataclass(frozen=True)
class Operators:
    a: sp.csr_matrix
    sigma1: sp.csr_matrix
    sigma2: sp.csr_matrix
    eye: sp.csr_matrix


@lru_cache(maxsize=8)
def operators(h: HilbertSpec) -> Operators:
    n = h.n_max + 1
    a_field = sp.diags(np.sqrt(np.arange(1, n, dtype=float)), 1, shape=(n, n))
    lower = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))  # |g><e|, g = index 0
    i2 = sp.identity(2, format="csr")
    i_f = sp.identity(n, format="csr")
    return Operators(
        a=sp.kron(sp.kron(a_field, i2), i2, format="csr"),
        sigma1=sp.kron(sp.kron(i_f, lower), i2, format="csr"),
        sigma2=sp.kron(sp.kron(i_f, i2), lower, format="csr"),
        eye=sp.identity(h.dim, format="csr"),
    )


def build_hamiltonian_sparse(p: SystemParams, h: HilbertSpec) -> sp.csr_matrix:
    ops = operators(h)
    a, s1, s2 = ops.a, ops.sigma1, ops.sigma2
    ad, s1d, s2d = a.getH(), s1.getH(), s2.getH()
    ham = -p.delta_c * (ad @ a)
    for s, sd in ((s1, s1d), (s2, s2d)):
        ham = ham - p.delta_a * (sd @ s) + p.g * (ad @ s + a @ sd)
    # Hermitian exchange form J (s1^+ s2 + s1 s2^+)
    ham = ham + p.j_ddi * (s1d @ s2 + s1 @ s2d) + p.eta * (a + ad)
    return ham.tocsr()


def build_hamiltonian(p: SystemParams, h: HilbertSpec) -> np.ndarray:
    return build_hamiltonian_sparse(p, h).toarray()


def _dissipator(rate: float, A, B, eye) -> sp.csr_matrix:
    """rate * (2 A rho B^+ - B^+ A rho - rho B^+ A) as a superoperator."""
    bda = B.getH() @ A
    return rate * (2.0 * sp.kron(A, B.conj()) - sp.kron(bda, eye) - sp.kron(eye, bda.T))


def build_liouvillian_sparse(p: SystemParams, h: HilbertSpec) -> sp.csr_matrix:
    ops = operators(h)
    eye = ops.eye
    ham = build_hamiltonian_sparse(p, h)
    liou = -1j * (sp.kron(ham, eye) - sp.kron(eye, ham.T))
    if p.kappa:
        liou = liou + _dissipator(p.kappa, ops.a, ops.a, eye)
    if p.gamma:
        for s in (ops.sigma1, ops.sigma2):
            liou = liou + _dissipator(p.gamma, s, s, eye)
    if p.gamma_prime:
        liou = liou + _dissipator(p.gamma_prime, ops.sigma1, ops.sigma2, eye)
        liou = liou + _dissipator(p.gamma_prime, ops.sigma2, ops.sigma1, eye)
    return sp.csr_matrix(liou)


def build_liouvillian(p: SystemParams, h: HilbertSpec) -> np.ndarray:
    return build_liouvillian_sparse(p, h).toarray()


def trace_row(h: HilbertSpec) -> np.ndarray:
    row = np.zeros(h.dim * h.dim)
    row[np.arange(h.dim) * (h.dim + 1)] = 1.0
    return row


@dataclass(frozen=True)
class DensityMatrix:
    elements: np.ndarray
    spec: HilbertSpec

    def check(self, herm_tol=1e-12, trace_tol=1e-10, pos_tol=1e-10):
        rho = self.elements
        if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
            raise NumericalError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > trace_tol:
            raise NumericalError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(rho).min() < -pos_tol:
            raise NumericalError("density matrix has negative eigenvalues")
        return self


def steady_state_quantum(p: SystemParams, h: HilbertSpec | None = None) -> DensityMatrix:
    """Unique steady state via a bordered sparse solve.

    One population equation (redundant by trace preservation) is replaced by
    the trace condition.  The replaced system is singular exactly when the
    null space is degenerate; this is detected from the LU factorisation and
    a 1-norm condition estimate.
    """
    h = h or HilbertSpec()
    if p.kappa <= 0 and p.gamma <= 0:
        raise ConfigError("the quantum steady state needs kappa > 0 or gamma > 0")
    dim = h.dim
    liou = build_liouvillian_sparse(p, h).tolil()
    liou[0, :] = trace_row(h)
    system = liou.tocsc()
    rhs = np.zeros(dim * dim, dtype=complex)
    rhs[0] = 1.0
    try:
        lu = spla.splu(system)
    except RuntimeError as exc:
        raise DegenerateNullSpaceError(f"Liouvillian null space is degenerate ({exc})") from None
    inv = spla.LinearOperator(system.shape, matvec=lu.solve,
                              rmatvec=lambda x: lu.solve(x, trans="H"), dtype=complex)
    sigma_min = 1.0 / spla.onenormest(inv)
    if sigma_min < NULL_SPACE_TOL * spla.norm(system, 1):
        raise DegenerateNullSpaceError(
            f"Liouvillian null space is degenerate (relative smallest singular value ~ "
            f"{sigma_min / spla.norm(system, 1):.2e})")
    vec = lu.solve(rhs)
    # one refinement step; small populations otherwise carry ~1e-13 absolute noise
    vec = vec + lu.solve(rhs - system @ vec)
    rho = vec.reshape(dim, dim)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    return DensityMatrix(rho, h).check()


def liouvillian_residual(p: SystemParams, rho: DensityMatrix) -> float:
    return float(np.linalg.norm(build_liouvillian_sparse(p, rho.spec) @ rho.elements.reshape(-1)))


def expectation(rho: DensityMatrix, which):
    which = Observable(which)
    ops = operators(rho.spec)
    if which is Observable.photon_number:
        op = ops.a.getH() @ ops.a
    elif which is Observable.sigma1z:
        op = ops.sigma1.getH() @ ops.sigma1 - ops.sigma1 @ ops.sigma1.getH()
    elif which is Observable.sigma2z:
        op = ops.sigma2.getH() @ ops.sigma2 - ops.sigma2 @ ops.sigma2.getH()
    else:
        op = ops.a
    value = (op @ rho.elements).trace()
    if which is Observable.a_amp:
        return complex(value)
    return float(np.real(value))


def fock_tail(rho: DensityMatrix, top: int = 1) -> float:
    """Population of the highest ``top`` Fock levels (truncation diagnostic)."""
    diag = np.real(np.diag(rho.elements)).reshape(rho.spec.n_max + 1, 4).sum(axis=1)
    return float(diag[-top:].sum())


def photon_number(p: SystemParams, n_max: int = DEFAULT_N_MAX) -> float:
    return expectation(steady_state_quantum(p, HilbertSpec(n_max)), Observable.photon_number)
