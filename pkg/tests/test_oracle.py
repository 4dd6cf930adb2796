import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddicav.dressed import dressed_energies
from ddicav.errors import ConfigError, DegenerateNullSpaceError, NumericalError
from ddicav.lowexc import steady_state_low
from ddicav.oracle import (DensityMatrix, HilbertSpec, Observable, build_hamiltonian,
                           build_liouvillian, build_liouvillian_sparse, expectation, fock_tail,
                           liouvillian_residual, operators, photon_number, steady_state_quantum,
                           trace_row, STRONG_PUMP_N_MAX)
from ddicav.params import SystemParams

FIG1 = SystemParams(kappa=0.12, gamma=0.0767, gamma_prime=0.05, eta=0.12)
SMALL = HilbertSpec(3)

params = st.builds(
    lambda dc, d, j, k, gm, gp, eta, g: SystemParams(delta_c=dc, delta=d, j_ddi=j, kappa=k, gamma=gm,
                                                     gamma_prime=gp, eta=eta, g=g),
    st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 1), st.floats(0, 1),
    st.floats(0, 1), st.floats(0, 1), st.floats(0, 2))


def vec(rho):
    return np.asarray(rho).reshape(-1)


def test_dimensions_and_ordering():
    h = HilbertSpec(4)
    assert h.dim == 20
    ops = operators(h)
    # index 4 n + 2 e1 + e2
    basis = np.zeros(h.dim)
    basis[4 * 2 + 2 * 1 + 0] = 1.0
    out = ops.a @ basis
    assert np.flatnonzero(out).tolist() == [4 * 1 + 2]
    assert out[6] == pytest.approx(np.sqrt(2))
    assert np.flatnonzero(ops.sigma1 @ basis).tolist() == [8]
    assert not np.any(ops.sigma2 @ basis)
    with pytest.raises(ConfigError):
        HilbertSpec(0)


def test_zero_hamiltonian():
    p = SystemParams(g=0.0, eta=0.0, j_ddi=0.0, delta_c=0.0, delta=0.0)
    assert not np.any(build_hamiltonian(p, SMALL))


@given(p=params)
@settings(max_examples=30)
def test_hamiltonian_hermitian(p):
    h = build_hamiltonian(p, SMALL)
    assert np.array_equal(h, h.conj().T)


@pytest.mark.parametrize("delta,j", [(0.0, 0.0), (1.0, 0.5), (-2.0, 1.5)])
def test_single_excitation_matches_dressed(delta, j):
    dc = -0.4
    p = SystemParams(delta=delta, j_ddi=j, delta_c=dc, eta=0.0)
    h = build_hamiltonian(p, SMALL)
    block = h[np.ix_([4, 2, 1], [4, 2, 1])]
    eig = np.linalg.eigvalsh(block)
    want = [lv.energy for lv in dressed_energies(1, p, omega_c_ref=-dc)]
    dark = delta - j - dc
    for e in want + [dark]:
        assert np.min(np.abs(eig - e)) <= 1e-10


@given(p=params)
@settings(max_examples=25)
def test_trace_preservation(p):
    liou = build_liouvillian(p, SMALL)
    assert np.max(np.abs(trace_row(SMALL) @ liou)) <= 1e-12


@given(p=params)
@settings(max_examples=25)
def test_hermiticity_preservation(p):
    rng = np.random.default_rng(7)
    x = rng.normal(size=(SMALL.dim, SMALL.dim)) + 1j * rng.normal(size=(SMALL.dim, SMALL.dim))
    x = x + x.conj().T
    y = (build_liouvillian_sparse(p, SMALL) @ vec(x)).reshape(SMALL.dim, SMALL.dim)
    assert np.max(np.abs(y - y.conj().T)) <= 1e-12 * max(1.0, np.abs(y).max())


def test_collective_term_vanishes_at_zero_rate():
    p = FIG1.replace(delta_c=0.3, j_ddi=0.8)
    with_gp = build_liouvillian(p, SMALL)
    without = build_liouvillian(p.replace(gamma_prime=0.0), SMALL)
    unit = build_liouvillian(p.replace(gamma_prime=1.0), SMALL) - without
    assert np.max(np.abs(with_gp - without - p.gamma_prime * unit)) <= 1e-14
    assert np.any(unit)


def test_vacuum_is_null_vector():
    p = FIG1.replace(eta=0.0, j_ddi=1.0, delta_c=0.4)
    rho = np.zeros((SMALL.dim, SMALL.dim))
    rho[0, 0] = 1.0
    assert np.max(np.abs(build_liouvillian(p, SMALL) @ vec(rho))) <= 1e-12


def test_density_matrix_invariants_and_residual():
    p = FIG1.replace(delta_c=1.3, j_ddi=1.0)
    rho = steady_state_quantum(p, HilbertSpec(8))
    r = rho.elements
    assert np.max(np.abs(r - r.conj().T)) <= 1e-12
    assert abs(np.trace(r) - 1) <= 1e-10
    assert np.linalg.eigvalsh(r).min() >= -1e-10
    assert liouvillian_residual(p, rho) <= 1e-12


def test_empty_cavity_lorentzian():
    for dc in (-2.0, 0.0, 0.5):
        p = FIG1.replace(g=0.0, delta_c=dc)
        rho = steady_state_quantum(p, HilbertSpec(STRONG_PUMP_N_MAX))
        assert fock_tail(rho) < 1e-10
        want = p.eta**2 / (dc**2 + p.kappa**2)
        assert abs(expectation(rho, "photon_number") - want) <= 1e-6 * want


def test_vacuum_expectations():
    rho = steady_state_quantum(FIG1.replace(eta=0.0), SMALL)
    assert abs(expectation(rho, Observable.photon_number)) <= 1e-14
    assert expectation(rho, "sigma1z") == pytest.approx(-1.0, abs=1e-14)
    assert expectation(rho, "a_amp") == 0


def test_atom_exchange_symmetry():
    p = FIG1.replace(delta_c=-1.2, j_ddi=0.7, eta=0.3)
    h = HilbertSpec(8)
    rho = steady_state_quantum(p, h).elements
    assert abs(expectation(DensityMatrix(rho, h), "sigma1z")
               - expectation(DensityMatrix(rho, h), "sigma2z")) <= 1e-10
    # permutation exchanging the two atom labels: 4n + 2e1 + e2 -> 4n + 2e2 + e1
    perm = np.arange(h.dim).reshape(-1, 4)[:, [0, 2, 1, 3]].reshape(-1)
    assert np.max(np.abs(rho[np.ix_(perm, perm)] - rho)) <= 1e-10


def test_weak_drive_coherence_ratio():
    p = FIG1.replace(eta=0.01)
    for dc in (-1.5, 0.0, 1.4, 3.0):
        rho = steady_state_quantum(p.replace(delta_c=dc), HilbertSpec(8))
        ratio = abs(expectation(rho, "a_amp")) ** 2 / expectation(rho, "photon_number")
        assert 0.95 <= ratio <= 1.0 + 1e-9


def test_discrepancy_grows_with_drive():
    devs = []
    for eta in (0.01, 0.05, 0.12):
        p = FIG1.replace(eta=eta, delta_c=0.0)
        q = photon_number(p, 12)
        devs.append(abs(q - steady_state_low(p).photon_number) / steady_state_low(p).photon_number)
    assert devs[0] < devs[1] < devs[2]


def test_truncation_convergence_weak_drive():
    p = FIG1.replace(eta=0.01, delta_c=1.4)
    a, b = photon_number(p, 12), photon_number(p, 14)
    assert abs(a - b) < 1e-8 * b


def test_requires_some_damping():
    with pytest.raises(ConfigError):
        steady_state_quantum(SystemParams(kappa=0.0, gamma=0.0, gamma_prime=0.1), SMALL)


def test_dark_singlet_is_degenerate():
    # no atomic decay: the antisymmetric single-excitation state never decays
    p = SystemParams(kappa=0.1, gamma=0.0, gamma_prime=0.0, eta=0.0, delta_c=0.2)
    with pytest.raises(DegenerateNullSpaceError):
        steady_state_quantum(p, SMALL)


def test_density_check_rejects_bad_matrices():
    h = HilbertSpec(1)
    bad = np.eye(h.dim) / h.dim
    bad[0, 1] = 0.1
    with pytest.raises(NumericalError):
        DensityMatrix(bad, h).check()
    with pytest.raises(NumericalError):
        DensityMatrix(2 * np.eye(h.dim) / h.dim, h).check()
    neg = np.diag([1.5, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    with pytest.raises(NumericalError):
        DensityMatrix(neg, h).check()
