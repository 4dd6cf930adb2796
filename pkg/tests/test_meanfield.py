import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddicav.errors import NonConvergenceError, NumericalError
from ddicav.lowexc import steady_state_low
from ddicav.meanfield import (MeanFieldState, default_t_max, hysteresis_sweep, jacobian,
                              mean_field_rhs, relax_to_steady_state, relax_trajectory, rhs_vector)
from ddicav.params import SystemParams
from ddicav.saturation import branch_from_root, multistable_windows, saturation_roots, steady_states

FIG1 = SystemParams(kappa=0.12, gamma=0.0767, gamma_prime=0.05, eta=0.12)
FIG4 = SystemParams(kappa=0.1, gamma=0.1, gamma_prime=0.01, j_ddi=0.5, eta=0.2)

unit = st.floats(-1, 1)
states = st.builds(
    lambda a, b, c, d, e, f, z1, z2: MeanFieldState(complex(a, b), complex(c, d), complex(e, f), z1, z2),
    unit, unit, unit, unit, unit, unit, unit, unit)
params = st.builds(
    lambda dc, d, j, k, gm, gp, eta: SystemParams(delta_c=dc, delta=d, j_ddi=j, kappa=k, gamma=gm,
                                                  gamma_prime=gp, eta=eta),
    st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 1), st.floats(0, 1),
    st.floats(0, 1), st.floats(0, 1))


def test_vector_round_trip():
    s = MeanFieldState(1 + 2j, -0.5j, 0.25, 0.1, -0.3)
    assert MeanFieldState.from_vector(s.to_vector()) == s


@given(p=params, s=states)
def test_atom_swap_symmetry(p, s):
    out = mean_field_rhs(p, s.swapped())
    assert out == mean_field_rhs(p, s).swapped()


@given(p=params, s=states)
@settings(max_examples=60)
def test_jacobian_matches_central_differences(p, s):
    x = s.to_vector()
    h = 1e-6
    fd = np.empty((8, 8))
    for k in range(8):
        e = np.zeros(8)
        e[k] = h
        fd[:, k] = (rhs_vector(p, x + e) - rhs_vector(p, x - e)) / (2 * h)
    assert np.max(np.abs(jacobian(p, s) - fd)) <= 1e-5


def test_low_excitation_fixed_point():
    p = FIG1.replace(eta=0.01, delta_c=0.0)
    low = steady_state_low(p)
    (s0,) = saturation_roots(p)
    st_ = MeanFieldState(low.a0, low.sigma0, low.sigma0, -1 / (1 + s0), -1 / (1 + s0))
    # the linear solution ignores the O(s0) shift of the inversion
    assert np.linalg.norm(mean_field_rhs(p, st_).to_vector()) <= 1e-4
    exact = MeanFieldState.from_branch(branch_from_root(p, s0))
    assert np.linalg.norm(mean_field_rhs(p, exact).to_vector()) <= 1e-8


def test_pure_inversion_decay():
    p = SystemParams(g=0.0, eta=0.0, gamma=0.0767, kappa=0.12, gamma_prime=0.05)
    traj = relax_trajectory(p, MeanFieldState(sigma1z=0.0), t_max=20.0, samples=41)
    for t, s in traj:
        assert abs(s.sigma1z - (-1.0 + math.exp(-2 * p.gamma * t))) <= 1e-9
        assert s.sigma2z == -1.0


def test_undriven_relaxes_to_vacuum():
    init = MeanFieldState(0.3 - 0.2j, 0.1j, -0.05, 0.2, -0.4)
    res = relax_to_steady_state(FIG4.replace(eta=0.0, delta_c=0.7), init)
    assert res.converged
    s = res.state
    assert abs(s.a) < 1e-9 and abs(s.sigma1) < 1e-9 and abs(s.sigma2) < 1e-9
    assert abs(s.sigma1z + 1) < 1e-9 and abs(s.sigma2z + 1) < 1e-9


def test_weak_drive_relaxes_to_algebraic_state():
    p = FIG1.replace(eta=0.01, delta_c=0.0)
    res = relax_to_steady_state(p)
    (s0,) = saturation_roots(p)
    b = branch_from_root(p, s0)
    assert abs(res.state.a - b.a0) <= 1e-8
    assert abs(res.state.a - steady_state_low(p).a0) <= 1e-6


def test_fig1_pump_relaxation_close_to_linear():
    p = FIG1.replace(delta_c=0.0)
    res = relax_to_steady_state(p)
    (s0,) = saturation_roots(p)
    assert abs(res.state.a - branch_from_root(p, s0).a0) <= 1e-8
    assert abs(res.state.a - steady_state_low(p).a0) <= 1e-4


def test_halved_tolerance_changes_fixed_point_little():
    p = FIG4.replace(delta_c=2.0)
    a = relax_to_steady_state(p, tol=1e-10).state.to_vector()
    b = relax_to_steady_state(p, tol=5e-11).state.to_vector()
    assert np.max(np.abs(a - b)) <= 1e-8


def test_basins_at_bistable_point():
    p = FIG4.replace(delta_c=0.2)
    low, mid, up = steady_states(p)
    kick = 1e-4 * np.array([1, 1, -1, 1, 1, -1, 1, 1], dtype=float)
    for b in (low, up):
        res = relax_to_steady_state(p, MeanFieldState.from_vector(
            MeanFieldState.from_branch(b).to_vector() + kick))
        assert abs(res.state.a - b.a0) <= 1e-6
    res = relax_to_steady_state(p, MeanFieldState.from_vector(
        MeanFieldState.from_branch(mid).to_vector() + kick))
    assert min(abs(res.state.a - low.a0), abs(res.state.a - up.a0)) <= 1e-6


def test_non_convergence_reported():
    with pytest.raises(NonConvergenceError) as info:
        relax_to_steady_state(FIG4.replace(delta_c=0.2), t_max=1.0)
    assert info.value.rhs_norm > 1e-10
    assert info.value.state is not None
    res = relax_to_steady_state(FIG4.replace(delta_c=0.2), t_max=1.0, strict=False)
    assert not res.converged and res.t == 1.0


def test_inversion_bound_enforced():
    bad = MeanFieldState(sigma1z=-1.01)
    with pytest.raises(NumericalError):
        relax_to_steady_state(FIG4, bad, t_max=10.0)


@pytest.mark.parametrize("kw", [dict(tol=0.0), dict(t_max=-1.0)])
def test_bad_arguments(kw):
    with pytest.raises(ValueError):
        relax_to_steady_state(FIG4, **kw)


def test_default_t_max():
    assert default_t_max(FIG4) == pytest.approx(2000.0)
    assert default_t_max(FIG1) == pytest.approx(200 / 0.0767)


def test_single_valued_sweep_has_no_hysteresis():
    p = FIG1.replace(eta=0.02)
    grid = list(np.linspace(-3, 3, 25))
    up = hysteresis_sweep(p, grid)
    down = hysteresis_sweep(p, grid[::-1], init=up[-1][1])[::-1]
    for (x1, s1), (x2, s2) in zip(up, down):
        assert x1 == x2
        assert abs(s1.photon_number - s2.photon_number) <= 1e-6


def test_monotone_sweep_through_isola_has_no_hysteresis():
    # the three-root window is an isola: entering from outside keeps the upper branch
    grid = list(np.linspace(-2, 2, 41))
    up = hysteresis_sweep(FIG4, grid)
    down = hysteresis_sweep(FIG4, grid[::-1], init=up[-1][1])[::-1]
    assert max(abs(a.photon_number - b.photon_number) for (_, a), (_, b) in zip(up, down)) <= 1e-6


def test_hysteresis_confined_to_three_root_window():
    grid = np.round(np.linspace(-2, 2, 81), 12)
    step = grid[1] - grid[0]
    (lo, hi), = multistable_windows(FIG4, grid)
    window = (grid >= lo) & (grid <= hi)
    i_lo, i_hi = np.flatnonzero(window)[[0, -1]]
    for start, path in ((i_lo, grid[i_lo:]), (i_hi, grid[: i_hi + 1][::-1])):
        seed = branch_from_root(FIG4.replace(delta_c=float(grid[start])),
                                saturation_roots(FIG4.replace(delta_c=float(grid[start])))[0])
        fwd = hysteresis_sweep(FIG4, list(path), init=MeanFieldState.from_branch(seed))
        back = hysteresis_sweep(FIG4, list(path[::-1]), init=fwd[-1][1])[::-1]
        differs = np.array([abs(a.photon_number - b.photon_number) > 1e-6
                            for (_, a), (_, b) in zip(fwd, back)])
        xs = np.asarray(path)[differs]
        assert xs.size > 0
        # differences appear only inside the window, to within one grid step
        assert np.all((xs >= lo - step) & (xs <= hi + step))
        inside = (np.asarray(path) >= lo + step) & (np.asarray(path) <= hi - step)
        assert np.all(differs[inside])


def test_single_point_path():
    out = hysteresis_sweep(FIG4, [3.0])
    assert len(out) == 1 and out[0][0] == 3.0


def test_sweep_tags_failing_point():
    with pytest.raises(NonConvergenceError) as info:
        hysteresis_sweep(FIG4, [0.1, 0.2], t_max=0.5)
    assert info.value.point == 0.1
