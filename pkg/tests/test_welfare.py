import numpy as np
import pytest

from pathdep.equilibrium_pd import solve_pd
from pathdep.equilibrium_vanilla import solve_vanilla
from pathdep.params import ClaimParams, HawkesParams, MarketParams
from pathdep.volterra import TimeGrid
from pathdep.welfare import compute_welfare, solve_suboptimal, welfare_loss

M, CL, HK = MarketParams(), ClaimParams(), HawkesParams()


def test_suboptimal_equals_optimal_in_classical_world():
    m, hk = M.with_(delta=1.0), HK.with_(rho1=0.0)
    g = TimeGrid(10.0, 2048)
    pd = solve_pd(m, CL, hk, g)
    sub = solve_suboptimal(m, CL, hk, solve_vanilla(m, CL, hk.lambda_star, g), g)
    np.testing.assert_allclose(sub.Hbar, pd.Hbar, rtol=1e-4)
    np.testing.assert_allclose(sub.Mbar, pd.Mbar, rtol=1e-12)


def test_suboptimal_differs_in_rough_world():
    g = TimeGrid(10.0, 512)
    pd = solve_pd(M, CL, HK, g)
    sub = solve_suboptimal(M, CL, HK, solve_vanilla(M, CL, HK.lambda_star, g), g)
    assert np.all(np.abs(sub.Hbar[1:] - pd.Hbar[1:]) > 0)


def test_zero_premium_has_zero_hbar():
    m = M.with_(theta=0.0)
    g = TimeGrid(5.0, 128)
    sub = solve_suboptimal(m, CL, HK, solve_vanilla(m, CL, HK.lambda_star, g), g)
    assert np.all(sub.Hbar == 0)


def test_nothing_to_optimise():
    r = compute_welfare(M.with_(theta=0.0), CL.with_(theta_tilde=0.0), HK.with_(lambda_star=0.0), TimeGrid(10.0, 256))
    assert abs(r.loss) <= 1e-12


def test_classical_world_loss_vanishes():
    r = compute_welfare(M.with_(delta=1.0), CL, HK.with_(rho1=0.0), TimeGrid(10.0, 2048))
    assert abs(r.loss) <= 1e-6


def test_classical_world_loss_second_order():
    # the residual is discretisation error; halving the step divides it by about four
    losses = [compute_welfare(M.with_(delta=1.0), CL, HK.with_(rho1=0.0), TimeGrid(10.0, n)).loss for n in (512, 1024, 2048)]
    assert 3.5 < losses[0] / losses[1] < 4.5
    assert 3.5 < losses[1] / losses[2] < 4.5


def test_short_horizon_classical_loss_small():
    r = compute_welfare(M.with_(delta=1.0), CL, HK.with_(rho1=0.0), TimeGrid(1.0, 1024))
    assert abs(r.loss) <= 1e-6


def test_components_add_up():
    g = TimeGrid(10.0, 512)
    r = compute_welfare(M, CL, HK, g)
    assert r.loss == pytest.approx((r.component_B + r.component_C + r.component_D) / np.exp(0.2), rel=1e-14)


def test_grid_mismatch_rejected():
    g1, g2 = TimeGrid(5.0, 64), TimeGrid(5.0, 128)
    pd = solve_pd(M, CL, HK, g1)
    sub = solve_suboptimal(M, CL, HK, solve_vanilla(M, CL, HK.lambda_star, g2), g2)
    with pytest.raises(ValueError):
        welfare_loss(pd, sub, M, HK.lambda_star)


def test_loss_increases_with_gamma_at_flat_kernel():
    g = TimeGrid(10.0, 1024)
    hk = HK.with_(p=0.0)
    losses = [compute_welfare(M.with_(delta=0.8, gamma=gm), CL, hk, g).loss for gm in (0.5, 1.0, 1.5)]
    assert losses[0] < losses[1] < losses[2], losses


def test_loss_increases_with_delta_at_flat_kernel():
    g = TimeGrid(10.0, 1024)
    hk = HK.with_(p=0.0)
    losses = [compute_welfare(M.with_(delta=d), CL, hk, g).loss for d in (0.6, 0.7, 0.8, 0.9)]
    assert all(a < b for a, b in zip(losses, losses[1:])), losses


def test_loss_nonnegative_on_base_sweep():
    g = TimeGrid(10.0, 1024)
    for d in (0.6, 0.8, 1.0):
        for gm in (0.5, 1.5):
            assert compute_welfare(M.with_(delta=d, gamma=gm), CL, HK, g).loss >= -1e-6
