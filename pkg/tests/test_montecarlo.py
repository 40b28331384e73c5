import numpy as np
import pytest

from pathdep.equilibrium_vanilla import solve_vanilla
from pathdep.equilibrium_pd import solve_pd
from pathdep.montecarlo import PathBundle, SimConfig, estimate_objective, simulate_variance, simulate_wealth
from pathdep.params import ClaimParams, HawkesParams, MarketParams
from pathdep.volterra import TimeGrid

M, CL, HK = MarketParams(), ClaimParams(), HawkesParams()


class Schedule:
    def __init__(self, T, weight, deductible):
        self.tau = np.array([0.0, T])
        self.trading_weight = np.array([weight, weight], dtype=float)
        self.deductible = np.array([deductible, deductible], dtype=float)


def test_variance_deterministic_reversion():
    m = M.with_(sigma=0.0, delta=1.0)
    g = TimeGrid(10.0, 2000)
    v, clamped = simulate_variance(m, g, np.random.default_rng(0), paths=2)
    exact = m.phi + (m.v0 - m.phi) * np.exp(-m.kappa * g.times)
    assert clamped == 0
    assert np.max(np.abs(v[:, 0] - exact)) < 2 * g.dt * m.kappa * abs(m.v0 - m.phi)


def test_variance_frozen():
    v, _ = simulate_variance(M.with_(sigma=0.0, kappa=0.0), TimeGrid(1.0, 50), np.random.default_rng(0), paths=3)
    assert np.all(v == M.v0)


def test_heston_mean():
    m = M.with_(delta=1.0)
    g = TimeGrid(10.0, 256)
    v, clamped = simulate_variance(m, g, np.random.default_rng(1), paths=10_000)
    exact = m.v0 * np.exp(-m.kappa * 10) + m.phi * (1 - np.exp(-m.kappa * 10))
    # left-point Euler mean is exact for the discrete recursion
    disc = m.phi + (m.v0 - m.phi) * (1 - m.kappa * g.dt) ** g.steps
    se = v[-1].std(ddof=1) / np.sqrt(v.shape[1])
    assert abs(v[-1].mean() - exact) < 3 * se + abs(disc - exact)
    assert clamped / (10_000 * g.steps) < 0.2


def test_bond_only():
    m = M.with_(theta=0.0, sigma=0.0)
    hk = HawkesParams(lambda_star=0.0, a0=0.0, a1=0.0, kernel=HK.kernel.__class__(0.0, 0.001, 0.5))
    b = simulate_wealth(m, CL, hk, Schedule(10.0, 0.0, 0.2), SimConfig(paths=5, grid=TimeGrid(10.0, 64)))
    np.testing.assert_allclose(b.terminal, np.exp(0.2), rtol=1e-13)


def test_reproducible():
    van = solve_vanilla(M.with_(delta=1.0), CL, HK.lambda_star, TimeGrid(10.0, 512))
    cfg = SimConfig(paths=1500, grid=TimeGrid(10.0, 64), seed=7)
    a = simulate_wealth(M, CL, HK, van, cfg)
    b = simulate_wealth(M, CL, HK, van, cfg)
    assert np.array_equal(a.terminal, b.terminal)


def test_full_insurance_costs_mean():
    m = M.with_(delta=1.0)
    hk = HK.with_(rho1=0.0)
    van = solve_vanilla(m, CL, hk.lambda_star, TimeGrid(10.0, 512))
    full = Schedule(10.0, 0.0, 0.0)
    opt = Schedule(10.0, 0.0, 0.0)
    opt.tau, opt.deductible = van.tau, van.deductible
    opt.trading_weight = np.zeros_like(van.tau)
    cfg = SimConfig(paths=4000, grid=TimeGrid(10.0, 128), seed=3)
    assert simulate_wealth(m, CL, hk, full, cfg).mean < simulate_wealth(m, CL, hk, opt, cfg).mean


def test_objective_examples():
    assert estimate_objective(np.full(10, 3.5), 2.0) == 3.5
    assert estimate_objective(np.array([0.0, 2.0]), 1.0) == 0.5
    with pytest.raises(ValueError):
        estimate_objective(np.array([]), 1.0)


def test_standard_error_definition():
    x = np.random.default_rng(0).normal(size=100)
    b = PathBundle(terminal=x, negative=0, clamp_fraction=0.0, events_mean=0.0)
    assert b.se == pytest.approx(x.std(ddof=1) / 10)
    single = PathBundle(terminal=x[:1], negative=0, clamp_fraction=0.0, events_mean=0.0)
    assert not single.se_defined and np.isnan(single.se)


def test_perturbed_strategy_is_worse():
    m = M.with_(delta=1.0, gamma=1.0)
    hk = HK.with_(rho1=0.0)
    van = solve_vanilla(m, CL, hk.lambda_star, TimeGrid(10.0, 1024))
    bumped = Schedule(10.0, 0.0, 0.0)
    bumped.tau, bumped.deductible, bumped.trading_weight = van.tau, van.deductible, 1.5 * van.trading_weight
    cfg = SimConfig(paths=4000, grid=TimeGrid(10.0, 128), seed=11)
    j_opt = estimate_objective(simulate_wealth(m, CL, hk, van, cfg), m.gamma)
    j_bump = estimate_objective(simulate_wealth(m, CL, hk, bumped, cfg), m.gamma)
    assert j_bump < j_opt


def test_pd_strategy_runs_with_hawkes_claims():
    g = TimeGrid(10.0, 256)
    pd = solve_pd(M, CL, HK, g)
    b = simulate_wealth(M, CL, HK, pd, SimConfig(paths=200, grid=TimeGrid(10.0, 64), seed=2))
    assert np.all(np.isfinite(b.terminal)) and b.events_mean > 0


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(paths=0)
    with pytest.raises(ValueError):
        SimConfig(clamp="absorb")
