"""Certainty-equivalent loss from running the vanilla strategy in the path-dependent world."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .claims import c_forcing, m_forcing
from .equilibrium_pd import PDCoefficients, solve_pd
from .equilibrium_vanilla import VanillaCoefficients, solve_vanilla, vanilla_deductible
from .params import ClaimParams, HawkesParams, MarketParams
from .volterra import TimeGrid, VolterraProblem, solve


@dataclass(frozen=True)
class SuboptimalCoefficients:
    grid: TimeGrid
    tau: np.ndarray
    Bbar: np.ndarray
    Hbar: np.ndarray
    Cbar: np.ndarray
    Mbar: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    N: np.ndarray
    H_hat: np.ndarray
    A_hat: np.ndarray


@dataclass(frozen=True)
class WelfareResult:
    loss: float
    component_B: float
    component_C: float
    component_D: float


def _sub_b(bbar, hbar, h_hat, m: MarketParams):
    u = m.theta - m.gamma * m.sigma * m.rho * h_hat
    return (
        -m.kappa * bbar
        - 0.5 * m.gamma * m.sigma**2 * hbar**2
        - m.sigma * m.rho * u * hbar
        + (m.theta**2 - m.gamma**2 * m.sigma**2 * m.rho**2 * h_hat**2) / (2.0 * m.gamma)
    )


def _sub_h(hbar, h_hat, m: MarketParams):
    return -m.kappa * hbar + m.theta * (m.theta - m.gamma * m.sigma * m.rho * h_hat) / m.gamma


def solve_suboptimal(
    market: MarketParams,
    claims: ClaimParams,
    hawkes: HawkesParams,
    vanilla: VanillaCoefficients,
    grid: TimeGrid,
) -> SuboptimalCoefficients:
    """Coefficients of the value function when the frozen vanilla strategy is played."""
    tau = grid.times
    h_hat_grid = np.interp(tau, vanilla.tau, vanilla.H)
    g, mu, tt, a1, ups = market.gamma, claims.mu, claims.theta_tilde, hawkes.a1, market.upsilon

    def h_hat(s):
        return np.interp(s, vanilla.tau, vanilla.H)

    def rhs_bh(s, x):
        hh = h_hat(s)
        return np.array([_sub_b(x[0], x[1], hh, market), _sub_h(x[1], hh, market)])

    def rhs_cm(s, x):
        e = np.exp(ups * s)
        d = tt / (g * e)
        return np.array([c_forcing(x[0], x[1], e, d, a1, g, mu, tt), m_forcing(x[1], e, d, a1, mu, tt)])

    bh = solve(VolterraProblem(market.kernel, rhs_bh, 2), grid)
    cm = solve(VolterraProblem(hawkes.kernel, rhs_cm, 2), grid)
    bbar, hbar = bh.values
    cbar, mbar = cm.values
    e = np.exp(ups * tau)
    d_van = vanilla_deductible(market, claims, tau)
    b = _sub_b(bbar, hbar, h_hat_grid, market)
    c = c_forcing(cbar, mbar, e, d_van, a1, g, mu, tt)
    kp = market.kappa * market.phi
    dd = cumulative_trapezoid(kp * bbar + hawkes.a0 * cbar, tau, initial=0.0)
    nn = cumulative_trapezoid(kp * hbar + hawkes.a0 * mbar, tau, initial=0.0)
    return SuboptimalCoefficients(
        grid=grid, tau=tau, Bbar=bbar, Hbar=hbar, Cbar=cbar, Mbar=mbar,
        B=b, C=c, D=dd, N=nn, H_hat=h_hat_grid, A_hat=e,
    )


def welfare_loss(pd: PDCoefficients, sub: SuboptimalCoefficients, market: MarketParams, lambda_star: float) -> WelfareResult:
    """Fraction of initial wealth forfeited by playing the vanilla strategy."""
    if pd.grid != sub.grid:
        raise ValueError("optimal and suboptimal coefficients must share a grid")
    tau = pd.tau
    cb = market.v0 * trapezoid(pd.B - sub.B, tau)
    cc = lambda_star * trapezoid(pd.C - sub.C, tau)
    cd = pd.D[-1] - sub.D[-1]
    scale = np.exp(market.upsilon * pd.grid.horizon) * market.x0
    return WelfareResult(loss=float((cb + cc + cd) / scale), component_B=float(cb), component_C=float(cc), component_D=float(cd))


def compute_welfare(market: MarketParams, claims: ClaimParams, hawkes: HawkesParams, grid: TimeGrid) -> WelfareResult:
    """Solve the optimal, vanilla and suboptimal systems on ``grid`` and return the loss."""
    pd = solve_pd(market, claims, hawkes, grid)
    van = solve_vanilla(market, claims, hawkes.lambda_star, grid)
    sub = solve_suboptimal(market, claims, hawkes, van, grid)
    return welfare_loss(pd, sub, market, hawkes.lambda_star)
