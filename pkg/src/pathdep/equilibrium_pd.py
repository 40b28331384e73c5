"""Path-dependent equilibrium: rough volatility and power-law Hawkes claims.

All barred coefficients are solved in time-to-maturity tau = T - t, where the
convolution equations start from zero. Growth factors A = E = exp(upsilon*tau).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .claims import c_forcing, m_forcing
from .kernels import FractionalKernel, PowerLawKernel
from .params import ClaimParams, HawkesParams, MarketParams
from .volterra import TimeGrid, VolterraProblem, solve


def b_forcing(bbar, hbar, m: MarketParams):
    return (
        -m.kappa * bbar
        - m.theta * m.sigma * m.rho * hbar
        - 0.5 * m.gamma * m.sigma**2 * (1.0 - m.rho**2) * hbar**2
        + m.theta**2 / (2.0 * m.gamma)
    )


def h_forcing(hbar, m: MarketParams):
    return -m.effective_reversion * hbar + m.theta**2 / m.gamma


def equilibrium_deductible_raw(mbar, growth, gamma, theta_tilde):
    return theta_tilde / (gamma * growth) + mbar / growth


def solve_bh(market: MarketParams, kernel: FractionalKernel, grid: TimeGrid):
    """Return (B-bar, H-bar) on the tau grid."""

    def rhs(tau, x):
        return np.array([b_forcing(x[0], x[1], market), h_forcing(x[1], market)])

    sol = solve(VolterraProblem(kernel, rhs, 2), grid)
    return sol.values[0], sol.values[1]


def solve_cm(market: MarketParams, claims: ClaimParams, hawkes: HawkesParams, grid: TimeGrid):
    """Return (C-bar, M-bar) on the tau grid (exponential claims).

    The deductible inside the forcing is clamped at zero, matching the
    admissible indemnity (Y - d)^+.
    """
    g, mu, tt, a1, ups = market.gamma, claims.mu, claims.theta_tilde, hawkes.a1, market.upsilon

    def rhs(tau, x):
        c, mb = x
        e = np.exp(ups * tau)
        d = max(equilibrium_deductible_raw(mb, e, g, tt), 0.0)
        return np.array([c_forcing(c, mb, e, d, a1, g, mu, tt), m_forcing(mb, e, d, a1, mu, tt)])

    sol = solve(VolterraProblem(hawkes.kernel, rhs, 2), grid)
    return sol.values[0], sol.values[1]


def deductible(market: MarketParams, claims: ClaimParams, mbar, tau):
    """d*(tau) = max(theta_tilde/(gamma e^{upsilon tau}) + M-bar/e^{upsilon tau}, 0)."""
    e = np.exp(market.upsilon * np.asarray(tau, dtype=float))
    return np.maximum(equilibrium_deductible_raw(np.asarray(mbar), e, market.gamma, claims.theta_tilde), 0.0)


def trading_weight(market: MarketParams, hbar, tau):
    """alpha* X* / sqrt(v) = (theta - gamma sigma rho H-bar) / (gamma e^{upsilon tau})."""
    e = np.exp(market.upsilon * np.asarray(tau, dtype=float))
    return (market.theta - market.gamma * market.sigma * market.rho * np.asarray(hbar)) / (market.gamma * e)


def pointwise_coefficients(bbar, hbar, cbar, mbar, market, claims, hawkes, tau):
    """Recover B, H, C, M from the same algebraic right-hand sides that were convolved."""
    tau = np.asarray(tau, dtype=float)
    e = np.exp(market.upsilon * tau)
    d = deductible(market, claims, mbar, tau)
    b = b_forcing(bbar, hbar, market)
    h = h_forcing(hbar, market)
    c = c_forcing(cbar, mbar, e, d, hawkes.a1, market.gamma, claims.mu, claims.theta_tilde)
    mm = m_forcing(mbar, e, d, hawkes.a1, claims.mu, claims.theta_tilde)
    return b, h, c, mm


def dn_integrals(bbar, hbar, cbar, mbar, market, hawkes, grid: TimeGrid):
    """D and N as functions of tau: int_0^tau (kappa phi X-bar + a0 Y-bar) du."""
    kp = market.kappa * market.phi
    tau = grid.times
    d = cumulative_trapezoid(kp * np.asarray(bbar) + hawkes.a0 * np.asarray(cbar), tau, initial=0.0)
    n = cumulative_trapezoid(kp * np.asarray(hbar) + hawkes.a0 * np.asarray(mbar), tau, initial=0.0)
    return d, n


@dataclass(frozen=True)
class PDCoefficients:
    grid: TimeGrid
    tau: np.ndarray
    Bbar: np.ndarray
    Hbar: np.ndarray
    Cbar: np.ndarray
    Mbar: np.ndarray
    B: np.ndarray
    H: np.ndarray
    C: np.ndarray
    M: np.ndarray
    D: np.ndarray
    N: np.ndarray
    A: np.ndarray
    trading_weight: np.ndarray
    deductible: np.ndarray

    @property
    def t(self) -> np.ndarray:
        return self.grid.horizon - self.tau

    def columns(self) -> dict:
        """CSV columns in calendar-time order (t ascending)."""
        r = slice(None, None, -1)
        return {
            "t": self.t[r],
            "tau": self.tau[r],
            "Bbar": self.Bbar[r],
            "Hbar": self.Hbar[r],
            "Cbar": self.Cbar[r],
            "Mbar": self.Mbar[r],
            "B": self.B[r],
            "C": self.C[r],
            "D": self.D[r],
            "N": self.N[r],
            "trading_weight": self.trading_weight[r],
            "deductible": self.deductible[r],
        }


def solve_pd(market: MarketParams, claims: ClaimParams, hawkes: HawkesParams, grid: TimeGrid) -> PDCoefficients:
    tau = grid.times
    bbar, hbar = solve_bh(market, market.kernel, grid)
    cbar, mbar = solve_cm(market, claims, hawkes, grid)
    b, h, c, m = pointwise_coefficients(bbar, hbar, cbar, mbar, market, claims, hawkes, tau)
    d, n = dn_integrals(bbar, hbar, cbar, mbar, market, hawkes, grid)
    return PDCoefficients(
        grid=grid,
        tau=tau,
        Bbar=bbar,
        Hbar=hbar,
        Cbar=cbar,
        Mbar=mbar,
        B=b,
        H=h,
        C=c,
        M=m,
        D=d,
        N=n,
        A=np.exp(market.upsilon * tau),
        trading_weight=trading_weight(market, hbar, tau),
        deductible=deductible(market, claims, mbar, tau),
    )


def value_function(coeffs: PDCoefficients, market: MarketParams, lambda_star: float) -> float:
    """F(0) with constant auxiliary paths: e^{upsilon T} x0 + v0 int B + lambda* int C + D(0)."""
    tau = coeffs.tau
    return float(
        np.exp(market.upsilon * coeffs.grid.horizon) * market.x0
        + market.v0 * trapezoid(coeffs.B, tau)
        + lambda_star * trapezoid(coeffs.C, tau)
        + coeffs.D[-1]
    )


def expected_terminal_wealth(coeffs: PDCoefficients, market: MarketParams, lambda_star: float) -> float:
    """g(0) = e^{upsilon T} x0 + v0 int H + lambda* int M + N(0)."""
    tau = coeffs.tau
    return float(
        np.exp(market.upsilon * coeffs.grid.horizon) * market.x0
        + market.v0 * trapezoid(coeffs.H, tau)
        + lambda_star * trapezoid(coeffs.M, tau)
        + coeffs.N[-1]
    )
