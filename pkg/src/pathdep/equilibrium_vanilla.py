"""Benchmark without path dependence: classical Heston variance, constant claim intensity."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .claims import expected_indemnity, expected_retention, expected_retention_sq
from .params import ClaimParams, MarketParams
from .volterra import TimeGrid


def h_closed_form(market: MarketParams, tau):
    """H(tau) = (theta^2/gamma)(1 - e^{-c tau})/c with c = kappa + theta sigma rho."""
    tau = np.asarray(tau, dtype=float)
    c = market.effective_reversion
    scale = market.theta**2 / market.gamma
    if abs(c) < 1e-14:
        return scale * tau
    return scale * -np.expm1(-c * tau) / c


def b_rate(b, h, market: MarketParams):
    """dB/dtau."""
    m = market
    return (
        -m.kappa * b
        - m.theta * m.sigma * m.rho * h
        - 0.5 * m.gamma * m.sigma**2 * (1.0 - m.rho**2) * h**2
        + m.theta**2 / (2.0 * m.gamma)
    )


def integrate_b(market: MarketParams, h, tau):
    """Trapezoid (implicit, second order) integration of the linear B equation from B(tau=0)=0."""
    b = np.zeros_like(h)
    forcing = b_rate(0.0, h, market)  # everything but -kappa B
    k = market.kappa
    for i in range(len(tau) - 1):
        dt = tau[i + 1] - tau[i]
        b[i + 1] = (b[i] * (1.0 - 0.5 * k * dt) + 0.5 * dt * (forcing[i] + forcing[i + 1])) / (1.0 + 0.5 * k * dt)
    return b


def vanilla_deductible(market: MarketParams, claims: ClaimParams, tau):
    """d~*(tau) = max(theta_tilde / (gamma e^{upsilon tau}), 0)."""
    e = np.exp(market.upsilon * np.asarray(tau, dtype=float))
    return np.maximum(claims.theta_tilde / (market.gamma * e), 0.0)


def vanilla_weight(market: MarketParams, h, tau):
    e = np.exp(market.upsilon * np.asarray(tau, dtype=float))
    return (market.theta - market.gamma * market.sigma * market.rho * np.asarray(h)) / (market.gamma * e)


def d_integrand(b, tau, market: MarketParams, claims: ClaimParams, lambda_star: float):
    """Integrand of D; for exponential claims equals the closed form with e^{-mu theta~/(gamma E)}."""
    e = np.exp(market.upsilon * np.asarray(tau, dtype=float))
    d = vanilla_deductible(market, claims, tau)
    mu, g, tt = claims.mu, market.gamma, claims.theta_tilde
    return (
        market.kappa * market.phi * b
        - lambda_star * e * (1.0 + tt) * expected_indemnity(d, mu)
        - lambda_star * e * expected_retention(d, mu)
        - 0.5 * g * lambda_star * e**2 * expected_retention_sq(d, mu)
    )


def n_integrand(h, tau, market: MarketParams, claims: ClaimParams, lambda_star: float):
    e = np.exp(market.upsilon * np.asarray(tau, dtype=float))
    d = vanilla_deductible(market, claims, tau)
    mu, tt = claims.mu, claims.theta_tilde
    return (
        market.kappa * market.phi * h
        - lambda_star * e * (1.0 + tt) * expected_indemnity(d, mu)
        - lambda_star * e * expected_retention(d, mu)
    )


@dataclass(frozen=True)
class VanillaCoefficients:
    grid: TimeGrid
    tau: np.ndarray
    B: np.ndarray
    H: np.ndarray
    D: np.ndarray
    N: np.ndarray
    A: np.ndarray
    trading_weight: np.ndarray
    deductible: np.ndarray
    lambda_star: float

    @property
    def t(self):
        return self.grid.horizon - self.tau

    def columns(self) -> dict:
        r = slice(None, None, -1)
        return {
            "t": self.t[r],
            "tau": self.tau[r],
            "B": self.B[r],
            "H": self.H[r],
            "D": self.D[r],
            "N": self.N[r],
            "trading_weight": self.trading_weight[r],
            "deductible": self.deductible[r],
        }


def solve_vanilla(market: MarketParams, claims: ClaimParams, lambda_star: float, grid: TimeGrid) -> VanillaCoefficients:
    tau = grid.times
    h = h_closed_form(market, tau)
    b = integrate_b(market, h, tau)
    d = cumulative_trapezoid(d_integrand(b, tau, market, claims, lambda_star), tau, initial=0.0)
    n = cumulative_trapezoid(n_integrand(h, tau, market, claims, lambda_star), tau, initial=0.0)
    coeffs = VanillaCoefficients(
        grid=grid,
        tau=tau,
        B=b,
        H=h,
        D=d,
        N=n,
        A=np.exp(market.upsilon * tau),
        trading_weight=vanilla_weight(market, h, tau),
        deductible=vanilla_deductible(market, claims, tau),
        lambda_star=float(lambda_star),
    )
    return coeffs


def vanilla_strategies(coeffs: VanillaCoefficients, market: MarketParams, claims: ClaimParams):
    """(weight series, deductible series) on the coefficient grid, indexed by tau."""
    return vanilla_weight(market, coeffs.H, coeffs.tau), vanilla_deductible(market, claims, coeffs.tau)


def expected_terminal_wealth(coeffs: VanillaCoefficients, market: MarketParams) -> float:
    """g(0, x0, v0) = e^{upsilon T} x0 + H(0) v0 + N(0)."""
    return float(np.exp(market.upsilon * coeffs.grid.horizon) * market.x0 + coeffs.H[-1] * market.v0 + coeffs.N[-1])


def value_function(coeffs: VanillaCoefficients, market: MarketParams) -> float:
    return float(np.exp(market.upsilon * coeffs.grid.horizon) * market.x0 + coeffs.B[-1] * market.v0 + coeffs.D[-1])
