"""Monte Carlo simulation of the controlled wealth process.

Volatility: left-point Euler on the Volterra representation with full truncation.
Claims: grid Hawkes (Poisson increments per step) with exponential claim sizes.
Wealth: premium outflow lambda (1 + theta~) E[I] dt plus retention min(Y, d) at each claim.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .claims import expected_indemnity
from .params import ClaimParams, HawkesParams, MarketParams
from .volterra import TimeGrid

log = logging.getLogger(__name__)

CHUNK = 1024  # paths per RNG stream; results do not depend on how chunks are scheduled


class Strategy(Protocol):
    tau: np.ndarray
    trading_weight: np.ndarray
    deductible: np.ndarray


@dataclass(frozen=True)
class SimConfig:
    paths: int = 20_000
    grid: TimeGrid = TimeGrid(10.0, 256)
    seed: int = 0
    clamp: str = "full"  # "full": max(v, 0) inside sqrt only; "reflect": |v|
    drift: str = "trapezoid"  # stock drift theta*w*v averaged over step ends; "euler": left point

    def __post_init__(self):
        if self.paths < 1:
            raise ValueError("paths must be >= 1")
        if self.clamp not in ("full", "reflect"):
            raise ValueError(f"unknown clamp scheme {self.clamp!r}")
        if self.drift not in ("trapezoid", "euler"):
            raise ValueError(f"unknown drift scheme {self.drift!r}")


@dataclass(frozen=True)
class PathBundle:
    terminal: np.ndarray
    negative: int  # paths ending with negative wealth
    clamp_fraction: float  # share of (path, step) pairs with v < 0
    events_mean: float

    @property
    def paths(self) -> int:
        return int(self.terminal.size)

    @property
    def mean(self) -> float:
        return float(self.terminal.mean())

    @property
    def variance(self) -> float:
        return float(self.terminal.var(ddof=1)) if self.paths > 1 else float("nan")

    @property
    def se_defined(self) -> bool:
        return self.paths > 1

    @property
    def se(self) -> float:
        return float(np.sqrt(self.variance / self.paths)) if self.se_defined else float("nan")

    def summary(self) -> dict:
        return {
            "paths": self.paths,
            "mean": self.mean,
            "variance": self.variance,
            "se": self.se,
            "se_defined": self.se_defined,
            "negative_paths": self.negative,
            "clamp_fraction": self.clamp_fraction,
            "events_mean": self.events_mean,
        }


def _sqrt_v(v, clamp):
    return np.sqrt(np.abs(v)) if clamp == "reflect" else np.sqrt(np.maximum(v, 0.0))


def _variance_step(market, klag, incr, k):
    # v_k = v0 + sum_{j<k} K(t_k - t_j) incr_j
    return market.v0 + klag[k:0:-1] @ incr[:k]


def simulate_variance(market: MarketParams, grid: TimeGrid, rng: np.random.Generator, paths: int = 1,
                      clamp: str = "full", dB: np.ndarray | None = None):
    """Variance paths of shape (N+1, paths) and the count of clamped samples.

    ``dB`` (N, paths) supplies the variance Brownian increments; drawn from ``rng`` if omitted.
    """
    n, h = grid.steps, grid.dt
    if dB is None:
        dB = rng.standard_normal((n, paths)) * np.sqrt(h)
    klag = np.ones(n + 1)
    klag[1:] = market.kernel(grid.times[1:])
    v = np.empty((n + 1, dB.shape[1]))
    incr = np.empty_like(dB)
    v[0] = market.v0
    clamped = 0
    for k in range(n):
        clamped += int(np.count_nonzero(v[k] < 0))
        incr[k] = market.kappa * (market.phi - v[k]) * h + market.sigma * _sqrt_v(v[k], clamp) * dB[k]
        v[k + 1] = _variance_step(market, klag, incr, k + 1)
    return v, clamped


def _strategy_on_grid(strategy: Strategy, grid: TimeGrid):
    tau = grid.horizon - grid.times
    tau_src = np.asarray(strategy.tau)
    if tau_src[-1] + 1e-12 < grid.horizon:
        raise ValueError("strategy series does not cover the simulation horizon")
    w = np.interp(tau, tau_src, strategy.trading_weight)
    d = np.interp(tau, tau_src, strategy.deductible)
    return w, d


def _simulate_chunk(market, claims, hawkes, w, d, grid, clamp, drift, rng, paths):
    n, h = grid.steps, grid.dt
    t = grid.times
    sq = np.sqrt(h)
    z1 = rng.standard_normal((n, paths))
    z2 = rng.standard_normal((n, paths))
    dW1 = z1 * sq
    dB = (market.rho * z1 + np.sqrt(1.0 - market.rho**2) * z2) * sq
    v, clamped = simulate_variance(market, grid, rng, clamp=clamp, dB=dB)

    kern = hawkes.kernel
    phi_lag = kern(t)
    hawkes_on = kern.rho1 > 0
    lam = np.full(paths, hawkes.lambda_star)
    drive = np.empty((n + 1, paths))
    excite = np.zeros((n + 1, paths)) if hawkes_on else None
    growth = np.exp(market.upsilon * h)

    x = np.full(paths, market.x0)
    events = np.zeros(paths)
    for k in range(n):
        if k > 0 and hawkes_on:
            raw = hawkes.lambda_star + h * (phi_lag[k:0:-1] @ drive[:k]) + excite[k]
            lam = np.maximum(raw, 0.0)
        drive[k] = hawkes.a0 + hawkes.a1 * lam
        sv = _sqrt_v(v[k], clamp)
        premium = lam * (1.0 + claims.theta_tilde) * expected_indemnity(d[k], claims.mu)
        if drift == "trapezoid":
            # the weight grows fast in tau; a left-point drift overstates the mean by O(dt)
            excess = 0.5 * market.theta * h * (w[k] * v[k] * growth + w[k + 1] * v[k + 1])
        else:
            excess = market.theta * w[k] * v[k] * h
        x = x * growth + excess + w[k] * sv * dW1[k] - premium * h
        counts = rng.poisson(lam * h)
        events += counts
        if counts.any():
            for m in range(int(counts.max())):
                hit = counts > m
                y = rng.exponential(1.0 / claims.mu, int(hit.sum()))
                x[hit] -= np.minimum(y, d[k])
                if hawkes_on:
                    s = rng.uniform(t[k], t[k + 1], y.size)
                    excite[k + 1 :, hit] += kern(t[k + 1 :, None] - s[None, :])
    return x, clamped, events


def simulate_wealth(
    market: MarketParams,
    claims: ClaimParams,
    hawkes: HawkesParams,
    strategy: Strategy,
    config: SimConfig = SimConfig(),
) -> PathBundle:
    """Terminal wealth under a deterministic (weight, deductible) schedule indexed by tau.

    The risk-free part compounds exactly over each step; the stock position is
    weight * sqrt(v) in diffusion units, so its excess drift is theta * v * weight.
    The diffusion and the claim flows use left-point values.
    """
    grid = config.grid
    w, d = _strategy_on_grid(strategy, grid)
    sizes = [CHUNK] * (config.paths // CHUNK)
    if config.paths % CHUNK:
        sizes.append(config.paths % CHUNK)
    streams = np.random.SeedSequence(config.seed).spawn(len(sizes))
    out, clamped, events = [], 0, []
    for size, ss in zip(sizes, streams):
        xs, c, ev = _simulate_chunk(
            market, claims, hawkes, w, d, grid, config.clamp, config.drift, np.random.default_rng(ss), size)
        out.append(xs)
        clamped += c
        events.append(ev)
    terminal = np.concatenate(out)
    neg = int(np.count_nonzero(terminal < 0))
    if neg:
        log.info("%d of %d paths end with negative wealth", neg, terminal.size)
    bundle = PathBundle(
        terminal=terminal,
        negative=neg,
        clamp_fraction=clamped / (config.paths * grid.steps),
        events_mean=float(np.concatenate(events).mean()),
    )
    if not bundle.se_defined:
        log.warning("single path: standard error undefined")
    return bundle


def estimate_objective(bundle: PathBundle | np.ndarray, gamma: float) -> float:
    """Sample mean minus gamma/2 times the (population, ddof=0) sample variance."""
    x = bundle.terminal if isinstance(bundle, PathBundle) else np.asarray(bundle, dtype=float)
    if x.size == 0:
        raise ValueError("empty bundle")
    return float(x.mean() - 0.5 * gamma * x.var())
