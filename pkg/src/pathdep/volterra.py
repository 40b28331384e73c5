"""Fractional Adams predictor-corrector for Volterra equations.

Solves x(t) = int_0^t k(t - s) f(s, x(s)) ds, x(0) = 0, on a uniform grid with
one predictor and one corrector evaluation per step (PECE).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kernels import FractionalKernel, LagWeights, PowerLawKernel, lag_weights


class VolterraError(ArithmeticError):
    """Raised when the right-hand side turns non-finite during a solve."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"non-finite right-hand side at step {step}")


@dataclass(frozen=True)
class TimeGrid:
    horizon: float
    steps: int

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if self.steps < 2:
            raise ValueError("need at least 2 steps")

    @property
    def dt(self) -> float:
        return self.horizon / self.steps

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.steps + 1) * self.dt

    def refined(self, factor: int = 2) -> "TimeGrid":
        return TimeGrid(self.horizon, self.steps * factor)


@dataclass(frozen=True)
class VolterraProblem:
    kernel: FractionalKernel | PowerLawKernel
    rhs: Callable[[float, np.ndarray], np.ndarray]
    dim: int = 1


@dataclass(frozen=True)
class GridSolution:
    grid: TimeGrid
    values: np.ndarray  # shape (dim, N+1)
    rhs_values: np.ndarray  # f(t_k, x(t_k)) on the grid, shape (dim, N+1)

    def __getitem__(self, i):
        return self.values[i]


def solve(problem: VolterraProblem, grid: TimeGrid, weights: LagWeights | None = None) -> GridSolution:
    n, d = grid.steps, problem.dim
    w = weights if weights is not None else lag_weights(problem.kernel, grid.dt, n)
    t = grid.times
    x = np.zeros((n + 1, d))
    f = np.zeros((n + 1, d))
    f[0] = _eval(problem.rhs, t[0], x[0], 0)
    # reversed views so that lag m = k - j lines up with history index j
    b_rev = w.b[::-1]
    a_rev = w.a_mid[::-1]
    for k in range(n):
        pred = b_rev[n - 1 - k:] @ f[: k + 1]
        corr = w.a_first[k] * f[0]
        if k > 0:
            corr = corr + a_rev[n - 1 - k:] @ f[1 : k + 1]
        fp = _eval(problem.rhs, t[k + 1], pred, k + 1)
        x[k + 1] = corr + w.a_diag * fp
        f[k + 1] = _eval(problem.rhs, t[k + 1], x[k + 1], k + 1)
    return GridSolution(grid=grid, values=x.T.copy(), rhs_values=f.T.copy())


def _eval(rhs, t, x, step):
    out = np.asarray(rhs(t, x), dtype=float)
    if not np.all(np.isfinite(out)):
        raise VolterraError(step)
    return out


def convolve_tail(samples, kernel, grid: TimeGrid, index: int, weights: LagWeights | None = None) -> float:
    """Product-trapezoid value of int_0^{t_index} k(t_index - s) g(s) ds.

    ``samples`` holds g on the grid (at least ``index + 1`` values). The rule
    integrates the kernel exactly against the piecewise-linear interpolant of g.
    """
    g = np.asarray(samples, dtype=float)
    if index < 0 or index > grid.steps or index >= g.shape[-1]:
        raise IndexError(f"index {index} outside the grid prefix")
    if index == 0:
        return 0.0
    w = weights if weights is not None else lag_weights(kernel, grid.dt, grid.steps)
    a, _ = w.rows(index - 1)
    return float(a @ g[: index + 1])
