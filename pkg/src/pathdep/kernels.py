"""Convolution kernels and their product-trapezoid (fractional Adams) weights.

Two families are used:

* ``FractionalKernel``: K(t) = t^(delta-1) / Gamma(delta), the rough-volatility kernel.
* ``PowerLawKernel``: phi(t) = rho1 / (rho2 + t)^p, the Omori-type Hawkes kernel.

For each family the weights of the predictor (left rectangle) and corrector
(piecewise-linear interpolation) quadratures are exact integrals of the kernel
against the corresponding basis functions on a uniform grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Distance from p = 1 or p = 2 below which the power-law weights are refused.
SINGULAR_P_TOL = 1e-8


@dataclass(frozen=True)
class FractionalKernel:
    delta: float

    def __post_init__(self):
        if not (0.5 < self.delta <= 1.0):
            raise ValueError(f"delta must lie in (1/2, 1], got {self.delta}")

    def __call__(self, t):
        return eval_fractional(self, t)

    def integral(self, t):
        """Exact integral of the kernel over [0, t]."""
        t = np.asarray(t, dtype=float)
        return t**self.delta / math.gamma(self.delta + 1.0)


@dataclass(frozen=True)
class PowerLawKernel:
    rho1: float
    rho2: float
    p: float

    def __post_init__(self):
        # rho1 = 0 switches the kernel off; kept legal for the degenerate benchmarks.
        if self.rho1 < 0:
            raise ValueError(f"rho1 must be >= 0, got {self.rho1}")
        if self.p < 0:
            raise ValueError(f"p must be >= 0, got {self.p}")
        if self.rho2 < 0 or (self.rho2 == 0 and self.p > 0):
            raise ValueError(f"rho2 must be > 0 (or 0 with p = 0), got {self.rho2}")

    def __call__(self, t):
        return eval_powerlaw(self, t)

    def integral(self, t):
        """Exact integral of phi over [0, t]."""
        t = np.asarray(t, dtype=float)
        r1, r2, p = self.rho1, self.rho2, self.p
        if abs(p - 1.0) < SINGULAR_P_TOL:
            return r1 * np.log1p(t / r2)
        return r1 * ((r2 + t) ** (1.0 - p) - r2 ** (1.0 - p)) / (1.0 - p)


def eval_fractional(k: FractionalKernel, t):
    """K(t) = t^(delta-1)/Gamma(delta); identically 1 when delta = 1."""
    t = np.asarray(t, dtype=float)
    if k.delta == 1.0:
        if np.any(t < 0):
            raise ValueError("fractional kernel is undefined for t < 0")
        out = np.ones_like(t)
    else:
        if np.any(t <= 0):
            raise ValueError("fractional kernel is singular at t <= 0 for delta < 1")
        out = t ** (k.delta - 1.0) / math.gamma(k.delta)
    return out[()] if out.ndim == 0 else out


def eval_powerlaw(k: PowerLawKernel, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("power-law kernel is evaluated at t >= 0 only")
    out = k.rho1 / (k.rho2 + t) ** k.p
    return out[()] if out.ndim == 0 else out


def _check_p(p):
    if abs(p - 1.0) < SINGULAR_P_TOL or abs(p - 2.0) < SINGULAR_P_TOL:
        raise ValueError(f"power-law Adams weights are singular at p = {p} (p in {{1, 2}})")


# ---------------------------------------------------------------------------
# Row form: weights for a single corrector index k (the step t_k -> t_{k+1}).
# ---------------------------------------------------------------------------

def adams_weights_fractional(delta: float, dt: float, k: int):
    """Return ``(a, b)`` with a[j] = a_{j,k+1} (j = 0..k+1) and b[j] = b_{j,k+1} (j = 0..k)."""
    if dt <= 0 or k < 0:
        raise ValueError("need dt > 0 and k >= 0")
    d = float(delta)
    ca = dt**d / math.gamma(d + 2.0)
    cb = dt**d / math.gamma(d + 1.0)
    j = np.arange(k + 1, dtype=float)
    b = cb * ((k - j + 1.0) ** d - (k - j) ** d)
    a = np.empty(k + 2)
    a[0] = ca * (k ** (d + 1.0) - (k - d) * (k + 1.0) ** d)
    m = k - j[1:]
    a[1:k + 1] = ca * ((m + 2.0) ** (d + 1.0) + m ** (d + 1.0) - 2.0 * (m + 1.0) ** (d + 1.0))
    a[k + 1] = ca
    return a, b


def adams_weights_powerlaw(kernel: PowerLawKernel, dt: float, k: int):
    """Primed weights for phi = rho1/(rho2+t)^p; same layout as the fractional rows."""
    if dt <= 0 or k < 0:
        raise ValueError("need dt > 0 and k >= 0")
    r1, r2, p = kernel.rho1, kernel.rho2, kernel.p
    _check_p(p)
    den = dt * (1.0 - p) * (2.0 - p)
    j = np.arange(k + 1, dtype=float)
    b = r1 * ((r2 + (k + 1.0 - j) * dt) ** (1.0 - p) - (r2 + (k - j) * dt) ** (1.0 - p)) / (1.0 - p)
    a = np.empty(k + 2)
    hi = r2 + (k + 1.0) * dt
    a[0] = r1 * (dt * (2.0 - p) * hi ** (1.0 - p) - hi ** (2.0 - p) + (r2 + k * dt) ** (2.0 - p)) / den
    m = k - j[1:]
    a[1:k + 1] = r1 * (
        (r2 + m * dt) ** (2.0 - p) - 2.0 * (r2 + (m + 1.0) * dt) ** (2.0 - p) + (r2 + (m + 2.0) * dt) ** (2.0 - p)
    ) / den
    a[k + 1] = r1 * ((r2 + dt) ** (2.0 - p) - r2 ** (2.0 - p) - dt * (2.0 - p) * r2 ** (1.0 - p)) / den
    return a, b


# ---------------------------------------------------------------------------
# Lag form: on a uniform grid every weight except a_{0,k+1} depends on k - j only,
# so a whole solve needs O(N) weights. Computed once per (kernel, dt, N).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LagWeights:
    """Weights indexed by lag m = k - j.

    ``b[m]``      predictor weight b_{j,k+1}, m = 0..n-1
    ``a_mid[m]``  corrector weight a_{j,k+1} for 1 <= j <= k, m = 0..n-2
    ``a_first[k]`` corrector weight a_{0,k+1}, k = 0..n-1
    ``a_diag``    corrector weight a_{k+1,k+1}
    """

    b: np.ndarray
    a_mid: np.ndarray
    a_first: np.ndarray
    a_diag: float

    def rows(self, k: int):
        """Recover the row form ``(a, b)`` for corrector index k."""
        a = np.empty(k + 2)
        a[0] = self.a_first[k]
        a[1:k + 1] = self.a_mid[k - 1::-1] if k > 0 else []
        a[k + 1] = self.a_diag
        return a, self.b[k::-1].copy()


def lag_weights(kernel, dt: float, n: int) -> LagWeights:
    """Tabulate the Adams weights for ``n`` steps of size ``dt``."""
    if dt <= 0 or n < 1:
        raise ValueError("need dt > 0 and n >= 1")
    m = np.arange(n, dtype=float)
    if isinstance(kernel, FractionalKernel):
        d = kernel.delta
        ca = dt**d / math.gamma(d + 2.0)
        cb = dt**d / math.gamma(d + 1.0)
        b = cb * ((m + 1.0) ** d - m**d)
        a_mid = ca * ((m + 2.0) ** (d + 1.0) + m ** (d + 1.0) - 2.0 * (m + 1.0) ** (d + 1.0))
        a_first = ca * (m ** (d + 1.0) - (m - d) * (m + 1.0) ** d)
        a_diag = ca
    elif isinstance(kernel, PowerLawKernel):
        r1, r2, p = kernel.rho1, kernel.rho2, kernel.p
        _check_p(p)
        den = dt * (1.0 - p) * (2.0 - p)
        w1 = (r2 + np.arange(n + 2) * dt) ** (1.0 - p)
        w2 = (r2 + np.arange(n + 2) * dt) ** (2.0 - p)
        b = r1 * (w1[1:n + 1] - w1[:n]) / (1.0 - p)
        a_mid = r1 * (w2[:n] - 2.0 * w2[1:n + 1] + w2[2:n + 2]) / den
        a_first = r1 * (dt * (2.0 - p) * w1[1:n + 1] - w2[1:n + 1] + w2[:n]) / den
        a_diag = r1 * (w2[1] - w2[0] - dt * (2.0 - p) * w1[0]) / den
    else:
        raise TypeError(f"unsupported kernel {type(kernel).__name__}")
    return LagWeights(b=b, a_mid=a_mid[: max(n - 1, 0)], a_first=a_first, a_diag=float(a_diag))
