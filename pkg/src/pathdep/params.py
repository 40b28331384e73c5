"""Model parameter containers with the base-scenario defaults.

Market defaults are the base scenario (risk premium slope 5, rough delta 0.6,
...); Hawkes defaults are the Sichuan M>=5 maximum-likelihood estimates.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .kernels import FractionalKernel, PowerLawKernel


@dataclass(frozen=True)
class MarketParams:
    upsilon: float = 0.02  # risk-free rate
    theta: float = 5.0  # risk premium slope
    kappa: float = 0.173
    phi: float = 0.170  # long-run variance
    sigma: float = 0.34  # vol-of-vol
    rho: float = -0.615
    gamma: float = 1.0  # risk aversion
    v0: float = 0.018
    x0: float = 1.0
    delta: float = 0.6

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if abs(self.rho) > 1:
            raise ValueError("|rho| must be <= 1")
        if self.v0 < 0:
            raise ValueError("v0 must be non-negative")

    @property
    def kernel(self) -> FractionalKernel:
        return FractionalKernel(self.delta)

    @property
    def effective_reversion(self) -> float:
        """kappa + theta*sigma*rho, the decay rate of the H equation."""
        return self.kappa + self.theta * self.sigma * self.rho

    def with_(self, **kw) -> "MarketParams":
        return replace(self, **kw)


@dataclass(frozen=True)
class ClaimParams:
    mu: float = 4.0  # exponential claim-size rate
    theta_tilde: float = 0.2  # safety loading

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        if self.theta_tilde < 0:
            raise ValueError("theta_tilde must be non-negative")

    def with_(self, **kw) -> "ClaimParams":
        return replace(self, **kw)


@dataclass(frozen=True)
class HawkesParams:
    lambda_star: float = 6.310822
    a0: float = 2.233946
    a1: float = -2.167217
    kernel: PowerLawKernel = field(default_factory=lambda: PowerLawKernel(1.079113, 0.001, 0.556834))

    def __post_init__(self):
        if self.lambda_star < 0:
            raise ValueError("lambda_star must be non-negative")
        if self.a0 < 0:
            raise ValueError("a0 must be non-negative")

    @property
    def rho1(self):
        return self.kernel.rho1

    @property
    def rho2(self):
        return self.kernel.rho2

    @property
    def p(self):
        return self.kernel.p

    def with_(self, **kw) -> "HawkesParams":
        kern = {k: kw.pop(k) for k in ("rho1", "rho2", "p") if k in kw}
        if kern:
            kw["kernel"] = replace(self.kernel, **kern)
        return replace(self, **kw)

    def as_dict(self) -> dict:
        return {
            "lambda_star": self.lambda_star,
            "rho1": self.rho1,
            "rho2": self.rho2,
            "p": self.p,
            "a0": self.a0,
            "a1": self.a1,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HawkesParams":
        base = cls()
        return base.with_(**{k: float(v) for k, v in d.items()})
