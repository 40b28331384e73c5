"""Deductible-contract expectations for exponential claim sizes Y ~ Exp(mu).

With indemnity I = (Y - d)^+ the insured retains R = min(Y, d).
"""
from __future__ import annotations

import numpy as np


def expected_indemnity(d, mu):
    """E[(Y - d)^+] = exp(-mu d) / mu."""
    return np.exp(-mu * np.asarray(d, dtype=float)) / mu


def expected_retention(d, mu):
    """E[min(Y, d)] = (1 - exp(-mu d)) / mu."""
    return -np.expm1(-mu * np.asarray(d, dtype=float)) / mu


def expected_retention_sq(d, mu):
    """E[min(Y, d)^2] = 2 (1 - exp(-mu d)(1 + mu d)) / mu^2."""
    x = mu * np.asarray(d, dtype=float)
    return 2.0 * (-np.expm1(-x) - x * np.exp(-x)) / mu**2


def c_forcing(cbar, mbar, growth, d, a1, gamma, mu, theta_tilde):
    """Right-hand side of the C-bar equation for a deductible ``d``.

    ``growth`` is exp(upsilon * tau). Covers both the equilibrium deductible
    and any frozen deductible schedule.
    """
    e = growth
    return (
        (a1 + 1.0) * cbar
        - e * (1.0 + theta_tilde) * expected_indemnity(d, mu)
        + (gamma * mbar - 1.0) * e * expected_retention(d, mu)
        - 0.5 * gamma * e**2 * expected_retention_sq(d, mu)
        - 0.5 * gamma * mbar**2
    )


def m_forcing(mbar, growth, d, a1, mu, theta_tilde):
    """Right-hand side of the M-bar equation for a deductible ``d``."""
    e = growth
    return (a1 + 1.0) * mbar - e * (1.0 + theta_tilde) * expected_indemnity(d, mu) - e * expected_retention(d, mu)
