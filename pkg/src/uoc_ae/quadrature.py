"""Endpoint-clustering rules for the outer time integral."""

from __future__ import annotations

import math

import numpy as np

# Truncation of the tanh-sinh parameter; at |t| = 3.2 the weights fall below 1e-15.
DE_T_MAX = 3.2


def double_exponential_rule(a: float, b: float, n: int):
    """tanh-sinh nodes and weights on ``[a, b]`` with ``n`` points.

    Returns ``(nodes, weights, dist_a, dist_b)``; the distances to both ends are
    computed without cancellation so callers can evaluate ``b − s`` accurately.
    """
    t = np.linspace(-DE_T_MAX, DE_T_MAX, n)
    h = t[1] - t[0]
    u = 0.5 * math.pi * np.sinh(t)
    half = 0.5 * (b - a)
    # 1 ± tanh(u) written as 2/(1 + e^{∓2u}) to keep the tails exact
    dist_a = half * 2.0 / (1.0 + np.exp(-2.0 * u))
    dist_b = half * 2.0 / (1.0 + np.exp(2.0 * u))
    w = half * h * 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
    return a + dist_a, w, dist_a, dist_b


def sin2_rule(a: float, b: float, n: int):
    """Gauss-Legendre in ``u`` after ``s = a + (b−a) sin²(πu/2)``."""
    z, wz = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (z + 1.0)
    L = b - a
    dist_a = L * np.sin(0.5 * math.pi * u) ** 2
    dist_b = L * np.cos(0.5 * math.pi * u) ** 2
    w = 0.5 * wz * L * 0.5 * math.pi * np.sin(math.pi * u)
    return a + dist_a, w, dist_a, dist_b


def time_rule(name: str, a: float, b: float, n: int):
    if name == "double-exponential":
        return double_exponential_rule(a, b, n)
    if name == "sin2":
        return sin2_rule(a, b, n)
    raise ValueError(f"unknown endpoint map {name!r}")
