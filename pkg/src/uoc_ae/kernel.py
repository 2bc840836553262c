"""Killed transition kernel of the drifted log-price below an upper barrier.

The log-price ``X_t = x + μ t + σ W_t`` with ``μ = c − q − σ²/2`` is absorbed
at ``b = log H``.  Its discounted sub-density is the Gaussian kernel times the
image-charge factor ``1 − exp(−2 (b−x)(b−y) / (σ² s))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import ndtr

from .params import DomainError, QuadConfig


@dataclass(frozen=True)
class KernelParams:
    sigma: float
    c: float
    q: float
    b: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")
        if not math.isfinite(self.mu):
            raise DomainError("drift must be finite")

    @property
    def mu(self) -> float:
        return self.c - self.q - 0.5 * self.sigma**2

    @classmethod
    def from_barrier(cls, sigma, c, q, H):
        return cls(sigma, c, q, math.log(H))


def killed_density(s, x, y, p: KernelParams):
    """Discounted density of the killed log-price at ``y`` after time ``s``."""
    if not s > 0:
        raise DomainError(f"s must be > 0, got {s}")
    if np.any(np.asarray(x) > p.b):
        raise DomainError("x lies above the barrier")
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    var = p.sigma**2 * s
    dist = np.maximum(p.b - x, 0.0) * np.maximum(p.b - y, 0.0)
    refl = -np.expm1(-2.0 * dist / var)
    gauss = np.exp(-(y - x - p.mu * s) ** 2 / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
    out = math.exp(-p.c * s) * refl * gauss
    return out[()] if out.ndim == 0 else out


def survival_probability(s, x, p: KernelParams):
    """Discounted probability that the killed log-price survives to ``s``.

    Closed form from the reflection principle for drifted Brownian motion;
    used as an independent check on the integrated kernel.
    """
    sd = p.sigma * math.sqrt(s)
    mu = p.mu
    u = p.b - x
    surv = ndtr((u - mu * s) / sd) - math.exp(2.0 * mu * u / p.sigma**2) * ndtr((-u - mu * s) / sd)
    return math.exp(-p.c * s) * float(surv)


@lru_cache(maxsize=64)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def gauss_legendre_panels(edges, n_nodes: int):
    """Composite Gauss-Legendre nodes and weights over consecutive ``edges``.

    ``n_nodes`` is the total budget, shared evenly (at least 8 per panel).
    """
    edges = np.asarray(edges, float)
    n_pan = len(edges) - 1
    per = max(8, -(-n_nodes // n_pan))
    t, w = _leggauss(per)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * t).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def window(s, x, p: KernelParams, quad: QuadConfig):
    """Truncated integration window of the kernel at time ``s``."""
    centre = x + p.mu * s
    half = quad.space_width * p.sigma * math.sqrt(s)
    return centre - half, min(p.b, centre + half)


def semigroup_rule(s, x, p: KernelParams, quad: QuadConfig, breaks=()):
    """Nodes ``y`` and weights ``w`` such that ``sum(w * g(y))`` applies the semigroup.

    The kernel is folded into the weights.  Interior ``breaks`` split the
    window into Gauss-Legendre panels.
    """
    lo, hi = window(s, x, p, quad)
    if hi <= lo:
        return np.empty(0), np.empty(0)
    inner = sorted({float(v) for v in breaks if lo < v < hi})
    y, w = gauss_legendre_panels([lo, *inner, hi], quad.n_space)
    return y, w * killed_density(s, x, y, p)


def apply_semigroup(s, g, x, p: KernelParams, quad: QuadConfig | None = None, breaks=()):
    """Apply the killed, discounted semigroup at time ``s`` to ``g`` at ``x``.

    ``g`` must accept a numpy array of log-prices.  For ``s`` below
    ``quad.s_floor`` the kernel is replaced by a point mass at ``x``.
    """
    quad = quad or QuadConfig()
    if not s > 0:
        raise DomainError(f"s must be > 0, got {s}")
    if x >= p.b:
        return 0.0
    if s < quad.s_floor:
        return math.exp(-p.c * s) * float(g(np.array([x]))[0])
    y, w = semigroup_rule(s, x, p, quad, breaks)
    return float(np.dot(w, g(y)))


def call_payoff(K: float, b: float):
    """The killed call payoff ``max(e^y − K, 0) 1{y < b}`` as a vectorized callable."""

    def f(y):
        y = np.asarray(y, float)
        return np.where(y < b, np.maximum(np.exp(y) - K, 0.0), 0.0)

    return f
