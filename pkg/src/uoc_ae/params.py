"""Parameter containers shared by the pricers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional


class DomainError(ValueError):
    """Raised when inputs fall outside the domain of a pricing routine."""


class ConfigError(ValueError):
    """Raised for invalid run or simulation configuration."""


@dataclass(frozen=True)
class ModelParams:
    """Coefficients of the stochastic volatility model.

    The volatility follows
    ``dσ = ε λ (θ − σ) dt + ε ν σ (ρ dB¹ + √(1−ρ²) dB²)`` and the spot is a
    geometric process with drift ``c − q`` and diffusion ``σ``.
    """

    S: float
    sigma: float
    c: float = 0.0
    q: float = 0.0
    eps: float = 0.0
    lam: float = 0.0
    theta: float = 0.0
    nu: float = 0.0
    rho: float = 0.0

    def __post_init__(self):
        if not self.S > 0:
            raise DomainError(f"S must be > 0, got {self.S}")
        if not self.sigma > 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")
        if not 0.0 <= self.eps < 1.0:
            raise DomainError(f"eps must lie in [0, 1), got {self.eps}")
        if not -1.0 <= self.rho <= 1.0:
            raise DomainError(f"rho must lie in [-1, 1], got {self.rho}")
        for name in ("lam", "theta", "nu"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def x(self) -> float:
        return math.log(self.S)

    @property
    def eps_nu(self) -> float:
        return self.eps * self.nu

    @property
    def eps_lam(self) -> float:
        return self.eps * self.lam

    @classmethod
    def from_products(cls, S, sigma, c=0.0, q=0.0, eps_nu=0.0, eps_lam=0.0,
                      theta=0.0, rho=0.0, eps=0.1):
        """Build parameters from the products ``εν`` and ``ελ``.

        Only these products enter the first-order correction and the
        simulated dynamics, so ``eps`` merely fixes the split.
        """
        if eps == 0.0:
            if eps_nu or eps_lam:
                raise DomainError("eps = 0 cannot carry nonzero eps*nu or eps*lambda")
            return cls(S, sigma, c, q, 0.0, 0.0, theta, 0.0, rho)
        return cls(S, sigma, c, q, eps, eps_lam / eps, theta, eps_nu / eps, rho)


@dataclass(frozen=True)
class BarrierOption:
    """Up-and-out call terms: strike ``K``, upper barrier ``H``, maturity ``T``."""

    K: float
    H: float
    T: float

    def __post_init__(self):
        if not self.K > 0:
            raise DomainError(f"K must be > 0, got {self.K}")
        if not self.H > 0:
            raise DomainError(f"H must be > 0, got {self.H}")
        if not self.T > 0:
            raise DomainError(f"T must be > 0, got {self.T}")

    def is_degenerate(self, S: float) -> bool:
        """True when the price is identically zero (``K >= H`` or ``S >= H``)."""
        return self.K >= self.H or S >= self.H


ENDPOINT_MAPS = ("double-exponential", "sin2")


@dataclass(frozen=True)
class QuadConfig:
    n_time: int = 64
    n_space: int = 200
    space_width: float = 10.0
    s_floor: float = 1e-8
    endpoint_map: str = "double-exponential"

    def __post_init__(self):
        if self.n_time < 2 or self.n_space < 2:
            raise ConfigError("quadrature node counts must be >= 2")
        if self.space_width < 4:
            raise ConfigError("space_width must be >= 4")
        if not self.s_floor > 0:
            raise ConfigError("s_floor must be > 0")
        if self.endpoint_map not in ENDPOINT_MAPS:
            raise ConfigError(
                f"endpoint_map must be one of {ENDPOINT_MAPS}, got {self.endpoint_map!r}")


@dataclass(frozen=True)
class PriceResult:
    """A price with its decomposition; simulation results carry no decomposition."""

    value: float
    zeroth: Optional[float]
    correction: Optional[float]
    stderr: Optional[float] = None
    method: str = "ae0"
    clamped: bool = field(default=False, compare=False)
