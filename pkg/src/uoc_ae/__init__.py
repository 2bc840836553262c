"""Up-and-out barrier call pricing under a stochastic volatility model.

Zeroth- and first-order asymptotic expansion around the Black-Scholes barrier
price, with a Monte Carlo benchmark.
"""

from .bs_barrier import BsInputs, uoc_price, uoc_vanna, uoc_vega, vanilla_call
from .expansion import ConvergenceWarning, correction, l1_integrand, price_ae
from .kernel import KernelParams, apply_semigroup, killed_density
from .montecarlo import McConfig, McEstimate, simulate
from .params import (BarrierOption, ConfigError, DomainError, ModelParams, PriceResult,
                     QuadConfig)

__version__ = "0.1.0"

__all__ = [
    "BarrierOption", "BsInputs", "ConfigError", "ConvergenceWarning", "DomainError",
    "KernelParams", "McConfig", "McEstimate", "ModelParams", "PriceResult", "QuadConfig",
    "apply_semigroup", "correction", "killed_density", "l1_integrand", "price_ae",
    "simulate", "uoc_price", "uoc_vanna", "uoc_vega", "vanilla_call",
]
