"""First-order asymptotic expansion of the up-and-out call price.

The zeroth term is the Black-Scholes barrier price at the initial volatility.
The first-order term is

    ε ∫_0^T ∫_{−∞}^{log H} k_s(log S, y) L1[C_BS(T−s)](y) dy ds,

where ``k_s`` is the discounted killed kernel and
``L1 = ρ ν σ² ∂²/∂x∂σ + λ (θ − σ) ∂/∂σ`` acts on the Black-Scholes barrier
price with remaining maturity ``T − s``.  The outer integral uses an
endpoint-clustering substitution in ``s``, the inner one composite
Gauss-Legendre panels refined around the strike and the barrier.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from . import bs_barrier
from .bs_barrier import BsInputs
from .kernel import KernelParams, semigroup_rule
from .params import BarrierOption, DomainError, ModelParams, PriceResult, QuadConfig
from .quadrature import time_rule

GREEK_SOURCES = ("analytic", "fd", "printed")
DISCOUNTING = ("split", "pde")


class ConvergenceWarning(RuntimeWarning):
    pass


def _greeks(inp: BsInputs, source: str):
    if source == "analytic":
        return bs_barrier.uoc_vega(inp), bs_barrier.uoc_vanna(inp)
    if source == "fd":
        return bs_barrier.fd_vega_richardson(inp), bs_barrier.fd_vanna_richardson(inp)
    if source == "printed":
        return bs_barrier.uoc_vega_printed(inp), bs_barrier.uoc_vanna_printed(inp)
    raise ValueError(f"unknown greek source {source!r}")


def l1_integrand(t_rem, y, m: ModelParams, o: BarrierOption, greeks: str = "analytic",
                 discounting: str = "split"):
    """First-order operator applied to the Black-Scholes barrier price.

    Evaluated at log-spot ``y`` (array allowed) with remaining maturity
    ``t_rem`` and the initial volatility.  With ``discounting="pde"`` the
    ``e^{c t_rem}`` factor is dropped.
    """
    if not np.all(np.asarray(t_rem) > 0):
        raise DomainError("t_rem must be > 0")
    vanna_w = m.rho * m.nu * m.sigma**2
    vega_w = m.lam * (m.theta - m.sigma)
    y = np.asarray(y, float)
    if vanna_w == 0.0 and vega_w == 0.0:
        return np.zeros_like(y + t_rem)
    inp = BsInputs(y, m.sigma, m.c, m.q, t_rem, o.K, o.H)
    vega, vanna = _greeks(inp, greeks)
    out = vanna_w * vanna + vega_w * vega
    if discounting == "split":
        out = np.exp(m.c * np.asarray(t_rem)) * out
    return out


def _inner_breaks(k, b, t_rem, s, sigma):
    """Panel edges resolving the strike and barrier layers of the Greeks."""
    pts = [k]
    for h in {sigma * math.sqrt(t_rem), sigma * math.sqrt(s)}:
        for f in (0.5, 2.0, 8.0):
            pts += [k - f * h, k + f * h, b - f * h]
    return pts


def _correction_integral(m, o, quad, greeks, discounting):
    x, k, b = m.x, math.log(o.K), math.log(o.H)
    p = KernelParams(m.sigma, m.c, m.q, b)
    T = o.T
    s_nodes, s_w, _, t_rems = time_rule(quad.endpoint_map, 0.0, T, quad.n_time)
    vals = np.zeros_like(s_nodes)
    for j, (s, t_rem) in enumerate(zip(s_nodes, t_rems)):
        if t_rem < quad.s_floor:
            # the inner integral vanishes like sqrt(t_rem)
            continue
        if s < quad.s_floor:
            vals[j] = math.exp(-m.c * s) * float(
                l1_integrand(t_rem, x, m, o, greeks, discounting))
            continue
        y, w = semigroup_rule(s, x, p, quad, _inner_breaks(k, b, t_rem, s, m.sigma))
        vals[j] = np.dot(w, l1_integrand(t_rem, y, m, o, greeks, discounting))
    integral = float(np.dot(s_w, vals))
    if discounting == "split":
        integral *= math.exp(-m.c * T)
    return integral


def correction(m: ModelParams, o: BarrierOption, quad: QuadConfig | None = None,
               greeks: str = "analytic", discounting: str = "pde",
               check: bool = True) -> float:
    """First-order correction term of the expansion.

    ``discounting="pde"`` (default) discounts the kernel leg only, which is
    what the perturbed pricing equation gives and what simulation confirms
    for ``c != 0``.  ``"split"`` keeps the extra ``e^{c(T−s)}`` inside the
    integrand and ``e^{−cT}`` outside, a net ``e^{−2cs}``.  Both coincide at
    ``c = 0``.

    With ``check`` the outer rule is rerun at twice the node count and a
    :class:`ConvergenceWarning` is issued if the two differ by more than
    1e-4 relative.
    """
    quad = quad or QuadConfig()
    if greeks not in GREEK_SOURCES:
        raise ValueError(f"greeks must be one of {GREEK_SOURCES}")
    if discounting not in DISCOUNTING:
        raise ValueError(f"discounting must be one of {DISCOUNTING}")
    if o.is_degenerate(m.S) or m.eps == 0.0:
        return 0.0
    if m.rho * m.nu == 0.0 and m.lam * (m.theta - m.sigma) == 0.0:
        return 0.0
    val = m.eps * _correction_integral(m, o, quad, greeks, discounting)
    if check:
        fine = QuadConfig(2 * quad.n_time, quad.n_space, quad.space_width,
                          quad.s_floor, quad.endpoint_map)
        val2 = m.eps * _correction_integral(m, o, fine, greeks, discounting)
        if abs(val2 - val) > 1e-4 * max(abs(val2), 1e-12):
            warnings.warn(
                f"correction not converged: n_time={quad.n_time} gives {val:.8g}, "
                f"{2 * quad.n_time} gives {val2:.8g}", ConvergenceWarning, stacklevel=2)
    return val


def price_ae(m: ModelParams, o: BarrierOption, order: int = 1,
             quad: QuadConfig | None = None, **kw) -> PriceResult:
    """Expansion price of order 0 or 1.

    ``value`` is clamped at zero; ``zeroth`` and ``correction`` keep the raw terms.
    """
    if order not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {order}")
    if o.is_degenerate(m.S):
        return PriceResult(0.0, 0.0, 0.0, None, f"ae{order}")
    zeroth = float(bs_barrier.uoc_price(BsInputs(m.x, m.sigma, m.c, m.q, o.T, o.K, o.H)))
    if order == 0:
        return PriceResult(zeroth, zeroth, 0.0, None, "ae0")
    corr = correction(m, o, quad, **kw)
    raw = zeroth + corr
    if raw < 0:
        warnings.warn(f"first-order price {raw:.6g} < 0 clamped to 0", RuntimeWarning,
                      stacklevel=2)
    return PriceResult(max(raw, 0.0), zeroth, corr, None, "ae1", clamped=raw < 0)
