"""Black-Scholes up-and-out call: price, vega, vanna and FD oracles.

The price is written as the vanilla call minus the up-and-in call (Hull's
representation).  Every piece has the shape ``±exp(L(x, σ)) N(Z(x, σ))`` with
``L`` linear in ``x`` and ``Z`` affine in ``x``, so the σ-derivative and the
mixed (x, σ)-derivative follow from the chain rule term by term.

All functions broadcast over numpy arrays in ``x`` and ``T``; the remaining
inputs are scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import log_ndtr, ndtr

from .params import DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def norm_pdf(z):
    z = np.asarray(z, dtype=float)
    out = np.exp(-0.5 * z * z) / SQRT_2PI
    return out[()] if out.ndim == 0 else out


def norm_cdf(z):
    # scipy's ndtr is erfc-based and accurate to ~1 ulp in both tails
    out = ndtr(np.asarray(z, dtype=float))
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class BsInputs:
    """Black-Scholes barrier inputs.

    ``x`` is the log-spot, ``c`` and ``q`` the domestic and foreign rates.
    ``x`` and ``T`` may be numpy arrays of a common broadcast shape.
    """

    x: float
    sigma: float
    c: float
    q: float
    T: float
    K: float
    H: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")
        if not np.all(np.asarray(self.T) > 0):
            raise DomainError("T must be > 0")
        if not self.K > 0:
            raise DomainError(f"K must be > 0, got {self.K}")
        if not self.H > 0:
            raise DomainError(f"H must be > 0, got {self.H}")
        if not np.all(np.isfinite(self.x)):
            raise DomainError("x must be finite")

    @classmethod
    def from_spot(cls, S, sigma, c, q, T, K, H):
        return cls(np.log(S), sigma, c, q, T, K, H)

    @property
    def lam_bs(self) -> float:
        return (self.c - self.q) / self.sigma**2 + 0.5

    def derived(self) -> dict:
        """The auxiliary quantities d1, d2, x1, x2, y, y1, y', y1'."""
        x, sig, T = np.asarray(self.x, float), self.sigma, np.asarray(self.T, float)
        s = sig * np.sqrt(T)
        m = (self.c - self.q) * T
        k, b = math.log(self.K), math.log(self.H)
        d1 = (x - k + m) / s + 0.5 * s
        x1 = (x - b + m) / s + 0.5 * s
        y = (2 * b - x - k + m) / s + 0.5 * s
        y1 = (b - x + m) / s + 0.5 * s
        return dict(d1=d1, d2=d1 - s, x1=x1, x2=x1 - s, y=y, y1=y1,
                    yp=y - s, y1p=y1 - s, lam=self.lam_bs)


def _check_log_form(inp: BsInputs):
    return np.asarray(inp.x, float), np.asarray(inp.T, float)


def vanilla_call(inp: BsInputs):
    x, T = _check_log_form(inp)
    d = inp.derived()
    out = (np.exp(x - inp.q * T) * ndtr(d["d1"])
           - inp.K * np.exp(-inp.c * T) * ndtr(d["d2"]))
    return out[()] if out.ndim == 0 else out


def _terms(inp: BsInputs):
    """Yield (sign, L, L_x, L_s, L_xs, Z, Z_x, Z_s, Z_xs) for each piece."""
    x, T = _check_log_form(inp)
    sig, c, q = inp.sigma, inp.c, inp.q
    k, b = math.log(inp.K), math.log(inp.H)
    s = sig * np.sqrt(T)
    m = (c - q) * T
    g = 2.0 * inp.lam_bs  # exponent of H/S in the reflected terms
    g_s = -4.0 * (c - q) / sig**3  # d g / d sigma

    # (sign, L-type, p, e) with Z = (p + x)/s + e*s
    pieces = (
        (+1, "spot", -k + m, +0.5),            # vanilla, N(d1)
        (-1, "strike", -k + m, -0.5),          # vanilla, N(d2)
        (-1, "spot", -b + m, +0.5),            # up-and-in, N(x1)
        (+1, "strike", -b + m, -0.5),          # up-and-in, N(x2)
        (+1, "spot_refl", -(2 * b - k + m), -0.5),   # N(-y)
        (-1, "spot_refl", -(b + m), -0.5),           # N(-y1)
        (-1, "strike_refl", -(2 * b - k + m), +0.5),  # N(-y')
        (+1, "strike_refl", -(b + m), +0.5),          # N(-y1')
    )
    zero = np.zeros_like(x + T)
    for sign, kind, p, e in pieces:
        if kind == "spot":
            L, Lx, Ls, Lxs = x - q * T, 1.0 + zero, zero, zero
        elif kind == "strike":
            L, Lx, Ls, Lxs = k - c * T + zero, zero, zero, zero
        elif kind == "spot_refl":
            L = x - q * T + g * (b - x)
            Lx, Ls, Lxs = 1.0 - g + zero, g_s * (b - x), -g_s + zero
        else:
            L = k - c * T + (g - 2.0) * (b - x)
            Lx, Ls, Lxs = -(g - 2.0) + zero, g_s * (b - x), -g_s + zero
        a = p + x
        Z = a / s + e * s
        Zx = 1.0 / s
        Zs = -a / (sig * s) + e * s / sig
        Zxs = -1.0 / (sig * s)
        yield sign, L, Lx, Ls, Lxs, Z, Zx, Zs, Zxs


def _knocked_mask(inp: BsInputs):
    x, T = _check_log_form(inp)
    live = (x < math.log(inp.H)) & (inp.K < inp.H)
    return np.broadcast_to(live, np.broadcast(x, T).shape)


def _finish(out, live):
    out = np.where(live, out, 0.0)
    return out[()] if out.ndim == 0 else out


def uoc_price(inp: BsInputs):
    """Up-and-out call price; zero once knocked out or when ``K >= H``."""
    live = _knocked_mask(inp)
    total = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for sign, L, *_, Z, _zx, _zs, _zxs in _terms(inp):
            total = total + sign * np.exp(L + log_ndtr(Z))
    return _finish(total, live)


def uoc_vega(inp: BsInputs):
    """dPrice/dσ from the term-wise chain rule."""
    live = _knocked_mask(inp)
    total = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for sign, L, Lx, Ls, Lxs, Z, Zx, Zs, Zxs in _terms(inp):
            cdf = np.exp(L + log_ndtr(Z))
            pdf = np.exp(L - 0.5 * Z * Z - LOG_SQRT_2PI)
            total = total + sign * (Ls * cdf + Zs * pdf)
    return _finish(total, live)


def uoc_vanna(inp: BsInputs):
    """d²Price/dx dσ from the term-wise chain rule."""
    live = _knocked_mask(inp)
    total = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for sign, L, Lx, Ls, Lxs, Z, Zx, Zs, Zxs in _terms(inp):
            cdf = np.exp(L + log_ndtr(Z))
            pdf = np.exp(L - 0.5 * Z * Z - LOG_SQRT_2PI)
            d = ((Ls * Lx + Lxs) * cdf
                 + (Ls * Zx + Lx * Zs - Z * Zs * Zx + Zxs) * pdf)
            total = total + sign * d
    return _finish(total, live)


def uoc_vega_printed(inp: BsInputs):
    """The published closed form for dPrice/dσ, transcribed term by term.

    Kept for comparison only; it does not pass the FD certification and the
    pricing engine uses :func:`uoc_vega`.
    """
    x, T = _check_log_form(inp)
    d = inp.derived()
    sig, c, q, K, H = inp.sigma, inp.c, inp.q, inp.K, inp.H
    b, lam, rt = math.log(H), d["lam"], np.sqrt(T)
    n, N = norm_pdf, norm_cdf
    y, y1, yp, y1p = d["y"], d["y1"], d["yp"], d["y1p"]
    R = H / np.exp(x)
    dq, dc, S = np.exp(-q * T), np.exp(-c * T), np.exp(x)
    coef = (b - x) * (-4.0 * (c - q) / sig**3)
    out = (dq * S * n(d["d1"]) * rt
           - dq * S * n(d["x1"]) * rt - (H - K) * dc * n(d["x2"]) * (-d["x1"] / sig)
           + S * dq * R ** (2 * lam) * (coef * (N(-y) - N(-y1))
                                         + (n(y) * yp / sig - n(y1) * y1p / sig))
           - K * dc * R ** (2 * lam - 2) * (coef * (N(-yp) - N(-y1p))
                                             + (n(yp) * y / sig - n(y1p) * y1 / sig)))
    return _finish(out, _knocked_mask(inp))


def uoc_vanna_printed(inp: BsInputs):
    """The published closed form for d²Price/dx dσ, transcribed term by term.

    Comparison only, see :func:`uoc_vega_printed`.
    """
    x, T = _check_log_form(inp)
    d = inp.derived()
    sig, c, q, K, H = inp.sigma, inp.c, inp.q, inp.K, inp.H
    b, lam, rt = math.log(H), d["lam"], np.sqrt(T)
    n, N = norm_pdf, norm_cdf
    y, y1, yp, y1p = d["y"], d["y1"], d["yp"], d["y1p"]
    R = H / np.exp(x)
    dq, dc, S = np.exp(-q * T), np.exp(-c * T), np.exp(x)
    a = 4.0 * (c - q) / sig**3
    st, s2t = sig * rt, sig**2 * rt
    Rs, Rk = R ** (2 * lam), R ** (2 * lam - 2)
    out = (dq * S * n(d["d1"]) * (-d["d2"]) / sig
           - dq * S * n(d["x1"]) * (-d["x2"]) / sig
           - (H - K) * dc * n(d["x2"]) / s2t * (d["x1"] * d["x2"] - 1)
           + a * ((-1 + 2 * lam) * (b - x) + 1) * S * dq * Rs * (N(-y) - N(-y1))
           + S * dq * Rs * (n(y) * yp / sig - n(y1) * y1p / sig) * (1 - 2 * lam * Rs)
           - S * dq * Rs * (b - x) * a * (n(y) / st - n(y1) / st)
           + S * dq * Rs * (n(y) / s2t * (y * yp - 1) - n(y1) / s2t * (y1 * y1p - 1))
           - K * dc * (N(yp) - N(y1p)) * (Rk * a * ((2 * lam - 2) * (b - x) + 1))
           + K * dc * Rk * (b - x) * a * (n(yp) / st - n(y1p) / st)
           + K * dc * (2 * lam - 2) * Rk * (n(yp) * y / sig - n(y1p) * y1 / sig)
           - K * dc * Rk * (n(yp) / s2t * (yp * y - 1) - n(y1p) / s2t * (y1p * y1 - 1)))
    return _finish(out, _knocked_mask(inp))


def fd_vega(inp: BsInputs, h: float = 1e-5):
    """Central difference of :func:`uoc_price` in σ."""
    if not 0 < h < inp.sigma / 10:
        raise DomainError(f"step h={h} must satisfy 0 < h < sigma/10")
    up = uoc_price(replace(inp, sigma=inp.sigma + h))
    dn = uoc_price(replace(inp, sigma=inp.sigma - h))
    return (up - dn) / (2.0 * h)


def fd_vanna(inp: BsInputs, h: float = 1e-4):
    """Four-point central difference of :func:`uoc_price` in (x, σ)."""
    if not 0 < h < inp.sigma / 10:
        raise DomainError(f"step h={h} must satisfy 0 < h < sigma/10")
    x = np.asarray(inp.x, float)

    def p(dx, ds):
        return uoc_price(replace(inp, x=x + dx, sigma=inp.sigma + ds))

    return (p(h, h) - p(h, -h) - p(-h, h) + p(-h, -h)) / (4.0 * h * h)


def fd_vega_richardson(inp: BsInputs, h: float = 1e-3):
    """Richardson-extrapolated FD vega from steps ``h`` and ``h/2``."""
    return (4.0 * fd_vega(inp, h / 2) - fd_vega(inp, h)) / 3.0


def fd_vanna_richardson(inp: BsInputs, h: float = 1e-3):
    return (4.0 * fd_vanna(inp, h / 2) - fd_vanna(inp, h)) / 3.0
