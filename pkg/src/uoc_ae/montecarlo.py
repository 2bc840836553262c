"""Monte Carlo benchmark for the stochastic-volatility up-and-out call.

Paths are simulated in fixed blocks.  Each block owns a random stream spawned
from the seed and its block index, and block statistics are merged in block
order, so the estimate does not depend on how blocks are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .params import BarrierOption, ConfigError, ModelParams

SCHEMES = ("log-euler", "euler-full-truncation")


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 200_000
    n_steps: int = 10_000
    seed: int = 20121231
    scheme: str = "log-euler"
    bridge_correction: bool = False
    block_size: int = 8192

    def __post_init__(self):
        if self.n_paths < 1 or self.n_steps < 1:
            raise ConfigError("n_paths and n_steps must be >= 1")
        if self.block_size < 1:
            raise ConfigError("block_size must be >= 1")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")

    @classmethod
    def benchmark(cls, seed: int = 20121231):
        """The 100,000-step, 1,000,000-path benchmark setting."""
        return cls(n_paths=1_000_000, n_steps=100_000, seed=seed)


@dataclass(frozen=True)
class McEstimate:
    price: float
    stderr: float
    knockout_fraction: float


def bridge_survival(x_i, x_j, sigma_step, dt, b):
    """Probability that a Brownian bridge from ``x_i`` to ``x_j`` stays below ``b``."""
    gap = np.maximum(b - np.asarray(x_i, float), 0.0) * np.maximum(b - np.asarray(x_j, float), 0.0)
    out = -np.expm1(-2.0 * gap / (np.asarray(sigma_step, float) ** 2 * dt))
    return out[()] if np.ndim(out) == 0 else out


# steps between compactions of dead paths
_COMPACT_EVERY = 32


def _simulate_block(args):
    m, o, cfg, block, n = args
    ss = np.random.SeedSequence(cfg.seed, spawn_key=(block,))
    rng = np.random.Generator(np.random.PCG64(ss))
    T, N = o.T, cfg.n_steps
    dt = T / N
    sdt = math.sqrt(dt)
    b = math.log(o.H)
    drift = m.c - m.q
    en, el = m.eps * m.nu, m.eps * m.lam
    stoch_vol = en != 0.0 or el != 0.0
    rho, rho_c = m.rho, math.sqrt(max(1.0 - m.rho**2, 0.0))

    x = np.full(n, m.x)
    sig = np.full(n, m.sigma)
    w = np.ones(n)
    idx = np.arange(n)  # original slot of each live path

    for step in range(N):
        k = x.size
        z1 = rng.standard_normal(k)
        if cfg.scheme == "euler-full-truncation":
            sp = np.maximum(sig, 0.0)
        else:
            sp = sig
        x_new = x + (drift - 0.5 * sp * sp) * dt + sp * sdt * z1
        if cfg.bridge_correction:
            w *= np.where(x_new < b, bridge_survival(x, x_new, sp, dt, b), 0.0)
        else:
            w[x_new >= b] = 0.0
        if stoch_vol:
            z2 = rng.standard_normal(k)
            dB2 = sdt * (rho * z1 + rho_c * z2)
            if cfg.scheme == "log-euler":
                sig = sig * np.exp((el * (m.theta - sig) / sig - 0.5 * en * en) * dt + en * dB2)
            else:
                sig = sig + el * (m.theta - sp) * dt + en * sp * dB2
        x = x_new
        if (step + 1) % _COMPACT_EVERY == 0:
            live = w > 0.0
            if not live.all():
                x, sig, w, idx = x[live], sig[live], w[live], idx[live]
            if x.size == 0:
                break

    payoff = np.zeros(n)
    payoff[idx] = math.exp(-m.c * T) * w * np.maximum(np.exp(x) - o.K, 0.0)
    survival = np.zeros(n)
    survival[idx] = w
    mean = float(payoff.mean())
    m2 = float(np.sum((payoff - mean) ** 2))
    return n, mean, m2, float(survival.sum())


def _blocks(cfg: McConfig):
    full, rest = divmod(cfg.n_paths, cfg.block_size)
    sizes = [cfg.block_size] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def simulate(m: ModelParams, o: BarrierOption, cfg: McConfig | None = None,
             workers: int = 1) -> McEstimate:
    """Discounted up-and-out call price by simulation, with its standard error."""
    cfg = cfg or McConfig()
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    if m.S >= o.H:
        return McEstimate(0.0, 0.0, 1.0)
    jobs = [(m, o, cfg, block, n) for block, n in _blocks(cfg)]
    if workers == 1:
        results = [_simulate_block(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_simulate_block, jobs))

    # pairwise merge of (count, mean, M2) in block order
    n_tot, mean, m2 = 0, 0.0, 0.0
    surv = math.fsum(r[3] for r in results)
    for n, mu, s2, _ in results:
        tot = n_tot + n
        delta = mu - mean
        mean += delta * n / tot
        m2 += s2 + delta * delta * n_tot * n / tot
        n_tot = tot
    var = m2 / (n_tot - 1) if n_tot > 1 else 0.0
    return McEstimate(mean, math.sqrt(var / n_tot), 1.0 - surv / n_tot)
