"""Self-certification suites behind ``uoc-ae check``.

Each suite returns a list of :class:`CheckLine` records; a suite passes when
every line does.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import bs_barrier as bs
from .cases import CASES
from .expansion import correction
from .kernel import KernelParams, apply_semigroup, survival_probability
from .params import QuadConfig

GREEK_GRID = dict(
    sigma=(0.1, 0.2, 0.3),
    K=(95.0, 100.0, 105.0),
    H=(120.0, 130.0, 140.0),
    T=(0.25, 1.0),
    rates=((0.0, 0.0), (0.02, 0.01)),
)


@dataclass
class CheckLine:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance

    def render(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<44s} max|dev| = {self.deviation:.3e}  (tol {self.tolerance:.1e})"


def greek_grid():
    for sig, K, H, T, (c, q) in itertools.product(*GREEK_GRID.values()):
        yield bs.BsInputs.from_spot(100.0, sig, c, q, T, K, H)


def check_greeks(printed: bool = False):
    """Analytic vega/vanna against central differences on the 108-point grid.

    The tolerance is scaled per point, so the reported deviation is the worst
    ratio of error to allowed error (pass when <= 1).
    """
    vega_fn = bs.uoc_vega_printed if printed else bs.uoc_vega
    vanna_fn = bs.uoc_vanna_printed if printed else bs.uoc_vanna
    worst_vega = worst_vanna = 0.0
    for inp in greek_grid():
        fv = float(bs.fd_vega(inp, 1e-5))
        fa = float(bs.fd_vanna(inp, 1e-4))
        worst_vega = max(worst_vega, abs(float(vega_fn(inp)) - fv) / max(1e-6, 1e-5 * abs(fv)))
        worst_vanna = max(worst_vanna, abs(float(vanna_fn(inp)) - fa) / max(1e-4, 1e-4 * abs(fa)))
    tag = "printed" if printed else "analytic"
    return [CheckLine(f"vega ({tag}) vs FD, error/tolerance", worst_vega, 1.0),
            CheckLine(f"vanna ({tag}) vs FD, error/tolerance", worst_vanna, 1.0)]


def check_kernel(quad: QuadConfig | None = None):
    quad = quad or QuadConfig()
    H = 120.0
    p = KernelParams.from_barrier(0.2, 0.0, 0.0, H)
    worst = 0.0
    for s, S in itertools.product((0.01, 0.1, 0.5, 1.0), (95.0, 100.0, 115.0)):
        x = math.log(S)
        mass = apply_semigroup(s, np.ones_like, x, p, quad)
        worst = max(worst, abs(mass - survival_probability(s, x, p)))
    lines = [CheckLine("kernel mass vs reflection survival", worst, 1e-10)]

    K = 100.0
    pay = lambda y: np.where(y < p.b, np.maximum(np.exp(y) - K, 0.0), 0.0)  # noqa: E731
    worst = 0.0
    for s in (0.1, 0.5, 1.0):
        got = apply_semigroup(s, pay, math.log(100.0), p, quad, breaks=(math.log(K),))
        ref = float(bs.uoc_price(bs.BsInputs.from_spot(100.0, 0.2, 0.0, 0.0, s, K, H)))
        worst = max(worst, abs(got - ref) / ref)
    lines.append(CheckLine("semigroup on payoff vs closed form (rel)", worst, 1e-6))
    return lines


def check_convergence(case_ids=(1,), quad: QuadConfig | None = None):
    quad = quad or QuadConfig()
    fine = QuadConfig(2 * quad.n_time, 2 * quad.n_space, quad.space_width, quad.s_floor,
                      quad.endpoint_map)
    worst = 0.0
    for cid in case_ids:
        case = CASES[cid]
        m = case.model()
        for K in case.strikes:
            o = case.option(K)
            a = correction(m, o, quad, check=False)
            b = correction(m, o, fine, check=False)
            worst = max(worst, abs(a - b) / abs(b))
    ids = ",".join(map(str, case_ids))
    return [CheckLine(f"correction doubling delta, cases {ids} (rel)", worst, 1e-4)]


SUITES = {"greeks": check_greeks, "kernel": check_kernel, "convergence": check_convergence}
