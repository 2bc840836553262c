import math

import numpy as np
import pytest

from uoc_ae import bs_barrier as bs
from uoc_ae.kernel import KernelParams, killed_density
from uoc_ae.montecarlo import McConfig, bridge_survival, simulate
from uoc_ae.params import BarrierOption, ConfigError, ModelParams

BS = ModelParams.from_products(100, 0.2)
SV = ModelParams.from_products(100, 0.2, eps_nu=0.1, rho=-0.5)
OPT = BarrierOption(100.0, 120.0, 1.0)


def closed_form(m, o):
    return float(bs.uoc_price(bs.BsInputs(m.x, m.sigma, m.c, m.q, o.T, o.K, o.H)))


def test_bridge_survival_limits():
    b = math.log(120)
    assert bridge_survival(4.6, b, 0.2, 1e-3, b) == 0.0
    assert bridge_survival(b, 4.6, 0.2, 1e-3, b) == 0.0
    assert bridge_survival(4.0, 4.0, 0.2, 1e-3, b) == pytest.approx(1.0, abs=1e-15)
    assert 0.0 < bridge_survival(b - 0.005, b - 0.004, 0.2, 1e-3, b) < 1.0


def test_bridge_weight_is_kernel_reflection_factor():
    b, sig, dt = math.log(120), 0.25, 0.01
    p = KernelParams(sig, 0.03, 0.01, b)
    xi, xj = np.log(110.0), np.log(np.array([105.0, 112.0, 119.0]))
    gauss = np.exp(-(xj - xi - p.mu * dt) ** 2 / (2 * sig**2 * dt)) / math.sqrt(2 * math.pi * sig**2 * dt)
    ratio = killed_density(dt, xi, xj, p) / (math.exp(-p.c * dt) * gauss)
    np.testing.assert_allclose(ratio, bridge_survival(xi, xj, sig, dt, b), rtol=1e-13)


def test_config_validation():
    with pytest.raises(ConfigError):
        McConfig(n_paths=0)
    with pytest.raises(ConfigError):
        McConfig(n_steps=0)
    with pytest.raises(ConfigError):
        McConfig(scheme="milstein")
    with pytest.raises(ConfigError):
        simulate(BS, OPT, McConfig(100, 10), workers=0)


def test_spot_at_or_above_barrier():
    est = simulate(ModelParams.from_products(125, 0.2), OPT, McConfig(100, 10))
    assert (est.price, est.knockout_fraction) == (0.0, 1.0)


def test_deterministic_and_worker_independent():
    cfg = McConfig(n_paths=5000, n_steps=50, seed=11, block_size=1024)
    a = simulate(SV, OPT, cfg)
    b = simulate(SV, OPT, cfg)
    c = simulate(SV, OPT, cfg, workers=3)
    assert a == b == c
    assert simulate(SV, OPT, McConfig(5000, 50, seed=12, block_size=1024)) != a


def test_stderr_scaling():
    small = simulate(BS, OPT, McConfig(20_000, 50, seed=1))
    large = simulate(BS, OPT, McConfig(80_000, 50, seed=2))
    assert large.stderr == pytest.approx(small.stderr / 2, rel=0.2)
    assert 0 <= large.knockout_fraction <= 1


def test_zero_eps_bridge_matches_closed_form():
    est = simulate(BS, OPT, McConfig(100_000, 200, seed=5, bridge_correction=True))
    assert abs(est.price - closed_form(BS, OPT)) < 3 * est.stderr


def test_bridge_removes_monitoring_bias():
    # common random numbers: identical seeds, only the monitoring rule differs
    hard = simulate(BS, OPT, McConfig(50_000, 100, seed=9))
    bridged = simulate(BS, OPT, McConfig(50_000, 100, seed=9, bridge_correction=True))
    assert bridged.price < hard.price
    assert bridged.knockout_fraction > hard.knockout_fraction
    # coarse hard monitoring overprices by well over the sampling noise
    assert hard.price - closed_form(BS, OPT) > 3 * hard.stderr


def test_hard_kill_price_decreases_with_monitoring_frequency():
    coarse = simulate(BS, OPT, McConfig(50_000, 20, seed=4))
    fine = simulate(BS, OPT, McConfig(50_000, 500, seed=4))
    assert fine.price < coarse.price + 3 * math.hypot(fine.stderr, coarse.stderr)


def test_schemes_agree_without_mean_reversion():
    a = simulate(SV, OPT, McConfig(60_000, 200, seed=3, bridge_correction=True))
    b = simulate(SV, OPT, McConfig(60_000, 200, seed=3, scheme="euler-full-truncation",
                                   bridge_correction=True))
    # same normals drive both; the vol paths differ only by discretisation
    assert abs(a.price - b.price) < 3 * a.stderr


def test_mean_reverting_volatility_runs():
    m = ModelParams(100, 0.2, eps=0.5, lam=2.0, theta=0.3, nu=0.6, rho=-0.4)
    est = simulate(m, OPT, McConfig(20_000, 100, seed=8, scheme="euler-full-truncation"))
    assert est.price > 0 and math.isfinite(est.stderr)


def test_strike_above_barrier_is_worthless():
    est = simulate(BS, BarrierOption(130.0, 120.0, 1.0), McConfig(2000, 20))
    assert est.price == 0.0


@pytest.mark.slow
def test_nonzero_rate_discounting_matches_simulation():
    # the rho-odd part of the price isolates the first-order term up to O(eps^3)
    from uoc_ae.expansion import correction

    o = BarrierOption(100.0, 130.0, 1.0)
    plus = ModelParams.from_products(100, 0.2, c=0.1, eps_nu=0.2, rho=0.7)
    minus = ModelParams.from_products(100, 0.2, c=0.1, eps_nu=0.2, rho=-0.7)
    cfg = McConfig(1_048_576, 500, seed=7, bridge_correction=True)
    a, b = simulate(plus, o, cfg), simulate(minus, o, cfg)
    odd = 0.5 * (a.price - b.price)
    se = 0.5 * math.hypot(a.stderr, b.stderr)  # ignores the positive CRN correlation
    assert abs(correction(plus, o, discounting="pde") - odd) < 3 * se
    assert abs(correction(plus, o, discounting="split") - odd) > 5 * se
