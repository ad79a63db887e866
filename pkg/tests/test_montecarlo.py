import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from hdiffusion.diffusion import position_variate, preset, shd
from hdiffusion.link import LinkConfig, sep_upper_bound
from hdiffusion.montecarlo import (
    CtrwConfig,
    RngStream,
    geometric_mean,
    ks_statistic,
    mittag_leffler_waits,
    sample_fpt,
    sample_mwright,
    sample_onesided_stable,
    sample_position,
    sample_symmetric_stable,
    simulate_fpt_ctrw,
    simulate_sep,
    wilson_interval,
)
from hdiffusion.noise import CONSTANTS, noise_model

from conftest import SQRT_PI, levy_cdf

A, K = 1e-5, 1e-10


def within_3sigma(samples, expected):
    x = np.asarray(samples, dtype=float)
    return abs(x.mean() - expected) <= 3 * x.std(ddof=1) / math.sqrt(x.size)


# -- stable samplers ----------------------------------------------------------


def test_gaussian_stable_has_variance_two(rng):
    x = sample_symmetric_stable(2.0, 1.0, rng, 10**6)
    # the variance of x**2 for N(0, 2) is 2 * 2**2
    assert abs(np.mean(x * x) - 2.0) <= 3 * math.sqrt(8.0 / x.size)


def test_cauchy_quartiles(rng):
    n = 10**6
    x = sample_symmetric_stable(1.0, 1.0, rng, n)
    # quantile standard error: sqrt(p(1-p)/n) / f(q); the Cauchy density at 0 and +-1
    se_median = math.sqrt(0.25 / n) * math.pi
    se_quartile = math.sqrt(0.1875 / n) * 2 * math.pi
    q1, med, q3 = np.quantile(x, [0.25, 0.5, 0.75])
    assert abs(med) <= 3 * se_median
    assert abs((q3 - q1) - 2.0) <= 3 * math.sqrt(2) * se_quartile


@pytest.mark.parametrize("alpha", [0.6, 1.0, 1.5, 2.0])
def test_stable_sign_symmetry(rng, alpha):
    x = sample_symmetric_stable(alpha, 1.0, rng, 10**5)
    assert stats.ks_2samp(x, -sample_symmetric_stable(alpha, 1.0, rng, 10**5)).statistic < 0.01


@pytest.mark.parametrize("alpha,gamma", [(0.8, 1.0), (1.5, 0.3), (1.9, 2.0)])
def test_stable_characteristic_function(rng, alpha, gamma):
    x = sample_symmetric_stable(alpha, gamma, rng, 10**6)
    for w in (0.3, 1.0):
        c = np.cos(w * x)
        assert within_3sigma(c, math.exp(-gamma * w**alpha))


def test_onesided_half_is_levy(rng):
    # Laplace exp(-sqrt(s)) is the first-passage law to a = 1 of the unit-K walk
    gamma = math.cos(math.pi / 4)
    x = sample_onesided_stable(0.5, gamma, rng, 10**5)
    assert np.all(x > 0)
    assert ks_statistic(x, levy_cdf) < 0.01


def test_onesided_laplace_transform(rng):
    alpha, gamma = 0.7, 1.0
    x = sample_onesided_stable(alpha, gamma, rng, 10**6)
    assert np.all(x > 0)
    assert within_3sigma(np.exp(-x), math.exp(-gamma / math.cos(math.pi * alpha / 2)))


def test_onesided_rejects_index():
    with pytest.raises(ValueError):
        sample_onesided_stable(1.2, 1.0, np.random.default_rng(0), 3)


def test_mwright_half_is_half_normal(rng):
    d = sample_mwright(0.5, 1.0, rng, 10**5)
    assert np.all(d > 0)
    assert ks_statistic(d, lambda v: stats.halfnorm.cdf(v, scale=math.sqrt(2))) < 0.01
    assert within_3sigma(d, 2 / SQRT_PI)


@pytest.mark.parametrize("alpha2", [0.3, 0.7])
def test_mwright_matches_analytic_law(rng, alpha2):
    from hdiffusion.diffusion import mwright_directing

    law = mwright_directing(alpha2).law_at_1
    d = sample_mwright(alpha2, 1.0, rng, 10**5)
    assert ks_statistic(d, law.cdf) < 0.01


def test_mwright_unit_index_is_a_point_mass(rng):
    np.testing.assert_array_equal(sample_mwright(1.0, 2.5, rng, 4), [2.5] * 4)


@pytest.mark.parametrize("nu", [0.3, 0.5, 0.8])
def test_mittag_leffler_waits_laplace(rng, nu):
    w = mittag_leffler_waits(nu, np.ones(10**6), rng)
    for s in (0.5, 2.0):
        assert within_3sigma(np.exp(-s * w), 1 / (1 + s**nu))


def test_mittag_leffler_sums_are_convolutions(rng):
    nu = 0.6
    summed = mittag_leffler_waits(nu, np.full(10**5, 3.0), rng)
    direct = mittag_leffler_waits(nu, np.ones((10**5, 3)), rng).sum(axis=1)
    assert stats.ks_2samp(summed, direct).statistic < 0.01


# -- position and FPT ---------------------------------------------------------


def test_bm_position_variance(rng):
    x = sample_position(preset("BM"), 1.0, rng, 10**6)
    assert abs(np.mean(x * x) - 2.0) <= 3 * math.sqrt(8.0 / x.size)


def test_subdiffusive_position_against_analytic(rng):
    spec = shd(2.0, 0.5, 1.0)
    x = sample_position(spec, 4.0, rng, 10**5)
    assert ks_statistic(x, position_variate(spec, 4.0).cdf) < 0.01


@pytest.mark.parametrize("name,kw", [("ST-FD", {"alpha": 1.5, "beta": 0.7}), ("GBM", {"beta": 0.6})])
def test_position_time_scaling(rng, name, kw):
    spec = preset(name, **kw)
    x1 = sample_position(spec, 1.0, rng, 10**5)
    x4 = sample_position(spec, 4.0, rng, 10**5)
    assert stats.ks_2samp(x4, 4.0**spec.exponent * x1).statistic < 0.01


def test_fpt_samples_follow_the_noise_law(rng):
    spec = shd(1.8, 1.0, K)
    t = sample_fpt(spec, A, rng, 10**5)
    assert ks_statistic(t, noise_model(spec, A).fpt.cdf) < 0.01


def test_bm_geometric_power(rng):
    t = sample_fpt(preset("BM"), 1.0, rng, 10**6)
    assert geometric_mean(t) == pytest.approx(CONSTANTS.G, rel=0.02)


# -- CTRW ---------------------------------------------------------------------


def test_matched_scales():
    for a1, a2 in ((2.0, 1.0), (2.0, 0.5), (1.8, 1.0)):
        cfg = CtrwConfig.matched(shd(a1, a2, K), A, 1000)
        assert cfg.h == pytest.approx(A / 1000)
        assert cfg.h**a1 / cfg.tau0**a2 == pytest.approx(K, rel=1e-12)


def test_ctrw_normal_diffusion(rng):
    spec = shd(2.0, 1.0, K)
    res = simulate_fpt_ctrw(spec, A, CtrwConfig.matched(spec, A, 1000), rng, 10**4)
    assert res.censored_fraction < 0.01
    assert ks_statistic(res.times, lambda t: levy_cdf(t, A / math.sqrt(K))) < 0.02


def test_ctrw_subdiffusive_survival_slope(rng):
    spec = shd(2.0, 0.5, K)
    res = simulate_fpt_ctrw(spec, A, CtrwConfig.matched(spec, A, 1000), rng, 10**4)
    t = np.logspace(2, 6, 9)
    surv = np.array([np.mean(res.times > ti) for ti in t])
    assert np.polyfit(np.log(t), np.log(surv), 1)[0] == pytest.approx(-0.25, abs=0.02)


def test_ctrw_censoring_is_reported(rng):
    spec = shd(2.0, 1.0, K)
    cfg = CtrwConfig.matched(spec, A, 100, max_steps=10)
    res = simulate_fpt_ctrw(spec, A, cfg, rng, 200)
    assert res.censored_fraction > 0.9
    assert np.all(np.isinf(res.times) == np.isinf(res.steps))


def test_ctrw_superdiffusive_runs_with_few_steps(rng):
    spec = shd(1.8, 1.0, K)
    cfg = CtrwConfig.matched(spec, A, 10, max_steps=10**5)
    res = simulate_fpt_ctrw(spec, A, cfg, rng, 500)
    done = np.isfinite(res.steps)
    assert np.all(res.steps[done] >= 1) and np.all(res.times[done] > 0)
    assert res.censored_fraction < 0.05


def test_ctrw_single_jump_crossing(rng):
    # a level below one typical jump is mostly crossed at the first landing
    spec = shd(2.0, 1.0, K)
    res = simulate_fpt_ctrw(spec, A, CtrwConfig(A * 100, 1.0), rng, 10**4)
    assert np.mean(res.steps == 1) == pytest.approx(0.5, abs=0.02)


def test_ctrw_rejects_other_compositions():
    with pytest.raises(ValueError):
        CtrwConfig.matched(preset("S-FD", alpha=1.5, beta=0.7), A)
    with pytest.raises(ValueError):
        CtrwConfig(0.0, 1.0)


# -- SEP ----------------------------------------------------------------------


@pytest.mark.parametrize("M", [2, 4])
def test_sep_at_vanishing_symbol_time(rng, M):
    est = simulate_sep(LinkConfig(M, 1, 1e-12, 1.0, preset("BM")), 10**5, rng)
    p = (M - 1) / M
    assert abs(est.p_hat - p) <= 3 * math.sqrt(p * (1 - p) / est.trials)


def test_bm_sep_below_bound(rng):
    cfg = LinkConfig(2, 1, 2.0, 1.0, preset("BM"))
    est = simulate_sep(cfg, 10**5, rng)
    assert est.p_hat <= sep_upper_bound(cfg) + 3 * math.sqrt(0.26 * 0.74 / est.trials)
    assert sep_upper_bound(cfg) == pytest.approx(0.260, abs=5e-4)


def test_molecule_diversity_lowers_sep(rng):
    base = LinkConfig(2, 1, 40.0, 1.0, preset("BM"))
    one = simulate_sep(base, 10**5, rng)
    four = simulate_sep(LinkConfig(2, 4, 40.0, 1.0, preset("BM")), 10**5, rng)
    sd = math.sqrt(one.p_hat * (1 - one.p_hat) / one.trials + four.p_hat * (1 - four.p_hat) / four.trials)
    assert one.p_hat - four.p_hat > 3 * sd


def test_sep_chunking_is_exact():
    cfg = LinkConfig(4, 2, 3.0, 1.0, preset("BM"))
    a = simulate_sep(cfg, 1000, np.random.default_rng(1), chunk=1000)
    b = simulate_sep(cfg, 1000, np.random.default_rng(1), chunk=1000)
    assert a == b
    assert a.ci_low <= a.p_hat <= a.ci_high


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == pytest.approx(0.0, abs=1e-15) and 0 < hi < 0.05
    lo, hi = wilson_interval(50, 100)
    assert lo == pytest.approx(1 - hi, abs=1e-14)


# -- helpers ------------------------------------------------------------------


def test_geometric_mean_examples():
    assert geometric_mean([1, 1, 1]) == 1.0
    assert geometric_mean([1, 4]) == pytest.approx(2.0, rel=1e-15)


@pytest.mark.parametrize("bad", [[1.0, 0.0], [2.0, -1.0], []])
def test_geometric_mean_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        geometric_mean(bad)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(1e-200, 1e200), min_size=1, max_size=50))
def test_geometric_mean_is_scale_equivariant(xs):
    x = np.asarray(xs)
    assert geometric_mean(x * 8.0) == pytest.approx(8.0 * geometric_mean(x), rel=1e-12)


def test_ks_statistic_agrees_with_scipy(rng):
    x = rng.standard_normal(10**4)
    assert ks_statistic(x, stats.norm.cdf) == pytest.approx(stats.kstest(x, stats.norm.cdf).statistic, abs=1e-6)


def test_ks_statistic_counts_censored_samples(rng):
    x = np.r_[rng.standard_normal(900), np.full(100, np.inf)]
    assert ks_statistic(x, stats.norm.cdf) >= 0.1


# -- determinism --------------------------------------------------------------


def test_streams_are_reproducible():
    s = RngStream(123, 4)
    a = sample_position(preset("GBM", beta=0.6), 1.0, s.generator(), 1000)
    b = sample_position(preset("GBM", beta=0.6), 1.0, s.generator(), 1000)
    assert a.tobytes() == b.tobytes()


def test_distinct_streams_are_independent():
    x = RngStream(123, 0).generator().standard_normal(10**5)
    y = RngStream(123, 1).generator().standard_normal(10**5)
    assert abs(np.corrcoef(x, y)[0, 1]) < 3 / math.sqrt(x.size)
    assert RngStream(1, 0).child(0) != RngStream(1, 0).child(1)
