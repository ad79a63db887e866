import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdiffusion.diffusion import DiffusionSpec, make_shd, preset, shd, stable_parent
from hdiffusion.hfunc import integrate_kernel
from hdiffusion.montecarlo import geometric_mean, sample_fpt
from hdiffusion.noise import (
    CONSTANTS,
    NOISE_TABLE,
    NoiseTableRow,
    fpt_variate,
    fpt_variate_general,
    noise_geometric_power,
    noise_log_moment,
    noise_model,
    noise_power,
    noise_preset_table,
    shd_fpt_params,
    shd_log_moment,
    survival,
    survival_asymptote,
    tail_constant,
    tail_constant_formula,
    tail_constant_shd,
)
from hdiffusion.params import OrderSeq, ParamSeq

from conftest import EULER_G, SQRT_PI, levy_cdf, levy_pdf

PRESET_ARGS = {
    "ST-FD": {"alpha": 1.5, "beta": 0.7},
    "S-FD": {"alpha": 1.5, "beta": 0.7},
    "T-FD": {"beta": 0.5},
    "EK-FD": {"alpha": 0.8, "beta": 0.6},
    "GBM": {"beta": 0.6},
    "FBM": {"alpha": 0.8},
    "BM": {},
}


def test_constants():
    assert CONSTANTS.gamma_e == pytest.approx(0.5772156649, abs=1e-10)
    assert CONSTANTS.G == pytest.approx(1.7810724180, abs=1e-10)
    assert CONSTANTS.G == math.exp(CONSTANTS.gamma_e)
    assert CONSTANTS.G == pytest.approx(EULER_G, rel=1e-15)


# -- the FPT variate ----------------------------------------------------------


@pytest.mark.parametrize("a", [1.0, 1e-5])
def test_bm_fpt_is_levy(a):
    t = np.logspace(-3, 3, 100) * a * a
    np.testing.assert_allclose(fpt_variate(preset("BM"), a).pdf(t), levy_pdf(t, a), rtol=1e-8, atol=0)


@pytest.mark.parametrize("alpha1,alpha2,omega1", [(1.5, 0.7, 1 / 1.5), (1.2, 0.4, 1.4), (2.0, 0.5, 0.5)])
def test_shd_fpt_sequence_matches_general_pipeline(alpha1, alpha2, omega1):
    spec = make_shd(alpha1, alpha2, omega1, alpha2, 1.3, 0.8)
    closed, general = fpt_variate(spec, 0.7), fpt_variate_general(spec, 0.7)
    t = np.logspace(-2, 3, 25)
    np.testing.assert_allclose(closed.pdf(t), general.pdf(t), rtol=1e-8, atol=1e-300)


def test_shd_fpt_fields():
    O, P = shd_fpt_params(1.5, 0.7, 1 / 1.5, 0.7)
    w = 0.7 / 1.5
    assert O == OrderSeq(1, 2, 3, 3)
    np.testing.assert_allclose(P.a, [-1 / 0.7, -1 / w, -1 / (2 * w)])
    np.testing.assert_allclose(P.b, [-1 / (1.5 * w), -1 / (2 * w), -1.0])
    np.testing.assert_allclose(P.A, [1 / 0.7, 1 / w, 1 / (2 * w)])
    np.testing.assert_allclose(P.B, [1 / (1.5 * w), 1 / (2 * w), 1.0])
    assert P.k == pytest.approx(2 / 1.5)


@pytest.mark.parametrize("name", ["BM", "ST-FD", "T-FD"])
def test_distance_scaling(name):
    spec = preset(name, **PRESET_ARGS[name])
    near, far = fpt_variate(spec, 0.5), fpt_variate(spec, 1.0)
    rescaled = near.scaled(2.0 ** (1 / spec.exponent))
    t = np.logspace(-1, 2, 12)
    np.testing.assert_allclose(far.pdf(t), rescaled.pdf(t), rtol=1e-10)


def test_distance_must_be_positive():
    with pytest.raises(ValueError):
        fpt_variate(preset("BM"), 0.0)


@pytest.mark.parametrize("name", sorted(PRESET_ARGS))
def test_fpt_density_normalized(name):
    v = fpt_variate(preset(name, **PRESET_ARGS[name]), 1.0)
    total, negative = integrate_kernel(v.order, v.params)
    assert not negative
    assert total == pytest.approx(1.0, abs=1e-6)


# -- survival -----------------------------------------------------------------


def test_survival_limits_and_value():
    nm = noise_model(preset("BM"), 1.0)
    assert survival(nm, 1e-6) == pytest.approx(1.0, abs=1e-12)
    assert survival(nm, 1.0) == pytest.approx(0.520500, abs=5e-7)
    assert survival(nm, 1.0) == pytest.approx(1 - float(levy_cdf(1.0)), rel=1e-10)


@pytest.mark.parametrize("spec", [shd(2.0, 0.5, 1e-10), shd(1.8, 1.0, 1e-10), preset("T-FD", beta=0.5)], ids=["2-0.5", "1.8-1", "t-fd"])
def test_survival_complements_cdf(spec):
    fpt = fpt_variate(spec, 1e-5 if spec.K else 1.0)
    scale = fpt.params.c ** -1
    for t in np.array([0.01, 0.3, 1.0, 10.0, 1e4]) * scale:
        assert fpt.sf(t) + fpt.cdf(t) == pytest.approx(1.0, abs=1e-8)


def test_subdiffusive_survival_slope_on_short_window():
    # on [1e2, 1e6] the -1/2 pole still bends the fit; the leading exponent holds within 0.01
    nm = noise_model(shd(2.0, 0.5, 1e-10), 1e-5)
    t = np.logspace(2, 6, 50)
    slope = np.polyfit(np.log(t), np.log(survival(nm, t)), 1)[0]
    assert slope == pytest.approx(-0.25, abs=0.01)


def test_survival_asymptote_tracks_tail():
    nm = noise_model(preset("BM"), 1.0)
    tail = survival_asymptote(nm)
    assert survival(nm, 1e8) / tail(1e8) == pytest.approx(1.0, abs=1e-3)


# -- tail constants -----------------------------------------------------------


@pytest.mark.parametrize("alpha1,alpha2,kappa", [(2.0, 1.0, 0.5), (2.0, 0.5, 0.25), (1.8, 1.0, 1 / 1.8)])
def test_tail_constants(alpha1, alpha2, kappa):
    spec = shd(alpha1, alpha2, 1e-10)
    nm = noise_model(spec, 1e-5)
    assert tail_constant(nm) == pytest.approx(kappa, rel=1e-12)
    assert tail_constant(spec) == pytest.approx(kappa, rel=1e-12)
    assert tail_constant_shd(spec) == pytest.approx(kappa, rel=1e-12)


def test_tail_shortcut_agrees_with_pole_formula(rng):
    for _ in range(20):
        a1, a2 = rng.uniform(0.3, 2.0), rng.uniform(0.1, 0.99)
        w1, w2 = rng.choice([rng.uniform(0.2, 0.95), rng.uniform(1.05, 3.0)]), rng.uniform(0.1, 1.5)
        spec = make_shd(a1, a2, w1, w2)
        assert tail_constant_formula(spec) == pytest.approx(tail_constant_shd(spec), rel=1e-12)


def test_tail_shortcut_misses_degenerate_directing():
    # alpha2 = 1 cancels the directing pole the omega1 > 1 shortcut relies on
    spec = make_shd(1.5, 1.0, 1.3, 0.7)
    assert tail_constant_formula(spec) == pytest.approx(1.3 * 0.7, rel=1e-12)
    assert tail_constant_shd(spec) == pytest.approx(0.7)
    t = np.logspace(5, 9, 40)
    slope = np.polyfit(np.log(t), np.log(fpt_variate(spec, 1.0).sf(t)), 1)[0]
    assert slope == pytest.approx(-tail_constant_formula(spec), rel=0.01)


@pytest.mark.parametrize("name", sorted(PRESET_ARGS))
def test_tail_constant_matches_fitted_slope(name):
    # fit window starts late enough for sub-leading poles to fade
    fpt = fpt_variate(preset(name, **PRESET_ARGS[name]), 1.0)
    t = np.logspace(4, 8, 50)
    slope = np.polyfit(np.log(t), np.log(fpt.sf(t)), 1)[0]
    assert -slope == pytest.approx(tail_constant(fpt), rel=0.02)


@pytest.mark.parametrize("name", sorted(PRESET_ARGS))
def test_moments_exist_below_tail_constant(name):
    fpt = fpt_variate(preset(name, **PRESET_ARGS[name]), 1.0)
    kappa = tail_constant(fpt)
    assert fpt.moment(kappa - 0.01) is not None
    assert fpt.moment(kappa + 0.01) is None
    assert fpt.moment(math.floor(kappa) + 1) is None


# -- log moment and power -----------------------------------------------------


@pytest.mark.parametrize("a", [1.0, 1e-5, 3.0])
def test_bm_geometric_power(a):
    nm = noise_model(preset("BM"), a)
    assert noise_geometric_power(nm) == pytest.approx(a * a * CONSTANTS.G, rel=1e-10)
    assert noise_power(nm) == noise_geometric_power(nm) ** 2


def test_shd_closed_form_brownian_case():
    spec = make_shd(2.0, 1.0, 0.5, 1.0)
    assert math.exp(shd_log_moment(spec, 1.0)) == pytest.approx(CONSTANTS.G, rel=1e-15)


def test_shd_closed_form_against_mellin_route(rng):
    for _ in range(5):
        spec = shd(rng.uniform(1.1, 2.0), rng.uniform(0.3, 0.99), 10 ** rng.uniform(-12, -8))
        a = 10 ** rng.uniform(-6, -4)
        assert noise_log_moment(noise_model(spec, a)) == pytest.approx(shd_log_moment(spec, a), rel=1e-9)


def test_numeric_transform_route_for_superdiffusion():
    spec = shd(1.8, 1.0, 1e-10)
    nm = noise_model(spec, 1e-5, method="transform")
    assert nm.S == pytest.approx(math.exp(shd_log_moment(spec, 1e-5)), rel=1e-6)


@pytest.mark.parametrize("spec,a", [(preset("BM"), 1.0), (shd(2.0, 0.5, 1e-10), 1e-5)], ids=["bm", "2-0.5"])
def test_geometric_power_against_monte_carlo(spec, a, rng):
    nm = noise_model(spec, a)
    gm = geometric_mean(sample_fpt(spec, a, rng, 10**6))
    assert gm == pytest.approx(nm.S, rel=0.02)


# -- closed noise rows --------------------------------------------------------


def test_bm_row():
    row = noise_preset_table("BM", {}, a=1.0)
    assert row.order == OrderSeq(0, 1, 1, 0)
    assert row.params == ParamSeq(4 / SQRT_PI, 4.0, [-0.5], [], [1.0], [])
    assert (row.omega, row.c) == (0.5, 1.0)


def test_time_fractional_row():
    row = noise_preset_table("T-FD", {"beta": 0.6})
    assert row.omega == pytest.approx(0.3)
    assert row.c == 1.0


def test_exponential_kernel_row_geometric_power():
    # the row formula a**(1/w) G**(1/w - c) at w = 1/2, c = 1
    O, P, w, c = NOISE_TABLE["EK-FD"](1.0, 1.0)
    assert NoiseTableRow("EK-FD", O, P, w, c, 1.0).geometric_power == pytest.approx(CONSTANTS.G, rel=1e-15)


@pytest.mark.parametrize("name", sorted(PRESET_ARGS))
def test_rows_match_pipeline(name):
    spec = preset(name, **PRESET_ARGS[name])
    if name == "S-FD":
        # the closed row describes the stable parent alone
        spec = DiffusionSpec(stable_parent(PRESET_ARGS[name]["alpha"]), name="S-FD")
    a = 0.8
    row = noise_preset_table(name, PRESET_ARGS[name], a=a)
    fpt = fpt_variate(spec, a)
    t = np.logspace(-2, 3, 30)
    np.testing.assert_allclose(row.variate.pdf(t), fpt.pdf(t), rtol=1e-8, atol=1e-300)
    assert row.geometric_power == pytest.approx(noise_model(spec, a).S, rel=1e-8)


def test_space_fractional_row_differs_from_subordinated_model():
    spec = preset("S-FD", **PRESET_ARGS["S-FD"])
    row = noise_preset_table("S-FD", PRESET_ARGS["S-FD"], a=1.0)
    assert abs(row.variate.pdf(1.0) - fpt_variate(spec, 1.0).pdf(1.0)) > 1e-3


def test_unknown_row():
    with pytest.raises(ValueError):
        noise_preset_table("XX")


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 0.95), st.floats(1e-3, 1e3))
def test_row_power_is_square(beta, a):
    nm = noise_model(preset("GBM", beta=beta), a)
    assert nm.N == nm.S**2
    row = noise_preset_table("GBM", {"beta": beta}, a=a)
    assert row.geometric_power == pytest.approx(nm.S, rel=1e-8)
