import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdiffusion.diffusion import (
    NULL_DIRECTING,
    PRESETS,
    make_shd,
    msd_classify,
    mwright_directing,
    position_variate,
    preset,
    shd,
    stable_parent,
    subordinate,
)
from hdiffusion.hfunc import integrate_kernel
from hdiffusion.params import NULL, OrderSeq, ParamSeq, scaling

from conftest import SQRT_PI, gaussian2

PRESET_ARGS = {
    "ST-FD": {"alpha": 1.5, "beta": 0.7},
    "S-FD": {"alpha": 1.5, "beta": 0.7},
    "T-FD": {"beta": 0.5},
    "EK-FD": {"alpha": 0.8, "beta": 0.6},
    "GBM": {"beta": 0.6},
    "FBM": {"alpha": 0.8},
    "BM": {},
}


def test_null_directing_returns_parent():
    parent = stable_parent(1.5)
    assert subordinate(parent, NULL_DIRECTING) is parent
    bm = preset("BM")
    assert bm.combined.law_at_1 == bm.parent.law_at_1
    assert bm.directing.law_at_1.order == NULL.order
    assert bm.directing.law_at_1.params == NULL.params


@pytest.mark.parametrize("alpha1,alpha2,omega1", [(1.5, 0.7, 1 / 1.5), (1.2, 0.4, 0.9), (2.0, 0.5, 0.5)])
def test_shd_combined_sequence_as_printed(alpha1, alpha2, omega1):
    spec = make_shd(alpha1, alpha2, omega1, alpha2)
    law = spec.combined.law_at_1
    assert law.order == OrderSeq(2, 1, 3, 3)
    assert law.symmetric
    np.testing.assert_allclose(law.params.a, [1 - 1 / alpha1, 1 - omega1 * alpha2, 0.5], atol=1e-15)
    np.testing.assert_allclose(law.params.b, [0.0, 1 - omega1, 0.5], atol=1e-15)
    np.testing.assert_allclose(law.params.A, [1 / alpha1, omega1 * alpha2, 0.5], atol=1e-15)
    np.testing.assert_allclose(law.params.B, [1.0, omega1, 0.5], atol=1e-15)
    assert law.params.k == pytest.approx(2 / alpha1, rel=1e-15)
    assert spec.combined.omega == pytest.approx(omega1 * alpha2, rel=1e-15)


def test_bm_position_is_gaussian():
    x = np.linspace(-10, 10, 101)
    np.testing.assert_allclose(position_variate(preset("BM"), 1.0).pdf(x), gaussian2(x), rtol=0, atol=1e-10)


@pytest.mark.parametrize("name", ["BM", "ST-FD", "GBM"])
def test_position_self_similarity(name):
    spec = preset(name, **PRESET_ARGS[name])
    v1, v4 = position_variate(spec, 1.0), position_variate(spec, 4.0)
    O, P = scaling(v1.order, v1.params, 4.0**spec.exponent)
    assert v4.order == O
    assert v4.params.k == pytest.approx(P.k, rel=1e-14)
    assert v4.params.c == pytest.approx(P.c, rel=1e-14)


def test_position_rejects_nonpositive_time():
    with pytest.raises(ValueError):
        position_variate(preset("BM"), 0.0)


def test_subdiffusive_msd_exponent():
    spec = shd(2.0, 0.5, 1e-10)
    t = np.array([1.0, 10.0, 100.0])
    msd = [position_variate(spec, ti).moment(2) for ti in t]
    slope = np.polyfit(np.log(t), np.log(msd), 1)[0]
    assert slope == pytest.approx(0.5, abs=1e-3)


def test_bm_msd_is_2t():
    spec = preset("BM")
    for t in (0.5, 2.0):
        assert position_variate(spec, t).moment(2) == pytest.approx(2 * t, rel=1e-12)


@pytest.mark.parametrize(
    "alpha1,alpha2,kind,exponent",
    [(2.0, 1.0, "normal", 1.0), (2.0, 0.5, "subdiffusion", 0.5), (1.8, 1.0, "superdiffusion", 2 / 1.8)],
)
def test_msd_classification(alpha1, alpha2, kind, exponent):
    got_kind, got_exp = msd_classify(shd(alpha1, alpha2))
    assert got_kind == kind
    assert got_exp == pytest.approx(exponent, rel=1e-14)


def test_shd_brownian_equivalent():
    spec = make_shd(2.0, 1.0, 0.5, 1.0, 1.0, 1.0)
    x = np.linspace(-8, 8, 41)
    np.testing.assert_allclose(position_variate(spec, 1.0).pdf(x), gaussian2(x), rtol=0, atol=1e-8)


def test_diffusion_coefficient():
    assert make_shd(2.0, 0.5, 0.5, 0.5, beta1=2.0, beta2=3.0).K == 12.0


def test_shorthand_sets_coefficient():
    spec = shd(1.5, 0.7, 3e-4)
    assert spec.K == pytest.approx(3e-4, rel=1e-14)
    assert (spec.omega1, spec.omega2) == (1 / 1.5, 0.7)


def test_shd_matches_space_time_preset():
    alpha, beta = 1.5, 0.7
    spec = make_shd(alpha, beta, 1 / alpha, beta, 1.0, 1.0)
    st_fd = preset("ST-FD", alpha=alpha, beta=beta)
    assert spec.combined.law_at_1 == st_fd.combined.law_at_1
    assert spec.exponent == st_fd.exponent


def test_bm_preset_fields():
    spec = preset("BM")
    law = spec.parent.law_at_1
    assert law.order == OrderSeq(1, 0, 0, 1)
    assert law.params == ParamSeq(1 / (2 * SQRT_PI), 0.5, [], [0.0], [], [0.5])
    assert spec.directing is NULL_DIRECTING
    assert spec.omega1 == 0.5


def test_time_fractional_directing_fields():
    spec = preset("T-FD", beta=0.5)
    d = spec.directing.law_at_1
    assert d.order == OrderSeq(1, 0, 1, 1)
    assert d.params == ParamSeq(1.0, 1.0, [0.5], [0.0], [0.5], [1.0])
    assert spec.omega2 == 0.5


def test_space_fractional_directing_fields():
    alpha, beta = 1.5, 0.7
    spec = preset("S-FD", alpha=alpha, beta=beta)
    d = spec.directing.law_at_1
    cb = math.cos(math.pi * beta / 2)
    assert d.order == OrderSeq(0, 1, 1, 1)
    assert d.params.k == pytest.approx(cb**beta / beta, rel=1e-14)
    assert d.params.c == pytest.approx(cb**beta, rel=1e-14)
    np.testing.assert_allclose(d.params.a, [1 - 1 / beta])
    np.testing.assert_allclose(d.params.A, [1 / beta])
    assert spec.omega2 == pytest.approx(1 / beta)


def test_gbm_equals_ek_fd_on_the_diagonal():
    for beta in (0.3, 0.6, 0.9):
        gbm, ek = preset("GBM", beta=beta), preset("EK-FD", alpha=beta, beta=beta)
        assert gbm.parent.law_at_1 == ek.parent.law_at_1
        assert gbm.directing.law_at_1 == ek.directing.law_at_1
        assert gbm.omega1 == ek.omega1 and gbm.omega2 == ek.omega2


@settings(max_examples=20, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(0.2, 0.95), st.floats(0.2, 0.95))
def test_exponents_compose(alpha1, alpha2, alpha3):
    inner = subordinate(stable_parent(alpha1), mwright_directing(alpha2))
    outer = subordinate(inner, mwright_directing(alpha3))
    assert outer.omega == pytest.approx((1 / alpha1) * alpha2 * alpha3, rel=1e-14)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_every_preset_position_density_normalized(name):
    law = position_variate(preset(name, **PRESET_ARGS[name]), 1.0)
    total, negative = integrate_kernel(law.order, law.params)
    assert not negative
    assert total == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_spec_serializes_with_derived_values(name):
    d = preset(name, **PRESET_ARGS[name]).to_dict()
    assert d["name"] == name
    assert d["msd_exponent"] == pytest.approx(2 * d["omega1"] * d["omega2"])


def test_preset_errors():
    with pytest.raises(ValueError, match="unknown preset"):
        preset("XX")
    with pytest.raises(ValueError):
        preset("T-FD", beta=1.0)
    with pytest.raises(ValueError):
        preset("ST-FD", alpha=2.5, beta=0.5)
    with pytest.raises(ValueError):
        preset("ST-FD", alpha=1.5)
    with pytest.raises(ValueError):
        make_shd(1.5, 1.2, 1 / 1.5, 1.2)


def test_directing_must_be_one_sided():
    with pytest.raises(ValueError):
        subordinate(stable_parent(1.5), stable_parent(1.2))
