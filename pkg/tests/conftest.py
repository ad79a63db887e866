import math

import mpmath
import numpy as np
import pytest
from hypothesis import strategies as st

from hdiffusion.params import OrderSeq, ParamSeq

SQRT_PI = math.sqrt(math.pi)
EULER_G = math.exp(float(mpmath.euler))


def gaussian2(x):
    """Density of N(0, 2)."""
    x = np.asarray(x, dtype=float)
    return np.exp(-x * x / 4) / (2 * SQRT_PI)


def levy_pdf(t, a=1.0):
    t = np.asarray(t, dtype=float)
    return a / np.sqrt(4 * np.pi * t**3) * np.exp(-a * a / (4 * t))


def levy_cdf(t, a=1.0):
    from scipy.special import erfc

    return erfc(a / (2 * np.sqrt(np.asarray(t, dtype=float))))


def mp_theta(s, O: OrderSeq, P: ParamSeq):
    """Arbitrary-precision gamma ratio, written out factor by factor."""
    s = mpmath.mpf(s)
    num = mpmath.mpf(1)
    rden = mpmath.mpf(1)  # reciprocal gammas, so denominator poles give exact zeros
    for j in range(O.q):
        if j < O.m:
            num *= mpmath.gamma(P.b[j] - P.B[j] * s)
        else:
            rden *= mpmath.rgamma(1 - P.b[j] + P.B[j] * s)
    for j in range(O.p):
        if j < O.n:
            num *= mpmath.gamma(1 - P.a[j] + P.A[j] * s)
        else:
            rden *= mpmath.rgamma(P.a[j] - P.A[j] * s)
    return num * rden


def gen_gamma(k_shape: float, B: float, c: float):
    """Normalized generalized-gamma kernel ``H^{1,0}_{0,1}[c x | (b, B)]`` with ``b = shape * B``."""
    b = k_shape * B
    k = c / math.gamma(b + B)
    return OrderSeq(1, 0, 0, 1), ParamSeq(k, c, [], [b], [], [B])


@st.composite
def gen_gamma_kernels(draw):
    shape = draw(st.floats(0.2, 2.0))
    B = draw(st.floats(0.4, 1.6))
    c = draw(st.floats(0.3, 3.0))
    return gen_gamma(shape, B, c)


@st.composite
def param_seqs(draw, max_len=3):
    m = draw(st.integers(0, max_len))
    q = draw(st.integers(m, max_len))
    n = draw(st.integers(0, max_len))
    p = draw(st.integers(n, max_len))
    reals = st.floats(-3, 3, allow_nan=False)
    pos = st.floats(0.1, 3, allow_nan=False)
    P = ParamSeq(
        draw(st.floats(0.1, 5)),
        draw(st.floats(0.1, 5)),
        draw(st.lists(reals, min_size=p, max_size=p)),
        draw(st.lists(reals, min_size=q, max_size=q)),
        draw(st.lists(pos, min_size=p, max_size=p)),
        draw(st.lists(pos, min_size=q, max_size=q)),
    )
    return OrderSeq(m, n, p, q), P


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
