"""H-variates and the special-function laws built on them.

A one-sided variate has density ``k H(c x)`` on ``x > 0``.  A symmetric
variate has density ``k H(c |y|) / 2`` on the real line, so ``|y|`` is the
one-sided variate with the same sequences.
"""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import hfunc
from .hfunc import DEFAULT_CONFIG, DivergenceError, EvalConfig, eval_h
from .params import (
    Kernel,
    OrderSeq,
    ParamSeq,
    conjugate,
    convolution_op,
    from_dict,
    inverse,
    mellin_op,
    scaling,
    to_dict,
)

__all__ = [
    "HVariate",
    "StableParams",
    "EULER_GAMMA",
    "pdf",
    "cdf",
    "moment",
    "mgf",
    "log_moment",
    "geometric_power",
    "stable_to_h",
    "stable_pdf",
    "mwright_kernel",
    "mwright_pdf",
    "mwright_series",
    "mittag_leffler",
    "mittag_leffler_series",
    "mittag_leffler_distribution",
]

EULER_GAMMA = float(np.euler_gamma)

# CDF kernel: theta factor Gamma(s)/Gamma(1+s) = 1/s turns the density into its integral
CDF_ORDER = OrderSeq(0, 1, 1, 1)
CDF_PARAMS = ParamSeq(1.0, 1.0, [1.0], [0.0], [1.0], [1.0])
# exp(-x) kernel and the ln(x)/(x-1) kernel
EXP_KERNEL = Kernel(OrderSeq(1, 0, 0, 1), ParamSeq(1.0, 1.0, [], [0.0], [], [1.0]))
LOG_KERNEL = Kernel(OrderSeq(2, 2, 2, 2), ParamSeq(1.0, 1.0, [0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0]))


@dataclass(frozen=True)
class HVariate:
    order: OrderSeq
    params: ParamSeq
    symmetric: bool = False
    cfg: EvalConfig = field(default=DEFAULT_CONFIG, compare=False, repr=False)

    def __post_init__(self):
        Kernel(self.order, self.params)  # length check

    @property
    def kernel(self) -> Kernel:
        return Kernel(self.order, self.params)

    # -- constructors --

    def scaled(self, alpha: float) -> "HVariate":
        """Law of ``alpha * x``."""
        O, P = scaling(self.order, self.params, alpha)
        return HVariate(O, P, self.symmetric, self.cfg)

    def with_config(self, cfg: EvalConfig) -> "HVariate":
        return HVariate(self.order, self.params, self.symmetric, cfg)

    # -- kernels for the distribution function --

    @functools.cached_property
    def _lower(self) -> Kernel:
        # int_0^x k H(c y) dy
        O, P = conjugate(self.order, self.params, 1.0)
        return convolution_op(CDF_ORDER, CDF_PARAMS, O, P)

    @functools.cached_property
    def _upper(self) -> Kernel:
        # int_x^inf k H(c y) dy
        Oc, Pc = inverse(CDF_ORDER, CDF_PARAMS)
        O, P = conjugate(self.order, self.params, 1.0)
        return convolution_op(Oc, Pc, O, P)

    def _half_mass(self, x: float, upper: bool) -> float:
        O, P = self._upper if upper else self._lower
        return float(eval_h(x, O, P, self.cfg))

    def _lower_mass(self, x: float) -> float:
        if x == 0.0:
            return 0.0
        lo = self._half_mass(x, upper=False)
        if lo > 0.5:
            return 1.0 - self._half_mass(x, upper=True)
        return lo

    def _upper_mass(self, x: float) -> float:
        if x == 0.0:
            return 1.0
        up = self._half_mass(x, upper=True)
        if up > 0.5:
            return 1.0 - self._half_mass(x, upper=False)
        return up

    # -- distribution --

    def pdf(self, x):
        return _vectorize(self._pdf, x)

    def _pdf(self, x: float) -> float:
        if self.symmetric:
            return 0.5 * float(eval_h(abs(x), self.order, self.params, self.cfg))
        if x < 0:
            return 0.0
        return float(eval_h(x, self.order, self.params, self.cfg))

    def cdf(self, x):
        return _vectorize(self._cdf, x)

    def _cdf(self, x: float) -> float:
        if self.symmetric:
            if x >= 0:
                return 1.0 - 0.5 * self._upper_mass(x)
            return 0.5 * self._upper_mass(-x)
        if x <= 0:
            return 0.0
        return self._lower_mass(x)

    def sf(self, x):
        return _vectorize(self._sf, x)

    def _sf(self, x: float) -> float:
        if self.symmetric:
            return self._cdf(-x)
        if x <= 0:
            return 1.0
        return self._upper_mass(x)

    # -- moments --

    def moment(self, ell: float) -> float | None:
        """``E[x**ell]`` (``E|y|**ell`` for even powers of symmetric variates), or None."""
        if ell < 0 and self.symmetric:
            raise ValueError("negative moments are not defined for symmetric variates")
        lo, hi = hfunc.pole_strip(self.order, self.params)
        u = -(ell + 1.0)
        if not lo < u < hi:
            return None
        if self.symmetric and float(ell).is_integer() and int(ell) % 2 == 1:
            return 0.0
        val = hfunc.mellin_transform(ell + 1.0, self.order, self.params)
        return float(np.real(val))

    def abs_moment(self, ell: float) -> float | None:
        lo, hi = hfunc.pole_strip(self.order, self.params)
        if not lo < -(ell + 1.0) < hi:
            return None
        return float(np.real(hfunc.mellin_transform(ell + 1.0, self.order, self.params)))

    def mgf(self, s: float) -> float:
        if s == 0:
            return 1.0
        O, P = mellin_op(*EXP_KERNEL, self.order, self.params)
        if self.symmetric:
            neg = float(eval_h(abs(s), O, P, self.cfg))
            pos = _series_at_negative(abs(s), O, P, self.cfg)
            return 0.5 * (neg + pos)
        if s < 0:
            return float(eval_h(-s, O, P, self.cfg))
        return _series_at_negative(s, O, P, self.cfg)

    def log_moment(self, method: str = "mellin") -> float:
        """``E[ln x]`` for a one-sided variate.

        ``mellin`` evaluates two H-functions at 1 (kernel ``ln t/(t-1)`` against
        ``t f(t)`` and ``f(t)``); ``transform`` integrates the same kernel against
        ``(t-1) f(t)`` numerically; ``digamma`` differentiates the moment formula.
        """
        if self.symmetric:
            raise ValueError("log moment is defined here for one-sided variates")
        if method == "digamma":
            return _log_moment_digamma(self.order, self.params)
        if method == "mellin":
            O1, P1 = conjugate(self.order, self.params, 1.0)
            first = eval_h(1.0, *mellin_op(*LOG_KERNEL, O1, P1), self.cfg)
            second = eval_h(1.0, *mellin_op(*LOG_KERNEL, self.order, self.params), self.cfg)
            return float(first - second)
        if method == "transform":
            centre = -math.log(self.params.c)

            def f(t):
                return (t - 1.0) * self._pdf(t)

            return hfunc.h_transform_numeric(f, 1.0, *LOG_KERNEL, self.cfg, centre=centre)
        raise ValueError(f"unknown log-moment method {method!r}")

    def geometric_power(self, method: str = "mellin") -> float:
        return math.exp(self.log_moment(method))

    # -- io --

    def to_dict(self) -> dict:
        d = to_dict(self.order, self.params)
        d["symmetric"] = self.symmetric
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "HVariate":
        O, P = from_dict(d)
        return cls(O, P, bool(d.get("symmetric", False)))

    def export_csv(self, path, xs) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "pdf", "cdf"])
            for x in xs:
                w.writerow([repr(float(x)), repr(self._pdf(float(x))), repr(self._cdf(float(x)))])


def _vectorize(fn, x):
    if np.ndim(x) == 0:
        return fn(float(x))
    xs = np.asarray(x, dtype=float)
    out = np.empty(xs.shape)
    for i, xi in np.ndenumerate(xs):
        out[i] = fn(float(xi))
    return out


def _log_moment_digamma(O: OrderSeq, P: ParamSeq) -> float:
    m, n = O.m, O.n
    out = -math.log(P.c)
    out += sum(B * special.digamma(b + B) for b, B in zip(P.b[:m], P.B[:m]))
    out -= sum(A * special.digamma(1 - a - A) for a, A in zip(P.a[:n], P.A[:n]))
    out += sum(B * special.digamma(1 - b - B) for b, B in zip(P.b[m:], P.B[m:]))
    out -= sum(A * special.digamma(a + A) for a, A in zip(P.a[n:], P.A[n:]))
    return float(out)


def _series_at_negative(z: float, O: OrderSeq, P: ParamSeq, cfg: EvalConfig) -> float:
    """``k H(-c z)`` by continuing the right residue series, which needs integer poles."""
    prep = hfunc._prepare(O, P)
    terms = hfunc._series_terms(prep, "right", cfg.series_term_cap)
    if terms is None or isinstance(terms, tuple):
        raise DivergenceError("moment generating function does not converge for this sign of s")
    if prep.lo > -math.inf and prep.mu <= 0:
        raise DivergenceError("moment generating function diverges: algebraic tail")
    lz = math.log(z) + prep.logc
    total, peak, quiet = 0.0, -math.inf, 0
    for s, logc, sign in terms:
        if logc == -math.inf:
            continue
        if abs(s - round(s)) > 1e-12:
            raise DivergenceError("non-integer residue exponents; cannot continue to negative argument")
        sign = sign * (-1.0 if round(s) % 2 else 1.0)
        lt = logc + s * lz
        if lt > 700:
            raise DivergenceError("moment generating function overflows")
        peak = max(peak, lt)
        term = sign * math.exp(lt)
        total += term
        if abs(term) <= 1e-17 * abs(total) and lt < peak:
            quiet += 1
            if quiet >= 10:
                return prep.k * total
        else:
            quiet = 0
    raise DivergenceError("moment series did not converge; s is outside the convergence region")


# -- module-level spellings ---------------------------------------------------


def pdf(v: HVariate, x):
    return v.pdf(x)


def cdf(v: HVariate, x):
    return v.cdf(x)


def moment(v: HVariate, ell: float):
    return v.moment(ell)


def mgf(v: HVariate, s: float) -> float:
    return v.mgf(s)


def log_moment(v: HVariate, method: str = "mellin") -> float:
    return v.log_moment(method)


def geometric_power(v: HVariate, method: str = "mellin") -> float:
    return v.geometric_power(method)


# -- stable laws --------------------------------------------------------------


@dataclass(frozen=True)
class StableParams:
    """Characteristic function ``exp(-gamma |w|^alpha (1 - i beta sgn(w) tan(pi alpha/2)) + i mu w)``."""

    alpha: float
    beta: float = 0.0
    gamma: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        if not 0 < self.alpha <= 2:
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not -1 <= self.beta <= 1:
            raise ValueError(f"beta must lie in [-1, 1], got {self.beta}")
        if not self.gamma > 0:
            raise ValueError(f"dispersion must be positive, got {self.gamma}")

    @property
    def nonnegative(self) -> bool:
        return self.alpha < 1 and self.beta == 1 and self.mu == 0


def stable_to_h(sp: StableParams, sign: int = 1) -> HVariate:
    """H-form of a stable density.

    For ``beta == 0`` the result is a symmetric variate about ``mu`` (shift not
    represented).  Otherwise the result describes the density at ``mu + sign*u``
    for ``u > 0`` and integrates to the probability of that side; the totally
    skewed case ``alpha < 1, beta = 1, mu = 0`` returns the normalized one-sided law.
    """
    al, be, ga = sp.alpha, sp.beta, sp.gamma
    if al == 1:
        if be != 0:
            raise NotImplementedError("unsupported: alpha=1, beta!=0")
        P = ParamSeq(2.0 / ga, 1.0 / ga, [0.0, 0.5], [0.0, 0.5], [1.0, 0.5], [1.0, 0.5])
        return HVariate(OrderSeq(1, 1, 2, 2), P, symmetric=True)
    t = math.tan(math.pi * al / 2)
    om = (ga * math.sqrt(1 + be * be * t * t)) ** (-1.0 / al)
    if be == 0:
        P = ParamSeq(2 * om / al, om, [1 - 1 / al, 0.5], [0.0, 0.5], [1 / al, 0.5], [1.0, 0.5])
        return HVariate(OrderSeq(1, 1, 2, 2), P, symmetric=True)
    if sp.nonnegative:
        if sign < 0:
            raise ValueError("the totally skewed law with alpha<1 has no mass below mu")
        return HVariate(OrderSeq(0, 1, 1, 1), ParamSeq(om / al, om, [1 - 1 / al], [0.0], [1 / al], [1.0]))
    th = math.atan(be * t) / (math.pi * al)
    sg = 1.0 if sign >= 0 else -1.0
    lo, hi = 0.5 - sg * th, 0.5 + sg * th
    if not lo > 0:
        raise ValueError("the requested side carries no mass")
    P = ParamSeq(om / al, om, [1 - 1 / al, lo], [0.0, lo], [1 / al, hi], [1.0, hi])
    return HVariate(OrderSeq(1, 1, 2, 2), P, symmetric=False)


def stable_pdf(sp: StableParams, x):
    """Stable density at real ``x`` through the H-representation."""

    def one(xv: float) -> float:
        u = xv - sp.mu
        if sp.beta == 0 or sp.alpha == 1:
            return stable_to_h(sp).pdf(u)
        if sp.nonnegative:
            return 0.0 if u <= 0 else stable_to_h(sp, 1).pdf(u)
        side = 1 if u >= 0 else -1
        return stable_to_h(sp, side).pdf(abs(u))

    return _vectorize(one, x)


# -- M-Wright and Mittag-Leffler ---------------------------------------------


def mwright_kernel(nu: float) -> Kernel:
    if not 0 < nu < 1:
        raise ValueError(f"M-Wright order must lie in (0, 1), got {nu}")
    return Kernel(OrderSeq(1, 0, 1, 1), ParamSeq(1.0, 1.0, [1 - nu], [0.0], [nu], [1.0]))


def mwright_pdf(nu: float, t, cfg: EvalConfig = DEFAULT_CONFIG):
    O, P = mwright_kernel(nu)
    return eval_h(t, O, P, cfg)


def mwright_series(nu: float, t: float, terms: int = 400) -> float:
    """``sum_n (-t)^n / (n! Gamma(1 - nu - nu n))`` (double precision, small ``t`` only)."""
    total = 0.0
    for n in range(terms):
        rg = special.rgamma(1 - nu - nu * n)
        if rg == 0.0:
            continue
        term = (-t) ** n / math.factorial(n) * rg if n < 170 else 0.0
        total += term
        if n > 10 and abs(term) < 1e-18 * max(abs(total), 1e-300):
            break
    return total


def mittag_leffler_series(alpha: float, beta: float, t: float, terms: int = 2000) -> float:
    total, comp = 0.0, 0.0
    for n in range(terms):
        lg = special.gammaln(alpha * n + beta)
        sg = special.gammasgn(alpha * n + beta)
        if t == 0:
            return float(sg * math.exp(-lg))
        lt = n * math.log(abs(t)) - lg
        if lt > 709:
            raise OverflowError(f"Mittag-Leffler series overflows at t={t}")
        term = sg * math.exp(lt) * (-1.0 if (t < 0 and n % 2) else 1.0)
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
        if n > 5 and abs(term) < 1e-17 * abs(total):
            return total
    raise hfunc.ConvergenceError("Mittag-Leffler series did not converge")


# alternating series: a peak term of 1e2 costs two digits to cancellation
_SERIES_LOG_PEAK = math.log(1e2)


def _log_peak_term(alpha: float, beta: float, z: float) -> float:
    if z == 0:
        return 0.0
    n = np.arange(0, 4000)
    return float(np.max(n * math.log(z) - special.gammaln(alpha * n + beta)))


def mittag_leffler(alpha: float, beta: float, t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Generalized Mittag-Leffler function ``E_{alpha,beta}(t)``.

    Series for positive ``t`` and for negative ``t`` while its largest term
    stays small; the H-function form
    ``H^{1,1}_{1,2}[-t | (0,1); (0,1), (1-beta, alpha)]`` otherwise.
    """
    if not alpha > 0 or not beta > 0:
        raise ValueError("alpha and beta must be positive")
    if t >= 0 or _log_peak_term(alpha, beta, -t) < _SERIES_LOG_PEAK:
        return mittag_leffler_series(alpha, beta, t)
    O = OrderSeq(1, 1, 1, 2)
    P = ParamSeq(1.0, 1.0, [0.0], [0.0, 1.0 - beta], [1.0], [1.0, alpha])
    return float(eval_h(-t, O, P, cfg))


def mittag_leffler_distribution(nu: float) -> HVariate:
    """Law with survival ``E_nu(-t**nu)`` and Laplace transform ``1/(1 + s**nu)``."""
    if not 0 < nu <= 1:
        raise ValueError(f"order must lie in (0, 1], got {nu}")
    P = ParamSeq(1 / nu, 1.0, [1 - 1 / nu], [1 - 1 / nu, 0.0], [1 / nu], [1 / nu, 1.0])
    return HVariate(OrderSeq(1, 1, 1, 2), P)
