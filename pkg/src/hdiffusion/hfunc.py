"""Numerical evaluation of Fox H-functions.

``eval_h(x, O, P)`` returns ``k * H^{m,n}_{p,q}[c x]`` where

    H(z) = 1/(2 pi i) int_L theta(s) z**s ds

and ``theta`` is the gamma ratio documented in :mod:`hdiffusion.params`.
Two routes are used: the residue series on the side where it converges
(checked for cancellation), and trapezoidal quadrature along a vertical line
``Re s = sigma0`` inside the pole-free strip.  The trapezoid rule converges
geometrically for integrands analytic in a horizontal band, so the step is
halved until successive sums agree.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize, special

from .params import OrderSeq, ParamSeq

__all__ = [
    "EvalConfig",
    "AsymptoticExpansion",
    "HFunctionError",
    "PoleError",
    "EmptyStripError",
    "ConvergenceError",
    "DivergenceError",
    "mellin_barnes_integrand",
    "pole_strip",
    "eval_h",
    "eval_h_series",
    "eval_h_contour",
    "asymptotic_expansion",
    "h_transform_numeric",
    "integrate_kernel",
    "mellin_transform",
]

_POLE_EPS = 1e-12
_CANCEL_EPS = 1e-13


class HFunctionError(ArithmeticError):
    """Base class for numerical failures in H-function evaluation."""


class PoleError(HFunctionError):
    pass


class EmptyStripError(HFunctionError):
    pass


class ConvergenceError(HFunctionError):
    pass


class DivergenceError(HFunctionError):
    pass


@dataclass(frozen=True)
class EvalConfig:
    rel_tolerance: float = 1e-10
    max_quadrature_nodes: int = 400_000
    contour_offset: float | None = None
    series_term_cap: int = 600
    method: str = "auto"
    debug_csv: str | None = None

    def __post_init__(self):
        if not self.rel_tolerance > 0:
            raise ValueError("rel_tolerance must be positive")
        if self.max_quadrature_nodes <= 0 or self.series_term_cap <= 0:
            raise ValueError("node and term caps must be positive")
        if self.method not in ("auto", "series", "contour"):
            raise ValueError(f"unknown method {self.method!r}")


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class AsymptoticExpansion:
    """Leading term ``k * coefficient * (c x)**exponent`` on one side."""

    exponent: float
    coefficient: float
    side: str
    k: float = 1.0
    c: float = 1.0

    def value(self, x):
        return self.k * self.coefficient * np.power(self.c * np.asarray(x, float), self.exponent)


# -- kernel preparation -------------------------------------------------------


@dataclass(frozen=True)
class _Prepared:
    k: float
    logc: float
    num: tuple[tuple[float, float], ...]  # Gamma(u + v s) in the numerator
    den: tuple[tuple[float, float], ...]
    lo: float  # rightmost left pole
    hi: float  # leftmost right pole
    mu: float

    @property
    def nu(self) -> np.ndarray:
        return np.array([u for u, _ in self.num])


def _factors(O: OrderSeq, P: ParamSeq):
    num = [(b, -B) for b, B in zip(P.b[: O.m], P.B[: O.m])]
    num += [(1.0 - a, A) for a, A in zip(P.a[: O.n], P.A[: O.n])]
    den = [(1.0 - b, B) for b, B in zip(P.b[O.m :], P.B[O.m :])]
    den += [(a, -A) for a, A in zip(P.a[O.n :], P.A[O.n :])]
    # identical gamma factors above and below the bar cancel exactly
    kept = []
    for f in num:
        for i, g in enumerate(den):
            if abs(f[0] - g[0]) < _CANCEL_EPS and abs(f[1] - g[1]) < _CANCEL_EPS:
                del den[i]
                break
        else:
            kept.append(f)
    return tuple(kept), tuple(den)


def _pole(u: float, v: float, j: int) -> float:
    return (-j - u) / v


def _pole_order(s: float, num, den) -> tuple[int, int]:
    """Number of numerator and denominator gammas singular at real ``s``."""
    cn = sum(1 for u, v in num if _is_nonpos_int(u + v * s))
    cd = sum(1 for u, v in den if _is_nonpos_int(u + v * s))
    return cn, cd


def _is_nonpos_int(z: float) -> bool:
    r = round(z)
    return r <= 0 and abs(z - r) < _POLE_EPS * max(1.0, abs(z))


def _family_live(s: float, right: bool, num, den) -> bool:
    # a denominator gamma cancels poles of its own direction first; only zeros it has
    # left over may cancel the other family (cross-kernel products can stack a
    # removable pole of one family on a genuine pole of the other)
    def count(fs, want_right):
        return sum(1 for u, v in fs if (v < 0) == want_right and _is_nonpos_int(u + v * s))

    own = count(num, right) - count(den, right)
    spare = max(0, count(den, not right) - count(num, not right))
    return own - spare > 0


def _first_live_pole(u, v, num, den, cap=64):
    for j in range(cap):
        s = _pole(u, v, j)
        if _family_live(s, v < 0, num, den):
            return s
    return math.inf if v < 0 else -math.inf


@functools.lru_cache(maxsize=4096)
def _prepare(O: OrderSeq, P: ParamSeq) -> _Prepared:
    if O.p != P.p or O.q != P.q:
        raise ValueError(f"order {O.as_tuple()} does not match sequence lengths")
    if any(not x > 0 for x in P.A + P.B):
        raise ValueError("slopes A, B must be positive")
    if not P.c > 0:
        raise ValueError("argument scale c must be positive")
    num, den = _factors(O, P)
    lo, hi = -math.inf, math.inf
    for u, v in num:
        s = _first_live_pole(u, v, num, den)
        if v > 0:
            lo = max(lo, s)
        else:
            hi = min(hi, s)
    mu = sum(-v for u, v in num if v < 0) + sum(v for u, v in den if v > 0)
    mu -= sum(v for u, v in num if v > 0) + sum(-v for u, v in den if v < 0)
    return _Prepared(P.k, math.log(P.c), num, den, lo, hi, mu)


def pole_strip(O: OrderSeq, P: ParamSeq) -> tuple[float, float]:
    """Open interval of ``Re s`` separating left and right pole families."""
    prep = _prepare(O, P)
    return prep.lo, prep.hi


# -- integrand ----------------------------------------------------------------


@functools.lru_cache(maxsize=4096)
def _stacked(prep: _Prepared) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    fac = [(u, v, 1.0) for u, v in prep.num] + [(u, v, -1.0) for u, v in prep.den]
    arr = np.array(fac, dtype=float).reshape(-1, 3)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def _log_theta(prep: _Prepared, s) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    if s.size and not np.any(s.imag == 0):
        # off the real axis no gamma factor can sit on a pole: one vectorized call
        U, V, W = _stacked(prep)
        z = U[:, None] + V[:, None] * s.ravel()[None, :]
        return (W @ special.loggamma(z)).reshape(s.shape)
    out = np.zeros(s.shape, dtype=complex)
    order = np.zeros(s.shape, dtype=int)  # net pole order at s
    for sign, factors in ((1, prep.num), (-1, prep.den)):
        for u, v in factors:
            z = u + v * s
            hit = _pole_mask(z)
            if not np.any(hit):
                out += sign * special.loggamma(z)
                continue
            # at a pole keep the residue of Gamma(u + v s) in s, (-1)**j / (j! v);
            # matched numerator and denominator poles then leave the exact limit
            j = np.where(hit, -np.round(z.real), 0.0)
            phase = np.pi * ((j % 2) + (v < 0))
            res = -special.gammaln(j + 1) - math.log(abs(v)) + 1j * phase
            out += sign * np.where(hit, res, special.loggamma(np.where(hit, 1.0, z)))
            order += sign * hit
    if np.any(order > 0):
        bad = complex(s.flat[int(np.argmax(order.ravel() > 0))])
        raise PoleError(f"theta(s) has a pole at s={bad.real:.6g}")
    out[order < 0] = -np.inf
    return out


def _pole_mask(z: np.ndarray) -> np.ndarray:
    re = z.real
    r = np.round(re)
    return (z.imag == 0) & (r <= 0) & (np.abs(re - r) < _POLE_EPS * np.maximum(1.0, np.abs(re)))


def mellin_barnes_integrand(s, O: OrderSeq, P: ParamSeq):
    """The gamma ratio ``theta(s)`` (without ``k`` and ``c``)."""
    prep = _prepare(O, P)
    vals = np.exp(_log_theta(prep, s))
    return vals if np.ndim(s) else complex(vals)


def mellin_transform(u, O: OrderSeq, P: ParamSeq):
    """``int_0^inf x**(u-1) k H(c x) dx = k c**(-u) theta(-u)``."""
    prep = _prepare(O, P)
    u = np.asarray(u, dtype=complex)
    return prep.k * np.exp(-u * prep.logc + _log_theta(prep, -u))


# -- residue series -----------------------------------------------------------


def _log_abs_gamma(z: float) -> tuple[float, float]:
    return float(special.gammaln(z)), float(special.gammasgn(z))


def _series_terms(prep: _Prepared, side: str, cap: int):
    """Pole locations and (log|residue coefficient|, sign) ordered outward."""
    fams = [(u, v) for u, v in prep.num if (v < 0) == (side == "right")]
    if not fams:
        return None
    poles = []
    for idx, (u, v) in enumerate(fams):
        for j in range(cap):
            poles.append((_pole(u, v, j), idx, j))
    # only use poles closer than the last pole of every family
    bound = min(_pole(u, v, cap - 1) for u, v in fams) if side == "right" else max(
        _pole(u, v, cap - 1) for u, v in fams
    )
    poles.sort(key=lambda t: t[0] if side == "right" else -t[0])
    out = []
    for s, idx, j in poles:
        if (side == "right" and s > bound) or (side == "left" and s < bound):
            break
        cn, cd = _pole_order(s, prep.num, prep.den)
        if cn <= cd:
            out.append((s, -math.inf, 0.0))
            continue
        if cn > 1 or cd > 0:
            return ("multiple", s)
        u, v = fams[idx]
        logc = -special.gammaln(j + 1) - math.log(abs(v))
        sign = -1.0 if j % 2 else 1.0
        for uu, vv in prep.num:
            if (uu, vv) == (u, v):
                continue
            lg, sg = _log_abs_gamma(uu + vv * s)
            logc += lg
            sign *= sg
        for uu, vv in prep.den:
            lg, sg = _log_abs_gamma(uu + vv * s)
            logc -= lg
            sign *= sg
        out.append((s, logc, sign))
    return out


@functools.lru_cache(maxsize=1024)
def _cached_terms(prep: _Prepared, side: str, cap: int):
    return _series_terms(prep, side, cap)


def eval_h_series(x: float, O: OrderSeq, P: ParamSeq, cfg: EvalConfig = DEFAULT_CONFIG, side: str | None = None):
    """Residue-series value of ``k H(c x)``; raises ConvergenceError when unusable."""
    prep = _prepare(O, P)
    if side is None:
        side = "right" if prep.mu > 0 else "left" if prep.mu < 0 else "right"
    terms = _cached_terms(prep, side, cfg.series_term_cap)
    if terms is None:
        # no poles on that side: the function vanishes identically there
        return 0.0
    if isinstance(terms, tuple):
        raise ConvergenceError(f"repeated pole at s={terms[1]:.6g}; series not available")
    lx = math.log(x) + prep.logc
    total = 0.0
    comp = 0.0
    peak = -math.inf
    quiet = 0
    n_live = 0
    for s, logc, sign in terms:
        if logc == -math.inf:
            continue
        lt = logc + s * lx
        peak = max(peak, lt)
        term = sign * math.exp(lt) if lt < 700 else math.inf
        if not math.isfinite(term):
            raise ConvergenceError("series term overflow")
        # Kahan summation
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        n_live += 1
        if abs(term) <= cfg.rel_tolerance * 1e-2 * abs(total) and lt < peak:
            quiet += 1
            if quiet >= 10:
                break
        else:
            quiet = 0
    else:
        raise ConvergenceError("residue series did not converge within the term cap")
    if total == 0.0:
        raise ConvergenceError("residue series summed to zero")
    lost = math.exp(peak - math.log(abs(total))) * 2.2e-16 * math.sqrt(n_live)
    if lost > cfg.rel_tolerance:
        raise ConvergenceError(f"cancellation in residue series (relative error ~{lost:.1e})")
    return prep.k * total


# -- contour quadrature -------------------------------------------------------


def _line_peak(prep: _Prepared, sigma: np.ndarray, lx: float) -> np.ndarray:
    # the tiny offset steps over removable singularities on the real axis
    taus = np.array([1e-9, 0.5, 1.5, 4.0])
    s = sigma[:, None] + 1j * taus[None, :]
    with np.errstate(invalid="ignore"):
        lt = _log_theta(prep, s).real
    return np.max(lt, axis=1) + sigma * lx


def _choose_sigma(prep: _Prepared, lx: float, cfg: EvalConfig) -> float:
    lo, hi = prep.lo, prep.hi
    if cfg.contour_offset is not None:
        sig = float(cfg.contour_offset)
        if not lo < sig < hi:
            raise EmptyStripError(f"contour Re s={sig} outside pole-free strip ({lo}, {hi})")
        return sig
    if not lo < hi:
        raise EmptyStripError(f"pole-free strip is empty: ({lo}, {hi})")
    if math.isfinite(lo) and math.isfinite(hi):
        margin = min(0.25 * (hi - lo), 1.0)
        a, b = lo + margin, hi - margin
    elif math.isfinite(lo):
        a, b = lo + 1.0, lo + 1.0 + 16.0
    elif math.isfinite(hi):
        a, b = hi - 1.0 - 16.0, hi - 1.0
    else:
        a, b = -8.0, 8.0
    # widen an open side while the line magnitude keeps decreasing towards it
    def phi(sig):
        return float(_line_peak(prep, np.array([sig]), lx)[0])

    for _ in range(60):
        grid = np.linspace(a, b, 33)
        vals = _line_peak(prep, grid, lx)
        vals = np.where(np.isnan(vals), np.inf, vals)
        i = int(np.argmin(vals))
        if i == 0 and not math.isfinite(lo):
            a, b = a - 2 * (b - a), a + 0.5 * (b - a)
            continue
        if i == len(grid) - 1 and not math.isfinite(hi):
            a, b = b - 0.5 * (b - a), b + 2 * (b - a)
            continue
        # for extreme arguments the minimum can sit right next to a pole; follow it
        # there, otherwise the line integral cancels away all relative precision
        if i == 0 and a - lo > 1e-9 * (hi - lo):
            a, b = lo + (a - lo) / 16, grid[1]
            continue
        if i == len(grid) - 1 and hi - b > 1e-9 * (hi - lo):
            a, b = grid[-2], hi - (hi - b) / 16
            continue
        break
    left = grid[max(i - 1, 0)]
    right = grid[min(i + 1, len(grid) - 1)]
    if right > left:
        res = optimize.minimize_scalar(phi, bounds=(left, right), method="bounded", options={"xatol": 1e-3})
        if np.isfinite(res.fun) and res.fun <= vals[i]:
            return float(res.x)
    return float(grid[i])


def _off_poles(prep: _Prepared, sigma: float) -> float:
    """Nudge ``sigma`` off numerator singularities that cancel against the denominator."""
    for _ in range(8):
        if not any(_is_nonpos_int(u + v * sigma) for u, v in prep.num):
            return sigma
        span = prep.hi - prep.lo
        sigma += 1e-3 * (span if math.isfinite(span) else 1.0)
    return sigma


def _integrand(prep: _Prepared, sigma: float, lx: float, tau: np.ndarray) -> np.ndarray:
    s = sigma + 1j * tau
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        val = np.exp(_log_theta(prep, s) + s * lx).real
    return np.nan_to_num(val, nan=0.0, posinf=0.0, neginf=0.0)


def _march(prep, sigma, lx, start, h, cfg, budget):
    """Sum the integrand on ``start + j*h``, stopping after 50 negligible nodes."""
    total = 0.0
    mag = 0.0
    quiet = 0
    j0 = 0
    used = 0
    block = 256
    while True:
        tau = start + h * np.arange(j0, j0 + block)
        f = _integrand(prep, sigma, lx, tau)
        used += block
        af = np.abs(f)
        cmag = mag + np.cumsum(af)
        small = af <= cfg.rel_tolerance * 1e-3 * cmag
        # length of the run of negligible nodes ending at each index
        idx = np.arange(block)
        last_loud = np.maximum.accumulate(np.where(small, -1 - quiet, idx))
        run = idx - last_loud
        stop = np.flatnonzero(run >= 50)
        if stop.size:
            i = int(stop[0])
            return total + float(np.sum(f[: i + 1])), float(cmag[i]), used
        total += float(np.sum(f))
        mag = float(cmag[-1])
        quiet = int(run[-1])
        j0 += block
        block = min(block * 2, 8192)
        if used > budget:
            raise ConvergenceError("contour integrand did not decay within the node cap")


def eval_h_contour(x: float, O: OrderSeq, P: ParamSeq, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    prep = _prepare(O, P)
    lx = math.log(x) + prep.logc
    sigma = _off_poles(prep, _choose_sigma(prep, lx, cfg))
    d = min(sigma - prep.lo, prep.hi - sigma)
    h = min(0.5, d)
    budget = cfg.max_quadrature_nodes
    f0 = _integrand(prep, sigma, lx, np.array([0.0]))[0]
    rest, mag, used = _march(prep, sigma, lx, h, h, cfg, budget)
    est = h * (0.5 * f0 + rest)
    scale = h * (0.5 * abs(f0) + mag)
    for _ in range(30):
        new, mag2, n2 = _march(prep, sigma, lx, h / 2, h, cfg, budget)
        used += n2
        h /= 2
        nxt = 0.5 * est + h * new
        scale = 0.5 * scale + h * mag2
        err = abs(nxt - est)
        est = nxt
        if err <= max(cfg.rel_tolerance * abs(est), 64 * 2.2e-16 * scale):
            break
        if used > budget:
            raise ConvergenceError(f"contour quadrature exceeded {budget} nodes")
    else:
        raise ConvergenceError("contour quadrature did not converge")
    val = prep.k * est / math.pi
    if cfg.debug_csv:
        with open(cfg.debug_csv, "a") as fh:
            fh.write(f"{x!r},{sigma!r},{h!r},{used},{val!r}\n")
    return val


# -- public evaluation --------------------------------------------------------


def _eval_scalar(x: float, O: OrderSeq, P: ParamSeq, cfg: EvalConfig) -> float:
    if x < 0 or not math.isfinite(x):
        raise ValueError(f"H-function argument must be finite and nonnegative, got {x}")
    if x == 0:
        return _limit_at_zero(O, P)
    if cfg.method == "series":
        return eval_h_series(x, O, P, cfg)
    if cfg.method == "auto":
        prep = _prepare(O, P)
        if prep.mu != 0 and cfg.contour_offset is None:
            try:
                return eval_h_series(x, O, P, cfg)
            except (ConvergenceError, OverflowError):
                pass
    return eval_h_contour(x, O, P, cfg)


def _limit_at_zero(O: OrderSeq, P: ParamSeq) -> float:
    prep = _prepare(O, P)
    if prep.hi == math.inf:
        return 0.0
    if prep.hi > 0:
        return 0.0
    if prep.hi < 0:
        raise DivergenceError("H-function is unbounded as x -> 0+")
    exp = asymptotic_expansion(O, P, "near-zero")
    return prep.k * exp.coefficient


def eval_h(x, O: OrderSeq, P: ParamSeq, cfg: EvalConfig = DEFAULT_CONFIG):
    """Evaluate ``k H^{m,n}_{p,q}[c x]`` for scalar or array ``x >= 0``."""
    if np.ndim(x) == 0:
        return _eval_scalar(float(x), O, P, cfg)
    xs = np.asarray(x, dtype=float)
    out = np.empty(xs.shape)
    for i, xi in np.ndenumerate(xs):
        out[i] = _eval_scalar(float(xi), O, P, cfg)
    return out


def asymptotic_expansion(O: OrderSeq, P: ParamSeq, side: str = "near-zero") -> AsymptoticExpansion:
    """Leading algebraic term from the dominant simple pole on one side."""
    prep = _prepare(O, P)
    which = {"near-zero": "right", "near-infinity": "left"}.get(side)
    if which is None:
        raise ValueError(f"side must be 'near-zero' or 'near-infinity', got {side!r}")
    target = prep.hi if which == "right" else prep.lo
    if not math.isfinite(target):
        raise HFunctionError(f"no algebraic poles {side}; decay is faster than any power")
    cn, cd = _pole_order(target, prep.num, prep.den)
    if cn - cd > 1 or (cn > 1):
        raise HFunctionError(f"dominant pole at s={target:.6g} is repeated (logarithmic case)")
    logc, sign = 0.0, 1.0
    found = False
    for u, v in prep.num:
        z = u + v * target
        if _is_nonpos_int(z) and not found:
            j = -round(z)
            logc += -special.gammaln(j + 1) - math.log(abs(v))
            sign *= -1.0 if j % 2 else 1.0
            found = True
            continue
        lg, sg = _log_abs_gamma(z)
        logc += lg
        sign *= sg
    for u, v in prep.den:
        lg, sg = _log_abs_gamma(u + v * target)
        logc -= lg
        sign *= sg
    return AsymptoticExpansion(target, sign * math.exp(logc), side, prep.k, P.c)


# -- transforms ---------------------------------------------------------------


def _log_grid_integral(g: Callable[[float], float], centre: float, tol: float) -> float:
    """Integrate ``g(e^u) e^u`` over the real line with a data-driven window.

    The integrand is smooth in ``u`` and decays at both ends, so the trapezoid
    rule converges geometrically; the step is halved until two sums agree.
    """
    cache: dict[float, float] = {}

    def h(u):
        v = cache.get(u)
        if v is None:
            if u > 700:
                raise DivergenceError("integrand does not decay towards t -> infinity")
            t = math.exp(u)
            v = g(t) * t if t > 0 else 0.0
            if not math.isfinite(v):
                raise DivergenceError(f"integrand is not finite at t={t:.6g}")
            cache[u] = v
        return v

    us = centre + 2.0 * np.arange(-8, 9)
    vals = np.array([abs(h(u)) for u in us])
    peak = vals.max()
    if not np.isfinite(peak):
        raise DivergenceError("integrand is not finite")
    if peak == 0:
        return 0.0
    lo_u, hi_u = float(us[0]), float(us[-1])
    lo_v, hi_v = vals[0], vals[-1]
    def negligible(v, prev, step):
        # beyond the window the tail decays at least geometrically; bound its mass
        if v <= 1e-18 * peak:
            return True
        if not 0 < v < prev:
            return False
        rate = math.log(prev / v) / step
        return v / rate <= 0.1 * tol * peak

    step, prev = 2.0, vals[1]
    while not negligible(lo_v, prev, step):
        prev = lo_v
        lo_u -= step
        lo_v = abs(h(lo_u))
        peak = max(peak, lo_v)
        if lo_u < centre - 3000:
            raise DivergenceError("integrand does not decay towards t -> 0")
        step = min(step * 1.25, 32.0)
    step, prev = 2.0, vals[-2]
    while not negligible(hi_v, prev, step):
        prev = hi_v
        hi_u += step
        hi_v = abs(h(hi_u))
        peak = max(peak, hi_v)
        if hi_u > centre + 3000:
            raise DivergenceError("integrand does not decay towards t -> infinity")
        step = min(step * 1.25, 32.0)
    n = max(16, int(math.ceil((hi_u - lo_u) / 1.0)))
    hstep = (hi_u - lo_u) / n
    nodes = lo_u + hstep * np.arange(n + 1)
    est = hstep * sum(h(float(u)) for u in nodes)
    for _ in range(8):
        mids = nodes[:-1] + 0.5 * hstep
        new = 0.5 * est + 0.5 * hstep * sum(h(float(u)) for u in mids)
        nodes = np.sort(np.concatenate([nodes, mids]))
        hstep *= 0.5
        if abs(new - est) <= tol * max(abs(new), 1e-300):
            return new
        est = new
    return est


def h_transform_numeric(
    f: Callable[[float], float],
    s: float,
    O: OrderSeq,
    P: ParamSeq,
    cfg: EvalConfig = DEFAULT_CONFIG,
    centre: float = 0.0,
) -> float:
    """``k int_0^inf H(c s t) f(t) dt`` by quadrature in ``ln t``."""
    if not s > 0:
        raise ValueError("transform argument must be positive")

    def g(t):
        ft = f(t)
        if ft == 0.0:
            return 0.0
        return eval_h(s * t, O, P, cfg) * ft

    # the outer sum cannot agree more tightly than the kernel values it adds up
    return _log_grid_integral(g, centre, max(1e-11, 10 * cfg.rel_tolerance))


def integrate_kernel(O: OrderSeq, P: ParamSeq, cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[float, bool]:
    """Numeric ``int_0^inf k H(c x) dx`` and whether a negative value was seen."""
    seen_negative = [False]

    def g(x):
        v = eval_h(x, O, P, cfg)
        if v < -1e-12 * abs(P.k):
            seen_negative[0] = True
        return v

    total = _log_grid_integral(g, -math.log(P.c), 1e-11)
    return total, seen_negative[0]
