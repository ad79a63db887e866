"""Monte Carlo oracles: exact variate samplers, a CTRW first-passage simulator and SEP estimation.

Every sampler takes an explicit ``numpy.random.Generator`` so that runs are
reproducible from a seed and a stream id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .diffusion import DiffusionSpec, Family
from .link import LinkConfig

__all__ = [
    "RngStream",
    "sample_symmetric_stable",
    "sample_onesided_stable",
    "sample_mwright",
    "mittag_leffler_waits",
    "sample_family",
    "sample_position",
    "sample_fpt",
    "CtrwConfig",
    "CtrwResult",
    "simulate_fpt_ctrw",
    "SepEstimate",
    "simulate_sep",
    "wilson_interval",
    "geometric_mean",
    "ks_statistic",
]


@dataclass(frozen=True)
class RngStream:
    """Seeded, independently spawnable random stream."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, k: int) -> "RngStream":
        return RngStream(self.seed, self.stream * 1_000_003 + k + 1)


# -- exact samplers -----------------------------------------------------------


def sample_symmetric_stable(alpha: float, gamma: float, rng: np.random.Generator, size) -> np.ndarray:
    """Chambers-Mallows-Stuck draw with characteristic function ``exp(-gamma |w|**alpha)``."""
    V = rng.uniform(-math.pi / 2, math.pi / 2, size)
    W = rng.exponential(1.0, size)
    if alpha == 1:
        X = np.tan(V)
    else:
        X = np.sin(alpha * V) / np.cos(V) ** (1 / alpha) * (np.cos((1 - alpha) * V) / W) ** ((1 - alpha) / alpha)
    return gamma ** (1 / alpha) * X


def _kanter(alpha: float, rng: np.random.Generator, size) -> np.ndarray:
    """Positive stable draw with Laplace transform ``exp(-s**alpha)``."""
    if alpha == 1:
        return np.ones(size)
    U = rng.uniform(0.0, math.pi, size)
    W = rng.exponential(1.0, size)
    return np.sin(alpha * U) / np.sin(U) ** (1 / alpha) * (np.sin((1 - alpha) * U) / W) ** ((1 - alpha) / alpha)


def sample_onesided_stable(alpha: float, gamma: float, rng: np.random.Generator, size) -> np.ndarray:
    """Totally skewed stable draw with dispersion ``gamma`` (Laplace ``exp(-gamma s**alpha / cos(pi alpha/2))``)."""
    if not 0 < alpha < 1:
        raise ValueError(f"one-sided stable index must lie in (0, 1), got {alpha}")
    sigma = gamma / math.cos(math.pi * alpha / 2)
    return sigma ** (1 / alpha) * _kanter(alpha, rng, size)


def sample_mwright(alpha2: float, beta2: float, rng: np.random.Generator, size) -> np.ndarray:
    """M-Wright draw scaled by ``beta2``; ``alpha2 = 1`` is the point mass at ``beta2``."""
    if alpha2 == 1:
        return np.full(size, float(beta2))
    return beta2 * _kanter(alpha2, rng, size) ** (-alpha2)


def mittag_leffler_waits(nu: float, count, rng: np.random.Generator) -> np.ndarray:
    """Sum of ``count`` iid Mittag-Leffler(nu) waits, drawn exactly as ``Gamma(count)**(1/nu) * S``."""
    count = np.asarray(count, dtype=float)
    G = rng.gamma(count)
    return G ** (1 / nu) * _kanter(nu, rng, count.shape)


def sample_family(fam: Family, rng: np.random.Generator, size) -> np.ndarray:
    if fam.name == "stable":
        return sample_symmetric_stable(*fam.args, rng, size)
    if fam.name == "mwright":
        return sample_mwright(*fam.args, rng, size)
    if fam.name == "onesided-stable":
        return sample_onesided_stable(*fam.args, rng, size)
    if fam.name == "delta":
        return np.ones(size)
    raise ValueError(f"no sampler for family {fam.name!r}")


def sample_position(spec: DiffusionSpec, t: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``t**(w1 w2) * p(1) * d(1)**w1`` from independent parent and directing samples."""
    p = sample_family(spec.parent.family, rng, size)
    d = sample_family(spec.directing.family, rng, size)
    return t**spec.exponent * p * d**spec.omega1


def sample_fpt(spec: DiffusionSpec, a: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Exact draw of the image-method FPT law: ``(a / |x(1)|)**(1/(w1 w2))``."""
    x = np.abs(sample_position(spec, 1.0, rng, size))
    return (a / x) ** (1 / spec.exponent)


# -- CTRW ---------------------------------------------------------------------


STABLE_MAX_STEPS = 1e8


@dataclass(frozen=True)
class CtrwConfig:
    """Stable jumps of scale ``h`` and Mittag-Leffler waits of scale ``tau0``.

    A walk is absorbed at its first landing at or beyond the level.
    """

    h: float
    tau0: float
    max_steps: float = 1e15
    block: int = 512

    def __post_init__(self):
        if not (self.h > 0 and self.tau0 > 0 and self.max_steps >= 1):
            raise ValueError("jump and waiting scales must be positive")

    @classmethod
    def matched(cls, spec: DiffusionSpec, a: float, resolution: float = 1000.0, **kw) -> "CtrwConfig":
        """Choose ``h = a/resolution`` and ``tau0`` so that ``h**alpha1 / tau0**alpha2 = K``.

        Stable-jump walks are simulated jump by jump, so their default step cap
        is lower; Gaussian walks merge far-from-level steps and keep the large cap.
        """
        alpha1, alpha2 = _ctrw_indices(spec)
        h = a / resolution
        tau0 = (h**alpha1 / spec.K) ** (1 / alpha2)
        if alpha1 < 2:
            kw.setdefault("max_steps", STABLE_MAX_STEPS)
        return cls(h, tau0, **kw)


def _ctrw_indices(spec: DiffusionSpec) -> tuple[float, float]:
    s = spec.shd
    if s is None or not (math.isclose(spec.omega1, 1 / s.alpha1) and math.isclose(spec.omega2, s.alpha2)):
        raise ValueError("the CTRW limit is the (alpha1, alpha2) standard H-diffusion; got another composition")
    return s.alpha1, s.alpha2


@dataclass(frozen=True)
class CtrwResult:
    times: np.ndarray  # inf marks a censored walk
    steps: np.ndarray

    @property
    def censored_fraction(self) -> float:
        return float(np.mean(~np.isfinite(self.times)))


def _gaussian_steps(cfg: CtrwConfig, a: float, rng: np.random.Generator, n: int) -> np.ndarray:
    # far from the level, k steps are merged into one N(0, k sigma^2) move; a merged
    # block starts at least 6 block standard deviations below a, so an unseen crossing
    # inside it has probability below 2e-9
    sigma = math.sqrt(2.0) * cfg.h
    x = np.zeros(n)
    steps = np.zeros(n)
    active = np.arange(n)
    while active.size:
        D = a - x[active]
        k = np.maximum(1.0, np.floor((D / (6 * sigma)) ** 2))
        x[active] += sigma * np.sqrt(k) * rng.standard_normal(active.size)
        steps[active] += k
        keep = (x[active] < a) & (steps[active] <= cfg.max_steps)
        active = active[keep]
    steps[x < a] = np.inf
    return steps


_STABLE_BUDGET = 1 << 20  # jump draws per vectorized block


def _stable_steps(cfg: CtrwConfig, alpha1: float, a: float, rng: np.random.Generator, n: int) -> np.ndarray:
    x = np.zeros(n)
    steps = np.zeros(n)
    done = np.full(n, np.inf)
    active = np.arange(n)
    while active.size:
        # long walks are few: widen the block so the loop count stays small
        width = int(min(max(cfg.block, _STABLE_BUDGET // active.size), cfg.max_steps))
        J = cfg.h * sample_symmetric_stable(alpha1, 1.0, rng, (active.size, width))
        path = x[active, None] + np.cumsum(J, axis=1)
        hit = path >= a
        any_hit = hit.any(axis=1)
        first = np.argmax(hit, axis=1)
        done[active[any_hit]] = steps[active[any_hit]] + first[any_hit] + 1
        x[active] = path[:, -1]
        steps[active] += width
        keep = ~any_hit & (steps[active] < cfg.max_steps)
        active = active[keep]
    return done


def simulate_fpt_ctrw(spec: DiffusionSpec, a: float, cfg: CtrwConfig, rng: np.random.Generator, n_walks: int) -> CtrwResult:
    """First time each walk lands at or beyond ``a``; waits are summed exactly given the step count."""
    alpha1, alpha2 = _ctrw_indices(spec)
    if alpha1 == 2:
        steps = _gaussian_steps(cfg, a, rng, n_walks)
    else:
        steps = _stable_steps(cfg, alpha1, a, rng, n_walks)
    times = np.full(n_walks, np.inf)
    ok = np.isfinite(steps)
    if alpha2 == 1:
        times[ok] = cfg.tau0 * rng.gamma(steps[ok])
    else:
        times[ok] = cfg.tau0 * mittag_leffler_waits(alpha2, steps[ok], rng)
    return CtrwResult(times, steps)


# -- SEP ----------------------------------------------------------------------


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    p = k / n
    den = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return max(0.0, mid - half), min(1.0, mid + half)


@dataclass(frozen=True)
class SepEstimate:
    p_hat: float
    ci_low: float
    ci_high: float
    errors: int
    trials: int

    @property
    def ci_width(self) -> float:
        return self.ci_high - self.ci_low


def simulate_sep(cfg: LinkConfig, trials: int, rng: np.random.Generator, chunk: int = 200_000) -> SepEstimate:
    """Symbol errors of first-arrival detection with release offsets ``i Ts/M``."""
    slot = cfg.Ts / cfg.M
    errors = 0
    left = trials
    while left > 0:
        n = min(chunk, left)
        sym = rng.integers(0, cfg.M, n)
        t = sample_fpt(cfg.spec, cfg.a, rng, n * cfg.N).reshape(n, cfg.N).min(axis=1)
        y = sym * slot + t
        decided = np.minimum(np.floor(y / slot), cfg.M - 1).astype(np.int64)
        errors += int(np.count_nonzero(decided != sym))
        left -= n
    lo, hi = wilson_interval(errors, trials)
    return SepEstimate(errors / trials, lo, hi, errors, trials)


# -- statistics helpers -------------------------------------------------------


def geometric_mean(samples) -> float:
    x = np.asarray(samples, dtype=float)
    if x.size == 0 or not np.all(x > 0):
        raise ValueError("geometric mean needs a nonempty set of positive samples")
    return float(np.exp(np.mean(np.log(x))))


def ks_statistic(samples, cdf, nodes: int = 600) -> float:
    """KS distance against an expensive analytic CDF.

    The CDF is evaluated exactly at ``nodes`` empirical quantiles and
    interpolated monotonically in between. ``+inf`` samples (censored walks)
    count toward the sample size but never enter the empirical CDF.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    if np.any(np.isnan(x) | (x == -np.inf)):
        raise ValueError("samples must be real or +inf")
    n = x.size
    finite = x[np.isfinite(x)]
    q = np.unique(np.quantile(finite, np.linspace(0, 1, nodes)))
    F = np.maximum.accumulate(np.clip(np.asarray(cdf(q), dtype=float), 0.0, 1.0))
    Fx = np.clip(PchipInterpolator(q, F)(finite), 0.0, 1.0) if q.size > 1 else np.full(finite.size, F[0])
    i = np.arange(1, finite.size + 1)
    gap = max(np.max(i / n - Fx, initial=0.0), np.max(Fx - (i - 1) / n, initial=0.0))
    return float(max(gap, 1.0 - finite.size / n))
