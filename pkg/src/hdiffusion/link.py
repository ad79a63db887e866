"""Timing-modulation link: first-arrival detection, SEP upper bound, SNR and high-SNR expansion."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammasgn, loggamma

from .diffusion import DiffusionSpec
from .hfunc import DEFAULT_CONFIG, EvalConfig, eval_h
from .noise import CONSTANTS, NoiseModel, noise_model, shd_log_moment
from .params import OrderSeq, ParamSeq

__all__ = [
    "LinkConfig",
    "HighSnrExpansion",
    "UnsupportedRegime",
    "link_noise",
    "first_arrival_distribution",
    "sep_upper_bound",
    "sep_shd_params",
    "g_star",
    "snr_of",
    "ts_for_snr",
    "high_snr_expansion",
    "sep_curve",
]


class UnsupportedRegime(ValueError):
    """Parameter combination outside the validity of a closed form."""


@dataclass(frozen=True)
class LinkConfig:
    M: int
    N: int
    Ts: float
    a: float
    spec: DiffusionSpec

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 2:
            raise ValueError(f"modulation order must be an integer >= 2, got {self.M}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"molecule count must be an integer >= 1, got {self.N}")
        if not (self.Ts > 0 and self.a > 0):
            raise ValueError("symbol time and distance must be positive")

    @property
    def release_times(self) -> np.ndarray:
        return np.arange(self.M) * (self.Ts / self.M)

    def with_ts(self, Ts: float) -> "LinkConfig":
        return LinkConfig(self.M, self.N, Ts, self.a, self.spec)


@functools.lru_cache(maxsize=64)
def _noise(spec: DiffusionSpec, a: float, cfg: EvalConfig) -> NoiseModel:
    return noise_model(spec, a, cfg)


def link_noise(cfg: LinkConfig, eval_cfg: EvalConfig = DEFAULT_CONFIG) -> NoiseModel:
    return _noise(cfg.spec, cfg.a, eval_cfg)


def first_arrival_distribution(nm: NoiseModel, N: int):
    """Density and CDF of the earliest of ``N`` independent arrivals."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    fpt = nm.fpt

    def pdf(t):
        t = np.asarray(t, dtype=float)
        return N * fpt.pdf(t) * np.power(fpt.sf(t), N - 1)

    def cdf(t):
        t = np.asarray(t, dtype=float)
        # 1 - S**N through expm1/log1p keeps precision when S is close to 1
        S = np.asarray(fpt.sf(t), dtype=float)
        with np.errstate(divide="ignore"):
            return -np.expm1(N * np.log(S))

    return pdf, cdf


# -- SNR ----------------------------------------------------------------------


def snr_of(cfg: LinkConfig, nm: NoiseModel | None = None) -> float:
    S = (nm or link_noise(cfg)).S
    return (cfg.Ts / S) ** 2 / (2 * CONSTANTS.G)


def ts_for_snr(snr: float, nm: NoiseModel) -> float:
    if not snr > 0:
        raise ValueError(f"SNR must be positive, got {snr}")
    return nm.S * math.sqrt(2 * CONSTANTS.G * snr)


# -- SEP bound ----------------------------------------------------------------


def g_star(spec: DiffusionSpec) -> float:
    s = spec.shd
    w1, w2 = spec.omega1, spec.omega2
    return CONSTANTS.G ** (2 * (1 - 1 / s.alpha1 + (1 - s.alpha2) * w1) / (w1 * w2) + 1)


def sep_shd_params(alpha1: float, alpha2: float, omega1: float, omega2: float) -> tuple[OrderSeq, ParamSeq]:
    w = omega1 * omega2
    return OrderSeq(2, 2, 4, 4), ParamSeq(
        4 / alpha1,
        1.0,
        [1.0, 1.0, 1.0, 1.0],
        [1.0, 1.0, 1.0, 0.0],
        [2.0, 2 / (alpha1 * w), 1 / w, 2 * alpha2 / omega2],
        [2 / omega2, 2 / w, 1 / w, 2.0],
    )


def _sep_general(cfg: LinkConfig, nm: NoiseModel) -> float:
    S = float(nm.fpt.sf(cfg.Ts / cfg.M))
    return (cfg.M - 1) / cfg.M * S**cfg.N


def _sep_shd(cfg: LinkConfig, eval_cfg: EvalConfig) -> float:
    spec = cfg.spec
    if spec.shd is None:
        raise ValueError("the closed SEP form needs a standard H-diffusion")
    s = spec.shd
    # the closed form uses the closed-form geometric power in its SNR
    S = math.exp(shd_log_moment(spec, cfg.a))
    snr = (cfg.Ts / S) ** 2 / (2 * CONSTANTS.G)
    z = cfg.M**2 / (2 * g_star(spec) * snr)
    O, P = sep_shd_params(s.alpha1, s.alpha2, spec.omega1, spec.omega2)
    h = float(eval_h(z, O, P, eval_cfg))
    return (cfg.M - 1) / cfg.M * h**cfg.N


def sep_upper_bound(cfg: LinkConfig, method: str = "general", eval_cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Union-type bound ``(M-1)/M * S(Ts/M)**N`` on the symbol error probability."""
    if method == "general":
        return _sep_general(cfg, link_noise(cfg, eval_cfg))
    if method == "shd":
        return _sep_shd(cfg, eval_cfg)
    raise ValueError(f"unknown method {method!r}")


# -- high-SNR expansion -------------------------------------------------------


@dataclass(frozen=True)
class HighSnrExpansion:
    s_inf: float
    p_inf: float
    g: float
    branch: str

    def asymptote(self, snr):
        return (self.p_inf * np.asarray(snr, dtype=float)) ** (-self.s_inf)


def _gamma(x: float) -> float:
    return float(gammasgn(x) * np.exp(loggamma(x).real))


def high_snr_expansion(cfg: LinkConfig) -> HighSnrExpansion:
    spec = cfg.spec
    if spec.shd is None:
        raise UnsupportedRegime("high-SNR expansion is available for standard H-diffusions only")
    s = spec.shd
    a1, a2 = s.alpha1, s.alpha2
    w1, w2 = spec.omega1, spec.omega2
    w = w1 * w2
    M, N = cfg.M, cfg.N
    gs = g_star(spec)
    if math.isclose(w1, 1.0, rel_tol=0, abs_tol=1e-12):
        raise UnsupportedRegime("omega1 = 1: the leading residue is a double pole, no closed offset")
    if w1 < 1:
        branch = "omega1<1"
        inner = _gamma(1 - w1) * _gamma(1 / a1) / (a1 * math.pi * _gamma(1 - a2 * w1))
        inner *= gs ** (-w / 2) / 2 ** (w / 2 - 1)
        g = (M - 1) * M ** (N * w - 1) * inner**N
        s_inf = N * w / 2
    else:
        branch = "omega1>1"
        if math.isclose(a2, 1.0, rel_tol=0, abs_tol=1e-12):
            raise UnsupportedRegime("alpha2 = 1 with omega1 > 1 puts a pole of Gamma(1 - alpha2) in the offset")
        inner = math.sin(math.pi / (2 * w1)) * _gamma(1 - 1 / w1) * _gamma(1 / (a1 * w1))
        inner /= a1 * math.pi * _gamma(1 - a2)
        inner *= gs ** (-w2 / 2) / 2 ** (w2 / 2 - 1)
        g = (M - 1) * M ** (N * w2 - 1) * inner**N
        s_inf = N * w2 / 2
    if not g > 0:
        raise UnsupportedRegime(f"offset constant is not positive (g={g})")
    return HighSnrExpansion(s_inf, (1 / g) ** (1 / s_inf), g, branch)


def sep_curve(spec: DiffusionSpec, a: float, M: int, N: int, snr, method: str = "general") -> np.ndarray:
    """Bound evaluated along an SNR sweep (linear SNR values)."""
    snr = np.atleast_1d(np.asarray(snr, dtype=float))
    base = LinkConfig(M, N, 1.0, a, spec)
    nm = link_noise(base)
    return np.array([sep_upper_bound(base.with_ts(ts_for_snr(x, nm)), method) for x in snr])
