"""First-passage-time (H-noise) statistics: the FPT variate, tails, log moments and power."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diffusion import DiffusionSpec, preset
from .hfunc import EvalConfig, DEFAULT_CONFIG, pole_strip
from .params import OrderSeq, ParamSeq
from .variate import EULER_GAMMA, HVariate

__all__ = [
    "Constants",
    "CONSTANTS",
    "NoiseModel",
    "NoiseTableRow",
    "fpt_variate",
    "fpt_variate_general",
    "shd_fpt_params",
    "noise_model",
    "survival",
    "tail_constant",
    "tail_constant_formula",
    "tail_constant_shd",
    "noise_log_moment",
    "shd_log_moment",
    "noise_geometric_power",
    "noise_power",
    "noise_preset_table",
    "NOISE_TABLE",
    "survival_asymptote",
]


@dataclass(frozen=True)
class Constants:
    gamma_e: float = EULER_GAMMA
    G: float = math.exp(EULER_GAMMA)


CONSTANTS = Constants()


def fpt_variate_general(spec: DiffusionSpec, a: float) -> HVariate:
    """FPT to level ``a`` via the image method applied to the combined kernel."""
    if not a > 0:
        raise ValueError(f"distance must be positive, got {a}")
    law = spec.combined.law_at_1
    O, P = law.order, law.params
    w = spec.exponent
    order = OrderSeq(O.n, O.m, O.q, O.p)
    params = ParamSeq(
        P.k / P.c,
        1.0,
        [1 - b - B - B / w for b, B in zip(P.b, P.B)],
        [1 - x - A - A / w for x, A in zip(P.a, P.A)],
        [B / w for B in P.B],
        [A / w for A in P.A],
    )
    return HVariate(order, params).scaled((a * P.c) ** (1 / w))


def shd_fpt_params(alpha1: float, alpha2: float, omega1: float, omega2: float) -> tuple[OrderSeq, ParamSeq]:
    w = omega1 * omega2
    return OrderSeq(1, 2, 3, 3), ParamSeq(
        2 / alpha1,
        1.0,
        [-1 / omega2, -1 / w, -1 / (2 * w)],
        [-1 / (alpha1 * w), -1 / (2 * w), -alpha2 / omega2],
        [1 / omega2, 1 / w, 1 / (2 * w)],
        [1 / (alpha1 * w), 1 / (2 * w), alpha2 / omega2],
    )


def fpt_variate(spec: DiffusionSpec, a: float) -> HVariate:
    """FPT variate; standard H-diffusions use their closed parameter sequence."""
    if spec.shd is None:
        return fpt_variate_general(spec, a)
    if not a > 0:
        raise ValueError(f"distance must be positive, got {a}")
    s = spec.shd
    O, P = shd_fpt_params(s.alpha1, s.alpha2, spec.omega1, spec.omega2)
    scale = (a / (s.beta1 * s.beta2**spec.omega1)) ** (1 / spec.exponent)
    return HVariate(O, P).scaled(scale)


# -- tails --------------------------------------------------------------------


def tail_constant_formula(spec: DiffusionSpec) -> float:
    """``omega1*omega2 * (1 + first live right pole)`` of the combined kernel."""
    law = spec.combined.law_at_1
    _, hi = pole_strip(law.order, law.params)
    return spec.exponent * (1 + hi)


def tail_constant_shd(spec: DiffusionSpec) -> float:
    if spec.shd is None:
        raise ValueError("shortcut applies to standard H-diffusions only")
    w1, w2 = spec.omega1, spec.omega2
    return w1 * w2 if w1 < 1 else w2


def _tail_from_variate(fpt: HVariate) -> float:
    lo, _ = pole_strip(fpt.order, fpt.params)
    return -(1 + lo)


def tail_constant(obj) -> float:
    """Survival decays like ``t**-kappa``; accepts a NoiseModel, an HVariate or a spec."""
    if isinstance(obj, NoiseModel):
        return obj.kappa
    if isinstance(obj, HVariate):
        return _tail_from_variate(obj)
    if isinstance(obj, DiffusionSpec):
        return tail_constant_formula(obj)
    raise TypeError(f"cannot take a tail constant of {type(obj).__name__}")


# -- model --------------------------------------------------------------------


@dataclass(frozen=True)
class NoiseModel:
    fpt: HVariate
    a: float
    kappa: float
    S: float
    spec: DiffusionSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        if not (self.kappa > 0 and self.S > 0):
            raise ValueError("tail constant and geometric power must be positive")

    @property
    def N(self) -> float:
        return self.S * self.S


def noise_model(spec: DiffusionSpec, a: float, cfg: EvalConfig = DEFAULT_CONFIG, method: str = "mellin") -> NoiseModel:
    fpt = fpt_variate(spec, a).with_config(cfg)
    S = math.exp(fpt.log_moment(method))
    return NoiseModel(fpt, a, _tail_from_variate(fpt), S, spec)


def survival(nm: NoiseModel, t):
    return nm.fpt.sf(t)


def shd_log_moment(spec: DiffusionSpec, a: float) -> float:
    s = spec.shd
    if s is None:
        raise ValueError("closed form applies to standard H-diffusions only")
    w1, w2 = spec.omega1, spec.omega2
    w = w1 * w2
    lead = (1 - 1 / s.alpha1 + (1 - s.alpha2) * w1) / w
    return lead * EULER_GAMMA + math.log(a / (s.beta1 * s.beta2**w1)) / w


def noise_log_moment(nm: NoiseModel, method: str = "mellin") -> float:
    return nm.fpt.log_moment(method)


def noise_geometric_power(nm: NoiseModel) -> float:
    return nm.S


def noise_power(nm: NoiseModel) -> float:
    return nm.N


# -- per-preset noise table ---------------------------------------------------


@dataclass(frozen=True)
class NoiseTableRow:
    name: str
    order: OrderSeq
    params: ParamSeq
    omega: float
    c: float
    a: float

    @property
    def variate(self) -> HVariate:
        return HVariate(self.order, self.params).scaled(self.a ** (1 / self.omega))

    @property
    def geometric_power(self) -> float:
        return self.a ** (1 / self.omega) * CONSTANTS.G ** (1 / self.omega - self.c)


def _row_st_fd(alpha, beta):
    return (
        OrderSeq(1, 2, 3, 3),
        ParamSeq(
            2 / alpha,
            1.0,
            [-1 / beta, -alpha / beta, -alpha / (2 * beta)],
            [-1 / beta, -alpha / (2 * beta), -1.0],
            [1 / beta, alpha / beta, alpha / (2 * beta)],
            [1 / beta, alpha / (2 * beta), 1.0],
        ),
        beta / alpha,
        1.0,
    )


def _row_s_fd(alpha, beta):
    return (
        OrderSeq(1, 1, 2, 2),
        ParamSeq(2 / alpha, 1.0, [-alpha, -alpha / 2], [-1.0, -alpha / 2], [alpha, alpha / 2], [1.0, alpha / 2]),
        1 / alpha,
        1.0,
    )


def _row_t_fd(beta):
    return OrderSeq(0, 1, 1, 1), ParamSeq(1.0, 1.0, [-2 / beta], [-1.0], [2 / beta], [1.0]), beta / 2, 1.0


def _row_ek_fd(alpha, beta):
    g = 4 ** (1 / alpha)
    return (
        OrderSeq(0, 2, 2, 1),
        ParamSeq(g / math.sqrt(math.pi), g, [-1 / alpha, 0.5 - 1 / alpha], [-beta / alpha], [1 / alpha, 1 / alpha], [beta / alpha]),
        alpha / 2,
        beta / alpha,
    )


def _row_gbm(beta):
    O, P, w, _ = _row_ek_fd(beta, beta)
    return O, P, w, 1.0


def _row_fbm(alpha):
    g = 4 ** (1 / alpha)
    return OrderSeq(0, 1, 1, 0), ParamSeq(g / math.sqrt(math.pi), g, [0.5 - 1 / alpha], [], [1 / alpha], []), alpha / 2, 1 / alpha


def _row_bm():
    return OrderSeq(0, 1, 1, 0), ParamSeq(4 / math.sqrt(math.pi), 4.0, [-0.5], [], [1.0], []), 0.5, 1.0


NOISE_TABLE = {
    "ST-FD": _row_st_fd,
    "S-FD": _row_s_fd,
    "T-FD": _row_t_fd,
    "EK-FD": _row_ek_fd,
    "GBM": _row_gbm,
    "FBM": _row_fbm,
    "BM": _row_bm,
}


def noise_preset_table(name: str, params: dict | None = None, a: float = 1.0) -> NoiseTableRow:
    """Closed-form noise row for a named preset.

    The S-FD row describes the stable parent without a directing process,
    so it matches the pipeline only for that reading of the model.
    """
    params = dict(params or {})
    if name not in NOISE_TABLE:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(NOISE_TABLE)}")
    if not a > 0:
        raise ValueError(f"distance must be positive, got {a}")
    preset(name, **params)  # range checks
    from .diffusion import PRESETS

    names = PRESETS[name][1]
    O, P, w, c = NOISE_TABLE[name](*(float(params[n]) for n in names))
    return NoiseTableRow(name, O, P, w, c, a)


def survival_asymptote(nm: NoiseModel, anchor: float | None = None):
    """Leading tail ``C t**-kappa`` of the survival function.

    ``C`` comes from the dominant left pole of the density; when that pole is
    repeated the constant is matched to the survival at ``anchor`` instead.
    """
    from .hfunc import HFunctionError, asymptotic_expansion

    kappa = nm.kappa
    try:
        exp = asymptotic_expansion(nm.fpt.order, nm.fpt.params, "near-infinity")
        C = float(exp.value(1.0)) / kappa
    except HFunctionError:
        if anchor is None:
            raise
        C = float(nm.fpt.sf(anchor)) * anchor**kappa

    def tail(t):
        return C * np.power(np.asarray(t, dtype=float), -kappa)

    return tail
