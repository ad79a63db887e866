"""Self-similar H-processes, subordination and the diffusion preset catalog."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

from .params import (
    NULL_ORDER,
    NULL_PARAMS,
    OrderSeq,
    ParamSeq,
    convolution_op,
    elementary,
    is_null,
    to_dict,
)
from .variate import HVariate

__all__ = [
    "Family",
    "HProcess",
    "SHDParams",
    "DiffusionSpec",
    "NULL_DIRECTING",
    "PRESETS",
    "subordinate",
    "position_variate",
    "msd_classify",
    "stable_parent",
    "mwright_directing",
    "make_shd",
    "shd",
    "preset",
]

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class Family:
    """Sampler hint: which exact generator reproduces a law."""

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class HProcess:
    """Self-similar process whose law at time ``t`` is ``law_at_1`` scaled by ``t**omega``."""

    law_at_1: HVariate
    omega: float
    family: Family = field(default=Family("none"), compare=False)

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"self-similarity exponent must be positive, got {self.omega}")

    @property
    def symmetric(self) -> bool:
        return self.law_at_1.symmetric

    @property
    def is_null(self) -> bool:
        return is_null(self.law_at_1.order, self.law_at_1.params)

    def law_at(self, t: float) -> HVariate:
        if not t > 0:
            raise ValueError(f"time must be positive, got {t}")
        return self.law_at_1.scaled(t**self.omega)


NULL_DIRECTING = HProcess(HVariate(NULL_ORDER, NULL_PARAMS), 1.0, Family("delta"))


@dataclass(frozen=True)
class SHDParams:
    alpha1: float
    alpha2: float
    beta1: float = 1.0
    beta2: float = 1.0

    @property
    def K(self) -> float:
        return self.beta1**self.alpha1 * self.beta2


@dataclass(frozen=True)
class DiffusionSpec:
    parent: HProcess
    directing: HProcess = NULL_DIRECTING
    name: str = "custom"
    shd: SHDParams | None = None
    args: tuple = ()

    def __post_init__(self):
        if not self.parent.symmetric:
            raise ValueError("parent process must be symmetric")
        if self.directing.symmetric:
            raise ValueError("directing process must be one-sided")

    @property
    def omega1(self) -> float:
        return self.parent.omega

    @property
    def omega2(self) -> float:
        return self.directing.omega

    @property
    def exponent(self) -> float:
        """Self-similarity exponent ``omega1 * omega2`` of the position."""
        return self.omega1 * self.omega2

    @property
    def K(self) -> float | None:
        return self.shd.K if self.shd else None

    @functools.cached_property
    def combined(self) -> HProcess:
        return subordinate(self.parent, self.directing)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "args": list(self.args),
            "parent": to_dict(self.parent.law_at_1.order, self.parent.law_at_1.params),
            "directing": to_dict(self.directing.law_at_1.order, self.directing.law_at_1.params),
            "omega1": self.omega1,
            "omega2": self.omega2,
            "K": self.K,
            "msd_exponent": 2 * self.exponent,
        }


def subordinate(parent: HProcess, directing: HProcess) -> HProcess:
    """Law of ``p(d(t))`` for independent parent ``p`` and directing ``d``."""
    if directing.symmetric:
        raise ValueError("directing process must be one-sided")
    if directing.is_null:
        return parent
    w1 = parent.omega
    d = directing.law_at_1
    O2, P2 = elementary(d.order, d.params, 1.0, w1, 1.0 / w1 - 1.0)
    p = parent.law_at_1
    O, P = convolution_op(p.order, p.params, O2, P2)
    fam = Family("subordinated", (parent.family, directing.family, w1))
    return HProcess(HVariate(O, P, symmetric=p.symmetric), w1 * directing.omega, fam)


def position_variate(spec: DiffusionSpec, t: float) -> HVariate:
    return spec.combined.law_at(t)


def msd_classify(spec: DiffusionSpec) -> tuple[str, float]:
    w = spec.exponent
    if math.isclose(w, 0.5, rel_tol=0, abs_tol=1e-12):
        kind = "normal"
    elif w < 0.5:
        kind = "subdiffusion"
    else:
        kind = "superdiffusion"
    return kind, 2 * w


# -- building blocks ----------------------------------------------------------


def stable_parent(alpha1: float, beta1: float = 1.0, omega1: float | None = None) -> HProcess:
    """Symmetric ``alpha1``-stable parent with dispersion ``beta1**alpha1``."""
    if not 0 < alpha1 <= 2:
        raise ValueError(f"alpha1 must lie in (0, 2], got {alpha1}")
    P = ParamSeq(2 / alpha1, 1.0, [1 - 1 / alpha1, 0.5], [0.0, 0.5], [1 / alpha1, 0.5], [1.0, 0.5])
    law = HVariate(OrderSeq(1, 1, 2, 2), P, symmetric=True).scaled(beta1)
    w1 = 1 / alpha1 if omega1 is None else omega1
    return HProcess(law, w1, Family("stable", (alpha1, beta1**alpha1)))


def mwright_directing(alpha2: float, beta2: float = 1.0, omega2: float | None = None) -> HProcess:
    if not 0 < alpha2 <= 1:
        raise ValueError(f"alpha2 must lie in (0, 1], got {alpha2}")
    P = ParamSeq(1.0, 1.0, [1 - alpha2], [0.0], [alpha2], [1.0])
    law = HVariate(OrderSeq(1, 0, 1, 1), P).scaled(beta2)
    w2 = alpha2 if omega2 is None else omega2
    return HProcess(law, w2, Family("mwright", (alpha2, beta2)))


def _gaussian_parent(omega1: float) -> HProcess:
    P = ParamSeq(1 / (2 * SQRT_PI), 0.5, [], [0.0], [], [0.5])
    return HProcess(HVariate(OrderSeq(1, 0, 0, 1), P, symmetric=True), omega1, Family("stable", (2.0, 1.0)))


def make_shd(alpha1: float, alpha2: float, omega1: float, omega2: float, beta1: float = 1.0, beta2: float = 1.0) -> DiffusionSpec:
    if not 0 < alpha1 <= 2:
        raise ValueError(f"alpha1 must lie in (0, 2], got {alpha1}")
    if not 0 < alpha2 <= 1:
        raise ValueError(f"alpha2 must lie in (0, 1], got {alpha2}")
    if not (beta1 > 0 and beta2 > 0 and omega1 > 0 and omega2 > 0):
        raise ValueError("omega and beta parameters must be positive")
    return DiffusionSpec(
        stable_parent(alpha1, beta1, omega1),
        mwright_directing(alpha2, beta2, omega2),
        name="SHD",
        shd=SHDParams(alpha1, alpha2, beta1, beta2),
        args=(alpha1, alpha2, omega1, omega2, beta1, beta2),
    )


def shd(alpha1: float, alpha2: float, K: float = 1.0) -> DiffusionSpec:
    """The ``(alpha1, alpha2)``-SHD with diffusion coefficient ``K``."""
    return make_shd(alpha1, alpha2, 1 / alpha1, alpha2, K ** (1 / alpha1), 1.0)


# -- preset catalog -----------------------------------------------------------


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha <= 2:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")


def _check_beta(beta: float) -> None:
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")


def _st_fd(alpha: float, beta: float) -> DiffusionSpec:
    _check_alpha(alpha)
    _check_beta(beta)
    return DiffusionSpec(stable_parent(alpha), mwright_directing(beta), "ST-FD", args=(alpha, beta))


def _s_fd(alpha: float, beta: float) -> DiffusionSpec:
    _check_alpha(alpha)
    _check_beta(beta)
    cb = math.cos(math.pi * beta / 2)
    # the printed prefactor exponent is read as beta, the value that normalizes the law
    P = ParamSeq(cb**beta / beta, cb**beta, [1 - 1 / beta], [0.0], [1 / beta], [1.0])
    law = HVariate(OrderSeq(0, 1, 1, 1), P)
    gamma = cb * P.c ** (-beta)
    directing = HProcess(law, 1 / beta, Family("onesided-stable", (beta, gamma)))
    return DiffusionSpec(stable_parent(alpha), directing, "S-FD", args=(alpha, beta))


def _t_fd(beta: float) -> DiffusionSpec:
    _check_beta(beta)
    P = ParamSeq(1.0, 1.0, [0.5], [0.0], [0.5], [1.0])
    parent = HProcess(HVariate(OrderSeq(1, 0, 1, 1), P, symmetric=True), 0.5, Family("stable", (2.0, 1.0)))
    return DiffusionSpec(parent, mwright_directing(beta), "T-FD", args=(beta,))


def _ek_fd(alpha: float, beta: float) -> DiffusionSpec:
    _check_alpha(alpha)
    _check_beta(beta)
    return DiffusionSpec(_gaussian_parent(0.5), mwright_directing(beta, omega2=alpha), "EK-FD", args=(alpha, beta))


def _gbm(beta: float) -> DiffusionSpec:
    _check_beta(beta)
    return DiffusionSpec(_gaussian_parent(0.5), mwright_directing(beta, omega2=beta), "GBM", args=(beta,))


def _fbm(alpha: float) -> DiffusionSpec:
    _check_alpha(alpha)
    return DiffusionSpec(_gaussian_parent(alpha / 2), NULL_DIRECTING, "FBM", args=(alpha,))


def _bm() -> DiffusionSpec:
    return DiffusionSpec(_gaussian_parent(0.5), NULL_DIRECTING, "BM")


PRESETS = {
    "ST-FD": (_st_fd, ("alpha", "beta")),
    "S-FD": (_s_fd, ("alpha", "beta")),
    "T-FD": (_t_fd, ("beta",)),
    "EK-FD": (_ek_fd, ("alpha", "beta")),
    "GBM": (_gbm, ("beta",)),
    "FBM": (_fbm, ("alpha",)),
    "BM": (_bm, ()),
}


def preset(name: str, **params: float) -> DiffusionSpec:
    """Table of named diffusion models; parameters are passed by name (``alpha``, ``beta``)."""
    try:
        builder, names = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    extra = set(params) - set(names)
    missing = set(names) - set(params)
    if extra or missing:
        raise ValueError(f"preset {name} takes parameters {names}, got {sorted(params)}")
    return builder(*(float(params[n]) for n in names))
