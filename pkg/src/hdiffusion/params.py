"""Order and parameter sequences of the Fox H-function and their algebra.

A kernel is the pair ``(O, P)`` with ``O = (m, n, p, q)`` and
``P = (k, c, a, b, A, B)``; it denotes ``k * H^{m,n}_{p,q}[c x]`` where the
Mellin-Barnes integrand is

    prod_{j<=m} G(b_j - B_j s) prod_{j<=n} G(1 - a_j + A_j s)
    ---------------------------------------------------------
    prod_{j>m} G(1 - b_j + B_j s) prod_{j>n} G(a_j - A_j s)

Sequences are flat tuples; ``n`` splits ``a``/``A`` and ``m`` splits ``b``/``B``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

__all__ = [
    "OrderSeq",
    "ParamSeq",
    "Kernel",
    "NULL_ORDER",
    "NULL_PARAMS",
    "NULL",
    "SequenceError",
    "scaling",
    "conjugate",
    "elementary",
    "inverse",
    "unary_param_op",
    "mellin_op",
    "convolution_op",
    "Diagnostics",
    "validate",
    "to_dict",
    "from_dict",
    "dumps",
    "loads",
]


class SequenceError(ValueError):
    """Raised for malformed order/parameter sequences or invalid operation arguments."""


def _tuple(xs: Sequence[float] | float | None) -> tuple[float, ...]:
    if xs is None:
        return ()
    if isinstance(xs, (int, float)):
        return (float(xs),)
    return tuple(float(x) for x in xs)


@dataclass(frozen=True)
class OrderSeq:
    m: int
    n: int
    p: int
    q: int

    def __post_init__(self):
        for name in ("m", "n", "p", "q"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise SequenceError(f"order entry {name}={v} must be a nonnegative integer")
            object.__setattr__(self, name, int(v))
        if self.m > self.q or self.n > self.p:
            raise SequenceError(f"order {self.as_tuple()} violates m<=q, n<=p")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.m, self.n, self.p, self.q)


@dataclass(frozen=True)
class ParamSeq:
    k: float
    c: float
    a: tuple[float, ...] = field(default=())
    b: tuple[float, ...] = field(default=())
    A: tuple[float, ...] = field(default=())
    B: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "c", float(self.c))
        for name in ("a", "b", "A", "B"):
            object.__setattr__(self, name, _tuple(getattr(self, name)))
        if len(self.a) != len(self.A):
            raise SequenceError(f"len(a)={len(self.a)} differs from len(A)={len(self.A)}")
        if len(self.b) != len(self.B):
            raise SequenceError(f"len(b)={len(self.b)} differs from len(B)={len(self.B)}")

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def q(self) -> int:
        return len(self.b)


@dataclass(frozen=True)
class Kernel:
    """An (order, parameter) pair checked for length consistency."""

    order: OrderSeq
    params: ParamSeq

    def __post_init__(self):
        _check_lengths(self.order, self.params)

    def __iter__(self):
        return iter((self.order, self.params))


def _check_lengths(O: OrderSeq, P: ParamSeq) -> None:
    if O.p != P.p or O.q != P.q:
        raise SequenceError(
            f"order {O.as_tuple()} does not match sequence lengths p={P.p}, q={P.q}"
        )


NULL_ORDER = OrderSeq(0, 0, 0, 0)
NULL_PARAMS = ParamSeq(1.0, 1.0)
NULL = Kernel(NULL_ORDER, NULL_PARAMS)


def is_null(O: OrderSeq, P: ParamSeq) -> bool:
    return O == NULL_ORDER and P.k == 1.0 and P.c == 1.0


# -- unary operations ---------------------------------------------------------


def scaling(O: OrderSeq, P: ParamSeq, alpha: float) -> Kernel:
    """Law of ``alpha * x``: ``P<alpha> = (k/alpha, c/alpha, a, b, A, B)``."""
    _check_lengths(O, P)
    if not alpha > 0:
        raise SequenceError(f"scaling factor must be positive, got {alpha}")
    return Kernel(O, ParamSeq(P.k / alpha, P.c / alpha, P.a, P.b, P.A, P.B))


def conjugate(O: OrderSeq, P: ParamSeq, gamma: float) -> Kernel:
    """Kernel of ``x**gamma * f(x)``: ``(k/c**gamma, c, a + gamma A, b + gamma B, A, B)``."""
    _check_lengths(O, P)
    gamma = float(gamma)
    if not math.isfinite(gamma):
        raise SequenceError("conjugate exponent must be a finite real")
    return Kernel(
        O,
        ParamSeq(
            P.k / P.c**gamma,
            P.c,
            [x + gamma * y for x, y in zip(P.a, P.A)],
            [x + gamma * y for x, y in zip(P.b, P.B)],
            P.A,
            P.B,
        ),
    )


def elementary(O: OrderSeq, P: ParamSeq, alpha: float, beta: float, gamma: float) -> Kernel:
    """Elementary transform ``E(alpha, beta, gamma) P``.

    With ``gamma = 1/beta - 1`` and ``alpha = 1`` this is the law of ``x**beta``.
    """
    _check_lengths(O, P)
    if not alpha > 0 or not beta > 0:
        raise SequenceError(f"elementary needs alpha>0, beta>0, got {alpha}, {beta}")
    ac = alpha * P.c
    bg = beta * gamma
    return Kernel(
        O,
        ParamSeq(
            P.k / ac**bg,
            ac**beta,
            [x + bg * y for x, y in zip(P.a, P.A)],
            [x + bg * y for x, y in zip(P.b, P.B)],
            [beta * y for y in P.A],
            [beta * y for y in P.B],
        ),
    )


def inverse(O: OrderSeq, P: ParamSeq) -> Kernel:
    """Kernel of ``f(1/x)``: ``(k, 1/c, 1 - b, 1 - a, B, A)`` with order ``(n, m, q, p)``."""
    _check_lengths(O, P)
    return Kernel(
        OrderSeq(O.n, O.m, O.q, O.p),
        ParamSeq(P.k, 1.0 / P.c, [1.0 - x for x in P.b], [1.0 - x for x in P.a], P.B, P.A),
    )


def unary_param_op(kind: str, O: OrderSeq, P: ParamSeq, *args: float) -> Kernel:
    ops = {
        "scaling": scaling,
        "conjugate": conjugate,
        "elementary": elementary,
        "inverse": inverse,
    }
    try:
        op = ops[kind]
    except KeyError:
        raise SequenceError(f"unknown unary operation {kind!r}") from None
    return op(O, P, *args)


# -- binary operations --------------------------------------------------------


def _splice(head: tuple, split: int, middle: Sequence) -> tuple:
    return tuple(head[:split]) + tuple(middle) + tuple(head[split:])


def mellin_op(O1: OrderSeq, P1: ParamSeq, O2: OrderSeq, P2: ParamSeq) -> Kernel:
    """Kernel of the H-transform ``g(x) = int_0^inf f1(x t) f2(t) dt``."""
    _check_lengths(O1, P1)
    _check_lengths(O2, P2)
    order = OrderSeq(O1.m + O2.n, O1.n + O2.m, O1.p + O2.q, O1.q + O2.p)
    params = ParamSeq(
        P1.k * P2.k / P2.c,
        P1.c / P2.c,
        _splice(P1.a, O1.n, [1.0 - b - B for b, B in zip(P2.b, P2.B)]),
        _splice(P1.b, O1.m, [1.0 - a - A for a, A in zip(P2.a, P2.A)]),
        _splice(P1.A, O1.n, P2.B),
        _splice(P1.B, O1.m, P2.A),
    )
    return Kernel(order, params)


def convolution_op(O1: OrderSeq, P1: ParamSeq, O2: OrderSeq, P2: ParamSeq) -> Kernel:
    """Kernel of the Mellin convolution, i.e. the law of ``x * y`` for independent variates."""
    _check_lengths(O1, P1)
    _check_lengths(O2, P2)
    order = OrderSeq(O1.m + O2.m, O1.n + O2.n, O1.p + O2.p, O1.q + O2.q)
    params = ParamSeq(
        P1.k * P2.k,
        P1.c * P2.c,
        _splice(P1.a, O1.n, P2.a),
        _splice(P1.b, O1.m, P2.b),
        _splice(P1.A, O1.n, P2.A),
        _splice(P1.B, O1.m, P2.B),
    )
    return Kernel(order, params)


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostics:
    valid: bool
    messages: tuple[str, ...]
    strip: tuple[float, float] | None = None
    integral: float | None = None

    def __bool__(self) -> bool:
        return self.valid


def validate(O: OrderSeq, P: ParamSeq, *, check_density: bool = False, tol: float = 1e-6) -> Diagnostics:
    """Check a kernel and report problems instead of raising."""
    msgs: list[str] = []
    if O.p != P.p or O.q != P.q:
        msgs.append(f"length mismatch: order {O.as_tuple()} vs p={P.p}, q={P.q}")
        return Diagnostics(False, tuple(msgs))
    if any(not x > 0 for x in P.A):
        msgs.append("nonpositive slope in A")
    if any(not x > 0 for x in P.B):
        msgs.append("nonpositive slope in B")
    if not P.c > 0:
        msgs.append("argument scale c must be positive")
    if msgs:
        return Diagnostics(False, tuple(msgs))

    from .hfunc import pole_strip

    lo, hi = pole_strip(O, P)
    strip = (lo, hi)
    if not lo < hi:
        msgs.append(f"pole families overlap: left poles reach {lo}, right poles start at {hi}")
        return Diagnostics(False, tuple(msgs), strip)
    if not check_density:
        return Diagnostics(True, (), strip)

    from .hfunc import integrate_kernel

    try:
        total, negative = integrate_kernel(O, P)
    except Exception as exc:  # numeric failure is a diagnostic, not a crash
        msgs.append(f"numeric density check failed: {exc}")
        return Diagnostics(False, tuple(msgs), strip)
    if negative:
        msgs.append("not a density: negative values on the sampled grid")
    if abs(total - 1.0) > tol:
        msgs.append(f"not a density: integrates to {total:.8g}")
    return Diagnostics(not msgs, tuple(msgs), strip, total)


# -- serialization ------------------------------------------------------------


def to_dict(O: OrderSeq, P: ParamSeq) -> dict:
    _check_lengths(O, P)
    return {
        "k": P.k,
        "c": P.c,
        "a": list(P.a),
        "b": list(P.b),
        "A": list(P.A),
        "B": list(P.B),
        "m": O.m,
        "n": O.n,
        "p": O.p,
        "q": O.q,
    }


def from_dict(d: dict) -> Kernel:
    return Kernel(
        OrderSeq(d["m"], d["n"], d["p"], d["q"]),
        ParamSeq(d["k"], d["c"], d["a"], d["b"], d["A"], d["B"]),
    )


def dumps(O: OrderSeq, P: ParamSeq) -> str:
    # json writes floats with repr, which round-trips exactly
    return json.dumps(to_dict(O, P), sort_keys=False)


def loads(text: str) -> Kernel:
    return from_dict(json.loads(text))
