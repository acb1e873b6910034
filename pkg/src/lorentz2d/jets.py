"""Forward-mode jets carrying exact partial derivatives through order two.

A ``Jet2`` bundles a value with its first and second partials with
respect to two active coordinates.  The slots are named after the
standard chart (t, x), but the same structure serves the null chart:
seed ``u`` into the t-slot and ``v`` into the x-slot and every rule
below reads unchanged.

All operations are pure; every result is checked for finiteness so that
overflow or an indeterminate form surfaces as a ``DomainError`` instead
of propagating NaNs into curvature formulas.  Division by a jet whose
value is zero is a ``DomainError``.  Powers use repeated products for
integer exponents up to |n| = 8 (preserving sign domains); any other
exponent goes through exp/log and therefore needs a positive base.
Second-order composition follows the Faa di Bruno pattern

    (f o a)'' = f''(a) a'^2 + f'(a) a''

expanded componentwise over (t, x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

_POW_PRODUCT_LIMIT = 8


@dataclass(slots=True)
class Jet2:
    """Value and partials (d/dt, d/dx, d2/dt2, d2/dtdx, d2/dx2).

    Treat instances as immutable; operations return new jets.
    """

    value: float
    dt: float = 0.0
    dx: float = 0.0
    dtt: float = 0.0
    dtx: float = 0.0
    dxx: float = 0.0

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, _coerce(other))

    def __rsub__(self, other):
        return sub(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __neg__(self):
        return Jet2(-self.value, -self.dt, -self.dx, -self.dtt, -self.dtx, -self.dxx)

    def __pow__(self, exponent):
        return powc(self, exponent)


def _coerce(x) -> Jet2:
    if isinstance(x, Jet2):
        return x
    return Jet2(float(x))


def lift(value: float) -> Jet2:
    """Constant jet: all derivative slots zero."""
    return Jet2(float(value))


def seed(variable: str, point: tuple[float, float]) -> Jet2:
    """Jet of a coordinate function at ``point`` = (first, second).

    ``t`` and ``u`` occupy the first slot, ``x`` and ``v`` the second.
    """
    if variable in ("t", "u"):
        return Jet2(float(point[0]), 1.0, 0.0)
    if variable in ("x", "v"):
        return Jet2(float(point[1]), 0.0, 1.0)
    raise ValueError(f"unknown coordinate {variable!r}; expected one of t, x, u, v")


def _checked(v, dt, dx, dtt, dtx, dxx) -> Jet2:
    if (math.isfinite(v) and math.isfinite(dt) and math.isfinite(dx)
            and math.isfinite(dtt) and math.isfinite(dtx) and math.isfinite(dxx)):
        return Jet2(v, dt, dx, dtt, dtx, dxx)
    raise DomainError("non-finite jet component (overflow or indeterminate form)")


def add(a: Jet2, b: Jet2) -> Jet2:
    return _checked(a.value + b.value, a.dt + b.dt, a.dx + b.dx,
                    a.dtt + b.dtt, a.dtx + b.dtx, a.dxx + b.dxx)


def sub(a: Jet2, b: Jet2) -> Jet2:
    return _checked(a.value - b.value, a.dt - b.dt, a.dx - b.dx,
                    a.dtt - b.dtt, a.dtx - b.dtx, a.dxx - b.dxx)


def mul(a: Jet2, b: Jet2) -> Jet2:
    return _checked(
        a.value * b.value,
        a.dt * b.value + a.value * b.dt,
        a.dx * b.value + a.value * b.dx,
        a.dtt * b.value + 2.0 * a.dt * b.dt + a.value * b.dtt,
        a.dtx * b.value + a.dt * b.dx + a.dx * b.dt + a.value * b.dtx,
        a.dxx * b.value + 2.0 * a.dx * b.dx + a.value * b.dxx,
    )


def div(a: Jet2, b: Jet2) -> Jet2:
    if b.value == 0.0:
        raise DomainError("division by a jet with value 0")
    q = a.value / b.value
    qt = (a.dt - q * b.dt) / b.value
    qx = (a.dx - q * b.dx) / b.value
    qtt = (a.dtt - 2.0 * qt * b.dt - q * b.dtt) / b.value
    qtx = (a.dtx - qt * b.dx - qx * b.dt - q * b.dtx) / b.value
    qxx = (a.dxx - 2.0 * qx * b.dx - q * b.dxx) / b.value
    return _checked(q, qt, qx, qtt, qtx, qxx)


def powc(a: Jet2, exponent: float) -> Jet2:
    """a**exponent for a constant real exponent."""
    n = float(exponent)
    if n.is_integer() and abs(n) <= _POW_PRODUCT_LIMIT:
        m = int(n)
        if m == 0:
            return lift(1.0)
        p = a
        for _ in range(abs(m) - 1):
            p = mul(p, a)
        if m < 0:
            return div(lift(1.0), p)
        return p
    if a.value <= 0.0:
        raise DomainError(
            f"pow with exponent {n!r} requires a positive base (got {a.value!r})")
    return apply_elementary("exp", mul(apply_elementary("log", a), lift(n)))


def combine(op: str, a: Jet2, b) -> Jet2:
    """Binary combination; ``op`` is one of add, sub, mul, div, pow.

    For ``pow`` the second operand must be a real constant.
    """
    if op == "pow":
        if isinstance(b, Jet2):
            if b.dt == b.dx == b.dtt == b.dtx == b.dxx == 0.0:
                return powc(a, b.value)
            raise ValueError("pow exponent must be a constant")
        return powc(a, float(b))
    try:
        fn = _BINARY[op]
    except KeyError:
        raise ValueError(f"unknown binary op {op!r}") from None
    return fn(a, _coerce(b))


_BINARY = {"add": add, "sub": sub, "mul": mul, "div": div}


def compose(f0: float, f1: float, f2: float, inner: Jet2) -> Jet2:
    """Jet of f(inner) given f, f', f'' at inner.value."""
    return _checked(
        f0,
        f1 * inner.dt,
        f1 * inner.dx,
        f1 * inner.dtt + f2 * inner.dt * inner.dt,
        f1 * inner.dtx + f2 * inner.dt * inner.dx,
        f1 * inner.dxx + f2 * inner.dx * inner.dx,
    )


def compose_map(w: Jet2, first: Jet2, second: Jet2) -> Jet2:
    """Pull a jet back through a coordinate map.

    ``w`` holds partials with respect to inner coordinates (a, b);
    ``first`` and ``second`` are the jets of a and b with respect to the
    outer coordinates.  Returns the jet of the composite in the outer
    coordinates (second-order multivariate chain rule).
    """
    return _checked(
        w.value,
        w.dt * first.dt + w.dx * second.dt,
        w.dt * first.dx + w.dx * second.dx,
        (w.dt * first.dtt + w.dx * second.dtt
         + w.dtt * first.dt * first.dt
         + 2.0 * w.dtx * first.dt * second.dt
         + w.dxx * second.dt * second.dt),
        (w.dt * first.dtx + w.dx * second.dtx
         + w.dtt * first.dt * first.dx
         + w.dtx * (first.dt * second.dx + first.dx * second.dt)
         + w.dxx * second.dt * second.dx),
        (w.dt * first.dxx + w.dx * second.dxx
         + w.dtt * first.dx * first.dx
         + 2.0 * w.dtx * first.dx * second.dx
         + w.dxx * second.dx * second.dx),
    )


# Elementary functions as (f, f', f'') triples evaluated at a real a.
# sec and sech are evaluated as 1/cos and 1/cosh with their own rules:
#   sec''  = sec (tan^2 + sec^2)        sech'' = sech (tanh^2 - sech^2)


def _d_exp(a):
    try:
        v = math.exp(a)
    except OverflowError:
        raise DomainError(f"exp overflow at {a!r}") from None
    return (v, v, v)


def _d_log(a):
    if a <= 0.0:
        raise DomainError(f"log of non-positive value {a!r}")
    d2 = a * a
    # a*a can underflow to 0 for subnormal-range a; the value slot is
    # still fine, so report the unrepresentable derivative as -inf and
    # let the jet finiteness check reject it.
    return (math.log(a), 1.0 / a, -1.0 / d2 if d2 != 0.0 else -math.inf)


def _d_sin(a):
    return (math.sin(a), math.cos(a), -math.sin(a))


def _d_cos(a):
    return (math.cos(a), -math.sin(a), -math.cos(a))


def _d_tan(a):
    c = math.cos(a)
    if c == 0.0:
        raise DomainError(f"tan pole at {a!r}")
    tn = math.tan(a)
    s = 1.0 + tn * tn
    return (tn, s, 2.0 * tn * s)


def _d_sec(a):
    c = math.cos(a)
    if c == 0.0:
        raise DomainError(f"sec pole at {a!r}")
    s = 1.0 / c
    tn = math.tan(a)
    return (s, s * tn, s * (tn * tn + s * s))


def _d_sinh(a):
    try:
        return (math.sinh(a), math.cosh(a), math.sinh(a))
    except OverflowError:
        raise DomainError(f"sinh overflow at {a!r}") from None


def _d_cosh(a):
    try:
        return (math.cosh(a), math.sinh(a), math.cosh(a))
    except OverflowError:
        raise DomainError(f"cosh overflow at {a!r}") from None


def _d_tanh(a):
    tn = math.tanh(a)
    s = 1.0 - tn * tn
    return (tn, s, -2.0 * tn * s)


def _d_sech(a):
    try:
        ch = math.cosh(a)
    except OverflowError:
        raise DomainError(f"cosh overflow at {a!r}") from None
    s = 1.0 / ch
    tn = math.tanh(a)
    return (s, -s * tn, s * (tn * tn - s * s))


def _d_sqrt(a):
    if a <= 0.0:
        raise DomainError(f"sqrt of non-positive value {a!r}")
    s = math.sqrt(a)
    d = s * a
    # s*a can underflow to 0 for subnormal-range a even though s itself
    # is representable; surface the lost derivative as -inf rather than
    # tripping a ZeroDivisionError.
    return (s, 0.5 / s, -0.25 / d if d != 0.0 else -math.inf)


def _d_atan(a):
    d = 1.0 + a * a
    return (math.atan(a), 1.0 / d, -2.0 * a / (d * d))


def _d_abs(a):
    if a == 0.0:
        raise DomainError("abs is not differentiable at 0")
    return (abs(a), math.copysign(1.0, a), 0.0)


DERIVATIVE_TRIPLES = {
    "exp": _d_exp,
    "log": _d_log,
    "sin": _d_sin,
    "cos": _d_cos,
    "tan": _d_tan,
    "sec": _d_sec,
    "sinh": _d_sinh,
    "cosh": _d_cosh,
    "tanh": _d_tanh,
    "sech": _d_sech,
    "sqrt": _d_sqrt,
    "atan": _d_atan,
    "abs": _d_abs,
}


def apply_elementary(name: str, a: Jet2) -> Jet2:
    """Jet of an elementary function applied to ``a``."""
    try:
        triple = DERIVATIVE_TRIPLES[name]
    except KeyError:
        raise ValueError(f"unknown elementary function {name!r}") from None
    f0, f1, f2 = triple(a.value)
    return compose(f0, f1, f2, a)
