"""Second-order jets in the two variables (t, r).

A :class:`Jet2` bundles the value of a function of ``(t, r)`` with its first
and second partial derivatives. Arithmetic and the elementary functions below
propagate all six slots exactly by the product and chain rules.

Differentiating a jet (``j.d_t`` / ``j.d_r``) loses one order: the second
derivative slots of the result are unknown and are stored as NaN so they can
never be mistaken for zero downstream.
"""

from __future__ import annotations

import math

from .errors import DomainError

_NAN = float("nan")


class Jet2:
    __slots__ = ("dr", "drr", "dt", "dtr", "dtt", "v")

    def __init__(self, v, dt=0.0, dr=0.0, dtt=0.0, dtr=0.0, drr=0.0):
        self.v = float(v)
        self.dt = float(dt)
        self.dr = float(dr)
        self.dtt = float(dtt)
        self.dtr = float(dtr)
        self.drr = float(drr)

    @classmethod
    def const(cls, c: float) -> Jet2:
        return cls(c)

    @classmethod
    def var_t(cls, t: float) -> Jet2:
        return cls(t, 1.0)

    @classmethod
    def var_r(cls, r: float) -> Jet2:
        return cls(r, 0.0, 1.0)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.v, self.dt, self.dr, self.dtt, self.dtr, self.drr)

    @property
    def d_t(self) -> Jet2:
        return Jet2(self.dt, self.dtt, self.dtr, _NAN, _NAN, _NAN)

    @property
    def d_r(self) -> Jet2:
        return Jet2(self.dr, self.dtr, self.drr, _NAN, _NAN, _NAN)

    def __repr__(self) -> str:
        return (f"Jet2(v={self.v!r}, dt={self.dt!r}, dr={self.dr!r}, "
                f"dtt={self.dtt!r}, dtr={self.dtr!r}, drr={self.drr!r})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Jet2):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    __hash__ = None

    # arithmetic -----------------------------------------------------------

    def __add__(self, o):
        if isinstance(o, Jet2):
            return Jet2(self.v + o.v, self.dt + o.dt, self.dr + o.dr,
                        self.dtt + o.dtt, self.dtr + o.dtr, self.drr + o.drr)
        return Jet2(self.v + o, self.dt, self.dr, self.dtt, self.dtr, self.drr)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.v, -self.dt, -self.dr, -self.dtt, -self.dtr, -self.drr)

    def __pos__(self):
        return self

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Jet2):
            a, b = self, o
            return Jet2(
                a.v * b.v,
                a.dt * b.v + a.v * b.dt,
                a.dr * b.v + a.v * b.dr,
                a.dtt * b.v + 2.0 * a.dt * b.dt + a.v * b.dtt,
                a.dtr * b.v + a.dt * b.dr + a.dr * b.dt + a.v * b.dtr,
                a.drr * b.v + 2.0 * a.dr * b.dr + a.v * b.drr,
            )
        return Jet2(self.v * o, self.dt * o, self.dr * o, self.dtt * o, self.dtr * o, self.drr * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Jet2):
            return self * reciprocal(o)
        if o == 0:
            raise DomainError("division by zero")
        return self * (1.0 / o)

    def __rtruediv__(self, o):
        return reciprocal(self) * o

    def __pow__(self, n):
        if isinstance(n, int):
            return int_power(self, n)
        if isinstance(n, float) and n.is_integer():
            return int_power(self, int(n))
        return exp(log(self) * n)


def _chain(a: Jet2, f0: float, f1: float, f2: float) -> Jet2:
    """Compose a scalar function with value f0, f' = f1, f'' = f2 at a.v."""
    return Jet2(
        f0,
        f1 * a.dt,
        f1 * a.dr,
        f2 * a.dt * a.dt + f1 * a.dtt,
        f2 * a.dt * a.dr + f1 * a.dtr,
        f2 * a.dr * a.dr + f1 * a.drr,
    )


def reciprocal(a: Jet2) -> Jet2:
    if a.v == 0.0:
        raise DomainError("division by zero")
    inv = 1.0 / a.v
    return _chain(a, inv, -inv * inv, 2.0 * inv * inv * inv)


def int_power(a: Jet2, n: int) -> Jet2:
    if n == 0:
        return Jet2(1.0)
    if n < 0:
        return reciprocal(int_power(a, -n))
    x = a.v
    f0 = x ** n
    f1 = n * x ** (n - 1)
    f2 = n * (n - 1) * x ** (n - 2) if n >= 2 else 0.0
    return _chain(a, f0, f1, f2)


def sin(a):
    if not isinstance(a, Jet2):
        return math.sin(a)
    s, c = math.sin(a.v), math.cos(a.v)
    return _chain(a, s, c, -s)


def cos(a):
    if not isinstance(a, Jet2):
        return math.cos(a)
    s, c = math.sin(a.v), math.cos(a.v)
    return _chain(a, c, -s, -c)


def tan(a):
    if not isinstance(a, Jet2):
        return math.tan(a)
    c = math.cos(a.v)
    if c == 0.0:
        raise DomainError("tan at a pole")
    tv = math.tan(a.v)
    sec2 = 1.0 + tv * tv
    return _chain(a, tv, sec2, 2.0 * tv * sec2)


def exp(a):
    if not isinstance(a, Jet2):
        return math.exp(a)
    e = math.exp(a.v)
    return _chain(a, e, e, e)


def log(a):
    if not isinstance(a, Jet2):
        if a <= 0:
            raise DomainError("log of a non-positive number")
        return math.log(a)
    if a.v <= 0.0:
        raise DomainError("log of a non-positive number")
    inv = 1.0 / a.v
    return _chain(a, math.log(a.v), inv, -inv * inv)


def sqrt(a):
    if not isinstance(a, Jet2):
        if a <= 0:
            raise DomainError("sqrt of a non-positive number")
        return math.sqrt(a)
    if a.v <= 0.0:
        raise DomainError("sqrt of a non-positive number")
    s = math.sqrt(a.v)
    return _chain(a, s, 0.5 / s, -0.25 / (s * a.v))


def sinh(a):
    if not isinstance(a, Jet2):
        return math.sinh(a)
    s, c = math.sinh(a.v), math.cosh(a.v)
    return _chain(a, s, c, s)


def cosh(a):
    if not isinstance(a, Jet2):
        return math.cosh(a)
    s, c = math.sinh(a.v), math.cosh(a.v)
    return _chain(a, c, s, c)


def tanh(a):
    if not isinstance(a, Jet2):
        return math.tanh(a)
    th = math.tanh(a.v)
    sech2 = 1.0 - th * th
    return _chain(a, th, sech2, -2.0 * th * sech2)


FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "sinh": sinh,
    "cosh": cosh,
    "tanh": tanh,
}


def value(a) -> float:
    return a.v if isinstance(a, Jet2) else float(a)
