"""Double-double arithmetic: about 31 significant decimal digits.

A value is an unevaluated sum hi + lo of two floats with |lo| <= ulp(hi)/2.
Used to re-evaluate inequality margins that land within roundoff of zero in
plain float, so a sign decision is never made from noise.

Core error-free transforms (two_sum, split, two_prod) follow the standard
Dekker/Knuth constructions; exp and log use argument reduction with a short
Taylor tail and Newton refinement against exp.
"""

from __future__ import annotations

import math

_SPLITTER = 134217729.0  # 2**27 + 1

# ln 2 to double-double precision
_LN2_HI = 6.931471805599453e-01
_LN2_LO = 2.3190468138462996e-17


def _two_sum(x: float, y: float) -> tuple[float, float]:
    s = x + y
    bb = s - x
    err = (x - (s - bb)) + (y - bb)
    return s, err


def _quick_two_sum(x: float, y: float) -> tuple[float, float]:
    # requires |x| >= |y|
    s = x + y
    err = y - (s - x)
    return s, err


def _split(x: float) -> tuple[float, float]:
    t = _SPLITTER * x
    hi = t - (t - x)
    return hi, x - hi


def _two_prod(x: float, y: float) -> tuple[float, float]:
    p = x * y
    xh, xl = _split(x)
    yh, yl = _split(y)
    err = ((xh * yh - p) + xh * yl + xl * yh) + xl * yl
    return p, err


class DD:
    """One double-double number.  Immutable in practice; hashable not needed."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float = 0.0, lo: float = 0.0):
        self.hi = float(hi)
        self.lo = float(lo)

    def __repr__(self) -> str:
        return f"DD({self.hi!r}, {self.lo!r})"

    def __float__(self) -> float:
        return self.hi + self.lo

    def __neg__(self) -> "DD":
        return DD(-self.hi, -self.lo)

    def __abs__(self) -> "DD":
        return -self if self.hi < 0.0 or (self.hi == 0.0 and self.lo < 0.0) else self

    def __add__(self, other) -> "DD":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        s, e = _two_sum(self.hi, o.hi)
        e += self.lo + o.lo
        s, e = _quick_two_sum(s, e)
        return DD(s, e)

    __radd__ = __add__

    def __sub__(self, other) -> "DD":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "DD":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "DD":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        p, e = _two_prod(self.hi, o.hi)
        e += self.hi * o.lo + self.lo * o.hi
        p, e = _quick_two_sum(p, e)
        return DD(p, e)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DD":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        q1 = self.hi / o.hi
        r = self - o * q1
        q2 = r.hi / o.hi
        r = r - o * q2
        q3 = r.hi / o.hi
        s, e = _quick_two_sum(q1, q2)
        return DD(s, e) + q3

    def __rtruediv__(self, other) -> "DD":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def _cmp(self, other) -> int:
        o = _coerce(other)
        d = self - o
        v = d.hi + d.lo
        if v < 0.0:
            return -1
        if v > 0.0:
            return 1
        return 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __ne__(self, other):
        try:
            return self._cmp(other) != 0
        except TypeError:
            return NotImplemented


def _coerce(x) -> DD | None:
    if isinstance(x, DD):
        return x
    if isinstance(x, (int, float)):
        return DD(float(x), 0.0)
    return None


def dd(x) -> DD:
    out = _coerce(x)
    if out is None:
        raise TypeError(f"cannot make a DD from {type(x).__name__}")
    return out


def dd_sqrt(x) -> DD:
    v = dd(x)
    if v.hi < 0.0:
        raise ValueError("sqrt of a negative double-double")
    if v.hi == 0.0:
        return DD(0.0, 0.0)
    y0 = math.sqrt(v.hi)
    y = DD(y0)
    # one Newton step doubles the correct digits: 16 -> 32
    y = y + (v - y * y) / (2.0 * y0)
    return y


def dd_exp(x) -> DD:
    v = dd(x)
    if v.hi > 709.0:
        raise OverflowError("exp overflow in double-double")
    if v.hi < -709.0:
        return DD(0.0, 0.0)
    m = float(round(v.hi / _LN2_HI))
    r = v - DD(_LN2_HI, _LN2_LO) * m
    # scale down by 2**9, Taylor, square back up
    r = r / 512.0
    term = DD(1.0)
    acc = DD(1.0)
    for j in range(1, 14):
        term = term * r / float(j)
        acc = acc + term
    for _ in range(9):
        acc = acc * acc
    k = int(m)
    return DD(math.ldexp(acc.hi, k), math.ldexp(acc.lo, k))


def dd_log(x) -> DD:
    v = dd(x)
    if v.hi <= 0.0:
        raise ValueError("log of a non-positive double-double")
    y = DD(math.log(v.hi))
    # Newton against exp: y <- y + x*exp(-y) - 1
    for _ in range(2):
        y = y + v * dd_exp(-y) - 1.0
    return y


def dd_log1p(x) -> DD:
    v = dd(x)
    if v.hi <= -1.0:
        raise ValueError("log1p argument at or below -1")
    return dd_log(DD(1.0) + v)


class FloatBackend:
    """Plain float evaluation namespace for margin expressions."""

    name = "float"

    @staticmethod
    def num(x):
        return float(x)

    exp = staticmethod(math.exp)
    log = staticmethod(math.log)
    log1p = staticmethod(math.log1p)
    sqrt = staticmethod(math.sqrt)


class DDBackend:
    """Double-double evaluation namespace, drop-in for FloatBackend."""

    name = "dd"

    num = staticmethod(dd)
    exp = staticmethod(dd_exp)
    log = staticmethod(dd_log)
    log1p = staticmethod(dd_log1p)
    sqrt = staticmethod(dd_sqrt)


FLOAT = FloatBackend()
DOUBLE_DOUBLE = DDBackend()
