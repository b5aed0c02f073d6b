"""Number types used by every slope policy.

Three kinds of scalar flow through the package:

* ``fractions.Fraction`` for rational slopes,
* :class:`QuadraticNumber` for slopes in a real quadratic field Q(sqrt D),
* :class:`TrackedFloat` for everything else: a double together with a
  rigorous forward error bound.

All three support ``+ - * /``, ``abs`` and comparisons with each other and with
``int``/``Fraction``.  Exact numbers serialize to canonical strings via
:func:`to_canonical` and parse back with :func:`parse_number`.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from typing import Union


class AmbiguousComparison(ArithmeticError):
    """A comparison of tracked floats whose error intervals overlap."""


def _squarefree_part(n: int) -> tuple[int, int]:
    """Return (k, d) with n = k*k*d and d squarefree."""
    k, d = 1, n
    f = 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            k *= f
        f += 1
    return k, d


@total_ordering
class QuadraticNumber:
    """Exact element ``a + b*sqrt(D)`` of Q(sqrt D), D > 1 squarefree."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D: int = 5):
        if D <= 1:
            raise ValueError("D must be an integer > 1")
        k, d = _squarefree_part(D)
        self.a = Fraction(a)
        self.b = Fraction(b) * k
        self.D = d

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.D != self.D and other.b != 0 and self.b != 0:
                raise ValueError(f"mixing Q(sqrt{self.D}) and Q(sqrt{other.D})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other, 0, self.D)
        return None

    def _new(self, a, b) -> QuadraticNumber:
        q = QuadraticNumber.__new__(QuadraticNumber)
        q.a, q.b, q.D = a, b, self.D
        return q

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._new(self.a * other, self.b * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(self.a * o.a + self.b * o.b * self.D, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def conjugate(self) -> QuadraticNumber:
        return self._new(self.a, -self.b)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self._new(self.a / other, self.b / other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return (self * o.conjugate()) / n

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QuadraticNumber(1, 0, self.D) / (self ** (-k))
        result = self._new(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 with b^2 D
        lhs, rhs = a * a, b * b * self.D
        if lhs == rhs:
            return 0
        if lhs > rhs:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.a == other.a and self.b == other.b and self.D == other.D
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, TrackedFloat):
            return other == self
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, TrackedFloat):
            return other > self
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"QuadraticNumber({self.a!s}, {self.b!s}, {self.D})"

    def __str__(self):
        return to_canonical(self)


@total_ordering
class TrackedFloat:
    """A double ``value`` whose distance to the true real is at most ``err``.

    Every arithmetic operation widens ``err`` by the propagated input error
    plus one ulp of the result, so the bound stays rigorous.  Comparisons
    whose error intervals overlap raise :class:`AmbiguousComparison`.
    """

    __slots__ = ("value", "err")

    def __init__(self, value, err: float = 0.0):
        if isinstance(value, TrackedFloat):
            self.value, self.err = value.value, max(value.err, err)
            return
        if isinstance(value, QuadraticNumber):
            v = float(value)
            err = err + 2 * math.ulp(v)
        elif isinstance(value, Fraction):
            v = float(value)
            if Fraction(v) != value:
                err = err + math.ulp(v)
        else:
            v = float(value)
        self.value = v
        self.err = float(err)

    @staticmethod
    def _lift(other):
        if isinstance(other, TrackedFloat):
            return other
        if isinstance(other, (int, float, Fraction, QuadraticNumber)):
            return TrackedFloat(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        v = self.value + o.value
        return TrackedFloat(v, self.err + o.err + math.ulp(v))

    __radd__ = __add__

    def __neg__(self):
        return TrackedFloat(-self.value, self.err)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        v = self.value - o.value
        return TrackedFloat(v, self.err + o.err + math.ulp(v))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        v = self.value * o.value
        err = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return TrackedFloat(v, err + math.ulp(v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if abs(o.value) <= o.err:
            raise ZeroDivisionError("divisor interval contains zero")
        v = self.value / o.value
        err = (self.err + abs(v) * o.err) / (abs(o.value) - o.err)
        return TrackedFloat(v, err + math.ulp(v))

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        result = TrackedFloat(1.0)
        for _ in range(abs(k)):
            result = result * self
        return TrackedFloat(1.0) / result if k < 0 else result

    def __abs__(self):
        if self.value >= 0:
            return self
        return TrackedFloat(-self.value, self.err)

    def _cmp(self, other) -> int:
        o = self._lift(other)
        if o is None:
            raise TypeError(f"cannot compare TrackedFloat with {type(other).__name__}")
        gap = self.value - o.value
        slack = self.err + o.err
        if gap > slack:
            return 1
        if gap < -slack:
            return -1
        if slack == 0.0:
            return 0
        raise AmbiguousComparison(
            f"{self.value!r}±{self.err:.3g} vs {o.value!r}±{o.err:.3g}"
        )

    def __eq__(self, other):
        if self._lift(other) is None:
            return NotImplemented
        try:
            return self._cmp(other) == 0
        except AmbiguousComparison:
            return False

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __hash__(self):
        return hash((self.value, self.err))

    def __float__(self):
        return self.value

    def __repr__(self):
        return f"TrackedFloat({self.value!r}, err={self.err:.3g})"

    def __str__(self):
        return repr(self.value)


Number = Union[Fraction, QuadraticNumber, TrackedFloat]


def exact_sorted(xs) -> list:
    """Sort exact numbers using float keys, then confirm the order exactly.

    Falls back to a fully exact sort when neighbouring floats tie or cross.
    """
    out = sorted(xs, key=float)
    for a, b in zip(out, out[1:]):
        if not a < b:
            return sorted(out)
    return out


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticNumber))


def sign(x) -> int:
    """Sign of any supported number (raises on ambiguous tracked floats)."""
    if isinstance(x, QuadraticNumber):
        return x.sign()
    if isinstance(x, TrackedFloat):
        return x._cmp(0)
    return (x > 0) - (x < 0)


def _fmt_int_sqrt(coef: int, D: int) -> str:
    if coef == 1:
        return f"sqrt{D}"
    if coef == -1:
        return f"-sqrt{D}"
    return f"{coef}sqrt{D}"


def to_canonical(x) -> str:
    """Canonical, diff-stable string: ``3/8``, ``(1+sqrt5)/4``, ``-2+3sqrt2``."""
    if isinstance(x, TrackedFloat):
        return repr(x.value)
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if x.b == 0:
        return str(x.a)
    den = math.lcm(x.a.denominator, x.b.denominator)
    an = int(x.a * den)
    bn = int(x.b * den)
    sq = _fmt_int_sqrt(bn, x.D)
    if an == 0:
        num = sq
    else:
        num = f"{an}{'' if bn < 0 else '+'}{sq}"
    if den == 1:
        return num
    return f"({num})/{den}"


_QUAD_RE = re.compile(
    r"^\(?(?:(?P<a>[+-]?\d+)(?=[+-]))?(?P<b>[+-]?\d*)sqrt(?P<D>\d+)\)?(?:/(?P<den>\d+))?$"
)


def parse_number(text: str):
    """Inverse of :func:`to_canonical` for exact numbers."""
    t = text.strip().replace(" ", "")
    if "sqrt" not in t:
        return Fraction(t)
    m = _QUAD_RE.match(t)
    if not m:
        raise ValueError(f"not a canonical quadratic number: {text!r}")
    a = int(m.group("a") or 0)
    braw = m.group("b")
    b = {"": 1, "+": 1, "-": -1}.get(braw)
    if b is None:
        b = int(braw)
    den = int(m.group("den") or 1)
    return QuadraticNumber(Fraction(a, den), Fraction(b, den), int(m.group("D")))
