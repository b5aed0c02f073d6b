"""Tent map T_s(x) = min(s*x, s*(1-x)) on I = [0, s/2] under explicit number policies."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .numbers import QuadraticNumber, TrackedFloat, exact_sorted, parse_number, to_canonical

HALF = Fraction(1, 2)

RATIONAL = "rational"
QUADRATIC = "quadratic"
TRACKED = "tracked-float"


class SlopeError(ValueError):
    """Slope outside (sqrt 2, 2] or an unparseable slope spec."""


class DomainError(ValueError):
    """A point outside the interval an operation is defined on."""


class PrecisionExhausted(ArithmeticError):
    """The tracked error bound grew past the configured threshold."""


@dataclass(frozen=True)
class Slope:
    """Slope s in (sqrt 2, 2] together with the arithmetic policy it dictates.

    Build one with :meth:`rational`, :meth:`quadratic`, :meth:`golden`,
    :meth:`tracked` or :meth:`parse`.
    """

    value: object
    policy: str
    max_error: float = 1e-6

    def __post_init__(self):
        v = self.value
        if self.policy == TRACKED:
            if not (v.value * v.value > 2.0 and v.value <= 2.0):
                raise SlopeError(f"slope {v!r} not in (sqrt2, 2]")
        else:
            if not (v * v > 2 and v <= 2):
                raise SlopeError(f"slope {to_canonical(v)} not in (sqrt2, 2]")

    @classmethod
    def rational(cls, num, den=1) -> Slope:
        return cls(Fraction(num, den), RATIONAL)

    @classmethod
    def quadratic(cls, a, b, D: int) -> Slope:
        q = QuadraticNumber(Fraction(a), Fraction(b), D)
        if q.b == 0:
            return cls(q.a, RATIONAL)
        return cls(q, QUADRATIC)

    @classmethod
    def golden(cls) -> Slope:
        return cls.quadratic(Fraction(1, 2), Fraction(1, 2), 5)

    @classmethod
    def tracked(cls, value: float, err: float = 0.0, max_error: float = 1e-6) -> Slope:
        return cls(TrackedFloat(value, err), TRACKED, max_error)

    @classmethod
    def parse(cls, spec: str) -> Slope:
        """Parse ``2``, ``7/4``, ``golden``, ``quad:a,b,D``, ``float:x[,err]`` or a canonical quadratic string."""
        text = spec.strip()
        try:
            if text == "golden":
                return cls.golden()
            if text.startswith("quad:"):
                a, b, D = text[5:].split(",")
                return cls.quadratic(Fraction(a), Fraction(b), int(D))
            if text.startswith("float:"):
                parts = text[6:].split(",")
                err = float(parts[1]) if len(parts) > 1 else 0.0
                return cls.tracked(float(parts[0]), err)
            x = parse_number(text)
        except SlopeError:
            raise
        except (ValueError, ZeroDivisionError) as exc:
            raise SlopeError(f"cannot parse slope {spec!r}: {exc}") from None
        if isinstance(x, QuadraticNumber):
            return cls.quadratic(x.a, x.b, x.D)
        return cls.rational(x)

    @property
    def exact(self) -> bool:
        return self.policy != TRACKED

    @property
    def c(self):
        return self.num(HALF)

    @property
    def c1(self):
        return self.value / 2

    @property
    def c2(self):
        return self.value * (1 - self.value / 2)

    @property
    def fixed_point(self):
        """The interior fixed point s/(1+s)."""
        return self.value / (1 + self.value)

    def num(self, x):
        """Lift ``x`` into this slope's number system."""
        if self.policy == TRACKED:
            return TrackedFloat(x)
        if isinstance(x, TrackedFloat):
            raise TypeError("tracked float in an exact computation")
        if self.policy == QUADRATIC and not isinstance(x, QuadraticNumber):
            return QuadraticNumber(Fraction(x), 0, self.value.D)
        if isinstance(x, int):
            return Fraction(x)
        return x

    def describe(self) -> dict:
        if self.policy == TRACKED:
            return {"policy": TRACKED, "value": self.value.value, "err": self.value.err}
        return {"policy": self.policy, "value": to_canonical(self.value)}

    def __str__(self):
        return to_canonical(self.value)


def _check_error(s: Slope, x):
    if isinstance(x, TrackedFloat) and x.err > s.max_error:
        raise PrecisionExhausted(f"error bound {x.err:.3g} exceeds {s.max_error:.3g}")


def tent(s: Slope, x):
    """T_s(x) without domain checks (hot path)."""
    if s.policy == TRACKED:
        sv = s.value
        a = sv * x
        b = sv * (1 - x)
        lo = a if a.value <= b.value else b
        return TrackedFloat(lo.value, max(a.err, b.err))
    return s.value * x if x <= HALF else s.value * (1 - x)


def tent_eval(s: Slope, x):
    """T_s(x) = min(s x, s(1-x)) for x in [0, 1]."""
    x = s.num(x)
    if s.policy == TRACKED:
        if x.value + x.err < 0 or x.value - x.err > 1:
            raise DomainError(f"{x!r} outside [0, 1]")
        y = tent(s, x)
        _check_error(s, y)
        return y
    if x < 0 or x > 1:
        raise DomainError(f"{to_canonical(x)} outside [0, 1]")
    return tent(s, x)


def iterate(s: Slope, x, n: int):
    for _ in range(n):
        x = tent(s, x)
    return x


def in_interval(s: Slope, y) -> bool:
    """Exact membership in I = [0, s/2]."""
    return 0 <= y <= s.c1


def preimages(s: Slope, y) -> tuple:
    """Points x of I with T_s(x) = y, sorted; the two branches merge at y = s/2."""
    y = s.num(y)
    if y < 0 or y > s.c1:
        raise DomainError(f"{to_canonical(y)} outside [0, s/2]")
    left = y / s.value
    right = 1 - left
    if right == left:
        return (left,)
    return (left, right) if in_interval(s, right) else (left,)


def left_branch(s: Slope, y):
    return y / s.value


def right_branch(s: Slope, y):
    return 1 - y / s.value


def preimage_levels(s: Slope, depth: int) -> tuple:
    """``levels[j]`` = sorted T_s^{-j}(c) inside I, for j = 0..depth."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return _preimage_levels(s, depth)


@lru_cache(maxsize=256)
def _preimage_levels(s: Slope, depth: int) -> tuple:
    if depth == 0:
        return ((s.c,),)
    prev = _preimage_levels(s, depth - 1)
    nxt = set()
    for y in prev[-1]:
        nxt.update(preimages(s, y))
    if s.exact:
        return prev + (tuple(exact_sorted(nxt)),)
    return prev + (tuple(sorted(nxt)),)


@dataclass(frozen=True)
class CriticalOrbit:
    """c_1, ..., c_N with exact period/preperiod certificates when available.

    ``periodic`` is the least k with c_k = c (exact policies only);
    ``preperiod``/``period`` describe the eventual cycle when the computed
    segment already repeats.  ``near_period`` is the tracked-float diagnostic.
    """

    slope: Slope
    points: tuple
    periodic: Optional[int] = None
    preperiod: Optional[int] = None
    period: Optional[int] = None
    near_period: Optional[int] = None

    def __len__(self):
        return len(self.points)

    def __getitem__(self, k: int):
        """c_k for 1 <= k <= N; c_0 = c."""
        if k == 0:
            return self.slope.c
        return self.points[k - 1]

    @property
    def certified_omega(self) -> Optional[frozenset]:
        """omega(c) exactly, when the orbit is certified eventually periodic."""
        if self.period is None:
            return None
        start = self.preperiod
        return frozenset(self[k] for k in range(start, start + self.period))

    @property
    def certified_orbit(self) -> Optional[frozenset]:
        """orb(c) including c_0, when it is certified finite."""
        if self.period is None:
            return None
        return frozenset(self[k] for k in range(0, self.preperiod + self.period))


@lru_cache(maxsize=128)
def critical_orbit(s: Slope, N: int, tolerance: float = 1e-9) -> CriticalOrbit:
    """First N points of the critical orbit.

    Under exact policies the orbit is scanned for the first repetition, which
    certifies eventual periodicity.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    pts = []
    seen = {}
    periodic = preperiod = period = near = None
    x = s.c
    if s.exact:
        seen[x] = 0
    for k in range(1, N + 1):
        x = tent(s, x)
        _check_error(s, x)
        pts.append(x)
        if s.exact:
            if periodic is None and x == s.c:
                periodic = k
            if period is None:
                if x in seen:
                    preperiod, period = seen[x], k - seen[x]
                else:
                    seen[x] = k
        elif near is None and abs(x.value - 0.5) <= max(tolerance, x.err):
            near = k
    return CriticalOrbit(s, tuple(pts), periodic, preperiod, period, near)


def extend_orbit(orbit: CriticalOrbit, N: int) -> CriticalOrbit:
    if N <= len(orbit):
        return orbit
    return critical_orbit(orbit.slope, N)


def omega_limit_dist(s: Slope, x, window: tuple[int, int], orbit: Optional[CriticalOrbit] = None):
    """min over N1 <= j <= N2 of |x - c_j|."""
    n1, n2 = window
    if not n1 < n2:
        raise ValueError("window must satisfy N1 < N2")
    x = s.num(x)
    if x < 0 or x > s.c1:
        raise DomainError(f"{to_canonical(x)} outside [0, s/2]")
    if orbit is None or len(orbit) < n2:
        orbit = critical_orbit(s, n2)
    return min(abs(x - orbit[j]) for j in range(max(n1, 0), n2 + 1))


def orbit_density(s: Slope, n: int = 200_000, bins: int = 256, burn: int = 64):
    """Float diagnostic for density of orb(c) in [c2, c1]: fraction of occupied bins.

    Never a certificate; float orbits decorrelate from the true orbit after
    a few dozen steps.
    """
    from ._kernels import orbit_histogram

    sv = float(s.value)
    counts = orbit_histogram(sv, n, bins, burn)
    return float((counts > 0).mean()), counts


__all__ = [
    "Slope",
    "SlopeError",
    "DomainError",
    "PrecisionExhausted",
    "CriticalOrbit",
    "tent",
    "tent_eval",
    "iterate",
    "preimages",
    "preimage_levels",
    "left_branch",
    "right_branch",
    "critical_orbit",
    "omega_limit_dist",
    "orbit_density",
    "in_interval",
    "HALF",
]
