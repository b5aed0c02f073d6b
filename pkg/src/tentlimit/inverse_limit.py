"""Points and arcs of the inverse limit K_s = lim([0, s/2], T_s).

A point is a finite backward orbit ``coords = (x_0, x_{-1}, ..., x_{-m})``
plus a tail descriptor for the coordinates below depth m.  Structured tails
are periodic words over the inverse branches

    L: y -> y/s        (always defined on I)
    R: y -> 1 - y/s    (defined for y >= c_2)

applied cyclically below x_{-m}.  ``"L"`` is the zero tail (the point lies on
the 0-composant), an exact backward cycle is the word of that cycle, and
``None`` leaves the tail unspecified, in which case distances carry an error
radius.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .numbers import TrackedFloat, parse_number, to_canonical
from .tentmap import HALF, TRACKED, DomainError, Slope, tent


class InsufficientDepth(ValueError):
    """A coordinate below the truncation of a point with an unspecified tail."""


class InvalidTail(ValueError):
    """A branch tail that leaves I or uses the R branch where it is undefined."""


def apply_branch(s: Slope, b: str, y):
    if b == "L":
        return y / s.value
    return 1 - y / s.value


def _branch_affine(s: Slope, word: str) -> tuple:
    """(alpha, beta) with word applied left to right equal to y -> alpha*y + beta."""
    alpha, beta = s.num(1), s.num(0)
    inv = 1 / s.value
    for b in word:
        if b == "L":
            alpha, beta = alpha * inv, beta * inv
        else:
            alpha, beta = -alpha * inv, 1 - beta * inv
    return alpha, beta


def _branch_of(s: Slope, y) -> str:
    return "L" if y <= HALF else "R"


def check_branch_tail(s: Slope, lo, hi, word: str) -> None:
    """Raise InvalidTail unless ``word``, repeated forever below every y in [lo, hi], stays in I.

    Uses the two-period map G (positive slope, contraction to z*): the hull of
    [lo, hi] and z* is mapped into itself, so checking every step of two
    periods over that hull covers all depths.
    """
    word2 = word + word
    alpha, beta = _branch_affine(s, word2)
    z = beta / (1 - alpha)
    a = min(lo, hi, z)
    b = max(lo, hi, z)
    if a < 0 or b > s.c1:
        raise InvalidTail(f"hull [{to_canonical(a)}, {to_canonical(b)}] leaves I")
    c2 = s.c2
    for br in word2:
        if br == "R" and a < c2:
            raise InvalidTail(f"R branch applied below c_2 at {to_canonical(a)}")
        fa, fb = apply_branch(s, br, a), apply_branch(s, br, b)
        a, b = (fa, fb) if fa <= fb else (fb, fa)


@dataclass(frozen=True, eq=False)
class ILPoint:
    """A point of K_s: ``coords[k] = x_{-k}`` for k <= depth, then ``tail``."""

    slope: Slope
    coords: tuple
    tail: Optional[str] = "L"
    validate: bool = True

    def __post_init__(self):
        s = self.slope
        cs = tuple(s.num(x) for x in self.coords)
        object.__setattr__(self, "coords", cs)
        if not cs:
            raise ValueError("a point needs at least x_0")
        if self.tail is not None and (not self.tail or set(self.tail) - {"L", "R"}):
            raise ValueError(f"bad tail word {self.tail!r}")
        if not self.validate:
            return
        for x in cs:
            if x < 0 or x > s.c1:
                raise DomainError(f"coordinate {to_canonical(x)} outside [0, s/2]")
        if s.exact:
            for k in range(len(cs) - 1):
                if tent(s, cs[k + 1]) != cs[k]:
                    raise DomainError(f"T(x_{{-{k + 1}}}) != x_{{-{k}}}")
            if self.tail is not None:
                check_branch_tail(s, cs[-1], cs[-1], self.tail)

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, s: Slope) -> ILPoint:
        """The endpoint 0-bar = (..., 0, 0, 0)."""
        return cls(s, (s.num(0),), "L")

    @classmethod
    def fixed(cls, s: Slope) -> ILPoint:
        """(..., p, p, p) with p = s/(1+s)."""
        p = s.fixed_point
        return cls(s, (p,), "R")

    @classmethod
    def periodic(cls, s: Slope, coords: Sequence, period: int) -> ILPoint:
        """Truncation whose deepest coordinates repeat with the given period forever."""
        cs = tuple(s.num(x) for x in coords)
        m = len(cs) - 1
        if m < period or cs[m] != cs[m - period]:
            raise ValueError("periodic tail needs x_{-m} = x_{-m+q} inside the truncation")
        word = "".join(_branch_of(s, cs[d - period]) for d in range(m + 1, m + period + 1))
        return cls(s, cs, word)

    @classmethod
    def critical(cls, s: Slope, coords: Sequence, index: int) -> ILPoint:
        """Tail following orb(c) backwards: x_{-m-j} = c_{i-j} down to c, then the zero tail."""
        from .tentmap import critical_orbit

        cs = [s.num(x) for x in coords]
        orb = critical_orbit(s, max(index, 1))
        if index and cs[-1] != orb[index]:
            raise ValueError("deepest coordinate is not c_i")
        cs.extend(orb[index - j] for j in range(1, index + 1))
        return cls(s, tuple(cs), "L")

    @classmethod
    def from_backward_orbit(cls, s: Slope, x0, branches: str, tail: Optional[str] = None) -> ILPoint:
        cs = [s.num(x0)]
        for b in branches:
            cs.append(apply_branch(s, b, cs[-1]))
        return cls(s, tuple(cs), tail)

    # -- access --------------------------------------------------------------

    @property
    def depth(self) -> int:
        return len(self.coords) - 1

    @property
    def structured(self) -> bool:
        return self.tail is not None

    def extend(self, k: int) -> ILPoint:
        """The same point with k more tail coordinates materialized."""
        if k <= 0:
            return self
        if self.tail is None:
            raise InsufficientDepth(f"needs {k} coordinates below depth {self.depth}")
        s = self.slope
        cs = list(self.coords)
        w = self.tail
        for i in range(k):
            cs.append(apply_branch(s, w[i % len(w)], cs[-1]))
        r = k % len(w)
        return ILPoint(s, tuple(cs), w[r:] + w[:r], validate=False)

    def coord(self, k: int):
        """pi_k(x) = x_{-k}."""
        if k <= self.depth:
            return self.coords[k]
        return self.extend(k - self.depth).coords[k]

    projection = coord

    @cached_property
    def tail_kind(self) -> str:
        if self.tail is None:
            return "unspecified"
        if self.tail == "L":
            return "zero"
        q = len(self.tail)
        ext = self.extend(q)
        return "periodic" if ext.coords[-1] == self.coords[-1] else "branch"

    def __repr__(self):
        shown = ", ".join(to_canonical(x) for x in reversed(self.coords))
        return f"ILPoint(..{self.tail_kind}.., {shown})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        kind = self.tail_kind
        tail = {"kind": kind}
        if kind in ("branch", "periodic"):
            tail["word"] = self.tail
        return {
            "slope": self.slope.describe(),
            "coords": [to_canonical(x) for x in self.coords],
            "tail": tail,
        }

    @classmethod
    def from_json(cls, d) -> ILPoint:
        if isinstance(d, str):
            d = json.loads(d)
        sd = d["slope"]
        if sd["policy"] == TRACKED:
            s = Slope.tracked(sd["value"], sd.get("err", 0.0))
            coords = [float(c) for c in d["coords"]]
        else:
            s = Slope.parse(sd["value"])
            coords = [parse_number(c) for c in d["coords"]]
        t = d["tail"]
        kind = t["kind"]
        if kind == "zero":
            return cls(s, coords, "L")
        if kind in ("branch", "periodic") and "word" in t:
            return cls(s, coords, t["word"])
        if kind == "periodic":
            return cls.periodic(s, coords, t["period"])
        if kind == "critical":
            return cls.critical(s, coords, t["index"])
        if kind == "unspecified":
            return cls(s, coords, None)
        raise ValueError(f"unknown tail kind {kind!r}")


# -- metric ------------------------------------------------------------------


def _geometric_tail(s: Slope, x: ILPoint, y: ILPoint):
    """Exact sum of 2^{-k}|x_{-k} - y_{-k}| over all k for two structured points."""
    J = max(x.depth, y.depth)
    X, Y = x.extend(J - x.depth), y.extend(J - y.depth)
    one = s.num(1)
    total = s.num(0)
    w = one
    for k in range(J + 1):
        total = total + w * abs(X.coords[k] - Y.coords[k])
        w = w / 2
    # w == 2^{-(J+1)}
    qx, qy = len(X.tail), len(Y.tail)
    L = 2 * math.lcm(qx, qy)
    XL, YL = X.extend(L), Y.extend(L)
    lam = one / s.value**L
    mu = Fraction(1, 2**L)
    for r in range(1, L + 1):
        ax, bx = _branch_affine(s, _rot(X.tail, r, L))
        ay, by = _branch_affine(s, _rot(Y.tail, r, L))
        zx = bx / (1 - ax)
        zy = by / (1 - ay)
        A = (XL.coords[J + r] - zx) - (YL.coords[J + r] - zy)
        B = zx - zy
        base = one / 2 ** (J + r)
        if B == 0:
            total = total + base * abs(A) / (1 - lam * mu)
            continue
        t0 = 0
        lt = one
        absA, absB = abs(A), abs(B)
        while absA * lt >= absB:
            total = total + base * mu**t0 * abs(A * lt + B)
            t0 += 1
            lt = lt * lam
        sgn = 1 if B > 0 else -1
        rest = A * (lam * mu) ** t0 / (1 - lam * mu) + B * mu**t0 / (1 - mu)
        total = total + base * sgn * rest
    return total


def _rot(word: str, r: int, L: int) -> str:
    """The L branches used below depth J + r when ``word`` starts at depth J + 1."""
    q = len(word)
    return "".join(word[(r + i) % q] for i in range(L))


def metric_dist(x: ILPoint, y: ILPoint, depth: Optional[int] = None):
    """(value, error) for d(x, y) = sum_k 2^{-k} |x_{-k} - y_{-k}|.

    Exact with zero error when both tails are structured and ``depth`` is not
    given.  Otherwise the sum runs to the deepest commonly known coordinate M
    and ``error = 2^{-M} s`` bounds the rest.
    """
    s = x.slope
    if y.slope != s:
        raise ValueError("points over different slopes")
    if depth is None and x.structured and y.structured and s.exact:
        return _geometric_tail(s, x, y), s.num(0)
    limits = [d for d in (depth,) if d is not None]
    if not x.structured:
        limits.append(x.depth)
    if not y.structured:
        limits.append(y.depth)
    if not limits:
        limits.append(max(x.depth, y.depth) + 64)
    M = min(limits)
    X, Y = x.extend(M - x.depth), y.extend(M - y.depth)
    total = s.num(0)
    w = s.num(1)
    for k in range(M + 1):
        total = total + w * abs(X.coords[k] - Y.coords[k])
        w = w / 2
    err = s.value / 2**M
    if isinstance(total, TrackedFloat):
        return total, TrackedFloat(err)
    return total, err


def points_equal(x: ILPoint, y: ILPoint) -> bool:
    value, err = metric_dist(x, y)
    return value == 0 and err == 0


# -- shift ------------------------------------------------------------------


def shift(x: ILPoint, R: int) -> ILPoint:
    """sigma^R: append R forward images (R > 0) or drop |R| coordinates (R < 0)."""
    s = x.slope
    if R == 0:
        return x
    if R > 0:
        fwd = []
        v = x.coords[0]
        for _ in range(R):
            v = tent(s, v)
            fwd.append(v)
        return ILPoint(s, tuple(reversed(fwd)) + x.coords, x.tail, validate=False)
    k = -R
    if k > x.depth:
        x = x.extend(k - x.depth)
    return ILPoint(s, x.coords[k:], x.tail, validate=False)


def c0_precedes(x: ILPoint, y: ILPoint) -> bool:
    """Strict order along the 0-composant ray (0-bar first) for zero-tail points."""
    if x.tail != "L" or y.tail != "L":
        raise ValueError("order along the 0-composant needs zero tails")
    N = max(x.depth, y.depth) + 1
    return x.coord(N) < y.coord(N)


# -- arcs -------------------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    """Points x(u), u in [lo, hi], with x_{-base} = u, x_{-base+j} = T^j(u), and the
    branch ``tail`` below depth ``base``.

    ``p`` is the projection index used for p-points and chains.
    """

    slope: Slope
    base: int
    lo: object
    hi: object
    tail: str = "L"
    p: int = 0

    def __post_init__(self):
        s = self.slope
        object.__setattr__(self, "lo", s.num(self.lo))
        object.__setattr__(self, "hi", s.num(self.hi))
        if self.base < self.p:
            raise ValueError("base depth must be >= p")
        if not (0 <= self.lo <= self.hi <= s.c1):
            raise DomainError("arc parameter interval outside I")
        if s.exact:
            check_branch_tail(s, self.lo, self.hi, self.tail)

    @property
    def n(self) -> int:
        return self.base - self.p

    def contains(self, u) -> bool:
        return self.lo <= u <= self.hi

    def point(self, u) -> ILPoint:
        s = self.slope
        u = s.num(u)
        if not self.contains(u):
            raise DomainError(f"u = {to_canonical(u)} outside the arc")
        cs = [u]
        for _ in range(self.base):
            cs.append(tent(s, cs[-1]))
        return ILPoint(s, tuple(reversed(cs)), self.tail, validate=False)

    def projection(self, m: int, u):
        """pi_m(point(u))."""
        s = self.slope
        u = s.num(u)
        if m <= self.base:
            for _ in range(self.base - m):
                u = tent(s, u)
            return u
        w = self.tail
        for i in range(m - self.base):
            u = apply_branch(s, w[i % len(w)], u)
        return u

    def subarc(self, a, b) -> Arc:
        if b < a:
            a, b = b, a
        if not (self.contains(a) and self.contains(b)):
            raise DomainError("subarc outside the arc")
        return Arc(self.slope, self.base, a, b, self.tail, self.p)

    def with_p(self, p: int) -> Arc:
        return Arc(self.slope, self.base, self.lo, self.hi, self.tail, p)

    def folding_points(self) -> Optional[list]:
        """Parameters u of certified folding points on the arc.

        Returns ``None`` when omega(c) is not certified (no exact cycle).
        Every coordinate of a folding point lies in the finite set omega(c), so
        the tail below ``base`` must be an exact cycle: u is the fixed point of
        the tail's period map.
        """
        from .tentmap import critical_orbit

        s = self.slope
        if not s.exact:
            return None
        omega = critical_orbit(s, 64).certified_omega
        if omega is None:
            return None
        alpha, beta = _branch_affine(s, self.tail)
        z = beta / (1 - alpha)
        if not self.contains(z):
            return []
        pt = self.point(z)
        coords = pt.extend(2 * len(self.tail)).coords
        return [z] if all(v in omega for v in coords) else []

    def to_json(self) -> dict:
        return {
            "slope": self.slope.describe(),
            "base": self.base,
            "p": self.p,
            "lo": to_canonical(self.lo),
            "hi": to_canonical(self.hi),
            "tail": self.tail,
        }


class FundamentalArc(Arc):
    """[0-bar, s_n] on the 0-composant: u = pi_{p+n} ranges over [0, c] with the zero tail."""

    def __init__(self, slope: Slope, p: int, n: int):
        if n < 1 or p < 0:
            raise ValueError("need n >= 1 and p >= 0")
        super().__init__(slope, p + n, slope.num(0), slope.c, "L", p)

    def to_json(self) -> dict:
        return {"slope": self.slope.describe(), "p": self.p, "n": self.n}


def fundamental_arc(s: Slope, p: int, n: int) -> FundamentalArc:
    return FundamentalArc(s, p, n)


@dataclass(frozen=True)
class Piece:
    """Maximal interval [ua, ub] on which u -> pi_m(point(u)) is affine: v = alpha*u + beta."""

    ua: object
    ub: object
    alpha: object
    beta: object

    @property
    def va(self):
        return self.alpha * self.ua + self.beta

    @property
    def vb(self):
        return self.alpha * self.ub + self.beta

    def inverse(self, v):
        return (v - self.beta) / self.alpha


def projection_pieces(s: Slope, lo, hi, j: int) -> list[Piece]:
    """Monotone affine pieces of u -> T^j(u) on [lo, hi], by forward composition."""
    c = s.c
    pieces = [Piece(lo, hi, s.num(1), s.num(0))]
    for _ in range(j):
        nxt = []
        for pc in pieces:
            va, vb = pc.va, pc.vb
            if (va < c < vb) or (vb < c < va):
                uc = pc.inverse(c)
                parts = [Piece(pc.ua, uc, pc.alpha, pc.beta), Piece(uc, pc.ub, pc.alpha, pc.beta)]
            else:
                parts = [pc]
            for q in parts:
                mid_left = q.va <= c and q.vb <= c
                if mid_left:
                    nxt.append(Piece(q.ua, q.ub, s.value * q.alpha, s.value * q.beta))
                else:
                    nxt.append(Piece(q.ua, q.ub, -s.value * q.alpha, s.value - s.value * q.beta))
        pieces = nxt
    return pieces


def arc_pieces(arc: Arc, m: int) -> list[Piece]:
    """Pieces of u -> pi_m(point(u)) for m <= base."""
    if m > arc.base:
        raise ValueError("pieces are only tracked for m <= base")
    return projection_pieces(arc.slope, arc.lo, arc.hi, arc.base - m)


# -- Hausdorff ------------------------------------------------------------------


def sample_arc(arc: Arc, density: int = 16, include_ppoints: bool = True) -> list[ILPoint]:
    """The arc's p-points plus a uniform u-grid with ``density`` intervals."""
    us = set()
    if include_ppoints:
        from .ppoints import enumerate_ppoints

        us.update(pp.u for pp in enumerate_ppoints(arc))
    span = arc.hi - arc.lo
    for i in range(density + 1):
        us.add(arc.lo + span * Fraction(i, density))
    return [arc.point(u) for u in sorted(us)]


def arc_hausdorff(A: Sequence[ILPoint], B: Sequence[ILPoint], m: Optional[int] = None):
    """(value, error): Hausdorff distance of two sampled arcs under ``metric_dist``.

    With ``m`` the metric is truncated at depth m, so ``error <= 2^{-m} s``.
    The true distance of the sampled sets lies in [value - error, value + error].
    """
    if not A or not B:
        raise ValueError("empty sample")
    table = [[metric_dist(a, b, m) for b in B] for a in A]
    err = max(e for row in table for _, e in row)
    d_ab = max(min(v for v, _ in row) for row in table)
    d_ba = max(min(table[i][j][0] for i in range(len(A))) for j in range(len(B)))
    return max(d_ab, d_ba), err
