"""p-points, p-levels, folding patterns and salient points on arcs of the 0-composant.

A point x is a p-point of level l when x_{-p-l} = c.  Several l can hold at
once when c is periodic (golden slope: T^3(c) = c); the level reported is the
largest one, which makes the salient point s_n on the depth-n arc have level n.
The basepoint 0-bar gets level infinity.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

from .inverse_limit import Arc, FundamentalArc, ILPoint, _branch_affine, shift
from .numbers import to_canonical
from .tentmap import Slope, preimage_levels

INF = math.inf
MAX_DEPTH = 26
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class PPoint:
    u: object
    level: float
    arc: Arc = field(repr=False, compare=False)

    @property
    def is_basepoint(self) -> bool:
        return self.level == INF

    def point(self) -> ILPoint:
        return self.arc.point(self.u)


@dataclass(frozen=True)
class SalientPoint:
    index: int
    ppoint: PPoint

    def point(self) -> ILPoint:
        return self.ppoint.point()


def level_char(level) -> str:
    if level == INF:
        return "∞"
    if level < len(_DIGITS):
        return _DIGITS[int(level)]
    return f"[{int(level)}]"


@dataclass(frozen=True)
class FoldingPattern:
    levels: tuple
    us: tuple = ()

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    def level_string(self) -> str:
        """Compact form, e.g. ``∞01020103``; levels >= 36 print as ``[n]``."""
        return "".join(level_char(l) for l in self.levels)

    def finite(self) -> tuple:
        return tuple(l for l in self.levels if l != INF)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "u", "level"])
        for i, (u, l) in enumerate(zip(self.us, self.levels)):
            w.writerow([i, to_canonical(u), "inf" if l == INF else int(l)])
        return buf.getvalue()


def _tail_roots(arc: Arc, max_level: int) -> dict:
    """u -> level for p-points whose c-coordinate lies below the arc's base."""
    s = arc.slope
    out = {}
    w = arc.tail
    for k in range(1, max_level - arc.n + 1):
        word = "".join(w[i % len(w)] for i in range(k))
        alpha, beta = _branch_affine(s, word)
        u = (s.c - beta) / alpha
        if arc.contains(u):
            out[u] = arc.n + k
    return out


def enumerate_ppoints(arc: Arc, max_level: Optional[int] = None) -> list[PPoint]:
    """All p-points on ``arc`` ordered by u, with levels up to ``max_level``.

    Levels l <= n come from the exact preimage tree T^{-(n-l)}(c); deeper
    levels (only possible for non-zero tails) solve the affine tail equation.
    """
    n = arc.n
    if max_level is None:
        max_level = n
    if n > MAX_DEPTH:
        raise ValueError(f"depth {n} exceeds the enumeration cap {MAX_DEPTH}")
    s = arc.slope
    found = {}
    if max_level > n and arc.tail != "L":
        found.update(_tail_roots(arc, max_level))
    levels = preimage_levels(s, n)
    for j in range(0, n + 1):
        lvl = n - j
        for u in levels[j]:
            if arc.contains(u) and u not in found:
                found[u] = lvl
    if arc.tail == "L" and arc.lo == 0:
        found[s.num(0)] = INF
    return [PPoint(u, found[u], arc) for u in sorted(found)]


def folding_pattern(arc: Arc, max_level: Optional[int] = None) -> FoldingPattern:
    pts = enumerate_ppoints(arc, max_level)
    return FoldingPattern(tuple(pp.level for pp in pts), tuple(pp.u for pp in pts))


def c0_folding_pattern(s: Slope, n: int, p: int = 0) -> FoldingPattern:
    """FP(C_0) truncated at the salient point s_n."""
    return folding_pattern(FundamentalArc(s, p, n))


def p_level(x: ILPoint, p: int):
    """L_p(x): the largest l with x_{-p-l} = c; ``inf`` for 0-bar or when c recurs forever
    in the tail; ``None`` when x is not a p-point."""
    s = x.slope
    c = s.c
    if x.tail == "L" and all(v == 0 for v in x.coords):
        return INF
    best = None
    for d in range(p, x.depth + 1):
        if x.coords[d] == c:
            best = d - p
    if x.tail is None:
        return best
    # below the truncation: per residue r, x_{-m-r-tL} = z + (v - z) lam^t with lam > 0
    q = len(x.tail)
    L = 2 * q
    X = x.extend(L)
    m = x.depth
    for r in range(1, L + 1):
        word = "".join(x.tail[(r + i) % q] for i in range(L))
        alpha, beta = _branch_affine(s, word)
        z = beta / (1 - alpha)
        v = X.coords[m + r]
        if v == z:
            if z == c:
                return INF
            continue
        ratio = (c - z) / (v - z)
        if ratio <= 0 or ratio > 1:
            continue
        t, lt = 0, s.num(1)
        while lt > ratio:
            t += 1
            lt = lt * alpha
        if lt == ratio:
            d = m + r + t * L
            if d >= p and (best is None or d - p > best):
                best = d - p
    return best


def salient_point(s: Slope, p: int, i: int) -> ILPoint:
    """s_i: u = c on the depth-i fundamental arc."""
    return FundamentalArc(s, p, i).point(s.c)


def salient_points(s: Slope, p: int, N: int) -> list[SalientPoint]:
    if N < 1:
        raise ValueError("N must be >= 1")
    out = []
    for i in range(1, N + 1):
        arc = FundamentalArc(s, p, i)
        out.append(SalientPoint(i, PPoint(s.c, i, arc)))
    return out


def salient_positions(fp: FoldingPattern) -> list[int]:
    """Indices of the running maxima of the finite levels: the salient points in order."""
    out = []
    best = -1
    for idx, l in enumerate(fp.levels):
        if l != INF and l > best:
            best = l
            out.append(idx)
    return out


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    detail: str = ""
    data: object = None

    def __bool__(self):
        return self.ok


def level_shift_check(arc: FundamentalArc, R: int) -> CheckReport:
    """sigma^R maps each p-point of the depth-n arc to a p-point of the depth-(n+R) arc
    with level raised by R."""
    if R < 0:
        raise ValueError("R must be >= 0")
    if R == 0:
        return CheckReport(True, "R = 0")
    s, p, n = arc.slope, arc.p, arc.n
    target = FundamentalArc(s, p, n + R)
    levels = {pp.u: pp.level for pp in enumerate_ppoints(target)}
    for pp in enumerate_ppoints(arc):
        y = shift(pp.point(), R)
        u = y.coord(p + n + R)
        if u not in levels:
            return CheckReport(False, f"sigma^{R} of u={to_canonical(pp.u)} is not a p-point")
        if target.point(u).coords != y.extend(0).coords[: p + n + R + 1]:
            return CheckReport(False, f"sigma^{R} of u={to_canonical(pp.u)} leaves the arc")
        if levels[u] != pp.level + R:
            return CheckReport(
                False, f"level {levels[u]} != {pp.level} + {R} at u={to_canonical(pp.u)}"
            )
        if p_level(y, p) != pp.level + R:
            return CheckReport(False, f"coordinate level mismatch at u={to_canonical(pp.u)}")
    return CheckReport(True, f"{len(levels)} p-points checked")


def p_independence(s: Slope, p: int, q: int, n: int) -> CheckReport:
    """FP of the depth-n arc read through pi_p equals the one read through pi_q.

    The q-levels are recomputed from coordinates of the materialized points, not
    from the parametrization.
    """
    fp = folding_pattern(FundamentalArc(s, p, n))
    arc_q = FundamentalArc(s, q, n)
    levels_q = tuple(p_level(pp.point(), q) for pp in enumerate_ppoints(arc_q))
    if fp.levels != levels_q:
        for i, (a, b) in enumerate(zip(fp.levels, levels_q)):
            if a != b:
                return CheckReport(False, f"entry {i}: {a} vs {b}", (fp.levels, levels_q))
        return CheckReport(False, "length mismatch", (fp.levels, levels_q))
    return CheckReport(True, f"{len(levels_q)} entries agree", fp.levels)


def salient_reindex_check(s: Slope, p: int, q: int, i: int) -> CheckReport:
    """Salient p-point s_i equals salient q-point s_{i+p-q} coordinate by coordinate."""
    if i + p - q < 1:
        raise ValueError("reindexed salient index must be >= 1")
    a = salient_point(s, p, i)
    b = salient_point(s, q, i + p - q)
    if a.tail == b.tail and a.coords == b.coords:
        return CheckReport(True)
    return CheckReport(False, f"s_{i}^({p}) != s_{i + p - q}^({q})")


def salient_dominance(arc: FundamentalArc) -> CheckReport:
    """Every p-point strictly between 0-bar and s_n has level < n."""
    pts = enumerate_ppoints(arc)
    n = arc.n
    if pts[-1].u != arc.slope.c or pts[-1].level != n:
        return CheckReport(False, "last p-point is not s_n")
    for pp in pts[1:-1]:
        if not pp.level < n:
            return CheckReport(False, f"level {pp.level} at u={to_canonical(pp.u)}")
    return CheckReport(True)
