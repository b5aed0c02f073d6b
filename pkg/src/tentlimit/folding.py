"""Folding points and the straight-line isotopy along arcs.

x is a folding point iff every coordinate x_{-k} lies in omega(c).  When
omega(c) is an exact finite cycle (golden slope, s = 2) this is decidable for
points with structured tails; otherwise verdicts are qualified by depth.

The p-point test works at a fixed scale delta.  Any p-point y of level l has
y_{-j} = c_{p+l-j} for j <= p + l, which gives two exact tools:

* a lower bound ``d(x, y) >= sum_{j <= p+l} 2^{-j} |x_{-j} - c_{p+l-j}|``;
* with a finite orbit, ``d(x, y) >= 2^{-m} dist(x_{-m}, orb(c))`` for every
  m <= p + l, so once that exceeds delta all levels l >= m - p are excluded;
* past the preperiod the bound depends on l only mod the period, so its
  partial sums cap all large levels at once.

Witnesses are salient points s_l, whose distance to x is computed exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .inverse_limit import Arc, FundamentalArc, ILPoint, c0_precedes, metric_dist, projection_pieces, shift
from .numbers import to_canonical
from .ppoints import CheckReport, PPoint, salient_point
from .tentmap import CriticalOrbit, Slope, critical_orbit, omega_limit_dist

FOLDING = "folding"
NOT_FOLDING = "not-folding"
UNDECIDED = "undecided"

ORBIT_SCAN = 256


class FoldingObstruction(ValueError):
    """The arc contains a folding point, so no depth makes pi_m one-to-one on it."""

    def __init__(self, msg: str, point=None):
        super().__init__(msg)
        self.point = point


class SearchExhausted(RuntimeError):
    """The witness search reached its level cap without a verdict."""


@dataclass(frozen=True)
class FoldingVerdict:
    verdict: str
    certified: bool
    depth: int
    witness: tuple = ()
    level_bound: Optional[int] = None
    detail: str = ""

    def to_json(self) -> dict:
        def enc(w):
            if isinstance(w, PPoint):
                return {"level": w.level, "u": to_canonical(w.u), "p": w.arc.p, "n": w.arc.n}
            if isinstance(w, tuple):
                return [enc(v) for v in w]
            try:
                return to_canonical(w)
            except (AttributeError, TypeError):
                return w

        return {
            "verdict": self.verdict,
            "certified": self.certified,
            "depth": self.depth,
            "level_bound": self.level_bound,
            "witness": [enc(w) for w in self.witness],
            "detail": self.detail,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _orbit(s: Slope, n: int = ORBIT_SCAN) -> CriticalOrbit:
    return critical_orbit(s, n)


def _tail_is_cycle(x: ILPoint) -> bool:
    if x.tail is None:
        return False
    if x.tail == "L":
        return x.coords[-1] == 0
    return x.tail_kind == "periodic"


def folding_test_omega(x: ILPoint, depth: int = 32, window: tuple = (1, 64), tol: float = 1e-9) -> FoldingVerdict:
    """omega(c) membership of x_0 ... x_{-depth}.

    Certified either way when omega(c) is a known exact cycle and x has a
    structured tail; otherwise depth-qualified.
    """
    s = x.slope
    orb = _orbit(s, max(window[1], ORBIT_SCAN)) if s.exact else None
    omega = orb.certified_omega if orb is not None else None
    if omega is not None:
        if x.tail is not None:
            q = len(x.tail)
            # a non-cycle tail takes infinitely many distinct values per residue,
            # so one of them leaves the finite set omega within |omega|+1 periods
            reach = x.depth + 2 * q * (len(omega) + 2)
            depth = max(depth, reach if not _tail_is_cycle(x) else x.depth + 2 * q)
        X = x.extend(depth - x.depth) if x.tail is not None else x
        k_max = min(depth, X.depth)
        for k in range(k_max + 1):
            v = X.coords[k]
            if v not in omega:
                return FoldingVerdict(
                    NOT_FOLDING, True, k, (k, v), detail=f"x_-{k} = {to_canonical(v)} not in omega(c)"
                )
        if _tail_is_cycle(x):
            return FoldingVerdict(FOLDING, True, k_max, tuple(sorted(omega, key=float)), detail="cycle inside omega(c)")
        return FoldingVerdict(UNDECIDED, False, k_max, detail="all known coordinates in omega(c); tail unspecified")
    # no certified cycle: distances to a window of the orbit
    X = x.extend(depth - x.depth) if x.tail is not None else x
    k_max = min(depth, X.depth)
    dists = []
    for k in range(k_max + 1):
        d = omega_limit_dist(s, X.coords[k], window)
        dists.append(d)
        if d > tol:
            return FoldingVerdict(
                NOT_FOLDING, False, k, tuple(dists), detail=f"x_-{k} is {float(d):.3g} from c_j, j in {window}"
            )
    return FoldingVerdict(UNDECIDED, False, k_max, tuple(dists), detail="within tolerance of the orbit window")


def level_lower_bound(x: ILPoint, p: int, l: int, orbit: CriticalOrbit):
    """sum_{j <= p+l} 2^{-j} |x_{-j} - c_{p+l-j}|: at most d(x, y) for every level-l p-point y."""
    total = x.slope.num(0)
    w = Fraction(1)
    for j in range(p + l + 1):
        total = total + w * abs(x.coord(j) - orbit[p + l - j])
        w /= 2
    return total


def level_cap(x: ILPoint, p: int, radius, max_depth: int = 128) -> Optional[int]:
    """Largest level a p-point within ``radius`` of x can have, or None if not provable.

    Needs a finite certified orb(c): the first m with 2^{-m} dist(x_{-m}, orb(c)) > radius
    excludes every level l >= m - p.  Points whose coordinates creep toward the
    cycle fall back to per-residue partial sums of ``level_lower_bound``.
    """
    s = x.slope
    orb = _orbit(s) if s.exact else None
    if orb is None or orb.certified_orbit is None:
        return None
    pts = orb.certified_orbit
    if x.tail is None:
        X = x
    else:
        # a cycle tail repeats its distances with shrinking weight: nothing new after one period
        reach = x.depth + len(x.tail) if _tail_is_cycle(x) else max_depth
        X = x.extend(reach - x.depth)
    scale = Fraction(1)
    for m in range(min(max_depth, X.depth) + 1):
        dist = min(abs(X.coords[m] - q) for q in pts)
        if scale * dist > radius:
            return max(m - p - 1, -1)
        scale /= 2
    return _residue_cap(X, p, radius, orb, max_depth)


def _residue_cap(X: ILPoint, p: int, radius, orb: CriticalOrbit, max_depth: int) -> Optional[int]:
    # Past the preperiod c_{p+l-j} depends only on (p+l-j) mod period, so the
    # partial sums of level_lower_bound over j <= p+L-pre bound every l >= L.
    pre, q = orb.preperiod, orb.period
    cyc = [orb[pre + i] for i in range(q)]
    sums = [X.slope.num(0)] * q
    w = Fraction(1)
    j = 0
    for L in range(max_depth + 1):
        while j <= p + L - pre and j <= X.depth:
            for r in range(q):
                sums[r] = sums[r] + w * abs(X.coords[j] - cyc[(r - j) % q])
            w /= 2
            j += 1
        if j and all(v > radius for v in sums):
            return L - 1
    return None


def folding_test_ppoints(x: ILPoint, p: int, K: int, radius=Fraction(1, 64), max_level: Optional[int] = None) -> FoldingVerdict:
    """p-points of level >= K within ``radius`` of x.

    Returns the witness (a salient point of level >= K) when one is found, a
    certified not-folding verdict with ``level_bound`` when no p-point of level
    >= K can lie within ``radius``, and raises SearchExhausted otherwise.
    """
    s = x.slope
    if max_level is None:
        max_level = K + 3 * 24
    cap = level_cap(x, p, radius)
    if cap is not None and cap < K:
        return FoldingVerdict(
            NOT_FOLDING, True, cap + p + 1, (), cap,
            detail=f"no p-point of level >= {cap + 1} within radius",
        )
    for l in range(max(K, 1), max_level + 1):
        y = salient_point(s, p, l)
        d, err = metric_dist(x, y)
        if d + err <= radius:
            arc = FundamentalArc(s, p, l)
            return FoldingVerdict(
                UNDECIDED, False, p + l, (PPoint(s.c, l, arc), d), cap,
                detail=f"salient s_{l} within {float(d):.3g}",
            )
    orb = _orbit(s)
    if all(level_lower_bound(x, p, l, orb) > radius for l in range(K, max_level + 1)):
        # levels above max_level stay open unless the orbit bound covers them
        return FoldingVerdict(
            NOT_FOLDING, cap is not None, p + max_level, (), cap,
            detail=f"no p-point of level {K}..{max_level} within radius",
        )
    raise SearchExhausted(f"no witness of level {K}..{max_level} and no bound")


def certified_folding_points(s: Slope) -> Optional[list[ILPoint]]:
    """All folding points when omega(c) is an exact cycle: its backward orbits inside the cycle."""
    orb = _orbit(s)
    if orb.period is None:
        return None
    cyc = [orb[k] for k in range(orb.preperiod, orb.preperiod + orb.period)]
    q = len(cyc)
    out = []
    for i in range(q):
        coords = [cyc[(i - j) % q] for j in range(q + 1)]
        out.append(ILPoint.periodic(s, coords, q))
    return out


def sigma_cycle_check(points: Sequence[ILPoint]) -> CheckReport:
    """sigma permutes ``points`` as a single cycle."""
    pts = list(points)
    if not pts:
        return CheckReport(False, "no points")

    def same(a, b):
        v, e = metric_dist(a, b)
        return v == 0 and e == 0

    cur = pts[0]
    seen = [0]
    for _ in range(len(pts)):
        cur = shift(cur, 1)
        idx = [i for i, q in enumerate(pts) if same(cur, q)]
        if len(idx) != 1:
            return CheckReport(False, "sigma leaves the set")
        seen.append(idx[0])
    if seen[-1] != 0 or sorted(seen[:-1]) != list(range(len(pts))):
        return CheckReport(False, f"orbit {seen} is not one cycle")
    return CheckReport(True, f"cycle {seen}")


# -- isotopy ----------------------------------------------------------------


def _first_interior_fold(s: Slope, a, b, limit: int) -> int:
    """Smallest i < limit with T^i(u) = c for some u in (a, b); ``limit`` if none."""
    c = s.c
    pieces = projection_pieces(s, a, b, 0)
    from .oracles import projection_pieces_step

    for i in range(limit):
        for pc in pieces:
            va, vb = pc.va, pc.vb
            lo, hi = (va, vb) if va <= vb else (vb, va)
            if lo < c < hi:
                return i
            # c hit exactly at an interior piece boundary
            if (va == c and pc.ua > a) or (vb == c and pc.ub < b):
                return i
        pieces = [q for pc in pieces for q in projection_pieces_step(s, pc)]
    return limit


def _tail_root_depths(arc: Arc, a, b, limit: int) -> list[int]:
    """Depths d > base where the tail coordinate equals c at some u in (a, b)."""
    from .inverse_limit import _branch_affine

    s = arc.slope
    w = arc.tail
    out = []
    for k in range(1, limit + 1):
        alpha, beta = _branch_affine(s, "".join(w[i % len(w)] for i in range(k)))
        u = (s.c - beta) / alpha
        if a < u < b:
            out.append(arc.base + k)
    return out


@dataclass(frozen=True)
class IsotopyPath:
    """t -> the point of A = [x(a), x(b)] whose pi_m is (1-t) pi_m(x(a)) + t pi_m(x(b))."""

    arc: Arc
    a: object
    b: object
    m: int
    alpha: object = field(repr=False)
    beta: object = field(repr=False)

    @property
    def source(self) -> ILPoint:
        return self.arc.point(self.a)

    @property
    def target(self) -> ILPoint:
        return self.arc.point(self.b)

    def projection(self, t):
        va = self.arc.projection(self.m, self.a)
        vb = self.arc.projection(self.m, self.b)
        return (1 - t) * va + t * vb

    def parameter(self, t):
        t = self.arc.slope.num(Fraction(t))
        if self.a == self.b:
            return self.a
        return (self.projection(t) - self.beta) / self.alpha

    def __call__(self, t) -> ILPoint:
        return self.arc.point(self.parameter(t))

    def trace(self, ts) -> list[tuple]:
        """Rows (t, pi_m value, u) for CSV output."""
        return [(t, self.projection(self.arc.slope.num(Fraction(t))), self.parameter(t)) for t in ts]


def build_isotopy(arc: Arc, a=None, b=None, m: Optional[int] = None, tail_scan: int = 64) -> IsotopyPath:
    """Straight-line path in pi_m coordinates along the subarc [a, b] of ``arc``.

    m defaults to the smallest depth whose projection is one-to-one on [a, b]:
    no interior point has x_{-m-l} = c with l >= 1.  Raises FoldingObstruction
    when a non-degenerate [a, b] holds a certified folding point.
    """
    s = arc.slope
    a = arc.lo if a is None else s.num(a)
    b = arc.hi if b is None else s.num(b)
    if b < a:
        raise ValueError("need a <= b")
    if not (arc.contains(a) and arc.contains(b)):
        raise ValueError("[a, b] outside the arc")
    fps = arc.folding_points()
    if fps and a < b:
        # folding points of these slopes are endpoints, so "inside" means anywhere on [a, b]
        for z in fps:
            if a <= z <= b:
                raise FoldingObstruction(f"folding point at u = {to_canonical(z)}", arc.point(z))
    P = arc.base
    if a == b:
        return IsotopyPath(arc, a, b, 0 if m is None else m, s.num(1), s.num(0))
    i_min = _first_interior_fold(s, a, b, P + 1)
    lowest = max(0, P - i_min)
    tails = _tail_root_depths(arc, a, b, tail_scan) if arc.tail != "L" else []
    if tails:
        if len(tails) == tail_scan:
            raise FoldingObstruction("tail folds accumulate inside the arc")
        lowest = max(lowest, max(tails))
    if m is None:
        m = lowest
    elif m < lowest:
        raise ValueError(f"pi_{m} is not one-to-one on the arc; need m >= {lowest}")
    va, vb = arc.projection(m, a), arc.projection(m, b)
    alpha = (vb - va) / (b - a)
    beta = va - alpha * a
    return IsotopyPath(arc, a, b, m, alpha, beta)


def shift_isotopy(s: Slope, p: int, n: int, R: int, v) -> IsotopyPath:
    """Path from x to sigma^R(x) along the 0-composant, x on the depth-(n+R) arc at u = v."""
    arc = FundamentalArc(s, p, n + R)
    return build_isotopy(arc, v, s.num(v) * s.value**R)


def isotopy_injectivity(paths: Sequence[IsotopyPath], ts: Sequence) -> CheckReport:
    """At each t the paths give pairwise distinct points; on one arc the order of the
    starting parameters is preserved."""
    for t in ts:
        us = [(p.a, p.parameter(t), p.arc) for p in paths]
        for i in range(len(us)):
            for j in range(i + 1, len(us)):
                (ai, ui, arc_i), (aj, uj, arc_j) = us[i], us[j]
                if arc_i != arc_j:
                    continue
                if ai == aj:
                    continue
                if ui == uj or (ai < aj) != (ui < uj):
                    return CheckReport(False, f"paths {i} and {j} meet or cross at t = {t}")
    return CheckReport(True, f"{len(paths)} paths x {len(ts)} times")


def common_depth_family(arc: Arc, starts: Sequence, target: Callable) -> list[IsotopyPath]:
    """Paths [u, target(u)] on ``arc`` sharing one depth m valid on the hull of all of them."""
    lo = min(starts)
    hi = max(target(u) for u in starts)
    hull = build_isotopy(arc, lo, hi)
    return [build_isotopy(arc, u, target(u), m=hull.m) for u in starts]


def orientation_check(points: Sequence[ILPoint], h: Callable[[ILPoint], ILPoint]) -> CheckReport:
    """``points`` in increasing order along the 0-composant must stay increasing under h."""
    pts = list(points)
    for i in range(len(pts) - 1):
        if not c0_precedes(pts[i], pts[i + 1]):
            return CheckReport(False, f"input not increasing at {i}")
    imgs = [h(x) for x in pts]
    for i in range(len(imgs) - 1):
        if not c0_precedes(imgs[i], imgs[i + 1]):
            return CheckReport(False, f"order reversed between {i} and {i + 1}")
    return CheckReport(True, f"{len(pts)} points")


def connecting_arc_check(x: ILPoint, hx: ILPoint) -> CheckReport:
    """The arc of the 0-composant between x and h(x) is a point or holds no folding point."""
    s = x.slope
    if metric_dist(x, hx) == (0, 0):
        return CheckReport(True, "single point")
    d = max(x.depth, hx.depth) + 1
    a, b = sorted([x.coord(d), hx.coord(d)])
    arc = Arc(s, d, a, b, "L")
    fps = arc.folding_points()
    if fps is None:
        return CheckReport(True, "omega(c) not certified; nothing to check")
    inner = [z for z in fps if a <= z <= b]
    return CheckReport(not inner, f"{len(inner)} folding points on the arc")
