"""Natural chains, link sequences of arcs and p-link-symmetric subarcs.

Links are closed intervals of I that share endpoints with their neighbours.
This has the same nerve as the open links of K_s (adjacent links meet, others
do not) while keeping every endpoint exact.

A chain of depth p cuts I at every point of T^{-i}(c), i <= p + extra_depth.
``extra_depth = 0`` is the natural chain; a positive value subdivides each
natural link further along deeper preimages, which is what drives the mesh to
zero (the natural chain alone keeps 2 s^p max|I| roughly constant).
"""

from __future__ import annotations

import bisect
import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

from .inverse_limit import Arc, FundamentalArc, arc_pieces
from .numbers import exact_sorted, to_canonical
from .ppoints import CheckReport, PPoint, enumerate_ppoints
from ._kernels import refinement_assign, scaled_cut_levels
from .tentmap import RATIONAL, Slope, preimage_levels, tent


@dataclass(frozen=True)
class NaturalChain:
    """Depth-p chain: ``bounds = (0, cut_1, ..., cut_k, s/2)``; link i is [bounds[i-1], bounds[i]].

    Rational slopes also carry ``scaled = (q, int64 bounds * q)`` for the
    integer kernels; ``bounds`` is then materialized on first use.
    """

    slope: Slope
    p: int
    extra_depth: int = 0
    exact_bounds: Optional[tuple] = field(default=None, repr=False)
    scaled: Optional[tuple] = field(default=None, repr=False, compare=False)

    @cached_property
    def bounds(self) -> tuple:
        if self.exact_bounds is not None:
            return self.exact_bounds
        q, arr = self.scaled
        return tuple(Fraction(int(x), q) for x in arr)

    @property
    def cuts(self) -> tuple:
        return tuple(b for b in self.bounds[1:-1])

    @property
    def size(self) -> int:
        if self.scaled is not None:
            return len(self.scaled[1]) - 1
        return len(self.exact_bounds) - 1

    def link(self, i: int) -> tuple:
        """Endpoints of link i (1-based)."""
        if not 1 <= i <= self.size:
            raise IndexError(f"link {i} out of 1..{self.size}")
        return self.bounds[i - 1], self.bounds[i]

    def links(self) -> list[tuple]:
        return [self.link(i) for i in range(1, self.size + 1)]

    @cached_property
    def _fbounds(self) -> np.ndarray:
        return np.array([float(b) for b in self.bounds])

    def _bisect_right(self, v) -> int:
        # float guess, then exact correction
        b = self.bounds
        i = int(np.searchsorted(self._fbounds, float(v), side="right"))
        while i < len(b) and b[i] <= v:
            i += 1
        while i > 0 and b[i - 1] > v:
            i -= 1
        return i

    def _bisect_left(self, v) -> int:
        b = self.bounds
        i = int(np.searchsorted(self._fbounds, float(v), side="left"))
        while i < len(b) and b[i] < v:
            i += 1
        while i > 0 and b[i - 1] >= v:
            i -= 1
        return i

    def right_of(self, v) -> int:
        """Link entered when moving right from v."""
        return min(self._bisect_right(v), self.size)

    def left_of(self, v) -> int:
        """Link entered when moving left from v."""
        return max(self._bisect_left(v), 1)

    def locate(self, v) -> list[int]:
        """All links containing v (two when v is a cut)."""
        a, b = self.left_of(v), self.right_of(v)
        return [a] if a == b else [a, b]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["link", "left", "right"])
        for i, (a, b) in enumerate(self.links(), start=1):
            w.writerow([i, to_canonical(a), to_canonical(b)])
        return buf.getvalue()


def _rational_parts(s: Slope, depth: int) -> Optional[tuple]:
    """(a, b) with s = a/b when the integer kernels can hold depth ``depth`` in int64."""
    if s.policy != RATIONAL:
        return None
    a, b = s.value.numerator, s.value.denominator
    if 2 * a ** (depth + 2) * b * b >= 2**62:
        return None
    return a, b


def build_chain(s: Slope, p: int, extra_depth: int = 0, integer_kernels: bool = True) -> NaturalChain:
    """Cut I at every preimage of c up to depth p + extra_depth.

    When c_1 = s/2 or 0 is itself a cut, no zero-width end link is created.
    Rational slopes use the int64 kernels unless ``integer_kernels`` is off.
    """
    if p < 0 or extra_depth < 0:
        raise ValueError("p and extra_depth must be >= 0")
    depth = p + extra_depth
    parts = _rational_parts(s, depth) if integer_kernels else None
    if parts is not None:
        a, b = parts
        q, levels = scaled_cut_levels(a, b, depth)
        top = a ** (depth + 1)
        cuts = np.unique(np.concatenate(levels))
        cuts = cuts[(cuts > 0) & (cuts < top)]
        arr = np.concatenate([[0], cuts, [top]]).astype(np.int64)
        return NaturalChain(s, p, extra_depth, scaled=(q, arr))
    levels = preimage_levels(s, depth)
    cuts = set()
    for lv in levels:
        cuts.update(lv)
    zero, top = s.num(0), s.c1
    inner = exact_sorted(x for x in cuts if zero < x < top)
    return NaturalChain(s, p, extra_depth, (zero, *inner, top))


def mesh_schedule(p: int) -> int:
    """Extra subdivision depth used for the mesh-decay family."""
    return (p + 1) // 2


def link_diameters(chain: NaturalChain) -> list:
    return [b - a for a, b in chain.links()]


def max_link_width(chain: NaturalChain):
    if chain.scaled is not None:
        q, arr = chain.scaled
        return Fraction(int(np.diff(arr).max()), q)
    return max(link_diameters(chain))


def mesh_bound(chain: NaturalChain):
    """eps* = 2 s^p max_j |I_j|: every link of the chain has diameter < eps* in K_s
    for any eps > eps*."""
    s = chain.slope
    return 2 * s.value**chain.p * max_link_width(chain)


def check_chain_axioms(chain: NaturalChain) -> CheckReport:
    """Cover, closed-link nerve, and every preimage of c up to depth p a link endpoint."""
    s = chain.slope
    if chain.scaled is not None:
        a, b = s.value.numerator, s.value.denominator
        q, arr = chain.scaled
        depth = chain.p + chain.extra_depth
        if arr[0] != 0 or arr[-1] != a ** (depth + 1):
            return CheckReport(False, "links do not cover [0, s/2]")
        gaps = np.diff(arr)
        if (gaps <= 0).any():
            i = int(np.argmax(gaps <= 0))
            return CheckReport(False, f"link {i + 1} is degenerate or out of order")
        _, levels = scaled_cut_levels(a, b, depth)
        for lv in levels[: chain.p + 1]:
            missing = ~np.isin(lv, arr)
            if missing.any():
                x = Fraction(int(lv[np.argmax(missing)]), q)
                return CheckReport(False, f"cut {to_canonical(x)} is not a link endpoint")
        return CheckReport(True, f"{chain.size} links")
    b = chain.bounds
    if b[0] != 0 or b[-1] != s.c1:
        return CheckReport(False, "links do not cover [0, s/2]")
    for i in range(len(b) - 1):
        if not b[i] < b[i + 1]:
            return CheckReport(False, f"link {i + 1} is degenerate or out of order")
    # closed links [b_{i-1}, b_i]: neighbours share b_i, links two apart are separated by a full link
    ends = set(b)
    for lv in preimage_levels(s, chain.p):
        for x in lv:
            if x not in ends:
                return CheckReport(False, f"cut {to_canonical(x)} is not a link endpoint")
    return CheckReport(True, f"{chain.size} links")


def verify_refinement(fine: NaturalChain, coarse: NaturalChain) -> CheckReport:
    """For each fine link find the coarse link containing its T-image.

    ``data`` is the assignment tuple (fine index -> coarse index).
    """
    s = fine.slope
    if coarse.slope != s:
        return CheckReport(False, "different slopes")
    if fine.scaled is not None and coarse.scaled is not None:
        a, b = s.value.numerator, s.value.denominator
        qf, F = fine.scaled
        qc, C = coarse.scaled
        if qf % qc == 0:
            assign = refinement_assign(F, C * (qf // qc), a, b, qf)
            if (assign == 0).any():
                i = int(np.argmax(assign == 0)) + 1
                return CheckReport(False, f"T(link {i}) is not inside a coarse link", i)
            return CheckReport(True, f"{fine.size} -> {coarse.size}", tuple(int(j) for j in assign))
    c = s.c
    assign = []
    for i, (a, b) in enumerate(fine.links(), start=1):
        if a < c < b:
            return CheckReport(False, f"fine link {i} contains c in its interior")
        ta, tb = tent(s, a), tent(s, b)
        lo, hi = (ta, tb) if ta <= tb else (tb, ta)
        j = coarse.right_of(lo)
        ca, cb = coarse.link(j)
        if not (ca <= lo and hi <= cb):
            return CheckReport(False, f"T(link {i}) is not inside a coarse link", i)
        assign.append(j)
    return CheckReport(True, f"{fine.size} -> {coarse.size}", tuple(assign))


# -- link sequences ------------------------------------------------------------


@dataclass(frozen=True)
class LinkSequence:
    """Links visited by u -> pi_p(point(u)); ``spans[k]`` is the closed u-interval of visit k."""

    indices: tuple
    spans: tuple = ()
    arc: Optional[Arc] = field(default=None, compare=False, repr=False)
    chain: Optional[NaturalChain] = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.indices)

    def __getitem__(self, k):
        return self.indices[k]

    def visit_of(self, u) -> list[int]:
        """Visits whose u-span contains u (two when u is a crossing)."""
        lo = bisect.bisect_left([b for _, b in self.spans], u)
        out = []
        for k in range(max(lo - 1, 0), min(lo + 2, len(self.spans))):
            a, b = self.spans[k]
            if a <= u <= b:
                out.append(k)
        return out

    def to_json(self) -> list:
        return list(self.indices)


def link_sequence(arc: Arc, chain: NaturalChain) -> LinkSequence:
    """Visits of the exact piecewise-linear path u -> pi_p(x(u)) through the chain's links.

    A path that touches a cut and turns back stays in the same link.
    """
    if arc.p != chain.p or arc.slope != chain.slope:
        raise ValueError("arc and chain disagree on slope or p")
    if arc.lo == arc.hi:
        v = arc.projection(arc.p, arc.lo)
        return LinkSequence((chain.right_of(v),), ((arc.lo, arc.hi),), arc, chain)
    idx: list[int] = []
    spans: list[list] = []
    bounds = chain.bounds
    for pc in arc_pieces(arc, arc.p):
        va, vb = pc.va, pc.vb
        if va < vb:
            first, last, step = chain.right_of(va), chain.left_of(vb), 1
        else:
            first, last, step = chain.left_of(va), chain.right_of(vb), -1
        for k in range(first, last + step, step):
            a, b = bounds[k - 1], bounds[k]
            if step == 1:
                ea, eb = max(a, va), min(b, vb)
            else:
                ea, eb = min(b, va), max(a, vb)
            ua, ub = pc.inverse(ea), pc.inverse(eb)
            if idx and idx[-1] == k:
                spans[-1][1] = ub
            else:
                idx.append(k)
                spans.append([ua, ub])
    return LinkSequence(tuple(idx), tuple(tuple(sp) for sp in spans), arc, chain)


@dataclass(frozen=True)
class SymmetryResult:
    symmetric: bool
    center: object = None
    center_point: Optional[PPoint] = None


def _center_ppoint(seq: LinkSequence, k: int) -> Optional[PPoint]:
    if seq.arc is None:
        return None
    a, b = seq.spans[k]
    best = None
    for pp in enumerate_ppoints(seq.arc.subarc(a, b)):
        if best is None or pp.level > best.level:
            best = pp
    if best is None:
        return None
    return PPoint(best.u, best.level, seq.arc)


def link_symmetric(seq) -> SymmetryResult:
    """Palindrome test; the center is k/2 for k + 1 visits.

    Even visit counts give a half-integer center and no center p-point.
    """
    ind = tuple(seq.indices if isinstance(seq, LinkSequence) else seq)
    if not ind:
        raise ValueError("empty link sequence")
    if ind != ind[::-1]:
        return SymmetryResult(False)
    k = len(ind) - 1
    if k % 2:
        return SymmetryResult(True, Fraction(k, 2))
    cp = _center_ppoint(seq, k // 2) if isinstance(seq, LinkSequence) else None
    return SymmetryResult(True, k // 2, cp)


@dataclass(frozen=True)
class SymmetricArc:
    """Maximal link-symmetric subarc around a p-point."""

    lo: object
    hi: object
    window: tuple
    sequence: tuple
    center: Optional[PPoint]
    left_limited: bool
    right_limited: bool

    @property
    def boundary_limited(self) -> bool:
        return self.left_limited or self.right_limited

    @property
    def k(self) -> int:
        return len(self.sequence) - 1


def maximal_link_symmetric(
    arc: Arc, chain: NaturalChain, at: PPoint, seq: Optional[LinkSequence] = None
) -> SymmetricArc:
    """Extend symmetrically outward from the visit containing ``at``.

    A p-point at a crossing between two visits gives an even-length window
    (centered between them).  ``left_limited``/``right_limited`` flag windows
    stopped by the end of ``arc`` rather than by a mismatch.
    """
    if seq is None:
        seq = link_sequence(arc, chain)
    vs = seq.visit_of(at.u)
    if not vs:
        raise ValueError("p-point not on the arc")
    i, j = (vs[0], vs[0]) if len(vs) == 1 else (vs[0], vs[1])
    if i != j and seq[i] != seq[j]:
        i = j = vs[0]
    ind = seq.indices
    while i > 0 and j < len(ind) - 1 and ind[i - 1] == ind[j + 1]:
        i -= 1
        j += 1
    left = i == 0
    right = j == len(ind) - 1
    lo, hi = seq.spans[i][0], seq.spans[j][1]
    center = None
    if (j - i) % 2 == 0:
        center = _center_ppoint(seq, (i + j) // 2)
    return SymmetricArc(lo, hi, (i, j), ind[i : j + 1], center, left, right)


def salient_center_check(s: Slope, p: int, l: int, n: Optional[int] = None, max_n: int = 16) -> CheckReport:
    """Is s_l the center of its maximal p-link-symmetric arc?

    Grows the universe arc [0-bar, s_n] until the window is not cut off on the
    right by s_n.  The left end 0-bar is an endpoint of K_s, so a window
    reaching it cannot be extended in K_s either.
    """
    chain = build_chain(s, p)
    n = l + 2 if n is None else n
    while True:
        arc = FundamentalArc(s, p, n)
        u = s.c / s.value ** (n - l)
        res = maximal_link_symmetric(arc, chain, PPoint(u, l, arc))
        if not res.right_limited or n >= max_n:
            break
        n += 1
    if res.right_limited:
        return CheckReport(False, f"window still limited by s_{n}", res)
    ok = res.center is not None and res.center.u == u and res.center.level == l
    return CheckReport(ok, f"n={n} window={res.window} k={res.k}", res)


# -- SVG -----------------------------------------------------------------------


def chains_svg(chains: list[NaturalChain], width: int = 800, band: int = 28, label_max: int = 16) -> str:
    """One horizontal band per chain, one rectangle per link; cuts labelled when few."""
    if not chains:
        raise ValueError("no chains")
    top = float(chains[0].slope.c1)
    height = band * len(chains) + 20
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + 20}" height="{height}" '
        f'viewBox="0 0 {width + 20} {height}">'
    ]
    for row, ch in enumerate(chains):
        y = 10 + row * band
        for i, (a, b) in enumerate(ch.links(), start=1):
            x0 = 10 + width * float(a) / top
            x1 = 10 + width * float(b) / top
            fill = "#dde6f0" if i % 2 else "#b8c9dd"
            out.append(
                f'<rect x="{x0:.3f}" y="{y}" width="{x1 - x0:.3f}" height="{band - 10}" '
                f'fill="{fill}" stroke="#345" stroke-width="0.5"/>'
            )
        out.append(f'<text x="12" y="{y + band - 13}" font-size="9">p={ch.p}</text>')
        if ch.size - 1 <= label_max:
            for cut in ch.cuts:
                x = 10 + width * float(cut) / top
                out.append(
                    f'<text x="{x:.3f}" y="{y + band - 1}" font-size="7" '
                    f'text-anchor="middle">{to_canonical(cut)}</text>'
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"
