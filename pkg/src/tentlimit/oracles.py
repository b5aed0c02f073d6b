"""Independent reference computations used to cross-check the main enumerators.

* :func:`forward_ppoints` composes u -> T^j(u) forward as exact affine pieces
  and reads off the roots of T^j(u) = c; it never touches the backward
  preimage tree.
* :func:`float_ppoints` does the same with a float grid scan + bisection.
* :func:`brute_link_symmetric` scans every contiguous window of a link
  sequence for palindromes.
"""

from __future__ import annotations

import bisect
import math

import numpy as np

from ._kernels import grid_roots
from .inverse_limit import projection_pieces
from .tentmap import Slope

INF = math.inf


def forward_ppoints(s: Slope, n: int, lo=None, hi=None) -> list[tuple]:
    """[(u, level)] on the fundamental arc of depth n, ordered by u, basepoint included."""
    lo = s.num(0) if lo is None else s.num(lo)
    hi = s.c if hi is None else s.num(hi)
    c = s.c
    found = {}
    pieces = projection_pieces(s, lo, hi, 0)
    for j in range(n + 1):
        if j:
            pieces = _advance(s, pieces)
        lvl = n - j
        for pc in pieces:
            va, vb = pc.va, pc.vb
            if min(va, vb) <= c <= max(va, vb) and va != vb:
                u = pc.inverse(c)
                found.setdefault(u, lvl)
    if lo == 0:
        found[s.num(0)] = INF
    return sorted(found.items(), key=lambda kv: kv[0])


def _advance(s: Slope, pieces):
    return [q for pc in pieces for q in projection_pieces_step(s, pc)]


def projection_pieces_step(s: Slope, pc):
    # one application of T to a single affine piece
    from .inverse_limit import Piece

    c = s.c
    va, vb = pc.va, pc.vb
    if (va < c < vb) or (vb < c < va):
        uc = pc.inverse(c)
        parts = [Piece(pc.ua, uc, pc.alpha, pc.beta), Piece(uc, pc.ub, pc.alpha, pc.beta)]
    else:
        parts = [pc]
    out = []
    for q in parts:
        if q.va <= c and q.vb <= c:
            out.append(Piece(q.ua, q.ub, s.value * q.alpha, s.value * q.beta))
        else:
            out.append(Piece(q.ua, q.ub, -s.value * q.alpha, s.value - s.value * q.beta))
    return out


def float_ppoints(s: float, n: int, grid: int = 1 << 14, tol: float = 1e-9) -> list[tuple]:
    """Float grid oracle: [(u, level)] on [0, 1/2]; roots closer than ``tol`` are merged
    keeping the smaller iterate count (the larger level)."""
    keys = [0.0]
    found: list[tuple] = [(0.0, INF)]
    for j in range(n + 1):
        roots = np.atleast_1d(grid_roots(float(s), j, 0.0, 0.5, grid))
        if j == 0:
            roots = np.array([0.5])
        fresh = []
        for u in roots:
            i = bisect.bisect_left(keys, u)
            near = [keys[k] for k in (i - 1, i) if 0 <= k < len(keys)]
            if u <= 0.0 or any(abs(u - v) <= tol for v in near):
                continue
            fresh.append((float(u), n - j))
        for u, l in fresh:
            bisect.insort(keys, u)
            found.append((u, l))
    found.sort()
    return found


def brute_link_symmetric(seq, center: int) -> tuple[int, int]:
    """Widest window [center - r, center + r] of ``seq`` that is a palindrome."""
    best = 0
    for r in range(0, len(seq)):
        a, b = center - r, center + r
        if a < 0 or b >= len(seq):
            break
        w = list(seq[a : b + 1])
        if w == w[::-1]:
            best = r
    return center - best, center + best


def palindrome_windows(seq) -> list[tuple[int, int]]:
    """Every (i, j) with seq[i..j] a palindrome, by reverse-and-compare."""
    out = []
    for i in range(len(seq)):
        for j in range(i, len(seq)):
            w = list(seq[i : j + 1])
            if w == w[::-1]:
                out.append((i, j))
    return out
