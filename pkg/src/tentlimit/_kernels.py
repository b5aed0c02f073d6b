"""Float hot loops, compiled with numba when available.

Set ``TENTLIMIT_DISABLE_NUMBA=1`` (or numba's own ``NUMBA_DISABLE_JIT=1``) to
force the pure-numpy path.  Both paths are importable explicitly as
``*_numba`` / ``*_numpy`` so tests and the benchmark can compare them.

The float kernels back the oracles and diagnostics only.  The int64 kernels
(``scaled_cut_levels``, ``refinement_assign``) are exact: for a rational
slope a/b every chain endpoint up to the given depth is an integer multiple
of 1/q.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("TENTLIMIT_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised via env flag in CI
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


BISECT_STEPS = 64


def _tent_iter_numpy(s, x, j):
    for _ in range(j):
        x = np.minimum(s * x, s * (1.0 - x))
    return x


def grid_roots_numpy(s, j, lo, hi, grid):
    """Crossing roots of T^j(u) = 1/2 on [lo, hi] by grid scan + bisection."""
    u = np.linspace(lo, hi, grid + 1)
    g = _tent_iter_numpy(s, u.copy(), j) - 0.5
    exact = u[g == 0.0]
    idx = np.nonzero((g[:-1] * g[1:]) < 0.0)[0]
    a = u[idx].copy()
    b = u[idx + 1].copy()
    ga = g[idx]
    for _ in range(BISECT_STEPS):
        m = 0.5 * (a + b)
        gm = _tent_iter_numpy(s, m.copy(), j) - 0.5
        same = np.sign(gm) == np.sign(ga)
        a = np.where(same, m, a)
        ga = np.where(same, gm, ga)
        b = np.where(same, b, m)
    return np.sort(np.concatenate([exact, 0.5 * (a + b)]))


@njit(cache=True)
def _tent_iter_scalar(s, x, j):
    for _ in range(j):
        y = s * x
        z = s * (1.0 - x)
        x = y if y < z else z
    return x


@njit(cache=True)
def grid_roots_numba(s, j, lo, hi, grid):
    out = np.empty(grid + 1, dtype=np.float64)
    count = 0
    h = (hi - lo) / grid
    prev_u = lo
    prev_g = _tent_iter_scalar(s, lo, j) - 0.5
    if prev_g == 0.0:
        out[count] = lo
        count += 1
    for i in range(1, grid + 1):
        u = lo + i * h if i < grid else hi
        g = _tent_iter_scalar(s, u, j) - 0.5
        if g == 0.0:
            out[count] = u
            count += 1
        elif prev_g * g < 0.0:
            a = prev_u
            b = u
            ga = prev_g
            for _ in range(BISECT_STEPS):
                m = 0.5 * (a + b)
                gm = _tent_iter_scalar(s, m, j) - 0.5
                if (gm > 0.0) == (ga > 0.0) and gm != 0.0:
                    a = m
                    ga = gm
                else:
                    b = m
            out[count] = 0.5 * (a + b)
            count += 1
        prev_u = u
        prev_g = g
    return np.sort(out[:count])


def orbit_histogram_numpy(s, n, bins, burn):
    x = 0.5
    vals = np.empty(n)
    for _ in range(burn):
        x = min(s * x, s * (1.0 - x))
    for i in range(n):
        x = min(s * x, s * (1.0 - x))
        vals[i] = x
    lo = s * (1.0 - s / 2.0)
    hi = s / 2.0
    counts, _ = np.histogram(vals, bins=bins, range=(lo, hi))
    return counts


@njit(cache=True)
def orbit_histogram_numba(s, n, bins, burn):
    counts = np.zeros(bins, dtype=np.int64)
    lo = s * (1.0 - s / 2.0)
    hi = s / 2.0
    w = (hi - lo) / bins
    x = 0.5
    for _ in range(burn):
        y = s * x
        z = s * (1.0 - x)
        x = y if y < z else z
    for _ in range(n):
        y = s * x
        z = s * (1.0 - x)
        x = y if y < z else z
        k = int((x - lo) / w)
        if k >= bins:
            k = bins - 1
        if k >= 0:
            counts[k] += 1
    return counts


def window_codes_numpy(symbols, start, radius):
    """Base-3 codes of the length-2r windows centered at positions >= start.

    The window at position j covers symbols[j-r : j+r]; the dot sits before
    symbols[j].
    """
    width = 2 * radius
    n = symbols.shape[0]
    first = max(start, radius)
    last = n - radius
    if last < first:
        return np.empty(0, dtype=np.int64)
    view = np.lib.stride_tricks.sliding_window_view(symbols.astype(np.int64), width)
    view = view[first - radius : last - radius + 1]
    weights = 3 ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return np.unique(view @ weights)


@njit(cache=True)
def _window_codes_all(symbols, start, radius):
    n = symbols.shape[0]
    first = max(start, radius)
    last = n - radius
    if last < first:
        return np.empty(0, dtype=np.int64)
    out = np.empty(last - first + 1, dtype=np.int64)
    for j in range(first, last + 1):
        code = 0
        for t in range(j - radius, j + radius):
            code = code * 3 + symbols[t]
        out[j - first] = code
    return out


def window_codes_numba(symbols, start, radius):
    return np.unique(_window_codes_all(symbols.astype(np.int64), start, radius))


def refinement_assign_numpy(fine, coarse, a, b, q):
    """Coarse link (1-based) holding T(fine link i), or 0 where none does.

    All bounds are integers in units of 1/q with q even; T(x) = x*a/b or
    (q - x)*a/b is exact in these units.
    """
    half = q // 2
    lo, hi = fine[:-1], fine[1:]
    bad = (lo < half) & (half < hi)
    ta = np.where(lo <= half, lo * a // b, (q - lo) * a // b)
    tb = np.where(hi <= half, hi * a // b, (q - hi) * a // b)
    tlo = np.minimum(ta, tb)
    thi = np.maximum(ta, tb)
    j = np.minimum(np.searchsorted(coarse, tlo, side="right"), coarse.shape[0] - 1)
    ok = (coarse[j - 1] <= tlo) & (thi <= coarse[j]) & ~bad
    return np.where(ok, j, 0).astype(np.int64)


@njit(cache=True)
def refinement_assign_numba(fine, coarse, a, b, q):
    half = q // 2
    n = fine.shape[0] - 1
    m = coarse.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        lo = fine[i]
        hi = fine[i + 1]
        if lo < half and half < hi:
            continue
        ta = lo * a // b if lo <= half else (q - lo) * a // b
        tb = hi * a // b if hi <= half else (q - hi) * a // b
        tlo = ta if ta < tb else tb
        thi = tb if ta < tb else ta
        j = np.searchsorted(coarse, tlo, side="right")
        if j > m - 1:
            j = m - 1
        if coarse[j - 1] <= tlo and thi <= coarse[j]:
            out[i] = j
    return out


def scaled_cut_levels(a, b, depth):
    """T^{-j}(c) for j <= depth as int64 arrays in units of 1/q, q = 2 a^depth b.

    Slope s = a/b.  Returns (q, levels).  Requires q*a < 2**62.
    """
    q = 2 * a**depth * b
    top = a ** (depth + 1)
    levels = [np.array([q // 2], dtype=np.int64)]
    for _ in range(depth):
        y = levels[-1]
        left = y * b // a
        right = q - left
        right = right[right <= top]
        levels.append(np.unique(np.concatenate([left, right])))
    return q, levels


if NUMBA_AVAILABLE:
    grid_roots = grid_roots_numba
    orbit_histogram = orbit_histogram_numba
    window_codes = window_codes_numba
    refinement_assign = refinement_assign_numba
else:
    grid_roots = grid_roots_numpy
    orbit_histogram = orbit_histogram_numpy
    window_codes = window_codes_numpy
    refinement_assign = refinement_assign_numpy
