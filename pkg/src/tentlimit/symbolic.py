"""Itineraries, kneading sequences and two-sided limit words.

Symbols are ``0`` (left of c), ``C`` (exactly c) and ``1`` (right of c).
Words are ordered by the parity-lexicographic order: at the first difference
compare with ``0 < C < 1`` when the common prefix holds an even number of
``1`` symbols, and with the reversed order otherwise.  For the tent family
this order makes x -> itinerary(x) nondecreasing and s -> kneading(s)
nondecreasing.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .numbers import AmbiguousComparison
from .tentmap import HALF, Slope, tent

SYMBOLS = "0C1"
_RANK = {"0": 0, "C": 1, "1": 2}


class InadmissibleWord(ValueError):
    """A prefix that is not shift-maximal, so no kneading sequence starts with it."""


class PrefixUnresolvable(ValueError):
    """No slope in (sqrt 2, 2] matches the prefix at the requested precision."""


# -- tails -------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodicTail:
    word: str

    def symbols(self):
        while True:
            yield from self.word

    def to_json(self) -> dict:
        return {"kind": "periodic", "word": self.word}


@dataclass(frozen=True)
class LadderTail:
    """Blocks ``sep + sym*k`` for k = start, start+step, ...

    ``LadderTail("0", "1", 1, 1)`` after the head ``10`` spells
    1 0 0 1 0 1^2 0 1^3 0 1^4 ...
    """

    sep: str = "0"
    sym: str = "1"
    start: int = 1
    step: int = 1

    def symbols(self):
        k = self.start
        while True:
            yield from self.sep
            yield from self.sym * k
            k += self.step

    def to_json(self) -> dict:
        return {
            "kind": "pattern",
            "name": "ladder",
            "params": {"sep": self.sep, "sym": self.sym, "start": self.start, "step": self.step},
        }


def _tail_from_json(d: Optional[dict]):
    if d is None:
        return None
    if d["kind"] == "periodic":
        return PeriodicTail(d["word"])
    if d["kind"] == "pattern" and d["name"] == "ladder":
        return LadderTail(**d["params"])
    raise ValueError(f"unknown tail descriptor {d!r}")


@dataclass(frozen=True)
class SymbolWord:
    """A finite word over {0, C, 1}, optionally continued by a structured tail.

    ``ambiguous`` lists positions where a tracked-float computation could not
    decide the symbol; those positions carry ``C`` and must not be trusted.
    """

    head: str
    tail: Optional[object] = None
    ambiguous: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        bad = set(self.head) - set(SYMBOLS)
        if bad:
            raise ValueError(f"symbols {sorted(bad)} not in {{0, C, 1}}")

    @property
    def infinite(self) -> bool:
        return self.tail is not None

    def prefix(self, n: int) -> str:
        if n <= len(self.head) or self.tail is None:
            return self.head[:n]
        out = [self.head]
        need = n - len(self.head)
        for ch in self.tail.symbols():
            if need == 0:
                break
            out.append(ch)
            need -= 1
        return "".join(out)

    def __getitem__(self, i: int) -> str:
        return self.prefix(i + 1)[i]

    def __len__(self):
        if self.tail is not None:
            raise TypeError("infinite word has no length")
        return len(self.head)

    def __str__(self):
        if self.tail is None:
            return self.head
        if isinstance(self.tail, PeriodicTail):
            return f"{self.head}({self.tail.word})"
        return self.head + "..."

    def to_json(self) -> dict:
        d = {"symbols": self.head, "tail": None if self.tail is None else self.tail.to_json()}
        if self.ambiguous:
            d["ambiguous"] = sorted(self.ambiguous)
        return d

    @classmethod
    def from_json(cls, d) -> SymbolWord:
        if isinstance(d, str):
            d = json.loads(d)
        return cls(d["symbols"], _tail_from_json(d.get("tail")), frozenset(d.get("ambiguous", ())))

    @classmethod
    def parse(cls, text: str) -> SymbolWord:
        """``10C``, ``1(0)`` (periodic tail) or ``nu`` for the ladder word 10 01 011 0111 ..."""
        t = text.strip()
        if t == "nu":
            return ladder_nu()
        m = re.fullmatch(r"([01C]*)\(([01C]+)\)", t)
        if m:
            return cls(m.group(1), PeriodicTail(m.group(2)))
        return cls(t)


def ladder_nu() -> SymbolWord:
    """The ladder word 1 0 0 1 0 1^2 0 1^3 0 1^4 ..."""
    return SymbolWord("10", LadderTail("0", "1", 1, 1))


# -- order -------------------------------------------------------------------


def kneading_compare(u: str, v: str) -> int:
    """Parity-lexicographic comparison on the common length; 0 if one is a prefix of the other."""
    ones = 0
    for a, b in zip(u, v):
        if a != b:
            d = _RANK[a] - _RANK[b]
            d = 1 if d > 0 else -1
            return -d if ones & 1 else d
        if a == "1":
            ones += 1
    return 0


def is_shift_maximal(word: str) -> bool:
    """sigma^n(word) <= word for every n, compared on the overlap."""
    return all(kneading_compare(word[n:], word) <= 0 for n in range(1, len(word)))


def resolve_c(word: str) -> tuple[str, str]:
    """Split a word containing C into its two one-sided readings, (smaller, larger).

    With w the part before the first C, the readings are (w0)^oo and (w1)^oo
    truncated to len(word).
    """
    k = word.find("C")
    if k < 0:
        return word, word
    n = len(word)
    a = ((word[:k] + "0") * (n // (k + 1) + 1))[:n]
    b = ((word[:k] + "1") * (n // (k + 1) + 1))[:n]
    return (a, b) if kneading_compare(a, b) <= 0 else (b, a)


# -- itineraries -------------------------------------------------------------


def _symbol(s: Slope, x):
    if x < HALF:
        return "0"
    if x > HALF:
        return "1"
    return "C"


def itinerary(s: Slope, x, n: int) -> SymbolWord:
    """Symbols of x, T(x), ..., T^{n-1}(x)."""
    x = s.num(x)
    if s.exact:
        outside = x < 0 or x > s.c1
    else:
        slack = x.err + s.c1.err
        outside = x.value < -slack or x.value > s.c1.value + slack
    if outside:
        raise ValueError("x outside [0, s/2]")
    out = []
    flagged = set()
    for i in range(n):
        try:
            out.append(_symbol(s, x))
        except AmbiguousComparison:
            out.append("C")
            flagged.add(i)
        x = tent(s, x)
    return SymbolWord("".join(out), ambiguous=frozenset(flagged))


def kneading_sequence(s: Slope, n: int) -> SymbolWord:
    """Itinerary of c_1 = s/2."""
    return itinerary(s, s.c1, n)


def _kneading_exact(sv: Fraction, n: int) -> str:
    """Kneading prefix for a rational slope value without Slope validation."""
    out = []
    x = sv / 2
    for _ in range(n):
        if x < HALF:
            out.append("0")
        elif x > HALF:
            out.append("1")
        else:
            out.append("C")
        x = sv * x if x <= HALF else sv * (1 - x)
    return "".join(out)


@dataclass(frozen=True)
class SlopeFit:
    """Result of :func:`slope_from_kneading`: a tracked slope plus the bracketing interval."""

    slope: Slope
    lower: Fraction
    upper: Fraction
    estimate: Fraction
    length: int

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower


_SQRT2_UP = Fraction(math.sqrt(2))  # the double nearest sqrt 2 lies above it


def _snap(x: Fraction, bits: int) -> Fraction:
    return Fraction(round(x * (1 << bits)), 1 << bits)


def slope_from_kneading(prefix, eps: float = 1e-9, max_length: Optional[int] = None) -> SlopeFit:
    """Bisection on s in (sqrt 2, 2] for the slopes whose kneading sequence starts with ``prefix``.

    Candidate slopes are dyadic rationals, so every kneading comparison is
    exact.  The returned interval [lower, upper] brackets the set of matching
    slopes to within ``eps`` on each side; the estimate is its midpoint.
    ``prefix`` with a tail is treated as an infinite target, compared up to an
    adaptive length that resolves slopes to ``eps``.
    """
    if isinstance(prefix, str):
        prefix = SymbolWord.parse(prefix)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if prefix.infinite:
        n = max_length or (math.ceil(math.log(4.0 / eps) / math.log(math.sqrt(2))) + 16)
    else:
        n = len(prefix.head)
    target = prefix.prefix(n)
    if not target or not is_shift_maximal(target):
        raise InadmissibleWord(f"{target!r} is not shift-maximal")
    bits = max(8, math.ceil(-math.log2(eps)) + 4)

    def cmp(sv: Fraction) -> int:
        return kneading_compare(_kneading_exact(sv, n), target)

    lo0, hi0 = _SQRT2_UP, Fraction(2)
    c_lo, c_hi = cmp(lo0), cmp(hi0)
    if c_hi < 0 or c_lo > 0:
        raise PrefixUnresolvable(f"{target!r} outside the kneading range of (sqrt2, 2]")

    seen_match = c_lo == 0 or c_hi == 0

    def boundary(pred) -> tuple[Fraction, Fraction]:
        # pred false at lo, true at hi; shrink to width < eps
        nonlocal seen_match
        lo, hi = lo0, hi0
        if pred(cmp(lo)):
            return lo, lo
        while hi - lo > Fraction(eps) / 2:
            mid = _snap((lo + hi) / 2, bits)
            if mid <= lo or mid >= hi:
                mid = (lo + hi) / 2
            r = cmp(mid)
            if r == 0:
                seen_match = True
            if pred(r):
                hi = mid
            else:
                lo = mid
        return lo, hi

    a_lo, a_hi = boundary(lambda r: r >= 0)
    b_lo, b_hi = boundary(lambda r: r > 0)
    if c_hi <= 0:
        b_lo = b_hi = hi0
    lower, upper = a_lo, b_hi
    if not seen_match and not prefix.infinite and "C" not in target and b_lo - a_hi > eps:
        raise PrefixUnresolvable(f"no slope realizes {target!r}")
    est = (lower + upper) / 2
    half = float(upper - lower) / 2
    fit_slope = Slope.tracked(float(est), half)
    return SlopeFit(fit_slope, lower, upper, est, n)


# -- two-sided words ---------------------------------------------------------


@dataclass(frozen=True)
class TwoSidedWord:
    """A bi-infinite word: ``left``-periodic past, finite ``core``, ``right``-periodic future.

    ``dot`` is the core index of position 0, so ``shift(k)`` only moves it.
    A finite window (as produced by :func:`two_sided_limit_set`) uses empty
    periods and ``dot = len(left window)``.
    """

    left: str
    core: str
    right: str
    dot: int = 0

    def symbol(self, i: int) -> str:
        j = self.dot + i
        if 0 <= j < len(self.core):
            return self.core[j]
        if j < 0:
            if not self.left:
                raise IndexError(i)
            return self.left[j % len(self.left)]
        if not self.right:
            raise IndexError(i)
        return self.right[(j - len(self.core)) % len(self.right)]

    def shift(self, k: int) -> TwoSidedWord:
        return TwoSidedWord(self.left, self.core, self.right, self.dot + k)

    def centered(self, radius: int) -> tuple[str, str]:
        left = "".join(self.symbol(i) for i in range(-radius, 0))
        right = "".join(self.symbol(i) for i in range(0, radius))
        return left, right

    def __str__(self):
        if not self.left and not self.right:
            return f"{self.core[: self.dot]}.{self.core[self.dot :]}"
        return f"({self.left})^oo {self.core[: self.dot]}.{self.core[self.dot :]} ({self.right})^oo"


def window(left: str, right: str) -> TwoSidedWord:
    return TwoSidedWord("", left + right, "", len(left))


def _encode(symbols: str) -> np.ndarray:
    return np.frombuffer(symbols.encode(), dtype=np.uint8).copy()


_CODE = np.zeros(256, dtype=np.int8)
_CODE[ord("0")] = 0
_CODE[ord("C")] = 1
_CODE[ord("1")] = 2
_DECODE = "0C1"


def _decode(code: int, width: int) -> str:
    out = []
    for _ in range(width):
        code, r = divmod(code, 3)
        out.append(_DECODE[r])
    return "".join(reversed(out))


def two_sided_limit_set(
    nu: SymbolWord, radius: int, prefix_length: int = 5000, tail_fraction: float = 0.5
) -> set[tuple[str, str]]:
    """Centered windows (left, right) of radius ``radius`` recurring in nu.

    A window recurs when it occurs centered at some position in the last
    ``1 - tail_fraction`` of the length-``prefix_length`` prefix; that is the
    finite stand-in for "occurs infinitely often", i.e. for being a window of
    a limit point of sigma^j(nu).
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    text = nu.prefix(prefix_length)
    codes = _CODE[_encode(text)]
    start = int(len(text) * tail_fraction)
    found = _kernels.window_codes(codes, start, radius)
    out = set()
    for code in found.tolist():
        w = _decode(int(code), 2 * radius)
        out.add((w[:radius], w[radius:]))
    return out


def centered_factors(words: Iterable[TwoSidedWord], radius: int, shifts: range) -> set[tuple[str, str]]:
    out = set()
    for w in words:
        for j in shifts:
            out.add(w.shift(j).centered(radius))
    return out


def ladder_limit_words() -> list[TwoSidedWord]:
    """1^oo.1^oo and 1^oo.01^oo (all shifts of the latter are taken by the caller)."""
    return [TwoSidedWord("1", "", "1", 0), TwoSidedWord("1", "0", "1", 0)]


def ladder_limit_factors(radius: int) -> set[tuple[str, str]]:
    """Centered windows of 1^oo.1^oo and of every sigma^j(1^oo.01^oo)."""
    return centered_factors(ladder_limit_words(), radius, range(-radius - 1, radius + 2))


def subwindows(windows: set[tuple[str, str]], radius: int) -> set[tuple[str, str]]:
    """Centered radius-``radius`` subwindows of a set of windows."""
    return {(l[len(l) - radius :], r[:radius]) for l, r in windows}
