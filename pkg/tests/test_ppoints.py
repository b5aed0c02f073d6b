from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tentlimit.inverse_limit import Arc, FundamentalArc, ILPoint
from tentlimit.oracles import float_ppoints, forward_ppoints
from tentlimit.ppoints import (
    INF,
    c0_folding_pattern,
    enumerate_ppoints,
    level_shift_check,
    p_independence,
    p_level,
    salient_dominance,
    salient_point,
    salient_positions,
    salient_reindex_check,
    level_char,
)
from tentlimit.tentmap import Slope

# frozen from the forward-composition oracle
FROZEN = {
    ("2", 3): "∞01020103",
    ("7/4", 3): "∞01020103",
    ("golden", 3): "∞0102013",
    ("golden", 5): "∞01020131020402013105",
}


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_patterns(key):
    spec, n = key
    assert c0_folding_pattern(Slope.parse(spec), n).level_string() == FROZEN[key]


def test_depth_one_levels(s2):
    fp = c0_folding_pattern(s2, 1)
    assert fp.levels == (INF, 0, 1)
    assert fp.us == (0, Fraction(1, 4), Fraction(1, 2))


def test_s2_count(s2):
    for n in range(1, 9):
        assert len(enumerate_ppoints(FundamentalArc(s2, 0, n))) == 2**n + 1


def test_golden_count_below_s2(golden):
    # c is periodic, so several preimage branches coincide
    assert len(enumerate_ppoints(FundamentalArc(golden, 0, 6))) < 2**6 + 1


@pytest.mark.parametrize("n", [1, 4, 7, 9])
def test_matches_forward_oracle(slope, n):
    pts = enumerate_ppoints(FundamentalArc(slope, 0, n))
    assert [(pp.u, pp.level) for pp in pts] == forward_ppoints(slope, n)


@pytest.mark.parametrize("spec", ["2", "7/4"])
def test_matches_float_oracle(spec):
    s = Slope.parse(spec)
    pts = enumerate_ppoints(FundamentalArc(s, 0, 6))
    approx = float_ppoints(float(s.value), 6)
    assert [pp.level for pp in pts] == [l for _, l in approx]
    assert all(abs(float(pp.u) - u) < 1e-8 for pp, (u, _) in zip(pts, approx))


def test_level_chars():
    assert level_char(35) == "z" and level_char(36) == "[36]" and level_char(INF) == "∞"


@given(st.integers(1, 6), st.integers(0, 3))
def test_level_matches_coordinates(n, p):
    s = Slope.parse("golden")
    for pp in enumerate_ppoints(FundamentalArc(s, p, n)):
        assert p_level(pp.point(), p) == pp.level


def test_non_ppoint_level(s2):
    x = FundamentalArc(s2, 0, 3).point(Fraction(1, 3))
    assert p_level(x, 0) is None


def test_tail_level_is_solved(golden):
    # the 3-cycle tail visits c forever
    c, c1, c2 = golden.c, golden.c1, golden.c2
    x = ILPoint.periodic(golden, (c1, c, c2, c1), 3)
    assert p_level(x, 0) == INF


@given(st.integers(1, 5), st.integers(1, 3), st.sampled_from(["2", "golden", "7/4"]))
def test_level_shift(n, R, spec):
    assert level_shift_check(FundamentalArc(Slope.parse(spec), 1, n), R)


@pytest.mark.parametrize("n", range(1, 9))
def test_salient_laws(slope, n):
    x = salient_point(slope, 1, n)
    assert p_level(x, 1) == n
    assert salient_dominance(FundamentalArc(slope, 1, n))
    assert salient_reindex_check(slope, 1, 0, n)


def test_salient_positions(golden):
    fp = c0_folding_pattern(golden, 5)
    idx = salient_positions(fp)
    assert [fp.levels[i] for i in idx] == [0, 1, 2, 3, 4, 5]


def test_p_independence(slope):
    assert p_independence(slope, 0, 3, 6)


def test_tail_arc_levels(golden):
    arc = Arc(golden, 2, golden.c1 - Fraction(1, 100), golden.c1, "RLR")
    pts = enumerate_ppoints(arc, max_level=8)
    assert pts[-1].u == golden.c1
    # the cycle endpoint sees c every third step: infinite level, capped in the enumeration
    assert p_level(pts[-1].point(), 0) == INF
    assert 8 - 3 < pts[-1].level <= 8
    for pp in pts[:-1]:
        assert pp.level == p_level(pp.point(), 0)
