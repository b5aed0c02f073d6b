import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tentlimit.folding import (
    FOLDING,
    NOT_FOLDING,
    UNDECIDED,
    FoldingObstruction,
    build_isotopy,
    certified_folding_points,
    common_depth_family,
    connecting_arc_check,
    folding_test_omega,
    folding_test_ppoints,
    isotopy_injectivity,
    level_cap,
    orientation_check,
    shift_isotopy,
    sigma_cycle_check,
)
from tentlimit.inverse_limit import Arc, FundamentalArc, ILPoint, metric_dist, shift
from tentlimit.ppoints import enumerate_ppoints
from tentlimit.tentmap import Slope

F = Fraction


def test_golden_folding_points_cycle(golden):
    pts = certified_folding_points(golden)
    assert len(pts) == 3
    assert sigma_cycle_check(pts)
    for x in pts:
        v = folding_test_omega(x)
        assert v.verdict == FOLDING and v.certified


def test_s2_zero_is_folding(s2):
    v = folding_test_omega(ILPoint.zero(s2))
    assert v.verdict == FOLDING and v.certified


def test_quarter_coordinate_not_folding(golden):
    v = folding_test_omega(ILPoint(golden, (F(1, 4),), "L"))
    assert v.verdict == NOT_FOLDING and v.certified
    assert v.witness == (0, F(1, 4))
    deep = folding_test_omega(FundamentalArc(golden, 0, 3).point(F(1, 4)))
    assert deep.verdict == NOT_FOLDING and deep.certified


def test_no_certified_cycle_is_undecided_or_negative():
    s = Slope.parse("7/4")
    assert certified_folding_points(s) is None
    v = folding_test_omega(FundamentalArc(s, 0, 3).point(F(1, 5)))
    assert v.verdict in (NOT_FOLDING, UNDECIDED) and not v.certified


def test_unspecified_tail_is_undecided(golden):
    c, c1, c2 = golden.c, golden.c1, golden.c2
    v = folding_test_omega(ILPoint(golden, (c1, c, c2), None))
    assert v.verdict == UNDECIDED


def test_verdict_json(golden):
    v = folding_test_omega(certified_folding_points(golden)[0])
    d = json.loads(v.dumps())
    assert d["verdict"] == "folding" and d["certified"] is True


def test_witnesses_for_cycle_points(golden):
    for x in certified_folding_points(golden):
        for K in (1, 5, 10):
            v = folding_test_ppoints(x, 0, K, F(1, 64))
            pp, d = v.witness
            assert pp.level >= K and d <= F(1, 64)


def test_third_coordinate_excluded(s2):
    x = FundamentalArc(s2, 0, 3).point(F(1, 3))
    v = folding_test_ppoints(x, 0, 8, F(1, 256))
    assert v.verdict == NOT_FOLDING and v.certified and v.level_bound < 8


def test_ppoint_is_its_own_witness(s2):
    arc = FundamentalArc(s2, 0, 4)
    pp = [q for q in enumerate_ppoints(arc) if q.level == 2][0]
    cap = level_cap(pp.point(), 0, F(0))
    assert cap is None or cap >= 2


def test_isotopy_constant(s2):
    arc = FundamentalArc(s2, 0, 3)
    path = build_isotopy(arc, F(1, 8), F(1, 8))
    assert path(F(1, 3)).coords == arc.point(F(1, 8)).coords


def test_isotopy_between_level0_points(s2):
    arc = FundamentalArc(s2, 0, 3)
    lv0 = [pp.u for pp in enumerate_ppoints(arc) if pp.level == 0]
    a, b = lv0[0], lv0[1]
    path = build_isotopy(arc, a, b)
    for t in (F(0), F(1, 2), F(1)):
        u = path.parameter(t)
        assert arc.projection(path.m, u) == (1 - t) * arc.projection(path.m, a) + t * arc.projection(path.m, b)
    assert path.parameter(0) == a and path.parameter(1) == b


@given(st.fractions(0, 1, max_denominator=64), st.fractions(0, 1, max_denominator=64))
def test_isotopy_contract(ta, tb):
    s = Slope.parse("7/4")
    arc = FundamentalArc(s, 0, 4)
    a, b = sorted([ta * s.c, tb * s.c])
    if a == 0:
        return
    path = build_isotopy(arc, a, b)
    assert path.source.coords == arc.point(a).coords
    assert path(0).coords == path.source.coords and path(1).coords == path.target.coords
    prev = None
    for t in (F(0), F(1, 4), F(1, 2), F(3, 4), F(1)):
        u = path.parameter(t)
        assert arc.contains(u)
        assert arc.projection(path.m, u) == path.projection(t)
        if prev is not None and a < b:
            assert u > prev
        prev = u


def test_rejects_zero_bar(s2):
    with pytest.raises(FoldingObstruction):
        build_isotopy(FundamentalArc(s2, 0, 3), 0, F(1, 16))


def test_rejects_golden_cycle_point(golden):
    arc = Arc(golden, 2, golden.c1 - F(1, 100), golden.c1, "RLR")
    assert arc.folding_points() == [golden.c1]
    with pytest.raises(FoldingObstruction):
        build_isotopy(arc)
    assert build_isotopy(arc, arc.lo, arc.lo + F(1, 1000))


def test_explicit_m_too_small(s2):
    with pytest.raises(ValueError):
        build_isotopy(FundamentalArc(s2, 0, 3), F(1, 16), F(7, 16), m=0)


def test_injectivity_family(s2):
    arc = FundamentalArc(s2, 0, 5)
    starts = [F(1, 64), F(2, 64), F(5, 64)]
    paths = common_depth_family(arc, starts, lambda u: u + F(1, 32))
    assert len({p.m for p in paths}) == 1
    assert isotopy_injectivity(paths, [F(k, 8) for k in range(9)])


def test_shift_isotopy(golden):
    path = shift_isotopy(golden, 0, 3, 1, golden.c / 4)
    x, y = path.source, path.target
    assert shift(x, 1).coord(4) == y.coord(4)


def test_orientation(golden):
    arc = FundamentalArc(golden, 0, 4)
    pts = [arc.point(golden.c * F(k, 10)) for k in range(1, 10)]
    assert orientation_check(pts, lambda x: shift(x, 1))
    assert orientation_check(pts, lambda x: x)
    flip = lambda x: arc.point(golden.c - x.coord(4))
    assert not orientation_check(pts, flip)


def test_connecting_arc(s2, golden):
    x = FundamentalArc(golden, 0, 3).point(golden.c / 5)
    assert connecting_arc_check(x, x).detail == "single point"
    assert connecting_arc_check(x, shift(x, 1))
    y = FundamentalArc(s2, 0, 3).point(F(1, 8))
    assert not connecting_arc_check(ILPoint.zero(s2), y)


def test_residue_cap_near_cycle(golden):
    # tail creeps toward the 3-cycle, so no single coordinate is far from orb(c)
    arc = Arc(golden, 3, golden.c1 - F(1, 100), golden.c1, "RLR")
    x = arc.point(golden.c1 - F(85832, 10**8))
    radius = F(1, 256)
    assert min(metric_dist(x, z)[0] for z in certified_folding_points(golden)) > radius
    cap = level_cap(x, 0, radius)
    assert cap is not None and cap < 30
    assert folding_test_ppoints(x, 0, 30, radius).certified
