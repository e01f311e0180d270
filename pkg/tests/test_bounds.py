import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singleton_lab import bounds
from singleton_lab.bounds import CodeParams, classify, entropic_classify, rate_region, region_contains
from singleton_lab.errors import DeltaOutOfRange, InvalidParams, SigmaOutOfRange

from oracles import admissible_by_formulas, region_lines, vertices_by_pairwise_intersection


def P(n, k, d, c=0, q=2, pure=None):
    return CodeParams(n, F(k), d, F(c), q, pure)


def test_params_validation_and_str():
    assert str(P(4, 1, 3, 1)) == "[[4,1,3;1]]_2"
    assert str(P(5, 1, 3)) == "[[5,1,3]]_2"
    assert P(8, 1, 7).delta == F(3, 4)
    for bad in [(0, 0, 1), (4, 5, 3), (4, 1, 6), (4, -1, 3)]:
        with pytest.raises(InvalidParams):
            P(*bad)
    with pytest.raises(InvalidParams):
        P(4, 1, 3, q=1)
    with pytest.raises(TypeError):
        CodeParams(4, 0.5, 3)


def test_four_qubit_ea_code():
    v = classify(P(4, 1, 3, 1))
    assert v.admissible and v.eaqmds
    assert v.check("ea_singleton").tight
    hd = v.check("high_distance")
    assert hd.applicable and hd.tight and hd.rhs == 1


def test_qutrit_seven_four_three():
    v = classify(P(7, 4, 3, 1, q=3))
    assert v.admissible and v.check("ea_singleton").tight
    assert "high_distance" in v.inapplicable


def test_three_one_three_two():
    v = classify(P(3, 1, 3, 2))
    assert v.admissible
    assert set(v.tight) >= {"erasure_singleton", "high_distance"}


def test_violation():
    v = classify(P(4, 2, 3, 1))
    assert not v.admissible and "ea_singleton" in v.violating


def test_admissible_is_not_existence():
    assert classify(P(4, 0, 3)).admissible


def test_full_erasure_distance_allowed():
    v = classify(P(3, 0, 4, 0))
    assert v.admissible
    assert set(classify(P(3, 1, 4, 1)).violating) == {"erasure_singleton", "high_distance"}


def test_net_generation_impossible_at_high_distance():
    assert "ea_singleton" in classify(P(4, 0, 4, -1)).violating
    assert classify(P(4, 0, 4, 0)).admissible


def test_verdict_dict_is_exact_text():
    d = classify(P(4, F(1, 2), 3, F(1, 3))).to_dict()
    assert d["params"]["k"] == "1/2" and d["params"]["c"] == "1/3"
    assert all(isinstance(c["lhs"], str) for c in d["checks"])


def test_verdict_invariants():
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randint(1, 12)
        v = classify(P(n, rng.randint(0, n), rng.randint(1, n + 1), rng.randint(-3, 8), pure=rng.choice([None, True])))
        for c in v.checks:
            if c.applicable:
                assert c.satisfied == (c.lhs <= c.rhs)
                assert c.tight == (c.lhs == c.rhs)
        assert v.admissible == all(c.satisfied for c in v.checks if c.applicable)


def test_pure_bound_applies_only_when_flagged():
    assert "pure_singleton" in classify(P(5, 1, 4, 1)).inapplicable
    v = classify(P(5, 1, 4, 1, pure=True))
    assert v.violating == ["pure_singleton"]


@pytest.mark.parametrize("c", [F(2), F(3), F(5, 2)])
def test_pure_code_on_mds_to_eaq_segment_is_rejected(c):
    n, d = 7, 6
    k = F(n - d + 1) * (c + 2 * d - 2 - n) / (3 * d - 3 - n)
    general = classify(P(n, k, d, c))
    assert general.admissible and general.check("high_distance").tight
    assert classify(P(n, k, d, c, pure=True)).violating == ["pure_singleton"]


# --- entropic -------------------------------------------------------------------

def test_entropic_five_qubit_tight():
    v = entropic_classify(P(5, 1, 3), 1.0, 1.0)
    assert v.check("ea_singleton").tight and v.admissible


def test_entropic_zero_block_entropy_forces_trivial_code():
    assert not entropic_classify(P(5, 1, 3), 0.0, 0.0).admissible
    assert entropic_classify(P(5, 0, 3), 0.0, 0.0).admissible


def test_entropic_net_generation():
    v = entropic_classify(P(4, 0, 4, -1), 0.5, 0.7)
    assert "ea_singleton" in v.violating


def test_sigma_range():
    with pytest.raises(SigmaOutOfRange):
        entropic_classify(P(5, 1, 3), 1.5, 1.0)
    with pytest.raises(SigmaOutOfRange):
        entropic_classify(P(5, 1, 3, q=3), 1.0, -0.1)


@settings(max_examples=300, deadline=None)
@given(
    st.integers(1, 12), st.integers(0, 12), st.integers(1, 13), st.integers(-4, 10),
    st.sampled_from([2, 3, 4, 5]), st.sampled_from([None, True]),
)
def test_entropic_degrades_to_exact(n, k, d, c, q, pure):
    if k > n or d > n + 1:
        return
    p = P(n, k, d, c, q, pure)
    log_q = math.log2(q)
    exact, approx = classify(p), entropic_classify(p, log_q, log_q)
    assert [x.applicable for x in exact.checks] == [x.applicable for x in approx.checks]
    assert [x.satisfied for x in exact.checks] == [x.satisfied for x in approx.checks]
    assert [x.tight for x in exact.checks] == [x.tight for x in approx.checks]


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 15), st.integers(0, 15), st.integers(1, 16), st.integers(-5, 10), st.integers(1, 5))
def test_more_entanglement_never_hurts(n, k, d, c, extra):
    if k > n or d > n + 1:
        return
    if classify(P(n, k, d, c)).admissible:
        assert classify(P(n, k, d, c + extra)).admissible


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 15), st.integers(0, 15), st.integers(1, 16), st.integers(-5, 10))
def test_classify_matches_direct_formulas(n, k, d, c):
    if k > n or d > n + 1:
        return
    assert classify(P(n, k, d, c)).admissible == admissible_by_formulas(n, k, d, c)


# --- rate regions --------------------------------------------------------------

def test_region_quarter():
    r = rate_region(F(1, 4))
    assert r.vertices == ((F(-1, 2), 0), (F(1, 4), F(3, 4)))
    assert r.points["QMDS"] == (0, F(1, 2))
    assert r.regime == "delta<1/2"


def test_region_half():
    r = rate_region(F(1, 2))
    assert r.vertices == ((0, 0), (F(1, 2), F(1, 2)))


def test_region_three_quarters():
    r = rate_region("3/4")
    assert r.vertices == ((0, 0), (F(1, 8), F(1, 8)), (F(3, 4), F(1, 4)))
    assert r.points["MDS"] == (F(1, 8), F(1, 8))
    mid = [s for s in r.segments if s.start == r.points["MDS"]][0]
    assert bounds.segment_slope(mid) == F(1, 5)
    assert mid.status == "open"


def test_region_contains_examples():
    r = rate_region(F(3, 4))
    assert region_contains(r, F(1, 8), F(1, 8))
    assert not region_contains(r, F(1, 8), F(1, 5))
    for delta in [0, F(1, 4), F(1, 2), F(3, 4), 1]:
        assert region_contains(rate_region(delta), 0, 0)


def test_delta_range():
    for bad in [F(-1, 4), F(5, 4)]:
        with pytest.raises(DeltaOutOfRange):
            rate_region(bad)


DELTAS = sorted({F(a, b) for b in range(1, 13) for a in range(0, b)})


@pytest.mark.parametrize("delta", DELTAS)
def test_vertices_match_pairwise_intersection(delta):
    assert list(rate_region(delta).vertices) == vertices_by_pairwise_intersection(region_lines(delta))


@pytest.mark.parametrize("delta", DELTAS + [F(1)])
def test_vertices_lie_on_two_boundaries(delta):
    r = rate_region(delta)
    for v in r.vertices:
        assert all(h.contains(*v) for h in r.half_planes)
        assert sum(h.on_boundary(*v) for h in r.half_planes) >= 2 or v[1] == 0
    assert r.points["EAQ"] == (delta, 1 - delta)


@pytest.mark.parametrize("delta", DELTAS)
def test_region_is_convex_chain(delta):
    r = rate_region(delta)
    slopes = [bounds.segment_slope(s) for s in r.segments]
    assert slopes == sorted(slopes, reverse=True)


def test_classify_agrees_with_region_on_500_random_tuples():
    rng = random.Random(20240601)
    for _ in range(500):
        n = rng.randint(1, 20)
        d = rng.randint(1, n + 1)
        k = rng.randint(0, n)
        c = rng.randint(-n, n)
        p = P(n, k, d, c)
        assert classify(p).admissible == region_contains(rate_region(p.delta), *p.rate_point), p


def test_line_a_annotation():
    r = rate_region(F(3, 4))
    assert r.line_a.beta == F(-1, 2)
    assert not r.line_a.contains(*r.points["MDS"])
    assert r.line_a.on_boundary(*r.points["EAQ"])


def test_csv_and_svg_export():
    r = rate_region(F(3, 4))
    text = bounds.region_to_csv(r)
    assert text.splitlines()[0] == "kind,label,v1,v2,v3"
    assert "vertex,MDS,1/8,1/8," in text
    assert bounds.vertices_str(r) == "(0,0);(1/8,1/8);(3/4,1/4)"
    svg = bounds.region_svg([rate_region(F(1, 4)), rate_region(F(1, 2)), r])
    assert svg.startswith("<svg") and svg.count("<polygon") == 3
