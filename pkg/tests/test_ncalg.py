import math

import pytest
from hypothesis import given, settings, strategies as st

from bqiso import braided, frt
from bqiso.ncalg import (
    DEGREE_CAP, DegreeCapError, NCPoly, RelationSet, TwistedSquare, classical_dimension,
    content_from, diamond_overlap_report, graded_dimension, independent, reduce_membership,
    words_with_content,
)
from bqiso.poisson import Coordinates
from bqiso.scalars import ONE, I_UNIT, q

N = 2
CO = Coordinates(N)
X0, X1 = CO.x(0), CO.x(1)


def qplane(factor=None) -> RelationSet:
    """``x0 x1 = q x1 x0``: the quantum plane, dimension d + 1 in degree d."""
    factor = q(1) if factor is None else factor
    return RelationSet(N).extend("plane", [NCPoly(N, {(X0, X1): ONE, (X1, X0): -factor})])


def test_free_and_commutative_counts():
    free = RelationSet(N)
    assert graded_dimension(free, {"x": 3}) == 8
    assert graded_dimension(qplane(ONE), {"x": 3}) == 4
    assert classical_dimension(2, (0, 0, 3, 0)) == 4
    assert classical_dimension(2, (1, 0, 1, 0)) == 8
    assert len(words_with_content(CO, (1, 0, 1, 0))) == 16  # h x and x h orders


@pytest.mark.parametrize("d", range(1, 6))
def test_quantum_plane_dimensions(d):
    assert graded_dimension(qplane(), {"x": d}) == d + 1


def test_collapse_is_detected():
    # x0 x1 = q x1 x0 together with x0 x1 = x1 x0 forces x0 x1 = 0 and x1 x0 = 0
    rels = qplane().extend("flat", [NCPoly(N, {(X0, X1): ONE, (X1, X0): -ONE})])
    assert graded_dimension(rels, {"x": 2}) == 2
    rep = diamond_overlap_report(rels)
    assert rep.collapses and rep.collapses[0].dimension < rep.collapses[0].classical
    assert all(e.status == "classical" for e in diamond_overlap_report(qplane()).entries)


def test_membership_and_residual():
    rels = qplane()
    rel = NCPoly(N, {(X0, X1): ONE, (X1, X0): -q(1)})
    x0 = NCPoly.gen(N, X0)
    ok, res = reduce_membership(rels, x0 * rel * x0 + rel * NCPoly.gen(N, X1))
    assert ok and res.is_zero()
    ok, res = reduce_membership(rels, x0 * x0)
    assert not ok and res == x0 * x0
    # a wrong scalar leaves a residual proportional to the defect
    bad = NCPoly(N, {(X0, X1): ONE, (X1, X0): -q(2)})
    ok, res = reduce_membership(rels, bad)
    assert not ok and len(res.terms) == 1


def test_inhomogeneous_relations_are_filtered():
    # x0 x1 - x1 x0 - 1: the associated graded is commutative
    rel = NCPoly(N, {(X0, X1): ONE, (X1, X0): -ONE, (): -ONE})
    rels = RelationSet(N).extend("weyl", [rel])
    assert graded_dimension(rels, {"x": 2}) == 4
    assert graded_dimension(rels, {"x": 2}, include_inhomogeneous=True) == 3
    ok, _ = reduce_membership(rels, NCPoly(N, {(X0, X1): ONE, (X1, X0): -ONE}) - NCPoly.const(N, 1))
    assert ok
    ok, res = reduce_membership(rels, NCPoly(N, {(X0, X1): ONE, (X1, X0): -ONE}))
    assert not ok and not res.is_zero()


def test_relation_validation_and_caps():
    with pytest.raises(ValueError):
        RelationSet(N).add("cubic", NCPoly.word(N, (X0, X0, X1)))
    with pytest.raises(ValueError):
        RelationSet(N).add("linear", NCPoly(N, {(X0, X1): ONE, (X0,): ONE}))
    with pytest.raises(ValueError):
        RelationSet(N).add("mixed", NCPoly(N, {(X0, X1): ONE, (CO.h(0, 0), X1): ONE}))
    with pytest.raises(DegreeCapError):
        graded_dimension(qplane(), {"x": DEGREE_CAP + 1})
    with pytest.raises(ValueError):
        content_from((1, 2))
    assert content_from({"x": 2, "h'": 1}) == (0, 1, 2, 0)


@st.composite
def ncpolys(draw):
    gens = CO.generators()
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        w = tuple(draw(st.lists(st.sampled_from(gens), max_size=3)))
        terms[w] = draw(st.sampled_from([ONE, -ONE, q(1), q(-2) + I_UNIT, ONE / (q(1) + 1)]))
    return NCPoly(N, terms)


@settings(max_examples=40, deadline=None)
@given(ncpolys(), ncpolys())
def test_ncpoly_algebra_laws(a, b):
    assert NCPoly.from_text(N, a.to_text()) == a
    assert (a * b).star() == b.star() * a.star()
    assert a.star().star() == a
    assert (a + b) - b == a


def test_relation_set_text_and_span():
    rels = qplane()
    back = RelationSet.from_text(N, rels.to_text())
    assert back.span_equals(rels) and back.families() == ["plane"]
    scaled = RelationSet(N).extend("plane", [rels.relations[0].poly.scale(q(3))])
    assert scaled.span_equals(rels)
    assert not qplane(q(2)).span_equals(rels)
    assert len(independent([rels.relations[0].poly, rels.relations[0].poly.scale(2)])) == 1


def test_twisted_square_cross_rules():
    rels = qplane()
    sq = TwistedSquare(rels, q(-1))
    x0p = sq.prime(X0)
    # x'0 x0 = sigma x0 x'0 holds in the square
    ok, _ = sq.membership(NCPoly(N, {(x0p, X0): ONE, (X0, x0p): -q(-1)}))
    assert ok
    ok, res = sq.membership(NCPoly(N, {(x0p, X0): ONE, (X0, x0p): -ONE}))
    assert not ok and not res.is_zero()
    assert sq.normal_order((x0p, X0, X1)) == (2, (X0, X1), (x0p,))
    full = sq.relations()
    assert set(full.families()) == {"plane", "plane'", "cross"}
    assert full.restrict(("h", "x")).span_equals(rels)


def test_twisted_square_agrees_with_brute_route():
    rels = qplane()
    sq = TwistedSquare(rels, q(-1))
    x0p, x1p = sq.prime(X0), sq.prime(X1)
    p = NCPoly(N, {(X1, x0p, X0): ONE, (X1, X0, x0p): -q(-1)})
    for poly in (p, p + NCPoly(N, {(X0, X1, x1p): ONE})):
        assert sq.membership(poly)[0] == reduce_membership(sq.relations(), poly)[0]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_x_algebra_has_classical_size(n):
    xa = braided.x_algebra(frt.build(n))
    assert [graded_dimension(xa, {"x": d}) for d in range(1, 5)] == [math.comb(n + d - 1, d) for d in range(1, 5)]


@pytest.mark.parametrize("n", [2, 3])
def test_h_algebra_degree_two(n):
    d = frt.build(n)
    assert graded_dimension(braided.h_algebra(d, "R"), {"h": 2}) == math.comb(n * n + 1, 2)
    # the W-form relations cut the quadratic component further
    assert graded_dimension(braided.h_algebra(d, "W"), {"h": 2}) < math.comb(n * n + 1, 2)
