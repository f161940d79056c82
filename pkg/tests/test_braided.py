import pytest

from bqiso import braided as B, frt
from bqiso.ncalg import NCPoly
from bqiso.scalars import ONE, q
from bqiso.tensor import TensorOp, compose


@pytest.fixture(scope="module")
def data():
    return {n: frt.build(n) for n in (2, 3, 4, 5)}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_delta_preserves_every_family(data, n):
    spec = B.assemble(data[n])
    assert spec.sigma == q(-1) and spec.classical_limit_ok
    rep = B.check_delta_preserves(spec)
    assert set(rep.families) == {"rtt", "rtt_w", "xh", "xx", "metric", "metric'"}
    assert rep.ok, {k: v.residual for k, v in rep.families.items() if not v.ok}
    assert rep.lemma


def test_brute_route_agrees_at_n2(data):
    spec = B.assemble(data[2])
    assert B.check_delta_preserves(spec, route="brute").ok
    bad = B.assemble(data[2], sigma=ONE)
    rep = B.check_delta_preserves(bad, route="brute")
    assert [f for f, r in rep.families.items() if not r.ok] == ["xx"]


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("kw", [dict(sigma=q(1)), dict(w_prime_choice="minus_W", sigma=q(-1)), dict(sigma=1)],
                         ids=["sigma_q", "minus_W", "B_identity"])
def test_mutations_leave_residuals(data, n, kw):
    spec = B.assemble(data[n], **kw)
    rep = B.check_delta_preserves(spec, families=("xx",))
    assert not rep.ok
    assert rep.families["xx"].residual
    assert not rep.lemma


def test_minus_w_is_only_rejected_by_the_limit(data):
    spec = B.assemble(data[3], w_prime_choice="minus_W")
    assert spec.sigma == -q(-1)
    assert not spec.classical_limit_ok
    assert B.check_delta_preserves(spec).ok


def test_classical_point(data):
    spec = B.assemble(data[3], q_value=1)
    assert spec.sigma == ONE
    assert B.check_delta_preserves(spec).ok


def test_w_inverse_branch_is_consistent(data):
    spec = B.assemble(data[3], w_prime_choice="W_inverse")
    assert spec.sigma == q(1)
    assert compose(spec.w_prime_hat, data[3].what) == TensorOp.identity(3, 2)
    assert B.check_delta_preserves(spec).ok


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_matrix_lemma_picks_q_inverse(data, n):
    assert B.scan_sigma(data[n]) == [q(-1)]
    ok, defect, agree = B.check_matrix_lemma(data[n], q(1))
    assert not ok and agree and not defect.is_zero()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_obstruction(data, n):
    rep = B.obstruction_unbraided(data[n])
    assert rep.symbolic_defect_nonzero and rep.defect_at_one_zero and rep.confirmed
    assert not any(rep.identities.values())


def test_obstruction_is_vacuous_for_so2(data):
    rep = B.obstruction_unbraided(data[2])
    assert not rep.symbolic_defect_nonzero


@pytest.mark.parametrize("n", [2, 3, 4])
def test_involutivity_equivalence(data, n):
    assert B.involutivity_equivalence(data[n]) == {"involutive": True, "same_span": True}
    assert B.involutivity_equivalence(data[n], data[n].what) == {"involutive": False, "same_span": False}


def test_reality_inclusion_consistency(data):
    d = data[3]
    spec = B.assemble(d)
    assert B.reality_propagation(spec) == {"star_closed": True, "reality": True}
    assert B.inclusion_preserved(spec)
    assert all(v.is_zero() for v in B.consistency_identities(spec.w_prime, d.r_mat).values())
    # 2W is not unitary (q W would be, since star(q) = 1/q)
    scaled = B.assemble(d, sigma=q(-1))
    scaled.w_prime = d.w_mat.scale(2)
    assert B.reality_propagation(scaled) == {"star_closed": False, "reality": False}


def test_comultiplication_images():
    imgs = B.comultiplication(2)
    co = B.Coordinates(2)
    assert len(imgs[co.x(0)].terms) == 3
    assert imgs[co.h(0, 1)] == NCPoly(2, {(co.h(0, 0), co.h(0, 1, True)): ONE, (co.h(0, 1), co.h(1, 1, True)): ONE})


def test_single_copy_relation_counts(data):
    spec = B.assemble(data[3])
    fams = {f: sum(1 for r in spec.single.relations if r.family == f) for f in spec.single.families()}
    assert fams["xh"] == 27 and fams["xx"] == 3 and fams["metric"] == 9
    with pytest.raises(ValueError):
        B.w_prime_matrix(data[3], "bogus")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_xx_forms_agree(data, n):
    """``P- x1 x2 = 0`` and ``x2 x1 = R x1 x2`` are the same relations since ``R^ = I - 2 P-``."""
    d = data[n]
    a = B.RelationSet(n).extend("xx", B.xx_relations(n, d.p_minus))
    b = B.RelationSet(n).extend("xx", B.xx_braid_relations(n, d.r_mat))
    assert a.span_equals(b)
