import itertools
import random

import sympy as sp
import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from _oracle import leg, matrix
from bqiso import frt, poisson as P
from bqiso.tensor import TensorOp, TensorVec, compose, right_symmetrize, transpose_legs


@pytest.fixture(scope="module")
def classical():
    return {n: frt.classical_limit(frt.build(n)) for n in (2, 3, 4, 5)}


# --- tensor identities ---------------------------------------------------


def test_drinfeld_bracket_matches_sympy(classical):
    r = classical[3].r
    m = matrix(r)
    r12, r13, r23 = (leg(m, legs, 3) for legs in ((1, 2), (1, 3), (2, 3)))
    want = (r12 * r13 - r13 * r12) + (r12 * r23 - r23 * r12) + (r13 * r23 - r23 * r13)
    assert matrix(P.drinfeld_bracket(r)) == want


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_classical_r_matrix_identities(classical, n):
    cl = classical[n]
    rr, ss = P.drinfeld_bracket(cl.r), P.drinfeld_bracket(cl.s)
    assert (rr + ss).is_zero()
    assert P.drinfeld_bracket(cl.r + cl.s).is_zero()
    assert P.killing_defect(cl.eta).is_zero()
    assert P.proportionality(cl.s, P.killing_element(cl.eta)) == -1
    assert P.symmetric_kills(P.omega(cl.eta))
    assert right_symmetrize(rr).is_zero()


def test_killing_identity_random_metrics():
    rng = random.Random(5)
    for _ in range(5):
        eta = [[0] * 3 for _ in range(3)]
        for i, j in itertools.combinations_with_replacement(range(3), 2):
            eta[i][j] = eta[j][i] = rng.randint(-3, 3)
        if sp.Matrix(eta).det() == 0:
            continue
        s = P.killing_element(eta)
        swap = TensorOp.swap(3)
        assert (s - compose(swap, s)) == TensorOp.identity(3, 2) - swap


def test_omega_closed_form_n4(classical):
    eta = classical[4].eta
    assert P.omega(eta) == P.omega_closed_form(eta)
    assert P.symmetric_kills(P.omega_closed_form(eta))


def test_killing_element_rejects_bad_metrics():
    with pytest.raises(ValueError):
        P.killing_element([[1, 2], [0, 1]])
    with pytest.raises(ValueError):
        P.killing_element([[1, 1], [1, 1]])


def test_change_of_basis_covariance(classical):
    eta = classical[4].eta
    c = P.diagonalizing_basis(eta)
    diag = P.congruence(eta, c)
    assert all(diag[i][j] == 0 for i in range(4) for j in range(4) if i != j)
    assert P.killing_defect(diag).is_zero()
    assert P.omega(diag) == P.omega_closed_form(diag)


# --- bracket table ---------------------------------------------------------


def _random_ab(n, seed):
    rng = random.Random(seed)
    a = {}
    for i, k in itertools.combinations(range(n), 2):
        v = rng.randint(-2, 2)
        if v:
            a[(i, k)], a[(k, i)] = v, -v
    b = {(i, k, l): rng.randint(-1, 1) for i, k, l in itertools.product(range(n), repeat=3)}
    return (TensorVec.from_entries(n, 2, [(k, v) for k, v in a.items()]),
            TensorVec.from_entries(n, 3, [(k, v) for k, v in b.items() if v]))


def test_general_table_matches_block_oracle(classical):
    cl = classical[3]
    a, b = _random_ab(3, 11)
    # the block route knows only the antisymmetric coupler
    spec = P.PoissonSpec(3, cl.r, w=cl.r, a=a, b=b, eta_classical=cl.eta)
    alg = P.BracketAlgebra(spec)
    gens = alg.coords.generators(copies=(False,))
    for u, v in itertools.combinations(gens, 2):
        assert alg.generator_bracket(u, v) == P.block_generator_bracket(spec, u, v), (u, v)


@st.composite
def polys(draw, n=2):
    gens = P.Coordinates(n).generators()
    out = P.PoissonPoly.const(n, 0)
    for _ in range(draw(st.integers(1, 3))):
        vs = draw(st.lists(st.sampled_from(gens), min_size=0, max_size=2))
        out = out + P.PoissonPoly.monomial(n, vs, draw(st.integers(-3, 3)))
    return out


@settings(max_examples=30, deadline=None)
@given(polys(), polys(), polys())
def test_antisymmetry_and_leibniz(f, g, h):
    cl = frt.classical_limit(frt.build(2))
    spec = P.spec_from_classical(cl)
    br = P.BracketAlgebra(spec).bracket
    assert br(f, g) == -br(g, f)
    assert br(f, g * h) == br(f, g) * h + g * br(f, h)


def test_spec_validation():
    with pytest.raises(P.SpecError):
        P.PoissonSpec(2, TensorOp.identity(2, 2))
    cl = frt.classical_limit(frt.build(3))
    with pytest.raises(P.SpecError):
        P.PoissonSpec(3, cl.r, w=cl.r, s_sym=cl.s)
    assert P.zero_spec(3).coupler.is_zero()


# --- Jacobi and the braiding equation ---------------------------------------


@pytest.mark.parametrize("n", [3, 4])
def test_jacobi_r_plus_s(classical, n):
    rep = P.check_jacobi_all_generators(P.spec_from_classical(classical[n], "r+s"))
    assert rep.ok and rep.closed_form_checked > 0
    # cross triples are among those checked
    assert rep.triples == sum(1 for _ in itertools.combinations(range(2 * n * n + 2 * n), 3))


def test_jacobi_r_only_fails_on_mixed_shapes(classical):
    rep = P.check_jacobi_all_generators(P.spec_from_classical(classical[3], "r"))
    assert {"h,h,x", "h,x,x"} <= rep.failing_shapes() <= {"h,h,x", "h,x,x", "h',h',x'", "h',x',x'"}
    assert not rep.closed_form_mismatches


def test_zero_spec_is_trivially_poisson():
    rep = P.check_jacobi_all_generators(P.zero_spec(2))
    assert rep.ok and rep.identically_zero == rep.triples


@pytest.mark.parametrize("n", [3, 4])
def test_braiding_equation(classical, n):
    spec = P.spec_from_classical(classical[n])
    br = P.check_braiding_equation(spec)
    assert br.solvable and br.nu_solution == -1 and br.nu_matches and br.lemma_ok
    # a wrong nu in PoissonSpec is caught by the cross-check
    assert P.check_braiding_equation(spec.with_nu(2)).nu_matches is False


def test_braiding_with_zero_s_gives_zero_nu():
    spec = P.PoissonSpec(2, TensorOp.zero(2, 2), s_sym=TensorOp.zero(2, 2))
    br = P.check_braiding_equation(spec)
    assert br.solvable and br.nu_solution == 0


def test_dilation_projection_comultiplication(classical):
    spec = P.spec_from_classical(classical[3])
    assert P.check_dilation_grading(spec)
    assert P.projection_is_poisson(spec)
    assert P.check_comultiplication_poisson(spec).ok
    a, _ = _random_ab(3, 2)
    assert not P.check_dilation_grading(P.PoissonSpec(3, classical[3].r, a=a))
    assert P.check_dilation_grading(P.zero_spec(3))


def test_group_points_preserve_metric(classical):
    eta = classical[3].eta
    rng = random.Random(0)
    h = P.group_point(eta, rng)
    ht = [list(r) for r in zip(*h)]
    prod = [[sum((h[i][a] * eta[a][b] * ht[b][j] for a in range(3) for b in range(3)), mpq(0))
             for j in range(3)] for i in range(3)]
    assert prod == [[mpq(e.constant_value()) if hasattr(e, "constant_value") else mpq(e) for e in row] for row in eta]


# --- Lorentz algebra --------------------------------------------------------


def test_lorentz_suite():
    eta = P.lorentz_eta()
    ms, ls = P.lorentz_generators()
    assert all(P.preserves_metric(x, eta) for x in ms + ls)
    t = P.lorentz_tensors()
    assert t["s_tilde"] == P.killing_element(eta)
    swap = TensorOp.swap(4)
    assert compose(swap, t["i_s_tilde"]) == -t["i_s_tilde"]
    assert t["i_s_tilde"] - compose(swap, t["i_s_tilde"]) == t["i_s_tilde"].scale(2)
    assert transpose_legs(t["i_s_tilde"]) == t["i_s_tilde"]
    assert P.rotation_sign() == 1
    assert not P.i_omega_symmetric_part(eta, t["i_s_tilde"]).is_zero()


def test_lorentz_braiding():
    t = P.lorentz_tensors()
    eta = P.lorentz_eta()
    mk = lambda s: P.PoissonSpec(4, TensorOp.zero(4, 2), s_sym=s, eta_classical=eta, basis="diagonal")  # noqa: E731
    ok = P.check_braiding_equation(mk(t["s_tilde"].scale(-3)))
    assert ok.solvable and ok.nu_solution == -3
    bad = P.check_braiding_equation(mk(t["i_s_tilde"]))
    assert not bad.solvable and bad.residual
