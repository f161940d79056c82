import sympy as sp
import pytest
from hypothesis import given, settings, strategies as st

from _oracle import leg, matrix, swap_matrix
from bqiso.scalars import ONE, QScalar, q
from bqiso.tensor import (
    TensorError, TensorOp, TensorVec, antisymmetrizer2, commutator, compose, dump, embed, kernel_dim,
    kron, lagrange_projectors, load, pack, rank, symmetrizer2, symmetrizer3, transpose_legs, unpack,
)

entry = st.sampled_from([0, 0, 0, 1, -1, 2, q(1), q(-1), q(1) + 1])


@st.composite
def ops(draw, n=2, legs=2):
    size = n**legs
    vals = draw(st.lists(entry, min_size=size * size, max_size=size * size))
    rows: dict = {}
    for k, v in enumerate(vals):
        if v != 0:
            rows.setdefault(k // size, {})[k % size] = QScalar.coerce(v)
    return TensorOp(n, legs, rows)


def test_packing_is_row_major_leg_one_first():
    assert pack((1, 0), 3) == 3
    assert pack((0, 2, 1), 3) == 7
    assert unpack(7, 3, 3) == (0, 2, 1)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3))
def test_pack_round_trip(idx):
    assert unpack(pack(idx, 4), 4, len(idx)) == tuple(idx)


@settings(max_examples=25, deadline=None)
@given(ops(), ops())
def test_compose_matches_sympy(a, b):
    assert (matrix(compose(a, b)) - matrix(a) * matrix(b)).applyfunc(sp.cancel) == sp.zeros(4, 4)


@settings(max_examples=15, deadline=None)
@given(ops(n=3, legs=1), ops(n=3, legs=1))
def test_kron_matches_sympy(a, b):
    k = matrix(kron(a, b)) - sp.kronecker_product(matrix(a), matrix(b))
    assert k.applyfunc(sp.cancel) == sp.zeros(9, 9)


@settings(max_examples=15, deadline=None)
@given(ops())
def test_embeddings_match_sympy(a):
    m = matrix(a)
    for legs in ((1, 2), (2, 3), (1, 3)):
        diff = matrix(embed(a, legs)) - leg(m, legs, 2)
        assert diff.applyfunc(sp.cancel) == sp.zeros(8, 8)
    p = swap_matrix(2)
    assert (matrix(transpose_legs(a)) - p * m * p).applyfunc(sp.cancel) == sp.zeros(4, 4)


def test_swap_and_symmetrizers():
    n = 3
    s = TensorOp.swap(n)
    assert compose(s, s) == TensorOp.identity(n, 2)
    assert matrix(s) == swap_matrix(n)
    assert rank(symmetrizer2(n)) == 6 and rank(antisymmetrizer2(n)) == 3
    assert symmetrizer2(n) + antisymmetrizer2(n) == TensorOp.identity(n, 2)
    s3 = symmetrizer3(n)
    assert compose(s3, s3) == s3
    assert rank(s3) == 10


def test_embed_rejects_bad_legs():
    with pytest.raises(TensorError):
        embed(TensorOp.swap(2), (1, 1))


def test_lagrange_projectors_oracle():
    n = 2
    a = TensorOp.swap(n).scale(q(1))
    # eigenvalues +q (symmetric, rank 3) and -q (antisymmetric, rank 1)
    p, m = lagrange_projectors(a, [q(1), -q(1)])
    assert rank(p) == 3 and rank(m) == 1
    assert compose(p, p) == p and compose(p, m).is_zero()
    assert p.scale(q(1)) - m.scale(q(1)) == a
    with pytest.raises(TensorError):
        lagrange_projectors(a, [q(1), q(2)])


@settings(max_examples=20, deadline=None)
@given(ops())
def test_rank_matches_sympy_at_generic_point(a):
    # q = 7/3 is generic enough for these small entries
    assert rank(a) == matrix(a, at=sp.Rational(7, 3)).rank()
    assert rank(a) + kernel_dim(a) == 4


def test_commutator_and_vectors():
    a = TensorOp.from_matrix([[1, q(1)], [0, 2]])
    b = TensorOp.from_matrix([[0, 1], [1, 0]])
    assert (matrix(commutator(a, b)) - (matrix(a) * matrix(b) - matrix(b) * matrix(a))).applyfunc(sp.cancel) == sp.zeros(2, 2)
    v = TensorVec(2, 1, {0: ONE, 1: q(1)})
    assert a.apply(v).get((0,)) == ONE + q(2)
    assert v.tensor(v).get((1, 1)) == q(2)


def test_dump_format_and_round_trip():
    text = dump(TensorOp.swap(2).scale(q(-1)))
    assert text.splitlines()[0] == "2 2 | 0 0 | [1+0i] / [0+0i, 1+0i]"
    assert len(text.splitlines()) == 4
    assert load(text) == TensorOp.swap(2).scale(q(-1))
    with pytest.raises(TensorError):
        load(text, legs=3)
