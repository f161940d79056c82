"""Sparse exact operators on tensor powers of an ``n``-dimensional space.

Multi-indices ``(i_1, ..., i_k)`` are packed row-major with leg 1 most
significant, ``idx = i_1 n^(k-1) + ... + i_k``; this is the Kronecker-product
order, so ``embed(A, (1, 2))`` is ``A (x) I`` in the usual matrix sense.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .echelon import Echelon
from .scalars import ONE, ZERO, QScalar

MAX_LEGS = 3


class TensorError(ValueError):
    pass


def pack(idx: Sequence[int], n: int) -> int:
    out = 0
    for i in idx:
        out = out * n + i
    return out


def unpack(code: int, n: int, k: int) -> tuple:
    out = []
    for _ in range(k):
        code, r = divmod(code, n)
        out.append(r)
    return tuple(reversed(out))


def _coerce(v) -> QScalar:
    return v if isinstance(v, QScalar) else QScalar.const(v)


class TensorOp:
    """Linear operator on V^(x)k stored as ``{row: {col: QScalar}}``."""

    __slots__ = ("n", "legs", "rows")

    def __init__(self, n: int, legs: int, rows: dict | None = None):
        if legs < 1 or legs > MAX_LEGS:
            raise TensorError(f"legs must be in 1..{MAX_LEGS}, got {legs}")
        self.n = n
        self.legs = legs
        self.rows = {}
        if rows:
            for r, cols in rows.items():
                clean = {c: v for c, v in cols.items() if v}
                if clean:
                    self.rows[r] = clean

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, n: int, legs: int) -> "TensorOp":
        return cls(n, legs)

    @classmethod
    def identity(cls, n: int, legs: int) -> "TensorOp":
        return cls(n, legs, {i: {i: ONE} for i in range(n ** legs)})

    @classmethod
    def from_entries(cls, n: int, legs: int, entries: Iterable) -> "TensorOp":
        """``entries``: iterable of ``((row_multi, col_multi), value)``; values add up."""
        rows: dict = {}
        for (ri, ci), v in entries:
            v = _coerce(v)
            if not v:
                continue
            r = pack(ri, n) if isinstance(ri, tuple) else ri
            c = pack(ci, n) if isinstance(ci, tuple) else ci
            row = rows.setdefault(r, {})
            row[c] = row.get(c, ZERO) + v
        return cls(n, legs, rows)

    @classmethod
    def from_matrix(cls, mat: Sequence[Sequence]) -> "TensorOp":
        n = len(mat)
        return cls.from_entries(n, 1, [(((i,), (j,)), mat[i][j])
                                       for i in range(n) for j in range(n)])

    @classmethod
    def permutation(cls, n: int, perm: Sequence[int]) -> "TensorOp":
        """Leg permutation: sends ``e_{i_1} (x) ... (x) e_{i_k}`` to the tensor whose leg
        ``perm[t]`` carries ``i_t`` (0-based legs)."""
        k = len(perm)
        rows = {}
        for idx in itertools.product(range(n), repeat=k):
            out = [0] * k
            for t, i in enumerate(idx):
                out[perm[t]] = i
            rows[pack(out, n)] = {pack(idx, n): ONE}
        return cls(n, k, rows)

    @classmethod
    def swap(cls, n: int) -> "TensorOp":
        return cls.permutation(n, (1, 0))

    # basic structure ----------------------------------------------------
    @property
    def dim(self) -> int:
        return self.n ** self.legs

    def get(self, row, col) -> QScalar:
        r = pack(row, self.n) if isinstance(row, tuple) else row
        c = pack(col, self.n) if isinstance(col, tuple) else col
        return self.rows.get(r, {}).get(c, ZERO)

    def entries(self):
        """``((row_multi, col_multi), value)`` in ascending index order."""
        for r in sorted(self.rows):
            ri = unpack(r, self.n, self.legs)
            row = self.rows[r]
            for c in sorted(row):
                yield (ri, unpack(c, self.n, self.legs)), row[c]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def __bool__(self):
        return bool(self.rows)

    def _check(self, other: "TensorOp"):
        if not isinstance(other, TensorOp):
            raise TypeError(f"expected TensorOp, got {type(other).__name__}")
        if self.n != other.n or self.legs != other.legs:
            raise TensorError(f"dimension mismatch: (n={self.n}, legs={self.legs}) vs "
                              f"(n={other.n}, legs={other.legs})")

    # linear structure ---------------------------------------------------
    def __add__(self, other: "TensorOp") -> "TensorOp":
        self._check(other)
        rows = {r: dict(c) for r, c in self.rows.items()}
        for r, cols in other.rows.items():
            row = rows.setdefault(r, {})
            for c, v in cols.items():
                row[c] = row.get(c, ZERO) + v
        return TensorOp(self.n, self.legs, rows)

    def __neg__(self) -> "TensorOp":
        return TensorOp(self.n, self.legs,
                        {r: {c: -v for c, v in cols.items()} for r, cols in self.rows.items()})

    def __sub__(self, other: "TensorOp") -> "TensorOp":
        return self + (-other)

    def scale(self, s) -> "TensorOp":
        s = _coerce(s)
        if not s:
            return TensorOp(self.n, self.legs)
        return TensorOp(self.n, self.legs,
                        {r: {c: v * s for c, v in cols.items()} for r, cols in self.rows.items()})

    def __mul__(self, s) -> "TensorOp":
        if isinstance(s, TensorOp):
            raise TypeError("use @ or compose() for operator products")
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: "TensorOp") -> "TensorOp":
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        return self.n == other.n and self.legs == other.legs and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.legs, self.nnz()))

    def __repr__(self):
        return f"TensorOp(n={self.n}, legs={self.legs}, nnz={self.nnz()})"

    def map_entries(self, fn) -> "TensorOp":
        return TensorOp(self.n, self.legs,
                        {r: {c: fn(v) for c, v in cols.items()} for r, cols in self.rows.items()})

    def star(self) -> "TensorOp":
        """Entrywise star (``q -> 1/q`` plus conjugation)."""
        return self.map_entries(lambda v: v.star())

    def subs_q(self, value) -> "TensorOp":
        """Exact specialisation of the deformation parameter."""
        return self.map_entries(lambda v: v.subs(value))

    def apply(self, vec: "TensorVec") -> "TensorVec":
        if vec.n != self.n or vec.legs != self.legs:
            raise TensorError("dimension mismatch in apply")
        out: dict = {}
        for r, cols in self.rows.items():
            acc = ZERO
            for c, v in cols.items():
                x = vec.data.get(c)
                if x is not None:
                    acc = acc + v * x
            if acc:
                out[r] = acc
        return TensorVec(self.n, self.legs, out)

    def to_matrix(self) -> list:
        d = self.dim
        m = [[ZERO] * d for _ in range(d)]
        for r, cols in self.rows.items():
            for c, v in cols.items():
                m[r][c] = v
        return m

    def dump(self) -> str:
        return dump(self)


class TensorVec:
    """Vector in V^(x)k (column side)."""

    __slots__ = ("n", "legs", "data")
    side = "vec"

    def __init__(self, n: int, legs: int, data: dict | None = None):
        self.n = n
        self.legs = legs
        self.data = {k: v for k, v in (data or {}).items() if v}

    @classmethod
    def from_entries(cls, n: int, legs: int, entries: Iterable):
        data: dict = {}
        for idx, v in entries:
            v = _coerce(v)
            k = pack(idx, n) if isinstance(idx, tuple) else idx
            data[k] = data.get(k, ZERO) + v
        return cls(n, legs, data)

    def get(self, idx) -> QScalar:
        k = pack(idx, self.n) if isinstance(idx, tuple) else idx
        return self.data.get(k, ZERO)

    def entries(self):
        for k in sorted(self.data):
            yield unpack(k, self.n, self.legs), self.data[k]

    def scale(self, s) -> "TensorVec":
        s = _coerce(s)
        return type(self)(self.n, self.legs, {k: v * s for k, v in self.data.items()})

    def __add__(self, other):
        data = dict(self.data)
        for k, v in other.data.items():
            data[k] = data.get(k, ZERO) + v
        return type(self)(self.n, self.legs, data)

    def __sub__(self, other):
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other):
        if not isinstance(other, TensorVec):
            return NotImplemented
        return (type(self) is type(other) and self.n == other.n
                and self.legs == other.legs and self.data == other.data)

    def __hash__(self):
        return hash((self.n, self.legs, len(self.data)))

    def tensor(self, other: "TensorVec") -> "TensorVec":
        shift = other.n ** other.legs
        data = {}
        for a, x in self.data.items():
            for b, y in other.data.items():
                data[a * shift + b] = x * y
        return type(self)(self.n, self.legs + other.legs, data)

    def subs_q(self, value):
        return type(self)(self.n, self.legs, {k: v.subs(value) for k, v in self.data.items()})

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, legs={self.legs}, nnz={len(self.data)})"


class TensorCovec(TensorVec):
    """Covector on V^(x)k (row side)."""

    side = "covec"

    def pair(self, vec: TensorVec) -> QScalar:
        acc = ZERO
        for k, v in self.data.items():
            x = vec.data.get(k)
            if x is not None:
                acc = acc + v * x
        return acc

    def compose(self, op: TensorOp) -> "TensorCovec":
        """Covector ``self o op``."""
        out: dict = {}
        for r, a in self.data.items():
            for c, v in op.rows.get(r, {}).items():
                out[c] = out.get(c, ZERO) + a * v
        return TensorCovec(self.n, self.legs, out)


def outer(vec: TensorVec, covec: TensorCovec) -> TensorOp:
    """Rank-one operator ``|vec><covec|``."""
    rows = {r: {c: a * b for c, b in covec.data.items()} for r, a in vec.data.items()}
    return TensorOp(vec.n, vec.legs, rows)


# ---------------------------------------------------------------------------
# Operations


def compose(a: TensorOp, b: TensorOp) -> TensorOp:
    """Exact operator product ``a o b``."""
    a._check(b)
    brows = b.rows
    rows = {}
    for r, acols in a.rows.items():
        acc: dict = {}
        for m, x in acols.items():
            brow = brows.get(m)
            if not brow:
                continue
            for c, y in brow.items():
                t = x * y
                old = acc.get(c)
                acc[c] = t if old is None else old + t
        acc = {c: v for c, v in acc.items() if v}
        if acc:
            rows[r] = acc
    return TensorOp(a.n, a.legs, rows)


def commutator(a: TensorOp, b: TensorOp) -> TensorOp:
    return compose(a, b) - compose(b, a)


def embed(a: TensorOp, legs: Sequence[int] = (1, 2), total: int = 3) -> TensorOp:
    """Place ``a`` on the listed legs (1-based, in order) of V^(x)total.

    ``embed(A, (1, 3))`` is the usual ``A_13``; ``embed(A, (2, 1))`` is ``A_21``
    inside a 3-fold product.
    """
    legs = tuple(legs)
    if len(legs) != a.legs or len(set(legs)) != len(legs) or any(l < 1 or l > total for l in legs):
        raise TensorError(f"invalid leg placement {legs} for a {a.legs}-leg operator in {total} legs")
    if total > MAX_LEGS:
        raise TensorError(f"at most {MAX_LEGS} legs supported")
    n = a.n
    rest = [l for l in range(1, total + 1) if l not in legs]
    rows: dict = {}
    for r, cols in a.rows.items():
        ri = unpack(r, n, a.legs)
        for other in itertools.product(range(n), repeat=len(rest)):
            full = [0] * total
            for l, i in zip(rest, other):
                full[l - 1] = i
            for l, i in zip(legs, ri):
                full[l - 1] = i
            R = pack(full, n)
            row = rows.setdefault(R, {})
            for c, v in cols.items():
                ci = unpack(c, n, a.legs)
                for l, i in zip(legs, ci):
                    full[l - 1] = i
                row[pack(full, n)] = v
            for l, i in zip(legs, ri):
                full[l - 1] = i
    return TensorOp(n, total, rows)


def transpose_legs(a: TensorOp) -> TensorOp:
    """The flip ``A_21 = P A P`` of a two-leg operator."""
    if a.legs != 2:
        raise TensorError("transpose_legs needs a two-leg operator")
    n = a.n
    sw = lambda k: (k % n) * n + k // n  # noqa: E731
    return TensorOp(n, 2, {sw(r): {sw(c): v for c, v in cols.items()} for r, cols in a.rows.items()})


def kron(a: TensorOp, b: TensorOp) -> TensorOp:
    """``a (x) b`` acting on V^(x)(ka + kb)."""
    if a.n != b.n:
        raise TensorError("dimension mismatch")
    shift = b.n ** b.legs
    rows = {}
    for ra, ca in a.rows.items():
        for rb, cb in b.rows.items():
            rows[ra * shift + rb] = {x * shift + y: u * v for x, u in ca.items() for y, v in cb.items()}
    return TensorOp(a.n, a.legs + b.legs, rows)


def lagrange_projectors(a: TensorOp, eigenvalues: Sequence) -> list[TensorOp]:
    """Spectral projectors ``P_i = prod_{j != i} (A - l_j)/(l_i - l_j)``.

    Raises :class:`TensorError` when two eigenvalues coincide or when the
    product ``prod (A - l_i)`` is not zero (the supplied spectrum is not a
    splitting set for the minimal polynomial).
    """
    lams = [_coerce(l) for l in eigenvalues]
    for i, j in itertools.combinations(range(len(lams)), 2):
        if lams[i] == lams[j]:
            raise TensorError(f"coincident eigenvalues {lams[i]}")
    ident = TensorOp.identity(a.n, a.legs)
    shifted = [a - ident.scale(l) for l in lams]
    acc = ident
    for s in shifted:
        acc = compose(acc, s)
    if not acc.is_zero():
        raise TensorError("operator is not annihilated by the product over the given spectrum")
    projs = []
    for i, li in enumerate(lams):
        p = ident
        denom = ONE
        for j, lj in enumerate(lams):
            if j != i:
                p = compose(p, shifted[j])
                denom = denom * (li - lj)
        projs.append(p.scale(denom.inverse()))
    return projs


def symmetrizer3(n: int) -> TensorOp:
    total = TensorOp.zero(n, 3)
    for perm in itertools.permutations(range(3)):
        total = total + TensorOp.permutation(n, perm)
    return total.scale(QScalar.const(1) / 6)


def antisymmetrizer2(n: int) -> TensorOp:
    half = QScalar.const(1) / 2
    return (TensorOp.identity(n, 2) - TensorOp.swap(n)).scale(half)


def symmetrizer2(n: int) -> TensorOp:
    half = QScalar.const(1) / 2
    return (TensorOp.identity(n, 2) + TensorOp.swap(n)).scale(half)


def right_symmetrize(t: TensorOp) -> TensorOp:
    """``t`` composed on the input side with the total symmetrizer of V^(x)3."""
    if t.legs != 3:
        raise TensorError("right_symmetrize needs a three-leg operator")
    return compose(t, symmetrizer3(t.n))


def rank(a: TensorOp) -> int:
    """Exact rank over Q(i)(q)."""
    ech = Echelon()
    ech.extend(a.rows.values())
    return ech.rank


def kernel_dim(a: TensorOp) -> int:
    return a.dim - rank(a)


def column_space_vector(a: TensorOp) -> TensorVec:
    """Some nonzero column of ``a`` (the lowest-index one)."""
    cols: dict = {}
    for r, row in a.rows.items():
        for c, v in row.items():
            cols.setdefault(c, {})[r] = v
    if not cols:
        raise TensorError("zero operator has no nonzero column")
    c = min(cols)
    return TensorVec(a.n, a.legs, cols[c])


def row_space_covector(a: TensorOp) -> TensorCovec:
    if not a.rows:
        raise TensorError("zero operator has no nonzero row")
    r = min(a.rows)
    return TensorCovec(a.n, a.legs, dict(a.rows[r]))


# ---------------------------------------------------------------------------
# Dump format: "k n | row_idx col_idx | qscalar_text"


def dump(a: TensorOp) -> str:
    lines = []
    for r in sorted(a.rows):
        row = a.rows[r]
        for c in sorted(row):
            lines.append(f"{a.legs} {a.n} | {r} {c} | {row[c].to_text()}")
    return "\n".join(lines) + ("\n" if lines else "")


def load(text: str, n: int | None = None, legs: int | None = None) -> TensorOp:
    rows: dict = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        head, idx, val = (part.strip() for part in line.split("|", 2))
        k, nn = (int(x) for x in head.split())
        if legs is not None and k != legs or n is not None and nn != n:
            raise TensorError("dump header does not match requested shape")
        legs, n = k, nn
        r, c = (int(x) for x in idx.split())
        rows.setdefault(r, {})[c] = QScalar.from_text(val)
    if n is None:
        raise TensorError("empty dump needs explicit n and legs")
    return TensorOp(n, legs, rows)
