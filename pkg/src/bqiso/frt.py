"""Orthogonal-series quantum R-matrix and its spectral data.

The braid-form matrix ``what`` (Ŵ) is assembled entrywise in the basis where
the metric is antidiagonal (``i' = N-1-i`` with 0-based indices) and then
validated: its minimal polynomial must split over ``{q, -1/q, q^(1-N)}``,
the Yang-Baxter defect of ``W = P Ŵ`` must vanish, and ``W`` must preserve
the metric vector.  For odd ``N`` the textbook formula involves ``q^(1/2)``;
a diagonal change of basis that rescales the middle basis vector by
``(q^(1/2) + q^(-1/2))^(-1/2)`` removes every half-integer power while keeping
the rescaling real for ``|q| = 1`` (so the reality identity survives).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .echelon import nullspace
from .scalars import ONE, ZERO, PoleError, QScalar, q, taylor_at_one
from .tensor import (
    TensorCovec,
    TensorError,
    TensorOp,
    TensorVec,
    column_space_vector,
    compose,
    embed,
    lagrange_projectors,
    pack,
    rank,
    row_space_covector,
    transpose_legs,
)

MIN_N, MAX_N = 2, 8


class ValidationError(RuntimeError):
    """The assembled R-matrix failed one of its defining identities."""


@dataclass(frozen=True, eq=False)
class SoQData:
    n: int
    what: TensorOp
    w_mat: TensorOp
    eta: TensorVec
    eta_prime: TensorCovec
    p_plus: TensorOp
    p_minus: TensorOp
    p_zero: TensorOp
    r_hat: TensorOp
    sigma: QScalar
    warnings: tuple = ()

    @property
    def r_mat(self) -> TensorOp:
        """``R = P R̂``, the YBE-form partner of the involutive intertwiner."""
        return compose(TensorOp.swap(self.n), self.r_hat)

    @property
    def eigenvalues(self) -> tuple:
        return spectrum(self.n)

    def ranks(self) -> dict:
        return {"plus": rank(self.p_plus), "minus": rank(self.p_minus), "zero": rank(self.p_zero)}

    def header(self) -> dict:
        return {"n": self.n, "sigma": self.sigma.to_text(), "ranks": self.ranks()}


@dataclass(frozen=True, eq=False)
class ClassicalLimit:
    n: int
    w: TensorOp
    r: TensorOp
    s: TensorOp
    h_basis: list
    eta: list  # contravariant metric at q = 1 as an N x N matrix of QScalar
    nu: Optional[QScalar] = None
    cybe_defect: Optional[TensorOp] = None
    extras: dict = field(default_factory=dict)


def spectrum(n: int) -> tuple:
    """Eigenvalues of Ŵ attached to P+, P-, P0."""
    return (q(1), -q(-1), q(1 - n))


def mirror(i: int, n: int) -> int:
    return n - 1 - i


def _two_rho(n: int) -> list:
    """``2 * rho`` as integers: (N-2, N-4, ..., reflected), with the even-N zero doubled."""
    half = n // 2
    top = [n - 2 - 2 * k for k in range(half)]
    mid = [0] if n % 2 else []
    return top + mid + [-t for t in reversed(top)]


def _coupling(n: int, i: int, j: int) -> QScalar:
    """Coefficient of ``E_ij (x) E_i'j'`` (``i > j``) in the gauged W."""
    two = _two_rho(n)
    t = two[i] - two[j]
    mid = n // 2 if n % 2 else None
    qm1 = q(1) - ONE
    if i == mid:
        return -(qm1 * q((t + 1) // 2 - 1))
    if j == mid:
        qp1 = q(1) + ONE
        return -(qm1 * qp1 * qp1 * q((t - 1) // 2 - 1))
    return -((q(1) - q(-1)) * q(t // 2))


def assemble_w(n: int) -> TensorOp:
    """The YBE-form R-matrix ``W`` in the antidiagonal-metric basis (unvalidated)."""
    if not MIN_N <= n <= MAX_N:
        raise ValueError(f"N must be in [{MIN_N}, {MAX_N}], got {n}")
    entries = []
    qq, qi = q(1), q(-1)
    for i in range(n):
        ip = mirror(i, n)
        for j in range(n):
            if i == j:
                val = ONE if i == ip else qq
            elif j == ip:
                val = qi
            else:
                val = ONE
            entries.append((((i, j), (i, j)), val))
    for i in range(n):
        for j in range(i):
            # E_ij (x) E_ji sends e_j (x) e_i to e_i (x) e_j
            entries.append((((i, j), (j, i)), qq - qi))
            entries.append((((i, mirror(i, n)), (j, mirror(j, n))), _coupling(n, i, j)))
    return TensorOp.from_entries(n, 2, entries)


def ybe_defect(t: TensorOp, style: str = "legs") -> TensorOp:
    """``T12 T13 T23 - T23 T13 T12`` (``style='legs'``) or the braid form
    ``T12 T23 T12 - T23 T12 T23`` (``style='braid'``)."""
    if t.legs != 2:
        raise TensorError("ybe_defect needs a two-leg operator")
    a, b, c = embed(t, (1, 2)), embed(t, (1, 3)), embed(t, (2, 3))
    if style == "legs":
        return compose(compose(a, b), c) - compose(compose(c, b), a)
    if style == "braid":
        return compose(compose(a, c), a) - compose(compose(c, a), c)
    raise ValueError(f"unknown YBE style {style!r}")


def _normalize_vec(v: TensorVec) -> TensorVec:
    lead = v.data[min(v.data)]
    return v.scale(lead.inverse())


def metric_vectors(p_zero: TensorOp) -> tuple[TensorVec, TensorCovec]:
    eta = _normalize_vec(column_space_vector(p_zero))
    cov = row_space_covector(p_zero)
    cov = TensorCovec(cov.n, cov.legs, cov.data)
    lead = cov.data[min(cov.data)]
    return eta, cov.scale(lead.inverse())


def solve_sigma(proj: TensorOp, what: TensorOp) -> Optional[QScalar]:
    """The scalar ``sigma`` with ``proj (what + sigma I) = 0``, or ``None``."""
    if proj.is_zero():
        return None
    pw = compose(proj, what)
    r = min(proj.rows)
    c = min(proj.rows[r])
    sigma = -(pw.get(r, c) / proj.rows[r][c])
    ident = TensorOp.identity(what.n, what.legs)
    if compose(proj, what + ident.scale(sigma)).is_zero():
        return sigma
    return None


def build(n: int, validate: bool = True) -> SoQData:
    """Assemble and validate the orthogonal quantum group data for ``N = n``."""
    w_mat = assemble_w(n)
    swap = TensorOp.swap(n)
    what = compose(swap, w_mat)
    try:
        p_plus, p_minus, p_zero = lagrange_projectors(what, spectrum(n))
    except TensorError as exc:
        raise ValidationError(f"N={n}: spectrum check failed: {exc}") from exc
    eta, eta_prime = metric_vectors(p_zero)
    ident = TensorOp.identity(n, 2)
    r_hat = ident - p_minus.scale(2)
    sigma = solve_sigma(p_minus, what)
    warnings = []
    if n == 2:
        warnings.append("N=2: so(2) is abelian; P0 and P- eigenvalues are q^-1 and -q^-1")
    data = SoQData(n=n, what=what, w_mat=w_mat, eta=eta, eta_prime=eta_prime,
                   p_plus=p_plus, p_minus=p_minus, p_zero=p_zero, r_hat=r_hat,
                   sigma=sigma, warnings=tuple(warnings))
    if validate:
        _validate(data)
    return data


def _validate(data: SoQData) -> None:
    n = data.n
    if not ybe_defect(data.w_mat).is_zero():
        raise ValidationError(f"N={n}: Yang-Baxter defect of W is nonzero")
    ok, _ = check_metric_compat(data)
    if not ok:
        raise ValidationError(f"N={n}: W does not preserve the metric vector")
    ranks = data.ranks()
    expected = {"plus": n * (n + 1) // 2 - 1, "minus": n * (n - 1) // 2, "zero": 1}
    if ranks != expected:
        raise ValidationError(f"N={n}: projector ranks {ranks} != {expected}")
    if data.sigma is None:
        raise ValidationError(f"N={n}: P- is not a single-eigenvalue projector")


def spectral_reconstruction_defect(data: SoQData) -> TensorOp:
    lp, lm, l0 = spectrum(data.n)
    rebuilt = data.p_plus.scale(lp) + data.p_minus.scale(lm) + data.p_zero.scale(l0)
    return rebuilt - data.what


def check_reality(data: SoQData, w: Optional[TensorOp] = None) -> tuple[bool, TensorOp]:
    """``W star(W) - I``; true when it vanishes identically."""
    w = data.w_mat if w is None else w
    defect = compose(w, w.star()) - TensorOp.identity(w.n, w.legs)
    return defect.is_zero(), defect


def metric_compat_defect(w: TensorOp, eta: TensorVec) -> TensorOp:
    """The operator ``v -> W13 W23 (eta (x) v) - eta (x) v`` as a map V -> V^(x)3."""
    n = w.n
    op = compose(embed(w, (1, 3)), embed(w, (2, 3)))
    rows: dict = {}
    for c in range(n):
        e_c = TensorVec(n, 1, {c: ONE})
        vec = eta.tensor(e_c)
        out = op.apply(vec) - vec
        for r, v in out.data.items():
            rows.setdefault(r, {})[c] = v
    return TensorOp(n, 3, {r: {c: v for c, v in cols.items()} for r, cols in rows.items()})


def check_metric_compat(data: SoQData, w: Optional[TensorOp] = None) -> tuple[bool, TensorOp]:
    w = data.w_mat if w is None else w
    defect = metric_compat_defect(w, data.eta)
    return defect.is_zero(), defect


def check_spectral_condition(data: SoQData, proj: Optional[TensorOp] = None,
                             what: Optional[TensorOp] = None) -> Optional[QScalar]:
    """The unique ``sigma`` with ``P- (Ŵ + sigma I) = 0`` (or ``None``)."""
    proj = data.p_minus if proj is None else proj
    what = data.what if what is None else what
    return solve_sigma(proj, what)


def sigma_candidates(n: int) -> list[QScalar]:
    return [s * q(k) for k in range(-n, n + 1) for s in (ONE, -ONE)]


def eta_matrix(eta: TensorVec) -> list:
    n = eta.n
    return [[eta.get((j, k)) for k in range(n)] for j in range(n)]


def matrix_inverse(m: list) -> list:
    """Gauss-Jordan inverse of a small dense matrix of QScalar."""
    n = len(m)
    a = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def signature(m: list) -> tuple[int, int]:
    """(positive, negative) inertia of a real symmetric rational matrix, by congruence."""
    a = [[QScalar.coerce(x).constant_value() for x in row] for row in m]
    pos = neg = 0
    while a:
        k = len(a)
        piv = next((i for i in range(k) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k) for j in range(k) if a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # congruence e_i -> e_i + e_j makes the (i, i) entry 2 a_ij
            a[i] = [x + y for x, y in zip(a[i], a[j])]
            for row in a:
                row[i] = row[i] + row[j]
            continue
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in range(k) if i != piv]
        a = [[a[i][j] - a[i][piv] * a[piv][j] / d for j in rest] for i in rest]
    return pos, neg


def invariance_basis(eta: list) -> list[TensorOp]:
    """Basis of ``{X : X eta + eta X^T = 0}`` as one-leg operators."""
    n = len(eta)
    rows = []
    for a in range(n):
        for b in range(n):
            row = {}
            # (X eta)^{ab} = sum_c X^a_c eta^{cb};  (eta X^T)^{ab} = sum_c eta^{ac} X^b_c
            for c in range(n):
                if eta[c][b]:
                    key = (a, c)
                    row[key] = row.get(key, ZERO) + eta[c][b]
                if eta[a][c]:
                    key = (b, c)
                    row[key] = row.get(key, ZERO) + eta[a][c]
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    cols = [(a, c) for a in range(n) for c in range(n)]
    basis = nullspace(rows, cols)
    out = []
    for v in basis:
        out.append(TensorOp.from_entries(n, 1, [(((a,), (c,)), x) for (a, c), x in v.items()]))
    return out


def classical_limit(data: SoQData) -> ClassicalLimit:
    """First-order data of ``W`` at ``q = 1``: ``W = I + (q - 1) w + ...``."""
    from .poisson import drinfeld_bracket, killing_element, proportionality

    n = data.n
    w_rows: dict = {}
    for r, cols in data.w_mat.rows.items():
        for c, v in cols.items():
            try:
                c0, c1 = taylor_at_one(v, 1)
            except PoleError as exc:
                raise ValidationError(f"N={n}: W has a pole at q=1") from exc
            if c0 != (1 if r == c else 0):
                raise ValidationError(f"N={n}: W(1) is not the identity")
            if c1:
                w_rows.setdefault(r, {})[c] = QScalar.const(c1)
    w = TensorOp(n, 2, w_rows)
    w21 = transpose_legs(w)
    half = QScalar.const(1) / 2
    r = (w - w21).scale(half)
    s = (w + w21).scale(half)
    eta1 = [[x.subs(1) for x in row] for row in eta_matrix(data.eta)]
    s_tilde = killing_element(eta1)
    nu = proportionality(s, s_tilde)
    return ClassicalLimit(n=n, w=w, r=r, s=s, h_basis=invariance_basis(eta1), eta=eta1,
                          nu=nu, cybe_defect=drinfeld_bracket(w))


def apply_to_pair(a: TensorOp, i: int, j: int) -> TensorVec:
    """``a (e_i (x) e_j)``."""
    col = pack((i, j), a.n)
    return TensorVec(a.n, 2, {r: cols[col] for r, cols in a.rows.items() if col in cols})


def expected_ranks(n: int) -> dict:
    return {"plus": n * (n + 1) // 2 - 1, "minus": n * (n - 1) // 2, "zero": 1}


def classical_dimension(n: int, d: int) -> int:
    return math.comb(n + d - 1, d)
