"""Classical (Poisson) side: tensor identities and the bracket algebra on G x G.

Tensor conventions: a two-leg operator ``rho`` has entries ``rho^{ik}_{ab}``
(row ``(i, k)``, column ``(a, b)``) and acts on ``e_a (x) e_b``.  Coordinates
are ``h^i_j`` (matrix part), ``x^i`` (translation part) and their primed
copies on the second factor of ``G x G``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from gmpy2 import mpq

from .scalars import ONE, ZERO, QScalar, as_coeff, coeff_text
from .tensor import TensorOp, TensorVec, commutator, compose, embed, right_symmetrize, transpose_legs


# ---------------------------------------------------------------------------
# Tensor identities


def drinfeld_bracket(rho: TensorOp) -> TensorOp:
    """``[[rho, rho]] = [rho12, rho13] + [rho12, rho23] + [rho13, rho23]``."""
    a, b, c = embed(rho, (1, 2)), embed(rho, (1, 3)), embed(rho, (2, 3))
    return commutator(a, b) + commutator(a, c) + commutator(b, c)


def _inverse(eta: list) -> list:
    from .frt import matrix_inverse

    return matrix_inverse(eta)


def killing_element(eta: list) -> TensorOp:
    """``s^{jk}_{lm} = eta^{jk} eta_{lm} - delta^j_m delta^k_l`` for a symmetric metric."""
    n = len(eta)
    eta = [[QScalar.coerce(x) for x in row] for row in eta]
    for j in range(n):
        for k in range(n):
            if eta[j][k] != eta[k][j]:
                raise ValueError("metric must be symmetric")
    try:
        low = _inverse(eta)
    except ValueError as exc:
        raise ValueError("singular metric") from exc
    entries = []
    for j, k, l, m in itertools.product(range(n), repeat=4):
        v = eta[j][k] * low[l][m]
        if j == m and k == l:
            v = v - ONE
        if v:
            entries.append((((j, k), (l, m)), v))
    return TensorOp.from_entries(n, 2, entries)


def omega(eta: list) -> TensorOp:
    """``[s12, s13]`` for the Killing element of ``eta``."""
    s = killing_element(eta)
    return commutator(embed(s, (1, 2)), embed(s, (1, 3)))


def omega_closed_form(eta: list) -> TensorOp:
    """The eight-term index formula for the invariant three-tensor."""
    n = len(eta)
    eta = [[QScalar.coerce(x) for x in row] for row in eta]
    low = _inverse(eta)
    d = lambda a, b: ONE if a == b else ZERO  # noqa: E731
    entries = []
    for a, b, c, j, k, l in itertools.product(range(n), repeat=6):
        v = (eta[a][b] * low[j][l] * d(c, k) + eta[a][c] * low[k][l] * d(b, j)
             + eta[b][c] * low[j][k] * d(a, l) - eta[a][b] * low[k][l] * d(c, j)
             - eta[b][c] * low[j][l] * d(a, k) - eta[a][c] * low[j][k] * d(b, l)
             + d(a, k) * d(b, l) * d(c, j) - d(a, l) * d(b, j) * d(c, k))
        if v:
            entries.append((((a, b, c), (j, k, l)), v))
    return TensorOp.from_entries(n, 3, entries)


def proportionality(a: TensorOp, b: TensorOp) -> Optional[QScalar]:
    """``nu`` with ``a = nu b``, or ``None`` when no such scalar exists."""
    if b.is_zero():
        return ZERO if a.is_zero() else None
    r = min(b.rows)
    c = min(b.rows[r])
    nu = a.get(r, c) / b.rows[r][c]
    return nu if (a - b.scale(nu)).is_zero() else None


def symmetric_kills(t: TensorOp) -> bool:
    """True when ``t`` annihilates every ``x (x) x (x) x``."""
    return right_symmetrize(t).is_zero()


def killing_defect(eta: list) -> TensorOp:
    """``s - P s - (I - P)`` for the Killing element; zero for every metric."""
    n = len(eta)
    s = killing_element(eta)
    swap = TensorOp.swap(n)
    return (s - compose(swap, s)) - (TensorOp.identity(n, 2) - swap)


def change_basis(op: TensorOp, c: list) -> TensorOp:
    """``(C (x) ... (x) C) op (C (x) ... (x) C)^-1`` for an N x N matrix ``C``."""
    from .frt import matrix_inverse
    from .tensor import kron

    cm = TensorOp.from_matrix(c)
    ci = TensorOp.from_matrix(matrix_inverse([[QScalar.coerce(x) for x in row] for row in c]))
    left, right = cm, ci
    for _ in range(op.legs - 1):
        left, right = kron(left, cm), kron(right, ci)
    return compose(compose(left, op), right)


def congruence(eta: list, c: list) -> list:
    """``C eta C^T``."""
    n = len(eta)
    return [[sum((QScalar.coerce(c[i][a]) * eta[a][b] * QScalar.coerce(c[j][b])
                  for a in range(n) for b in range(n)), ZERO) for j in range(n)] for i in range(n)]


def diagonalizing_basis(eta: list) -> list:
    """An invertible rational ``C`` with ``C eta C^T`` diagonal.

    For the antidiagonal metrics of the orthogonal series this pairs each
    ``e_i`` with its mirror ``e_i'`` into ``e_i +- e_i'``.
    """
    n = len(eta)
    c = []
    done = set()
    for i in range(n):
        if i in done:
            continue
        j = n - 1 - i
        if j == i or not eta[i][j]:
            c.append([ONE if k == i else ZERO for k in range(n)])
            done.add(i)
            continue
        c.append([ONE if k in (i, j) else ZERO for k in range(n)])
        c.append([ONE if k == i else (-ONE if k == j else ZERO) for k in range(n)])
        done.update((i, j))
    diag = congruence(eta, c)
    for a in range(n):
        for b in range(n):
            if a != b and diag[a][b]:
                raise ValueError("metric is not diagonalized by mirror pairing")
    return c


# ---------------------------------------------------------------------------
# Coordinates on G x G and commutative polynomials

SORTS = ("h", "h'", "x", "x'")


class Coordinates:
    """Variable numbering for ``h, h', x, x'`` (in that order) at dimension ``n``."""

    def __init__(self, n: int):
        self.n = n
        self.size = 2 * n * n + 2 * n

    def h(self, i: int, j: int, primed: bool = False) -> int:
        return (self.n * self.n if primed else 0) + i * self.n + j

    def x(self, k: int, primed: bool = False) -> int:
        return 2 * self.n * self.n + (self.n if primed else 0) + k

    def sort(self, v: int) -> str:
        nn = self.n * self.n
        if v < nn:
            return "h"
        if v < 2 * nn:
            return "h'"
        return "x" if v < 2 * nn + self.n else "x'"

    def is_primed(self, v: int) -> bool:
        return self.sort(v).endswith("'")

    def is_x(self, v: int) -> bool:
        return v >= 2 * self.n * self.n

    def indices(self, v: int) -> tuple:
        nn = self.n * self.n
        if v < 2 * nn:
            return divmod(v % nn, self.n)
        return ((v - 2 * nn) % self.n,)

    def name(self, v: int) -> str:
        idx = self.indices(v)
        return self.sort(v) + "".join(f"[{i}]" for i in idx)

    def parse(self, text: str) -> int:
        text = text.strip()
        primed = "'" in text
        body = text.replace("'", "")
        parts = [int(p) for p in body[1:].strip("[]").split("][")]
        if body[0] == "h" and len(parts) == 2:
            return self.h(*parts, primed=primed)
        if body[0] == "x" and len(parts) == 1:
            return self.x(parts[0], primed=primed)
        raise ValueError(f"bad coordinate name {text!r}")

    def generators(self, copies=(False, True)) -> list[int]:
        out = []
        for primed in copies:
            out += [self.h(i, j, primed) for i in range(self.n) for j in range(self.n)]
        for primed in copies:
            out += [self.x(k, primed) for k in range(self.n)]
        return sorted(out)


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


class PoissonPoly:
    """Commutative polynomial: ``{sorted variable tuple: Gaussian rational}``."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[dict] = None):
        self.n = n
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, n: int, v: int, coeff=1) -> "PoissonPoly":
        return cls(n, {(v,): as_coeff(coeff)})

    @classmethod
    def const(cls, n: int, c) -> "PoissonPoly":
        return cls(n, {(): as_coeff(c)})

    @classmethod
    def monomial(cls, n: int, vars_: Sequence[int], coeff=1) -> "PoissonPoly":
        return cls(n, {tuple(sorted(vars_)): as_coeff(coeff)})

    def _check(self, other):
        if not isinstance(other, PoissonPoly):
            raise TypeError(f"expected PoissonPoly, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PoissonPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, len(self.terms)))

    def __add__(self, other: "PoissonPoly") -> "PoissonPoly":
        self._check(other)
        out = dict(self.terms)
        _accumulate(out, other.terms)
        return PoissonPoly(self.n, out)

    def __neg__(self):
        return PoissonPoly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PoissonPoly":
        c = as_coeff(c)
        return PoissonPoly(self.n, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PoissonPoly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                t = c1 * c2
                old = out.get(m)
                out[m] = t if old is None else old + t
        return PoissonPoly(self.n, out)

    __rmul__ = scale

    def partials(self) -> dict:
        """``{v: d self / d v}`` for every variable that occurs."""
        out: dict = {}
        for m, c in self.terms.items():
            prev = None
            for pos, v in enumerate(m):
                if v == prev:
                    continue
                prev = v
                k = m.count(v)
                rest = m[:pos] + m[pos + 1:]
                d = out.setdefault(v, {})
                t = c * k
                old = d.get(rest)
                d[rest] = t if old is None else old + t
        return {v: PoissonPoly(self.n, d) for v, d in out.items()}

    def variables(self) -> set:
        return {v for m in self.terms for v in m}

    def degree(self, pred=lambda v: True) -> set:
        """Set of degrees of the monomials counted over variables with ``pred``."""
        return {sum(1 for v in m if pred(v)) for m in self.terms}

    def evaluate(self, point: dict):
        acc = mpq(0)
        for m, c in self.terms.items():
            t = c
            for v in m:
                t = t * point[v]
            acc = acc + t
        return acc

    def substitute(self, images: dict) -> "PoissonPoly":
        """Replace variables by polynomials (unlisted variables stay)."""
        out = PoissonPoly(self.n)
        cache: dict = {}
        for m, c in self.terms.items():
            t = PoissonPoly.const(self.n, c)
            for v in m:
                img = cache.get(v)
                if img is None:
                    img = images.get(v) or PoissonPoly.var(self.n, v)
                    cache[v] = img
                t = t * img
            out = out + t
        return out

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        coords = Coordinates(self.n)
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[m]
            mono = "*".join(coords.name(v) for v in m)
            cs = coeff_text(c)
            parts.append(f"({cs})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"PoissonPoly({self.to_text()})"


def _accumulate(out: dict, terms: dict, factor=None) -> None:
    for m, c in terms.items():
        if factor is not None:
            c = c * factor
        old = out.get(m)
        if old is None:
            out[m] = c
        else:
            new = old + c
            if new:
                out[m] = new
            else:
                del out[m]


# ---------------------------------------------------------------------------
# Bracket tables


def _const_entries(op: Optional[TensorOp]) -> dict:
    """``{(row_multi, col_multi): coeff}`` for an operator with constant entries."""
    if op is None:
        return {}
    return {k: v.constant_value() for k, v in op.entries()}


def _by_row(entries: dict) -> dict:
    out: dict = {}
    for (r, c), v in entries.items():
        out.setdefault(r, []).append((c, v))
    return out


def _by_col(entries: dict) -> dict:
    out: dict = {}
    for (r, c), v in entries.items():
        out.setdefault(c, []).append((r, v))
    return out


class SpecError(ValueError):
    """The bracket-table data violates a structural invariant."""


@dataclass(frozen=True, eq=False)
class PoissonSpec:
    """Bracket-table data on ``G x G``.

    ``c_r`` is the ``h (x) h`` part (the r-matrix), ``w`` couples ``x`` to
    ``h`` (defaults to ``c_r + s_sym``), ``a`` is an antisymmetric element of
    ``V (x) V`` (a two-leg vector), ``b`` holds the ``V (x) h`` components
    ``b^{ik}_l`` as a three-leg vector, and ``nu`` sets the cross bracket
    ``{x'^k, x^j} = nu x^j x'^k``.
    """

    n: int
    c_r: TensorOp
    w: Optional[TensorOp] = None
    s_sym: Optional[TensorOp] = None
    a: Optional[TensorVec] = None
    b: Optional[TensorVec] = None
    nu: object = None
    eta_classical: Optional[list] = None
    basis: str = "antidiagonal"

    def __post_init__(self):
        n = self.n
        if self.nu is not None:
            nu = self.nu.constant_value() if isinstance(self.nu, QScalar) else as_coeff(self.nu)
            object.__setattr__(self, "nu", nu)
        for name in ("c_r", "w", "s_sym"):
            op = getattr(self, name)
            if op is not None and (op.n != n or op.legs != 2):
                raise SpecError(f"{name} must be a two-leg operator on dimension {n}")
        if transpose_legs(self.c_r) != -self.c_r:
            raise SpecError("c_r is not antisymmetric under the leg flip")
        if self.s_sym is not None:
            if transpose_legs(self.s_sym) != self.s_sym:
                raise SpecError("s_sym is not symmetric under the leg flip")
            if self.w is not None and self.w != self.c_r + self.s_sym:
                raise SpecError("w must equal c_r + s_sym")
        if self.a is not None:
            for (i, k), v in self.a.entries():
                if self.a.get((k, i)) != -v:
                    raise SpecError("a is not antisymmetric")

    @property
    def coupler(self) -> TensorOp:
        if self.w is not None:
            return self.w
        if self.s_sym is not None:
            return self.c_r + self.s_sym
        return self.c_r

    def with_nu(self, nu) -> "PoissonSpec":
        return PoissonSpec(self.n, self.c_r, self.w, self.s_sym, self.a, self.b, nu,
                           self.eta_classical, self.basis)


def zero_spec(n: int, nu=None) -> PoissonSpec:
    return PoissonSpec(n, TensorOp.zero(n, 2), nu=nu)


def spec_from_classical(cl, coupler: str = "r+s", nu=None) -> PoissonSpec:
    """Bracket data from a classical limit; ``coupler`` is ``'r+s'`` or ``'r'``.

    With ``'r+s'`` the cross scalar defaults to the proportionality constant of
    ``s`` against the Killing element; with ``'r'`` it defaults to zero.
    """
    if coupler == "r+s":
        return PoissonSpec(cl.n, cl.r, s_sym=cl.s, nu=cl.nu if nu is None else nu,
                           eta_classical=cl.eta)
    if coupler == "r":
        return PoissonSpec(cl.n, cl.r, w=cl.r, nu=0 if nu is None else nu, eta_classical=cl.eta)
    raise ValueError(f"unknown coupler {coupler!r}")


class BracketAlgebra:
    """The bilinear Leibniz bracket defined by a :class:`PoissonSpec`."""

    def __init__(self, spec: PoissonSpec):
        self.spec = spec
        self.n = spec.n
        self.coords = Coordinates(spec.n)
        c = _const_entries(spec.c_r)
        w = _const_entries(spec.coupler)
        self._c_row, self._c_col = _by_row(c), _by_col(c)
        self._w_row = _by_row(w)
        self._a = {k: v.constant_value() for k, v in spec.a.entries()} if spec.a else {}
        self._b = {k: v.constant_value() for k, v in spec.b.entries()} if spec.b else {}
        self._nu = as_coeff(spec.nu) if spec.nu is not None else mpq(0)
        self._cache: dict = {}

    # generator table ----------------------------------------------------
    def generator_bracket(self, u: int, v: int) -> PoissonPoly:
        if u == v:
            return PoissonPoly(self.n)
        if u > v:
            return -self.generator_bracket(v, u)
        hit = self._cache.get((u, v))
        if hit is None:
            hit = self._table(u, v)
            self._cache[(u, v)] = hit
        return hit

    def _table(self, u: int, v: int) -> PoissonPoly:
        co = self.coords
        n = self.n
        pu, pv = co.is_primed(u), co.is_primed(v)
        xu, xv = co.is_x(u), co.is_x(v)
        if pu != pv:
            if xu and xv:
                # u = x^j, v = x'^k:  {x^j, x'^k} = -nu x^j x'^k
                return PoissonPoly.monomial(n, (u, v), -self._nu)
            return PoissonPoly(n)
        p = pu
        if not xu and not xv:
            return self._hh(co.indices(u), co.indices(v), p)
        if xu and xv:
            return self._xx(co.indices(u)[0], co.indices(v)[0], p)
        if xu:
            return self._xh(co.indices(u)[0], co.indices(v), p)
        return -self._xh(co.indices(v)[0], co.indices(u), p)

    def _hh(self, ij, kl, p) -> PoissonPoly:
        (i, j), (k, l) = ij, kl
        h = lambda a, b: self.coords.h(a, b, p)  # noqa: E731
        out: dict = {}
        for (a, b), v in self._c_row.get((i, k), ()):
            _accumulate(out, {tuple(sorted((h(a, j), h(b, l)))): v})
        for (a, b), v in self._c_col.get((j, l), ()):
            _accumulate(out, {tuple(sorted((h(i, a), h(k, b)))): -v})
        return PoissonPoly(self.n, out)

    def _xh(self, i, kl, p) -> PoissonPoly:
        k, l = kl
        co, n = self.coords, self.n
        out: dict = {}
        for (a, b), v in self._w_row.get((i, k), ()):
            _accumulate(out, {tuple(sorted((co.x(a, p), co.h(b, l, p)))): v})
        for (bi, bk, bl), v in self._b.items():
            if bi == i and bk == k:
                _accumulate(out, {(co.h(bl, l, p),): v})
            if bl == l:
                _accumulate(out, {tuple(sorted((co.h(i, bi, p), co.h(k, bk, p)))): -v})
        return PoissonPoly(n, out)

    def _xx(self, i, k, p) -> PoissonPoly:
        co, n = self.coords, self.n
        out: dict = {}
        for (a, b), v in self._c_row.get((i, k), ()):
            _accumulate(out, {tuple(sorted((co.x(a, p), co.x(b, p)))): v})
        for (bi, bk, bl), v in self._b.items():
            if (bi, bk) == (i, k):
                _accumulate(out, {(co.x(bl, p),): v})
            if (bi, bk) == (k, i):
                _accumulate(out, {(co.x(bl, p),): -v})
        for (a, b), v in self._a.items():
            if (a, b) == (i, k):
                _accumulate(out, {(): v})
            _accumulate(out, {tuple(sorted((co.h(i, a, p), co.h(k, b, p)))): -v})
        return PoissonPoly(n, out)

    # polynomial bracket -------------------------------------------------
    def bracket(self, f: PoissonPoly, g: PoissonPoly) -> PoissonPoly:
        if f.n != self.n or g.n != self.n:
            raise ValueError(f"dimension mismatch: spec has n={self.n}")
        df, dg = f.partials(), g.partials()
        out: dict = {}
        for u, fu in df.items():
            for v, gv in dg.items():
                if u == v:
                    continue
                b = self.generator_bracket(u, v)
                if b:
                    _accumulate(out, (fu * gv * b).terms)
        return PoissonPoly(self.n, out)

    def jacobiator(self, f, g, h) -> PoissonPoly:
        br = self.bracket
        return br(br(f, g), h) + br(br(g, h), f) + br(br(h, f), g)

    def var(self, v: int) -> PoissonPoly:
        return PoissonPoly.var(self.n, v)


def bracket(spec: PoissonSpec, f: PoissonPoly, g: PoissonPoly) -> PoissonPoly:
    return BracketAlgebra(spec).bracket(f, g)


def jacobiator(spec: PoissonSpec, f, g, h) -> PoissonPoly:
    return BracketAlgebra(spec).jacobiator(f, g, h)


# ---------------------------------------------------------------------------
# Block-matrix route for the general (a, b, c) table


def block_generator_bracket(spec: PoissonSpec, u: int, v: int) -> PoissonPoly:
    """``{g^I_J, g^K_L} = r^{IK}_{AB} g^A_J g^B_L - g^I_A g^K_B r^{AB}_{JL}`` with
    ``g = [[h, x], [0, 1]]`` and ``r`` assembled on ``V + 1`` from ``a, b, c``.

    Only meaningful when the coupler is ``c_r`` itself (no symmetric part).
    Single-copy generators only.
    """
    n = spec.n
    co = Coordinates(n)
    star = n  # index of the extra basis vector
    big: dict = {}
    for (r, c), val in _const_entries(spec.c_r).items():
        big[r + c] = big.get(r + c, 0) + val
    if spec.b is not None:
        for (i, k, l), val in spec.b.entries():
            val = val.constant_value()
            big[(i, k, star, l)] = big.get((i, k, star, l), 0) + val
            big[(k, i, l, star)] = big.get((k, i, l, star), 0) - val
    if spec.a is not None:
        for (i, k), val in spec.a.entries():
            big[(i, k, star, star)] = big.get((i, k, star, star), 0) + val.constant_value()

    def g(row, col) -> PoissonPoly:
        if row == star:
            return PoissonPoly.const(n, 1 if col == star else 0)
        if col == star:
            return PoissonPoly.var(n, co.x(row))
        return PoissonPoly.var(n, co.h(row, col))

    def locate(var):
        idx = co.indices(var)
        return idx if len(idx) == 2 else (idx[0], star)

    (i, j), (k, l) = locate(u), locate(v)
    out = PoissonPoly(n)
    for (I, K, A, B), val in big.items():
        if (I, K) == (i, k):
            out = out + (g(A, j) * g(B, l)).scale(val)
        if (A, B) == (j, l):
            out = out - (g(i, I) * g(k, K)).scale(val)
    return out


# ---------------------------------------------------------------------------
# Jacobi checks


def _rand_rational(rng: random.Random):
    num = rng.randint(-5, 5)
    den = rng.randint(1, 4)
    return mpq(num, den)


def group_point(eta: list, rng: random.Random) -> list:
    """Exact rational element of ``{h : h eta h^T = eta}`` via the Cayley transform."""
    from .frt import matrix_inverse

    n = len(eta)
    eta_q = [[QScalar.coerce(x) for x in row] for row in eta]
    low = matrix_inverse(eta_q)
    for _ in range(50):
        anti = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = QScalar.const(_rand_rational(rng))
                anti[i][j], anti[j][i] = v, -v
        x = [[sum((anti[i][k] * low[k][j] for k in range(n)), ZERO) for j in range(n)]
             for i in range(n)]
        minus = [[(ONE if i == j else ZERO) - x[i][j] for j in range(n)] for i in range(n)]
        plus = [[(ONE if i == j else ZERO) + x[i][j] for j in range(n)] for i in range(n)]
        try:
            inv = matrix_inverse(minus)
        except ValueError:
            continue
        h = [[sum((inv[i][k] * plus[k][j] for k in range(n)), ZERO) for j in range(n)]
             for i in range(n)]
        if congruence(eta_q, h) != eta_q:
            raise ArithmeticError("Cayley transform left the metric group")
        return [[x.constant_value() for x in row] for row in h]
    raise ArithmeticError("no invertible Cayley denominator found")


def random_point(n: int, eta: list, rng: random.Random) -> dict:
    """Coordinates of a random point of ``G x G`` (both ``h`` factors on the group)."""
    co = Coordinates(n)
    point = {}
    for primed in (False, True):
        h = group_point(eta, rng)
        for i in range(n):
            for j in range(n):
                point[co.h(i, j, primed)] = h[i][j]
        for k in range(n):
            point[co.x(k, primed)] = _rand_rational(rng)
    return point


def _triple_shape(co: Coordinates, triple) -> str:
    return ",".join(co.sort(v) for v in triple)


@dataclass
class JacobiReport:
    n: int
    triples: int = 0
    identically_zero: int = 0
    zero_on_group: list = field(default_factory=list)
    failures: list = field(default_factory=list)  # (names, defect text)
    closed_form_mismatches: list = field(default_factory=list)
    closed_form_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures and not self.closed_form_mismatches

    def failing_shapes(self) -> set:
        return {shape for shape, _names, _d in self.failures}


def check_jacobi_all_generators(spec: PoissonSpec, points: int = 3, seed: int = 0,
                                closed_forms: bool = True) -> JacobiReport:
    """Jacobiator on every triple of distinct generators of ``G x G``.

    A triple passes when the Jacobiator is the zero polynomial, or (for
    polynomials that only vanish modulo the group relations) when it vanishes
    exactly at ``points`` random rational points of ``G x G``.  Needs
    ``spec.eta_classical`` for the group points.
    """
    alg = BracketAlgebra(spec)
    co = alg.coords
    gens = co.generators()
    rep = JacobiReport(spec.n)
    rng = random.Random(seed)
    sample = None
    # zero pattern of generator brackets lets most triples be skipped
    nonzero = {}
    for u, v in itertools.combinations(gens, 2):
        nonzero[(u, v)] = bool(alg.generator_bracket(u, v))
    for t in itertools.combinations(gens, 3):
        rep.triples += 1
        u, v, w = t
        if not (nonzero[(u, v)] or nonzero[(v, w)] or nonzero[(u, w)]):
            rep.identically_zero += 1
            continue
        jac = alg.jacobiator(alg.var(u), alg.var(v), alg.var(w))
        if not jac:
            rep.identically_zero += 1
            continue
        if sample is None:
            if spec.eta_classical is None:
                sample = []
            else:
                sample = [random_point(spec.n, spec.eta_classical, rng) for _ in range(points)]
        names = tuple(co.name(x) for x in t)
        if sample and all(not jac.evaluate(p) for p in sample):
            rep.zero_on_group.append(names)
        else:
            rep.failures.append((_triple_shape(co, t), names, jac.to_text()))
    if closed_forms and spec.a is None and spec.b is None:
        _closed_form_checks(alg, rep)
    return rep


def _embed3(op: TensorOp, legs) -> dict:
    return _const_entries(embed(op, legs))


def jacobi_closed_forms(spec: PoissonSpec) -> dict:
    """The three-leg tensors that the Jacobiator reduces to, keyed by shape."""
    r, w = spec.c_r, spec.coupler
    rr = drinfeld_bracket(r)
    w12, w13, w23 = embed(w, (1, 2)), embed(w, (1, 3)), embed(w, (2, 3))
    r12, r23 = embed(r, (1, 2)), embed(r, (2, 3))
    return {
        "hhh": rr,
        "xhh": commutator(w12, w13) + commutator(w12 + w13, r23),
        "xxh": commutator(r12, w13 + w23) + commutator(w13, w23),
        "xxx": rr,
    }


def _left_action(t: dict, out_idx: tuple, factors) -> dict:
    """``sum_{abc} t^{out}_{abc} f_1(a) f_2(b) f_3(c)`` with ``f_k(a)`` variable ids."""
    res: dict = {}
    for (row, col), v in t.items():
        if row == out_idx:
            m = tuple(sorted(f(a) for f, a in zip(factors, col)))
            _accumulate(res, {m: v})
    return res


def _closed_form_checks(alg: BracketAlgebra, rep: JacobiReport) -> None:
    """Symbolic Jacobiators of single-copy generators against the tensor closed forms."""
    n, co = alg.n, alg.coords
    forms = {k: _const_entries(v) for k, v in jacobi_closed_forms(alg.spec).items()}
    rng = random.Random(12345)
    picks = [tuple(rng.randrange(n) for _ in range(6)) for _ in range(4)]
    picks.append((0, 1, n - 1, 0, n - 1, 1))
    for i, k, m, j, l, p in picks:
        hx = lambda col: (lambda a: co.h(a, col))  # noqa: E731
        row_h = lambda a: (lambda c: co.h(a, c))  # noqa: E731
        xv = co.x
        cases = []
        # J(h^i_j, h^k_l, h^m_p) = D hhh - hhh D
        expect = _left_action(forms["hhh"], (i, k, m), (hx(j), hx(l), hx(p)))
        _accumulate(expect, _left_action(_transpose_rows(forms["hhh"]), (j, l, p),
                                         (row_h(i), row_h(k), row_h(m))), -1)
        cases.append(("hhh", (co.h(i, j), co.h(k, l), co.h(m, p)), expect))
        cases.append(("xhh", (xv(i), co.h(k, l), co.h(m, p)),
                      _left_action(forms["xhh"], (i, k, m), (xv, hx(l), hx(p)))))
        cases.append(("xxh", (xv(i), xv(k), co.h(m, p)),
                      _left_action(forms["xxh"], (i, k, m), (xv, xv, hx(p)))))
        cases.append(("xxx", (xv(i), xv(k), xv(m)),
                      _left_action(forms["xxx"], (i, k, m), (xv, xv, xv))))
        for shape, (u, v, w), expect in cases:
            if len({u, v, w}) < 3:
                continue
            rep.closed_form_checked += 1
            got = alg.jacobiator(alg.var(u), alg.var(v), alg.var(w))
            diff = got - PoissonPoly(n, expect)
            if diff:
                rep.closed_form_mismatches.append((shape, tuple(co.name(x) for x in (u, v, w)),
                                                   diff.to_text()))


def _transpose_rows(t: dict) -> dict:
    """Swap the roles of row and column: used for the right action ``hhh D``."""
    return {(c, r): v for (r, c), v in t.items()}


# ---------------------------------------------------------------------------
# Braiding, dilations, comultiplication


@dataclass
class BraidingReport:
    solvable: bool
    nu_solution: object
    nu_spec: object
    nu_matches: Optional[bool]
    lemma_ok: bool
    residual: str = ""


def braiding_lhs(spec: PoissonSpec, nu) -> list:
    """Components of ``(s - Ps) x1 h2 x'2 + h2 {x1, x'2} + h1 {x'1, x2}`` with the
    cross bracket ``{x'^k, x^j} = nu x^j x'^k``."""
    n = spec.n
    alg = BracketAlgebra(spec.with_nu(nu))
    co = alg.coords
    s = spec.s_sym if spec.s_sym is not None else TensorOp.zero(n, 2)
    d = s - compose(TensorOp.swap(n), s)
    dent = _by_row(_const_entries(d))
    out = []
    for i in range(n):
        for k in range(n):
            acc: dict = {}
            for (a, b), v in dent.get((i, k), ()):
                for c in range(n):
                    _accumulate(acc, {tuple(sorted((co.x(a), co.h(b, c), co.x(c, True)))): v})
            poly = PoissonPoly(n, acc)
            for c in range(n):
                poly = poly + alg.var(co.h(k, c)) * alg.bracket(alg.var(co.x(i)), alg.var(co.x(c, True)))
                poly = poly + alg.var(co.h(i, c)) * alg.bracket(alg.var(co.x(c, True)), alg.var(co.x(k)))
            out.append(poly)
    return out


def check_braiding_equation(spec: PoissonSpec) -> BraidingReport:
    """Solve the braiding equation for ``nu`` inside the scalar ansatz.

    The left side is affine in ``nu``; the candidate is read off one nonzero
    coefficient and then verified on every component.
    """
    if spec.s_sym is None:
        raise SpecError("braiding check needs a symmetric part")
    base = braiding_lhs(spec, 0)
    slope = [p1 - p0 for p0, p1 in zip(base, braiding_lhs(spec, 1))]
    nu = None
    for p0, p1 in zip(base, slope):
        for m, c in p1.terms.items():
            nu = -p0.terms.get(m, mpq(0)) / c
            break
        if nu is not None:
            break
    if nu is None:
        solvable = all(not p for p in base)
        nu = mpq(0) if solvable else None
    residual = ""
    if nu is not None:
        res = [p0 + p1.scale(nu) for p0, p1 in zip(base, slope)]
        bad = [p for p in res if p]
        solvable = not bad
        if bad:
            residual = bad[0].to_text()
            nu = None
    else:
        residual = next(p for p in base if p).to_text()
    eta = spec.eta_classical
    lemma_ok = killing_defect(eta).is_zero() if eta is not None else True
    matches = None
    if nu is not None and spec.nu is not None:
        matches = as_coeff(spec.nu) == nu
    return BraidingReport(solvable, nu, spec.nu, matches, lemma_ok, residual)


def check_dilation_grading(spec: PoissonSpec) -> bool:
    """Every generator bracket has x-degree equal to the sum of its arguments'."""
    alg = BracketAlgebra(spec)
    co = alg.coords
    for u, v in itertools.combinations(co.generators(), 2):
        b = alg.generator_bracket(u, v)
        if not b:
            continue
        want = int(co.is_x(u)) + int(co.is_x(v))
        if b.degree(co.is_x) != {want}:
            return False
    return True


def comultiplication(n: int) -> dict:
    """``Delta h = h h'`` and ``Delta x = x + h x'`` as images of the unprimed variables."""
    co = Coordinates(n)
    images = {}
    for i in range(n):
        for j in range(n):
            images[co.h(i, j)] = PoissonPoly(n, {tuple(sorted((co.h(i, k), co.h(k, j, True)))): mpq(1)
                                                 for k in range(n)})
        terms = {(co.x(i),): mpq(1)}
        for k in range(n):
            terms[tuple(sorted((co.h(i, k), co.x(k, True))))] = mpq(1)
        images[co.x(i)] = PoissonPoly(n, terms)
    return images


@dataclass
class MultiplicativityReport:
    pairs: int
    identical: int
    zero_on_group: list
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def check_comultiplication_poisson(spec: PoissonSpec, points: int = 2,
                                   seed: int = 1) -> MultiplicativityReport:
    """``{Delta f, Delta g}_{12} = Delta {f, g}`` on pairs of single-copy generators."""
    alg = BracketAlgebra(spec)
    co = alg.coords
    images = comultiplication(spec.n)
    gens = co.generators(copies=(False,))
    rng = random.Random(seed)
    sample = None
    rep = MultiplicativityReport(0, 0, [], [])
    for u, v in itertools.combinations(gens, 2):
        rep.pairs += 1
        lhs = alg.bracket(images[u], images[v])
        rhs = alg.generator_bracket(u, v).substitute(images)
        diff = lhs - rhs
        if not diff:
            rep.identical += 1
            continue
        if sample is None:
            sample = ([random_point(spec.n, spec.eta_classical, rng) for _ in range(points)]
                      if spec.eta_classical is not None else [])
        names = (co.name(u), co.name(v))
        if sample and all(not diff.evaluate(p) for p in sample):
            rep.zero_on_group.append(names)
        else:
            rep.failures.append((names, diff.to_text()))
    return rep


def projection_is_poisson(spec: PoissonSpec) -> bool:
    """Brackets of ``h`` coordinates only involve ``h`` coordinates."""
    alg = BracketAlgebra(spec)
    co = alg.coords
    hs = [v for v in co.generators(copies=(False,)) if not co.is_x(v)]
    return all(not any(co.is_x(x) for x in alg.generator_bracket(u, v).variables())
               for u, v in itertools.combinations(hs, 2))


# ---------------------------------------------------------------------------
# Lorentz algebra so(1,3) in the diagonal metric

LORENTZ_ETA = ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1))


def _levi_civita(i, j, k) -> int:
    return (i - j) * (j - k) * (k - i) // 2


def lorentz_generators() -> tuple[list, list]:
    """``M_i = eps_ijk E_kj`` and ``L_i = E_0i + E_i0`` (spatial indices 1..3)."""
    ms, ls = [], []
    for i in range(1, 4):
        entries = []
        for j in range(1, 4):
            for k in range(1, 4):
                e = _levi_civita(i, j, k)
                if e:
                    entries.append((((k,), (j,)), e))
        ms.append(TensorOp.from_entries(4, 1, entries))
        ls.append(TensorOp.from_entries(4, 1, [(((0,), (i,)), 1), (((i,), (0,)), 1)]))
    return ms, ls


def lorentz_eta() -> list:
    return [[QScalar.const(v) for v in row] for row in LORENTZ_ETA]


def dot(left: list, right: list) -> TensorOp:
    """``sum_i A_i (x) B_i``."""
    from .tensor import kron

    out = TensorOp.zero(left[0].n, 2)
    for a, b in zip(left, right):
        out = out + kron(a, b)
    return out


def preserves_metric(x: TensorOp, eta: list) -> bool:
    """``X eta + eta X^T = 0``."""
    n = x.n
    for a in range(n):
        for b in range(n):
            v = sum((x.get((a,), (c,)) * eta[c][b] + eta[a][c] * x.get((b,), (c,))
                     for c in range(n)), ZERO)
            if v:
                return False
    return True


def lorentz_tensors() -> dict:
    ms, ls = lorentz_generators()
    return {
        "s_tilde": dot(ms, ms) - dot(ls, ls),
        "i_s_tilde": dot(ms, ls) + dot(ls, ms),
    }


def rotation_sign() -> int:
    """``s`` with ``[M_1, M_2] = s M_3``, or 0 when neither sign fits."""
    ms, _ = lorentz_generators()
    c = commutator(ms[0], ms[1])
    if c == ms[2]:
        return 1
    if c == -ms[2]:
        return -1
    return 0


def i_omega_symmetric_part(eta: list, i_s: TensorOp) -> TensorOp:
    """``[i s_12, s_13]`` composed with the total symmetrizer (recorded, not asserted)."""
    s = killing_element(eta)
    return right_symmetrize(commutator(embed(i_s, (1, 2)), embed(s, (1, 3))))
