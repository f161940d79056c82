"""Braided quantum ISO(p, N-p): relations, comultiplication and the checks on them.

One copy of the algebra is generated by ``h^i_j`` and ``x^k`` subject to

* ``R h1 h2 = h2 h1 R`` (the R-form; the W-form is available as an option),
* ``x2 h1 = W' h1 x2``,
* ``P- x1 x2 = 0`` (equivalently ``x2 x1 = R x1 x2``),
* ``h1 h2 eta = eta`` and ``eta' h1 h2 = eta'``.

The braided square adds a primed copy with ``x'^j x^k = sigma x^k x'^j`` and
every other cross pair commuting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from . import frt
from .frt import SoQData
from .ncalg import NCPoly, RelationSet, TwistedSquare, independent, reduce_membership
from .poisson import Coordinates
from .scalars import ONE, ZERO, QScalar
from .tensor import TensorOp, compose, embed

W_PRIME_CHOICES = ("W", "minus_W", "W_inverse", "R")


class AssemblyError(ValueError):
    """The requested braided group cannot be assembled."""


def w_prime_matrix(data: SoQData, choice: str) -> TensorOp:
    n = data.n
    if choice == "W":
        return data.w_mat
    if choice == "minus_W":
        return -data.w_mat
    if choice == "R":
        return data.r_mat
    if choice == "W_inverse":
        lp, lm, l0 = frt.spectrum(n)
        inv = (data.p_plus.scale(lp.inverse()) + data.p_minus.scale(lm.inverse())
               + data.p_zero.scale(l0.inverse()))
        return compose(TensorOp.swap(n), inv)
    raise ValueError(f"unknown W' choice {choice!r}; expected one of {W_PRIME_CHOICES}")


# ---------------------------------------------------------------------------
# Relation builders


def _op_rows(op: TensorOp) -> dict:
    out: dict = {}
    for (r, c), v in op.entries():
        out.setdefault(r, []).append((c, v))
    return out


def _op_cols(op: TensorOp) -> dict:
    out: dict = {}
    for (r, c), v in op.entries():
        out.setdefault(c, []).append((r, v))
    return out


def rtt_relations(n: int, m: TensorOp) -> list[NCPoly]:
    """``M h1 h2 - h2 h1 M`` componentwise."""
    co = Coordinates(n)
    rows, cols = _op_rows(m), _op_cols(m)
    out = []
    for i, k, j, l in itertools.product(range(n), repeat=4):
        terms: dict = {}
        for (a, b), v in rows.get((i, k), ()):
            w = (co.h(a, j), co.h(b, l))
            terms[w] = terms.get(w, ZERO) + v
        for (a, b), v in cols.get((j, l), ()):
            w = (co.h(k, b), co.h(i, a))
            terms[w] = terms.get(w, ZERO) - v
        out.append(NCPoly(n, terms))
    return out


def xh_relations(n: int, wp: TensorOp) -> list[NCPoly]:
    """``x^k h^i_j - W'^{ik}_{ab} h^a_j x^b``."""
    co = Coordinates(n)
    rows = _op_rows(wp)
    out = []
    for i, k, j in itertools.product(range(n), repeat=3):
        terms = {(co.x(k), co.h(i, j)): ONE}
        for (a, b), v in rows.get((i, k), ()):
            w = (co.h(a, j), co.x(b))
            terms[w] = terms.get(w, ZERO) - v
        out.append(NCPoly(n, terms))
    return out


def hx_relations(n: int, m: TensorOp) -> list[NCPoly]:
    """``h^k_l x^i - M^{ik}_{ab} x^a h^b_l`` (the form ``h2 x1 = M x1 h2``)."""
    co = Coordinates(n)
    rows = _op_rows(m)
    out = []
    for i, k, l in itertools.product(range(n), repeat=3):
        terms = {(co.h(k, l), co.x(i)): ONE}
        for (a, b), v in rows.get((i, k), ()):
            w = (co.x(a), co.h(b, l))
            terms[w] = terms.get(w, ZERO) - v
        out.append(NCPoly(n, terms))
    return out


def xx_relations(n: int, p_minus: TensorOp) -> list[NCPoly]:
    co = Coordinates(n)
    out = []
    for (i, k), row in _op_rows(p_minus).items():
        out.append(NCPoly(n, {(co.x(a), co.x(b)): v for (a, b), v in row}))
    return independent(out)


def xx_braid_relations(n: int, r: TensorOp) -> list[NCPoly]:
    """``x^k x^i - R^{ik}_{ab} x^a x^b`` (the form ``x2 x1 = R x1 x2``)."""
    co = Coordinates(n)
    rows = _op_rows(r)
    out = []
    for i, k in itertools.product(range(n), repeat=2):
        terms = {(co.x(k), co.x(i)): ONE}
        for (a, b), v in rows.get((i, k), ()):
            w = (co.x(a), co.x(b))
            terms[w] = terms.get(w, ZERO) - v
        out.append(NCPoly(n, terms))
    return out


def metric_relations(data: SoQData) -> tuple[list[NCPoly], list[NCPoly]]:
    """``h1 h2 eta - eta`` and ``eta' h1 h2 - eta'``."""
    n = data.n
    co = Coordinates(n)
    eta = {idx: v for idx, v in data.eta.entries()}
    etap = {idx: v for idx, v in data.eta_prime.entries()}
    left, right = [], []
    for i, k in itertools.product(range(n), repeat=2):
        terms = {(co.h(i, j), co.h(k, l)): v for (j, l), v in eta.items()}
        if (i, k) in eta:
            terms[()] = -eta[(i, k)]
        left.append(NCPoly(n, terms))
    for j, l in itertools.product(range(n), repeat=2):
        terms = {(co.h(i, j), co.h(k, l)): v for (i, k), v in etap.items()}
        if (j, l) in etap:
            terms[()] = -etap[(j, l)]
        right.append(NCPoly(n, terms))
    return left, right


def single_copy_relations(data: SoQData, wp: TensorOp, rtt_form: str = "R") -> RelationSet:
    n = data.n
    rtt = data.r_mat if rtt_form == "R" else data.w_mat
    rels = RelationSet(n, name="single")
    rels.extend("rtt", independent(rtt_relations(n, rtt)))
    rels.extend("xh", xh_relations(n, wp))
    rels.extend("xx", xx_relations(n, data.p_minus))
    left, right = metric_relations(data)
    rels.extend("metric", left)
    rels.extend("metric'", right)
    return rels


# ---------------------------------------------------------------------------
# Assembly


@dataclass(eq=False)
class BraidedISOSpec:
    soq: SoQData
    w_prime_choice: str
    w_prime: TensorOp
    sigma: QScalar
    single: RelationSet
    square: TwistedSquare
    rtt_form: str = "R"
    classical_limit_ok: bool = True
    warnings: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.soq.n

    @property
    def w_prime_hat(self) -> TensorOp:
        return compose(TensorOp.swap(self.n), self.w_prime)


def _specialize(data: SoQData, value) -> SoQData:
    """Every tensor of the bundle with ``q`` set to ``value``."""
    return SoQData(n=data.n, what=data.what.subs_q(value), w_mat=data.w_mat.subs_q(value),
                   eta=data.eta.subs_q(value), eta_prime=data.eta_prime.subs_q(value),
                   p_plus=data.p_plus.subs_q(value), p_minus=data.p_minus.subs_q(value),
                   p_zero=data.p_zero.subs_q(value), r_hat=data.r_hat.subs_q(value),
                   sigma=data.sigma.subs(value), warnings=data.warnings)


def assemble(n_or_data, w_prime_choice: str = "W", sigma=None, q_value=None,
             rtt_form: str = "R") -> BraidedISOSpec:
    """Build relation sets for one copy and for the braided square.

    ``sigma`` defaults to the solution of the spectral condition for
    ``W'``; passing it explicitly overrides that (used by mutation tests).
    ``q_value`` specializes the deformation parameter exactly.
    """
    data = n_or_data if isinstance(n_or_data, SoQData) else frt.build(n_or_data)
    if q_value is not None:
        data = _specialize(data, q_value)
    wp = w_prime_matrix(data, w_prime_choice)
    warnings = list(data.warnings)
    if sigma is None:
        sigma = frt.check_spectral_condition(data, what=compose(TensorOp.swap(data.n), wp))
        if sigma is None:
            raise AssemblyError(f"N={data.n}: no single-eigenvalue sigma for W'={w_prime_choice}")
    sigma = QScalar.coerce(sigma)
    limit_ok = True
    try:
        limit_ok = wp.subs_q(1) == TensorOp.identity(data.n, 2)
    except ZeroDivisionError:
        limit_ok = False
    if not limit_ok:
        warnings.append(f"W'={w_prime_choice} has no proper classical limit (W'(1) != I)")
    single = single_copy_relations(data, wp, rtt_form)
    return BraidedISOSpec(soq=data, w_prime_choice=w_prime_choice, w_prime=wp, sigma=sigma,
                          single=single, square=TwistedSquare(single, sigma), rtt_form=rtt_form,
                          classical_limit_ok=limit_ok, warnings=warnings)


# ---------------------------------------------------------------------------
# Comultiplication


def comultiplication(n: int) -> dict:
    """``Delta h = h h'`` and ``Delta x = x + h x'`` on the unprimed generators."""
    co = Coordinates(n)
    images = {}
    for i, j in itertools.product(range(n), repeat=2):
        images[co.h(i, j)] = NCPoly(n, {(co.h(i, k), co.h(k, j, True)): ONE for k in range(n)})
    for i in range(n):
        terms = {(co.x(i),): ONE}
        for k in range(n):
            terms[(co.h(i, k), co.x(k, True))] = ONE
        images[co.x(i)] = NCPoly(n, terms)
    return images


@dataclass
class FamilyResult:
    family: str
    relations: int
    failures: int
    residual: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0


@dataclass
class DeltaReport:
    n: int
    route: str
    families: dict = field(default_factory=dict)  # name -> FamilyResult
    lemma: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return all(f.ok for f in self.families.values())


DELTA_FAMILIES = ("rtt", "rtt_w", "xh", "xx", "metric", "metric'")


def delta_family_polys(spec: BraidedISOSpec) -> dict:
    """Single-copy relations, grouped by family, before applying Delta."""
    data, n = spec.soq, spec.n
    left, right = metric_relations(data)
    other = data.w_mat if spec.rtt_form == "R" else data.r_mat
    return {
        "rtt": [r.poly for r in spec.single.relations if r.family == "rtt"],
        "rtt_w" if spec.rtt_form == "R" else "rtt_r": independent(rtt_relations(n, other)),
        "xh": xh_relations(n, spec.w_prime),
        "xx": xx_relations(n, data.p_minus),
        "metric": left,
        "metric'": right,
    }


def check_delta_preserves(spec: BraidedISOSpec, route: str = "twisted",
                          families: Optional[tuple] = None) -> DeltaReport:
    """Apply Delta to every defining relation and test membership in the square.

    ``route='twisted'`` normal-orders and reduces in ``A (x) A'``;
    ``route='brute'`` runs plain linear algebra over all shifts of the full
    square relation set (small N only).
    """
    n = spec.n
    images = comultiplication(n)
    rep = DeltaReport(n, route)
    square_rels = spec.square.relations() if route == "brute" else None
    for fam, polys in delta_family_polys(spec).items():
        if families is not None and fam not in families:
            continue
        fails = 0
        first = ""
        for p in polys:
            img = p.substitute(images)
            if route == "brute":
                ok, res = reduce_membership(square_rels, img)
            else:
                ok, res = spec.square.membership(img)
            if not ok:
                fails += 1
                if not first:
                    first = res.to_text()
        rep.families[fam] = FamilyResult(fam, len(polys), fails, first)
    rep.lemma = check_matrix_lemma(spec)[0]
    return rep


# ---------------------------------------------------------------------------
# Spectral lemma, obstruction, involutivity, reality


def check_matrix_lemma(spec_or_data, sigma=None, w_hat: Optional[TensorOp] = None):
    """``P- (W'^ + sigma I) = 0`` on two legs and ``P-_12 (W'^_12 + sigma I_23) = 0``
    on three legs.  Returns ``(holds, two_leg_defect, legs_agree)``."""
    if isinstance(spec_or_data, BraidedISOSpec):
        data = spec_or_data.soq
        w_hat = spec_or_data.w_prime_hat if w_hat is None else w_hat
        sigma = spec_or_data.sigma if sigma is None else sigma
    else:
        data = spec_or_data
        w_hat = data.what if w_hat is None else w_hat
        sigma = data.sigma if sigma is None else sigma
    n = data.n
    sigma = QScalar.coerce(sigma)
    two = compose(data.p_minus, w_hat + TensorOp.identity(n, 2).scale(sigma))
    three = compose(embed(data.p_minus, (1, 2)),
                    embed(w_hat, (1, 2)) + TensorOp.identity(n, 3).scale(sigma))
    return two.is_zero(), two, two.is_zero() == three.is_zero()


def scan_sigma(data: SoQData, w_hat: Optional[TensorOp] = None) -> list:
    """Candidates ``+-q^k`` (``|k| <= N``) that satisfy the matrix lemma."""
    return [s for s in frt.sigma_candidates(data.n) if check_matrix_lemma(data, s, w_hat)[0]]


@dataclass
class ObstructionReport:
    n: int
    symbolic_defect_nonzero: bool
    defect_at_one_zero: bool
    identities: dict
    nnz: int

    @property
    def confirmed(self) -> bool:
        return self.symbolic_defect_nonzero and self.defect_at_one_zero


def consistency_identities(w_prime: TensorOp, r: TensorOp) -> dict:
    """The two orderings of ``h h x`` and ``h x x`` as operator identities."""
    r12, r23 = embed(r, (1, 2)), embed(r, (2, 3))
    w12, w13, w23 = embed(w_prime, (1, 2)), embed(w_prime, (1, 3)), embed(w_prime, (2, 3))
    return {
        "R12 W13 W23 = W23 W13 R12": compose(compose(r12, w13), w23) - compose(compose(w23, w13), r12),
        "W12 W13 R23 = R23 W13 W12": compose(compose(w12, w13), r23) - compose(compose(r23, w13), w12),
    }


def obstruction_unbraided(data: SoQData) -> ObstructionReport:
    """With ``W' = R`` the ordering identities force the Yang-Baxter equation for ``R``."""
    r = data.r_mat
    defect = frt.ybe_defect(r)
    at_one = defect.subs_q(1)
    ids = {k: v.is_zero() for k, v in consistency_identities(r, r).items()}
    return ObstructionReport(data.n, not defect.is_zero(), at_one.is_zero(), ids, defect.nnz())


def involutivity_equivalence(data: SoQData, hat: Optional[TensorOp] = None) -> dict:
    """Do ``x2 h1 = M h1 x2`` and ``h2 x1 = M x1 h2`` (``M = P hat``) span the same
    relations?  ``hat`` defaults to the involutive intertwiner."""
    n = data.n
    hat = data.r_hat if hat is None else hat
    m = compose(TensorOp.swap(n), hat)
    first = RelationSet(n).extend("xh", xh_relations(n, m))
    second = RelationSet(n).extend("hx", hx_relations(n, m))
    involutive = compose(hat, hat) == TensorOp.identity(n, 2)
    return {"involutive": involutive, "same_span": first.span_equals(second)}


def reality_propagation(spec: BraidedISOSpec) -> dict:
    """Star-closure of the ``x h`` relations against ``W' star(W') = I``."""
    n = spec.n
    rels = RelationSet(n).extend("xh", xh_relations(n, spec.w_prime))
    starred = RelationSet(n).extend("xh*", [r.poly.star() for r in rels.relations])
    ok, _ = frt.check_reality(spec.soq, spec.w_prime)
    return {"star_closed": rels.span_equals(starred), "reality": ok}


def inclusion_preserved(spec: BraidedISOSpec) -> bool:
    """The square's relations on unprimed letters are exactly the single-copy ones."""
    sq = spec.square.relations().restrict(("h", "x"))
    return sq.span_equals(spec.single)


def x_algebra(data: SoQData) -> RelationSet:
    return RelationSet(data.n, name="x").extend("xx", xx_relations(data.n, data.p_minus))


def h_algebra(data: SoQData, form: str = "R") -> RelationSet:
    m = data.r_mat if form == "R" else data.w_mat
    return RelationSet(data.n, name="h").extend("rtt", independent(rtt_relations(data.n, m)))
