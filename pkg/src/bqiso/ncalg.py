"""Bounded-degree noncommutative quadratic algebras by exact linear algebra.

Generators are the coordinate ids of :class:`bqiso.poisson.Coordinates`
(``h < h' < x < x'`` in id order).  A word is a tuple of ids.  An ideal is
described by finitely many relations; at a fixed *content* (number of letters
of each sort) its graded piece is spanned by the shifts ``u rho v``.  No
Groebner completion is attempted: every membership claim is a rank statement.

Metric relations carry a constant term.  They are handled in the filtered
sense: a shift whose top part has content ``D`` also contributes its lower
part, and the span is taken over the downward closure of the contents in
play.  A zero residual is therefore a proof of membership; a nonzero
residual on inhomogeneous input only means the element is not in the
degree-bounded span.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .echelon import Echelon
from .poisson import Coordinates, SORTS
from .scalars import ONE, QScalar

DEGREE_CAP = 5
SORT_INDEX = {s: k for k, s in enumerate(SORTS)}


class DegreeCapError(ValueError):
    """Requested component exceeds the supported total degree."""


def content_of(coords: Coordinates, word: tuple) -> tuple:
    c = [0, 0, 0, 0]
    for v in word:
        c[SORT_INDEX[coords.sort(v)]] += 1
    return tuple(c)


def content_from(spec) -> tuple:
    """Accept ``{'x': 2, 'h': 1}`` or a four-tuple ``(h, h', x, x')``."""
    if isinstance(spec, dict):
        c = [0, 0, 0, 0]
        for k, v in spec.items():
            c[SORT_INDEX[k]] = int(v)
        return tuple(c)
    t = tuple(int(v) for v in spec)
    if len(t) != 4 or min(t) < 0:
        raise ValueError(f"bad multidegree {spec!r}")
    return t


# ---------------------------------------------------------------------------
# Noncommutative polynomials


class NCPoly:
    """Linear combination of words with :class:`QScalar` coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[dict] = None):
        self.n = n
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def gen(cls, n: int, v: int, coeff=ONE) -> "NCPoly":
        return cls(n, {(v,): QScalar.coerce(coeff)})

    @classmethod
    def const(cls, n: int, c) -> "NCPoly":
        return cls(n, {(): QScalar.coerce(c)})

    @classmethod
    def word(cls, n: int, w: Iterable[int], coeff=ONE) -> "NCPoly":
        return cls(n, {tuple(w): QScalar.coerce(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, len(self.terms)))

    def __add__(self, other: "NCPoly") -> "NCPoly":
        out = dict(self.terms)
        _acc(out, other.terms)
        return NCPoly(self.n, out)

    def __neg__(self):
        return NCPoly(self.n, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "NCPoly":
        c = QScalar.coerce(c)
        return NCPoly(self.n, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return self.scale(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                _acc(out, {w1 + w2: c1 * c2})
        return NCPoly(self.n, out)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def homogeneous_part(self, d: int) -> "NCPoly":
        return NCPoly(self.n, {w: c for w, c in self.terms.items() if len(w) == d})

    def contents(self) -> set:
        co = Coordinates(self.n)
        return {content_of(co, w) for w in self.terms}

    def star(self) -> "NCPoly":
        """Antilinear anti-involution fixing every generator."""
        return NCPoly(self.n, {tuple(reversed(w)): c.star() for w, c in self.terms.items()})

    def subs_q(self, value) -> "NCPoly":
        return NCPoly(self.n, {w: c.subs(value) for w, c in self.terms.items()})

    def substitute(self, images: dict) -> "NCPoly":
        """Algebra map sending generator ``v`` to ``images[v]`` (default: itself)."""
        out: dict = {}
        for w, c in self.terms.items():
            acc = NCPoly.const(self.n, c)
            for v in w:
                acc = acc * (images.get(v) or NCPoly.gen(self.n, v))
            _acc(out, acc.terms)
        return NCPoly(self.n, out)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        co = Coordinates(self.n)
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            names = " ".join(co.name(v) for v in w) or "1"
            parts.append(f"{self.terms[w].to_text()} | {names}")
        return " ; ".join(parts)

    @classmethod
    def from_text(cls, n: int, text: str) -> "NCPoly":
        text = text.strip()
        if text == "0":
            return cls(n)
        co = Coordinates(n)
        out: dict = {}
        for part in text.split(" ; "):
            coeff, names = part.rsplit(" | ", 1)
            names = names.strip()
            w = () if names == "1" else tuple(co.parse(t) for t in names.split())
            _acc(out, {w: QScalar.from_text(coeff)})
        return cls(n, out)

    def __repr__(self):
        return f"NCPoly(n={self.n}, terms={len(self.terms)})"


def _acc(out: dict, terms: dict, factor=None) -> None:
    for w, c in terms.items():
        if factor is not None:
            c = c * factor
        old = out.get(w)
        if old is None:
            if c:
                out[w] = c
        else:
            new = old + c
            if new:
                out[w] = new
            else:
                del out[w]


# ---------------------------------------------------------------------------
# Relation sets


@dataclass(frozen=True)
class Relation:
    family: str
    poly: NCPoly


class RelationSet:
    """Quadratic (possibly inhomogeneous) relations, grouped by family label."""

    def __init__(self, n: int, relations: Iterable[Relation] = (), name: str = ""):
        self.n = n
        self.name = name
        self.coords = Coordinates(n)
        self.relations: list[Relation] = []
        for r in relations:
            self.add(r.family, r.poly)

    def add(self, family: str, poly: NCPoly) -> None:
        if not poly:
            return
        top = poly.degree()
        if top != 2:
            raise ValueError(f"relation of degree {top}; only quadratic relations are supported")
        contents = {content_of(self.coords, w) for w in poly.terms if len(w) == 2}
        if len(contents) != 1:
            raise ValueError("the quadratic part of a relation must have a single content")
        if any(len(w) == 1 for w in poly.terms):
            raise ValueError("linear terms are not supported")
        self.relations.append(Relation(family, poly))

    def extend(self, family: str, polys: Iterable[NCPoly]) -> "RelationSet":
        for p in polys:
            self.add(family, p)
        return self

    def __len__(self):
        return len(self.relations)

    def families(self) -> list[str]:
        seen = []
        for r in self.relations:
            if r.family not in seen:
                seen.append(r.family)
        return seen

    def only(self, families: Iterable[str]) -> "RelationSet":
        keep = set(families)
        return RelationSet(self.n, [r for r in self.relations if r.family in keep], self.name)

    def without(self, families: Iterable[str]) -> "RelationSet":
        drop = set(families)
        return RelationSet(self.n, [r for r in self.relations if r.family not in drop], self.name)

    def restrict(self, allowed_sorts: Iterable[str]) -> "RelationSet":
        """Relations whose words only use the given sorts."""
        ok = {SORT_INDEX[s] for s in allowed_sorts}
        keep = []
        for r in self.relations:
            if all(k in ok for w in r.poly.terms for k in
                   (SORT_INDEX[self.coords.sort(v)] for v in w)):
                keep.append(r)
        return RelationSet(self.n, keep, self.name)

    def span_equals(self, other: "RelationSet") -> bool:
        a, b = Echelon(), Echelon()
        a.extend(dict(r.poly.terms) for r in self.relations)
        b.extend(dict(r.poly.terms) for r in other.relations)
        return (a.rank == b.rank and all(a.contains(dict(r.poly.terms)) for r in other.relations))

    def to_text(self) -> str:
        return "\n".join(f"{r.family} :: {r.poly.to_text()}" for r in self.relations) + "\n"

    @classmethod
    def from_text(cls, n: int, text: str, name: str = "") -> "RelationSet":
        rels = cls(n, name=name)
        for line in text.splitlines():
            if line.strip():
                fam, body = line.split(" :: ", 1)
                rels.add(fam.strip(), NCPoly.from_text(n, body))
        return rels

    # shapes -------------------------------------------------------------
    def _shapes(self, include_inhomogeneous: bool):
        """``(top_content, drop_content or None, poly)`` per relation."""
        out = []
        for r in self.relations:
            top = r.poly.homogeneous_part(2)
            low = NCPoly(self.n, {w: c for w, c in r.poly.terms.items() if len(w) < 2})
            c = content_of(self.coords, next(iter(top.terms)))
            if low:
                if not include_inhomogeneous:
                    continue
                out.append((c, c, r.poly))
            else:
                out.append((c, None, r.poly))
        return out


# ---------------------------------------------------------------------------
# Words and shift rows


def _gens_by_sort(coords: Coordinates) -> list:
    out = [[], [], [], []]
    for v in range(coords.size):
        out[SORT_INDEX[coords.sort(v)]].append(v)
    return out


def words_with_content(coords: Coordinates, content: tuple) -> list:
    return list(_words_cached(coords.n, tuple(content)))


@lru_cache(maxsize=256)
def _words_cached(n: int, content: tuple) -> tuple:
    coords = Coordinates(n)
    gens = _gens_by_sort(coords)
    letters = [k for k, c in enumerate(content) for _ in range(c)]
    out = []
    for perm in sorted(set(itertools.permutations(letters))):
        for combo in itertools.product(*(gens[k] for k in perm)):
            out.append(combo)
    out.sort()
    return tuple(out)


def _sub(a: tuple, b: tuple) -> Optional[tuple]:
    d = tuple(x - y for x, y in zip(a, b))
    return d if min(d) >= 0 else None


def _shift_rows(rels: RelationSet, content: tuple, include_inhomogeneous: bool,
                top_only: bool = False) -> list:
    """Rows ``u rho v`` whose top part has the given content."""
    rows = []
    coords = rels.coords
    for c, _drop, poly in rels._shapes(include_inhomogeneous):
        rest = _sub(content, c)
        if rest is None:
            continue
        terms = poly.homogeneous_part(2).terms if top_only else poly.terms
        for z in words_with_content(coords, rest):
            for p in range(len(z) + 1):
                pre, post = z[:p], z[p:]
                rows.append({pre + w + post: v for w, v in terms.items()})
    return rows


def _closure(rels: RelationSet, contents: Iterable[tuple], include_inhomogeneous: bool) -> set:
    drops = {d for _c, d, _p in rels._shapes(include_inhomogeneous) if d is not None}
    seen = set()
    todo = list(contents)
    while todo:
        c = todo.pop()
        if c in seen:
            continue
        seen.add(c)
        for d in drops:
            lower = _sub(c, d)
            if lower is not None:
                todo.append(lower)
    return seen


def _key(word: tuple) -> tuple:
    return (len(word), word)


class Quotient:
    """Echelonized ideal span over a downward-closed set of contents.

    Column keys are ``(length, word)`` so the pivot of a row is its
    degree-lex largest word; the complement basis is the degree-lex least
    words outside the leading set.
    """

    def __init__(self, rels: RelationSet, contents: Iterable[tuple],
                 include_inhomogeneous: bool = True):
        contents = list(contents)
        for c in contents:
            if sum(c) > DEGREE_CAP:
                raise DegreeCapError(f"total degree {sum(c)} exceeds the cap {DEGREE_CAP}")
        self.rels = rels
        self.contents = _closure(rels, contents, include_inhomogeneous)
        self.echelon = Echelon()
        rows = []
        for c in sorted(self.contents):
            for row in _shift_rows(rels, c, include_inhomogeneous):
                rows.append({_key(w): v for w, v in row.items()})
        self.echelon.extend(rows)

    def covers(self, poly: NCPoly) -> bool:
        return poly.contents() <= self.contents

    def reduce_terms(self, terms: dict) -> dict:
        red = self.echelon.reduce({_key(w): v for w, v in terms.items()})
        return {k[1]: v for k, v in red.items()}

    def reduce(self, poly: NCPoly) -> NCPoly:
        return NCPoly(poly.n, self.reduce_terms(poly.terms))

    def dimension(self, content: tuple) -> int:
        words = words_with_content(self.rels.coords, content)
        piv = self.echelon.pivots
        return sum(1 for w in words if _key(w) not in piv)


def graded_dimension(rels: RelationSet, multidegree, include_inhomogeneous: bool = False) -> int:
    """Dimension of the quotient at one content.

    Inhomogeneous relations are left out unless ``include_inhomogeneous`` is
    set, in which case their quadratic part is used (the associated graded).
    """
    content = content_from(multidegree)
    if sum(content) > DEGREE_CAP:
        raise DegreeCapError(f"total degree {sum(content)} exceeds the cap {DEGREE_CAP}")
    words = words_with_content(rels.coords, content)
    ech = Echelon()
    ech.extend(_shift_rows(rels, content, include_inhomogeneous, top_only=True))
    return len(words) - ech.rank


def reduce_membership(rels: RelationSet, p: NCPoly) -> tuple[bool, NCPoly]:
    """Is ``p`` in the (degree-bounded) ideal span?  Returns the residual too."""
    if p.degree() > DEGREE_CAP:
        raise DegreeCapError(f"total degree {p.degree()} exceeds the cap {DEGREE_CAP}")
    if not p:
        return True, p
    quo = Quotient(rels, p.contents())
    res = quo.reduce(p)
    return res.is_zero(), res


def classical_dimension(n: int, content: tuple) -> int:
    """Size of the commutative polynomial algebra at one content."""
    sizes = (n * n, n * n, n, n)
    return math.prod(math.comb(g + d - 1, d) for g, d in zip(sizes, content))


@dataclass
class OverlapEntry:
    content: tuple
    dimension: int
    classical: int
    status: str  # "classical", "collapse", "excess"


@dataclass
class OverlapReport:
    entries: list = field(default_factory=list)
    identities: dict = field(default_factory=dict)  # name -> bool

    @property
    def collapses(self) -> list:
        return [e for e in self.entries if e.status == "collapse"]


def diamond_overlap_report(rels: RelationSet, triples: Optional[Iterable[tuple]] = None,
                           identities: Optional[dict] = None) -> OverlapReport:
    """Degree-3 overlap dimensions against the commutative count.

    ``triples`` are contents of total degree 3; by default every content over
    the sorts that appear in the relations.  ``identities`` maps a label to a
    defect operator (anything with ``is_zero``); each is recorded as holding
    or failing.
    """
    rep = OverlapReport()
    if triples is None:
        used = sorted({k for r in rels.relations for w in r.poly.terms for v in w
                       for k in (SORT_INDEX[rels.coords.sort(v)],)})
        triples = []
        for combo in itertools.combinations_with_replacement(used, 3):
            c = [0, 0, 0, 0]
            for k in combo:
                c[k] += 1
            triples.append(tuple(c))
    for c in triples:
        dim = graded_dimension(rels, c)
        cl = classical_dimension(rels.n, c)
        status = "classical" if dim == cl else ("collapse" if dim < cl else "excess")
        rep.entries.append(OverlapEntry(tuple(c), dim, cl, status))
    for name, defect in (identities or {}).items():
        rep.identities[name] = defect.is_zero()
    return rep


# ---------------------------------------------------------------------------
# Twisted tensor square


class TwistedSquare:
    """``A (x) A'`` with ``h, h'`` and mixed ``h``/``x`` pairs commuting and
    ``x'^j x^k = sigma x^k x'^j``.

    The cross rules are a bicharacter on the x-degree, and every single-copy
    relation is homogeneous in x, so the square has ``A (x) A'`` as its
    underlying space.  Membership of an element therefore reduces to normal
    ordering (unprimed letters first) followed by independent reduction of
    both factors.
    """

    def __init__(self, single: RelationSet, sigma: QScalar):
        self.single = single
        self.n = single.n
        self.sigma = QScalar.coerce(sigma)
        self.coords = single.coords
        self._quotients: dict = {}

    def prime(self, v: int) -> int:
        co = self.coords
        return v + (self.n * self.n if not co.is_x(v) else self.n)

    def unprime(self, v: int) -> int:
        co = self.coords
        return v - (self.n * self.n if not co.is_x(v) else self.n)

    def normal_order(self, word: tuple) -> tuple[int, tuple, tuple]:
        """``(power of sigma, unprimed part, primed part)``."""
        co = self.coords
        power = 0
        primed_x_seen = 0
        left, right = [], []
        for v in word:
            if co.is_primed(v):
                right.append(v)
                if co.is_x(v):
                    primed_x_seen += 1
            else:
                left.append(v)
                if co.is_x(v):
                    power += primed_x_seen
        return power, tuple(left), tuple(right)

    def _quotient(self, contents: frozenset) -> Quotient:
        q = self._quotients.get(contents)
        if q is None:
            q = Quotient(self.single, contents)
            self._quotients[contents] = q
        return q

    def reduce(self, p: NCPoly) -> dict:
        """Image of ``p`` in ``A (x) A'`` as ``{(u_residual_word, v_residual_word): coeff}``."""
        co = self.coords
        split: dict = {}
        for w, c in p.terms.items():
            k, u, v = self.normal_order(w)
            coeff = c * (self.sigma ** k if k else ONE)
            vu = tuple(self.unprime(x) for x in v)
            _acc(split, {(u, vu): coeff})
        left_contents = frozenset(content_of(co, u) for u, _ in split)
        right_contents = frozenset(content_of(co, v) for _, v in split)
        ql = self._quotient(left_contents)
        qr = self._quotient(right_contents)
        nf_l: dict = {}
        nf_r: dict = {}
        out: dict = {}
        for (u, v), c in split.items():
            a = nf_l.get(u)
            if a is None:
                a = nf_l[u] = ql.reduce_terms({u: ONE})
            b = nf_r.get(v)
            if b is None:
                b = nf_r[v] = qr.reduce_terms({v: ONE})
            for wu, cu in a.items():
                for wv, cv in b.items():
                    _acc(out, {(wu, tuple(self.prime(x) for x in wv)): c * cu * cv})
        return out

    def membership(self, p: NCPoly) -> tuple[bool, NCPoly]:
        red = self.reduce(p)
        residual = NCPoly(self.n, {u + v: c for (u, v), c in red.items()})
        return not red, residual

    def relations(self) -> RelationSet:
        """Full relation set of the square (both copies plus cross rules)."""
        n, co = self.n, self.coords
        out = RelationSet(n, self.single.relations, name="square")
        for r in self.single.relations:
            prim = NCPoly(n, {tuple(self.prime(v) for v in w): c for w, c in r.poly.terms.items()})
            out.add(r.family + "'", prim)
        unprimed = [v for v in range(co.size) if not co.is_primed(v)]
        for a in unprimed:
            for b in unprimed:
                bp = self.prime(b)
                if co.is_x(a) and co.is_x(b):
                    # x'^b x^a = sigma x^a x'^b
                    out.add("cross", NCPoly(n, {(bp, a): ONE, (a, bp): -self.sigma}))
                else:
                    out.add("cross", NCPoly(n, {(bp, a): ONE, (a, bp): -ONE}))
        return out


def relation_rows(polys: Iterable[NCPoly]) -> list:
    return [dict(p.terms) for p in polys]


def independent(polys: list[NCPoly]) -> list[NCPoly]:
    """A maximal linearly independent subfamily (greedy, order preserving)."""
    ech = Echelon()
    return [p for p in polys if ech.insert(dict(p.terms))]
