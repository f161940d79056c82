"""Sparse exact row reduction over Q(i)(q).

Rows are dicts ``column -> QScalar``.  Columns can be any totally ordered keys;
the pivot of a row is its *largest* column, so the columns that never become
pivots (the complement basis) are the smallest ones.  Pivot rows are kept
monic in their pivot column.

Elimination is ordinary field elimination on gcd-reduced entries; since every
entry is kept canonical there is no coefficient swell beyond what the exact
answer needs.
"""

from __future__ import annotations

from typing import Hashable, Iterable

from .scalars import QScalar

Row = dict


def _axpy(row: Row, factor: QScalar, other: Row) -> None:
    """``row -= factor * other`` in place."""
    for c, v in other.items():
        t = factor * v
        old = row.get(c)
        if old is None:
            row[c] = -t
        else:
            new = old - t
            if new:
                row[c] = new
            else:
                del row[c]


class Echelon:
    """Incrementally built semi-echelon basis of a row space."""

    def __init__(self):
        self.pivots: dict[Hashable, Row] = {}

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def insert(self, row: Row) -> bool:
        """Add ``row`` to the span; returns ``True`` when the rank grew."""
        row = {c: v for c, v in row.items() if v}
        pivots = self.pivots
        while row:
            c = max(row)
            p = pivots.get(c)
            if p is None:
                lead = row[c]
                if lead != 1:
                    inv = lead.inverse()
                    row = {k: v * inv for k, v in row.items()}
                pivots[c] = row
                return True
            _axpy(row, row[c], p)
        return False

    def extend(self, rows: Iterable[Row]) -> int:
        rows = sorted(rows, key=_row_cost)
        return sum(1 for r in rows if self.insert(r))

    def reduce(self, row: Row) -> Row:
        """Fully reduce ``row``; the result only involves non-pivot columns."""
        row = {c: v for c, v in row.items() if v}
        pivots = self.pivots
        while True:
            hits = [c for c in row if c in pivots]
            if not hits:
                return row
            c = max(hits)
            _axpy(row, row[c], pivots[c])

    def contains(self, row: Row) -> bool:
        return not self.reduce(row)

    def pivot_columns(self) -> set:
        return set(self.pivots)


def _row_cost(row: Row) -> tuple:
    return (len(row), sum(v.degree_size() for v in row.values()))


def rank_of_rows(rows: Iterable[Row]) -> int:
    ech = Echelon()
    ech.extend(rows)
    return ech.rank


def nullspace(rows: list[Row], columns: list) -> list[Row]:
    """Basis of ``{v : sum_c row[c] v[c] = 0 for every row}`` over the given columns.

    Returned vectors are dicts ``column -> QScalar``.
    """
    ech = Echelon()
    ech.extend(rows)
    # full reduction so each pivot row expresses its pivot in free columns
    reduced = {}
    for c in sorted(ech.pivots):
        r = dict(ech.pivots[c])
        del r[c]
        reduced[c] = ech.reduce(r)
    free = [c for c in columns if c not in ech.pivots]
    basis = []
    for f in free:
        v = {f: QScalar.const(1)}
        for c, r in reduced.items():
            coeff = r.get(f)
            if coeff:
                v[c] = -coeff
        basis.append(v)
    return basis
