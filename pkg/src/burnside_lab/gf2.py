"""GF(2) linear algebra on bit-packed rows (Python ints, bit i = column i)."""

from __future__ import annotations

from typing import Iterable, Sequence


def dot(x: int, y: int) -> int:
    return (x & y).bit_count() & 1


class RowBasis:
    """Incrementally reduced row space; pivot = lowest set bit of each row."""

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}

    def reduce(self, row: int) -> int:
        # Each stored row contains exactly one pivot bit (its own), so a
        # single pass clears every pivot column from `row`.
        if not row:
            return 0
        for p, r in self.pivots.items():
            if row & p:
                row ^= r
        return row

    def add(self, row: int) -> bool:
        """Insert a row; returns True when it enlarged the space."""
        row = self.reduce(row)
        if row == 0:
            return False
        p = row & -row
        for q, r in self.pivots.items():
            if r & p:
                self.pivots[q] = r ^ row
        self.pivots[p] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rows(self) -> list[int]:
        return [self.pivots[p] for p in sorted(self.pivots)]

    def contains(self, row: int) -> bool:
        return self.reduce(row) == 0


def rank(rows: Iterable[int]) -> int:
    basis = RowBasis()
    for r in rows:
        basis.add(r)
    return basis.rank


def rref(rows: Iterable[int]) -> list[int]:
    """Reduced row-echelon basis of the row space, sorted by pivot column."""
    basis = RowBasis()
    for r in rows:
        basis.add(r)
    return basis.rows()


def nullspace(rows: Iterable[int], width: int) -> list[int]:
    """Basis of {x : dot(r, x) = 0 for all rows r}, for x over `width` columns."""
    basis = RowBasis()
    for r in rows:
        basis.add(r)
    reduced = basis.rows()
    pivot_cols = [(r & -r).bit_length() - 1 for r in reduced]
    pivot_set = set(pivot_cols)
    out = []
    for f in range(width):
        if f in pivot_set:
            continue
        vec = 1 << f
        for col, row in zip(pivot_cols, reduced):
            if (row >> f) & 1:
                vec |= 1 << col
        out.append(vec)
    return out


def span_equal(rows_a: Iterable[int], rows_b: Iterable[int]) -> bool:
    a, b = RowBasis(), RowBasis()
    for r in rows_a:
        a.add(r)
    for r in rows_b:
        b.add(r)
    return a.pivots == b.pivots


def from_bits(bits: Sequence[int]) -> int:
    mask = 0
    for i, b in enumerate(bits):
        if b & 1:
            mask |= 1 << i
    return mask


def to_bits(mask: int, width: int) -> list[int]:
    return [(mask >> i) & 1 for i in range(width)]
