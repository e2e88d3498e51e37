"""Exact sparse row reduction and a small dense matrix type.

Sparse vectors are plain ``dict`` objects mapping an integer column to a
non-zero scalar.  Column order is the elimination order: the pivot of a
row is its smallest column.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import as_scalar, inverse

__all__ = ["Echelon", "rank", "Matrix"]


def _axpy(target: dict, coeff, row: dict) -> list:
    """target -= coeff * row, in place; returns the newly created columns."""
    fresh = []
    for col, val in row.items():
        if col in target:
            new = target[col] - coeff * val
            if new:
                target[col] = new
            else:
                del target[col]
        else:
            target[col] = -coeff * val
            fresh.append(col)
    return fresh


class Echelon:
    """Incrementally built echelon basis of a row space.

    Rows are kept with unit pivots.  After :meth:`finalize` the basis is the
    reduced row echelon form, which depends only on the row space and the
    column order; two runs over the same rows in any order agree exactly.
    """

    def __init__(self):
        self.pivots: dict[int, dict] = {}
        self._reduced = True

    def __len__(self):
        return len(self.pivots)

    def reduce(self, vec: dict) -> dict:
        """Return a copy of ``vec`` with every pivot column eliminated."""
        v = dict(vec)
        pivots = self.pivots
        if self._reduced:
            for col in [c for c in v if c in pivots]:
                c = v.get(col)
                if c:
                    _axpy(v, c, pivots[col])
            return v
        heap = [c for c in v if c in pivots]
        heapq.heapify(heap)
        while heap:
            col = heapq.heappop(heap)
            c = v.get(col)
            if not c:
                continue
            for new in _axpy(v, c, pivots[col]):
                if new in pivots:
                    heapq.heappush(heap, new)
        return v

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; returns False when it was already in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v)
        inv = inverse(v[piv])
        self.pivots[piv] = {c: x * inv for c, x in v.items()}
        self._reduced = False
        return True

    def finalize(self) -> "Echelon":
        """Back-substitute into reduced row echelon form."""
        if self._reduced:
            return self
        cols = sorted(self.pivots, reverse=True)
        for i, col in enumerate(cols):
            row = self.pivots[col]
            # rows with a larger pivot are already reduced, so one pass suffices
            for other in cols[i + 1:]:
                orow = self.pivots[other]
                c = orow.get(col)
                if c:
                    _axpy(orow, c, row)
        self._reduced = True
        return self


def rank(rows: Iterable[dict]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return len(ech)


class Matrix:
    """Immutable dense matrix over exact scalars."""

    __slots__ = ("rows", "shape")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(as_scalar(x) for x in r) for r in rows)
        nrows = len(self.rows)
        ncols = len(self.rows[0]) if nrows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self.shape = (nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Matrix":
        return cls([[0] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        return cls(list(zip(*cols)))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def _check(self, other: "Matrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.shape[1] != other.shape[0]:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other.rows))
            return Matrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols]
                           for r in self.rows])
        if isinstance(other, (int, Fraction)) or hasattr(other, "p"):
            return Matrix([[a * other for a in r] for r in self.rows])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Matrix):
            return NotImplemented
        return self.__mul__(other)

    def apply(self, vec: Sequence) -> tuple:
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def rank(self) -> int:
        return rank({j: x for j, x in enumerate(r) if x} for r in self.rows)

    def flat(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"


def vectors_rank(vectors: Iterable[Sequence]) -> int:
    return rank({j: x for j, x in enumerate(v) if x} for v in vectors)


def in_span(vec: Sequence, basis: Sequence[Sequence]) -> bool:
    ech = Echelon()
    for b in basis:
        ech.add({j: x for j, x in enumerate(b) if x})
    return not ech.reduce({j: x for j, x in enumerate(vec) if x})


def coordinates(vec: Sequence, basis: Sequence[Sequence]):
    """Coordinates of ``vec`` in the linearly independent list ``basis``, or None."""
    m = len(basis)
    if m == 0:
        return () if not any(vec) else None
    dim = len(vec)
    # unknowns are columns dim..dim+m-1 behind the coordinate equations
    ech = Echelon()
    rows = []
    for i in range(dim):
        row = {dim + j: b[i] for j, b in enumerate(basis) if b[i]}
        if vec[i]:
            row[dim + m] = vec[i]
        if row:
            rows.append(row)
    for r in rows:
        ech.add({c - dim: x for c, x in r.items()})
    ech.finalize()
    if m in ech.pivots:
        return None
    out = [Fraction(0)] * m
    for piv, row in ech.pivots.items():
        if any(c != piv and c < m for c in row):
            raise ValueError("basis is not linearly independent")
        out[piv] = row.get(m, Fraction(0))
    return tuple(out)
