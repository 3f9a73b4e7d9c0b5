"""Exact rational linear algebra.

RationalMatrix is a thin dense container of Fractions with the operations
the rest of the package needs: fraction-free rank, reduced row echelon
form, solving, nullspaces.  Everything is exact; nothing here ever
touches floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import _kernels
from .superpoly import _as_fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class RationalMatrix:
    def __init__(self, rows: Sequence[Sequence]):
        self.rows = [[_as_fraction(x) for x in r] for r in rows]
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("ragged rows")
        self.nrows = len(self.rows)
        self.ncols = self.rows[0].__len__() if self.rows else 0

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        m = cls.__new__(cls)
        m.rows = [[ZERO] * ncols for _ in range(nrows)]
        m.nrows, m.ncols = nrows, ncols
        return m

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.rows[i][i] = ONE
        return m

    def copy(self) -> "RationalMatrix":
        return RationalMatrix(self.rows)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([[self.rows[r][c] for r in range(self.nrows)]
                               for c in range(self.ncols)])

    def __getitem__(self, rc):
        r, c = rc
        return self.rows[r][c]

    def __setitem__(self, rc, v):
        r, c = rc
        self.rows[r][c] = _as_fraction(v)

    def __eq__(self, other):
        return (isinstance(other, RationalMatrix) and self.rows == other.rows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = RationalMatrix.zeros(self.nrows, other.ncols)
        for i in range(self.nrows):
            ri = self.rows[i]
            oi = out.rows[i]
            for k in range(self.ncols):
                a = ri[k]
                if not a:
                    continue
                rk = other.rows[k]
                for j in range(other.ncols):
                    if rk[j]:
                        oi[j] += a * rk[j]
        return out

    def mul_vector(self, v: Sequence[Fraction]) -> list[Fraction]:
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        return [sum((r[j] * v[j] for j in range(self.ncols) if v[j]), ZERO)
                for r in self.rows]

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def __repr__(self):
        return f"<RationalMatrix {self.nrows}x{self.ncols}>"


def exact_rank(m: RationalMatrix) -> int:
    """Rank via fraction-free (Bareiss) elimination on a cleared copy."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    rows = _kernels.clear_denominators(m.rows)
    return _kernels.bareiss_rank(rows)


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """Reduced row echelon form over Q; returns (R, pivot_columns)."""
    rows = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    pivots: list[int] = []
    row = 0
    for col in range(nc):
        piv = -1
        for r in range(row, nr):
            if rows[r][col]:
                piv = r
                break
        if piv < 0:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        pv = rows[row][col]
        rows[row] = [x / pv for x in rows[row]]
        for r in range(nr):
            if r != row and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    out = RationalMatrix.__new__(RationalMatrix)
    out.rows, out.nrows, out.ncols = rows, nr, nc
    return out, pivots


def nullspace(m: RationalMatrix) -> list[list[Fraction]]:
    """Canonical kernel basis (one vector per free column of the RREF)."""
    r, pivots = rref(m)
    pivset = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivset]
    basis = []
    for fc in free:
        v = [ZERO] * m.ncols
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -r.rows[i][fc]
        basis.append(v)
    return basis


def solve(m: RationalMatrix, b: Sequence) -> Optional[list[Fraction]]:
    """One particular solution of M x = b (free variables 0), or None."""
    bb = [_as_fraction(x) for x in b]
    if len(bb) != m.nrows:
        raise ValueError("shape mismatch")
    aug = RationalMatrix([list(r) + [bb[i]] for i, r in enumerate(m.rows)])
    r, pivots = rref(aug)
    if m.ncols in pivots:
        return None  # inconsistent
    x = [ZERO] * m.ncols
    for i, pc in enumerate(pivots):
        x[pc] = r.rows[i][m.ncols]
    return x


def column_space_contains(m: RationalMatrix, b: Sequence) -> bool:
    return solve(m, b) is not None


def from_columns(cols: Iterable[Sequence]) -> RationalMatrix:
    cols = [list(c) for c in cols]
    if not cols:
        return RationalMatrix.zeros(0, 0)
    n = len(cols[0])
    return RationalMatrix([[cols[j][i] for j in range(len(cols))] for i in range(n)])
