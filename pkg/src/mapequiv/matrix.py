"""Dense matrices over a FieldSpec: rank with pivot tracking, solves, inverse, determinant.

All elimination is done with the field's own arithmetic, so results over the
exact fields are exact.  Pivoting is deterministic: exact fields take the
first nonzero entry scanning rows top-down within the current column
(columns left to right); approx mode takes the entry of maximal absolute
value.  The functions only touch the field through its arithmetic protocol
(add/sub/mul/invert/is_zero/...), so they also work for the dual-number
field used by the derivative machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatchError, SingularMatrixError
from .fields import APPROX, Scalar


class Matrix:
    """An immutable rows x cols matrix over a field."""

    __slots__ = ("field", "data", "nrows", "ncols")
    __hash__ = None

    def __init__(self, field, rows: Sequence[Sequence[Scalar]], ncols: int | None = None):
        data = tuple(tuple(row) for row in rows)
        if data:
            ncols = len(data[0])
            if any(len(row) != ncols for row in data):
                raise DimensionMismatchError("ragged matrix rows")
        elif ncols is None:
            ncols = 0
        self.field = field
        self.data = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        one, zero = field.one(), field.zero()
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> "Matrix":
        zero = field.zero()
        return cls(field, [[zero] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence[Scalar]], nrows: int | None = None) -> "Matrix":
        if columns:
            nrows = len(columns[0])
        elif nrows is None:
            raise DimensionMismatchError("nrows required for a matrix with no columns")
        return cls(field, [[col[i] for col in columns] for i in range(nrows)], ncols=len(columns))

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatchError(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        f = self.field
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = f.zero()
                for l in range(self.ncols):
                    acc = f.add(acc, f.mul(self.data[i][l], other.data[l][j]))
                row.append(acc)
            out.append(row)
        return Matrix(f, out, ncols=other.ncols)

    def apply(self, vec: Sequence[Scalar]) -> tuple:
        """Matrix-vector product."""
        if len(vec) != self.ncols:
            raise DimensionMismatchError(f"vector length {len(vec)} != {self.ncols} columns")
        f = self.field
        out = []
        for i in range(self.nrows):
            acc = f.zero()
            for l in range(self.ncols):
                acc = f.add(acc, f.mul(self.data[i][l], vec[l]))
            out.append(acc)
        return tuple(out)

    def with_scaled_column(self, j: int, factor: Scalar) -> "Matrix":
        f = self.field
        rows = [list(row) for row in self.data]
        for i in range(self.nrows):
            rows[i][j] = f.mul(rows[i][j], factor)
        return Matrix(f, rows, ncols=self.ncols)

    def submatrix_rows(self, row_indices: Sequence[int]) -> "Matrix":
        return Matrix(self.field, [self.data[i] for i in row_indices], ncols=self.ncols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols) or self.field != other.field:
            return False
        f = self.field
        return all(
            f.eq(self.data[i][j], other.data[i][j])
            for i in range(self.nrows) for j in range(self.ncols))

    def __repr__(self) -> str:
        f = self.field
        body = "; ".join(", ".join(f.format(x) for x in row) for row in self.data)
        return f"Matrix({self.nrows}x{self.ncols} over {f.describe()}: [{body}])"


@dataclass(frozen=True)
class RankProfile:
    """Rank plus one deterministic choice of invertible pivot submatrix."""

    rank: int
    pivot_rows: tuple[int, ...]
    pivot_cols: tuple[int, ...]


def _pick_pivot(field, rows: list[list[Scalar]], col: int, candidates: list[int]) -> int | None:
    """Deterministic pivot row among candidate rows, or None if the column is dead."""
    if field.kind == APPROX:
        best = None
        for i in candidates:
            if not field.is_zero(rows[i][col]) and (best is None or abs(rows[i][col]) > abs(rows[best][col])):
                best = i
        return best
    for i in candidates:
        if not field.is_zero(rows[i][col]):
            return i
    return None


def rank_profile(m: Matrix) -> RankProfile:
    """Gaussian elimination rank with the rows/columns of an invertible minor."""
    f = m.field
    rows = [list(row) for row in m.data]
    free = list(range(m.nrows))  # rows not yet used as pivots, in original order
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    for c in range(m.ncols):
        r = _pick_pivot(f, rows, c, free)
        if r is None:
            continue
        pivot_rows.append(r)
        pivot_cols.append(c)
        free.remove(r)
        inv = f.invert(rows[r][c])
        # no is_zero skip here: dual numbers can have zero value but a
        # nonzero derivative part that still has to be eliminated
        for i in free:
            factor = f.mul(rows[i][c], inv)
            for j in range(c, m.ncols):
                rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[r][j]))
    return RankProfile(len(pivot_rows), tuple(sorted(pivot_rows)), tuple(pivot_cols))


def solve_in_column_space(basis: Matrix, target: Sequence[Scalar]):
    """Coordinates of target in the column space of basis, or None if outside.

    basis must have full column rank; the returned coordinate vector is then
    unique.  Raises SingularMatrixError when the basis columns are dependent.
    """
    if len(target) != basis.nrows:
        raise DimensionMismatchError(
            f"target length {len(target)} != basis rows {basis.nrows}")
    f = basis.field
    k = basis.ncols
    rows = [list(basis.data[i]) + [target[i]] for i in range(basis.nrows)]
    free = list(range(basis.nrows))
    pivot_of_col: list[int] = []
    for c in range(k):
        r = _pick_pivot(f, rows, c, free)
        if r is None:
            raise SingularMatrixError("basis columns are dependent")
        free.remove(r)
        pivot_of_col.append(r)
        inv = f.invert(rows[r][c])
        rows[r] = [f.mul(x, inv) for x in rows[r]]
        for i in range(basis.nrows):
            if i == r:
                continue
            factor = rows[i][c]
            rows[i] = [f.sub(rows[i][j], f.mul(factor, rows[r][j])) for j in range(k + 1)]
    for i in free:
        if not f.is_zero(rows[i][k]):
            return None
    return tuple(rows[pivot_of_col[c]][k] for c in range(k))


def invert_matrix(m: Matrix) -> Matrix:
    """Inverse of a square matrix; raises SingularMatrixError if singular."""
    if m.nrows != m.ncols:
        raise DimensionMismatchError(f"cannot invert {m.nrows}x{m.ncols} matrix")
    f = m.field
    n = m.nrows
    one, zero = f.one(), f.zero()
    rows = [list(m.data[i]) + [one if j == i else zero for j in range(n)] for i in range(n)]
    free = list(range(n))
    pivot_of_col: list[int] = []
    for c in range(n):
        r = _pick_pivot(f, rows, c, free)
        if r is None:
            raise SingularMatrixError("matrix is singular")
        free.remove(r)
        pivot_of_col.append(r)
        inv = f.invert(rows[r][c])
        rows[r] = [f.mul(x, inv) for x in rows[r]]
        for i in range(n):
            if i == r:
                continue
            factor = rows[i][c]
            rows[i] = [f.sub(rows[i][j], f.mul(factor, rows[r][j])) for j in range(2 * n)]
    return Matrix(f, [rows[pivot_of_col[c]][n:] for c in range(n)], ncols=n)


def determinant(m: Matrix) -> Scalar:
    """Exact determinant; the empty 0x0 matrix has determinant 1."""
    if m.nrows != m.ncols:
        raise DimensionMismatchError(f"determinant of non-square {m.nrows}x{m.ncols} matrix")
    f = m.field
    n = m.nrows
    if n == 0:
        return f.one()
    rows = [list(row) for row in m.data]
    det = f.one()
    for c in range(n):
        r = _pick_pivot(f, rows, c, list(range(c, n)))
        if r is None:
            return f.zero()
        if r != c:
            rows[c], rows[r] = rows[r], rows[c]
            det = f.neg(det)
        det = f.mul(det, rows[c][c])
        inv = f.invert(rows[c][c])
        for i in range(c + 1, n):
            factor = f.mul(rows[i][c], inv)
            for j in range(c, n):
                rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[c][j]))
    return det
