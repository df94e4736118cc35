"""Exact dense matrices and Gaussian elimination.

Matrices are immutable tuples of row tuples over a single field.  All
algorithms here are fraction-free in spirit but not in implementation:
entries grow as needed and stay exact.  Ambient sizes are desk scale
(dimension a few dozen), so clarity wins over asymptotics throughout.
"""

from __future__ import annotations

from typing import Callable, Iterable, NamedTuple, Sequence

from .errors import DimensionMismatch, FieldMismatch
from .fields import Field, Scalar, same_field
from .polynomials import Polynomial

Vector = tuple


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Iterable[Iterable]):
        rs = tuple(tuple(field.scalar(e) for e in row) for row in rows)
        ncols = len(rs[0]) if rs else 0
        for row in rs:
            if len(row) != ncols:
                raise DimensionMismatch("ragged rows")
        self.field = field
        self.nrows = len(rs)
        self.ncols = ncols
        self.rows = rs

    # ---- constructors -------------------------------------------------

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def diagonal(cls, field: Field, diag: Sequence) -> "Matrix":
        z = field.zero
        d = [field.scalar(x) for x in diag]
        n = len(d)
        return cls(field, [[d[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence]) -> "Matrix":
        return cls(field, cols).transpose()

    # ---- shape and access ---------------------------------------------

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return all(not e for row in self.rows for e in row)

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> Vector:
        return self.rows[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def flatten(self) -> Vector:
        return tuple(e for row in self.rows for e in row)

    # ---- arithmetic ----------------------------------------------------

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("matrix addition shape mismatch")
        return Matrix(
            self.field,
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("matrix subtraction shape mismatch")
        return Matrix(
            self.field,
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ],
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, [[-e for e in row] for row in self.rows])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
            )
        bcols = [other.column(j) for j in range(other.ncols)]
        z = self.field.zero
        out = []
        for row in self.rows:
            out_row = []
            for col in bcols:
                acc = z
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return Matrix(self.field, out)

    def scale(self, c) -> "Matrix":
        c = self.field.scalar(c)
        return Matrix(self.field, [[c * e for e in row] for row in self.rows])

    def __rmul__(self, c) -> "Matrix":
        return self.scale(c)

    def apply(self, v: Sequence) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.ncols:
            raise DimensionMismatch("matrix-vector length mismatch")
        v = tuple(self.field.scalar(x) for x in v)
        z = self.field.zero
        out = []
        for row in self.rows:
            acc = z
            for a, b in zip(row, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [self.column(j) for j in range(self.ncols)])

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.ncols == other.ncols
        )

    def __hash__(self):
        return hash((self.field, self.ncols, self.rows))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"


# ---- elimination -------------------------------------------------------


class RrefResult(NamedTuple):
    matrix: "Matrix"
    rank: int
    pivots: tuple


def rref_rows(field: Field, rows: list) -> tuple[list, int, tuple]:
    """Reduced row echelon form of mutable row lists, in place.

    Returns (rows, rank, pivot-columns).  The first `rank` rows carry the
    pivots; the rest are zero.  The result is the unique RREF, so equal
    row spaces give equal outputs.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = field.one / rows[r][c]
        if inv != field.one:
            rows[r] = [inv * e for e in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, r, tuple(pivots)


def rref(m: Matrix) -> RrefResult:
    rows, rank, pivots = rref_rows(m.field, [list(r) for r in m.rows])
    return RrefResult(Matrix(m.field, rows), rank, pivots)


def rank(m: Matrix) -> int:
    return rref(m).rank


def kernel_vectors(m: Matrix) -> tuple:
    """Basis of the right kernel {x : m @ x = 0} as a tuple of vectors.

    One basis vector per free column, with a 1 in that coordinate; this
    is the standard RREF back-substitution basis (not itself reduced).
    """
    field = m.field
    rows, r, pivots = rref_rows(field, [list(row) for row in m.rows])
    pivot_set = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    z, o = field.zero, field.one
    basis = []
    for fcol in free:
        v = [z] * m.ncols
        v[fcol] = o
        for i, pcol in enumerate(pivots):
            v[pcol] = -rows[i][fcol]
        basis.append(tuple(v))
    return tuple(basis)


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """One solution of m @ x = b, or None if the system is inconsistent."""
    field = m.field
    if len(b) != m.nrows:
        raise DimensionMismatch("right-hand side length mismatch")
    b = [field.scalar(x) for x in b]
    aug = [list(row) + [b[i]] for i, row in enumerate(m.rows)]
    rows, r, pivots = rref_rows(field, aug)
    if m.ncols in pivots:
        return None
    z = field.zero
    x = [z] * m.ncols
    for i, pcol in enumerate(pivots):
        x[pcol] = rows[i][m.ncols]
    return tuple(x)


# ---- vector helpers -----------------------------------------------------


def vec_add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))

def vec_sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))

def vec_scale(c, v: Sequence) -> Vector:
    return tuple(c * x for x in v)

def vec_is_zero(v: Sequence) -> bool:
    return all(not x for x in v)


# ---- polynomials of matrices --------------------------------------------


def poly_eval_matrix(p: Polynomial, m: Matrix) -> Matrix:
    """Evaluate a polynomial at a square matrix by Horner's rule."""
    if not m.is_square():
        raise DimensionMismatch("polynomial of a non-square matrix")
    if p.field != m.field:
        raise FieldMismatch(f"{p.field!r} vs {m.field!r}")
    n = m.nrows
    if p.is_zero():
        return Matrix.zeros(m.field, n, n)
    eye = Matrix.identity(m.field, n)
    acc = eye.scale(p.coeffs[-1])
    for c in reversed(p.coeffs[:-1]):
        acc = acc @ m
        if c:
            acc = acc + eye.scale(c)
    return acc


def min_poly(m: Matrix) -> Polynomial:
    """Monic minimal polynomial, found as the first linear dependency
    among the flattened powers I, m, m^2, ...

    Maintains an echelon basis of the flattened powers together with the
    combination that produced each basis row, so the dependency
    coefficients fall out of the final reduction.
    """
    if not m.is_square():
        raise DimensionMismatch("minimal polynomial of a non-square matrix")
    field = m.field
    n = m.nrows
    if n == 0:
        return Polynomial.one(field)
    echelon: list[tuple[int, list, list]] = []  # (pivot index, row, combo)
    power = Matrix.identity(field, n)
    k = 0
    while True:
        vec = list(power.flatten())
        combo = [field.zero] * (k + 1)
        combo[k] = field.one
        for pivot, row, rcombo in echelon:
            c = vec[pivot]
            if c:
                vec = [a - c * b for a, b in zip(vec, row)]
                combo = [
                    a - c * (rcombo[i] if i < len(rcombo) else field.zero)
                    for i, a in enumerate(combo)
                ]
        pivot = next((i for i, x in enumerate(vec) if x), None)
        if pivot is None:
            # zero residual means sum_i combo_i M^i = 0 with combo_k = 1
            return Polynomial(field, combo[:k] + [field.one])
        inv = field.one / vec[pivot]
        vec = [inv * x for x in vec]
        combo = [inv * x for x in combo]
        echelon.append((pivot, vec, combo))
        echelon.sort(key=lambda t: t[0])
        power = power @ m
        k += 1
        if k > n:
            raise AssertionError("minimal polynomial exceeded ambient dimension")
