"""Exact matrices over Q or a cyclotomic field, plus rank and lattice tools.

Determinants use fraction-free Bareiss elimination (intermediate entries are
minors of the input, which keeps coefficient growth under control), inverses
use Gauss-Jordan elimination, and everything is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from coverrep.scalars import field_from_json


class KMatrix:
    """A rectangular matrix over an exact field K (Q or Q(zeta_k))."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, data):
        self.field = field
        self.data = tuple(tuple(row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, field, n):
        one, zero = field.one, field.zero
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field, rows, cols):
        zero = field.zero
        return cls(field, [[zero] * cols for _ in range(rows)])

    @classmethod
    def from_int_rows(cls, field, data):
        return cls(field, [[field.coerce(x) for x in row] for row in data])

    def __add__(self, other):
        self._check(other)
        return KMatrix(self.field, [[a + b for a, b in zip(r1, r2)]
                                    for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other):
        self._check(other)
        return KMatrix(self.field, [[a - b for a, b in zip(r1, r2)]
                                    for r1, r2 in zip(self.data, other.data)])

    def __neg__(self):
        return KMatrix(self.field, [[-a for a in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, KMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
            ocols = list(zip(*other.data))
            zero = self.field.zero
            out = []
            for row in self.data:
                out_row = []
                for col in ocols:
                    acc = zero
                    for a, b in zip(row, col):
                        acc = acc + a * b
                    out_row.append(acc)
                out.append(out_row)
            return KMatrix(self.field, out)
        scalar = self.field.coerce(other)
        return KMatrix(self.field, [[a * scalar for a in row] for row in self.data])

    def __rmul__(self, other):
        scalar = self.field.coerce(other)
        return KMatrix(self.field, [[scalar * a for a in row] for row in self.data])

    def __pow__(self, n: int):
        if self.rows != self.cols:
            raise ValueError("power of non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        result = KMatrix.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        return (isinstance(other, KMatrix) and self.field == other.field
                and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def _check(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def entry(self, i, j):
        return self.data[i][j]

    def transpose(self):
        return KMatrix(self.field, list(zip(*self.data)))

    def trace(self):
        acc = self.field.zero
        for i in range(min(self.rows, self.cols)):
            acc = acc + self.data[i][i]
        return acc

    def is_zero(self):
        return all(self.field.is_zero(a) for row in self.data for a in row)

    def is_identity(self):
        if self.rows != self.cols:
            return False
        f = self.field
        for i in range(self.rows):
            for j in range(self.cols):
                expected = f.one if i == j else f.zero
                if not f.is_zero(f.sub(self.data[i][j], expected)):
                    return False
        return True

    def det(self):
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return self.field.one
        f = self.field
        m = [list(row) for row in self.data]
        sign = 1
        prev = f.one
        for k in range(n - 1):
            if f.is_zero(m[k][k]):
                for r in range(k + 1, n):
                    if not f.is_zero(m[r][k]):
                        m[k], m[r] = m[r], m[k]
                        sign = -sign
                        break
                else:
                    return f.zero
            pivot = m[k][k]
            prev_inv = f.inv(prev)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = f.sub(f.mul(m[i][j], pivot), f.mul(m[i][k], m[k][j]))
                    m[i][j] = f.mul(num, prev_inv)
                m[i][k] = f.zero
            prev = pivot
        d = m[n - 1][n - 1]
        return d if sign == 1 else f.neg(d)

    def inverse(self):
        """Exact inverse by Gauss-Jordan elimination."""
        if self.rows != self.cols:
            raise ValueError("inverse of non-square matrix")
        n = self.rows
        f = self.field
        m = [list(row) + [f.one if i == j else f.zero for j in range(n)]
             for i, row in enumerate(self.data)]
        for col in range(n):
            pivot_row = None
            for r in range(col, n):
                if not f.is_zero(m[r][col]):
                    pivot_row = r
                    break
            if pivot_row is None:
                raise ZeroDivisionError("matrix is singular")
            m[col], m[pivot_row] = m[pivot_row], m[col]
            inv_p = f.inv(m[col][col])
            m[col] = [f.mul(x, inv_p) for x in m[col]]
            for r in range(n):
                if r != col and not f.is_zero(m[r][col]):
                    factor = m[r][col]
                    m[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(m[r], m[col])]
        return KMatrix(f, [row[n:] for row in m])

    def is_invertible(self) -> bool:
        try:
            return not self.field.is_zero(self.det())
        except ZeroDivisionError:
            return False

    def to_qvec(self) -> tuple[Fraction, ...]:
        """Flatten to rational coordinates (entry-major, then K-coordinates)."""
        out = []
        for row in self.data:
            for a in row:
                out.extend(self.field.to_qvec(a))
        return tuple(out)

    @classmethod
    def from_qvec(cls, field, rows, cols, vec):
        d = field.qdim
        if len(vec) != rows * cols * d:
            raise ValueError("coordinate vector has wrong length")
        data = []
        pos = 0
        for _ in range(rows):
            row = []
            for _ in range(cols):
                row.append(field.from_qvec(tuple(vec[pos:pos + d])))
                pos += d
            data.append(row)
        return cls(field, data)

    def to_json(self):
        return {
            "field": self.field.describe(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[self.field.to_json(a) for a in row] for row in self.data],
        }

    @classmethod
    def from_json(cls, data):
        field = field_from_json(data["field"])
        return cls(field, [[field.from_json(a) for a in row] for row in data["entries"]])

    def __repr__(self):
        return f"KMatrix({self.field!r}, {self.rows}x{self.cols})"


def char_poly_2x2(m: KMatrix):
    """Coefficients (c0, c1, c2) of det(x*I - m) = c2 x^2 + c1 x + c0."""
    if m.rows != 2 or m.cols != 2:
        raise ValueError("expected a 2x2 matrix")
    f = m.field
    return (m.det(), f.neg(m.trace()), f.one)


class QRowSpace:
    """Incremental row-echelon basis over Q for exact rank computations."""

    def __init__(self, dim: int):
        self.dim = dim
        self.pivots: dict[int, tuple[Fraction, ...]] = {}

    def _reduce(self, vec):
        vec = list(vec)
        for col in sorted(self.pivots):
            if vec[col] != 0:
                row = self.pivots[col]
                c = vec[col]
                for j in range(col, self.dim):
                    if row[j]:
                        vec[j] -= c * row[j]
        return vec

    def insert(self, vec) -> bool:
        """Insert a vector; return True when it enlarges the span."""
        vec = self._reduce(vec)
        for col in range(self.dim):
            if vec[col] != 0:
                inv = 1 / vec[col]
                self.pivots[col] = tuple(x * inv for x in vec)
                return True
        return False

    def contains(self, vec) -> bool:
        return all(x == 0 for x in self._reduce(vec))

    @property
    def rank(self) -> int:
        return len(self.pivots)


def q_matrix_rank(rows) -> int:
    rows = list(rows)
    if not rows:
        return 0
    space = QRowSpace(len(rows[0]))
    for row in rows:
        space.insert(row)
    return space.rank


def q_solve(matrix_rows, rhs):
    """Solve A x = b exactly over Q; return one solution or None.

    ``matrix_rows`` is a list of row tuples, ``rhs`` a list of Fractions.
    """
    rows = [list(r) + [Fraction(b)] for r, b in zip(matrix_rows, rhs)]
    ncols = len(matrix_rows[0]) if matrix_rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [x - c * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][ncols] != 0:
            return None
    solution = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        solution[col] = rows[i][ncols]
    return solution


def q_kernel_basis(matrix_rows, ncols):
    """Basis of the right kernel of a rational matrix, as tuples."""
    rows = [list(r) for r in matrix_rows]
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [x - c * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, col in enumerate(pivots):
            vec[col] = -rows[i][free]
        basis.append(tuple(vec))
    return basis


def _xgcd(a: int, b: int):
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


class IntegerLattice:
    """A sublattice of (1/D) Z^n with an exact membership test.

    Rational generating vectors are scaled by a common denominator D and kept
    as an integer basis in row-echelon form (strictly increasing pivots),
    maintained with extended-gcd row combinations.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.denominator = 1
        # parallel lists: basis rows and their pivot columns, pivots increasing
        self.basis: list[list[int]] = []
        self.pivot_cols: list[int] = []

    @classmethod
    def from_qvectors(cls, vectors):
        vectors = [tuple(Fraction(x) for x in v) for v in vectors]
        if not vectors:
            raise ValueError("empty generating set")
        lattice = cls(len(vectors[0]))
        denom = 1
        for v in vectors:
            for x in v:
                denom = lcm(denom, x.denominator)
        lattice.denominator = denom
        for v in vectors:
            lattice.add_integer_vector([int(x * denom) for x in v])
        return lattice

    def add_integer_vector(self, vec):
        """Insert one integer vector, keeping the echelon invariant."""
        vec = list(vec)
        col = 0
        while col < self.dim:
            if vec[col] == 0:
                col += 1
                continue
            if col in self.pivot_cols:
                idx = self.pivot_cols.index(col)
                row = self.basis[idx]
                a, b = row[col], vec[col]
                if b % a == 0:
                    q = b // a
                    for j in range(col, self.dim):
                        vec[j] -= q * row[j]
                else:
                    x, y, g = _xgcd(a, b)
                    ag, bg = a // g, b // g
                    for j in range(col, self.dim):
                        rj, vj = row[j], vec[j]
                        row[j] = x * rj + y * vj
                        vec[j] = -bg * rj + ag * vj
                # vec[col] is now zero either way
                col += 1
            else:
                insert_at = 0
                while insert_at < len(self.pivot_cols) and self.pivot_cols[insert_at] < col:
                    insert_at += 1
                self.basis.insert(insert_at, vec)
                self.pivot_cols.insert(insert_at, col)
                return

    def contains(self, qvec) -> bool:
        vec = [Fraction(x) * self.denominator for x in qvec]
        if any(x.denominator != 1 for x in vec):
            return False
        vec = [int(x) for x in vec]
        for row, col in zip(self.basis, self.pivot_cols):
            if vec[col] != 0:
                if vec[col] % row[col] != 0:
                    return False
                q = vec[col] // row[col]
                for j in range(col, self.dim):
                    vec[j] -= q * row[j]
        return all(x == 0 for x in vec)

    @property
    def rank(self) -> int:
        return len(self.basis)
