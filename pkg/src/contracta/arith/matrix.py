"""Dense matrices over any exact ring (Scalar, Poly or EpsSeries entries)."""

from __future__ import annotations

from itertools import permutations

from ..errors import DimensionMismatch, NotInvertible
from .scalar import Scalar


class Matrix:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows:
            raise DimensionMismatch("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", width)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, n, m=None, zero=None):
        z = Scalar(0) if zero is None else zero
        return cls([[z] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def identity(cls, n, one=None, zero=None):
        one = Scalar(1) if one is None else one
        zero = Scalar(0) if zero is None else zero
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, entries, zero=None):
        entries = list(entries)
        zero = Scalar(0) if zero is None else zero
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def map(self, fn) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self.rows])

    def transpose(self) -> "Matrix":
        return Matrix([list(c) for c in zip(*self.rows)])

    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other.rows))
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = r[0] * c[0]
                    for a, b in zip(r[1:], c[1:]):
                        acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return Matrix(out)
        return self.map(lambda x: x * other)

    def __rmul__(self, other):
        return self.map(lambda x: other * x)

    def __matmul__(self, other):
        return self * other

    def apply(self, vec):
        if len(vec) != self.ncols:
            raise DimensionMismatch("vector length mismatch")
        out = []
        for r in self.rows:
            acc = r[0] * vec[0]
            for a, b in zip(r[1:], vec[1:]):
                acc = acc + a * b
            out.append(acc)
        return out

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    # -- determinants ---------------------------------------------------
    def minor(self, i, j) -> "Matrix":
        return Matrix([r[:j] + r[j + 1:] for k, r in enumerate(self.rows) if k != i])

    def det(self):
        if self.nrows != self.ncols:
            raise DimensionMismatch("det of non-square matrix")
        n = self.nrows
        if all(isinstance(x, Scalar) for r in self.rows for x in r):
            return _det_field(self.rows)
        if n == 1:
            return self.rows[0][0]
        if n <= 4:
            total = None
            for perm in permutations(range(n)):
                term = self.rows[0][perm[0]]
                for i in range(1, n):
                    term = term * self.rows[i][perm[i]]
                if _perm_sign(perm) < 0:
                    term = -term
                total = term if total is None else total + term
            return total
        total = None
        for j in range(n):
            t = self.rows[0][j] * self.minor(0, j).det()
            if j % 2:
                t = -t
            total = t if total is None else total + t
        return total

    def adjugate(self) -> "Matrix":
        n = self.nrows
        if n == 1:
            return Matrix([[self.rows[0][0] * 0 + 1]])
        cof = []
        for i in range(n):
            row = []
            for j in range(n):
                d = self.minor(i, j).det()
                row.append(-d if (i + j) % 2 else d)
            cof.append(row)
        return Matrix(cof).transpose()

    def inverse(self) -> "Matrix":
        """Gauss-Jordan inverse for Scalar matrices."""
        n = self.nrows
        if n != self.ncols:
            raise DimensionMismatch("inverse of non-square matrix")
        a = [list(r) + [Scalar(1) if i == j else Scalar(0) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                raise NotInvertible("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            inv = a[col][col].inverse()
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return Matrix([r[n:] for r in a])

    def __str__(self):
        return "[" + ",\n ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "]"

    __repr__ = __str__


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _det_field(rows) -> Scalar:
    a = [list(r) for r in rows]
    n = len(a)
    det = Scalar(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return Scalar(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det
