"""Exact dense matrices over the rationals, indexed by a simplex grid."""
from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

from .errors import DimensionError
from .scalar import format_rational, parse_rational, to_exact

_ZERO = Fraction(0)


def exact_zeros(rows: int, cols: int | None = None) -> np.ndarray:
    return np.full((rows, rows if cols is None else cols), _ZERO, dtype=object)


def exact_identity(size: int) -> np.ndarray:
    out = exact_zeros(size)
    for i in range(size):
        out[i, i] = Fraction(1)
    return out


def integer_form(entries: np.ndarray) -> tuple[np.ndarray, int]:
    """(A, d) with entries == A / d, A an integer object array, d > 0."""
    flat = entries.ravel()
    den = math.lcm(*(to_exact(v).denominator for v in flat)) if flat.size else 1
    ints = np.empty(entries.shape, dtype=object)
    ints_flat = ints.ravel()
    for i, v in enumerate(flat):
        v = to_exact(v)
        ints_flat[i] = v.numerator * (den // v.denominator)
    return ints, den


def from_integer_form(ints: np.ndarray, den: int) -> np.ndarray:
    out = np.empty(ints.shape, dtype=object)
    out_flat = out.ravel()
    for i, v in enumerate(ints.ravel()):
        out_flat[i] = Fraction(int(v), den)
    return out


def exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product; integer arithmetic on a common denominator, reduced once per entry."""
    ai, da = integer_form(a)
    bi, db = integer_form(b)
    return from_integer_form(ai.dot(bi), da * db)


def as_exact_array(values) -> np.ndarray:
    arr = np.array(values, dtype=object)
    return np.vectorize(to_exact, otypes=[object])(arr) if arr.size else arr


class OperatorMatrix:
    """An exact square matrix whose rows and columns follow ``grid.points``."""

    __slots__ = ("grid", "entries")

    def __init__(self, grid, entries: np.ndarray):
        size = len(grid)
        if entries.shape != (size, size):
            raise DimensionError(f"matrix shape {entries.shape} does not fit grid of size {size}")
        self.grid = grid
        self.entries = entries

    @classmethod
    def zero(cls, grid) -> "OperatorMatrix":
        return cls(grid, exact_zeros(len(grid)))

    @classmethod
    def identity(cls, grid, scale=1) -> "OperatorMatrix":
        return cls(grid, exact_identity(len(grid)) * to_exact(scale))

    @classmethod
    def diagonal(cls, grid, values) -> "OperatorMatrix":
        m = exact_zeros(len(grid))
        for i, v in enumerate(values):
            m[i, i] = to_exact(v)
        return cls(grid, m)

    @property
    def size(self) -> int:
        return len(self.grid)

    def __repr__(self):
        return f"OperatorMatrix({self.grid!r}, nonzeros={self.nonzero_count()})"

    def _check(self, other: "OperatorMatrix"):
        if self.grid != other.grid:
            raise DimensionError(f"grid mismatch: {self.grid!r} vs {other.grid!r}")

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        return OperatorMatrix(self.grid, exact_matmul(self.entries, other.entries))

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        return OperatorMatrix(self.grid, self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check(other)
        return OperatorMatrix(self.grid, self.entries - other.entries)

    def __neg__(self):
        return OperatorMatrix(self.grid, -self.entries)

    def scale(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.grid, self.entries * to_exact(c))

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def plus_identity(self, c) -> "OperatorMatrix":
        out = self.entries.copy()
        c = to_exact(c)
        for i in range(self.size):
            out[i, i] += c
        return OperatorMatrix(self.grid, out)

    def dot(self, vector) -> np.ndarray:
        v = np.asarray(vector, dtype=object).reshape(self.size, -1)
        return exact_matmul(self.entries, v).reshape(np.shape(vector))

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix) or self.grid != other.grid:
            return False
        return bool(np.all(self.entries == other.entries))

    __hash__ = None

    def is_zero(self) -> bool:
        return not np.any(self.entries != 0)

    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.entries != 0))

    def first_nonzero(self):
        """(row, col, value) of the first nonzero entry, or None."""
        rows, cols = np.nonzero(self.entries != 0)
        if len(rows) == 0:
            return None
        r, c = int(rows[0]), int(cols[0])
        return r, c, self.entries[r, c]

    def scalar_value(self):
        """The c with self == c * Id, or None when the matrix is not scalar."""
        c = self.entries[0, 0] if self.size else _ZERO
        return c if self == OperatorMatrix.identity(self.grid, c) else None

    def is_diagonal(self) -> bool:
        off = self.entries.copy()
        for i in range(self.size):
            off[i, i] = _ZERO
        return not np.any(off != 0)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        rows = []
        for r in range(self.size):
            rows.append(
                [[c, format_rational(self.entries[r, c])] for c in range(self.size) if self.entries[r, c] != 0]
            )
        return {"grid": self.grid.params.to_dict(), "rows": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "OperatorMatrix":
        from .grid import SimplexGrid
        from .polynomials import ParameterSet

        g = data["grid"]
        grid = SimplexGrid(ParameterSet.from_literals(g["n"], g["N"], g["beta"]))
        m = exact_zeros(len(grid))
        if len(data["rows"]) != len(grid):
            raise DimensionError("row count does not match grid size")
        for r, row in enumerate(data["rows"]):
            for c, value in row:
                m[r, c] = parse_rational(value)
        return cls(grid, m)

    @classmethod
    def from_json(cls, text: str) -> "OperatorMatrix":
        return cls.from_dict(json.loads(text))


def compose(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a @ b


def add(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a + b


def scale(a: OperatorMatrix, c) -> OperatorMatrix:
    return a.scale(c)


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a @ b - b @ a


def anticommutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a @ b + b @ a


# -- exact linear algebra ----------------------------------------------------


def charpoly(entries: np.ndarray) -> list[Fraction]:
    """Characteristic polynomial det(t I - M), coefficients lowest degree first.

    Reduces to upper Hessenberg form by exact similarity transforms, then
    runs the standard Hessenberg determinant recurrence; O(n^3) operations.
    """
    H = np.array(entries, dtype=object, copy=True)
    n = H.shape[0]
    for m in range(1, n - 1):
        pivot = next((i for i in range(m, n) if H[i, m - 1] != 0), None)
        if pivot is None:
            continue
        if pivot != m:
            H[[pivot, m], :] = H[[m, pivot], :]
            H[:, [pivot, m]] = H[:, [m, pivot]]
        p = H[m, m - 1]
        for i in range(m + 1, n):
            if H[i, m - 1] == 0:
                continue
            u = H[i, m - 1] / p
            H[i, :] = H[i, :] - u * H[m, :]
            H[:, m] = H[:, m] + u * H[:, i]
    # polys[k] = charpoly of leading k x k block
    polys = [[Fraction(1)]]
    for k in range(1, n + 1):
        a = H[k - 1, k - 1]
        prev = polys[k - 1]
        cur = [_ZERO] + list(prev)  # t * p_{k-1}
        for i, c in enumerate(prev):
            cur[i] -= a * c
        prod = Fraction(1)
        for i in range(k - 1, 0, -1):
            prod *= H[i, i - 1]
            if prod == 0:
                break
            h = H[i - 1, k - 1]
            if h == 0:
                continue
            for idx, c in enumerate(polys[i - 1]):
                cur[idx] -= prod * h * c
        polys.append([Fraction(c) for c in cur])
    return polys[n]


def divide_linear(coeffs: list[Fraction], root) -> tuple[list[Fraction], Fraction]:
    """Synthetic division of sum c_i t^i by (t - root): (quotient, remainder)."""
    root = to_exact(root)
    if len(coeffs) <= 1:
        return [], coeffs[0] if coeffs else _ZERO
    deg = len(coeffs) - 1
    q = [_ZERO] * deg
    carry = coeffs[deg]
    for i in range(deg - 1, -1, -1):
        q[i] = carry
        carry = coeffs[i] + carry * root
    return q, carry


def rank(entries: np.ndarray) -> int:
    A = np.array(entries, dtype=object, copy=True)
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if A[i, c] != 0), None)
        if pivot is None:
            continue
        A[[r, pivot], :] = A[[pivot, r], :]
        for i in range(r + 1, rows):
            if A[i, c] != 0:
                A[i, :] = A[i, :] - (A[i, c] / A[r, c]) * A[r, :]
        r += 1
        if r == rows:
            break
    return r
