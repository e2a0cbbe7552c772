"""The simplex grid V_x = {0 <= x_1 <= ... <= x_{n-2} <= N} and functions on it."""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import numpy as np

from .polynomials import ParameterSet, racah_multivariate


class SimplexGrid:
    """Lexicographically ordered grid points with a point -> row index map.

    The same enumeration serves for multi-indices k (V_k = V_x as sets of
    size C(N+n-2, n-2)), read through :meth:`multi_indices`.
    """

    def __init__(self, params: ParameterSet):
        self.params = params
        self.n = params.n
        self.N = params.N
        self.points = tuple(
            itertools.combinations_with_replacement(range(params.N + 1), params.n - 2)
        )
        self.index = {pt: i for i, pt in enumerate(self.points)}
        assert len(self.points) == comb(params.N + params.n - 2, params.n - 2)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, SimplexGrid) and self.params == other.params

    def __hash__(self):
        return hash(self.params)

    def __repr__(self):
        return f"SimplexGrid(n={self.n}, N={self.N}, size={len(self)})"

    def extended(self, point) -> tuple:
        return (0, *point, self.N)

    def contains(self, point) -> bool:
        return point in self.index

    def multi_indices(self) -> list[tuple]:
        """V_k in the order matching :attr:`points` (k_i = x_i - x_{i-1})."""
        out = []
        for pt in self.points:
            prev = 0
            k = []
            for v in pt:
                k.append(v - prev)
                prev = v
            out.append(tuple(k))
        return out

    def function(self, fn) -> np.ndarray:
        """Tabulate ``fn(point)`` as a GridFunction (object array in row order)."""
        out = np.empty(len(self), dtype=object)
        for i, pt in enumerate(self.points):
            out[i] = Fraction(fn(pt))
        return out

    def zeros(self) -> np.ndarray:
        return self.function(lambda pt: 0)


def racah_table(grid: SimplexGrid, p: int | None = None) -> tuple[list[tuple], np.ndarray]:
    """Rows R_p(k; .) for every k in V_k, as an exact matrix (rows k, cols x)."""
    params = grid.params
    if p is None:
        p = params.n - 2
    ks = grid.multi_indices()
    table = np.empty((len(ks), len(grid)), dtype=object)
    for r, k in enumerate(ks):
        for c, x in enumerate(grid.points):
            table[r, c] = racah_multivariate(p, k, x, params)
    return ks, table
