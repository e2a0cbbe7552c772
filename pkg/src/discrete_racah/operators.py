"""Symbolic multivariate shift operators and the Racah operators L_j.

An operator acts on functions of the extended coordinates
``X = (x_0=0, x_1, ..., x_{n-2}, x_{n-1}=N)`` with parameters
``B = (beta_0, ..., beta_{n-1})``; it is stored as

    (Op f)(x) = sum_nu G_nu(x) (f(x + nu) - f(x)) + identity_part(x) f(x)

with one term per nonzero shift vector ``nu`` over positions 1..n-2.
Coefficients are evaluated pointwise, never expanded symbolically.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import BoundaryError, DimensionError, PoleError, RangeError
from .grid import SimplexGrid
from .matrix import OperatorMatrix
from .polynomials import ParameterSet, extended_point, kappa
from .scalar import to_exact

_ZERO = Fraction(0)


class Coefficient:
    """Pointwise evaluator ``(X, B) -> Fraction``.

    ``reach`` is the highest coordinate or parameter index the evaluator
    reads; the index shift sigma is legal only while it stays below n-1.
    """

    __slots__ = ("fn", "reach")

    def __init__(self, fn: Callable[[Sequence, Sequence], Fraction], reach: int = 0):
        self.fn = fn
        self.reach = reach

    def __call__(self, X, B) -> Fraction:
        return self.fn(X, B)

    @classmethod
    def constant(cls, value) -> "Coefficient":
        value = to_exact(value)
        return cls(lambda X, B: value, 0)

    def shifted(self) -> "Coefficient":
        fn = self.fn
        return Coefficient(lambda X, B: fn(X[1:], B[1:]), self.reach + 1)

    def scaled(self, c) -> "Coefficient":
        c = to_exact(c)
        fn = self.fn
        if c == 0:
            return Coefficient.constant(0)
        return Coefficient(lambda X, B: c * fn(X, B), self.reach)

    def __add__(self, other: "Coefficient") -> "Coefficient":
        f, g = self.fn, other.fn
        return Coefficient(lambda X, B: f(X, B) + g(X, B), max(self.reach, other.reach))

    def __neg__(self):
        return self.scaled(-1)


@dataclass(frozen=True)
class ShiftTerm:
    nu: tuple
    coefficient: Coefficient


class DifferenceOperator:
    """Shift-term list plus a multiplication part, for a fixed n."""

    def __init__(self, n: int, terms=(), identity_part: Coefficient | None = None):
        self.n = n
        merged: dict[tuple, Coefficient] = {}
        for term in terms:
            nu = tuple(term.nu)
            if len(nu) != n - 2:
                raise DimensionError(f"shift {nu} has wrong length for n={n}")
            if not any(nu):
                raise ValueError("zero shift belongs in identity_part")
            merged[nu] = merged[nu] + term.coefficient if nu in merged else term.coefficient
        self.terms = tuple(ShiftTerm(nu, c) for nu, c in merged.items())
        self.identity_part = identity_part if identity_part is not None else Coefficient.constant(0)

    def __repr__(self):
        return f"DifferenceOperator(n={self.n}, shifts={[t.nu for t in self.terms]})"

    @property
    def reach(self) -> int:
        return max([self.identity_part.reach] + [t.coefficient.reach for t in self.terms])

    def _check_same_n(self, other):
        if self.n != other.n:
            raise DimensionError(f"operators for n={self.n} and n={other.n} do not combine")

    def __add__(self, other: "DifferenceOperator") -> "DifferenceOperator":
        self._check_same_n(other)
        return DifferenceOperator(
            self.n, self.terms + other.terms, self.identity_part + other.identity_part
        )

    def scaled(self, c) -> "DifferenceOperator":
        return DifferenceOperator(
            self.n,
            [ShiftTerm(t.nu, t.coefficient.scaled(c)) for t in self.terms],
            self.identity_part.scaled(c),
        )

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def plus_multiplication(self, coefficient: Coefficient) -> "DifferenceOperator":
        return DifferenceOperator(self.n, self.terms, self.identity_part + coefficient)

    def shift_form(self) -> list[tuple[tuple, Coefficient]]:
        """Terms c_nu(x) E_nu including nu = 0, the plain shift expansion."""
        zero = (0,) * (self.n - 2)
        diag = self.identity_part
        for t in self.terms:
            diag = diag + (-t.coefficient)
        return [(zero, diag)] + [(t.nu, t.coefficient) for t in self.terms]

    @classmethod
    def from_shift_form(cls, n: int, pairs) -> "DifferenceOperator":
        zero = (0,) * (n - 2)
        identity = Coefficient.constant(0)
        terms = []
        for nu, c in pairs:
            identity = identity + c
            if nu != zero:
                terms.append(ShiftTerm(nu, c))
        return cls(n, terms, identity)

    def compose(self, other: "DifferenceOperator") -> "DifferenceOperator":
        """Symbolic product self * other (apply ``other`` first)."""
        self._check_same_n(other)
        left, right = self.shift_form(), other.shift_form()
        grouped: dict[tuple, list] = {}
        for mu, a in left:
            for nu, b in right:
                total = tuple(m + v for m, v in zip(mu, nu))
                grouped.setdefault(total, []).append((mu, a, b))
        pairs = []
        for total, parts in grouped.items():
            pairs.append((total, _composite_coefficient(parts)))
        return DifferenceOperator.from_shift_form(self.n, pairs)


def _composite_coefficient(parts) -> Coefficient:
    parts = [((0, *mu, 0), a, b) for mu, a, b in parts]

    def fn(X, B):
        total = _ZERO
        for mu_ext, a, b in parts:
            av = a(X, B)
            if av == 0:
                continue
            # frames narrowed by sigma only ever drop trailing zero entries of mu_ext
            shifted = tuple(X[t] + mu_ext[t] if t < len(mu_ext) else X[t] for t in range(len(X)))
            total += av * b(shifted, B)
        return total

    reach = max(max(a.reach, b.reach) for _, a, b in parts)
    return Coefficient(fn, reach)


# -- b and B factors ---------------------------------------------------------


def _reflect(X, B, i):
    """I_i: x_i -> -x_i - beta_i."""
    X = list(X)
    X[i] = -X[i] - B[i]
    return X


def _b(i: int, nu: int, X, B) -> Fraction:
    if nu == -1:
        X = _reflect(X, B, i)
        nu = 1
    u = 2 * X[i] + B[i]
    if nu == 0:
        return (u + 1) * (u - 1)
    if nu == 1:
        return (u + 1) * u
    raise ValueError(f"shift component must be -1, 0 or 1, got {nu}")


def _B(i: int, s: int, t: int, X, B) -> Fraction:
    if s not in (-1, 0, 1) or t not in (-1, 0, 1):
        raise ValueError(f"superscripts must be in -1, 0, 1, got ({s}, {t})")
    if s == -1:
        X = _reflect(X, B, i)
        s = 1
    if t == -1:
        X = _reflect(X, B, i + 1)
        t = 1
    xi, xj = X[i], X[i + 1]
    bi, bj = B[i], B[i + 1]
    if (s, t) == (0, 0):
        return xi * (xi + bi) + xj * (xj + bj) + (bi + 1) * (bj - 1) / 2
    if (s, t) == (0, 1):
        return (xj + xi + bj) * (xj - xi + bj - bi)
    if (s, t) == (1, 0):
        return (xj - xi) * (xj + xi + bj)
    return (xj + xi + bj) * (xj + xi + bj + 1)


def _as_extended(x, params: ParameterSet):
    x = tuple(to_exact(v) for v in x)
    if len(x) != params.n - 2:
        raise DimensionError(f"grid point needs {params.n - 2} coordinates, got {len(x)}")
    return extended_point(x, Fraction(params.N))


def b_factor(i: int, nu_i: int, x, params: ParameterSet) -> Fraction:
    """b_i^{nu_i} at the interior point ``x`` (x_0 = 0, x_{n-1} = N)."""
    if not 1 <= i <= params.n - 2:
        raise RangeError(f"b_i needs 1 <= i <= {params.n - 2}, got {i}")
    return _b(i, nu_i, _as_extended(x, params), params.beta)


def B_factor(i: int, s: int, t: int, x, params: ParameterSet) -> Fraction:
    """B_i^{s,t} at the interior point ``x`` (x_0 = 0, x_{n-1} = N)."""
    if not 0 <= i <= params.n - 2:
        raise RangeError(f"B_i needs 0 <= i <= {params.n - 2}, got {i}")
    return _B(i, s, t, _as_extended(x, params), params.beta)


def racah_coefficient(nu: Sequence[int], X: Sequence, B: Sequence) -> Fraction:
    """G_nu for L_j in local coordinates X = (x_0..x_{j+1}), B = (beta_0..beta_{j+1})."""
    j = len(nu)
    full = (0, *nu, 0)
    num = Fraction(2 ** sum(1 for v in nu if v == 0))
    for i in range(j + 1):
        num *= _B(i, full[i], full[i + 1], X, B)
        if num == 0:
            return _ZERO
    den = Fraction(1)
    for i in range(1, j + 1):
        den *= _b(i, nu[i - 1], X, B)
    if den == 0:
        raise PoleError(f"b-factor denominator vanishes for shift {tuple(nu)} at {tuple(X)}")
    return num / den


def _check_window(j: int, offset: int, params: ParameterSet):
    if j < 0 or offset < 0:
        raise RangeError("j and offset must be nonnegative")
    if offset + j + 1 > params.n - 1:
        raise RangeError(
            f"L_{j} with offset {offset} reads x_{offset + j + 1}, beyond x_{params.n - 1}"
        )


def _check_poles(j: int, offset: int, params: ParameterSet):
    for i in range(offset + 1, offset + j + 1):
        b = params.beta[i]
        for x in range(params.N + 1):
            for shift in (-1, 0, 1):
                if 2 * x + b + shift == 0:
                    raise PoleError(f"b_{i} vanishes at x_{i} = {x}")


def _shift_vector(n: int, offset: int, nu_local) -> tuple:
    nu = [0] * (n - 2)
    for t, v in enumerate(nu_local):
        nu[offset + t] = v
    return tuple(nu)


def build_racah_operator(j: int, offset: int, params: ParameterSet) -> DifferenceOperator:
    """L_j(x_offset, ..., x_{offset+j+1}, beta_offset, ..., E_{x_{offset+1}}, ..., E_{x_{offset+j}})."""
    _check_window(j, offset, params)
    _check_poles(j, offset, params)
    lo, hi = offset, offset + j + 2
    terms = []
    for nu_local in itertools.product((-1, 0, 1), repeat=j):
        if not any(nu_local):
            continue

        def fn(X, B, nu_local=nu_local):
            return racah_coefficient(nu_local, X[lo:hi], B[lo:hi])

        terms.append(ShiftTerm(_shift_vector(params.n, offset, nu_local), Coefficient(fn, hi - 1)))
    return DifferenceOperator(params.n, terms)


def substituted_racah_operator(j: int, offset: int, params: ParameterSet) -> DifferenceOperator:
    """The offset-0 operator L_j evaluated at x'_t = x_{t+i} - x_i, beta'_t = beta_{t+i} + 2 x_i."""
    _check_window(j, offset, params)
    _check_poles(j, offset, params)
    i = offset
    terms = []
    for nu_local in itertools.product((-1, 0, 1), repeat=j):
        if not any(nu_local):
            continue

        def fn(X, B, nu_local=nu_local):
            xi = X[i]
            Xp = [X[t + i] - xi for t in range(j + 2)]
            Bp = [B[t + i] + 2 * xi for t in range(j + 2)]
            return racah_coefficient(nu_local, Xp, Bp)

        terms.append(ShiftTerm(_shift_vector(params.n, offset, nu_local), Coefficient(fn, i + j + 1)))
    return DifferenceOperator(params.n, terms)


def zero_operator(n: int) -> DifferenceOperator:
    return DifferenceOperator(n)


def multiplication_operator(n: int, coefficient: Coefficient) -> DifferenceOperator:
    return DifferenceOperator(n, (), coefficient)


def kappa_coordinate(m: int) -> Coefficient:
    """kappa(x_m, beta_m) as a coefficient."""
    return Coefficient(lambda X, B: kappa(X[m], B[m]), m)


def kappa_beta_difference(upper: int, lower: int) -> Coefficient:
    """The constant kappa(0, beta_upper - beta_lower - 1); lower = -1 means beta_{-1} = -1."""
    if lower == -1:
        return Coefficient(lambda X, B: kappa(0, B[upper]), upper)
    return Coefficient(lambda X, B: kappa(0, B[upper] - B[lower] - 1), upper)


def sigma_shift(op: DifferenceOperator, times: int = 1) -> DifferenceOperator:
    """Relabel x_i -> x_{i+1}, beta_i -> beta_{i+1}, E_{x_i} -> E_{x_{i+1}}."""
    for _ in range(times):
        if op.reach + 1 > op.n - 1:
            raise RangeError(f"sigma would read index {op.reach + 1} > {op.n - 1}")
        terms = []
        for t in op.terms:
            if t.nu[-1] != 0:
                raise RangeError(f"sigma moves shift {t.nu} onto the fixed coordinate x_{op.n - 1}")
            terms.append(ShiftTerm((0, *t.nu[:-1]), t.coefficient.shifted()))
        op = DifferenceOperator(op.n, terms, op.identity_part.shifted())
    return op


# -- evaluation on a grid ----------------------------------------------------


def _shifted_point(point, nu):
    return tuple(p + v for p, v in zip(point, nu))


def _check_grid(op: DifferenceOperator, grid: SimplexGrid):
    if op.n != grid.n:
        raise DimensionError(f"operator for n={op.n} applied on grid with n={grid.n}")


def apply(op: DifferenceOperator, f, grid: SimplexGrid) -> np.ndarray:
    """(op f) as a GridFunction; ``f`` is indexed like ``grid.points``."""
    _check_grid(op, grid)
    if len(f) != len(grid):
        raise DimensionError("grid function has wrong length")
    B = grid.params.beta
    out = np.empty(len(grid), dtype=object)
    for r, point in enumerate(grid.points):
        X = grid.extended(point)
        fx = f[r]
        value = op.identity_part(X, B) * fx
        for term in op.terms:
            g = term.coefficient(X, B)
            if g == 0:
                continue
            target = _shifted_point(point, term.nu)
            s = grid.index.get(target)
            if s is None:
                raise BoundaryError(f"shift {term.nu} leaves the simplex at {point} with coefficient {g}")
            value += g * (f[s] - fx)
        out[r] = Fraction(value)
    return out


def realize(op: DifferenceOperator, grid: SimplexGrid) -> OperatorMatrix:
    """Exact matrix M with (op f)(x_r) = sum_c M[r, c] f(x_c)."""
    _check_grid(op, grid)
    B = grid.params.beta
    size = len(grid)
    M = np.full((size, size), _ZERO, dtype=object)
    for r, point in enumerate(grid.points):
        X = grid.extended(point)
        diag = op.identity_part(X, B)
        for term in op.terms:
            g = term.coefficient(X, B)
            if g == 0:
                continue
            target = _shifted_point(point, term.nu)
            s = grid.index.get(target)
            if s is None:
                raise BoundaryError(f"shift {term.nu} leaves the simplex at {point} with coefficient {g}")
            M[r, s] += g
            diag -= g
        M[r, r] += diag
    return OperatorMatrix(grid, M)
