"""Weights, gauge factors, connection matrices and orthogonality checks.

Weights are products of Gamma functions of rationals. They are kept as a
rational part times a symbolic product of Gamma(b)^e with every base b in
(0, 1], so that all x- and k-dependence lands in the rational part and the
transcendental constant is common to the whole grid.
"""
from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import PoleError, SignError
from .grid import SimplexGrid, racah_table
from .matrix import OperatorMatrix
from .operators import build_racah_operator, realize
from .polynomials import ParameterSet, extended_point, kappa, partial_sums
from .report import Report
from .scalar import format_rational, log_abs_exact, split_gamma, to_exact


@dataclass(frozen=True)
class WeightValue:
    """rational_part * prod Gamma(base)^exponent."""

    rational_part: Fraction
    gamma_exponents: dict = field(default_factory=dict)

    @classmethod
    def rational(cls, value) -> "WeightValue":
        return cls(to_exact(value), {})

    @classmethod
    def gamma(cls, a) -> "WeightValue":
        base, factor = split_gamma(a)
        return cls(factor, {base: 1})

    def __mul__(self, other):
        if not isinstance(other, WeightValue):
            other = WeightValue.rational(other)
        exps = Counter(self.gamma_exponents)
        exps.update(other.gamma_exponents)
        return WeightValue(self.rational_part * other.rational_part, {b: e for b, e in exps.items() if e})

    def inverse(self) -> "WeightValue":
        if self.rational_part == 0:
            raise PoleError("inverse of a zero weight")
        return WeightValue(1 / self.rational_part, {b: -e for b, e in self.gamma_exponents.items()})

    def __truediv__(self, other):
        if not isinstance(other, WeightValue):
            other = WeightValue.rational(other)
        return self * other.inverse()

    def same_gamma_part(self, other: "WeightValue") -> bool:
        return self.gamma_exponents == other.gamma_exponents

    def log_gamma_constant(self) -> float:
        return sum(e * b.log_gamma() for b, e in self.gamma_exponents.items())

    def to_float(self) -> float:
        if self.rational_part == 0:
            return 0.0
        sign = 1.0 if self.rational_part > 0 else -1.0
        return sign * math.exp(log_abs_exact(self.rational_part) + self.log_gamma_constant())

    def to_dict(self) -> dict:
        return {
            "rational_part": format_rational(self.rational_part),
            "gamma": {format_rational(b.value): e for b, e in sorted(self.gamma_exponents.items())},
        }


def _factorial(m: int) -> WeightValue:
    if m < 0:
        raise PoleError(f"factorial of negative integer {m}")
    return WeightValue.rational(math.factorial(m))


def _G(a) -> WeightValue:
    return WeightValue.gamma(a)


def weight_omega(p: int, x, params: ParameterSet) -> WeightValue:
    """omega_p(x) with x_0 = 0 and x_{p+1} = N."""
    B = params.beta
    X = extended_point(tuple(x[:p]), params.N)
    w = WeightValue.rational(1)
    for j in range(p + 1):
        lo, hi = X[j], X[j + 1]
        w = w * _G(B[j + 1] + hi + lo) * _G(B[j + 1] - B[j] + hi - lo)
        w = w / (_G(B[j] + hi + 1 + lo) * _factorial(hi - lo))
    for j in range(1, p + 1):
        w = w * (B[j] + 2 * X[j])
    return w


def weight_mu(p: int, k, params: ParameterSet) -> WeightValue:
    """mu_p(k), including the trailing N-dependent factor."""
    B, N = params.beta, params.N
    S = partial_sums(k[:p])
    w = WeightValue.rational(1)
    for j in range(1, p + 1):
        kj, prev, cur = k[j - 1], S[j - 1], S[j]
        w = w * _G(2 * prev + kj + B[j + 1] - B[0] - 1) * (2 * cur + B[j + 1] - B[0] - 1)
        w = w / (_G(kj + B[j + 1] - B[j]) * _G(2 * prev + kj + B[j] - B[0]) * _factorial(kj))
    top = S[p]
    w = w * _G(B[0] + N + 1 - top) * _factorial(N - top)
    w = w / (_G(B[p + 1] - B[0] + N + top) * _G(B[p + 1] + N + top))
    return w


def rho_univariate(ell: int, params: ParameterSet) -> WeightValue:
    """rho(ell) of the rank-one orthogonality, from beta_0, beta_1, beta_2 and N."""
    b0, b1, b2 = params.beta[:3]
    N = params.N
    w = _G(b1 + ell) * _G(b1 - b0 + ell) / (_G(b0 + 1 + ell) * _factorial(ell))
    w = w * (b1 + 2 * ell)
    return w * _G(b2 + N + ell) * _G(b2 - b1 + N - ell) / (_G(b1 + N + 1 + ell) * _factorial(N - ell))


def inverse_lambda_univariate(k: int, params: ParameterSet) -> WeightValue:
    """1/lambda(k) of the rank-one orthogonality."""
    b0, b1, b2 = params.beta[:3]
    N = params.N
    w = _G(k + b2 - b0 - 1) / (_G(k + b2 - b1) * _G(k + b1 - b0) * _factorial(k))
    w = w * (2 * k + b2 - b0 - 1)
    return w * _G(b0 + N + 1 - k) * _factorial(N - k) / (_G(k + b2 - b0 + N) * _G(b2 + N + k))


def in_positivity_regime(params: ParameterSet) -> bool:
    B = params.beta
    return B[0] > -1 and all(B[j + 1] - B[j] > 1 for j in range(params.n - 1))


@dataclass
class ConnectionMatrix:
    """Rows k, columns x: sqrt(omega(x) mu(k)) R(k; x) as floats, plus exact squares."""

    grid: SimplexGrid
    ks: list
    values: np.ndarray
    exact_squares: np.ndarray
    log_gamma_constant: float

    def gram_error(self) -> float:
        gram = self.values @ self.values.T
        return float(np.max(np.abs(gram - np.eye(len(self.ks)))))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k\\x"] + ["(" + ",".join(map(str, x)) + ")" for x in self.grid.points])
        for k, row in zip(self.ks, self.values):
            writer.writerow(["(" + ",".join(map(str, k)) + ")"] + [f"{v:.17g}" for v in row])
        return buf.getvalue()


def _common_gamma(weights, what: str) -> WeightValue:
    first = weights[0]
    for w in weights[1:]:
        if not w.same_gamma_part(first):
            raise ValueError(f"{what} weights do not share one Gamma constant across the grid")
    return WeightValue(Fraction(1), dict(first.gamma_exponents))


def connection_matrix(params: ParameterSet) -> ConnectionMatrix:
    params.require_generic()
    grid = SimplexGrid(params)
    p = params.n - 2
    omegas = [weight_omega(p, x, params) for x in grid.points]
    ks, R = racah_table(grid)
    mus = [weight_mu(p, k, params) for k in ks]
    for label, ws, pts in (("omega", omegas, grid.points), ("mu", mus, ks)):
        for w, pt in zip(ws, pts):
            if w.rational_part <= 0:
                raise SignError(f"{label} weight at {pt} has nonpositive rational part {w.rational_part}")
    gamma = _common_gamma(omegas, "omega") * _common_gamma(mus, "mu")
    log_c = gamma.log_gamma_constant()
    values = np.zeros((len(ks), len(grid)))
    squares = np.empty((len(ks), len(grid)), dtype=object)
    for r, mu in enumerate(mus):
        for c, om in enumerate(omegas):
            rv = R[r, c]
            sq = om.rational_part * mu.rational_part * rv * rv
            squares[r, c] = sq
            if rv != 0:
                # positive square root of the weight product
                values[r, c] = math.copysign(math.exp(0.5 * (log_abs_exact(sq) + log_c)), rv)
    return ConnectionMatrix(grid, ks, values, squares, log_c)


def verify_orthogonality_exact(params: ParameterSet, tolerance: float = 1e-9) -> Report:
    """Exact Gram checks on rational parts, float check of the normalization."""
    params.require_generic()
    grid = SimplexGrid(params)
    p = params.n - 2
    rep = Report("orthogonality")
    omegas = [weight_omega(p, x, params) for x in grid.points]
    ks, R = racah_table(grid)
    mus = [weight_mu(p, k, params) for k in ks]
    try:
        gamma = _common_gamma(omegas, "omega") * _common_gamma(mus, "mu")
    except ValueError as exc:
        rep.add("common-gamma-constant", [], False, str(exc))
        return rep
    rep.add("common-gamma-constant", [], True)

    w = np.array([om.rational_part for om in omegas], dtype=object)
    gram = (R * w).dot(R.T)
    off = [
        [list(ks[a]), list(ks[b])]
        for a in range(len(ks))
        for b in range(len(ks))
        if a != b and gram[a, b] != 0
    ]
    rep.add("off-diagonal-zero", [], not off, {"pairs": off[:10], "count": len(off)} if off else None)

    diag = [gram[a, a] * mus[a].rational_part for a in range(len(ks))]
    constant = diag[0]
    varying = [list(ks[a]) for a in range(len(ks)) if diag[a] != constant]
    rep.add("diagonal-constant", [], not varying, {"k": varying[:10]} if varying else {"constant": constant})
    rep.data["diagonal_constant"] = constant
    rep.data["gamma_constant"] = gamma.to_dict()

    norm = math.exp(log_abs_exact(constant) + gamma.log_gamma_constant()) if constant != 0 else 0.0
    norm = math.copysign(norm, constant)
    rep.data["normalization"] = norm
    rep.add("normalization", [f"tol={tolerance:g}"], abs(norm - 1.0) <= tolerance, {"value": norm})
    return rep


def verify_diagonalization(table) -> Report:
    """C_[2..m+1] acts on x -> R(k; x) by kappa(|k|_{m-1}, beta_m - beta_0 - 1); C_[m] is diagonal."""
    params, grid = table.params, table.grid
    rep = Report("diagonalization")
    ks, R = racah_table(grid)
    for m in range(2, params.n):
        C = table.interval(2, m + 1)
        images = C.dot(R.T)  # column r is C applied to row r of R
        bad = []
        for r, k in enumerate(ks):
            lam = kappa(partial_sums(k)[m - 1], params.beta[m] - params.beta[0] - 1)
            if any(images[c, r] != lam * R[r, c] for c in range(len(grid))):
                bad.append(list(k))
        rep.add("eigen", [f"C_[2..{m + 1}]"], not bad, {"failing_k": bad[:5]} if bad else None)
    for m in range(1, params.n + 1):
        rep.add("diagonal", [f"C_[1..{m}]"], table.interval(1, m).is_diagonal())
    return rep


def explicit_rank_one_operator(params: ParameterSet) -> OperatorMatrix:
    """The closed two-term form of L_1 for n = 3, with the grid point x = x_1 and x_2 = N."""
    if params.n != 3:
        raise ValueError("the explicit rank-one operator needs n = 3")
    grid = SimplexGrid(params)
    b0, b1, b2 = params.beta
    N = params.N
    M = OperatorMatrix.zero(grid).entries
    for i, (x,) in enumerate(grid.points):
        up = Fraction((x + b1 - b0) * (x + b1) * (N + x + b2) * (N - x)) / ((2 * x + b1) * (2 * x + b1 + 1))
        down = Fraction((x + b0) * x * (N - x - b1 + b2) * (N + x + b1)) / ((2 * x + b1) * (2 * x + b1 - 1))
        M[i, i] -= up + down
        if up:
            M[i, grid.index[(x + 1,)]] += up
        if down:
            M[i, grid.index[(x - 1,)]] += down
    return OperatorMatrix(grid, M)


def verify_specialization(params: ParameterSet) -> Report:
    """At n = 3 the general constructions collapse to the rank-one formulas."""
    params.require_generic()
    rep = Report("specialization")
    grid = SimplexGrid(params)
    L1 = realize(build_racah_operator(1, 0, params), grid)
    explicit = explicit_rank_one_operator(params)
    rep.add("L1-explicit", ["L_1"], L1 == explicit)

    bad_rho = [x for (x,) in grid.points if weight_omega(1, (x,), params).to_dict() != rho_univariate(x, params).to_dict()]
    rep.add("omega-rho", ["omega_1"], not bad_rho, {"x": bad_rho} if bad_rho else None)
    bad_lam = [
        k for k in range(params.N + 1)
        if weight_mu(1, (k,), params).to_dict() != inverse_lambda_univariate(k, params).to_dict()
    ]
    rep.add("mu-lambda", ["mu_1"], not bad_lam, {"k": bad_lam} if bad_lam else None)
    return rep
