"""Univariate and multivariate Racah polynomials in exact arithmetic."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, GenericityError, PoleError, RangeError
from .scalar import format_rational, to_exact


@dataclass(frozen=True)
class ParameterSet:
    """Number of tensor factors ``n``, grid size ``N`` and ``beta = (beta_0, ..., beta_{n-1})``."""

    n: int
    N: int
    beta: tuple

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"n must be at least 3, got {self.n}")
        if self.N < 0:
            raise ValueError(f"N must be nonnegative, got {self.N}")
        beta = tuple(to_exact(b) for b in self.beta)
        if len(beta) != self.n:
            raise DimensionError(f"expected {self.n} beta values, got {len(beta)}")
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_literals(cls, n: int, N: int, beta: Sequence) -> "ParameterSet":
        return cls(int(n), int(N), tuple(to_exact(b) for b in beta))

    @property
    def rank(self) -> int:
        return self.n - 2

    def beta_at(self, i: int) -> Fraction:
        """beta_i, with the convention beta_{-1} = -1."""
        if i == -1:
            return Fraction(-1)
        if not 0 <= i < self.n:
            raise RangeError(f"beta index {i} outside -1..{self.n - 1}")
        return self.beta[i]

    def genericity_violations(self) -> list[str]:
        """Reasons the parameters are not generic; empty when they are.

        Two conditions: no b-factor denominator (2x_i+beta_i)(2x_i+beta_i +- 1)
        vanishes for 0 <= x_i <= N, and no consecutive difference
        beta_{j+1} - beta_j is an integer.
        """
        problems = []
        for i in range(1, self.n - 1):
            b = self.beta[i]
            for x in range(self.N + 1):
                for shift in (-1, 0, 1):
                    if 2 * x + b + shift == 0:
                        problems.append(
                            f"b-factor pole: 2*x_{i}+beta_{i}{shift:+d} = 0 at x_{i}={x}"
                        )
        for j in range(self.n - 1):
            d = self.beta[j + 1] - self.beta[j]
            if d.denominator == 1:
                problems.append(
                    f"beta_{j + 1}-beta_{j} = {format_rational(d)} is an integer"
                )
        return problems

    def is_generic(self) -> bool:
        return not self.genericity_violations()

    def require_generic(self) -> "ParameterSet":
        problems = self.genericity_violations()
        if problems:
            raise GenericityError("non-generic parameters: " + "; ".join(problems))
        return self

    def to_dict(self) -> dict:
        return {"n": self.n, "N": self.N, "beta": [format_rational(b) for b in self.beta]}


def partial_sums(k: Sequence[int]) -> list[int]:
    """[|k|_0, |k|_1, ..., |k|_len] with |k|_0 = 0."""
    out = [0]
    for v in k:
        out.append(out[-1] + v)
    return out


def extended_point(x: Sequence[int], N: int) -> tuple:
    """(x_0=0, x_1, ..., x_{n-2}, x_{n-1}=N)."""
    return (0, *x, N)


def kappa(x, beta) -> Fraction:
    x, beta = to_exact(x), to_exact(beta)
    return (x + (beta + 1) / 2) * (x + (beta - 1) / 2)


def hyp4f3_terminating(top: Sequence, bottom: Sequence, depth: int) -> Fraction:
    """Terminating 4F3 at unit argument, summed exactly up to ``depth``."""
    top = [to_exact(a) for a in top]
    bottom = [to_exact(b) for b in bottom]
    if len(top) != 4 or len(bottom) != 3:
        raise DimensionError("4F3 needs four top and three bottom parameters")
    if depth < 0 or -depth not in top:
        raise ValueError(f"no top parameter equals -{depth}; series does not terminate there")
    total = term = Fraction(1)
    for s in range(depth):
        den = Fraction(s + 1)
        for b in bottom:
            if b + s == 0:
                raise PoleError(f"bottom Pochhammer ({format_rational(b)})_{s + 1} vanishes")
            den *= b + s
        num = Fraction(1)
        for a in top:
            num *= a + s
        term = term * num / den
        total += term
    return total


def racah_univariate(m: int, alpha, beta, gamma, delta, x) -> Fraction:
    """r_m(alpha, beta, gamma, delta; x).

    The normalising product (alpha+1)_m (beta+delta+1)_m (gamma+1)_m is
    distributed into the series as (b+s)_{m-s}, so the value is the
    polynomial itself and stays finite when a bottom parameter is a
    nonpositive integer (which happens off the support of the weight).
    """
    if m < 0:
        raise ValueError("degree must be nonnegative")
    alpha, beta, gamma, delta, x = (to_exact(v) for v in (alpha, beta, gamma, delta, x))
    bottoms = (alpha + 1, beta + delta + 1, gamma + 1)
    # tails[s] = prod over bottoms of (b+s)_{m-s}
    tails = [Fraction(1)] * (m + 1)
    acc = Fraction(1)
    for s in range(m - 1, -1, -1):
        for b in bottoms:
            acc *= b + s
        tails[s] = acc
    tops = (Fraction(-m), m + alpha + beta + 1, -x, x + gamma + delta + 1)
    total = Fraction(0)
    head = Fraction(1)
    for s in range(m + 1):
        if head == 0:
            break
        total += head * tails[s]
        for a in tops:
            head *= a + s
        head /= s + 1
    return total


def _check_multi(p: int, k: Sequence[int], x: Sequence[int], params: ParameterSet):
    if len(k) != params.n - 2 or len(x) != params.n - 2:
        raise DimensionError(
            f"k and x must have {params.n - 2} entries, got {len(k)} and {len(x)}"
        )
    if not 0 <= p <= params.n - 2:
        raise RangeError(f"p={p} outside 0..{params.n - 2}")
    if any(v < 0 for v in k):
        raise ValueError("multi-index entries must be nonnegative")
    if sum(k[:p]) > params.N:
        raise ValueError(f"|k|_{p} = {sum(k[:p])} exceeds N = {params.N}")


def racah_factor(j: int, k: Sequence[int], X: Sequence[int], beta: Sequence) -> Fraction:
    """The j-th univariate factor of the multivariate polynomial (X extended)."""
    K = sum(k[: j - 1])
    return racah_univariate(
        k[j - 1],
        2 * K + beta[j] - beta[0] - 1,
        beta[j + 1] - beta[j] - 1,
        K - X[j + 1] - 1,
        K + beta[j] + X[j + 1],
        X[j] - K,
    )


def racah_multivariate(p: int, k: Sequence[int], x: Sequence[int], params: ParameterSet) -> Fraction:
    """R_p(k; x; beta; N), product of p chained univariate factors."""
    _check_multi(p, k, x, params)
    X = extended_point(x, params.N)
    value = Fraction(1)
    for j in range(1, p + 1):
        value *= racah_factor(j, k, X, params.beta)
        if value == 0:
            break
    return value
