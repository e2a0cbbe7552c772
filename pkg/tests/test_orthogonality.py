import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from discrete_racah import GeneratorTable, ParameterSet, SimplexGrid, racah_table
from discrete_racah.errors import PoleError, SignError
from discrete_racah.orthogonality import (
    WeightValue,
    connection_matrix,
    in_positivity_regime,
    inverse_lambda_univariate,
    rho_univariate,
    verify_diagonalization,
    verify_orthogonality_exact,
    verify_specialization,
    weight_mu,
    weight_omega,
)

from conftest import params


def _mp(q):
    mpmath.mp.prec = 200
    return mpmath.mpf(q.numerator) / q.denominator


def _weight_mp(w: WeightValue):
    mpmath.mp.prec = 200
    value = _mp(w.rational_part)
    for base, e in w.gamma_exponents.items():
        value *= mpmath.gamma(_mp(base.value)) ** e
    return value


def test_weight_value_arithmetic():
    a = WeightValue.gamma(Fraction(7, 3))
    b = WeightValue.gamma(Fraction(-2, 3))
    assert a.rational_part == Fraction(4, 9)
    assert (a / a).rational_part == 1 and (a / a).gamma_exponents == {}
    assert b.rational_part == Fraction(-3, 2)
    with pytest.raises(PoleError):
        WeightValue.gamma(-2)
    assert a.to_float() == pytest.approx(math.gamma(7 / 3), rel=1e-14)


def test_omega_rank_two_against_direct_gamma_product():
    P = params(4, 3)
    w = weight_omega(2, (1, 2), P)
    assert w.rational_part == Fraction(35784320, 373977)
    b = [_mp(v) for v in P.beta]
    X = [0, 1, 2, 3]
    G, fac = mpmath.gamma, mpmath.factorial
    mpmath.mp.prec = 200
    direct = mpmath.mpf(1)
    for j in range(3):
        lo, hi = X[j], X[j + 1]
        direct *= G(b[j + 1] + hi + lo) * G(b[j + 1] - b[j] + hi - lo) / (G(b[j] + hi + 1 + lo) * fac(hi - lo))
    direct *= (b[1] + 2 * X[1]) * (b[2] + 2 * X[2])
    assert abs(_weight_mp(w) / direct - 1) < mpmath.mpf(10) ** -40


def test_mu_rank_two_against_direct_gamma_product():
    P = params(4, 3)
    k = (1, 1)
    w = weight_mu(2, k, P)
    b = [_mp(v) for v in P.beta]
    G, fac = mpmath.gamma, mpmath.factorial
    mpmath.mp.prec = 200
    S = [0, 1, 2]
    direct = mpmath.mpf(1)
    for j in (1, 2):
        kj = k[j - 1]
        direct *= G(2 * S[j - 1] + kj + b[j + 1] - b[0] - 1) * (2 * S[j] + b[j + 1] - b[0] - 1)
        direct /= G(kj + b[j + 1] - b[j]) * G(2 * S[j - 1] + kj + b[j] - b[0]) * fac(kj)
    direct *= G(b[0] + 3 + 1 - 2) * fac(3 - 2) / (G(b[3] - b[0] + 3 + 2) * G(b[3] + 3 + 2))
    assert abs(_weight_mp(w) / direct - 1) < mpmath.mpf(10) ** -40


def test_rank_one_weights_match_closed_forms():
    P = params(3, 6)
    for ell in range(7):
        assert weight_omega(1, (ell,), P) == rho_univariate(ell, P)
        assert weight_mu(1, (ell,), P) == inverse_lambda_univariate(ell, P)


def test_collapsed_interval_contributes_plain_gamma():
    P = params(4, 3)
    w_equal = weight_omega(2, (2, 2), P)
    assert all(0 < base.value <= 1 for base in w_equal.gamma_exponents)


def test_mu_at_zero_is_boundary_product():
    P = params(3, 4)
    w = weight_mu(1, (0,), P)
    b0, b1, b2 = P.beta
    lead = WeightValue.gamma(b2 - b0 - 1) * (b2 - b0 - 1) / (WeightValue.gamma(b2 - b1) * WeightValue.gamma(b1 - b0))
    tail = WeightValue.gamma(b0 + 5) * math.factorial(4) / (WeightValue.gamma(b2 - b0 + 4) * WeightValue.gamma(b2 + 4))
    assert w == lead * tail


@pytest.mark.parametrize("n, N", [(3, 6), (4, 4)])
def test_exact_orthogonality(n, N):
    rep = verify_orthogonality_exact(params(n, N))
    assert rep.passed, rep.to_dict()
    assert abs(rep.data["normalization"] - 1) < 1e-9


def test_connection_matrix_rank_one():
    cm = connection_matrix(params(3, 2))
    assert cm.values.shape == (3, 3)
    assert cm.gram_error() < 1e-9
    # row k = 0 is sqrt(omega * mu(0)) since R = 1
    assert all(v > 0 for v in cm.values[0])
    lines = cm.to_csv().splitlines()
    assert lines[0] == "k\\x,(0),(1),(2)" and len(lines) == 4


def test_connection_matrix_rank_two():
    cm = connection_matrix(params(4, 3))
    assert cm.values.shape == (10, 10)  # C(5, 2) grid points
    assert cm.gram_error() < 1e-9
    assert np.allclose(cm.values.T @ cm.values, np.eye(10), atol=1e-9)


def test_sign_error_outside_positive_regime():
    P = ParameterSet.from_literals(3, 2, ["1/3", "-1/6", "10/3"])
    assert not in_positivity_regime(P)
    with pytest.raises(SignError):
        connection_matrix(P)


def test_diagonalization_rank_two():
    rep = verify_diagonalization(GeneratorTable(params(4, 4)))
    assert rep.passed


def test_zero_index_eigenvalue_is_additive_constant():
    t = GeneratorTable(params(4, 3))
    ks, R = racah_table(t.grid)
    b = t.params.beta
    for m in (2, 3):
        image = t.interval(2, m + 1).dot(R[0])
        assert all(v == (b[m] - b[0] - 1) ** 2 / 4 - Fraction(1, 4) for v in image)


def test_specialization():
    assert verify_specialization(params(3, 5)).passed
