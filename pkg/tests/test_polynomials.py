from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from discrete_racah import ParameterSet, hyp4f3_terminating, kappa, racah_multivariate, racah_univariate
from discrete_racah.errors import DimensionError, GenericityError, PoleError, RangeError
from discrete_racah.polynomials import racah_factor
from discrete_racah.scalar import pochhammer

from conftest import params

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=7)


def _mp(q):
    mpmath.mp.prec = 200
    return mpmath.mpf(q.numerator) / q.denominator


def hyp_oracle(top, bottom, depth):
    """Term-by-term sum with every term rebuilt from Pochhammer products at 200 bits."""
    mpmath.mp.prec = 200
    total = mpmath.mpf(0)
    for s in range(depth + 1):
        num = mpmath.fprod(mpmath.rf(_mp(Fraction(a)), s) for a in top)
        den = mpmath.fprod(mpmath.rf(_mp(Fraction(b)), s) for b in bottom) * mpmath.factorial(s)
        total += num / den
    return total


def test_kappa_values():
    assert kappa(0, 1) == 0
    assert kappa(2, Fraction(3, 2)) == Fraction(117, 16)


@given(rationals)
def test_kappa_at_zero(beta):
    assert kappa(0, beta) == (beta * beta - 1) / 4


def test_hyp_depth_zero_and_two_terms():
    assert hyp4f3_terminating((0, 2, 3, 4), (5, 6, 7), 0) == 1
    a, b, c, d, e, f = (Fraction(v) for v in ("2/3", "5", "-1/2", "3", "7/4", "1/5"))
    assert hyp4f3_terminating((-1, a, b, c), (d, e, f), 1) == 1 - a * b * c / (d * e * f)


def test_hyp_sample_against_oracle():
    value = hyp4f3_terminating((-2, 4, -3, 7), (2, -5, 3), 2)
    assert value == Fraction(1, 15)
    assert abs(_mp(value) - hyp_oracle((-2, 4, -3, 7), (2, -5, 3), 2)) < mpmath.mpf(10) ** -50


def test_hyp_errors():
    with pytest.raises(ValueError):
        hyp4f3_terminating((1, 2, 3, 4), (5, 6, 7), 2)
    with pytest.raises(PoleError):
        hyp4f3_terminating((-3, 1, 1, 1), (-1, 2, 2), 3)
    with pytest.raises(DimensionError):
        hyp4f3_terminating((-1, 1, 1), (2, 2, 2), 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5), rationals, rationals, rationals, rationals, rationals)
def test_univariate_matches_prefactor_times_series(m, alpha, beta, gamma, delta, x):
    bottoms = (alpha + 1, beta + delta + 1, gamma + 1)
    assume(all(b + s != 0 for b in bottoms for s in range(m)))
    pre = pochhammer(bottoms[0], m) * pochhammer(bottoms[1], m) * pochhammer(bottoms[2], m)
    top = (-m, m + alpha + beta + 1, -x, x + gamma + delta + 1)
    assert racah_univariate(m, alpha, beta, gamma, delta, x) == pre * hyp4f3_terminating(top, bottoms, m)


@given(st.integers(0, 5), rationals, rationals, rationals, rationals)
def test_univariate_small_cases(m, alpha, beta, gamma, delta):
    assert racah_univariate(0, alpha, beta, gamma, delta, 3) == 1
    expected = pochhammer(alpha + 1, m) * pochhammer(beta + delta + 1, m) * pochhammer(gamma + 1, m)
    assert racah_univariate(m, alpha, beta, gamma, delta, 0) == expected


@pytest.mark.parametrize("seed", [("1/2", "1/3", "-4", "5/2", "2"), ("-7/3", "2", "1/5", "3/4", "-1/2"), ("3", "-5/6", "2/7", "1", "4/3")])
def test_univariate_degree_one(seed):
    a, b, g, d, x = (Fraction(v) for v in seed)
    expected = (a + 1) * (b + d + 1) * (g + 1) + (a + b + 2) * x * (x + g + d + 1)
    assert racah_univariate(1, a, b, g, d, x) == expected


def test_univariate_finite_at_bottom_pole():
    # gamma + 1 = -1 makes the 4F3 undefined, the polynomial is still finite
    value = racah_univariate(3, Fraction(1, 2), Fraction(1, 3), -2, Fraction(5, 2), 1)
    assert isinstance(value, Fraction)


def test_multivariate_zero_index_is_one():
    P = params(4, 4)
    assert racah_multivariate(2, (0, 0), (1, 3), P) == 1


def test_multivariate_first_factor_is_univariate():
    P = params(4, 4)
    b = P.beta
    for k1 in range(3):
        for x in ((0, 2), (1, 3), (4, 4)):
            expected = racah_univariate(k1, b[1] - b[0] - 1, b[2] - b[1] - 1, -x[1] - 1, b[1] + x[1], x[0])
            assert racah_multivariate(1, (k1, 0), x, P) == expected


def test_multivariate_sample_is_product_of_oracle_factors():
    P = params(4, 4)
    b = P.beta
    value = racah_multivariate(2, (1, 1), (2, 3), P)
    assert value == Fraction(4690, 27)
    X, k = (0, 2, 3, 4), (1, 1)
    product = mpmath.mpf(1)
    for j in (1, 2):
        K = sum(k[: j - 1])
        al, be = 2 * K + b[j] - b[0] - 1, b[j + 1] - b[j] - 1
        ga, de, xx = K - X[j + 1] - 1, K + b[j] + X[j + 1], X[j] - K
        bottoms = (al + 1, be + de + 1, ga + 1)
        pre = mpmath.fprod(mpmath.rf(_mp(Fraction(bb)), k[j - 1]) for bb in bottoms)
        top = (-k[j - 1], k[j - 1] + al + be + 1, -xx, xx + ga + de + 1)
        product *= pre * hyp_oracle(top, bottoms, k[j - 1])
        assert racah_factor(j, k, X, b) != 0
    assert abs(_mp(value) - product) < mpmath.mpf(10) ** -40


def test_multivariate_argument_checks():
    P = params(4, 4)
    with pytest.raises(DimensionError):
        racah_multivariate(2, (1,), (1, 2), P)
    with pytest.raises(RangeError):
        racah_multivariate(3, (1, 1), (1, 2), P)
    with pytest.raises(ValueError):
        racah_multivariate(2, (3, 2), (1, 2), P)


def test_parameter_set_validation():
    with pytest.raises(ValueError):
        ParameterSet.from_literals(2, 3, ["1/3", "5/3"])
    with pytest.raises(DimensionError):
        ParameterSet.from_literals(3, 3, ["1/3", "5/3"])
    P = ParameterSet.from_literals(3, 3, ["1/3", "4/3", "10/3"])
    assert not P.is_generic()
    with pytest.raises(GenericityError, match="beta_1-beta_0 = 1"):
        P.require_generic()
    assert params(3, 3).beta_at(-1) == -1
    assert params(3, 3).to_dict() == {"n": 3, "N": 3, "beta": ["1/3", "5/3", "10/3"]}


def test_genericity_flags_b_factor_poles():
    P = ParameterSet.from_literals(3, 3, ["1/3", "-3", "10/3"])
    assert any("b-factor pole" in v for v in P.genericity_violations())
