from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from mzv_forge.exact_algebra import MultiPoly, RatFunc, bernoulli
from mzv_forge.mzf_continuation import (Hyperplane, ZetaFunctionSymbol, beta, directional_discrepancy_check,
                                        expansion_terms, limit_last_to_zero, multiple_residue_at_ones,
                                        multiple_residue_via_last_poles, multiple_residue_via_top_hyperplane, residue,
                                        value_at_nonpositive)

# Independent oracle for depth two, from Euler-Maclaurin on the inner sum:
#   zeta(s1, s2) = zeta(s1) zeta(s2) + sum_k c_k(s1) zeta(s1 + s2 + k - 1),
#   c_0 = 1/(1-s1), c_1 = -1/2, c_k = -B_k/k! (s1)_{k-1}  (rising factorial).
# The remainder carries the factor (s1)_{2J} and vanishes at s1 in {0, -1, ...}.


def c_k(k: int, s1):
    if k == 0:
        return mpmath.mpf(1) / (1 - s1)
    if k == 1:
        return mpmath.mpf(-1) / 2
    return -mpmath.mpf(bernoulli(k).numerator) / bernoulli(k).denominator / mpmath.factorial(k) * mpmath.rf(s1, k - 1)


def depth2_oracle(s1, s2, K: int = 16):
    out = mpmath.zeta(s1) * mpmath.zeta(s2)
    for k in range(K + 1):
        out += c_k(k, s1) * mpmath.zeta(s1 + s2 + k - 1)
    return out


def c_k_exact(k: int, s1: Fraction) -> Fraction:
    if k == 0:
        return 1 / (1 - s1)
    if k == 1:
        return Fraction(-1, 2)
    rf = Fraction(1)
    for i in range(k - 1):
        rf *= s1 + i
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return -bernoulli(k) / fact * rf


POINTS = [(0, 0), (-1, 0), (0, -1), (-1, -1), (-2, 0), (0, -2), (-1, -2)]


@pytest.mark.parametrize("a,b", POINTS)
def test_value_at_nonpositive_depth2_matches_oracle(a, b):
    # s2 = b first, then s1 -> a
    with mpmath.workdps(60):
        eps = mpmath.mpf(10) ** -30
        approx = depth2_oracle(a + eps, b)
        exact = value_at_nonpositive(1, [a, b])
        assert abs(approx - mpmath.mpf(exact.numerator) / exact.denominator) < 1e-20


@pytest.mark.parametrize("a", [0, -1, -2, -3])
def test_limit_last_to_zero_matches_oracle(a):
    # s1 = a first, then s2 -> 0
    with mpmath.workdps(60):
        eps = mpmath.mpf(10) ** -30
        approx = depth2_oracle(a, eps)
        exact = limit_last_to_zero(a)
        assert abs(approx - mpmath.mpf(exact.numerator) / exact.denominator) < 1e-20


@pytest.mark.parametrize("k", range(0, 7))
def test_depth2_residue_matches_oracle(k):
    # pole at s1 + s2 = 2 - k has residue c_k(s1) with s1 = 2 - k - s2
    f = residue(2, Hyperplane(1, k)).function
    for s2 in (Fraction(3), Fraction(-5, 2), Fraction(7, 3)):
        s1 = 2 - k - s2
        assert f.evaluate({"s2": s2}) == c_k_exact(k, s1)


def test_depth2_residues_printed_form():
    s2 = MultiPoly.var("s2")
    expected = [RatFunc(1, s2 - 1), RatFunc(Fraction(-1, 2)), RatFunc(s2 * Fraction(1, 12)), RatFunc(0),
                RatFunc(s2 * (s2 + 1) * (s2 + 2) * Fraction(-1, 720))]
    for k, e in enumerate(expected):
        assert residue(2, Hyperplane(1, k)).function == e


@pytest.mark.parametrize("k", range(0, 5))
def test_depth3_partial_residue(k):
    r = residue(3, Hyperplane(2, k))
    assert str(r.prefactor) == str(ZetaFunctionSymbol(1, 0))
    s3 = MultiPoly.var("s3")
    if k == 0:
        expected = RatFunc(1, s3 - 1)
    else:
        top = s3 + (k - 2)
        c = RatFunc(1)
        for i in range(k - 1):
            c = c * RatFunc(top - i)
        for i in range(2, k):
            c = c * RatFunc(Fraction(1, i))
        expected = c * RatFunc(beta(k))
    assert r.function == expected


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_multiple_residue_two_routes(m):
    a = multiple_residue_via_last_poles(m)
    b = multiple_residue_via_top_hyperplane(m)
    assert a == b == multiple_residue_at_ones(m) == 1


def test_beta():
    assert beta(0) == 1
    assert beta(1) == Fraction(-1, 2)
    assert beta(2) == Fraction(1, 12)
    assert beta(3) == 0


def test_negative_k_rejected():
    with pytest.raises(ValueError):
        residue(2, Hyperplane(1, -1))


def test_discrepancy_report():
    d = directional_discrepancy_check()
    assert d["route_a"] == Fraction(5, 12)
    assert d["route_b"] == Fraction(3, 8)
    assert d["difference"] == Fraction(1, 24)
    assert d["zeta_s1_0_as_s1_to_0"] == Fraction(1, 3)
    assert d["zeta_0_s2_as_s2_to_0"] == Fraction(5, 12)
    assert d["stuffle_with_directional_limits"] == Fraction(1, 3)


def test_depth3_origin():
    assert value_at_nonpositive(1, [0, 0, 0]) == Fraction(-1, 4)


@given(st.lists(st.integers(-3, 0), min_size=1, max_size=3))
def test_expansion_terms_stable_under_slack(trailing):
    assert expansion_terms(trailing) == expansion_terms(trailing, slack=3)
