from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from mzv_forge.exact_algebra import (LinComb, MultiPoly, RatFunc, bernoulli, binom_poly, format_rational,
                                     parse_rational, zeta_nonpositive)

KNOWN_B = {0: 1, 1: Fraction(-1, 2), 2: Fraction(1, 6), 4: Fraction(-1, 30), 6: Fraction(1, 42),
           8: Fraction(-1, 30), 10: Fraction(5, 66), 12: Fraction(-691, 2730), 3: 0, 5: 0}


@pytest.mark.parametrize("n,val", sorted(KNOWN_B.items()))
def test_bernoulli_table(n, val):
    assert bernoulli(n) == val


@pytest.mark.parametrize("n", range(1, 30))
def test_bernoulli_recurrence(n):
    # sum_{k<=n} C(n+1, k) B_k = 0 with B_1 = -1/2
    assert sum(comb(n + 1, k) * bernoulli(k) for k in range(n + 1)) == 0


@pytest.mark.parametrize("n", range(0, 12))
def test_zeta_nonpositive_matches_mpmath(n):
    assert abs(float(zeta_nonpositive(-n)) - float(mpmath.zeta(-n))) < 1e-12


def test_zeta_nonpositive_values():
    assert zeta_nonpositive(0) == Fraction(-1, 2)
    assert zeta_nonpositive(-1) == Fraction(-1, 12)
    assert zeta_nonpositive(-2) == 0
    assert zeta_nonpositive(-3) == Fraction(1, 120)
    with pytest.raises(ValueError):
        zeta_nonpositive(1)


fracs = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)


@given(fracs)
def test_rational_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


s, t = MultiPoly.var("s"), MultiPoly.var("t")
small = st.integers(-5, 5)


@given(small, small, small, small)
def test_multipoly_ring_axioms(a, b, c, d):
    p = s * a + t * b + c
    q = s * t * d + 1
    assert p * q == q * p
    assert (p + q) * p == p * p + q * p
    assert (p - p).is_zero()
    assert (p * q).evaluate({"s": 2, "t": 3}) == p.evaluate({"s": 2, "t": 3}) * q.evaluate({"s": 2, "t": 3})


def test_multipoly_substitute_and_divide():
    p = s * s * t + s * 3
    assert p.substitute("s", t) == t * t * t + t * 3
    assert p.divide_by_var("s") == s * t + 3
    assert set(p.variables) == {"s", "t"}


def test_ratfunc_residue():
    # residues at s = 0
    f = RatFunc(s * s + 1, s * (s - 1))
    assert f.residue("s") == RatFunc(-1)
    g = RatFunc(t + 1, s * (t - 2))
    assert g.residue("s") == RatFunc(t + 1, t - 2)
    assert RatFunc(1, s - 1).residue("s") == RatFunc(0)
    with pytest.raises(ValueError):
        RatFunc(1, s * s).residue("s")


def test_ratfunc_arith():
    f = RatFunc(1, s - 1)
    g = RatFunc(1, s + 1)
    assert f + g == RatFunc(s * 2, s * s - 1)
    assert (f * g) / f == g


@pytest.mark.parametrize("k", range(0, 6))
def test_binom_poly_integer_points(k):
    for n in range(0, 9):
        v = binom_poly(MultiPoly.const(n), k)
        v = v.constant_value() if isinstance(v, MultiPoly) else v.evaluate({})
        assert v == comb(n, k)


def test_binom_poly_minus_one():
    # C(top, -1) = 1 / (top + 1)
    assert binom_poly(s, -1) == RatFunc(1, s + 1)


def test_lincomb_cancellation_and_equality():
    a = LinComb({"x": 1, "y": Fraction(1, 2)})
    b = LinComb({"y": Fraction(-1, 2)})
    assert a + b == LinComb.term("x")
    assert not (a - a)
    assert a.scale(2)["y"] == 1
