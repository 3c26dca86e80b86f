from fractions import Fraction
from itertools import combinations
from math import comb

from hypothesis import given, settings, strategies as st

from mzv_forge.exact_algebra import LinComb
from mzv_forge.words_and_products import (a3_identity_check, composition, first_shuffle_generating_check, is_convergent,
                                          mzv_word, partial_fraction_check, second_shuffle_check, shuffle, shuffle_lin,
                                          stuffle, stuffle_lin, word, zeta_composition)

letters = st.sampled_from(["0", "1", "x", "y"])
words = st.lists(letters, max_size=4).map(lambda ls: word(*ls))


def total(lc: LinComb) -> Fraction:
    return sum(lc.raw().values(), Fraction(0))


@given(words, words)
def test_shuffle_term_count(u, v):
    assert total(shuffle(u, v)) == comb(len(u) + len(v), len(u))


@given(words, words)
def test_shuffle_commutative(u, v):
    assert shuffle(u, v) == shuffle(v, u)


@settings(max_examples=40, deadline=None)
@given(words, words, words)
def test_shuffle_associative(u, v, w):
    left = shuffle_lin(shuffle(u, v), LinComb.term(w))
    right = shuffle_lin(LinComb.term(u), shuffle(v, w))
    assert left == right


RATS = ["1", "1/2", "-1/3", "2/3"]
comps = st.lists(st.tuples(st.integers(1, 3), st.sampled_from(RATS)), max_size=3)


def exact_value(a) -> Fraction:
    # rational arguments are stored as |q| with rotation 0 or 1/2
    assert not a.mono and a.rot in (0, Fraction(1, 2))
    return a.coeff if a.rot == 0 else -a.coeff


def truncated(comp, N: int) -> Fraction:
    """sum over n1 < ... < nm <= N of prod x_i^{n_i} / n_i^{k_i}, exact."""
    out = Fraction(0)
    for ns in combinations(range(1, N + 1), len(comp)):
        term = Fraction(1)
        for n, (k, a) in zip(ns, comp):
            term *= exact_value(a) ** n / Fraction(n) ** k
        out += term
    return out


def build(p):
    return composition([k for k, _ in p], [x for _, x in p])


@settings(max_examples=30, deadline=None)
@given(comps, comps)
def test_stuffle_matches_truncated_sums(p, q):
    # quasi-shuffle holds exactly for sums truncated at N
    cp, cq = build(p), build(q)
    N = 6
    rhs = sum((c * truncated(comp, N) for comp, c in stuffle(cp, cq).raw().items()), Fraction(0))
    assert rhs == truncated(cp, N) * truncated(cq, N)


@given(comps, comps)
def test_stuffle_commutative(p, q):
    cp, cq = build(p), build(q)
    assert stuffle(cp, cq) == stuffle(cq, cp)


def test_stuffle_zeta2_squared():
    assert stuffle(zeta_composition(2), zeta_composition(2)) == LinComb(
        {zeta_composition(2, 2): 2, zeta_composition(4): 1})


def test_convergence_and_word():
    assert is_convergent(zeta_composition(1, 2))
    assert not is_convergent(zeta_composition(2, 1))
    assert not is_convergent(zeta_composition(1))
    assert str(mzv_word(zeta_composition(1, 2))) == "(1)(1)0"


def test_generating_series_identities():
    assert second_shuffle_check(1, 2, 3)["ok"]
    assert first_shuffle_generating_check(3)["ok"]
    assert partial_fraction_check(2)["ok"]
    assert partial_fraction_check(3)["ok"]
    assert a3_identity_check(2, 2)
