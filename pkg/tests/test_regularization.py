import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from mzv_forge.arguments import ONE_ARG, ZERO_ARG
from mzv_forge.exact_algebra import LinComb
from mzv_forge.numerics import li_eval
from mzv_forge.regularization import (compare_regularizations, generating_regularization_check, insertion_regularize,
                                      shuffle_asymptotic, shuffle_regularize, stuffle_regularize)
from mzv_forge.words_and_products import Composition, Word, is_convergent, zeta_composition


def numeric(lc: LinComb):
    out = mpmath.mpf(0)
    for comp, c in lc.raw().items():
        if not len(comp):
            out += c
            continue
        out += mpmath.mpf(c.numerator) / c.denominator * li_eval([n for n, _ in comp], prec=64).value.real
    return out


small_comps = st.lists(st.integers(1, 3), min_size=1, max_size=3).filter(lambda ns: sum(ns) <= 5)


def test_low_weight_values():
    assert not shuffle_regularize(zeta_composition(1))
    assert not stuffle_regularize(zeta_composition(1))
    assert not shuffle_regularize(zeta_composition(1, 1))
    assert stuffle_regularize(zeta_composition(1, 1)) == LinComb({zeta_composition(2): Fraction(-1, 2)})


@given(small_comps)
def test_convergent_compositions_are_fixed(ns):
    c = zeta_composition(*ns)
    if is_convergent(c):
        assert shuffle_regularize(c) == LinComb.term(c)
        assert stuffle_regularize(c) == LinComb.term(c)


@settings(max_examples=25, deadline=None)
@given(small_comps)
def test_comparison_numerically(ns):
    # stuffle - shuffle evaluated directly vs. via the comparison series
    c = zeta_composition(*ns)
    direct = numeric(stuffle_regularize(c) - shuffle_regularize(c))
    via = numeric(compare_regularizations(c))
    assert abs(direct - via) < 1e-15


def test_one_trailing_one_has_no_discrepancy():
    for ns in [(2, 1), (3, 1), (1, 2, 1)]:
        assert not compare_regularizations(zeta_composition(*ns))


def test_shuffle_asymptotic_shape():
    # zeta(1,1): constant term 0 and Lambda^2 / 2
    a = shuffle_asymptotic(zeta_composition(1, 1))
    assert a.degree == 2


def _insertion_domain(w):
    p = 0
    while p < len(w) and w[p].is_zero:
        p += 1
    q = 0
    while q < len(w) - p and w[len(w) - 1 - q].is_one:
        q += 1
    return p <= 2 and q <= 2 and not (p and q and p + q == len(w))


words01 = st.lists(st.sampled_from([ZERO_ARG, ONE_ARG]), min_size=1, max_size=5).map(Word)


@given(words01)
def test_insertion_oracle_agrees(w):
    if _insertion_domain(w):
        assert insertion_regularize(w) == shuffle_regularize(w)
    else:
        with pytest.raises(ValueError):
            insertion_regularize(w)


def test_generating_series():
    assert generating_regularization_check(3, 1)["ok"]
    assert generating_regularization_check(4, 2)["ok"]
