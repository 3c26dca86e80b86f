import pytest
from hypothesis import given, settings, strategies as st

from mzv_forge.arguments import atom, parse_arg
from mzv_forge.exact_algebra import LinComb
from mzv_forge.symbols import (UNIT, canonicalize, i_to_li, isym, li_to_i, log_vector, path_compose, reverse,
                               shuffle_fixed_endpoints, word_encoding)
from mzv_forge.words_and_products import composition, zeta_composition

names = st.sampled_from(["0", "1", "x", "y", "-1", "z"])


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.data())
def test_li_i_roundtrip(ns, data):
    xs = [data.draw(st.sampled_from(["x", "y", "-1", "1/2", "w1/3"])) for _ in ns]
    c = composition(ns, xs)
    sign, s = li_to_i(c)
    assert sign == (-1) ** len(ns)
    assert i_to_li(s) == (sign, c)


def test_li_to_i_uses_tail_products():
    sign, s = li_to_i(composition([2, 1], ["x", "y"]))
    assert str(s) == "I(0; x^-1*y^-1,0,y^-1; 1)"
    assert sign == 1


def test_word_encoding():
    assert str(word_encoding(zeta_composition(2, 1))) == "(1)0(1)"
    with pytest.raises(ValueError):
        word_encoding(composition([1], ["x"]))


@given(st.lists(names, min_size=1, max_size=4), names, names)
def test_reverse_is_involution_with_sign(mid, a, b):
    s = isym(a, mid, b)
    r = reverse(s)
    back = LinComb()
    for t, c in r.raw().items():
        back = back + reverse(t).scale(c)
    assert back == canonicalize(s)


@given(st.lists(names, min_size=1, max_size=4), names, names)
def test_path_composition_term_count(mid, a, b):
    # sum over splits k = 0..n of I(a; first k; z) * I(z; rest; b)
    out = path_compose(isym(a, mid, b), atom("z"))
    assert sum(out.raw().values()) <= len(mid) + 1


def test_path_compose_example():
    out = path_compose(isym("0", ["1", "x"], "y"), atom("z"))
    assert len(out) == 3


def test_shuffle_fixed_endpoints():
    out = shuffle_fixed_endpoints(isym("0", ["1"], "y"), isym("0", ["x"], "y"))
    assert out == LinComb({isym("0", ["1", "x"], "y"): 1, isym("0", ["x", "1"], "y"): 1})


def test_canonicalize_degenerate():
    assert not canonicalize(isym("x", ["1"], "x"))
    assert canonicalize(isym("x", [], "y")) == LinComb.term(UNIT)


def test_log_vector():
    # I(0; 1; x) = log(1 - x), symbol (1 - x)
    assert log_vector(isym("0", ["1"], "x")) == {("bin", "x"): 1}
    assert parse_arg("w1/3") == parse_arg("w 1/3")
