import io
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from mzv_forge.cli import ParseError, lower, parse, parse_object, run
from mzv_forge.hopf import random_symbol
from mzv_forge.symbols import ISymbol
from mzv_forge.words_and_products import Composition, composition, zeta_composition


def call(*argv, env=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_roundtrip_symbols(seed):
    s = random_symbol(random.Random(seed))
    assert parse_object(str(s)) == s
    assert str(lower(parse(str(s)))) == str(s)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.data())
def test_roundtrip_compositions(ns, data):
    xs = [data.draw(st.sampled_from(["1", "x", "y", "-1", "w1/3", "1/2", "x*y"])) for _ in ns]
    c = composition(ns, xs)
    assert parse_object(str(c)) == c


def test_examples_lower():
    assert parse_object("zeta(2,1)") == zeta_composition(2, 1)
    assert isinstance(parse_object("I(0; 1,0; 1)"), ISymbol)
    assert isinstance(parse_object("Li(1,2; x, y)"), Composition)


@pytest.mark.parametrize("src", ["zeta(", "zeta(1,,2)", "Li(1,2; x)", "I(0; 1)", "foo(1)", "zeta(0)"])
def test_parse_errors(src):
    with pytest.raises(ParseError) as e:
        parse_object(src)
    assert "^" in e.value.render()


def test_relations_weight3_line():
    code, out, _ = call("relations", "--weight", "3", "--emit", "solve")
    assert code == 0
    assert "zeta(1,2) = zeta(3)" in out.splitlines()


def test_residue_example():
    code, out, _ = call("residue", "--depth", "2", "--l", "1", "--k", "2")
    assert code == 0 and out.strip() == "s2/12"


def test_coproduct_example():
    code, out, _ = call("coproduct", "I(a;b,c;d)")
    assert code == 0
    assert len(out.strip().splitlines()) == 4


def test_exit_codes():
    assert call("eval", "zeta(1,")[0] == 2
    assert call("eval", "zeta(2,1)")[0] == 3
    assert call("relations", "--weight", "12")[0] == 4
    assert call("frobnicate")[0] == 2
    assert call("eval", "--no-such-flag", "zeta(2)")[0] == 2


def test_json_schema():
    code, out, _ = call("--format", "json", "eval", "zeta(3)")
    doc = json.loads(out)
    assert doc["schema"] == "mzv-forge/1"
    assert doc["command"] == "eval"
    assert out.endswith("\n")


def test_env_precision(monkeypatch):
    monkeypatch.setenv("MZV_FORGE_PREC", "64")
    code, out, _ = call("--format", "json", "eval", "zeta(2)")
    assert json.loads(out)["result"]["precision_bits"] == 64


def test_check_quick():
    code, out, _ = call("check", "--quick", "--samples", "5")
    assert code == 0, out
    assert "all suites passed" in out
