"""Invariant suites behind ``mzv-forge check``.

Each suite returns (name, passed, total). Sampling is driven by a seeded
``random.Random`` so results are reproducible.
"""

from __future__ import annotations

import random
from math import comb
from typing import Callable, List, Tuple

Result = Tuple[str, int, int]


def _count(name: str, cases: List[Callable[[], bool]]) -> Result:
    passed = 0
    for case in cases:
        try:
            passed += bool(case())
        except Exception:
            pass
    return name, passed, len(cases)


def words_suite(rng: random.Random, samples: int) -> Result:
    from .words_and_products import a3_identity_check, partial_fraction_check, second_shuffle_check, shuffle_count, stuffle

    cases: List[Callable[[], bool]] = []
    for _ in range(samples):
        p, q = rng.randint(0, 4), rng.randint(0, 4)
        u = tuple(rng.choice("01x") for _ in range(p))
        v = tuple(rng.choice("01x") for _ in range(q))
        cases.append(lambda u=u, v=v: shuffle_count(u, v) == comb(len(u) + len(v), len(u)))
        a = tuple((rng.randint(1, 3), 1) for _ in range(rng.randint(0, 3)))
        b = tuple((rng.randint(1, 3), 1) for _ in range(rng.randint(0, 3)))
        cases.append(lambda a=a, b=b: stuffle(a, b) == stuffle(b, a))
    cases.append(lambda: second_shuffle_check(1, 2, 3)["ok"])
    cases.append(lambda: partial_fraction_check(2)["ok"])
    cases.append(lambda: a3_identity_check(2, 2))
    return _count("words_and_products", cases)


def _in_insertion_domain(w) -> bool:
    # oracle handles at most two leading 0s / trailing 1s around a nonempty core
    p = 0
    while p < len(w) and w[p].is_zero:
        p += 1
    q = 0
    while q < len(w) - p and w[len(w) - 1 - q].is_one:
        q += 1
    return p <= 2 and q <= 2 and not (p and q and p + q == len(w))


def regularization_suite(rng: random.Random, samples: int) -> Result:
    from .arguments import ONE_ARG, ZERO_ARG
    from .regularization import generating_regularization_check, insertion_regularize, shuffle_regularize
    from .words_and_products import Word

    cases: List[Callable[[], bool]] = [
        lambda: generating_regularization_check(3, 1)["ok"],
        lambda: generating_regularization_check(4, 2)["ok"],
    ]
    drawn = 0
    while drawn < samples:
        n = rng.randint(1, 5)
        w = Word(rng.choice((ZERO_ARG, ONE_ARG)) for _ in range(n))
        if not _in_insertion_domain(w):
            continue
        drawn += 1
        cases.append(lambda w=w: insertion_regularize(w) == shuffle_regularize(w))
    return _count("regularization", cases)


def hopf_suite(rng: random.Random, samples: int) -> Result:
    from .hopf import (algebra_map_residual, antipode_residual, coassociativity_residual, cojacobi_residual,
                       counit_residual, random_symbol)
    from .symbols import ISymbol

    cases: List[Callable[[], bool]] = []
    for _ in range(samples):
        s = random_symbol(rng)
        cases.append(lambda s=s: not coassociativity_residual(s))
        cases.append(lambda s=s: not any(counit_residual(s)))
        cases.append(lambda s=s: not antipode_residual(s))
        cases.append(lambda s=s: not cojacobi_residual(s))
    for _ in range(max(1, samples // 4)):
        s = random_symbol(rng, 3)
        t = random_symbol(rng, 2)
        t = ISymbol(s.a0, t.middle, s.a_end)
        cases.append(lambda s=s, t=t: not algebra_map_residual(s, t))
    return _count("hopf", cases)


def double_shuffle_suite(quick: bool) -> Result:
    from .double_shuffle import dimension_table, expected_dimensions

    k = 6 if quick else 8
    table = dimension_table(k)
    exp = expected_dimensions(k)
    return _count("double_shuffle", [lambda i=i: table[i - 1] == exp[i] for i in range(2, k + 1)])


def continuation_suite() -> Result:
    from fractions import Fraction

    from .exact_algebra import MultiPoly, RatFunc
    from .mzf_continuation import Hyperplane, directional_discrepancy_check, multiple_residue_at_ones, residue

    s2 = MultiPoly.var("s2")
    expected = [RatFunc(1, s2 - 1), RatFunc(Fraction(-1, 2)), RatFunc(s2 * Fraction(1, 12)), RatFunc(0),
                RatFunc(s2 * (s2 + 1) * (s2 + 2) * Fraction(-1, 720))]
    cases: List[Callable[[], bool]] = [lambda k=k: residue(2, Hyperplane(1, k)).function == expected[k] for k in range(5)]
    cases += [lambda m=m: multiple_residue_at_ones(m) == 1 for m in (1, 2, 3)]
    cases.append(lambda: directional_discrepancy_check()["ok"])
    return _count("mzf_continuation", cases)


def numerics_suite(rng: random.Random, prec: int, quick: bool) -> Result:
    import mpmath

    from .numerics import (PLPath, distribution_check, group_like_residual, li_eval, loop_check, ordered_exp,
                           zeta_via_ordered_exp)

    def zeta2() -> bool:
        with mpmath.workprec(prec + 20):
            target = mpmath.pi ** 2 / 6
            a = li_eval([2], prec=prec).value
            b = zeta_via_ordered_exp([2], prec=prec).value
            return abs(a - target) < 1e-25 and abs(b - target) < 1e-25

    def group_like() -> bool:
        s = ordered_exp(PLPath.tangential([0, 1], [0, 1, -1]), 3 if quick else 4, prec)
        worst, bound = group_like_residual(s)
        return worst < 1e-18

    cases: List[Callable[[], bool]] = [zeta2, group_like, lambda: loop_check(2, prec)["residual"] < 1e-20]
    for _ in range(3 if quick else 6):
        x = rng.uniform(-0.6, 0.6)
        y = rng.uniform(-0.6, 0.6)
        cases.append(lambda x=x: distribution_check([2], 2, [x], prec)["ok"])
        cases.append(lambda x=x, y=y: distribution_check([1, 1], 2, [x, y], prec)["ok"])
    return _count("numerics", cases)


def run_all(seed: int = 20240601, samples: int = 50, prec: int = 128, quick: bool = False) -> List[Result]:
    rng = random.Random(seed)
    return [
        words_suite(rng, samples),
        regularization_suite(rng, samples),
        hopf_suite(rng, samples),
        double_shuffle_suite(quick),
        continuation_suite(),
        numerics_suite(rng, prec, quick),
    ]
