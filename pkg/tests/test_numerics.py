import cmath
from itertools import combinations

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from mzv_forge.numerics import (BigComplex, DomainError, PLPath, bloch_wigner, diff_eq_check, distribution_check,
                                five_term_check, group_like_residual, iterated_integral_eval, li_eval, loop_check,
                                ordered_exp, period_matrix_check, zeta_via_ordered_exp)
from mzv_forge.symbols import li_to_i
from mzv_forge.words_and_products import composition

small = st.complex_numbers(max_magnitude=0.6, allow_nan=False, allow_infinity=False).filter(lambda z: abs(z) > 1e-3)


def nested_sum_oracle(ns, xs, N=400):
    """Direct truncated nested sum; the tail is negligible for |x| <= 0.6 at N = 400."""
    with mpmath.workdps(40):
        # dynamic programming over the last summation index
        m = len(ns)
        prev = [mpmath.mpf(1)] * (N + 1)  # prev[n] = partial sum with all indices < n+1
        for i in range(m):
            cur = [mpmath.mpc(0)] * (N + 1)
            acc = mpmath.mpc(0)
            for n in range(1, N + 1):
                acc += (prev[n - 1] if i else 1) * mpmath.mpc(xs[i]) ** n / mpmath.mpf(n) ** ns[i]
                cur[n] = acc
            prev = cur
        return prev[N]


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), small)
def test_depth1_matches_mpmath_polylog(n, x):
    v = li_eval([n], [x], prec=96)
    with mpmath.workprec(120):
        assert abs(v.value - mpmath.polylog(n, mpmath.mpc(x))) < 1e-25


@settings(max_examples=8, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), small, small)
def test_depth2_matches_nested_sums(n1, n2, x, y):
    v = li_eval([n1, n2], [x, y], prec=96)
    assert abs(v.value - nested_sum_oracle([n1, n2], [x, y])) < 1e-20


@pytest.mark.parametrize("tol", [40, 80])
def test_radius_is_honest(tol):
    with mpmath.workprec(200):
        truth = mpmath.zeta(3)
    v = li_eval([3], prec=128, tol_bits=tol)
    assert abs(v.value - truth) <= v.radius
    assert v.radius <= mpmath.ldexp(1, -tol + 4)


def test_halving_tolerance_stays_within_radius():
    x = [mpmath.mpf(1) / 2, -mpmath.mpf(2) / 3]
    a = li_eval([1, 2], x, prec=128, tol_bits=40)
    b = li_eval([1, 2], x, prec=128, tol_bits=80)
    assert abs(a.value - b.value) <= a.radius + b.radius


def test_zeta2_both_routes():
    with mpmath.workprec(160):
        target = mpmath.pi ** 2 / 6
        assert abs(li_eval([2]).value - target) < 1e-35
        assert abs(zeta_via_ordered_exp([2]).value - target) < 1e-35


def test_depth2_zetas():
    with mpmath.workprec(160):
        z3 = mpmath.zeta(3)
        assert abs(li_eval([1, 2]).value - z3) < 1e-35
        assert abs(li_eval([2, 2]).value - 3 * mpmath.zeta(4) / 4) < 1e-35
        assert abs(zeta_via_ordered_exp([1, 2]).value - z3) < 1e-30


def test_boundary_alternating():
    # Li_{1,1}(-1, -1) = ((sum (-1)^n / n)^2 - sum 1/n^2) / 2 = (log(2)^2 - zeta(2)) / 2
    with mpmath.workprec(160):
        expected = (mpmath.log(2) ** 2 - mpmath.pi ** 2 / 6) / 2
        assert abs(li_eval([1, 1], [-1, -1]).value - expected) < 1e-30


def test_iterated_integral_matches_li():
    c = composition([1, 2], ["1/2", "-1/3"])
    sign, s = li_to_i(c)
    xs = [mpmath.mpf(1) / 2, -mpmath.mpf(1) / 3]
    lhs = li_eval([1, 2], xs, prec=96).value
    letters = [a.to_complex() for a in s.middle]
    rhs = iterated_integral_eval(letters, 1, prec=96)
    rhs = rhs.value if isinstance(rhs, BigComplex) else rhs
    assert abs(lhs - sign * rhs) < 1e-15


def test_divergent_inputs_raise():
    with pytest.raises(DomainError):
        li_eval([1])
    with pytest.raises(DomainError):
        li_eval([2], [2])


@pytest.mark.parametrize("p", [1, 2, 3])
def test_loop_around_zero(p):
    assert loop_check(p)["residual"] < 1e-30


def test_group_like_small():
    s = ordered_exp(PLPath.tangential([0, 1], [0, 1]), 3, 128)
    worst, _ = group_like_residual(s)
    assert worst < 1e-30


def test_tensor_series_inverse():
    s = ordered_exp(PLPath((0.2 + 0j, 0.5 + 0.4j), (0j, 1 + 0j)), 3, 96)
    prod = s * s.inverse()
    assert abs(prod.coefficient(()).value - 1) < 1e-25
    assert max(abs(v) for w, v in prod.coeffs.items() if w) < 1e-20


def test_diff_eq_slope_depth1():
    r = diff_eq_check([0, 0.3 + 0.2j, 2])
    assert abs(r["richardson_slope"] - 2) < 0.1


@pytest.mark.parametrize("x", [0.3, -0.45, 0.5])
def test_distribution_depth1(x):
    assert distribution_check([2], 2, [x])["ok"]


def test_distribution_depth2():
    assert distribution_check([1, 1], 2, [0.3, -0.4])["ok"]


def test_bloch_wigner_against_polylog():
    for z in (0.3 + 0.7j, -1.2 + 0.4j, 2 - 1j):
        a = bloch_wigner(z)
        b = bloch_wigner(z, li2=lambda u: mpmath.polylog(2, u))
        assert abs(a - b) < 1e-30


def test_bloch_wigner_symmetries():
    with mpmath.workprec(160):
        z = mpmath.mpc("0.4", "0.9")
        d = bloch_wigner(z)
        assert abs(bloch_wigner(1 - z) + d) < 1e-30
        assert abs(bloch_wigner(1 / z) + d) < 1e-30
        assert abs(bloch_wigner(z.conjugate()) + d) < 1e-30


def test_five_term_one_point():
    assert five_term_check(0.3 + 0.4j, -0.2 + 0.5j)["sum"] < 1e-20


def test_period_matrix():
    r = period_matrix_check([0, 0.4 + 0.3j, 1.5 - 0.2j, 2 + 1j])
    assert r["lower_triangular"] and r["diagonal_ok"]
    assert r["griffiths_deviation"] < 1e-8


def test_path_validation():
    with pytest.raises(Exception):
        PLPath((0j, 1 + 0j), (0.5 + 0j,)).validate()


def test_results_do_not_depend_on_caller_precision():
    # the public routes must not round through mpmath's global 53-bit default
    with mpmath.workprec(53):
        vals = [zeta_via_ordered_exp([2]), -li_eval([2]) + li_eval([2]) * 2, li_eval([1, 2]) * 1]
    with mpmath.workprec(200):
        assert abs(vals[0].value - mpmath.pi ** 2 / 6) < 1e-35
        assert abs(vals[1].value - mpmath.pi ** 2 / 6) < 1e-35
        assert abs(vals[2].value - mpmath.zeta(3)) < 1e-35
