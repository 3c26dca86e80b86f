"""Multiple zeta functions: residues, values at non-positive integers, ζ(0,0).

The multiple zeta function uses the ascending convention

    ζ(s_1,…,s_m) = Σ_{0<n_1<…<n_m} n_1^{-s_1} ⋯ n_m^{-s_m}.

Its singular hyperplanes are s_l+…+s_m = (m−l+1) − k. The residue on each is
an exact rational function of s_{l+1},…,s_m times the opaque symbol
ζ(s_1,…,s_{l−1}). Everything here is exact: only the closed formulas produced
by the Bernoulli expansion of the integrand are implemented.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .exact_algebra import LinComb, MultiPoly, RatFunc, bernoulli, binom_poly, format_rational, zeta_nonpositive

__all__ = [
    "Hyperplane",
    "ZetaFunctionSymbol",
    "ResidueValue",
    "beta",
    "q_factor",
    "residue",
    "multiple_residue_at_ones",
    "multiple_residue_via_last_poles",
    "multiple_residue_via_top_hyperplane",
    "value_at_nonpositive",
    "expansion_terms",
    "limit_last_to_zero",
    "directional_discrepancy_check",
    "format_discrepancy",
]

MAX_DEPTH = 4


def beta(p: int) -> Fraction:
    """β_0 = 1 and β_p = B_p / p."""
    if p < 0:
        raise ValueError("p must be >= 0")
    return Fraction(1) if p == 0 else bernoulli(p) / p


def s_var(i: int) -> MultiPoly:
    return MultiPoly.var(f"s{i}")


@dataclass(frozen=True)
class Hyperplane:
    """s_l + … + s_m = (m − l + 1) − k."""

    l: int
    k: int

    @classmethod
    def last_pole(cls, m: int) -> "Hyperplane":
        """The hyperplane s_m = 1."""
        return cls(m, 0)

    def is_last_pole(self, m: int) -> bool:
        return self.l == m and self.k == 0

    def validate(self, m: int) -> None:
        if self.k < 0:
            raise ValueError(f"hyperplane needs k >= 0, got k={self.k}")
        if not 1 <= self.l <= m:
            raise ValueError(f"hyperplane index l={self.l} outside 1..{m}")

    def describe(self, m: int) -> str:
        lhs = " + ".join(f"s{i}" for i in range(self.l, m + 1))
        return f"{lhs} = {m - self.l + 1 - self.k}"


@dataclass(frozen=True)
class ZetaFunctionSymbol:
    """Opaque ζ(s_1,…,s_{d−1}, s_d + shift); ``shift`` acts on the last argument."""

    depth: int
    shift: int = 0

    def __str__(self) -> str:
        if self.depth == 0:
            return "1"
        args = [f"s{i}" for i in range(1, self.depth + 1)]
        if self.shift:
            args[-1] += f"{self.shift:+d}".replace("+", " + ").replace("-", " - ")
        return "zeta(" + ", ".join(args) + ")"

    def __lt__(self, other: "ZetaFunctionSymbol") -> bool:
        return (self.depth, self.shift) < (other.depth, other.shift)


def q_factor(top: MultiPoly, p: int) -> Union[MultiPoly, RatFunc]:
    """C(top − 1, p − 1), where ``top`` = Σ_{α≥i} (s_α + p_α − 1)."""
    return binom_poly(top - 1, p - 1)


def _q_product(ps: Sequence[int], first: int, m: int) -> RatFunc:
    """Q_{p_first..p_m}(s_first..s_m) as an exact rational function."""
    out = RatFunc(1)
    top = MultiPoly.const(0)
    for i in range(m, first - 1, -1):
        p = ps[i - first]
        top = top + s_var(i) + (p - 1)
        out = out * RatFunc.coerce(q_factor(top, p))
    return out


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class ResidueValue:
    """Residue = prefactor · function, plus the β-expansion it came from."""

    m: int
    hyperplane: Hyperplane
    prefactor: ZetaFunctionSymbol
    function: RatFunc
    terms: List[Tuple[Tuple[int, ...], Fraction, RatFunc]] = field(default_factory=list)

    @property
    def polynomial(self) -> Union[MultiPoly, RatFunc]:
        return self.function.as_poly() if self.function.is_polynomial() else self.function

    def variables(self) -> Tuple[str, ...]:
        names = set(self.function.num.variables) | set(self.function.den.variables)
        return tuple(sorted(names, key=lambda v: int(v[1:])))

    def is_zero(self) -> bool:
        return self.function.num.is_zero()

    def beta_expansion(self) -> str:
        if not self.terms:
            return "0"
        first = self.hyperplane.l + 1
        parts = []
        for ps, coef, fn in self.terms:
            label = "*".join(f"beta_{p}" for p in ps) or "1"
            idx = ",".join(f"p{first + j}={p}" for j, p in enumerate(ps))
            parts.append(f"[{idx}] {label} = {format_rational(coef)} times {fn}")
        return "\n".join(parts)

    def expanded(self) -> str:
        pre = str(self.prefactor)
        body = str(self.function)
        if pre == "1":
            return body
        return f"{pre} * ({body})"

    def __str__(self) -> str:
        return self.expanded()

    def to_json(self) -> dict:
        return {
            "depth": self.m,
            "hyperplane": {"l": self.hyperplane.l, "k": self.hyperplane.k, "equation": self.hyperplane.describe(self.m)},
            "prefactor": str(self.prefactor),
            "function": str(self.function),
            "is_polynomial": self.function.is_polynomial(),
            "beta_expansion": [
                {"p": list(ps), "beta_product": format_rational(c), "factor": str(fn)} for ps, c, fn in self.terms
            ],
        }


def residue(m: int, h: Hyperplane) -> ResidueValue:
    """Residue of ζ(s_1,…,s_m) on the hyperplane ``h``.

    Sum over p_{l+1}+…+p_m = k of β_{p_{l+1}}⋯β_{p_m} · Q_{p}(s_{l+1},…,s_m),
    times the symbol ζ(s_1,…,s_{l−1}). The variable s_l is eliminated by the
    hyperplane equation, so the function lives in s_{l+1},…,s_m.
    """
    if m < 1:
        raise ValueError("depth must be >= 1")
    if m > MAX_DEPTH:
        raise ValueError(f"depth {m} exceeds desk-scale limit {MAX_DEPTH}")
    h.validate(m)
    l, k = h.l, h.k
    total = RatFunc(0)
    terms = []
    for ps in _compositions(k, m - l):
        coef = Fraction(1)
        for p in ps:
            coef *= beta(p)
        if coef == 0:
            continue
        fn = _q_product(ps, l + 1, m) if ps else RatFunc(1)
        terms.append((ps, coef, fn))
        total = total + fn * coef
    return ResidueValue(m, h, ZetaFunctionSymbol(l - 1), total, terms)


# ---------------------------------------------------------------------------
# multiple residue at (1,…,1)


def multiple_residue_via_last_poles(m: int) -> Fraction:
    """Peel s_m = 1, then s_{m−1} = 1, … using the last-pole residue each time."""
    if m < 1:
        raise ValueError("m must be >= 1")
    value = Fraction(1)
    for depth in range(m, 0, -1):
        r = residue(depth, Hyperplane.last_pole(depth))
        assert r.prefactor == ZetaFunctionSymbol(depth - 1)
        value *= r.function.as_poly().constant_value()
    return value


def multiple_residue_via_top_hyperplane(m: int) -> Fraction:
    """Residue on s_1+…+s_m = m, then iterated residues in t_i = Σ_{α≥i}(s_α − 1)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    f = residue(m, Hyperplane(1, 0)).function
    # s_i = t_i − t_{i+1} + 1 with t_{m+1} = 0
    for i in range(2, m + 1):
        t_i = MultiPoly.var(f"t{i}")
        t_next = MultiPoly.var(f"t{i + 1}") if i < m else MultiPoly.const(0)
        f = f.substitute(f"s{i}", t_i - t_next + 1)
    for i in range(2, m + 1):
        f = f.residue(f"t{i}")
    if not f.is_polynomial() or f.num.variables:
        raise ArithmeticError(f"iterated residue left a non-constant: {f}")
    return f.num.constant_value()


def multiple_residue_at_ones(m: int) -> Fraction:
    a = multiple_residue_via_last_poles(m)
    b = multiple_residue_via_top_hyperplane(m)
    if a != b:
        raise ArithmeticError(f"multiple residue routes disagree: {a} vs {b}")
    return a


# ---------------------------------------------------------------------------
# values at non-positive integers


def _binom_int(top: int, k: int) -> Fraction:
    if k == -1:
        if top == -1:
            raise ZeroDivisionError("C(-1, -1) is a pole")
        return Fraction(1, top + 1)
    num = 1
    for i in range(k):
        num *= top - i
    return Fraction(num, factorial(k))


def expansion_terms(trailing: Sequence[int], slack: int = 0) -> List[Tuple[Tuple[int, ...], Fraction, int]]:
    """Surviving terms (p_l..p_m, coefficient, X_l) of the Bernoulli expansion.

    X_l = Σ_{α≥l}(s_α + p_α − 1) is the shift added to the last prefix
    argument. Each p_i runs up to 1 − s_i − X_{i+1} (+ ``slack``, used only by
    tests to confirm the bound drops nothing).
    """
    trailing = [int(s) for s in trailing]
    if any(s > 0 for s in trailing):
        raise ValueError(f"trailing arguments must be non-positive integers, got {trailing}")
    n = len(trailing)
    out: List[Tuple[Tuple[int, ...], Fraction, int]] = []
    bound_count = [0]

    def rec(i: int, x_next: int, ps: Tuple[int, ...], coef: Fraction) -> None:
        if i < 0:
            out.append((ps, coef, x_next))
            return
        s = trailing[i]
        hi = 1 - s - x_next + slack
        assert hi >= 0
        for p in range(hi + 1):
            bound_count[0] += 1
            x = x_next + s + p - 1
            c = coef * beta(p) * _binom_int(x - 1, p - 1)
            if c == 0:
                continue
            rec(i - 1, x, (p,) + ps, c)

    rec(n - 1, 0, (), Fraction(1))
    return out


def value_at_nonpositive(l: int, trailing: Sequence[int]) -> Union[LinComb, Fraction]:
    """ζ(s_1,…,s_{l−1}, s_l,…,s_m) with s_l..s_m given non-positive integers.

    For l ≥ 2 the result is a combination of ζ(s_1,…,s_{l−1} + shift). For
    l = 1 every argument is given; the first one is absorbed into the prefix
    of the l = 2 expansion and the depth-one zetas are evaluated exactly.
    """
    trailing = list(trailing)
    if l < 1:
        raise ValueError("l must be >= 1")
    if not trailing:
        raise ValueError("need at least one trailing argument")
    if any(int(s) != s or s > 0 for s in trailing):
        raise ValueError(f"trailing arguments must be non-positive integers, got {trailing}")
    if l == 1:
        if len(trailing) == 1:
            return zeta_nonpositive(trailing[0])
        s1, rest = trailing[0], trailing[1:]
        total = Fraction(0)
        for _, coef, x in expansion_terms(rest):
            total += coef * zeta_nonpositive(s1 + x)
        return total
    out: LinComb = LinComb()
    for _, coef, x in expansion_terms(trailing):
        out.add_term(ZetaFunctionSymbol(l - 1, x), coef)
    return out


# ---------------------------------------------------------------------------
# ζ(0,0) bookkeeping


def _riemann_limit(arg0: int, coeff: RatFunc, var: str) -> Fraction:
    """lim_{ε→0} coeff(ε)·ζ(arg0 + ε) for an integer arg0."""
    num, den = coeff.num, coeff.den
    d0 = den.substitute(var, 0).constant_value()
    if d0 == 0:
        raise ArithmeticError("coefficient has a pole at the limit point")
    c0 = num.substitute(var, 0).constant_value() / d0
    if arg0 <= 0:
        return c0 * zeta_nonpositive(arg0)
    if c0 != 0:
        raise ArithmeticError(f"limit needs ζ({arg0}) with nonzero weight")
    if arg0 >= 2:
        return Fraction(0)
    # arg0 == 1: coeff has a zero at ε = 0 and ζ(1+ε) = 1/ε + O(1)
    deriv = num.divide_by_var(var).substitute(var, 0).constant_value() / d0
    return deriv


def limit_last_to_zero(s1: int) -> Fraction:
    """lim_{s_2→0} ζ(s1, s_2) for an integer s1 ≤ 0 from the depth-two expansion.

    ζ(s_1,s_2) = Σ_p β_p C(s_2+p−2, p−1) ζ(s_1+s_2+p−1); at s_2 → 0 only
    finitely many terms survive, one of them through the pole of ζ at 1.
    """
    if s1 > 0:
        raise ValueError("s1 must be a non-positive integer")
    eps = MultiPoly.var("e")
    total = Fraction(0)
    for p in range(0, 4 - s1):
        b = beta(p)
        if b == 0:
            continue
        coeff = RatFunc.coerce(binom_poly(eps + (p - 2), p - 1))
        total += b * _riemann_limit(s1 + p - 1, coeff, "e")
    return total


def directional_discrepancy_check() -> dict:
    """Replays the two manipulations that give different values for ζ(0,0)."""
    z0 = zeta_nonpositive(0)
    zm1 = zeta_nonpositive(-1)
    # Route A: ζ(0,s) = Σ_{k}(k−1)k^{-s} = ζ(s−1) − ζ(s), then s → 0.
    route_a = zm1 - z0
    printed_sign = zm1 + z0
    # Route B: ζ(s,0) = −ζ(0,s) − ζ(s) + ζ(s)ζ(0) at s = 0, reading both
    # ζ(0,0) as the same number: 2ζ(0,0) = −ζ(0) + ζ(0)^2.
    two_b = -z0 + z0 * z0
    route_b = two_b / 2
    # Cross-checks through the Bernoulli expansion.
    lim_s2 = limit_last_to_zero(0)
    lim_s1 = value_at_nonpositive(1, [0, 0])
    stuffle_consistent = -lim_s2 - z0 + z0 * z0
    return {
        "route_a": route_a,
        "route_b": route_b,
        "difference": route_a - route_b,
        "derivation_a": [
            "zeta(0,s2) = sum_{k2>0} (k2-1)/k2^s2 = zeta(s2-1) - zeta(s2)",
            f"zeta(0,0) = zeta(-1) - zeta(0) = {format_rational(zm1)} - ({format_rational(z0)}) = {format_rational(route_a)}",
        ],
        "derivation_b": [
            "zeta(s1,0) = -zeta(0,s1) - zeta(s1) + zeta(s1)*zeta(0)",
            f"2*zeta(0,0) = -zeta(0) + zeta(0)^2 = {format_rational(two_b)}",
            f"zeta(0,0) = {format_rational(route_b)}",
        ],
        "erratum_plus_sign_value": printed_sign,
        "zeta_0_s2_as_s2_to_0": lim_s2,
        "zeta_s1_0_as_s1_to_0": lim_s1,
        "stuffle_with_directional_limits": stuffle_consistent,
        "ok": route_a == Fraction(5, 12) and route_b == Fraction(3, 8) and lim_s2 == route_a
        and lim_s1 == stuffle_consistent,
    }


def format_discrepancy(report: dict) -> str:
    lines = ["route A (counting):"]
    lines += ["  " + s for s in report["derivation_a"]]
    lines.append("route B (stuffle at s1 = 0):")
    lines += ["  " + s for s in report["derivation_b"]]
    lines.append(f"difference A - B = {format_rational(report['difference'])}")
    lines.append(f"lim s2->0 zeta(0,s2) from expansion = {format_rational(report['zeta_0_s2_as_s2_to_0'])}")
    lines.append(f"lim s1->0 zeta(s1,0) from expansion = {format_rational(report['zeta_s1_0_as_s1_to_0'])}")
    return "\n".join(lines)
