"""Words, compositions, shuffle and stuffle, and truncated generating series.

A letter is an :class:`~mzv_forge.arguments.Arg`; the zero argument stands
for the form dt/t and any other argument a for dt/(t - a).  A word is read
left to right from the start point of the path.

A composition is a tuple of ``(n, x)`` pairs indexing the nested sum

    Li_{n_1..n_m}(x_1..x_m) = sum_{0<k_1<...<k_m} x_1^k_1...x_m^k_m / k_1^n_1...k_m^n_m
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Sequence, Tuple

from .arguments import ONE_ARG, ZERO_ARG, Arg, atom, parse_arg
from .exact_algebra import LinComb, MultiPoly

__all__ = [
    "Word",
    "Composition",
    "word",
    "composition",
    "zeta_composition",
    "shuffle",
    "stuffle",
    "shuffle_lin",
    "stuffle_lin",
    "is_convergent",
    "mzv_word",
    "TSeries",
    "second_shuffle_check",
    "partial_fraction_check",
    "first_shuffle_generating_check",
    "a3_identity_check",
]


class Word(tuple):
    """Tuple of letters with the textual form ``0(1)(x)...``."""

    __slots__ = ()

    def __new__(cls, letters: Iterable[Arg] = ()):
        return super().__new__(cls, letters)

    @property
    def weight(self) -> int:
        return len(self)

    @property
    def depth(self) -> int:
        return sum(1 for a in self if not a.is_zero)

    def __add__(self, other) -> "Word":
        return Word(tuple.__add__(self, tuple(other)))

    def __getitem__(self, i):
        r = tuple.__getitem__(self, i)
        return Word(r) if isinstance(i, slice) else r

    def __str__(self) -> str:
        if not self:
            return "e"
        return "".join("0" if a.is_zero else f"({a})" for a in self)

    def __repr__(self) -> str:
        return f"Word({self})"

    @staticmethod
    def parse(text: str) -> "Word":
        text = text.strip()
        if text in ("", "e"):
            return Word()
        out: List[Arg] = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch == "0":
                out.append(ZERO_ARG)
                i += 1
            elif ch == "(":
                j = text.index(")", i)
                out.append(parse_arg(text[i + 1 : j]))
                i = j + 1
            elif ch.isspace():
                i += 1
            else:
                raise ValueError(f"bad word {text!r}")
        return Word(out)


class Composition(tuple):
    """Tuple of ``(n, x)`` pairs with the textual form ``(n1,x1)(n2,x2)``."""

    __slots__ = ()

    def __new__(cls, pairs: Iterable[Tuple[int, Arg]] = ()):
        return super().__new__(cls, ((int(n), x) for n, x in pairs))

    @property
    def weight(self) -> int:
        return sum(n for n, _ in self)

    @property
    def depth(self) -> int:
        return len(self)

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(n for n, _ in self)

    @property
    def args(self) -> Tuple[Arg, ...]:
        return tuple(x for _, x in self)

    @property
    def is_mzv(self) -> bool:
        return all(x.is_one for _, x in self)

    def __add__(self, other) -> "Composition":
        return Composition(tuple.__add__(self, tuple(other)))

    def __getitem__(self, i):
        r = tuple.__getitem__(self, i)
        return Composition(r) if isinstance(i, slice) else r

    def __str__(self) -> str:
        if not self:
            return "1"
        if self.is_mzv:
            return "zeta(" + ",".join(str(n) for n in self.indices) + ")"
        return "Li(" + ",".join(str(n) for n in self.indices) + "; " + ", ".join(str(x) for x in self.args) + ")"

    def __repr__(self) -> str:
        return f"Composition({self})"


def word(*letters) -> Word:
    """Build a word; ints/strings are parsed as arguments (0 is dt/t)."""
    return Word(a if isinstance(a, Arg) else parse_arg(str(a)) for a in letters)


def composition(indices: Sequence[int], args: Sequence = None) -> Composition:
    if args is None:
        args = [ONE_ARG] * len(indices)
    if len(args) != len(indices):
        raise ValueError("indices and arguments differ in length")
    return Composition((n, a if isinstance(a, Arg) else parse_arg(str(a))) for n, a in zip(indices, args))


def zeta_composition(*indices: int) -> Composition:
    return composition(indices)


def is_convergent(c: Composition) -> bool:
    """Convergence of the nested sum at |x_i| <= 1: last pair is not (1, 1)."""
    if not c:
        return True
    n, x = c[-1]
    return not (n == 1 and x.is_one)


def mzv_word(c: Composition) -> Word:
    """Letters (a_1, 0^{n_1-1}, ..., a_m, 0^{n_m-1}) with a_i = (x_i...x_m)^{-1}.

    Li_c(x) = (-1)^depth * I(0; mzv_word(c); 1).  For MZVs every a_i is 1.
    """
    out: List[Arg] = []
    m = len(c)
    for i, (n, _) in enumerate(c):
        prod = ONE_ARG
        for _, x in c[i:]:
            prod = prod * x
        out.append(prod.inverse())
        out.extend([ZERO_ARG] * (n - 1))
    return Word(out)


# ---------------------------------------------------------------------------
# products


@lru_cache(maxsize=200_000)
def _shuffle(u: tuple, v: tuple) -> Dict[tuple, int]:
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out: Dict[tuple, int] = {}
    a, b = u[0], v[0]
    for w, c in _shuffle(u[1:], v).items():
        k = (a,) + w
        out[k] = out.get(k, 0) + c
    for w, c in _shuffle(u, v[1:]).items():
        k = (b,) + w
        out[k] = out.get(k, 0) + c
    return out


def shuffle(u: Sequence, v: Sequence) -> LinComb:
    """Shuffle product of two words."""
    return LinComb((Word(w), c) for w, c in _shuffle(tuple(u), tuple(v)).items())


def shuffle_counts(u: Sequence, v: Sequence) -> Dict[tuple, int]:
    """Raw shuffle multiplicities keyed by plain tuples (hot-path helper)."""
    return _shuffle(tuple(u), tuple(v))


@lru_cache(maxsize=200_000)
def _stuffle(p: tuple, q: tuple) -> Dict[tuple, int]:
    if not p:
        return {q: 1}
    if not q:
        return {p: 1}
    out: Dict[tuple, int] = {}
    (n1, x1), (n2, x2) = p[0], q[0]
    for w, c in _stuffle(p[1:], q).items():
        k = (p[0],) + w
        out[k] = out.get(k, 0) + c
    for w, c in _stuffle(p, q[1:]).items():
        k = (q[0],) + w
        out[k] = out.get(k, 0) + c
    merged = (n1 + n2, x1 * x2)
    for w, c in _stuffle(p[1:], q[1:]).items():
        k = (merged,) + w
        out[k] = out.get(k, 0) + c
    return out


def stuffle(p: Sequence, q: Sequence) -> LinComb:
    """Quasi-shuffle product of two compositions."""
    return LinComb((Composition(w), c) for w, c in _stuffle(tuple(p), tuple(q)).items())


def stuffle_counts(p: Sequence, q: Sequence) -> Dict[tuple, int]:
    return _stuffle(tuple(p), tuple(q))


def _bilinear(f, a: LinComb, b: LinComb, wrap) -> LinComb:
    out = LinComb()
    for u, cu in a.raw().items():
        for v, cv in b.raw().items():
            for w, c in f(tuple(u), tuple(v)).items():
                out.add_term(wrap(w), cu * cv * c)
    return out


def shuffle_lin(a: LinComb, b: LinComb) -> LinComb:
    return _bilinear(_shuffle, a, b, Word)


def stuffle_lin(a: LinComb, b: LinComb) -> LinComb:
    return _bilinear(_stuffle, a, b, Composition)


# ---------------------------------------------------------------------------
# truncated generating series


class TSeries:
    """Polynomial in t-variables with LinComb coefficients, truncated at total degree."""

    def __init__(self, variables: Sequence[str], trunc: int, coeffs: Dict[tuple, LinComb] = None):
        self.variables = tuple(variables)
        self.trunc = trunc
        self.coeffs: Dict[tuple, LinComb] = {}
        for e, c in (coeffs or {}).items():
            self._add(e, c)

    def _add(self, exps: tuple, c: LinComb) -> None:
        if sum(exps) > self.trunc or not c:
            return
        cur = self.coeffs.get(exps)
        new = c if cur is None else cur + c
        if new:
            self.coeffs[exps] = new
        else:
            self.coeffs.pop(exps, None)

    def add_poly_times(self, poly: MultiPoly, c: LinComb) -> None:
        """Accumulate ``poly * c`` where poly is a polynomial in the t-variables."""
        index = {v: i for i, v in enumerate(self.variables)}
        for mono, coef in poly.terms.items():
            exps = [0] * len(self.variables)
            for v, e in mono:
                exps[index[v]] += e
            self._add(tuple(exps), c.scale(coef))

    def multiply(self, other: "TSeries", coeff_product) -> "TSeries":
        if self.variables != other.variables:
            raise ValueError("variable sets differ")
        out = TSeries(self.variables, min(self.trunc, other.trunc))
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if sum(e) <= out.trunc:
                    out._add(e, coeff_product(c1, c2))
        return out

    def __add__(self, other: "TSeries") -> "TSeries":
        out = TSeries(self.variables, min(self.trunc, other.trunc), dict(self.coeffs))
        for e, c in other.coeffs.items():
            out._add(e, c)
        return out

    def coefficient(self, exps: tuple) -> LinComb:
        return self.coeffs.get(tuple(exps), LinComb())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TSeries) and self.coeffs == other.coeffs


def _block_word(letters: Sequence[Arg], ns: Sequence[int]) -> Word:
    out: List[Arg] = []
    for a, n in zip(letters, ns):
        out.append(a)
        out.extend([ZERO_ARG] * (n - 1))
    return Word(out)


def _i_bang(letters: Sequence[Arg], tvars: Sequence[str], all_vars: Sequence[str], trunc: int) -> TSeries:
    """I^![a_1..a_m | t] with t_i replaced by t_1 + ... + t_i, as a TSeries of words."""
    out = TSeries(all_vars, trunc)
    m = len(letters)
    partial = []
    acc = MultiPoly()
    for v in tvars:
        acc = acc + MultiPoly.var(v)
        partial.append(acc)
    for degs in itertools.product(range(trunc + 1), repeat=m):
        if sum(degs) > trunc:
            continue
        poly = MultiPoly.const(1)
        for p, d in zip(partial, degs):
            poly = poly * p**d
        out.add_poly_times(poly, LinComb.term(_block_word(letters, [d + 1 for d in degs])))
    return out


def second_shuffle_check(k: int, l: int, trunc: int) -> dict:
    """Coefficient-level check of the product rule for the I^! generating series.

    The left side multiplies coefficients with the word shuffle; the right side
    sums the generating series over all (k, l) shuffles of letters and variables.
    """
    if k + l > 4 or trunc > 6:
        raise ValueError("desk-scale limits: k + l <= 4, trunc <= 6")
    if k + l == 0:
        raise ValueError("nothing to check")
    letters = [atom(f"a{i + 1}") for i in range(k + l)]
    tv = [f"t{i + 1}" for i in range(k + l)]
    left = _i_bang(letters[:k], tv[:k], tv, trunc).multiply(_i_bang(letters[k:], tv[k:], tv, trunc), shuffle_lin)
    right = TSeries(tv, trunc)
    for pos in itertools.combinations(range(k + l), k):
        order: List[int] = [0] * (k + l)
        it1, it2 = iter(range(k)), iter(range(k, k + l))
        for i in range(k + l):
            order[i] = next(it1) if i in pos else next(it2)
        right = right + _i_bang([letters[j] for j in order], [tv[j] for j in order], tv, trunc)
    keys = set(left.coeffs) | set(right.coeffs)
    mismatches = [e for e in sorted(keys) if left.coefficient(e) != right.coefficient(e)]
    if not keys:
        raise ValueError("truncation too small to see any coefficient")
    return {"k": k, "l": l, "trunc": trunc, "coefficients": len(keys), "mismatches": mismatches, "ok": not mismatches}


def first_shuffle_generating_check(trunc: int) -> dict:
    """Li(x|t1) * Li(y|t2) = Li(x,y|t1,t2) + Li(y,x|t2,t1) + (Li(xy|t1) - Li(xy|t2))/(t1 - t2).

    Checked coefficient-wise: the left side multiplies coefficients by stuffle.
    """
    x, y = atom("x"), atom("y")
    tv = ("t1", "t2")
    out_l = TSeries(tv, trunc)
    out_r = TSeries(tv, trunc)
    for a in range(trunc + 1):
        for b in range(trunc + 1 - a):
            out_l._add((a, b), stuffle(((a + 1, x),), ((b + 1, y),)))
            r = LinComb({Composition(((a + 1, x), (b + 1, y))): 1, Composition(((b + 1, y), (a + 1, x))): 1})
            # (t1^(n-1) - t2^(n-1))/(t1 - t2) = sum_{a+b=n-2} t1^a t2^b
            r = r + LinComb.term(Composition(((a + b + 2, x * y),)))
            out_r._add((a, b), r)
    bad = [e for e in sorted(set(out_l.coeffs) | set(out_r.coeffs)) if out_l.coefficient(e) != out_r.coefficient(e)]
    return {"trunc": trunc, "coefficients": len(out_l.coeffs), "mismatches": bad, "ok": not bad}


# ---------------------------------------------------------------------------
# partial fractions


def _product(polys: Iterable[MultiPoly]) -> MultiPoly:
    out = MultiPoly.const(1)
    for p in polys:
        out = out * p
    return out


def partial_fraction_check(m: int) -> dict:
    """Clear denominators in the two partial-fraction identities in 2m variables.

    (A)  1/prod_i (k_i - t_i) = sum_j 1/((k_j - t_j) prod_{i != j} (k_ij - t_ij))
    (B)  sum_j 1/prod_{i != j} (k_ij - t_ij) = 0,   k_ij = k_i - k_j, t_ij = t_i - t_j
    """
    if not 2 <= m <= 4:
        raise ValueError("m must be in 2..4")
    k = [MultiPoly.var(f"k{i + 1}") for i in range(m)]
    t = [MultiPoly.var(f"t{i + 1}") for i in range(m)]

    def lin(i, j):
        return (k[i] - k[j]) - (t[i] - t[j])

    # canonical factors: single forms L_i and differences D_{ij} with i < j
    L = [k[i] - t[i] for i in range(m)]
    D = {(i, j): lin(i, j) for i in range(m) for j in range(m) if i < j}

    def denominators(term):
        # term: (list of L indices, list of (i, j) ordered pairs); returns sign and factor keys
        ls, pairs = term
        sign = 1
        keys = [("L", i) for i in ls]
        for i, j in pairs:
            if i < j:
                keys.append(("D", i, j))
            else:
                keys.append(("D", j, i))
                sign = -sign
        return sign, keys

    all_keys = [("L", i) for i in range(m)] + [("D",) + ij for ij in sorted(D)]
    value = {("L", i): L[i] for i in range(m)}
    value.update({("D",) + ij: p for ij, p in D.items()})

    def numerator(term) -> MultiPoly:
        sign, keys = denominators(term)
        rest = list(all_keys)
        for kk in keys:
            rest.remove(kk)
        return _product(value[kk] for kk in rest) * sign

    lhs_a = numerator((list(range(m)), []))
    rhs_a = MultiPoly()
    for j in range(m):
        rhs_a = rhs_a + numerator(([j], [(i, j) for i in range(m) if i != j]))
    sum_b = MultiPoly()
    for j in range(m):
        sum_b = sum_b + numerator(([], [(i, j) for i in range(m) if i != j]))
    return {"m": m, "identity_A": lhs_a == rhs_a, "identity_B": sum_b.is_zero(), "ok": lhs_a == rhs_a and sum_b.is_zero()}


def a3_identity_check(k: int, l: int) -> bool:
    """1/(p1(p1+p2)...) * 1/(p_{k+1}(...)) = sum over shuffles, by clearing denominators."""
    from .exact_algebra import RatFunc

    p = [MultiPoly.var(f"p{i + 1}") for i in range(k + l)]

    def chain(idx):
        out = RatFunc(1)
        acc = MultiPoly()
        for i in idx:
            acc = acc + p[i]
            out = out / RatFunc(acc)
        return out

    lhs = chain(range(k)) * chain(range(k, k + l))
    rhs = RatFunc(0)
    for pos in itertools.combinations(range(k + l), k):
        it1, it2 = iter(range(k)), iter(range(k, k + l))
        order = [next(it1) if i in pos else next(it2) for i in range(k + l)]
        rhs = rhs + chain(order)
    return lhs == rhs


def shuffle_count(u: Sequence, v: Sequence) -> int:
    return sum(_shuffle(tuple(u), tuple(v)).values())


def expected_shuffle_count(u: Sequence, v: Sequence) -> int:
    return comb(len(u) + len(v), len(u))
