"""I-symbols I(a0; a1..am; a_end), conversions to Li-notation and words, and
the path identities (composition, reversal, shuffle at fixed endpoints).

Also hosts the weight-one logarithm map: a weight-one symbol I(a0; a1; a2)
stands for log((a2 - a1)/(a0 - a1)), which we record as a vector in the
multiplicative group tensored with Q.  Torsion (roots of unity, signs) dies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .arguments import ONE_ARG, ZERO_ARG, Arg, parse_arg
from .exact_algebra import LinComb
from .words_and_products import Composition, Word, mzv_word, shuffle_counts

__all__ = [
    "ISymbol",
    "UNIT",
    "isym",
    "canonicalize",
    "canonical_or_none",
    "li_to_i",
    "i_to_li",
    "word_encoding",
    "path_compose",
    "reverse",
    "shuffle_fixed_endpoints",
    "log_vector",
    "difference_vector",
    "cyclotomic_vector",
]


@dataclass(frozen=True)
class ISymbol:
    a0: Arg
    middle: Tuple[Arg, ...]
    a_end: Arg

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.a0, self.middle, self.a_end)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, ISymbol):
            return NotImplemented
        return self._hash == other._hash and self.a0 == other.a0 and self.middle == other.middle and self.a_end == other.a_end

    @property
    def weight(self) -> int:
        return len(self.middle)

    @property
    def depth(self) -> int:
        return sum(1 for a in self.middle if not a.is_zero)

    @property
    def is_unit(self) -> bool:
        return not self.middle

    def __str__(self) -> str:
        return _sym_str(self)

    def __repr__(self) -> str:
        return f"ISymbol({self})"

    def __lt__(self, other: "ISymbol") -> bool:
        return str(self) < str(other)


@lru_cache(maxsize=None)
def _sym_str(s: ISymbol) -> str:
    if not s.middle:
        return "1"
    return f"I({s.a0}; {','.join(str(a) for a in s.middle)}; {s.a_end})"


UNIT = ISymbol(ZERO_ARG, (), ZERO_ARG)


def _arg(x) -> Arg:
    return x if isinstance(x, Arg) else parse_arg(str(x))


def isym(a0, middle: Sequence, a_end) -> ISymbol:
    """Convenience constructor accepting strings or ints for arguments."""
    return ISymbol(_arg(a0), tuple(_arg(a) for a in middle), _arg(a_end))


def canonical_or_none(s: ISymbol) -> Optional[ISymbol]:
    """Canonical symbol, UNIT for weight 0, or None when it vanishes."""
    if not s.middle:
        return UNIT
    if s.a0 == s.a_end:
        return None
    return s


def canonicalize(s: ISymbol) -> LinComb:
    c = canonical_or_none(s)
    return LinComb() if c is None else LinComb.term(c)


# ---------------------------------------------------------------------------
# Li <-> I conversions


def li_to_i(c: Composition) -> Tuple[int, ISymbol]:
    """Li_c(x) = sign * I(0; a_1, 0.., a_m, 0..; 1) with a_i = (x_i...x_m)^{-1}."""
    for _, x in c:
        if x.is_zero:
            raise TypeError("Li arguments must be invertible")
    return (-1) ** len(c), ISymbol(ZERO_ARG, tuple(mzv_word(c)), ONE_ARG)


def i_to_li(s: ISymbol) -> Tuple[int, Composition]:
    """Inverse of li_to_i for I(0; a_1, 0.., ...; a_end) with a_1 != 0."""
    if not s.a0.is_zero:
        raise ValueError("start point must be 0")
    if not s.middle or s.middle[0].is_zero:
        raise ValueError("first letter must be non-zero")
    if s.a_end.is_zero:
        raise ValueError("end point must be non-zero")
    letters: List[Arg] = []
    ns: List[int] = []
    for a in s.middle:
        if a.is_zero:
            ns[-1] += 1
        else:
            letters.append(a)
            ns.append(1)
    xs = [letters[i + 1] / letters[i] for i in range(len(letters) - 1)] + [s.a_end / letters[-1]]
    return (-1) ** len(letters), Composition(zip(ns, xs))


def word_encoding(c: Composition) -> Word:
    """Iterated-integral word of an MZV: letters (1) for dt/(t-1) and 0 for dt/t.

    zeta(c) = (-1)^depth * I(0; word; 1).
    """
    if not c.is_mzv:
        raise ValueError("word encoding is for level-1 compositions only")
    return mzv_word(c)


# ---------------------------------------------------------------------------
# path identities


def path_compose(s: ISymbol, midpoint: Arg) -> LinComb:
    """sum_k I(a0; a_1..a_k; c) * I(c; a_{k+1}..a_m; a_end) as a LinComb of pairs."""
    out = LinComb()
    m = s.weight
    for k in range(m + 1):
        left = canonical_or_none(ISymbol(s.a0, s.middle[:k], midpoint))
        right = canonical_or_none(ISymbol(midpoint, s.middle[k:], s.a_end))
        if left is None or right is None:
            continue
        out.add_term((left, right), 1)
    return out


def reverse(s: ISymbol) -> LinComb:
    """I(a0; a_1..a_m; a_end) = (-1)^m I(a_end; a_m..a_1; a0)."""
    r = canonical_or_none(ISymbol(s.a_end, tuple(reversed(s.middle)), s.a0))
    if r is None:
        return LinComb()
    return LinComb.term(r, (-1) ** s.weight)


def shuffle_fixed_endpoints(s: ISymbol, t: ISymbol) -> LinComb:
    if s.is_unit:
        return canonicalize(t)
    if t.is_unit:
        return canonicalize(s)
    if s.a0 != t.a0 or s.a_end != t.a_end:
        raise ValueError("shuffle needs matching endpoints")
    out = LinComb()
    for w, c in shuffle_counts(s.middle, t.middle).items():
        r = canonical_or_none(ISymbol(s.a0, w, s.a_end))
        if r is not None:
            out.add_term(r, c)
    return out


# ---------------------------------------------------------------------------
# weight-one logarithms as vectors in (multiplicative group) (x) Q

Vector = Dict[tuple, Fraction]


def _vadd(acc: Vector, v: Vector, c=1) -> None:
    for k, x in v.items():
        y = acc.get(k, 0) + c * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)


def _factor_int(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _rational_vector(q: Fraction) -> Vector:
    q = abs(Fraction(q))
    v: Vector = {}
    for p, e in _factor_int(q.numerator).items():
        v[("p", p)] = Fraction(e)
    for p, e in _factor_int(q.denominator).items():
        v[("p", p)] = v.get(("p", p), 0) - e
    return {k: x for k, x in v.items() if x}


def _arg_vector(a: Arg) -> Vector:
    v = _rational_vector(a.coeff)
    for n, e in a.mono:
        v[("x", n)] = Fraction(e)
    return v


@lru_cache(maxsize=None)
def _cyclotomic_system(level: int):
    """Row-reduced distribution relations among g_q = [1 - e(q)], q in (1/level)Z/Z.

    Columns: generators with larger denominators first, then rational primes.
    Returns a map from generator to its normal-form vector.
    """
    qs = [Fraction(k, level) for k in range(1, level)]
    primes = sorted(_factor_int(level))
    cols: List[tuple] = sorted((("g", q) for q in qs), key=lambda c: (-c[1].denominator, c[1]))
    cols += [("p", p) for p in primes]
    index = {c: i for i, c in enumerate(cols)}
    rows: List[Dict[int, Fraction]] = []

    def g(q: Fraction) -> int:
        q = q - (q.numerator // q.denominator)
        return index[("g", q)]

    for q in qs:  # evenness
        r = {g(q): Fraction(1)}
        r[g(-q)] = r.get(g(-q), 0) - 1
        rows.append({c: x for c, x in r.items() if x})
    for l in range(2, level + 1):
        if level % l:
            continue
        sub = level // l
        for k in range(sub):
            q = Fraction(k, sub)
            r: Dict[int, Fraction] = {}
            for j in range(l):
                qq = (q + j) / l
                if qq == 0:
                    continue
                r[g(qq)] = r.get(g(qq), 0) + 1
            if q == 0:
                for p, e in _factor_int(l).items():
                    r[index[("p", p)]] = r.get(index[("p", p)], 0) - e
            else:
                r[g(q)] = r.get(g(q), 0) - 1
            rows.append({c: x for c, x in r.items() if x})
    pivots: Dict[int, Dict[int, Fraction]] = {}
    for r in rows:
        r = {c: Fraction(x) for c, x in r.items()}
        for pc in sorted(pivots):
            if pc in r:
                f = r[pc]
                for c, x in pivots[pc].items():
                    y = r.get(c, 0) - f * x
                    if y:
                        r[c] = y
                    else:
                        r.pop(c, None)
        if not r:
            continue
        lead = min(r)
        f = r[lead]
        r = {c: x / f for c, x in r.items()}
        for pc, pr in pivots.items():
            if lead in pr:
                h = pr[lead]
                for c, x in r.items():
                    y = pr.get(c, 0) - h * x
                    if y:
                        pr[c] = y
                    else:
                        pr.pop(c, None)
        pivots[lead] = r
    nf: Dict[Fraction, Vector] = {}
    for q in qs:
        c = g(q)
        if c in pivots:
            vec = {cols[k]: -x for k, x in pivots[c].items() if k != c}
        else:
            vec = {cols[c]: Fraction(1)}
        nf[q] = vec
    return nf


def cyclotomic_vector(q: Fraction) -> Vector:
    """Normal form of [1 - e(q)] modulo torsion, for q not an integer."""
    q = Fraction(q)
    q = q - (q.numerator // q.denominator)
    if q == 0:
        raise ValueError("1 - e(0) = 0")
    return dict(_cyclotomic_system(q.denominator)[q])


def _first_exponent_negative(a: Arg) -> bool:
    return a.mono[0][1] < 0


def one_minus_vector(r: Arg) -> Vector:
    """Vector of [1 - r] for r != 0, 1."""
    if r.is_zero:
        return {}
    if r.is_one:
        raise ValueError("1 - 1 = 0")
    if r.mono:
        g = 0
        for _, e in r.mono:
            g = gcd(g, abs(e))
        if g > 1 and r.coeff == 1:
            base = Arg.make(1, 0, {n: e // g for n, e in r.mono})
            v: Vector = {}
            for j in range(g):
                _vadd(v, one_minus_vector(base * Arg.make(1, (r.rot + j) / g)))
            return v
        if _first_exponent_negative(r):
            v = _arg_vector(r)
            _vadd(v, one_minus_vector(r.inverse()))
            return v
        return {("bin", str(r)): Fraction(1)}
    if r.rot == 0:
        return _rational_vector(1 - r.coeff)
    if r.rot == Fraction(1, 2):
        return _rational_vector(1 + r.coeff)
    if r.coeff == 1:
        return cyclotomic_vector(r.rot)
    if r.coeff < 1:
        return {("alg", str(r)): Fraction(1)}
    v = _arg_vector(r)
    _vadd(v, one_minus_vector(r.inverse()))
    return v


def difference_vector(a: Arg, b: Arg) -> Optional[Vector]:
    """Vector of [a - b]; None when a = b."""
    if a == b:
        return None
    if b.is_zero:
        return _arg_vector(a)
    if a.is_zero:
        return _arg_vector(b)
    v = _arg_vector(a)
    _vadd(v, one_minus_vector(b / a))
    return v


@lru_cache(maxsize=200_000)
def _log_vector(a0: Arg, a1: Arg, a2: Arg) -> Tuple[Tuple[tuple, Fraction], ...]:
    v: Vector = {}
    top = difference_vector(a2, a1)
    if top is not None:
        _vadd(v, top)
    bot = difference_vector(a0, a1)
    if bot is not None:
        _vadd(v, bot, -1)
    return tuple(sorted(v.items(), key=lambda kv: str(kv[0])))


def log_vector(s: ISymbol) -> Vector:
    """I(a0; a1; a2) = log((a2 - a1)/(a0 - a1)) with vanishing factors dropped."""
    if s.weight != 1:
        raise ValueError("log_vector needs a weight-one symbol")
    if s.a0 == s.a_end:
        return {}
    return dict(_log_vector(s.a0, s.middle[0], s.a_end))


def is_torsion_weight_one(s: ISymbol) -> bool:
    return s.weight == 1 and not log_vector(s)
