"""Shuffle (canonical) and stuffle (power series) regularization.

Everything here is exact.  Lambda stands for log(eps) and T for the
regularized value of zeta(1) on the stuffle side.  Sign conventions:

* I(eps; 0; 1) = -Lambda, I(0; 1; 1 - eps) = Lambda (I-letters);
* in zeta-normalization, zeta(1) ~ -Lambda = T.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .arguments import ONE_ARG, ZERO_ARG, Arg, atom
from .exact_algebra import LinComb, format_rational
from .symbols import ISymbol, i_to_li
from .words_and_products import (
    Composition,
    Word,
    is_convergent,
    mzv_word,
    shuffle_counts,
    stuffle_counts,
    stuffle_lin,
    zeta_composition,
)

__all__ = [
    "AsymPoly",
    "RegValue",
    "extract_boundary",
    "regularized_word_poly",
    "shuffle_regularize",
    "shuffle_asymptotic",
    "shuffle_asymptotic_words",
    "insertion_regularize",
    "stuffle_regularize",
    "stuffle_asymptotic",
    "compare_regularizations",
    "comparison_series",
    "generating_regularization_check",
    "word_to_compositions",
]

_LOCK = threading.RLock()


class AsymPoly:
    """Polynomial in one formal variable with LinComb coefficients."""

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs: Optional[Dict[int, LinComb]] = None, var: str = "Lambda"):
        self.var = var
        self.coeffs: Dict[int, LinComb] = {d: c for d, c in (coeffs or {}).items() if c}

    def constant_term(self) -> LinComb:
        return self.coeffs.get(0, LinComb())

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def __getitem__(self, d: int) -> LinComb:
        return self.coeffs.get(d, LinComb())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AsymPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __add__(self, other: "AsymPoly") -> "AsymPoly":
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, LinComb()) + c
        return AsymPoly(out, self.var)

    def scale(self, c) -> "AsymPoly":
        return AsymPoly({d: v.scale(c) for d, v in self.coeffs.items()}, self.var)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs):
            lc = self.coeffs[d]
            raw = lc.raw()
            single = len(raw) == 1
            if single and not len(next(iter(raw))):
                body = format_rational(next(iter(raw.values())))  # pure number
            else:
                body = str(lc)
            if d == 0:
                parts.append(body)
            else:
                pw = self.var if d == 1 else f"{self.var}^{d}"
                parts.append(f"{body}*{pw}" if single else f"({body})*{pw}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __repr__ = __str__


class RegValue(LinComb):
    """LinComb of convergent compositions tagged with the regularization used."""

    __slots__ = ("kind",)

    def __init__(self, data=None, kind: str = "shuffle-reg"):
        super().__init__(data)
        self.kind = kind

    @classmethod
    def of(cls, lc: LinComb, kind: str) -> "RegValue":
        out = cls(kind=kind)
        out._d = dict(lc.raw())
        return out


# ---------------------------------------------------------------------------
# shuffle side: extraction of boundary letters

Extract = Dict[Tuple[int, int], Dict[tuple, Fraction]]


def _acc(d: Dict[tuple, Fraction], k: tuple, c) -> None:
    v = d.get(k, 0) + c
    if v:
        d[k] = v
    else:
        d.pop(k, None)


def _add_extract(out: Extract, e: Extract, c, shift: Tuple[int, int] = (0, 0)) -> None:
    for (i, j), lc in e.items():
        key = (i + shift[0], j + shift[1])
        tgt = out.setdefault(key, {})
        for w, x in lc.items():
            _acc(tgt, w, c * x)
        if not tgt:
            del out[key]


@lru_cache(maxsize=100_000)
def _extract(w: tuple, alpha: Arg, beta: Arg) -> Extract:
    # trailing beta block first
    k = 0
    while k < len(w) and w[len(w) - 1 - k] == beta:
        k += 1
    if k:
        v = w[: len(w) - k]
        out: Extract = {}
        _add_extract(out, _extract(v + (beta,) * (k - 1), alpha, beta), Fraction(1, k), (0, 1))
        for p in range(len(v)):
            _add_extract(out, _extract(v[:p] + (beta,) + v[p:] + (beta,) * (k - 1), alpha, beta), Fraction(-1, k))
        return out
    k = 0
    while k < len(w) and w[k] == alpha:
        k += 1
    if k:
        u = w[k:]
        out = {}
        _add_extract(out, _extract((alpha,) * (k - 1) + u, alpha, beta), Fraction(1, k), (1, 0))
        for p in range(1, len(u) + 1):
            _add_extract(out, _extract((alpha,) * (k - 1) + u[:p] + (alpha,) + u[p:], alpha, beta), Fraction(-1, k))
        return out
    return {(0, 0): {w: Fraction(1)}}


def extract_boundary(w: Sequence[Arg], alpha: Arg = ZERO_ARG, beta: Arg = ONE_ARG) -> Dict[Tuple[int, int], LinComb]:
    """Write w = sum_{i,j} E_ij * alpha^i * beta^j in the shuffle algebra.

    alpha^i, beta^j denote shuffle powers (so alpha^{sh i} = i! * alpha...alpha).
    Each E_ij is a LinComb of words neither starting with alpha nor ending
    with beta.
    """
    with _LOCK:
        e = _extract(tuple(w), alpha, beta)
    return {k: LinComb((Word(x), c) for x, c in v.items()) for k, v in e.items()}


def regularized_word_poly(w: Sequence[Arg], a_value: int = -1, b_value: int = 1) -> AsymPoly:
    """I(0; w; 1) with the boundary letters replaced by a_value*Lambda, b_value*Lambda.

    Returns a Lambda-polynomial with word coefficients.
    """
    out: Dict[int, LinComb] = {}
    for (i, j), lc in extract_boundary(w).items():
        c = Fraction(a_value) ** i * Fraction(b_value) ** j
        out[i + j] = out.get(i + j, LinComb()) + lc.scale(c)
    return AsymPoly(out)


def word_to_compositions(lc: LinComb) -> LinComb:
    """Convergent words I(0; w; 1) rewritten as Li-compositions."""
    out = LinComb()
    for w, c in lc.raw().items():
        if not w:
            out.add_term(Composition(), c)
            continue
        sign, comp = i_to_li(ISymbol(ZERO_ARG, tuple(w), ONE_ARG))
        out.add_term(comp, sign * c)
    return out


def _as_word(x: Union[Word, Composition, Sequence]) -> Tuple[Word, int]:
    """Word and zeta-normalization sign (-1)^depth."""
    if isinstance(x, Composition):
        w = mzv_word(x)
        return w, (-1) ** len(x)
    w = Word(x)
    if not w:
        raise ValueError("empty word")
    return w, (-1) ** w.depth


def shuffle_asymptotic_words(w: Sequence[Arg]) -> AsymPoly:
    """Lambda-expansion of I(0; w; 1) (cut off at eps and 1 - eps) in convergent words."""
    return regularized_word_poly(Word(w))


def shuffle_asymptotic(x: Union[Word, Composition]) -> AsymPoly:
    """Lambda-expansion of a word (zeta-normalized) or a composition.

    >>> str(shuffle_asymptotic(zeta_composition(1, 1)))
    '(1/2)*Lambda^2'
    """
    w, sign = _as_word(x)
    poly = shuffle_asymptotic_words(w)
    return AsymPoly({d: word_to_compositions(lc).scale(sign) for d, lc in poly.coeffs.items()})


def shuffle_regularize(x: Union[Word, Composition]) -> RegValue:
    """Constant term of :func:`shuffle_asymptotic`."""
    w, sign = _as_word(x)
    e = extract_boundary(w)
    return RegValue.of(word_to_compositions(e.get((0, 0), LinComb())).scale(sign), "shuffle-reg")


def insertion_regularize(x: Union[Word, Composition]) -> RegValue:
    """Independent route: strip 0^p and 1^q, then insert them back.

    The p zeros go anywhere after the first letter of the core, the q ones
    anywhere before its last letter; sign (-1)^(p+q).  Only p, q <= 2,
    and 0^p 1^q with p, q > 0 (empty core) is rejected.
    """
    w, sign = _as_word(x)
    p = 0
    while p < len(w) and w[p].is_zero:
        p += 1
    q = 0
    while q < len(w) - p and w[len(w) - 1 - q].is_one:
        q += 1
    if p > 2 or q > 2:
        raise ValueError("insertion oracle supports p, q <= 2")
    u = w[p : len(w) - q]
    if not u:
        if p and q:
            raise ValueError("insertion oracle needs a nonempty core")
        return RegValue(kind="shuffle-reg")
    n = len(u)
    tagged_u = tuple(("u", i) for i in range(n))
    zeros = tuple(("z", i) for i in range(p))
    ones = tuple(("o", i) for i in range(q))
    words = LinComb()
    for t1, c1 in shuffle_counts(tagged_u, zeros).items():
        for t, c2 in shuffle_counts(t1, ones).items():
            first = t.index(("u", 0))
            last = t.index(("u", n - 1))
            if any(t.index(z) < first for z in zeros) or any(t.index(o) > last for o in ones):
                continue
            letters = tuple(u[k[1]] if k[0] == "u" else (ZERO_ARG if k[0] == "z" else ONE_ARG) for k in t)
            words.add_term(Word(letters), c1 * c2)
    out = word_to_compositions(words).scale(sign * (-1) ** (p + q))
    return RegValue.of(out, "shuffle-reg")


# ---------------------------------------------------------------------------
# stuffle side

TPoly = Dict[int, Dict[tuple, Fraction]]


def _split_trailing(c: tuple) -> Tuple[tuple, int]:
    j = 0
    while j < len(c) and c[len(c) - 1 - j][0] == 1 and c[len(c) - 1 - j][1].is_one:
        j += 1
    return c[: len(c) - j], j


@lru_cache(maxsize=100_000)
def _stuffle_poly(c: tuple) -> TPoly:
    head, j = _split_trailing(c)
    if j == 0:
        return {0: {c: Fraction(1)}}
    one = ((1, ONE_ARG),)
    prev = head + one * (j - 1)
    out: TPoly = {}
    for d, lc in _stuffle_poly(prev).items():
        tgt = out.setdefault(d + 1, {})
        for k, x in lc.items():
            _acc(tgt, k, x / j)
    for w, cnt in stuffle_counts(prev, one).items():
        if w == c:
            continue  # these are the j copies of c itself
        for d, lc in _stuffle_poly(w).items():
            tgt = out.setdefault(d, {})
            for k, x in lc.items():
                _acc(tgt, k, -cnt * x / j)
    return {d: v for d, v in out.items() if v}


def stuffle_asymptotic(c: Composition) -> AsymPoly:
    """Polynomial in T (the stuffle-regularized zeta(1)) with convergent coefficients.

    The assignment zeta(1) -> T is extended as a quasi-shuffle homomorphism.
    """
    c = Composition(c)
    with _LOCK:
        poly = _stuffle_poly(tuple(c))
    return AsymPoly({d: LinComb((Composition(k), x) for k, x in v.items()) for d, v in poly.items()}, "T")


def stuffle_regularize(c: Composition) -> RegValue:
    """Constant term of :func:`stuffle_asymptotic`.

    >>> str(stuffle_regularize(zeta_composition(1, 1)))
    '-1/2*zeta(2)'
    """
    return RegValue.of(stuffle_asymptotic(c).constant_term(), "stuffle-reg")


def _a_prime_series(order: int) -> List[LinComb]:
    """Coefficients of A'(u) = exp(sum_{n>=2} (-1)^(n-1) zeta(n) u^n / n) up to u^order.

    Products of zeta values are expanded by stuffle.
    """
    log_terms = [LinComb() for _ in range(order + 1)]
    for n in range(2, order + 1):
        log_terms[n] = LinComb.term(zeta_composition(n), Fraction((-1) ** (n - 1), n))
    coeffs = [LinComb() for _ in range(order + 1)]
    coeffs[0] = LinComb.term(Composition(), 1)
    # exp via f' = g' f: k a_k = sum_n n g_n a_{k-n}
    for k in range(1, order + 1):
        acc = LinComb()
        for n in range(2, k + 1):
            if log_terms[n]:
                acc = acc + stuffle_lin(log_terms[n], coeffs[k - n]).scale(n)
        coeffs[k] = acc.scale(Fraction(1, k))
    return coeffs


def comparison_series(order: int) -> List[LinComb]:
    """Public view of the coefficients [u^k] A'(u), k <= order."""
    return _a_prime_series(order)


def compare_regularizations(c: Composition) -> LinComb:
    """stuffle_regularize(c) - shuffle_regularize(c) as lower-depth combination.

    Computed through the map e^{Tu} -> A'(u) e^{Tu} applied to the shuffle
    expansion written in T = -Lambda.
    """
    c = Composition(c)
    sh = shuffle_asymptotic(c)
    order = sh.degree
    ap = _a_prime_series(max(order, 0))
    out = LinComb()
    for d, lc in sh.coeffs.items():
        if d < 2:
            continue
        a_d = lc.scale((-1) ** d)  # Lambda^d = (-T)^d
        out = out + stuffle_lin(a_d, ap[d]).scale(factorial(d))
    return out


# ---------------------------------------------------------------------------
# regularized generating series


def generating_regularization_check(trunc: int = 3, m: int = 1) -> dict:
    """Coefficient-wise check of

        I(0; a_1..a_m; a_{m+1} | t_0; t_1..t_m)
            = exp(t_0 log a_{m+1}) * I(a_1: ... : a_{m+1} | t_1 - t_0, ..., t_m - t_0)

    with formal a_i.  Left side: leading zeros extracted with 0 -> L = log a_{m+1}
    (tangent +d/dt at 0, Lambda dropped).  Right side: binomial expansion.
    Both sides live in (words) x Q[L]; coefficients up to total t-degree trunc.
    """
    from math import comb

    if trunc > 5:
        raise ValueError("trunc must be <= 5")
    letters = [atom(f"a{i}") for i in range(1, m + 1)]
    end = atom(f"a{m + 1}")

    def block(ns: Sequence[int]) -> Word:
        out: List[Arg] = []
        for a, n in zip(letters, ns):
            out.append(a)
            out.extend([ZERO_ARG] * n)
        return Word(out)

    def exps(total: int, k: int):
        if k == 0:
            if total == 0:
                yield ()
            return
        for e in range(total + 1):
            for rest in exps(total - e, k - 1):
                yield (e,) + rest

    # key: (exponent tuple (e0, e1..em), L-degree) -> LinComb of words
    lhs: Dict[tuple, LinComb] = {}
    rhs: Dict[tuple, LinComb] = {}

    def put(d, key, lc):
        if lc:
            d[key] = d.get(key, LinComb()) + lc

    for total in range(trunc + 1):
        for e in exps(total, m + 1):
            w = Word([ZERO_ARG] * e[0]) + block(e[1:])
            for (i, j), lc in extract_boundary(w, ZERO_ARG, end).items():
                if j:
                    raise AssertionError("unexpected trailing divergence")
                put(lhs, (e, i), lc.scale(Fraction(1)))
    # right side: sum_{k, f} L^k t0^k/k! * I(block f) * prod (t_i - t0)^{f_i}
    for total in range(trunc + 1):
        for f in exps(total, m):
            wf = block(f)
            # expand prod (t_i - t0)^{f_i}
            def expand(idx, t0pow, coeff, te):
                if idx == m:
                    yield t0pow, coeff, te
                    return
                for r in range(f[idx] + 1):
                    yield from expand(idx + 1, t0pow + r, coeff * comb(f[idx], r) * (-1) ** r, te + (f[idx] - r,))

            for t0pow, coeff, te in expand(0, 0, 1, ()):
                for k in range(trunc + 1 - sum(te) - t0pow):
                    e = (t0pow + k,) + te
                    put(rhs, (e, k), LinComb.term(wf, Fraction(coeff, factorial(k))))
    keys = set(lhs) | set(rhs)
    mismatches = [k for k in keys if lhs.get(k, LinComb()) != rhs.get(k, LinComb())]
    return {"ok": not mismatches, "checked": len(keys), "mismatches": sorted(mismatches)[:10], "m": m, "trunc": trunc}
