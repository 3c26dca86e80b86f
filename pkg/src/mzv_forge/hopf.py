"""Hopf structure on polynomials in I-symbols.

Elements are LinCombs of *monomials*: sorted tuples of canonical non-unit
ISymbols (the empty tuple is 1).  Tensors are LinCombs of (left, right)
monomial pairs.  Two quotient hooks act on every factor the coproduct
produces:

* torsion: a weight-one symbol whose logarithm is torsion becomes 0
  (e.g. I(0;1;1), I(0;0;1), I(0;w1/6;1));
* level N: I(a; 0^n; b) with a, b in mu_N u {0} becomes 0.

Both generate Hopf ideals, so coassociativity survives.

For comparisons that need relations between symbols (inversion, shuffle
of logarithms, ...) two further maps are provided: the full symbol
``symbol_map`` into tensor powers of (multiplicative group) (x) Q, and at
level N the normal form ``level_normal_form`` into convergent words.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .arguments import ONE_ARG, ZERO_ARG, Arg, atom, root
from .exact_algebra import LinComb, format_rational
from .regularization import extract_boundary
from .symbols import UNIT, ISymbol, canonical_or_none, li_to_i, log_vector
from .words_and_products import Word, composition, shuffle_counts

__all__ = [
    "Hooks",
    "DEFAULT_HOOKS",
    "Monomial",
    "element",
    "mono_mul",
    "mono_weight",
    "mono_str",
    "weight_of",
    "multiply",
    "format_element",
    "format_tensor",
    "format_wedge",
    "coproduct",
    "coproduct_element",
    "reduced_coproduct",
    "counit",
    "antipode",
    "cobracket",
    "cojacobi_residual",
    "depth_filtration",
    "symbol_map",
    "symbol_of_element",
    "tensor_symbol",
    "level_normal_form",
    "eulerian_projection",
    "coproduct_li_series",
    "power_series_check",
    "depth_one_series_check",
    "printed_double_displays",
    "double_display_check",
    "s3_trilog_symbol_check",
    "printed_cobracket_report",
    "coassociativity_residual",
    "counit_residual",
    "antipode_residual",
    "algebra_map_residual",
    "random_symbol",
    "NO_HOOKS",
]

Monomial = Tuple[ISymbol, ...]
ONE: Monomial = ()


@dataclass(frozen=True)
class Hooks:
    torsion: bool = True
    level: Optional[int] = None

    def in_level(self, a: Arg) -> bool:
        if a.is_zero:
            return True
        return self.level is not None and a.is_root_of_unity and self.level % a.level == 0

    def factor(self, s: ISymbol) -> Optional[ISymbol]:
        """Canonical factor, UNIT, or None when it vanishes in the quotient."""
        c = canonical_or_none(s)
        if c is None or not c.middle:
            return c
        if self.torsion and c.weight == 1 and not log_vector(c):
            return None
        if self.level is not None and c.depth == 0 and self.in_level(c.a0) and self.in_level(c.a_end):
            return None
        return c


DEFAULT_HOOKS = Hooks()
NO_HOOKS = Hooks(torsion=False, level=None)


# ---------------------------------------------------------------------------
# monomials and elements


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, key=str))


def mono_weight(m: Monomial) -> int:
    return sum(s.weight for s in m)


def mono_str(m: Monomial) -> str:
    return "1" if not m else "*".join(str(s) for s in m)


def _tensor_str(k: Tuple[Monomial, Monomial]) -> str:
    return f"[{mono_str(k[0])} | {mono_str(k[1])}]"


def element(s: ISymbol, hooks: Hooks = DEFAULT_HOOKS) -> LinComb:
    c = hooks.factor(s)
    if c is None:
        return LinComb()
    return LinComb.term(ONE if c is UNIT else (c,))


def weight_of(x: LinComb) -> Optional[int]:
    ws = {mono_weight(m) for m in x.keys()}
    return ws.pop() if len(ws) == 1 else None


def multiply(x: LinComb, y: LinComb) -> LinComb:
    out = LinComb()
    for a, ca in x.raw().items():
        for b, cb in y.raw().items():
            out.add_term(mono_mul(a, b), ca * cb)
    return out


def format_element(x: LinComb) -> str:
    return x.format(mono_str)


def format_tensor(t: LinComb) -> str:
    """One line per term, ``c * [left | right]``, in canonical order."""
    if not t:
        return "0"
    lines = []
    for k, c in t.items(_tensor_str):
        lines.append(f"{c} * {_tensor_str(k)}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# coproduct


@lru_cache(maxsize=200_000)
def _coproduct_symbol(s: ISymbol, hooks: Hooks) -> Tuple[Tuple[Tuple[Monomial, Monomial], int], ...]:
    pts = (s.a0,) + s.middle + (s.a_end,)
    m = s.weight
    out: Dict[Tuple[Monomial, Monomial], int] = {}
    for k in range(m + 1):
        for sub in combinations(range(1, m + 1), k):
            left = hooks.factor(ISymbol(s.a0, tuple(pts[i] for i in sub), s.a_end))
            if left is None:
                continue
            idx = (0,) + sub + (m + 1,)
            right: List[ISymbol] = []
            dead = False
            for p in range(len(idx) - 1):
                f = hooks.factor(ISymbol(pts[idx[p]], pts[idx[p] + 1 : idx[p + 1]], pts[idx[p + 1]]))
                if f is None:
                    dead = True
                    break
                if f is not UNIT:
                    right.append(f)
            if dead:
                continue
            key = (ONE if left is UNIT else (left,), tuple(sorted(right, key=str)))
            out[key] = out.get(key, 0) + 1
    return tuple((k, c) for k, c in out.items() if c)


def coproduct(s: ISymbol, hooks: Hooks = DEFAULT_HOOKS) -> LinComb:
    """Coproduct of one symbol: sum over subsequences of the middle letters.

    >>> from .symbols import isym
    >>> print(format_tensor(coproduct(isym("a0", ["a1"], "a2"))))
    1 * [1 | I(a0; a1; a2)]
    1 * [I(a0; a1; a2) | 1]
    """
    c = hooks.factor(s)
    if c is None:
        return LinComb()
    if c is UNIT:
        return LinComb.term((ONE, ONE))
    return LinComb(_coproduct_symbol(c, hooks))


def _coproduct_raw(s: ISymbol, hooks: Hooks):
    c = hooks.factor(s)
    if c is None:
        return ()
    if c is UNIT:
        return (((ONE, ONE), 1),)
    return _coproduct_symbol(c, hooks)


def _coproduct_mono_raw(m: Monomial, hooks: Hooks) -> Dict[Tuple[Monomial, Monomial], int]:
    out: Dict[Tuple[Monomial, Monomial], int] = {(ONE, ONE): 1}
    for s in m:
        nxt: Dict[Tuple[Monomial, Monomial], int] = {}
        for (l1, r1), c1 in out.items():
            for (l2, r2), c2 in _coproduct_raw(s, hooks):
                k = (mono_mul(l1, l2), mono_mul(r1, r2))
                nxt[k] = nxt.get(k, 0) + c1 * c2
        out = {k: v for k, v in nxt.items() if v}
    return out


def _coproduct_mono(m: Monomial, hooks: Hooks) -> LinComb:
    return LinComb(_coproduct_mono_raw(m, hooks))


def coproduct_element(x: LinComb, hooks: Hooks = DEFAULT_HOOKS, threads: int = 1) -> LinComb:
    """Coproduct extended multiplicatively and linearly.

    With threads > 1 the per-monomial work is farmed out; partial results are
    merged in the input's canonical order, so output is identical.
    """
    monos = [m for m, _ in x.items(mono_str)]
    if threads > 1 and len(monos) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda m: _coproduct_mono(m, hooks), monos))
    else:
        parts = [_coproduct_mono(m, hooks) for m in monos]
    out = LinComb()
    for m, part in zip(monos, parts):
        c = x[m]
        for k, v in part.raw().items():
            out.add_term(k, c * v)
    return out


def reduced_coproduct(x: Union[ISymbol, LinComb], hooks: Hooks = DEFAULT_HOOKS) -> LinComb:
    """Delta'(x) = Delta(x) - x (x) 1 - 1 (x) x for x without constant term."""
    if isinstance(x, ISymbol):
        x = element(x, hooks)
    full = coproduct_element(x, hooks)
    return LinComb((k, c) for k, c in full.raw().items() if k[0] and k[1])


def counit(x: LinComb) -> Fraction:
    return x[ONE]


# ---------------------------------------------------------------------------
# antipode

_ANTIPODE_LOCK = threading.RLock()


@lru_cache(maxsize=100_000)
def _antipode_symbol(s: ISymbol, hooks: Hooks) -> LinComb:
    # S(s) = -s - sum' S(l) r
    out = LinComb.term((s,), -1)
    for (l, r), c in coproduct(s, hooks).raw().items():
        if not l or not r:
            continue
        out = out - multiply(_antipode_mono(l, hooks), LinComb.term(r)).scale(c)
    return out


def _antipode_mono(m: Monomial, hooks: Hooks) -> LinComb:
    out = LinComb.term(ONE)
    for s in m:
        out = multiply(out, _antipode_symbol(s, hooks))
    return out


def antipode(x: Union[ISymbol, LinComb], hooks: Hooks = DEFAULT_HOOKS) -> LinComb:
    """Antipode, solved weight by weight from mu (S x id) Delta = unit counit."""
    if isinstance(x, ISymbol):
        x = element(x, hooks)
    out = LinComb()
    with _ANTIPODE_LOCK:
        for m, c in x.raw().items():
            if not m:
                out.add_term(ONE, c)
                continue
            if mono_weight(m) == 0:
                raise ValueError("weight-0 component must be scalar")
            for k, v in _antipode_mono(m, hooks).raw().items():
                out.add_term(k, c * v)
    return out


# ---------------------------------------------------------------------------
# cobracket on indecomposables


def _wedge(a: ISymbol, b: ISymbol) -> Optional[Tuple[Tuple[ISymbol, ISymbol], int]]:
    if a == b:
        return None
    sa, sb = str(a), str(b)
    return ((a, b), 1) if sa < sb else ((b, a), -1)


def format_wedge(t: LinComb) -> str:
    """One line per wedge term, as produced by :func:`cobracket`."""
    return "\n".join(f"{format_rational(c)} * [{l} ^ {r}]" for (l, r), c in t.items())


def cobracket(s: Union[ISymbol, LinComb], hooks: Hooks = DEFAULT_HOOKS) -> LinComb:
    """delta = (pi x pi) Delta' antisymmetrized; keys are ordered pairs (a, b) meaning a ^ b."""
    if isinstance(s, ISymbol):
        s = element(s, hooks)
    out = LinComb()
    for m, c0 in s.raw().items():
        if len(m) != 1:
            continue  # products are zero in the indecomposables
        for (l, r), c in reduced_coproduct(m[0], hooks).raw().items():
            if len(l) != 1 or len(r) != 1:
                continue
            w = _wedge(l[0], r[0])
            if w is not None:
                out.add_term(w[0], c0 * c * w[1])
    return out


def _wedge_lin(x: LinComb) -> LinComb:
    """Antisymmetrize a LinComb of ordered pairs into wedge keys."""
    out = LinComb()
    for (a, b), c in x.raw().items():
        w = _wedge(a, b)
        if w is not None:
            out.add_term(w[0], c * w[1])
    return out


def cojacobi_residual(s: ISymbol, hooks: Hooks = DEFAULT_HOOKS) -> LinComb:
    """(delta ^ id - id ^ delta) delta(s) in the third exterior power; should be 0."""
    out = LinComb()
    for (a, b), c in cobracket(s, hooks).raw().items():
        for (x, y), d in cobracket(a, hooks).raw().items():
            _wedge3(out, (x, y, b), c * d)
        for (x, y), d in cobracket(b, hooks).raw().items():
            _wedge3(out, (a, x, y), -c * d)
    return out


def _wedge3(out: LinComb, t: Tuple[ISymbol, ISymbol, ISymbol], c) -> None:
    if len(set(t)) < 3:
        return
    order = sorted(range(3), key=lambda i: str(t[i]))
    # parity of the sorting permutation
    perm = list(order)
    sign = 1
    for i in range(3):
        for j in range(i + 1, 3):
            if perm[i] > perm[j]:
                sign = -sign
    out.add_term(tuple(t[i] for i in order), sign * c)


def depth_filtration(x: Union[ISymbol, LinComb]) -> int:
    if isinstance(x, ISymbol):
        return x.depth
    return max((max((s.depth for s in m), default=0) for m in x.keys()), default=0)


# ---------------------------------------------------------------------------
# symbol map into tensor powers of (multiplicative group) (x) Q


def _key_str(k: tuple) -> str:
    return ":".join(str(x) for x in k)


@lru_cache(maxsize=200_000)
def _symbol(s: ISymbol) -> Tuple[Tuple[tuple, Fraction], ...]:
    if s.weight == 1:
        return tuple(((k,), c) for k, c in log_vector(s).items())
    pts = (s.a0,) + s.middle + (s.a_end,)
    out: Dict[tuple, Fraction] = {}
    m = s.weight
    for i in range(1, m + 1):
        v = log_vector(ISymbol(pts[i - 1], (pts[i],), pts[i + 1])) if pts[i - 1] != pts[i + 1] else {}
        if not v:
            continue
        left = canonical_or_none(ISymbol(s.a0, pts[1:i] + pts[i + 1 : m + 1], s.a_end))
        if left is None:
            continue
        for t, c in _symbol(left):
            for k, x in v.items():
                key = t + (k,)
                out[key] = out.get(key, 0) + c * x
    return tuple((k, c) for k, c in out.items() if c)


def symbol_map(s: ISymbol) -> LinComb:
    """Full symbol: iterate the (n-1, 1) part of the coproduct down to weight one."""
    c = canonical_or_none(s)
    if c is None:
        return LinComb()
    if c is UNIT:
        return LinComb.term(())
    return LinComb(_symbol(c))


def _symbol_mono(m: Monomial) -> LinComb:
    out = LinComb.term(())
    for s in m:
        sym = symbol_map(s)
        nxt = LinComb()
        for a, ca in out.raw().items():
            for b, cb in sym.raw().items():
                for w, n in shuffle_counts(a, b).items():
                    nxt.add_term(w, ca * cb * n)
        out = nxt
    return out


def symbol_of_element(x: LinComb) -> LinComb:
    out = LinComb()
    for m, c in x.raw().items():
        for k, v in _symbol_mono(m).raw().items():
            out.add_term(k, c * v)
    return out


def tensor_symbol(t: LinComb) -> LinComb:
    """(symbol x symbol) of a tensor; keys are pairs of key-tuples."""
    out = LinComb()
    for (l, r), c in t.raw().items():
        sl, sr = _symbol_mono(l), _symbol_mono(r)
        for a, ca in sl.raw().items():
            for b, cb in sr.raw().items():
                out.add_term((a, b), c * ca * cb)
    return out


# ---------------------------------------------------------------------------
# level-N normal form in convergent words


def _reg_words(letters: Sequence[Arg], end: Arg) -> LinComb:
    """Regularized I(0; letters; end) for end a root of unity, as words ending at 1."""
    w = tuple(ZERO_ARG if a.is_zero else a / end for a in letters)
    return extract_boundary(w).get((0, 0), LinComb())


def _shuffle_words(x: LinComb, y: LinComb) -> LinComb:
    out = LinComb()
    for a, ca in x.raw().items():
        for b, cb in y.raw().items():
            for w, n in shuffle_counts(a, b).items():
                out.add_term(Word(w), ca * cb * n)
    return out


@lru_cache(maxsize=100_000)
def _nf_symbol(s: ISymbol) -> LinComb:
    a, u, b = s.a0, s.middle, s.a_end
    if not u:
        return LinComb.term(Word())
    if a == b:
        return LinComb()
    if a.is_zero:
        return _reg_words(u, b)
    if b.is_zero:
        return _reg_words(tuple(reversed(u)), a).scale((-1) ** len(u))
    out = LinComb()
    for k in range(len(u) + 1):
        left = _reg_words(tuple(reversed(u[:k])), a).scale((-1) ** k) if k else LinComb.term(Word())
        right = _reg_words(u[k:], b) if k < len(u) else LinComb.term(Word())
        out = out + _shuffle_words(left, right)
    return out


def level_normal_form(x: Union[ISymbol, LinComb], level: int) -> LinComb:
    """Convergent-word normal form of symbols with endpoints in mu_N u {0}.

    Uses path composition through 0, reversal, homogeneity
    I(0; w; c) = I(0; w/c; 1) (valid modulo torsion) and shuffle
    regularization; products are multiplied out by shuffle.
    """
    if isinstance(x, ISymbol):
        x = LinComb.term((x,))
    h = Hooks(level=level)
    out = LinComb()
    for m, c in x.raw().items():
        acc = LinComb.term(Word())
        for s in m:
            for p in (s.a0, s.a_end):
                if not h.in_level(p):
                    raise ValueError(f"endpoint {p} is not in mu_{level} u {{0}}")
            acc = _shuffle_words(acc, _nf_symbol(s))
        for w, v in acc.raw().items():
            out.add_term(w, c * v)
    return out


def _nf_tensor(t: LinComb, level: int, project: bool = False) -> LinComb:
    out = LinComb()
    for (l, r), c in t.raw().items():
        nl = level_normal_form(LinComb.term(l), level)
        nr = level_normal_form(LinComb.term(r), level)
        if project:
            nl, nr = eulerian_projection(nl), eulerian_projection(nr)
        for a, ca in nl.raw().items():
            for b, cb in nr.raw().items():
                out.add_term((a, b), c * ca * cb)
    return out


def eulerian_projection(x: LinComb) -> LinComb:
    """First Eulerian idempotent on words: kills shuffle products of non-empty words."""
    out = LinComb()
    for w, c in x.raw().items():
        n = len(w)
        if n == 0:
            continue
        for cuts in range(n):
            k = cuts + 1
            coef = Fraction((-1) ** (k - 1), k)
            for pos in combinations(range(1, n), cuts):
                bounds = (0,) + pos + (n,)
                acc = {(): 1}
                for i in range(k):
                    piece = tuple(w[bounds[i] : bounds[i + 1]])
                    nxt: Dict[tuple, int] = {}
                    for a, ca in acc.items():
                        for s, cs in shuffle_counts(a, piece).items():
                            nxt[s] = nxt.get(s, 0) + ca * cs
                    acc = nxt
                for s, cs in acc.items():
                    out.add_term(Word(s), c * coef * cs)
    return out


# ---------------------------------------------------------------------------
# generating-series checks


def _block(letters: Sequence[Arg], ns: Sequence[int]) -> Tuple[Arg, ...]:
    out: List[Arg] = []
    for a, n in zip(letters, ns):
        out.append(a)
        out.extend([ZERO_ARG] * (n - 1))
    return tuple(out)


def _sym(a0: Arg, mid: Sequence[Arg], end: Arg) -> ISymbol:
    return ISymbol(a0, tuple(mid), end)


def _depth_two_formula(a1: Arg, a2: Arg, max_weight: int) -> Dict[Tuple[int, int], LinComb]:
    """Three-term right side for Delta' I(a1:a2:1 | t1, t2), keyed by t-exponents."""
    out: Dict[Tuple[int, int], LinComb] = {}

    def put(e, left: ISymbol, right: ISymbol, c):
        if not c:
            return
        lc = out.setdefault(e, LinComb())
        lc.add_term(((left,), (right,)), c)

    for p in range(1, max_weight):
        for q in range(1, max_weight - p + 1):
            # I(a1:1|t1) x I(a2:1|t2 - t1)
            L = _sym(ZERO_ARG, _block([a1], [p]), ONE_ARG)
            R = _sym(ZERO_ARG, _block([a2], [q]), ONE_ARG)
            for r in range(q):
                put((p - 1 + r, q - 1 - r), L, R, comb(q - 1, r) * (-1) ** r)
            # - I(a1:1|t2) x I(a2:a1|t2 - t1)
            R = _sym(ZERO_ARG, _block([a2], [q]), a1)
            for r in range(q):
                put((r, p - 1 + q - 1 - r), L, R, -comb(q - 1, r) * (-1) ** r)
            # I(a2:1|t2) x I(a1:a2|t1)
            L2 = _sym(ZERO_ARG, _block([a2], [p]), ONE_ARG)
            R2 = _sym(ZERO_ARG, _block([a1], [q]), a2)
            put((q - 1, p - 1), L2, R2, 1)
    return out


def coproduct_li_series(level: int = 2, max_weight: int = 4, depth: int = 2, cobracket_check: bool = True) -> dict:
    """Compare the machine coproduct of depth-1/2 generating series at level N.

    depth 2: Delta' I(a1:a2:1|t1,t2) against the three-term formula, for all
    a1, a2 in mu_N, coefficient-wise through total weight max_weight, both
    sides mapped to convergent words.  With ``cobracket_check`` the
    antisymmetrized, product-free parts are compared too.
    depth 1: Delta' I(a:1|t) must vanish (only the log-power terms survive
    and they are torsion).
    """
    if max_weight > 6:
        raise ValueError("max_weight must be <= 6")
    hooks = Hooks(level=level)
    roots = [root(k, level) for k in range(level)]
    mismatches = []
    checked = 0
    if depth == 1:
        for a in roots:
            for n in range(1, max_weight + 1):
                d = reduced_coproduct(_sym(ZERO_ARG, _block([a], [n]), ONE_ARG), hooks)
                checked += 1
                if _nf_tensor(d, level):
                    mismatches.append((str(a), n))
        return {"ok": not mismatches, "checked": checked, "mismatches": mismatches}
    for a1 in roots:
        for a2 in roots:
            formula = _depth_two_formula(a1, a2, max_weight)
            for n1 in range(1, max_weight):
                for n2 in range(1, max_weight - n1 + 1):
                    s = _sym(ZERO_ARG, _block([a1, a2], [n1, n2]), ONE_ARG)
                    machine = reduced_coproduct(s, hooks)
                    expected = formula.get((n1 - 1, n2 - 1), LinComb())
                    checked += 1
                    if _nf_tensor(machine, level) != _nf_tensor(expected, level):
                        mismatches.append((str(a1), str(a2), n1, n2, "coproduct"))
                        continue
                    if cobracket_check:
                        mb = _antisym_words(_nf_tensor(_indecomposable_part(machine), level, True))
                        eb = _antisym_words(_nf_tensor(_indecomposable_part(expected), level, True))
                        if mb != eb:
                            mismatches.append((str(a1), str(a2), n1, n2, "cobracket"))
    return {"ok": not mismatches, "checked": checked, "mismatches": mismatches[:20], "level": level}


def _indecomposable_part(t: LinComb) -> LinComb:
    return LinComb((k, c) for k, c in t.raw().items() if len(k[0]) == 1 and len(k[1]) == 1)


def _antisym_words(t: LinComb) -> LinComb:
    out = LinComb()
    for (a, b), c in t.raw().items():
        if a == b:
            continue
        if str(a) < str(b):
            out.add_term((a, b), c)
        else:
            out.add_term((b, a), -c)
    return out


def power_series_check(max_n: int = 4, name: str = "a") -> dict:
    """Delta(a^t) = a^t (x) a^t with a^t = sum_n t^n I(0; 0^n; a), coefficient-wise."""
    a = atom(name)
    bad = []
    for n in range(max_n + 1):
        lhs = coproduct_element(element(_sym(ZERO_ARG, [ZERO_ARG] * n, a), NO_HOOKS), NO_HOOKS)
        rhs = LinComb()
        for k in range(n + 1):
            l = element(_sym(ZERO_ARG, [ZERO_ARG] * k, a), NO_HOOKS)
            r = element(_sym(ZERO_ARG, [ZERO_ARG] * (n - k), a), NO_HOOKS)
            for x, cx in l.raw().items():
                for y, cy in r.raw().items():
                    rhs.add_term((x, y), cx * cy)
        if lhs != rhs:
            bad.append(n)
    return {"ok": not bad, "mismatches": bad}


def depth_one_series_check(max_n: int = 5, name: str = "x") -> dict:
    """Delta' Li_n(x) = sum_k Li_{n-k}(x) (x) log^k(x)/k!, compared via the symbol map."""
    x = atom(name)
    log_x = _sym(ZERO_ARG, [ZERO_ARG], x)
    bad = []
    for n in range(2, max_n + 1):
        sign, s = li_to_i(composition([n], [x]))
        machine = reduced_coproduct(s).scale(sign)
        expected = LinComb()
        for k in range(1, n):
            sg, left = li_to_i(composition([n - k], [x]))
            expected.add_term(((left,), (log_x,) * k), Fraction(sg, factorial(k)))
        if tensor_symbol(machine) != tensor_symbol(expected):
            bad.append(n)
    return {"ok": not bad, "mismatches": bad}


# ---------------------------------------------------------------------------
# printed weight-three displays for Li_{2,1} and Li_{1,2}


def _li(indices: Sequence[int], args: Sequence[Arg]) -> LinComb:
    sign, s = li_to_i(composition(list(indices), list(args)))
    return LinComb.term((s,), sign)


def _log(a: Arg) -> LinComb:
    return LinComb.term((_sym(ZERO_ARG, [ZERO_ARG], a),))


def _tensor(l: LinComb, r: LinComb, c=1) -> LinComb:
    out = LinComb()
    for a, ca in l.raw().items():
        for b, cb in r.raw().items():
            out.add_term((a, b), c * ca * cb)
    return out


def printed_double_displays() -> Dict[str, Tuple[LinComb, LinComb]]:
    """(machine Delta', printed right side) for Li_{2,1}(x,y) and Li_{1,2}(x,y)."""
    x, y = atom("x"), atom("y")
    xy = x * y
    L = {
        "11": _li([1, 1], [x, y]),
        "2x": _li([2], [x]),
        "2y": _li([2], [y]),
        "2xy": _li([2], [xy]),
        "1x": _li([1], [x]),
        "1y": _li([1], [y]),
        "1xy": _li([1], [xy]),
    }
    lx, ly, lxy = _log(x), _log(y), _log(xy)
    half_lx2 = multiply(lx, lx).scale(Fraction(1, 2))
    d21 = (
        _tensor(L["11"], lx)
        + _tensor(L["1y"], L["2x"])
        + _tensor(L["2xy"], L["1y"])
        - _tensor(L["1xy"], L["2x"] + L["2y"] - multiply(L["1y"], lxy) + half_lx2)
    )
    d12 = (
        _tensor(L["11"], ly)
        - _tensor(L["2xy"], lx)
        - _tensor(L["1xy"], multiply(lx, ly))
        + _tensor(L["2y"], L["1x"])
        + _tensor(L["1y"], multiply(L["1x"], ly))
        + _tensor(L["1xy"], L["2y"])
        - _tensor(L["2xy"], L["1x"])
        - _tensor(L["1xy"], multiply(L["1x"], lxy))
        - _tensor(L["1xy"], L["2x"])
    )
    out = {}
    for name, idx, printed in (("Li_{2,1}", [2, 1], d21), ("Li_{1,2}", [1, 2], d12)):
        machine = reduced_coproduct(_li(idx, [x, y]))
        out[name] = (machine, printed)
    return out


def s3_trilog_symbol_check(coefficient: Fraction = Fraction(2)) -> dict:
    """sum over S_3 of Li_{1,1,1}(x_s1, x_s2, x_s3) - c Li_3(x1 x2 x3), modulo products.

    Products are killed by the first Eulerian idempotent on the symbol; the
    relation holds in that quotient exactly when c = 2.
    """
    xs = [atom("x1"), atom("x2"), atom("x3")]
    total = LinComb()
    for p in permutations(range(3)):
        total = total + _li([1, 1, 1], [xs[i] for i in p])
    total = total - _li([3], [xs[0] * xs[1] * xs[2]]).scale(coefficient)
    residual = eulerian_projection(symbol_of_element(total))
    return {"coefficient": str(coefficient), "residual_terms": len(residual), "ok": not residual}


def double_display_check() -> Dict[str, dict]:
    """Compare machine and printed weight-three displays at symbol level in both factors."""
    res = {}
    for name, (machine, printed) in printed_double_displays().items():
        diff = tensor_symbol(machine) - tensor_symbol(printed)
        res[name] = {"ok": not diff, "residual_terms": len(diff)}
    return res


# ---------------------------------------------------------------------------
# printed explicit depth-two cobracket versus the machine


def printed_cobracket_report(level: int = 3, max_weight: int = 4) -> List[dict]:
    """Machine cobracket of I_{m,n}(a,b) = I(0; a,0^{m-1}, b,0^{n-1}; 1) against the
    printed explicit closed formula, both in product-free normal form at level N.

    The closed formula carries a sign factor (-1)^{m+j-1} on its last sum that
    does not match its own generating-series version; this report records for
    which (m, n, a, b) the two disagree.  Nothing here is asserted.
    """
    hooks = Hooks(level=level)
    roots = [root(k, level) for k in range(level)]
    rows = []

    def I(letters, ns):
        return _sym(ZERO_ARG, _block(letters, ns), ONE_ARG)

    for a in roots:
        for b in roots:
            for m in range(1, max_weight):
                for n in range(1, max_weight - m + 1):
                    machine = _indecomposable_part(reduced_coproduct(I([a, b], [m, n]), hooks))
                    mb = _antisym_words(_nf_tensor(machine, level, True))
                    printed = LinComb()
                    # log terms die at level N; the remaining sums:
                    printed.add_term(((I([a / b], [m]),), (I([b], [n]),)), -1)
                    for i in range(m):
                        printed.add_term(((I([a], [m - i]),), (I([b], [n + i]),)), (-1) ** i * comb(n + i - 1, i))
                    for j in range(n):
                        printed.add_term(
                            ((I([a], [n - j]),), (I([b / a], [m + j]),)),
                            -((-1) ** (m + j - 1)) * (-1) ** j * comb(m + j - 1, j),
                        )
                    pb = _antisym_words(_nf_tensor(printed, level, True))
                    rows.append(
                        {
                            "a": str(a),
                            "b": str(b),
                            "m": m,
                            "n": n,
                            "agree": mb == pb,
                            "agree_up_to_sign": mb == pb or mb == -pb,
                        }
                    )
    return rows


# ---------------------------------------------------------------------------
# property residuals (all should be zero)


def coassociativity_residual(s: ISymbol, hooks: Hooks = DEFAULT_HOOKS) -> LinComb:
    """(Delta x id) Delta s - (id x Delta) Delta s, keyed by monomial triples."""
    out: Dict[tuple, int] = {}
    for (l, r), c in _coproduct_raw(s, hooks):
        for (ll, lr), c2 in _coproduct_mono_raw(l, hooks).items():
            k = (ll, lr, r)
            out[k] = out.get(k, 0) + c * c2
        for (rl, rr), c2 in _coproduct_mono_raw(r, hooks).items():
            k = (l, rl, rr)
            out[k] = out.get(k, 0) - c * c2
    return LinComb((k, v) for k, v in out.items() if v)


def counit_residual(s: ISymbol, hooks: Hooks = DEFAULT_HOOKS) -> Tuple[LinComb, LinComb]:
    d = coproduct(s, hooks)
    x = element(s, hooks)
    left = LinComb((r, c) for (l, r), c in d.raw().items() if not l)
    right = LinComb((l, c) for (l, r), c in d.raw().items() if not r)
    return left - x, right - x


def antipode_residual(s: ISymbol, hooks: Hooks = DEFAULT_HOOKS) -> LinComb:
    """mu (S x id) Delta (s) - unit counit (s)."""
    out = LinComb()
    for (l, r), c in coproduct(s, hooks).raw().items():
        out = out + multiply(antipode(LinComb.term(l), hooks), LinComb.term(r)).scale(c)
    x = element(s, hooks)
    out.add_term(ONE, -counit(x))
    return out


def algebra_map_residual(s: ISymbol, t: ISymbol, hooks: Hooks = DEFAULT_HOOKS) -> LinComb:
    """(symbol x symbol) of Delta(s sh t) - Delta(s) Delta(t).

    The shuffle relation is not imposed on formal monomials, so both sides are
    compared after the symbol map.
    """
    from .symbols import shuffle_fixed_endpoints

    prod = LinComb()
    for u, c in shuffle_fixed_endpoints(s, t).raw().items():
        for k, v in element(u, hooks).raw().items():
            prod.add_term(k, c * v)
    lhs = coproduct_element(prod, hooks)
    rhs = coproduct_element(multiply(element(s, hooks), element(t, hooks)), hooks)
    return tensor_symbol(lhs) - tensor_symbol(rhs)


def random_symbol(rng, max_weight: int = 5, alphabet: Sequence = ("0", "1", "x", "y", "-1", "w1/3")) -> ISymbol:
    """Random I-symbol of weight 1..max_weight; endpoints and letters from ``alphabet``."""
    from .arguments import parse_arg

    letters = [parse_arg(a) for a in alphabet]
    n = rng.randint(1, max_weight)
    return ISymbol(rng.choice(letters), tuple(rng.choice(letters) for _ in range(n)), rng.choice(letters))
