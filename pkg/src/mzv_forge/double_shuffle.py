"""Regularized double shuffle relations, exact reduction and dimension bounds.

Columns of the weight-w system, in pivot order:

1. ``("div", c)``   stuffle-regularized value of a divergent composition;
2. ``("conv", c)``  convergent compositions, depth descending;
3. ``("prod", m)``  products of lower-weight free generators.

Lower weights are solved first and their solved forms substituted, so every
product of lower-weight values is a combination of ``prod`` monomials.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .arguments import ONE_ARG, ZERO_ARG, Arg, root
from .exact_algebra import LinComb, format_rational
from .regularization import compare_regularizations, extract_boundary, shuffle_regularize, word_to_compositions
from .words_and_products import Composition, Word, is_convergent, shuffle_counts, stuffle_counts

__all__ = [
    "ResourceGuard",
    "RelationSystem",
    "ReductionReport",
    "DoubleShuffleSolver",
    "generate_relations",
    "reduce",
    "dimension_table",
    "expected_dimensions",
    "compositions_of_weight",
    "column_str",
    "export_jsonl",
    "import_jsonl",
]

DEFAULT_KINDS = ("shuffle", "stuffle", "comparison")
ALL_KINDS = ("shuffle", "stuffle", "comparison", "distribution")

Column = Tuple[str, object]
Mono = Tuple[Composition, ...]


class ResourceGuard(ValueError):
    """Requested weight/level is outside the configured desk-scale limits."""


def _check_limits(w: int, level: int, allow_large: bool = False) -> None:
    if w < 1:
        raise ValueError("weight must be >= 1")
    if level < 1:
        raise ValueError("level must be >= 1")
    if allow_large:
        return
    if level == 1 and w > 10:
        raise ResourceGuard("level 1 supports weight <= 10")
    if level > 1 and (level > 6 or w > 5):
        raise ResourceGuard("level N > 1 supports N <= 6 and weight <= 5")


def expected_dimensions(k_max: int) -> List[int]:
    """d_0 = 1, d_1 = 0, d_2 = 1, d_k = d_{k-2} + d_{k-3}."""
    d = [1, 0, 1]
    while len(d) <= k_max:
        d.append(d[-2] + d[-3])
    return d[: k_max + 1]


# ---------------------------------------------------------------------------
# enumeration


def _roots(level: int) -> List[Arg]:
    return [root(k, level) for k in range(level)]


def _index_tuples(w: int) -> Iterable[Tuple[int, ...]]:
    if w == 0:
        yield ()
        return
    for first in range(1, w + 1):
        for rest in _index_tuples(w - first):
            yield (first,) + rest


def compositions_of_weight(w: int, level: int = 1) -> List[Composition]:
    """All level-N compositions of weight w (convergent and divergent)."""
    out = []
    rts = _roots(level)
    for idx in _index_tuples(w):
        for args in iproduct(rts, repeat=len(idx)):
            out.append(Composition(zip(idx, args)))
    return out


def _words(length: int, level: int) -> Iterable[Tuple[Arg, ...]]:
    return iproduct([ZERO_ARG] + _roots(level), repeat=length)


def column_str(col: Column) -> str:
    kind, obj = col
    if kind == "conv":
        return str(obj)
    if kind == "div":
        s = str(obj)
        return s.replace("(", "~(", 1)
    return mono_str(obj)


def mono_str(m: Mono) -> str:
    if not m:
        return "1"
    parts = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        parts.append(str(m[i]) if j - i == 1 else f"{m[i]}^{j - i}")
        i = j
    return "*".join(parts)


def _col_sort_key(col: Column):
    kind, obj = col
    if kind == "div":
        return (0, -len(obj), str(obj))
    if kind == "conv":
        return (1, -len(obj), str(obj))
    return (2, -len(obj), mono_str(obj))


def _mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(sorted(a + b, key=lambda c: (c.weight, str(c))))


# ---------------------------------------------------------------------------
# system and reduction


@dataclass
class RelationSystem:
    weight: int
    level: int
    columns: List[Column]
    rows: List[Tuple[str, LinComb]] = field(default_factory=list)

    def to_jsonl(self) -> str:
        return export_jsonl(self)


@dataclass
class ReductionReport:
    weight: int
    level: int
    rank: int
    nullity: int
    columns: List[Column]
    pivots: List[Column]
    free: List[Column]
    solved: Dict[Column, LinComb]  # pivot column -> combination of free columns

    @property
    def dimension_bound(self) -> int:
        return self.nullity

    def to_json(self) -> str:
        return json.dumps(
            {
                "weight": self.weight,
                "level": self.level,
                "rank": self.rank,
                "nullity": self.nullity,
                "free": [column_str(c) for c in self.free],
                "solved": {column_str(c): self.solved[c].format(column_str) for c in self.pivots},
            },
            sort_keys=True,
        )


def reduce(system: RelationSystem) -> ReductionReport:
    """Exact reduced row echelon form; pivot = smallest column index.

    The reduced echelon form of a row space is unique, so the result does not
    depend on the order of the rows.
    """
    cols = system.columns
    index = {c: i for i, c in enumerate(cols)}
    pivots: Dict[int, Dict[int, Fraction]] = {}
    for _, lc in system.rows:
        row = {index[k]: Fraction(v) for k, v in lc.raw().items()}
        # pivot rows contain no other pivot column, so one pass suffices
        for p in sorted(set(row) & set(pivots)):
            f = row[p]
            for c, x in pivots[p].items():
                y = row.get(c, 0) - f * x
                if y:
                    row[c] = y
                else:
                    row.pop(c, None)
        if not row:
            continue
        lead = min(row)
        f = row[lead]
        row = {c: x / f for c, x in row.items()}
        for p, prow in pivots.items():
            h = prow.get(lead)
            if h:
                for c, x in row.items():
                    y = prow.get(c, 0) - h * x
                    if y:
                        prow[c] = y
                    else:
                        prow.pop(c, None)
        pivots[lead] = row
    pivot_cols = [cols[i] for i in sorted(pivots)]
    free = [c for i, c in enumerate(cols) if i not in pivots]
    solved = {}
    for i in sorted(pivots):
        solved[cols[i]] = LinComb((cols[c], -x) for c, x in pivots[i].items() if c != i)
    return ReductionReport(system.weight, system.level, len(pivots), len(cols) - len(pivots), cols, pivot_cols, free, solved)


# ---------------------------------------------------------------------------
# solver carrying lower-weight solutions


class DoubleShuffleSolver:
    """Solves the regularized double shuffle system weight by weight."""

    def __init__(self, level: int = 1, kinds: Sequence[str] = DEFAULT_KINDS, threads: int = 1, allow_large: bool = False):
        for k in kinds:
            if k not in ALL_KINDS:
                raise ValueError(f"unknown relation kind {k!r}")
        self.level = level
        self.kinds = tuple(k for k in ALL_KINDS if k in kinds)
        self.threads = max(1, int(threads))
        self.allow_large = allow_large
        self.reports: Dict[int, ReductionReport] = {}
        self.systems: Dict[int, RelationSystem] = {}
        # value of lower-weight objects as LinComb over monomials of generators
        self._values: Dict[Column, LinComb] = {}
        self._generators: Dict[int, List[Composition]] = {}
        self._lock = threading.Lock()

    # -- lower-weight values -------------------------------------------
    def value_of(self, comp: Composition) -> LinComb:
        """Value of a (possibly divergent, stuffle-regularized) composition."""
        if not comp:
            return LinComb.term(())
        col: Column = ("conv", comp) if is_convergent(comp) else ("div", comp)
        w = comp.weight
        self.solve_up_to(w)
        return self._values[col]

    def shuffle_value(self, comp: Composition) -> LinComb:
        """Shuffle-regularized value in free generators."""
        out = LinComb()
        for c, x in shuffle_regularize(comp).raw().items():
            out = out + self.value_of(c).scale(x)
        return out

    def _word_value(self, w: Tuple[Arg, ...]) -> LinComb:
        out = LinComb()
        for c, x in _reg_word(w).raw().items():
            out = out + self.value_of(c).scale(x)
        return out

    @staticmethod
    def _mul(a: LinComb, b: LinComb) -> LinComb:
        out = LinComb()
        for m1, c1 in a.raw().items():
            for m2, c2 in b.raw().items():
                out.add_term(_mono_mul(m1, m2), c1 * c2)
        return out

    # -- system generation ---------------------------------------------
    def _product_columns(self, w: int) -> List[Mono]:
        gens = [(g, k) for k in sorted(self._generators) if k < w for g in self._generators[k]]
        gens.sort(key=lambda gk: (gk[1], str(gk[0])))
        out: List[Mono] = []

        def rec(start: int, remaining: int, acc: Tuple[Composition, ...]):
            if remaining == 0:
                if len(acc) >= 2:
                    out.append(acc)
                return
            for i in range(start, len(gens)):
                g, k = gens[i]
                if k <= remaining:
                    rec(i, remaining - k, acc + (g,))

        rec(0, w, ())
        return [tuple(sorted(m, key=lambda c: (c.weight, str(c)))) for m in out]

    def _linear_part(self, lc: LinComb) -> LinComb:
        """Map weight-w compositions to their columns."""
        out = LinComb()
        for c, x in lc.raw().items():
            out.add_term(("conv", c) if is_convergent(c) else ("div", c), x)
        return out

    def _lower_to_columns(self, lc: LinComb) -> LinComb:
        """Monomials (of total weight w, >= 2 factors or single generator) to columns."""
        out = LinComb()
        for m, x in lc.raw().items():
            if len(m) == 1:
                out.add_term(("conv", m[0]), x)
            else:
                out.add_term(("prod", m), x)
        return out

    def _shuffle_row(self, u, v) -> LinComb:
        lhs = LinComb()
        for wd, n in shuffle_counts(u, v).items():
            for c, x in _reg_word(wd).raw().items():
                lhs.add_term(c, n * x)
        row = self._linear_part(lhs)
        rhs = self._mul(self._word_value(u), self._word_value(v))
        return row - self._lower_to_columns(rhs)

    def _stuffle_row(self, p: Composition, q: Composition) -> LinComb:
        lhs = LinComb()
        for c, n in stuffle_counts(p, q).items():
            lhs.add_term(Composition(c), n)
        row = self._linear_part(lhs)
        rhs = self._mul(self.value_of(p), self.value_of(q))
        return row - self._lower_to_columns(rhs)

    def _comparison_row(self, c: Composition) -> LinComb:
        row = LinComb.term(("div", c))
        rhs = shuffle_regularize(c) + compare_regularizations(c)
        return row - self._linear_part(rhs)

    def _distribution_rows(self, w: int) -> List[LinComb]:
        rows = []
        N = self.level
        for l in range(2, N + 1):
            if N % l:
                continue
            sub = [root(k, N // l) for k in range(N // l)]
            for idx in _index_tuples(w):
                for xs in iproduct(sub, repeat=len(idx)):
                    lhs = Composition(zip(idx, xs))
                    if not is_convergent(lhs):
                        continue
                    row = LinComb.term(("conv", lhs))
                    lifts = [[y for y in _roots(N) if y ** l == x] for x in xs]
                    coef = Fraction(l) ** (w - len(idx))
                    for ys in iproduct(*lifts):
                        row.add_term(("conv", Composition(zip(idx, ys))), -coef)
                    rows.append(row)
        return rows

    def generate(self, w: int) -> RelationSystem:
        _check_limits(w, self.level, self.allow_large)
        self.solve_up_to(w - 1)
        comps = compositions_of_weight(w, self.level)
        cols: List[Column] = [("div", c) for c in comps if not is_convergent(c)]
        cols += [("conv", c) for c in comps if is_convergent(c)]
        cols += [("prod", m) for m in self._product_columns(w)]
        cols.sort(key=_col_sort_key)
        tasks: List[Tuple[str, tuple]] = []
        if "shuffle" in self.kinds:
            for p in range(1, w // 2 + 1):
                for u in _words(p, self.level):
                    for v in _words(w - p, self.level):
                        if p == w - p and [str(a) for a in v] < [str(a) for a in u]:
                            continue
                        tasks.append(("shuffle", (u, v)))
        if "stuffle" in self.kinds:
            for p in range(1, w // 2 + 1):
                for a in compositions_of_weight(p, self.level):
                    for b in compositions_of_weight(w - p, self.level):
                        if p == w - p and str(b) < str(a):
                            continue
                        tasks.append(("stuffle", (a, b)))
        if "comparison" in self.kinds:
            for c in comps:
                if not is_convergent(c):
                    tasks.append(("comparison", (c,)))

        def run(task):
            kind, args = task
            if kind == "shuffle":
                return kind, self._shuffle_row(*args)
            if kind == "stuffle":
                return kind, self._stuffle_row(*args)
            return kind, self._comparison_row(*args)

        if self.threads > 1 and len(tasks) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as ex:
                results = list(ex.map(run, tasks))
        else:
            results = [run(t) for t in tasks]
        if "distribution" in self.kinds:
            results += [("distribution", r) for r in self._distribution_rows(w)]
        rows = _dedupe(results)
        colset = set(cols)
        for _, r in rows:
            for k in r.keys():
                if k not in colset:
                    raise AssertionError(f"row references unknown column {column_str(k)}")
        return RelationSystem(w, self.level, cols, rows)

    # -- solving -------------------------------------------------------
    def solve(self, w: int) -> ReductionReport:
        self.solve_up_to(w)
        return self.reports[w]

    def solve_up_to(self, w: int) -> None:
        with self._lock:
            pending = [k for k in range(1, w + 1) if k not in self.reports]
        for k in pending:
            with self._lock:
                if k in self.reports:
                    continue
            system = self.generate(k)
            report = reduce(system)
            self._record(k, system, report)

    def _record(self, w: int, system: RelationSystem, report: ReductionReport) -> None:
        def as_mono(col: Column) -> Mono:
            kind, obj = col
            if kind == "prod":
                return obj
            return (obj,)

        with self._lock:
            self.systems[w] = system
            self.reports[w] = report
            self._generators[w] = [obj for kind, obj in report.free if kind == "conv"]
            for col in report.columns:
                if col[0] == "prod":
                    continue
                if col in report.solved:
                    val = LinComb()
                    for fc, x in report.solved[col].raw().items():
                        val.add_term(as_mono(fc), x)
                else:
                    val = LinComb.term(as_mono(col))
                self._values[col] = val

    def dimension(self, w: int) -> int:
        return self.solve(w).nullity

    # -- presentation --------------------------------------------------
    def solution_lines(self, w: int) -> List[str]:
        """Closed forms for every weight-w composition in the free generators."""
        self.solve_up_to(w)
        lines = []
        zw = Composition([(w, ONE_ARG)]) if self.level == 1 else None
        zval = self.value_of(zw) if zw is not None else None
        for c in compositions_of_weight(w, self.level):
            val = self.value_of(c) if is_convergent(c) else self.shuffle_value(c)
            text = val.format(mono_str)
            lines.append(f"{c} = {text}")
            if zval is not None and c != zw and val:
                ratio = _proportional(val, zval)
                if ratio is not None and not (len(val) == 1 and val == LinComb.term((zw,), ratio)):
                    lines.append(f"{c} = {_coef_str(ratio)}{zw}")
        for c in compositions_of_weight(w, self.level):
            if not is_convergent(c):
                lines.append(f"{column_str(('div', c))} = {self.value_of(c).format(mono_str)}")
        return lines


def _coef_str(q: Fraction) -> str:
    if q == 1:
        return ""
    if q == -1:
        return "-"
    return f"{format_rational(q)}*"


def _proportional(a: LinComb, b: LinComb) -> Optional[Fraction]:
    if not b:
        return None
    k, v = next(iter(b.raw().items()))
    r = a[k] / v
    return r if a == b.scale(r) else None


def _dedupe(rows: List[Tuple[str, LinComb]]) -> List[Tuple[str, LinComb]]:
    seen = {}
    for kind, r in rows:
        if not r:
            continue
        items = sorted(r.raw().items(), key=lambda kv: (_col_sort_key(kv[0]), ))
        lead = items[0][1]
        key = tuple((column_str(k), v / lead) for k, v in items)
        if key not in seen:
            seen[key] = (kind, r)
    return [seen[k] for k in sorted(seen)]


_REG_CACHE: Dict[tuple, LinComb] = {}
_REG_LOCK = threading.Lock()


def _reg_word(w: Tuple[Arg, ...]) -> LinComb:
    """Shuffle-regularized I(0; w; 1) as compositions (I-normalization)."""
    with _REG_LOCK:
        hit = _REG_CACHE.get(w)
    if hit is not None:
        return hit
    val = word_to_compositions(extract_boundary(w).get((0, 0), LinComb()))
    with _REG_LOCK:
        _REG_CACHE[w] = val
    return val


# ---------------------------------------------------------------------------
# module-level conveniences


def generate_relations(w: int, level: int = 1, kinds: Sequence[str] = DEFAULT_KINDS, threads: int = 1) -> RelationSystem:
    return DoubleShuffleSolver(level, kinds, threads).generate(w)


def dimension_table(w_max: int, level: int = 1, kinds: Sequence[str] = DEFAULT_KINDS, threads: int = 1, allow_large: bool = False) -> List[int]:
    """Dimension bounds for weights 1..w_max."""
    s = DoubleShuffleSolver(level, kinds, threads, allow_large)
    return [s.dimension(k) for k in range(1, w_max + 1)]


def export_jsonl(system: RelationSystem) -> str:
    lines = []
    for kind, r in system.rows:
        terms = [[format_rational(c), column_str(k)] for k, c in r.items(lambda k: _col_sort_key(k))]
        lines.append(json.dumps({"kind": kind, "weight": system.weight, "level": system.level, "terms": terms}))
    return "\n".join(lines) + ("\n" if lines else "")


def import_jsonl(text: str) -> List[dict]:
    """Parse exported relations back into dicts (terms keep their text form)."""
    return [json.loads(line) for line in text.splitlines() if line.strip()]
