"""Command-line front end: ``mzv-forge <subcommand> ...``.

Exit codes: 0 ok, 1 a ``check`` suite failed, 2 parse/usage error,
3 domain error, 4 resource limit. ``MZV_FORGE_PREC`` and
``MZV_FORGE_THREADS`` override the default precision and thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .arguments import Arg, parse_arg
from .exact_algebra import LinComb, format_rational
from .symbols import ISymbol, i_to_li, li_to_i
from .words_and_products import Composition, composition

SCHEMA = "mzv-forge/1"
EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN, EXIT_RESOURCE = 0, 1, 2, 3, 4


# ---------------------------------------------------------------------------
# expression parser


class ParseError(ValueError):
    def __init__(self, message: str, src: str, pos: int):
        super().__init__(message)
        self.src = src
        self.pos = pos

    def render(self) -> str:
        return f"parse error at column {self.pos + 1}: {self.args[0]}\n  {self.src}\n  {' ' * self.pos}^"


@dataclass(frozen=True)
class Span:
    start: int
    end: int


@dataclass(frozen=True)
class ArgNode:
    text: str
    value: Arg
    span: Span


@dataclass(frozen=True)
class ZetaExpr:
    indices: Tuple[int, ...]
    span: Span


@dataclass(frozen=True)
class LiExpr:
    indices: Tuple[int, ...]
    args: Tuple[ArgNode, ...]
    span: Span


@dataclass(frozen=True)
class ISymExpr:
    a0: ArgNode
    middle: Tuple[ArgNode, ...]
    a_end: ArgNode
    span: Span


Expr = Union[ZetaExpr, LiExpr, ISymExpr]


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def error(self, msg: str, pos: Optional[int] = None):
        raise ParseError(msg, self.src, self.pos if pos is None else pos)

    def ws(self) -> None:
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            got = self.peek() or "end of input"
            self.error(f"expected {ch!r}, got {got!r}")
        self.pos += 1

    def name(self) -> str:
        self.ws()
        start = self.pos
        while self.pos < len(self.src) and (self.src[self.pos].isalnum() or self.src[self.pos] == "_"):
            self.pos += 1
        return self.src[start:self.pos]

    def intlist(self) -> Tuple[int, ...]:
        out = []
        while True:
            self.ws()
            start = self.pos
            while self.pos < len(self.src) and self.src[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("expected a positive integer")
            n = int(self.src[start:self.pos])
            if n < 1:
                self.error("indices must be >= 1", start)
            out.append(n)
            if self.peek() != ",":
                return tuple(out)
            self.pos += 1

    def arg(self) -> ArgNode:
        self.ws()
        start = self.pos
        depth = 0
        while self.pos < len(self.src):
            ch = self.src[self.pos]
            if ch in ",;" and depth == 0:
                break
            if ch == ")" and depth == 0:
                break
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            self.pos += 1
        text = self.src[start:self.pos].strip()
        if not text:
            self.error("expected an argument", start)
        try:
            value = parse_arg(text)
        except ValueError as exc:
            self.error(str(exc), start)
        return ArgNode(text, value, Span(start, self.pos))

    def arglist(self, stop: str) -> Tuple[ArgNode, ...]:
        if self.peek() == stop:
            return ()
        out = [self.arg()]
        while self.peek() == ",":
            self.pos += 1
            out.append(self.arg())
        return tuple(out)

    def expr(self) -> Expr:
        self.ws()
        start = self.pos
        head = self.name()
        if head == "zeta":
            self.expect("(")
            idx = self.intlist()
            self.expect(")")
            node: Expr = ZetaExpr(idx, Span(start, self.pos))
        elif head == "Li":
            self.expect("(")
            idx = self.intlist()
            self.expect(";")
            args = self.arglist(")")
            self.expect(")")
            node = LiExpr(idx, args, Span(start, self.pos))
        elif head == "I":
            self.expect("(")
            a0 = self.arg()
            self.expect(";")
            mid = self.arglist(";")
            self.expect(";")
            a_end = self.arg()
            self.expect(")")
            node = ISymExpr(a0, mid, a_end, Span(start, self.pos))
        else:
            self.error(f"expected zeta(...), Li(...) or I(...), got {head or self.peek() or 'end of input'!r}", start)
        if self.peek():
            self.error("trailing input")
        return node


def parse(src: str) -> Expr:
    return _Parser(src).expr()


def lower(e: Expr) -> Union[Composition, ISymbol]:
    if isinstance(e, ZetaExpr):
        return composition(list(e.indices))
    if isinstance(e, LiExpr):
        if len(e.args) != len(e.indices):
            raise ParseError(f"Li has {len(e.indices)} indices but {len(e.args)} arguments",
                             "", e.span.start)
        if any(a.value.is_zero for a in e.args):
            raise DomainError("Li arguments must be nonzero")
        return composition(list(e.indices), [a.value for a in e.args])
    return ISymbol(e.a0.value, tuple(a.value for a in e.middle), e.a_end.value)


def parse_object(src: str) -> Union[Composition, ISymbol]:
    return lower(parse(src))


class DomainError(ValueError):
    pass


class ResourceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config and output


@dataclass
class Config:
    prec: int = 128
    threads: int = 1
    fmt: str = "text"
    seed: int = 20240601
    max_weight: int = 10
    max_level: int = 6

    @classmethod
    def from_env(cls) -> "Config":
        cfg = cls()
        if os.environ.get("MZV_FORGE_PREC"):
            cfg.prec = int(os.environ["MZV_FORGE_PREC"])
        if os.environ.get("MZV_FORGE_THREADS"):
            cfg.threads = int(os.environ["MZV_FORGE_THREADS"])
        return cfg

    def validate(self) -> None:
        if self.prec < 16 or self.threads < 1 or self.max_weight < 1 or self.max_level < 1:
            raise ResourceError("limits must be positive (precision >= 16 bits)")


def _emit(cfg: Config, command: str, text: str, payload) -> str:
    if cfg.fmt == "json":
        return json.dumps({"schema": SCHEMA, "command": command, "result": payload}, sort_keys=True, ensure_ascii=False)
    return text


def _lc_json(lc: LinComb) -> List[List[str]]:
    return [[str(k), format_rational(c)] for k, c in lc.items()]


def _as_isymbol(obj) -> ISymbol:
    if isinstance(obj, ISymbol):
        return obj
    sign, s = li_to_i(obj)
    if sign != 1:
        raise DomainError(f"{obj} equals {sign} * {s}; pass the I-symbol form")
    return s


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(a, cfg: Config) -> str:
    from .numerics import iterated_integral_path, li_eval

    obj = parse_object(a.expr)
    if isinstance(obj, Composition):
        v = li_eval(obj, prec=cfg.prec)
    else:
        if obj.a0.mono or obj.a_end.mono or any(x.mono for x in obj.middle):
            raise DomainError("numeric evaluation needs numeric arguments")
        if obj.middle and (obj.middle[0] == obj.a0 or obj.middle[-1] == obj.a_end):
            raise DomainError("divergent endpoint; use 'regularize'")
        v = iterated_integral_path(obj.a0.to_complex(), [x.to_complex() for x in obj.middle], obj.a_end.to_complex(),
                                   cfg.prec)
    payload = dict(v.to_json(), expression=str(obj))
    return _emit(cfg, "eval", f"{obj} = {v}", payload)


def _product(kind: str, a, cfg: Config) -> str:
    from .regularization import word_to_compositions
    from .symbols import shuffle_fixed_endpoints
    from .words_and_products import mzv_word, shuffle, stuffle

    x, y = parse_object(a.left), parse_object(a.right)
    if kind == "stuffle":
        if not (isinstance(x, Composition) and isinstance(y, Composition)):
            raise DomainError("stuffle needs zeta(...) or Li(...) operands")
        out = stuffle(x, y).map_keys(Composition)
    elif isinstance(x, ISymbol) and isinstance(y, ISymbol):
        out = shuffle_fixed_endpoints(x, y)
    elif isinstance(x, Composition) and isinstance(y, Composition):
        sign = (-1) ** (len(x) + len(y))
        words = shuffle(mzv_word(x), mzv_word(y))
        out = word_to_compositions(words).scale(sign)
    else:
        raise DomainError("shuffle needs two I-symbols or two compositions")
    text = "\n".join(f"{format_rational(c)} * {k}" for k, c in out.items()) or "0"
    return _emit(cfg, kind, text, _lc_json(out))


def cmd_coproduct(a, cfg: Config) -> str:
    from .hopf import DEFAULT_HOOKS, NO_HOOKS, coproduct_element, element, format_tensor, reduced_coproduct

    s = _as_isymbol(parse_object(a.expr))
    hooks = NO_HOOKS if a.no_hooks else DEFAULT_HOOKS
    t = reduced_coproduct(s, hooks) if a.reduced else coproduct_element(element(s, hooks), hooks, cfg.threads)
    text = format_tensor(t) or "0"
    return _emit(cfg, "coproduct", text, text.splitlines())


def cmd_cobracket(a, cfg: Config) -> str:
    from .hopf import cobracket, format_wedge

    s = _as_isymbol(parse_object(a.expr))
    text = format_wedge(cobracket(s))
    lines = text.splitlines()
    text = text or "0"
    return _emit(cfg, "cobracket", text, lines)


def cmd_antipode(a, cfg: Config) -> str:
    from .hopf import antipode, format_element

    s = _as_isymbol(parse_object(a.expr))
    x = antipode(s)
    text = format_element(x) or "0"
    return _emit(cfg, "antipode", text, text.splitlines())


def cmd_regularize(a, cfg: Config) -> str:
    from .regularization import compare_regularizations, shuffle_asymptotic, shuffle_regularize, stuffle_asymptotic, stuffle_regularize

    obj = parse_object(a.expr)
    if isinstance(obj, ISymbol):
        sign, c = i_to_li(obj)
    else:
        c = obj
    out = {}
    lines = []
    if a.kind in ("shuffle", "both"):
        asym = shuffle_asymptotic(c)
        val = shuffle_regularize(c)
        lines += [f"shuffle asymptotic: {asym}", f"shuffle-regularized: {val}"]
        out["shuffle"] = {"asymptotic": str(asym), "value": str(val)}
    if a.kind in ("stuffle", "both"):
        if not c.is_mzv:
            raise DomainError("stuffle regularization is implemented for MZV compositions")
        asym = stuffle_asymptotic(c)
        val = stuffle_regularize(c)
        lines += [f"stuffle asymptotic: {asym}", f"stuffle-regularized: {val}"]
        out["stuffle"] = {"asymptotic": str(asym), "value": str(val)}
    if a.kind == "both" and c.is_mzv:
        diff = compare_regularizations(c)
        lines.append(f"stuffle - shuffle: {diff}")
        out["difference"] = str(diff)
    return _emit(cfg, "regularize", "\n".join(lines), out)


def _check_resources(w: int, level: int, cfg: Config, allow_large: bool) -> None:
    if allow_large:
        return
    if w > cfg.max_weight or level > cfg.max_level:
        raise ResourceError(f"weight {w} / level {level} exceeds configured limits "
                            f"(max weight {cfg.max_weight}, max level {cfg.max_level})")


def cmd_relations(a, cfg: Config) -> str:
    from .double_shuffle import DoubleShuffleSolver, column_str, export_jsonl, reduce

    _check_resources(a.weight, a.level, cfg, a.allow_large)
    kinds = tuple(a.kinds.split(",")) if a.kinds else None
    kw = {"level": a.level, "threads": cfg.threads, "allow_large": a.allow_large}
    if kinds:
        kw["kinds"] = kinds
    solver = DoubleShuffleSolver(**kw)
    if a.emit == "rows":
        system = solver.generate(a.weight)
        text = export_jsonl(system).rstrip("\n")
        if cfg.fmt == "json":
            return _emit(cfg, "relations", text, [json.loads(l) for l in text.splitlines()])
        return text
    if a.emit == "dims":
        rep = reduce(solver.generate(a.weight))
        payload = json.loads(rep.to_json())
        return _emit(cfg, "relations", f"weight {a.weight} level {a.level}: rank {rep.rank}, "
                                       f"dimension bound {rep.dimension_bound}", payload)
    solver.solve_up_to(a.weight)
    lines = solver.solution_lines(a.weight)
    return _emit(cfg, "relations", "\n".join(lines), lines)


def cmd_dims(a, cfg: Config) -> str:
    from .double_shuffle import expected_dimensions, dimension_table

    _check_resources(a.max_weight, a.level, cfg, a.allow_large)
    kw = {"level": a.level, "threads": cfg.threads, "allow_large": a.allow_large}
    table = dimension_table(a.max_weight, **kw)
    expected = expected_dimensions(a.max_weight) if a.level == 1 else None
    lines = []
    rows = []
    for k, bound in enumerate(table, start=1):
        exp = expected[k] if expected else None
        lines.append(f"k={k}: {bound}" + (f" (d_k = {exp})" if exp is not None else ""))
        rows.append({"weight": k, "bound": bound, "expected": exp})
    return _emit(cfg, "dims", "\n".join(lines), rows)


def cmd_residue(a, cfg: Config) -> str:
    from .mzf_continuation import Hyperplane, residue

    if a.k < 0:
        raise DomainError("k must be >= 0")
    if a.depth > 4:
        raise ResourceError("depth above 4 is outside the supported range")
    r = residue(a.depth, Hyperplane(a.l, a.k))
    text = r.expanded()
    if a.beta:
        text += "\n" + r.beta_expansion()
    return _emit(cfg, "residue", text, r.to_json())


def cmd_nonpositive(a, cfg: Config) -> str:
    from .mzf_continuation import directional_discrepancy_check, format_discrepancy, value_at_nonpositive

    if a.discrepancy:
        rep = directional_discrepancy_check()
        payload = {k: (format_rational(v) if isinstance(v, Fraction) else v) for k, v in rep.items()}
        return _emit(cfg, "nonpositive", format_discrepancy(rep), payload)
    if not a.args:
        raise DomainError("give trailing arguments with --args or use --discrepancy")
    vals = [int(x) for x in a.args.split(",")]
    try:
        out = value_at_nonpositive(a.l, vals)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    if isinstance(out, Fraction):
        text = format_rational(out)
        return _emit(cfg, "nonpositive", text, text)
    text = str(out) or "0"
    return _emit(cfg, "nonpositive", text, _lc_json(out))


def _complex_list(text: str) -> List[complex]:
    return [complex(t.strip().replace("i", "j")) for t in text.split(",") if t.strip()]


def cmd_ordered_exp(a, cfg: Config) -> str:
    from .numerics import PLPath, ordered_exp

    verts = _complex_list(a.path)
    punct = _complex_list(a.punctures)
    if a.wmax > 6:
        raise ResourceError("w_max above 6 is outside the supported range")
    path = PLPath.tangential(verts, punct)
    s = ordered_exp(path, a.wmax, cfg.prec)
    if a.word is not None:
        words = [tuple(int(t) for t in a.word.split(",") if t.strip())]
    else:
        words = sorted(s.coeffs, key=lambda w: (len(w), w))
    lines, payload = [], []
    for w in words:
        v = s.coefficient(w)
        lines.append(f"{list(w)}: {v}")
        payload.append(dict(v.to_json(), word=list(w)))
    return _emit(cfg, "ordered-exp", "\n".join(lines), payload)


def cmd_check(a, cfg: Config) -> Tuple[str, int]:
    from . import checks

    results = checks.run_all(seed=cfg.seed, samples=a.samples, prec=cfg.prec, quick=a.quick)
    lines = [f"{name}: {p}/{t} passed" for name, p, t in results]
    failed = sum(t - p for _, p, t in results)
    lines.append("all suites passed" if not failed else f"{failed} failures")
    payload = [{"suite": n, "passed": p, "total": t} for n, p, t in results]
    return _emit(cfg, "check", "\n".join(lines), payload), (EXIT_OK if not failed else EXIT_FAIL)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mzv-forge", description="Exact and numeric tools for multiple zeta values and polylogarithms.")
    p.add_argument("--prec", type=int, default=None, help="working precision in bits (env MZV_FORGE_PREC)")
    p.add_argument("--threads", type=int, default=None, help="thread budget (env MZV_FORGE_THREADS)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=None, help="RNG seed for property suites")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="numeric value of zeta(...), Li(...; ...) or I(...)")
    s.add_argument("expr")
    for name in ("shuffle", "stuffle"):
        s = sub.add_parser(name, help=f"{name} product of two expressions")
        s.add_argument("left")
        s.add_argument("right")
    s = sub.add_parser("coproduct", help="Goncharov coproduct of an I-symbol")
    s.add_argument("expr")
    s.add_argument("--reduced", action="store_true")
    s.add_argument("--no-hooks", action="store_true", help="disable the torsion and level quotients")
    for name in ("cobracket", "antipode"):
        s = sub.add_parser(name)
        s.add_argument("expr")
    s = sub.add_parser("regularize", help="shuffle/stuffle regularization of a composition")
    s.add_argument("expr")
    s.add_argument("--kind", choices=("shuffle", "stuffle", "both"), default="both")
    s = sub.add_parser("relations", help="regularized double shuffle system")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--emit", choices=("rows", "dims", "solve"), default="solve")
    s.add_argument("--kinds", default=None, help="comma list among shuffle,stuffle,comparison,distribution")
    s.add_argument("--allow-large", action="store_true")
    s = sub.add_parser("dims", help="dimension bounds by weight")
    s.add_argument("--max-weight", type=int, default=8)
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--allow-large", action="store_true")
    s = sub.add_parser("residue", help="residue on s_l + ... + s_m = (m-l+1) - k")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--beta", action="store_true", help="also print the beta expansion")
    s = sub.add_parser("nonpositive", help="values with non-positive trailing arguments")
    s.add_argument("--l", type=int, default=1)
    s.add_argument("--args", default=None, help="comma list s_l..s_m")
    s.add_argument("--discrepancy", action="store_true")
    s = sub.add_parser("ordered-exp", help="ordered exponential along a PL path")
    s.add_argument("--path", required=True, help="comma list of complex vertices, e.g. 0,1")
    s.add_argument("--punctures", required=True)
    s.add_argument("--wmax", type=int, default=2)
    s.add_argument("--word", default=None, help="comma list of puncture indices")
    s = sub.add_parser("check", help="run the invariant suites")
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--quick", action="store_true")
    return p


COMMANDS: Dict[str, Callable] = {
    "eval": cmd_eval,
    "shuffle": lambda a, c: _product("shuffle", a, c),
    "stuffle": lambda a, c: _product("stuffle", a, c),
    "coproduct": cmd_coproduct,
    "cobracket": cmd_cobracket,
    "antipode": cmd_antipode,
    "regularize": cmd_regularize,
    "relations": cmd_relations,
    "dims": cmd_dims,
    "residue": cmd_residue,
    "nonpositive": cmd_nonpositive,
    "ordered-exp": cmd_ordered_exp,
    "check": cmd_check,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    from .double_shuffle import ResourceGuard
    from .numerics import DomainError as NumericDomainError, GeometryError

    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    cfg = Config.from_env()
    if a.prec is not None:
        cfg.prec = a.prec
    if a.threads is not None:
        cfg.threads = a.threads
    if a.seed is not None:
        cfg.seed = a.seed
    cfg.fmt = a.format

    def fail(code: int, reason: str, message: str) -> int:
        if cfg.fmt == "json":
            out.write(json.dumps({"schema": SCHEMA, "command": a.command, "error": {"reason": reason, "message": message}},
                                 sort_keys=True) + "\n")
        err.write(f"mzv-forge: {reason}: {message}\n")
        return code

    try:
        cfg.validate()
        result = COMMANDS[a.command](a, cfg)
    except ParseError as exc:
        return fail(EXIT_PARSE, "parse-error", exc.render() if exc.src else str(exc))
    except (ResourceError, ResourceGuard) as exc:
        return fail(EXIT_RESOURCE, "resource-limit", str(exc))
    except (DomainError, NumericDomainError, GeometryError, ValueError, ArithmeticError) as exc:
        return fail(EXIT_DOMAIN, "domain-error", str(exc))
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    out.write(result.rstrip("\n") + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
