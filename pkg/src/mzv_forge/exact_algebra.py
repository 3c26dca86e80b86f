"""Exact arithmetic substrate: rationals, sparse polynomials, rational
functions, sparse linear combinations and Bernoulli numbers.

Rationals are :class:`fractions.Fraction`; everything else is built on top.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, Generic, Hashable, Iterable, Iterator, Mapping, Tuple, TypeVar, Union

Rational = Fraction
Number = Union[int, Fraction]

__all__ = [
    "Rational",
    "rational_arith",
    "format_rational",
    "parse_rational",
    "MultiPoly",
    "RatFunc",
    "LinComb",
    "bernoulli",
    "zeta_nonpositive",
    "binom_poly",
]


def rational_arith(a: Number, b: Number, op: str) -> Fraction:
    a, b = Fraction(a), Fraction(b)
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        if b == 0:
            raise ZeroDivisionError("division by zero rational")
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def format_rational(q: Number) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


# ---------------------------------------------------------------------------
# sparse linear combinations

K = TypeVar("K", bound=Hashable)


def _default_key(k: object) -> str:
    return str(k)


class LinComb(Generic[K]):
    """Sparse rational combination of hashable keys.

    Zero coefficients are never stored.  Iteration order is the lexicographic
    order of ``str(key)`` so that printing is deterministic.
    """

    __slots__ = ("_d",)

    def __init__(self, data: Union[Mapping[K, Number], Iterable[Tuple[K, Number]], None] = None):
        d: Dict[K, Fraction] = {}
        if data is not None:
            items = data.items() if isinstance(data, Mapping) else data
            for k, c in items:
                if c:
                    v = d.get(k, 0) + Fraction(c)
                    if v:
                        d[k] = v
                    else:
                        d.pop(k, None)
        self._d = d

    @classmethod
    def term(cls, key: K, coef: Number = 1) -> "LinComb[K]":
        return cls({key: coef})

    def add_term(self, key: K, coef: Number) -> None:
        """In-place accumulation (only use on combinations you own)."""
        if not coef:
            return
        v = self._d.get(key, 0) + coef
        if v:
            self._d[key] = Fraction(v)
        else:
            self._d.pop(key, None)

    def copy(self) -> "LinComb[K]":
        out = LinComb()
        out._d = dict(self._d)
        return out

    def __bool__(self) -> bool:
        return bool(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __contains__(self, key: object) -> bool:
        return key in self._d

    def __getitem__(self, key: K) -> Fraction:
        return self._d.get(key, Fraction(0))

    def keys(self):
        return self._d.keys()

    def raw(self) -> Dict[K, Fraction]:
        return self._d

    def items(self, key: Callable[[K], object] = _default_key) -> Iterator[Tuple[K, Fraction]]:
        return iter(sorted(self._d.items(), key=lambda kv: key(kv[0])))

    def __iter__(self) -> Iterator[K]:
        return (k for k, _ in self.items())

    def __add__(self, other: "LinComb[K]") -> "LinComb[K]":
        out = self.copy()
        for k, c in other._d.items():
            out.add_term(k, c)
        return out

    def __sub__(self, other: "LinComb[K]") -> "LinComb[K]":
        out = self.copy()
        for k, c in other._d.items():
            out.add_term(k, -c)
        return out

    def __neg__(self) -> "LinComb[K]":
        return self.scale(-1)

    def scale(self, c: Number) -> "LinComb[K]":
        out = LinComb()
        if c:
            out._d = {k: v * c for k, v in self._d.items()}
        return out

    __rmul__ = scale

    def map_keys(self, f: Callable[[K], object]) -> "LinComb":
        return LinComb((f(k), c) for k, c in self._d.items())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LinComb):
            return self._d == other._d
        if other == 0:
            return not self._d
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._d.items()))

    def format(self, key_str: Callable[[K], str] = str) -> str:
        if not self._d:
            return "0"
        parts = []
        for k, c in self.items():
            ks = key_str(k)
            if c == 1:
                term = ks
            elif c == -1:
                term = "-" + ks
            else:
                term = f"{format_rational(c)}*{ks}"
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LinComb({self.format()})"


# ---------------------------------------------------------------------------
# multivariate polynomials

Monomial = Tuple[Tuple[str, int], ...]

_VAR_RE = re.compile(r"([^\d]*)(\d*)")


def _var_key(name: str) -> Tuple[str, int]:
    m = _VAR_RE.fullmatch(name)
    if m and m.group(2):
        return (m.group(1), int(m.group(2)))
    return (name, -1)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(((v, e) for v, e in d.items() if e), key=lambda t: _var_key(t[0])))


class MultiPoly:
    """Sparse polynomial over Q in named variables.

    >>> s = MultiPoly.var("s2")
    >>> str((s + 1) * (s - 1))
    's2^2 - 1'
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Union[Mapping[Monomial, Number], None] = None):
        self.terms: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)

    @classmethod
    def const(cls, c: Number) -> "MultiPoly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls({((name, 1),): 1})

    @staticmethod
    def coerce(x: Union["MultiPoly", Number]) -> "MultiPoly":
        return x if isinstance(x, MultiPoly) else MultiPoly.const(x)

    @property
    def variables(self) -> Tuple[str, ...]:
        names = {v for m in self.terms for v, _ in m}
        return tuple(sorted(names, key=_var_key))

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self) -> Fraction:
        if any(m for m in self.terms):
            raise ValueError("polynomial is not constant")
        return self.terms.get((), Fraction(0))

    def __add__(self, other: Union["MultiPoly", Number]) -> "MultiPoly":
        other = MultiPoly.coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Union["MultiPoly", Number]) -> "MultiPoly":
        return self + (-MultiPoly.coerce(other))

    def __rsub__(self, other: Number) -> "MultiPoly":
        return MultiPoly.coerce(other) - self

    def __mul__(self, other: Union["MultiPoly", Number]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = Fraction(other)
            return MultiPoly({m: v * c for m, v in self.terms.items()}) if c else MultiPoly()
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        out = MultiPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def evaluate(self, point: Mapping[str, object]):
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = t * point[v] ** e
            total = total + t
        return total

    def substitute(self, name: str, value: Union["MultiPoly", Number]) -> "MultiPoly":
        value = MultiPoly.coerce(value)
        out = MultiPoly()
        for m, c in self.terms.items():
            rest = tuple((v, e) for v, e in m if v != name)
            e = dict(m).get(name, 0)
            out = out + MultiPoly({rest: c}) * (value ** e)
        return out

    def divide_by_var(self, name: str) -> "MultiPoly":
        """Exact division by a single variable; raises if not divisible."""
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(name, 0) < 1:
                raise ValueError(f"not divisible by {name}")
            d[name] -= 1
            out[tuple(sorted(((v, e) for v, e in d.items() if e), key=lambda t: _var_key(t[0])))] = c
        return MultiPoly(out)

    def _sorted_terms(self):
        def key(item):
            m, _ = item
            deg = sum(e for _, e in m)
            return (-deg, [(_var_key(v), -e) for v, e in m])

        return sorted(self.terms.items(), key=key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self._sorted_terms():
            mon = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mon:
                parts.append(format_rational(c))
            else:
                # s2/12 rather than 1/12*s2
                sign = "-" if c < 0 else ""
                num, den = abs(c.numerator), c.denominator
                body = mon if num == 1 else f"{num}*{mon}"
                parts.append(sign + body + ("" if den == 1 else f"/{den}"))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __repr__ = __str__


class RatFunc:
    """Quotient of two polynomials; equality by cross multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: Union[MultiPoly, Number], den: Union[MultiPoly, Number] = 1):
        self.num = MultiPoly.coerce(num)
        self.den = MultiPoly.coerce(den)
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")
        # keep constant denominators folded in
        if not any(m for m in self.den.terms):
            c = self.den.constant_value()
            self.num = self.num * (1 / c)
            self.den = MultiPoly.const(1)

    @staticmethod
    def coerce(x: Union["RatFunc", MultiPoly, Number]) -> "RatFunc":
        return x if isinstance(x, RatFunc) else RatFunc(x)

    def __add__(self, other):
        o = RatFunc.coerce(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __mul__(self, other):
        o = RatFunc.coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc.coerce(other)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, MultiPoly)):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RatFunc is unhashable")

    def is_polynomial(self) -> bool:
        return self.den == MultiPoly.const(1)

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return self.num

    def substitute(self, name: str, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            raise TypeError("substitute a polynomial")
        return RatFunc(self.num.substitute(name, value), self.den.substitute(name, value))

    def residue(self, name: str) -> "RatFunc":
        """Residue at ``name = 0`` of a function with at most a simple pole there."""
        den = self.den
        try:
            den = den.divide_by_var(name)
        except ValueError:
            return RatFunc(0)
        if den.substitute(name, 0).is_zero():
            raise ValueError("pole of order > 1")
        return RatFunc(self.num.substitute(name, 0), den.substitute(name, 0))

    def evaluate(self, point):
        return self.num.evaluate(point) / self.den.evaluate(point)

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        n, d = str(self.num), str(self.den)
        if len(self.num.terms) > 1:
            n = f"({n})"
        return f"{n}/({d})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Bernoulli numbers and zeta at non-positive integers

_bern_lock = threading.Lock()
_bern: list = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """B_n with the convention x/(e^x - 1), so B_1 = -1/2."""
    if n < 0:
        raise ValueError("negative index")
    if n < len(_bern):
        return _bern[n]
    with _bern_lock:
        while len(_bern) <= n:
            m = len(_bern)
            s = sum(comb(m + 1, k) * _bern[k] for k in range(m))
            _bern.append(-s / (m + 1))
        return _bern[n]


def zeta_nonpositive(n: int) -> Fraction:
    if n > 0:
        raise ValueError(f"zeta_nonpositive needs n <= 0, got {n}")
    if n == 0:
        return Fraction(-1, 2)
    k = 1 - n
    return -bernoulli(k) / k


def binom_poly(top: Union[MultiPoly, Number], k: int) -> Union[MultiPoly, RatFunc]:
    """Generalized binomial ``C(top, k)`` for polynomial ``top``.

    k >= 0 gives the falling-factorial polynomial; k = -1 gives 1/(top+1),
    allowed only when ``top`` has degree <= 1.
    """
    top = MultiPoly.coerce(top)
    if k < -1:
        raise ValueError("k must be >= -1")
    if k == -1:
        if top.degree() > 1:
            raise ValueError("C(top, -1) needs a degree-1 top")
        return RatFunc(1, top + 1)
    out = MultiPoly.const(1)
    for i in range(k):
        out = out * (top - i)
    return out * Fraction(1, factorial(k))
