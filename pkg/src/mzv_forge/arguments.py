"""The argument universe shared by letters, compositions and symbols.

An argument is either the zero point or a "unit" c * e(q) * x1^e1 * ... where
c is a positive rational, e(q) = exp(2 pi i q) a root of unity and the x's
formal atoms.  Negative rationals are folded into the root part (-1 = e(1/2)).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .exact_algebra import format_rational

__all__ = ["Arg", "ZERO_ARG", "ONE_ARG", "atom", "root", "number", "parse_arg"]


@dataclass(frozen=True, order=False)
class Arg:
    is_zero: bool = False
    coeff: Fraction = Fraction(1)
    rot: Fraction = Fraction(0)  # exponent q of e(q), in [0, 1)
    mono: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        key = (self.is_zero, self.coeff.numerator, self.coeff.denominator, self.rot.numerator, self.rot.denominator, self.mono)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Arg):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    # -- construction -----------------------------------------------------
    @staticmethod
    def make(coeff=1, rot=0, mono=None) -> "Arg":
        coeff = Fraction(coeff)
        rot = Fraction(rot)
        if coeff == 0:
            return ZERO_ARG
        if coeff < 0:
            coeff = -coeff
            rot += Fraction(1, 2)
        rot = rot - (rot.numerator // rot.denominator)
        m: Dict[str, int] = {}
        for name, e in (mono.items() if isinstance(mono, dict) else (mono or ())):
            m[name] = m.get(name, 0) + e
        mono_t = tuple(sorted((n, e) for n, e in m.items() if e))
        return Arg(False, coeff, rot, mono_t)

    # -- predicates -------------------------------------------------------
    @property
    def is_one(self) -> bool:
        return not self.is_zero and self.coeff == 1 and self.rot == 0 and not self.mono

    @property
    def is_exact(self) -> bool:
        """No formal atoms involved."""
        return self.is_zero or not self.mono

    @property
    def is_root_of_unity(self) -> bool:
        return not self.is_zero and self.coeff == 1 and not self.mono

    @property
    def level(self) -> int:
        """Order of the root-of-unity part (1 for non-roots and zero)."""
        return 1 if self.is_zero else self.rot.denominator

    # -- group law --------------------------------------------------------
    def __mul__(self, other: "Arg") -> "Arg":
        if self.is_zero or other.is_zero:
            return ZERO_ARG
        m = dict(self.mono)
        for n, e in other.mono:
            m[n] = m.get(n, 0) + e
        return Arg.make(self.coeff * other.coeff, self.rot + other.rot, m)

    def inverse(self) -> "Arg":
        if self.is_zero:
            raise ZeroDivisionError("zero argument is not invertible")
        return Arg.make(1 / self.coeff, -self.rot, {n: -e for n, e in self.mono})

    def __truediv__(self, other: "Arg") -> "Arg":
        return self * other.inverse()

    def __pow__(self, k: int) -> "Arg":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE_ARG
        for _ in range(k):
            out = out * self
        return out

    # -- numerics ---------------------------------------------------------
    def to_complex(self, ctx=None, values: Optional[Dict[str, complex]] = None):
        """Numeric value; formal atoms need ``values``."""
        import mpmath

        ctx = ctx or mpmath.mp
        if self.is_zero:
            return ctx.mpc(0)
        v = ctx.mpf(self.coeff.numerator) / self.coeff.denominator
        if self.rot:
            v = v * ctx.expjpi(2 * ctx.mpf(self.rot.numerator) / self.rot.denominator)
        for n, e in self.mono:
            if values is None or n not in values:
                raise ValueError(f"no numeric value for formal atom {n!r}")
            v = v * ctx.mpmathify(values[n]) ** e
        return ctx.mpc(v)

    # -- text -------------------------------------------------------------
    def __str__(self) -> str:
        return _format_arg(self)

    def __repr__(self) -> str:
        return f"Arg({self})"

    def sort_key(self) -> str:
        return str(self)


ZERO_ARG = Arg(is_zero=True)
ONE_ARG = Arg()


def atom(name: str, exp: int = 1) -> Arg:
    return Arg.make(1, 0, {name: exp})


def root(k: int, n: int) -> Arg:
    return Arg.make(1, Fraction(k, n))


def number(q) -> Arg:
    return Arg.make(Fraction(q))


@lru_cache(maxsize=None)
def _format_arg(a: Arg) -> str:
    if a.is_zero:
        return "0"
    neg = a.rot == Fraction(1, 2)
    parts = []
    if a.coeff != 1 or (not a.mono and (a.rot == 0 or neg)):
        parts.append(format_rational(a.coeff))
    if a.rot and not neg:
        parts.append(f"w{a.rot.numerator}/{a.rot.denominator}")
    for n, e in a.mono:
        parts.append(n if e == 1 else f"{n}^{e}")
    return ("-" if neg else "") + "*".join(parts)


_TOKEN = re.compile(r"\s*(?:(w)\s*(\d+)\s*/\s*(\d+)|(\d+)(?:\s*/\s*(\d+))?|([A-Za-z_][A-Za-z_0-9]*)(?:\s*\^\s*(-?\d+))?)\s*")


def parse_arg(text: str) -> Arg:
    """Parse the textual argument form produced by ``str(Arg)``."""
    s = text.strip()
    if not s:
        raise ValueError("empty argument")
    neg = False
    if s.startswith("-"):
        neg, s = True, s[1:].lstrip()
    out = ONE_ARG
    pos = 0
    first = True
    while True:
        if not first:
            if pos >= len(s):
                break
            if s[pos] != "*":
                raise ValueError(f"unexpected {s[pos]!r} in argument {text!r}")
            pos += 1
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad argument {text!r}")
        pos = m.end()
        first = False
        if m.group(1):
            k, n = int(m.group(2)), int(m.group(3))
            if n < 1:
                raise ValueError("root of unity level must be >= 1")
            out = out * root(k, n)
        elif m.group(4) is not None:
            num = int(m.group(4))
            den = int(m.group(5)) if m.group(5) else 1
            if den == 0:
                raise ValueError("zero denominator")
            if num == 0:
                return ZERO_ARG
            out = out * number(Fraction(num, den))
        else:
            name = m.group(6)
            if name == "w":
                raise ValueError("'w' is reserved for roots of unity")
            out = out * atom(name, int(m.group(7)) if m.group(7) else 1)
        if pos >= len(s):
            break
    if neg:
        out = out * number(-1)
    return out
