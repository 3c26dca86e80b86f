"""Multiprecision numerics for multiple polylogarithms and iterated integrals.

Two independent evaluation routes:

* ``li_eval``: truncated nested sums with a majorant tail bound. Points on
  the unit circle are handled by splitting the path 0 -> 1 at 1/2 and
  reflecting the right half, which turns every factor into a geometrically
  convergent nested sum.
* ``ordered_exp``: the generating series of all iterated integrals along a
  piecewise-linear path, transported by power-series stepping of the
  connection dS = S * sum_j X_j dt/(t - z_j). Tangential endpoints at
  punctures use the local solution ((t - z)/v)^{X_z} H(t) exactly.

All values carry an error radius. Radii for nested sums are rigorous
majorant bounds plus a rounding allowance; radii for the power-series
transport are estimated from the last computed terms.
"""

from __future__ import annotations

import cmath
import math
import random
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import mpmath

from .arguments import Arg
from .words_and_products import Composition, composition, is_convergent, mzv_word, shuffle_counts

__all__ = [
    "DomainError",
    "GeometryError",
    "BigComplex",
    "PLPath",
    "TensorSeries",
    "li_eval",
    "iterated_integral_eval",
    "ordered_exp",
    "iterated_integral_path",
    "zeta_via_ordered_exp",
    "diff_eq_check",
    "griffiths_check",
    "monodromy_check",
    "loop_check",
    "distribution_check",
    "bloch_wigner",
    "five_term_check",
    "five_term_samples",
    "double_log_period_matrix",
    "period_matrix_check",
    "group_like_residual",
    "relation_residuals",
]

GUARD_BITS = 24
_lock = threading.RLock()
Number = Union[int, float, complex, "mpmath.mpc", "mpmath.mpf"]


class DomainError(ValueError):
    pass


class GeometryError(ValueError):
    pass


@contextmanager
def working_precision(prec: int) -> Iterator[None]:
    """mpmath's context is global; hold a lock while it is changed."""
    with _lock:
        with mpmath.workprec(prec + GUARD_BITS):
            yield


def _c(x) -> "mpmath.mpc":
    if isinstance(x, Arg):
        return x.to_complex()
    return mpmath.mpc(x)


# ---------------------------------------------------------------------------
# BigComplex


@dataclass(frozen=True)
class BigComplex:
    value: "mpmath.mpc"
    radius: "mpmath.mpf"
    prec: int

    # mpmath rounds every operation to the global precision, so each
    # operation below runs at this value's own precision

    @staticmethod
    def exact(x, prec: int) -> "BigComplex":
        with working_precision(prec):
            return BigComplex(mpmath.mpc(x), mpmath.mpf(0), prec)

    def _rounding(self, v) -> "mpmath.mpf":
        return abs(v) * mpmath.ldexp(1, -self.prec - GUARD_BITS + 2)

    def __add__(self, other: "BigComplex") -> "BigComplex":
        o = other if isinstance(other, BigComplex) else BigComplex.exact(other, self.prec)
        with working_precision(max(self.prec, o.prec)):
            v = self.value + o.value
            return BigComplex(v, self.radius + o.radius + self._rounding(v), min(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self) -> "BigComplex":
        with working_precision(self.prec):
            return BigComplex(-self.value, self.radius, self.prec)

    def __sub__(self, other: "BigComplex") -> "BigComplex":
        o = other if isinstance(other, BigComplex) else BigComplex.exact(other, self.prec)
        return self + (-o)

    def __mul__(self, other) -> "BigComplex":
        o = other if isinstance(other, BigComplex) else BigComplex.exact(other, self.prec)
        with working_precision(max(self.prec, o.prec)):
            v = self.value * o.value
            r = abs(self.value) * o.radius + abs(o.value) * self.radius + self.radius * o.radius
            return BigComplex(v, r + self._rounding(v), min(self.prec, o.prec))

    __rmul__ = __mul__

    def contains(self, x, slack: float = 0.0) -> bool:
        with working_precision(self.prec):
            return abs(self.value - mpmath.mpc(x)) <= self.radius + slack

    def __complex__(self) -> complex:
        return complex(self.value)

    def to_json(self) -> dict:
        digits = max(10, int(self.prec * 0.30103))
        return {
            "re": mpmath.nstr(self.value.real, digits),
            "im": mpmath.nstr(self.value.imag, digits),
            "radius": mpmath.nstr(self.radius, 5),
            "precision_bits": self.prec,
        }

    def __str__(self) -> str:
        digits = max(10, int(self.prec * 0.30103))
        return f"{mpmath.nstr(self.value, digits)} +/- {mpmath.nstr(self.radius, 3)}"


# ---------------------------------------------------------------------------
# nested sums


def _tail_products(xs: Sequence) -> List:
    out = []
    acc = mpmath.mpc(1)
    for x in reversed(xs):
        acc = acc * x
        out.append(acc)
    return list(reversed(out))


def _interior_terms(ns: Sequence[int], R, target) -> int:
    """Smallest K whose majorant tail sum_{k>K} C(k-1,m-1) R^k / k^{n_m} < target."""
    m = len(ns)
    nm = ns[-1]
    K = max(m, 8)
    while True:
        k = K + 1
        q = R * mpmath.mpf(k) / (k + 1 - m) if k + 1 > m else mpmath.mpf(2)
        if q < 1:
            term = mpmath.binomial(k - 1, m - 1) * R ** k / mpmath.mpf(k) ** nm
            bound = term / (1 - q)
            if bound < target:
                return K, bound
        K = int(K * 1.25) + 4
        if K > 10 ** 6:
            raise DomainError("nested sum needs more than 10^6 terms")


def _nested_sum(ns: Sequence[int], xs: Sequence, K: int):
    """sum over 0 < k_1 < ... < k_m <= K of prod x_i^{k_i} / k_i^{n_i}."""
    m = len(ns)
    acc = [mpmath.mpc(1)] + [mpmath.mpc(0)] * m
    pw = [mpmath.mpc(1)] * m
    for k in range(1, K + 1):
        kk = mpmath.mpf(k)
        for j in range(m):
            pw[j] = pw[j] * xs[j]
        for j in range(m, 0, -1):
            acc[j] = acc[j] + acc[j - 1] * pw[j - 1] / kk ** ns[j - 1]
    return acc[m]


def _li_interior(ns: Sequence[int], xs: Sequence, prec: int, tol_bits: Optional[int] = None):
    """(value, radius) for a nested sum whose tail products all lie in |y| < 1."""
    if not ns:
        return mpmath.mpc(1), mpmath.mpf(0)
    ys = _tail_products(xs)
    R = max(abs(y) for y in ys)
    if R >= 1:
        raise DomainError("interior mode needs every tail product |x_i...x_m| < 1")
    target = mpmath.ldexp(1, -(tol_bits if tol_bits is not None else prec) - 2)
    K, bound = _interior_terms(ns, R, target)
    v = _nested_sum(ns, xs, K)
    rounding = mpmath.ldexp(1, -prec - GUARD_BITS + 8) * K * len(ns) * max(1, abs(v))
    return v, bound + rounding


def _word_blocks(letters: Sequence, z) -> Tuple[List[int], List]:
    """I(0; letters; z) = (-1)^s Li_{ns}(xs) for a word whose first letter is nonzero."""
    if not letters:
        return [], []
    if letters[0] == 0:
        raise DomainError("word must start with a nonzero letter")
    cs: List = []
    ns: List[int] = []
    for b in letters:
        if b == 0:
            ns[-1] += 1
        else:
            cs.append(mpmath.mpc(b) / z)
            ns.append(1)
    xs = [cs[i + 1] / cs[i] for i in range(len(cs) - 1)] + [1 / cs[-1]]
    return ns, xs


def iterated_integral_eval(letters: Sequence, z, prec: int = 128, tol_bits: Optional[int] = None):
    """I(0; letters; z) by a nested sum; every nonzero letter must satisfy |b| > |z|."""
    with working_precision(prec):
        letters = [_c(b) for b in letters]
        z = _c(z)
        ns, xs = _word_blocks(letters, z)
        v, r = _li_interior(ns, xs, prec, tol_bits)
        if len(ns) % 2:
            v = -v
        return BigComplex(v, r, prec)


def _split_eval(letters: Sequence, prec: int, tol_bits: Optional[int]):
    """I(0; letters; 1) via composition at 1/2 and the reflection t -> 1 - t."""
    half = mpmath.mpf(1) / 2
    n = len(letters)
    total = BigComplex.exact(0, prec)
    for k in range(n + 1):
        left_word = letters[:k]
        right_word = [1 - a for a in reversed(letters[k:])]
        for w in (left_word, right_word):
            for b in w:
                if b != 0 and abs(b) <= half * (1 + mpmath.mpf(2) ** -20):
                    raise DomainError("split mode needs nonzero letters with |b| > 1/2 on both halves")
        if left_word and left_word[0] == 0:
            raise DomainError("divergent at 0")
        if right_word and right_word[0] == 0:
            raise DomainError("divergent at 1: last letter equals 1")
        lns, lxs = _word_blocks(left_word, half)
        rns, rxs = _word_blocks(right_word, half)
        lv, lr = _li_interior(lns, lxs, prec, tol_bits)
        rv, rr = _li_interior(rns, rxs, prec, tol_bits)
        if len(lns) % 2:
            lv = -lv
        if (len(rns) + (n - k)) % 2:
            rv = -rv
        total = total + BigComplex(lv, lr, prec) * BigComplex(rv, rr, prec)
    return total


def _composition_data(c, args) -> Tuple[List[int], List]:
    if isinstance(c, Composition):
        ns = list(c.indices)
        if args is None:
            args = list(c.args)
    else:
        ns = [int(n) for n in c]
        if args is None:
            args = [1] * len(ns)
    if len(args) != len(ns):
        raise DomainError("indices and arguments differ in length")
    if any(n < 1 for n in ns):
        raise DomainError("indices must be positive")
    return ns, [_c(x) for x in args]


def li_eval(c, args: Optional[Sequence] = None, prec: int = 128, mode: str = "auto",
            delta: float = 1e-3, tol_bits: Optional[int] = None) -> BigComplex:
    """Li_{n_1..n_m}(x_1..x_m) = sum_{0<k_1<...<k_m} prod x_i^{k_i}/k_i^{n_i}.

    ``mode``: "interior" (all tail products |x_i...x_m| < 1 - delta),
    "boundary" (path splitting; tail products may reach modulus 1, needs a
    convergent last entry), or "auto".
    """
    with working_precision(prec):
        ns, xs = _composition_data(c, args)
        if not ns:
            return BigComplex.exact(1, prec)
        ys = _tail_products(xs)
        for i, y in enumerate(ys):
            if abs(y) > 1 + mpmath.mpf(10) ** -30:
                raise DomainError(f"divergent: |x_{i + 1}...x_{len(ns)}| = {mpmath.nstr(abs(y), 8)} > 1")
        R = max(abs(y) for y in ys)
        if mode == "auto":
            mode = "interior" if R < 1 - delta else "boundary"
        if mode == "interior":
            if R >= 1 - delta:
                raise DomainError("interior mode needs every tail product strictly inside 1 - delta")
            v, r = _li_interior(ns, xs, prec, tol_bits)
            return BigComplex(v, r, prec)
        if mode != "boundary":
            raise ValueError(f"unknown mode {mode!r}")
        if ns[-1] == 1 and abs(ys[-1] - 1) < mpmath.mpf(10) ** -30:
            raise DomainError("divergent: last entry is (1, 1)")
        letters: List = []
        for n, y in zip(ns, ys):
            letters.append(1 / y)
            letters.extend([mpmath.mpc(0)] * (n - 1))
        out = _split_eval(letters, prec, tol_bits)
        return out if len(ns) % 2 == 0 else -out


# ---------------------------------------------------------------------------
# tensor series and path transport


Word = Tuple[int, ...]


def _all_words(r: int, w_max: int) -> List[Word]:
    out: List[Word] = [()]
    layer: List[Word] = [()]
    for _ in range(w_max):
        layer = [w + (j,) for w in layer for j in range(r)]
        out.extend(layer)
    return out


@dataclass
class TensorSeries:
    """Truncated series sum_w c_w X_w in letters indexed by puncture position."""

    punctures: Tuple
    w_max: int
    coeffs: Dict[Word, "mpmath.mpc"]
    radius: "mpmath.mpf"
    prec: int

    @staticmethod
    def one(punctures, w_max: int, prec: int) -> "TensorSeries":
        return TensorSeries(tuple(punctures), w_max, {(): mpmath.mpc(1)}, mpmath.mpf(0), prec)

    def __getitem__(self, w: Word):
        return self.coeffs.get(tuple(w), mpmath.mpc(0))

    def coefficient(self, w: Sequence[int]) -> BigComplex:
        return BigComplex(self[tuple(w)], self.radius, self.prec)

    def max_abs(self):
        return max((abs(v) for v in self.coeffs.values()), default=mpmath.mpf(0))

    def __mul__(self, other: "TensorSeries") -> "TensorSeries":
        with working_precision(self.prec):
            out: Dict[Word, "mpmath.mpc"] = {}
            for u, a in self.coeffs.items():
                if a == 0:
                    continue
                room = self.w_max - len(u)
                for v, b in other.coeffs.items():
                    if len(v) <= room:
                        w = u + v
                        out[w] = out.get(w, 0) + a * b
            r = (self.w_max + 1) * (self.max_abs() * other.radius + other.max_abs() * self.radius
                                    + self.radius * other.radius)
            return TensorSeries(self.punctures, self.w_max, out, r, min(self.prec, other.prec))

    def inverse(self) -> "TensorSeries":
        """(1 - (1 - S))^{-1} as a finite geometric series."""
        with working_precision(self.prec):
            d = TensorSeries(self.punctures, self.w_max,
                             {w: -v for w, v in self.coeffs.items() if w}, self.radius, self.prec)
            out = TensorSeries.one(self.punctures, self.w_max, self.prec)
            power = TensorSeries.one(self.punctures, self.w_max, self.prec)
            for _ in range(self.w_max):
                power = power * d
                merged = dict(out.coeffs)
                for w, v in power.coeffs.items():
                    merged[w] = merged.get(w, 0) + v
                out = TensorSeries(self.punctures, self.w_max, merged, out.radius + power.radius, self.prec)
            return out

    def word_str(self, w: Word) -> str:
        return "(" + ", ".join(mpmath.nstr(_c(self.punctures[j]), 6) for j in w) + ")"


def _exp_letter(punctures, j: int, c, w_max: int, prec: int) -> TensorSeries:
    coeffs = {(): mpmath.mpc(1)}
    term = mpmath.mpc(1)
    for k in range(1, w_max + 1):
        term = term * c / k
        coeffs[(j,) * k] = term
    return TensorSeries(tuple(punctures), w_max, coeffs, mpmath.mpf(0), prec)


def _orders(prec: int, w_max: int) -> int:
    return prec + 10 * w_max + 40


def _local_series(center, zs: Sequence, sing: Optional[int], tau, w_max: int, prec: int) -> TensorSeries:
    """Value at center + tau of the local solution normalised to 1 at the center.

    Regular center: transport T(center -> center + tau). Puncture center
    (``sing`` = its index): the holomorphic factor H in ((t-z)^{X}) H(t).
    Requires |tau| <= rho/2 with rho the distance to the other punctures.
    """
    r = len(zs)
    d = [center - z for z in zs]
    words = _all_words(r, w_max)[1:]
    prefixes = _all_words(r, w_max - 1)
    N = _orders(prec, w_max)
    H: Dict[Word, "mpmath.mpc"] = {(): mpmath.mpc(1)}
    val: Dict[Word, "mpmath.mpc"] = {(): mpmath.mpc(1)}
    for w in words:
        H[w] = mpmath.mpc(0)
        val[w] = mpmath.mpc(0)
    # g[(u, j)] = current coefficient of H[u] / (d_j + tau)
    g: Dict[Tuple[Word, int], "mpmath.mpc"] = {}
    for u in prefixes:
        for j in range(r):
            if j != sing:
                g[(u, j)] = H[u] / d[j]
    taupow = mpmath.mpc(1)
    tail: List = []
    for n in range(1, N + 1):
        taupow = taupow * tau
        Hn: Dict[Word, "mpmath.mpc"] = {(): mpmath.mpc(0)}
        for w in words:
            j = w[-1]
            acc = g[(w[:-1], j)] if j != sing else mpmath.mpc(0)
            if sing is not None:
                if j == sing:
                    acc = acc + Hn[w[:-1]]
                if w[0] == sing:
                    acc = acc - Hn[w[1:]]
            Hn[w] = acc / n
        for key in g:
            u, j = key
            g[key] = (Hn[u] - g[key]) / d[j]
        step_max = mpmath.mpf(0)
        for w in words:
            t = Hn[w] * taupow
            val[w] = val[w] + t
            a = abs(t)
            if a > step_max:
                step_max = a
        tail.append(step_max)
    # remaining terms shrink at least geometrically with ratio ~ |tau|/rho <= 1/2
    est = 4 * max(tail[-4:]) + mpmath.ldexp(1, -prec - GUARD_BITS + 8) * N
    return TensorSeries(tuple(zs), w_max, val, est, prec)


@dataclass
class PLPath:
    """Piecewise-linear path; endpoints in the puncture set need tangent vectors."""

    vertices: Tuple
    punctures: Tuple
    start_tangent: Optional[complex] = None
    end_tangent: Optional[complex] = None
    closure: str = "ccw"

    def __post_init__(self):
        self.vertices = tuple(mpmath.mpc(v) for v in self.vertices)
        self.punctures = tuple(mpmath.mpc(z) for z in self.punctures)
        if len(self.vertices) < 2:
            raise GeometryError("a path needs at least two vertices")
        if self.closure not in ("ccw", "cw"):
            raise ValueError("closure must be 'ccw' or 'cw'")

    @classmethod
    def tangential(cls, vertices, punctures, closure: str = "ccw") -> "PLPath":
        """Unit tangent vectors pointing along the path at puncture endpoints."""
        vs = [mpmath.mpc(v) for v in vertices]
        zs = [mpmath.mpc(z) for z in punctures]
        st = en = None
        if any(abs(vs[0] - z) == 0 for z in zs):
            d = vs[1] - vs[0]
            st = d / abs(d)
        if any(abs(vs[-1] - z) == 0 for z in zs):
            d = vs[-2] - vs[-1]
            en = d / abs(d)
        return cls(tuple(vs), tuple(zs), st, en, closure)

    def puncture_index(self, p: complex) -> Optional[int]:
        for i, z in enumerate(self.punctures):
            if p == z:
                return i
        return None

    def validate(self) -> None:
        vs, zs = self.vertices, self.punctures
        for a, b in zip(vs, vs[1:]):
            if a == b:
                raise GeometryError("degenerate segment")
            for z in zs:
                if z in (a, b):
                    continue
                # distance from z to segment [a, b]
                t = ((z - a) * (b - a).conjugate()).real / abs(b - a) ** 2
                t = min(mpmath.mpf(1), max(mpmath.mpf(0), t))
                if abs(a + t * (b - a) - z) < 1e-12:
                    raise GeometryError(f"segment {a} -> {b} touches puncture {z}")
        for v in vs[1:-1]:
            if self.puncture_index(v) is not None:
                raise GeometryError(f"interior vertex {v} is a puncture")
        if self.puncture_index(vs[0]) is not None and self.start_tangent is None:
            raise GeometryError("start lies on a puncture: tangent vector required")
        if self.puncture_index(vs[-1]) is not None and self.end_tangent is None:
            raise GeometryError("end lies on a puncture: tangent vector required")

    def reversed(self) -> "PLPath":
        return PLPath(tuple(reversed(self.vertices)), self.punctures, self.end_tangent, self.start_tangent, self.closure)


def _rho(p, zs, skip: Optional[int] = None):
    return min((abs(p - z) for i, z in enumerate(zs) if i != skip), default=mpmath.inf)


def _tangent_log(p, z, v, closure: str):
    ratio = (p - z) / v
    lg = mpmath.log(ratio)
    # opposite tangent: choose the closure orientation instead of the principal branch
    if abs(abs(lg.imag) - mpmath.pi) < mpmath.mpf(10) ** -20:
        lg = mpmath.mpc(lg.real, mpmath.pi if closure == "ccw" else -mpmath.pi)
    return lg


def ordered_exp(path: PLPath, w_max: int, prec: int = 128) -> TensorSeries:
    """Truncated ordered exponential along ``path``; coefficient of (j_1..j_n)
    is the (regularized) iterated integral of dlog(t - z_{j_1}) ... dlog(t - z_{j_n})."""
    if not 0 <= w_max <= 6:
        raise ValueError("w_max must be in 0..6")
    path.validate()
    with working_precision(prec):
        zs = [mpmath.mpc(z) for z in path.punctures]
        vs = [mpmath.mpc(v) for v in path.vertices]
        total = TensorSeries.one(zs, w_max, prec)
        si = path.puncture_index(path.vertices[0])
        ei = path.puncture_index(path.vertices[-1])
        # start: ((p - z)/v)^{X} H(p) with p on the first segment
        start = vs[0]
        if si is not None:
            z = zs[si]
            rho = _rho(z, zs, si)
            seg = vs[1] - z
            p = z + seg / abs(seg) * min(abs(seg), rho / 2)
            H = _local_series(z, zs, si, p - z, w_max, prec)
            lg = _tangent_log(p, z, mpmath.mpc(path.start_tangent), path.closure)
            total = _exp_letter(zs, si, lg, w_max, prec) * H
            start = p
        # end point before the final local expansion
        end = vs[-1]
        end_local = None
        if ei is not None:
            z = zs[ei]
            rho = _rho(z, zs, ei)
            seg = vs[-2] - z
            q = z + seg / abs(seg) * min(abs(seg), rho / 2)
            H = _local_series(z, zs, ei, q - z, w_max, prec)
            lg = _tangent_log(q, z, mpmath.mpc(path.end_tangent), path.closure)
            end_local = H.inverse() * _exp_letter(zs, ei, -lg, w_max, prec)
            end = q
        pts = [start] + vs[1:-1] + [end]
        for a, b in zip(pts, pts[1:]):
            total = total * _transport_segment(a, b, zs, w_max, prec)
        if end_local is not None:
            total = total * end_local
        return total


def _transport_segment(a, b, zs, w_max: int, prec: int) -> TensorSeries:
    out = TensorSeries.one(zs, w_max, prec)
    c = a
    steps = 0
    while True:
        remaining = b - c
        if abs(remaining) == 0:
            break
        rho = _rho(c, zs)
        if rho == 0:
            raise GeometryError("path passes through a puncture")
        if abs(remaining) <= rho / 2:
            h = remaining
        else:
            h = remaining / abs(remaining) * (rho / 2)
        out = out * _local_series(c, zs, None, h, w_max, prec)
        c = c + h
        if h == remaining:
            break
        steps += 1
        if steps > 10000:
            raise GeometryError("too many steps: path runs too close to a puncture")
    return out


def iterated_integral_path(a0, letters: Sequence, a_end, prec: int = 128,
                           via: Optional[Sequence] = None) -> BigComplex:
    """I(a0; letters; a_end) along the PL path a0 -> via... -> a_end."""
    pts = sorted({mpmath.mpc(x) for x in letters}, key=lambda z: (z.real, z.imag))
    idx = {z: i for i, z in enumerate(pts)}
    verts = [a0] + list(via or []) + [a_end]
    path = PLPath.tangential(verts, pts)
    s = ordered_exp(path, len(letters), prec)
    return s.coefficient(tuple(idx[mpmath.mpc(x)] for x in letters))


def zeta_via_ordered_exp(ns: Sequence[int], prec: int = 128) -> BigComplex:
    """ζ(n_1..n_m) = (-1)^m I(0; mzv word; 1) read off the 0 -> 1 series."""
    c = composition(list(ns))
    if not is_convergent(c):
        raise DomainError("divergent composition")
    w = [0 if a.is_zero else 1 for a in mzv_word(c)]
    path = PLPath.tangential([0, 1], [0, 1])
    s = ordered_exp(path, len(w), prec)
    v = s.coefficient(tuple(w))
    return v if len(ns) % 2 == 0 else -v


def group_like_residual(s: TensorSeries) -> Tuple["mpmath.mpf", "mpmath.mpf"]:
    """(max |S_u S_v - sum_{w in u sh v} S_w|, tracked bound) over |u|+|v| <= w_max."""
    with working_precision(s.prec):
        words = _all_words(len(s.punctures), s.w_max)
        worst = mpmath.mpf(0)
        for u in words:
            if not u:
                continue
            for v in words:
                if not v or len(u) + len(v) > s.w_max or v < u:
                    continue
                acc = s[u] * s[v]
                for w, n in shuffle_counts(u, v).items():
                    acc = acc - n * s[tuple(w)]
                worst = max(worst, abs(acc))
        m = s.max_abs()
        bound = s.radius * (2 * m + 2 ** s.w_max + 1)
        return worst, bound


# ---------------------------------------------------------------------------
# differential equation and monodromy


def _multilog_series(points: Sequence, prec: int, w_max: Optional[int] = None) -> TensorSeries:
    """Series along a0 -> a_{m+1} with punctures a_1..a_m (index i-1 <-> a_i)."""
    a0, mids, a_end = points[0], points[1:-1], points[-1]
    path = PLPath.tangential([a0, a_end], mids)
    return ordered_exp(path, len(mids) if w_max is None else w_max, prec)


def _rhs_partial(points: Sequence, s: TensorSeries, j: int):
    """d/da_j of the right side of the differential equation at ``points``."""
    a = [mpmath.mpc(p) for p in points]
    m = len(a) - 2
    full = tuple(range(m))
    out = mpmath.mpc(0)
    for i in range(1, m + 1):
        sub = full[: i - 1] + full[i:]
        coeff = mpmath.mpc(0)
        # d log(a_{i+1} - a_i) and -d log(a_{i-1} - a_i)
        for nb, sign in ((i + 1, 1), (i - 1, -1)):
            diff = a[nb] - a[i]
            if j == nb:
                coeff += sign / diff
            elif j == i:
                coeff -= sign / diff
        if coeff != 0:
            out += s[sub] * coeff
    return out


def diff_eq_check(points: Sequence, h: float = 1e-3, prec: int = 128) -> dict:
    """Central differences of I(a_0; a_1..a_m; a_{m+1}) against dlog formula.

    Reports the max relative deviation at h and h/2, the Richardson slope
    log2(dev(h)/dev(h/2)) and the deviation after one Richardson step.
    """
    m = len(points) - 2
    if not 1 <= m <= 3:
        raise ValueError("need 1 <= m <= 3")
    if len({complex(p) for p in points}) != len(points):
        raise ValueError("points must be distinct")
    full = tuple(range(m))
    with working_precision(prec):
        base = _multilog_series(points, prec)
        devs = {}
        rich = mpmath.mpf(0)
        for j in range(m + 2):
            exact = _rhs_partial(points, base, j)
            scale = max(abs(exact), mpmath.mpf(10) ** -10)
            ders = []
            for step in (mpmath.mpf(h), mpmath.mpf(h) / 2):
                plus = list(points)
                minus = list(points)
                plus[j] = mpmath.mpc(points[j]) + step
                minus[j] = mpmath.mpc(points[j]) - step
                fp = _multilog_series(plus, prec)[full]
                fm = _multilog_series(minus, prec)[full]
                der = (fp - fm) / (2 * step)
                ders.append(der)
                devs.setdefault(step, mpmath.mpf(0))
                devs[step] = max(devs[step], abs(der - exact) / scale)
            extrapolated = (4 * ders[1] - ders[0]) / 3
            rich = max(rich, abs(extrapolated - exact) / scale)
        d1, d2 = devs[mpmath.mpf(h)], devs[mpmath.mpf(h) / 2]
        slope = float(mpmath.log(d1 / d2, 2)) if d2 > 0 and d1 > 0 else float("nan")
        return {
            "m": m,
            "h": h,
            "deviation_h": float(d1),
            "deviation_h2": float(d2),
            "richardson_slope": slope,
            "extrapolated_deviation": float(rich),
        }


def griffiths_check(points: Sequence, h: float = 1e-3, prec: int = 128) -> dict:
    """dI(a0;a1,a2;a3) = I(a0;a1;a3) dI(a1;a2;a3) + I(a0;a2;a3) dI(a0;a1;a2) per variable."""
    if len(points) != 4:
        raise ValueError("need four points")
    with working_precision(prec):
        a = [mpmath.mpc(p) for p in points]
        s = _multilog_series(points, prec)
        i13, i23, i12 = s[(0,)], s[(1,)], s[(0, 1)]

        def dlog_ratio(x, y, z, j, idx):
            # d/da_j of log((z - y)/(x - y)) with (x, y, z) = a[idx]
            ix, iy, iz = idx
            out = mpmath.mpc(0)
            if j == iz:
                out += 1 / (z - y)
            if j == iy:
                out += -1 / (z - y) + 1 / (x - y)
            if j == ix:
                out -= 1 / (x - y)
            return out

        worst = mpmath.mpf(0)
        for j in range(4):
            step = mpmath.mpf(h)
            vals = []
            for st in (step, step / 2):
                p, q = list(a), list(a)
                p[j] += st
                q[j] -= st
                vals.append((_multilog_series(p, prec)[(0, 1)] - _multilog_series(q, prec)[(0, 1)]) / (2 * st))
            lhs = (4 * vals[1] - vals[0]) / 3
            rhs = i13 * dlog_ratio(a[1], a[2], a[3], j, (1, 2, 3)) + i23 * dlog_ratio(a[0], a[1], a[2], j, (0, 1, 2))
            worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1))
        return {"max_relative_deviation": float(worst), "I(a0;a1;a3)": complex(i13), "I(a0;a2;a3)": complex(i23),
                "I(a0;a1,a2;a3)": complex(i12)}


def _polygon(center, radius, start_dir, sides: int = 8):
    return [center + radius * start_dir * mpmath.expjpi(2 * mpmath.mpf(k) / sides) for k in range(sides + 1)]


def monodromy_check(i: int, config: Sequence, prec: int = 128) -> dict:
    """Change of I(0; a_1..a_m; 1) when the path picks up one loop around a_i.

    Left: I_{gamma'} - I_gamma with gamma the segment 0 -> 1 and gamma' the
    same segment with a counterclockwise loop around a_i inserted. Right:
    2 pi i I(0; a_1..a_{i-1}; a_i) I(a_i; a_{i+1}..a_m; 1).
    """
    m = len(config)
    if not 1 <= m <= 3 or not 1 <= i <= m:
        raise ValueError("need 1 <= i <= m <= 3")
    with working_precision(prec):
        a = [complex(x) for x in config]
        target = a[i - 1]
        # base point on [0, 1] nearest to a_i
        qx = min(0.9, max(0.1, target.real))
        q = complex(qx, 0)
        others = [z for k, z in enumerate(a) if k != i - 1] + [0j, 1 + 0j]
        r = 0.4 * min(min(abs(target - z) for z in others), abs(q - target))
        direction = (q - target) / abs(q - target)
        c = target + r * direction
        loop = [complex(v) for v in _polygon(mpmath.mpc(target), r, mpmath.mpc(direction))]
        loop[-1] = c
        pts = sorted(set(a), key=lambda z: (z.real, z.imag))
        idx = tuple(pts.index(z) for z in a)
        straight = ordered_exp(PLPath((0, 1), tuple(pts)), m, prec)
        detour = ordered_exp(PLPath(tuple([0, q, c] + loop[1:] + [q, 1]), tuple(pts)), m, prec)
        lhs = detour.coefficient(idx) - straight.coefficient(idx)
        left = ordered_exp(PLPath.tangential([0, q, target], pts), m, prec)
        right = ordered_exp(PLPath.tangential([target, q, 1], pts), m, prec)
        two_pi_i = BigComplex.exact(2j * mpmath.pi, prec)
        rhs = two_pi_i * left.coefficient(idx[: i - 1]) * right.coefficient(idx[i:])
        residual = abs(lhs.value - rhs.value)
        return {"i": i, "lhs": complex(lhs.value), "rhs": complex(rhs.value), "residual": float(residual),
                "radius": float(lhs.radius + rhs.radius)}


def loop_check(p: int, prec: int = 128, sides: int = 8) -> dict:
    """Loop integral of (dlog t)^p around 0 against (2 pi i)^p / p!."""
    with working_precision(prec):
        verts = [complex(v) for v in _polygon(mpmath.mpc(0), 1, mpmath.mpc(1), sides)]
        verts[-1] = verts[0]
        s = ordered_exp(PLPath(tuple(verts), (0j,)), p, prec)
        expected = (2j * mpmath.pi) ** p / mpmath.factorial(p)
        got = s[(0,) * p]
        return {"p": p, "value": complex(got), "expected": complex(expected), "residual": float(abs(got - expected)),
                "radius": float(s.radius)}


# ---------------------------------------------------------------------------
# distribution relations, five-term, period matrix


def distribution_check(c, l: int, xs: Sequence, prec: int = 128) -> dict:
    """Li_c(x^l) = l^{w-m} sum over l-th root twists of Li_c(zeta^a x)."""
    ns = list(c.indices) if isinstance(c, Composition) else [int(n) for n in c]
    w, m = sum(ns), len(ns)
    with working_precision(prec):
        xv = [_c(x) for x in xs]
        lhs = li_eval(ns, [x ** l for x in xv], prec)
        acc = BigComplex.exact(0, prec)
        roots = [mpmath.expjpi(2 * mpmath.mpf(k) / l) for k in range(l)]

        def rec(i: int, args: List):
            nonlocal acc
            if i == m:
                acc = acc + li_eval(ns, args, prec)
                return
            for z in roots:
                rec(i + 1, args + [z * xv[i]])

        rec(0, [])
        rhs = acc * (mpmath.mpf(l) ** (w - m))
        diff = abs(lhs.value - rhs.value)
        bound = lhs.radius + rhs.radius
        return {"lhs": complex(lhs.value), "rhs": complex(rhs.value), "difference": float(diff),
                "bound": float(bound), "ok": bool(diff <= bound)}


def _li2_path(z, prec: int) -> "mpmath.mpc":
    """Li_2(z) = -I(0; 1, 0; z) transported along the segment 0 -> z."""
    path = PLPath.tangential([0, mpmath.mpc(z)], [0, 1])
    return -ordered_exp(path, 2, prec)[(1, 0)]


def bloch_wigner(z, prec: int = 128, li2: Optional[Callable] = None) -> "mpmath.mpf":
    """D(z) = Im Li_2(z) + arg(1 - z) log|z|."""
    with working_precision(prec):
        z = mpmath.mpc(z)
        if z == 0 or z == 1:
            return mpmath.mpf(0)
        v = li2(z) if li2 is not None else _li2_path(z, prec)
        return v.imag + mpmath.arg(1 - z) * mpmath.log(abs(z))


def five_term_check(x, y, prec: int = 128, li2: Optional[Callable] = None) -> dict:
    """D(x) + D(y) + D((1-x)/(1-xy)) + D(1-xy) + D((1-y)/(1-xy)) = 0."""
    with working_precision(prec):
        x, y = mpmath.mpc(x), mpmath.mpc(y)
        args = [x, y, (1 - x) / (1 - x * y), 1 - x * y, (1 - y) / (1 - x * y)]
        vals = [bloch_wigner(a, prec, li2) for a in args]
        total = mpmath.fsum(vals)
        return {"terms": [float(v) for v in vals], "sum": float(abs(total)), "ok": bool(abs(total) < mpmath.mpf(10) ** -20)}


def _safe_for_segment(z: complex) -> bool:
    # the straight segment 0 -> z must stay away from the puncture 1
    if abs(z) < 1e-3 or abs(z - 1) < 0.05:
        return False
    t = max(0.0, min(1.0, (z.conjugate()).real / abs(z) ** 2 * 1.0))
    return abs(t * z - 1) > 0.05


def five_term_samples(n: int = 50, seed: int = 20240601) -> List[Tuple[complex, complex]]:
    rng = random.Random(seed)
    out: List[Tuple[complex, complex]] = []
    while len(out) < n:
        x = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        y = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        if abs(1 - x * y) < 0.05:
            continue
        args = [x, y, (1 - x) / (1 - x * y), 1 - x * y, (1 - y) / (1 - x * y)]
        if all(_safe_for_segment(a) for a in args):
            out.append((x, y))
    return out


def double_log_period_matrix(points: Sequence, prec: int = 128) -> List[List[BigComplex]]:
    """Lower-triangular 4x4 period matrix of the double logarithm at (a0, a1, a2, a3)."""
    if len(points) != 4 or len({complex(p) for p in points}) != 4:
        raise ValueError("need four distinct points")
    a0, a1, a2, a3 = [complex(p) for p in points]
    with working_precision(prec):
        s03 = _multilog_series(points, prec)
        i13 = iterated_integral_path(a1, [a2], a3, prec)
        i02 = iterated_integral_path(a0, [a1], a2, prec)
        tpi = BigComplex.exact(2j * mpmath.pi, prec)
        zero = BigComplex.exact(0, prec)
        one = BigComplex.exact(1, prec)
        return [
            [one, zero, zero, zero],
            [s03.coefficient((0,)), tpi, zero, zero],
            [s03.coefficient((1,)), zero, tpi, zero],
            [s03.coefficient((0, 1)), tpi * i13, tpi * i02, tpi * tpi],
        ]


def period_matrix_check(points: Sequence, prec: int = 128) -> dict:
    mat = double_log_period_matrix(points, prec)
    upper_zero = all(mat[r][c].value == 0 for r in range(4) for c in range(r + 1, 4))
    with working_precision(prec):
        tpi = 2j * mpmath.pi
        diag = [mat[k][k].value for k in range(4)]
        tol = mpmath.ldexp(1, -prec)
        diag_ok = all(abs(d - e) <= tol * max(1, abs(e)) for d, e in zip(diag, [1, tpi, tpi, tpi * tpi]))
    g = griffiths_check(points, prec=prec)
    return {"lower_triangular": upper_zero, "diagonal_ok": diag_ok,
            "griffiths_deviation": g["max_relative_deviation"], "matrix": mat}


# ---------------------------------------------------------------------------
# numeric check of exact relations


def relation_residuals(weights: Sequence[int] = (2, 3, 4, 5, 6), prec: int = 128) -> dict:
    """Evaluate every double-shuffle row at level 1 with ζ values from ``li_eval``."""
    from .double_shuffle import DoubleShuffleSolver
    from .regularization import stuffle_regularize

    cache: Dict[Composition, BigComplex] = {}

    def zeta_num(c: Composition) -> BigComplex:
        if c not in cache:
            if not c:
                cache[c] = BigComplex.exact(1, prec)
            elif is_convergent(c):
                cache[c] = li_eval(c, prec=prec)
            else:
                acc = BigComplex.exact(0, prec)
                for cc, x in stuffle_regularize(c).raw().items():
                    acc = acc + zeta_num(cc) * (mpmath.mpf(x.numerator) / x.denominator)
                cache[c] = acc
        return cache[c]

    def column_value(col) -> BigComplex:
        kind, key = col
        if kind == "prod":
            out = BigComplex.exact(1, prec)
            for g in key:
                out = out * zeta_num(g)
            return out
        return zeta_num(key)

    solver = DoubleShuffleSolver(level=1)
    worst = 0.0
    count = 0
    per_weight = {}
    with working_precision(prec):
        for w in weights:
            system = solver.generate(w)
            wmax = 0.0
            for _, row in system.rows:
                acc = BigComplex.exact(0, prec)
                for col, x in row.raw().items():
                    acc = acc + column_value(col) * (mpmath.mpf(x.numerator) / x.denominator)
                wmax = max(wmax, float(abs(acc.value)))
                count += 1
            per_weight[w] = wmax
            worst = max(worst, wmax)
    return {"rows": count, "max_residual": worst, "per_weight": per_weight}
