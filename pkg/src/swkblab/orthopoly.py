"""Exact rational polynomial algebra and classical orthogonal polynomials.

Coefficients are ``fractions.Fraction`` so Wronskians of high-degree
polynomials keep their exact signs.  Floating-point evaluation happens only
at the very end (``poly_eval`` / ``poly_dlog``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "RationalPoly",
    "PolyFamily",
    "as_fraction",
    "classical_poly",
    "jacobi_explicit",
    "poly_wronskian",
    "poly_det",
    "poly_eval",
    "poly_dlog",
    "gauss_power_wronskian",
    "trig_power_wronskian",
]


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, floats (exactly) or numeric strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"cannot represent {value!r} exactly")
    return Fraction(value)


def _strip(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class RationalPoly:
    """Univariate polynomial with exact rational coefficients, ascending order.

    Instances are treated as immutable values.
    """

    __slots__ = ("coeffs", "_floats")

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs: tuple[Fraction, ...] = _strip([as_fraction(c) for c in coeffs])
        self._floats = tuple(float(c) for c in self.coeffs)

    @classmethod
    def constant(cls, c) -> "RationalPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def _coerce(self, other) -> "RationalPoly":
        if isinstance(other, RationalPoly):
            return other
        return RationalPoly([other])

    def __add__(self, other) -> "RationalPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "RationalPoly":
        return RationalPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "RationalPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RationalPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RationalPoly":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RationalPoly":
        if k < 0:
            raise ValueError("negative power")
        out = RationalPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == RationalPoly([other]).coeffs
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPoly({[str(c) for c in self.coeffs]})"

    def __call__(self, x):
        return poly_eval(self, x)

    def deriv(self, k: int = 1) -> "RationalPoly":
        p = self
        for _ in range(k):
            p = RationalPoly([i * c for i, c in enumerate(p.coeffs)][1:])
        return p

    def compose(self, inner: "RationalPoly") -> "RationalPoly":
        """Return self(inner(x))."""
        out = RationalPoly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def scale_arg(self, s) -> "RationalPoly":
        """Return p(s*x)."""
        s = as_fraction(s)
        return RationalPoly([c * s**i for i, c in enumerate(self.coeffs)])

    def divmod(self, other: "RationalPoly") -> tuple["RationalPoly", "RationalPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.leading
        for i in range(len(q) - 1, -1, -1):
            f = rem[i + len(other.coeffs) - 1] / lead
            q[i] = f
            if f:
                for j, c in enumerate(other.coeffs):
                    rem[i + j] -= f * c
        return RationalPoly(q), RationalPoly(rem)

    def root_multiplicity(self, root) -> int:
        """Multiplicity of ``root`` as an exact root (0 if not a root)."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        factor = RationalPoly([-as_fraction(root), 1])
        k = 0
        p = self
        while p.degree > 0:
            q, r = p.divmod(factor)
            if not r.is_zero():
                break
            p = q
            k += 1
        return k

    def deflate(self, root, k: int) -> "RationalPoly":
        """Divide out (x - root)^k exactly."""
        factor = RationalPoly([-as_fraction(root), 1])
        p = self
        for _ in range(k):
            p, r = p.divmod(factor)
            if not r.is_zero():
                raise ValueError("root does not divide the polynomial")
        return p

    def floats(self) -> tuple[float, ...]:
        return self._floats


@dataclass(frozen=True)
class PolyFamily:
    """A classical family: ``kind`` in {hermite, laguerre, jacobi}."""

    kind: str
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)

    def __init__(self, kind: str, alpha=0, beta=0):
        kind = kind.lower()
        if kind not in ("hermite", "laguerre", "jacobi"):
            raise ValueError(f"unknown polynomial family {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "alpha", as_fraction(alpha))
        object.__setattr__(self, "beta", as_fraction(beta))


@lru_cache(maxsize=4096)
def _hermite(n: int) -> RationalPoly:
    if n == 0:
        return RationalPoly([1])
    prev, cur = RationalPoly([1]), RationalPoly([0, 2])
    x2 = RationalPoly([0, 2])
    for k in range(1, n):
        prev, cur = cur, x2 * cur - prev * (2 * k)
    return cur


@lru_cache(maxsize=4096)
def _laguerre(n: int, alpha: Fraction) -> RationalPoly:
    if n == 0:
        return RationalPoly([1])
    prev, cur = RationalPoly([1]), RationalPoly([alpha + 1, -1])
    for k in range(1, n):
        nxt = (RationalPoly([2 * k + 1 + alpha, -1]) * cur - prev * (k + alpha)) * Fraction(1, k + 1)
        prev, cur = cur, nxt
    return cur


def jacobi_explicit(n: int, alpha, beta) -> RationalPoly:
    """P_n^(alpha,beta) from the binomial-sum formula, valid for every alpha, beta."""
    alpha, beta = as_fraction(alpha), as_fraction(beta)

    def gbinom(top: Fraction, k: int) -> Fraction:
        out = Fraction(1)
        for i in range(k):
            out *= (top - i) / (i + 1)
        return out

    xm = RationalPoly([Fraction(-1, 2), Fraction(1, 2)])
    xp = RationalPoly([Fraction(1, 2), Fraction(1, 2)])
    out = RationalPoly()
    for k in range(n + 1):
        coef = gbinom(n + alpha, n - k) * gbinom(n + beta, k)
        if coef:
            out = out + (xm**k) * (xp ** (n - k)) * coef
    return out


@lru_cache(maxsize=4096)
def _jacobi(n: int, alpha: Fraction, beta: Fraction) -> RationalPoly:
    if n == 0:
        return RationalPoly([1])
    s = alpha + beta
    # three-term recurrence; degenerate denominators fall back to the explicit sum
    for k in range(1, n):
        if (k + 1) * (k + s + 1) * (2 * k + s) == 0:
            return jacobi_explicit(n, alpha, beta)
    prev = RationalPoly([1])
    cur = RationalPoly([(alpha - beta) / 2, (s + 2) / 2])
    for k in range(1, n):
        c = 2 * k + s
        a1 = 2 * (k + 1) * (k + s + 1) * c
        lin = RationalPoly([(c + 1) * (alpha**2 - beta**2), (c + 1) * (c + 2) * c])
        nxt = (lin * cur - prev * (2 * (k + alpha) * (k + beta) * (c + 2))) * (1 / Fraction(a1))
        prev, cur = cur, nxt
    return cur


def classical_poly(family: PolyFamily | str, n: int, alpha=0, beta=0) -> RationalPoly:
    """Degree-n member of a classical family (Hermite, Laguerre, Jacobi).

    ``family`` may be a PolyFamily or a kind string together with alpha/beta.
    """
    if isinstance(family, str):
        family = PolyFamily(family, alpha, beta)
    n = int(n)
    if n < 0:
        raise ValueError("degree must be non-negative")
    if family.kind == "hermite":
        return _hermite(n)
    if family.kind == "laguerre":
        return _laguerre(n, family.alpha)
    return _jacobi(n, family.alpha, family.beta)


def poly_det(matrix: Sequence[Sequence[RationalPoly]]) -> RationalPoly:
    """Exact determinant of a square matrix of polynomials.

    Laplace expansion memoised over column subsets, O(2^m m) products.
    """
    m = len(matrix)
    if m == 0:
        return RationalPoly([1])
    if any(len(row) != m for row in matrix):
        raise ValueError("matrix must be square")
    minors: dict[int, RationalPoly] = {0: RationalPoly([1])}
    for r in range(m):
        nxt: dict[int, RationalPoly] = {}
        for used, val in minors.items():
            if val.is_zero():
                continue
            for j in range(m):
                if used >> j & 1:
                    continue
                entry = matrix[r][j]
                if entry.is_zero():
                    continue
                # sign from the number of already-used columns to the right of j
                sign = -1 if bin(used >> (j + 1)).count("1") % 2 else 1
                key = used | (1 << j)
                term = val * entry if sign > 0 else -(val * entry)
                nxt[key] = nxt[key] + term if key in nxt else term
        minors = nxt
    return minors.get((1 << m) - 1, RationalPoly())


def poly_wronskian(polys: Sequence[RationalPoly]) -> RationalPoly:
    """Wronskian det(d^j p_k / dx^j) of a nonempty list of polynomials."""
    if not polys:
        raise ValueError("empty list")
    m = len(polys)
    rows = [[p.deriv(j) for p in polys] for j in range(m)]
    return poly_det(rows)


def poly_eval(p: RationalPoly, x):
    """Horner evaluation in floating point (scalar or numpy array)."""
    coeffs = p.floats()
    if not coeffs:
        return 0.0 * x
    out = 0.0 * x + coeffs[-1]
    for c in reversed(coeffs[:-1]):
        out = out * x + c
    return out


def poly_dlog(p: RationalPoly, x):
    """p'(x)/p(x); raises ZeroDivisionError where p(x) == 0 (scalar input)."""
    num = poly_eval(p.deriv(), x)
    den = poly_eval(p, x)
    if np.any(np.asarray(den) == 0):
        raise ZeroDivisionError("polynomial vanishes at evaluation point")
    return num / den


def _strip_root(p: RationalPoly, root) -> tuple[RationalPoly, int]:
    k = p.root_multiplicity(root)
    return (p.deflate(root, k) if k else p), k


def gauss_power_wronskian(funcs: Sequence[tuple]) -> tuple[Fraction, Fraction, RationalPoly]:
    """Wronskian of functions exp(a x^2) x^q P(x).

    ``funcs`` holds triples ``(a, q, P)``.  Returns ``(A, Q, R)`` with
    W = exp(A x^2) x^Q R(x), where R has no root at x = 0.
    """
    if not funcs:
        raise ValueError("empty list")
    m = len(funcs)
    cols = []
    A = Fraction(0)
    Q = Fraction(0)
    x = RationalPoly([0, 1])
    for a, q, P in funcs:
        a, q = as_fraction(a), as_fraction(q)
        A += a
        Q += q
        col = [P]
        two_a_x2 = RationalPoly([0, 0, 2 * a])
        for j in range(1, m):
            prev = col[-1]
            col.append((two_a_x2 + (q - (j - 1))) * prev + x * prev.deriv())
        cols.append(col)
    det = poly_det([[cols[i][j] for i in range(m)] for j in range(m)])
    if det.is_zero():
        raise ZeroDivisionError("functions are linearly dependent")
    R, k = _strip_root(det, 0)
    return A, Q - Fraction(m * (m - 1), 2) + k, R


def trig_power_wronskian(funcs: Sequence[tuple]) -> tuple[Fraction, Fraction, RationalPoly]:
    """Wronskian of functions sin(x)^p cos(x)^q P(cos 2x).

    ``funcs`` holds triples ``(p, q, P)`` with P a polynomial in y = cos 2x.
    Returns ``(S, C, R)`` with W = const * sin^S cos^C R(cos 2x), R free of
    the factors (1 - y) and (1 + y).
    """
    if not funcs:
        raise ValueError("empty list")
    m = len(funcs)
    cols = []
    S = Fraction(0)
    C = Fraction(0)
    one_m_y2 = RationalPoly([1, 0, -1])
    for p, q, P in funcs:
        p, q = as_fraction(p), as_fraction(q)
        S += p
        C += q
        col = [P]
        for j in range(1, m):
            pj, qj = p - (j - 1), q - (j - 1)
            lin = RationalPoly([(pj - qj) / 2, (pj + qj) / 2])
            prev = col[-1]
            col.append(lin * prev - one_m_y2 * prev.deriv())
        cols.append(col)
    det = poly_det([[cols[i][j] for i in range(m)] for j in range(m)])
    if det.is_zero():
        raise ZeroDivisionError("functions are linearly dependent")
    shift = Fraction(m * (m - 1), 2)
    # (1 - y) = 2 sin^2 x and (1 + y) = 2 cos^2 x
    R, k_minus = _strip_root(det, 1)
    R, k_plus = _strip_root(R, -1)
    return S - shift + 2 * k_minus, C - shift + 2 * k_plus, R
