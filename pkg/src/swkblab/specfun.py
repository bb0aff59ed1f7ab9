"""Scalar special functions: log-Gamma, reciprocal Gamma and Kummer's 1F1.

Only real arguments are supported.  The Kummer function switches from a
compensated power series to its large-|z| asymptotic expansion at
``|z| = KUMMER_CROSSOVER``.
"""

from __future__ import annotations

import math

__all__ = [
    "SpecialFunctionError",
    "PoleError",
    "ConvergenceError",
    "KUMMER_CROSSOVER",
    "log_gamma",
    "recip_gamma",
    "kummer_1f1",
    "kummer_1f1_dz",
]

KUMMER_CROSSOVER = 40.0
_TOL = 1e-16
_MAX_TERMS = 5000


class SpecialFunctionError(ArithmeticError):
    """Base class for failures in this module."""


class PoleError(SpecialFunctionError, ValueError):
    """Raised when a function is evaluated at a pole."""


class ConvergenceError(SpecialFunctionError):
    """Raised when neither evaluation regime reaches tolerance."""


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign(Gamma(x)))``.

    Raises PoleError at non-positive integers.
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at x={x}")
    value = math.lgamma(x)
    if x > 0:
        return value, 1
    # Gamma alternates sign between consecutive negative integers
    sign = -1 if int(math.floor(x)) % 2 else 1
    return value, sign


def recip_gamma(x: float) -> float:
    """Return 1/Gamma(x); exactly 0 at the poles of Gamma."""
    x = float(x)
    if _is_nonpositive_integer(x):
        return 0.0
    if 0 < x < 170:
        return 1.0 / math.gamma(x)
    value, sign = log_gamma(x)
    return sign * math.exp(-value)


def _check_c(c: float) -> None:
    if _is_nonpositive_integer(c):
        raise PoleError(f"1F1 undefined for c={c} (non-positive integer)")


def _series(a: float, c: float, z: float) -> float:
    # Kahan-compensated Taylor sum
    term = 1.0
    total = 1.0
    comp = 0.0
    for k in range(_MAX_TERMS):
        term *= (a + k) / (c + k) * z / (k + 1)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if term == 0.0:
            return total
        if abs(term) <= _TOL * abs(total) and k > abs(z):
            return total
    raise ConvergenceError(f"1F1 series did not converge for a={a}, c={c}, z={z}")


def _asymptotic_sum(p: float, q: float, w: float) -> tuple[float, float]:
    """Sum (p)_k (q)_k / k! w^k up to its smallest term; return (sum, last)."""
    term = 1.0
    total = 1.0
    smallest = 1.0
    for k in range(_MAX_TERMS):
        nxt = term * (p + k) * (q + k) / (k + 1) * w
        if nxt == 0.0:
            return total, 0.0
        if abs(nxt) >= abs(term) and k > 0:
            return total, smallest
        term = nxt
        total += term
        smallest = abs(term)
        if smallest <= _TOL * abs(total):
            return total, smallest
    return total, smallest


def _asymptotic_positive(a: float, c: float, z: float) -> float:
    # 1F1 ~ G(c)/G(a) e^z z^(a-c) S1 + G(c)/G(c-a) cos(pi a) z^(-a) S2
    lgc, sgc = log_gamma(c)
    s1, r1 = _asymptotic_sum(c - a, 1.0 - a, 1.0 / z)
    s2, r2 = _asymptotic_sum(a, a - c + 1.0, -1.0 / z)
    rga = recip_gamma(a)
    rgca = recip_gamma(c - a)
    dom = 0.0
    if rga != 0.0:
        dom = sgc * rga * math.exp(lgc + z + (a - c) * math.log(z)) * s1
    sub = 0.0
    if rgca != 0.0:
        cos_pa = math.cos(math.pi * a)
        if _is_nonpositive_integer(a):
            cos_pa = -1.0 if int(-a) % 2 else 1.0
        sub = sgc * rgca * cos_pa * math.exp(lgc - a * math.log(z)) * s2
    value = dom + sub
    err = abs(dom) * r1 / max(abs(s1), 1e-300) + abs(sub) * r2 / max(abs(s2), 1e-300)
    if value != 0.0 and err > 1e-11 * abs(value):
        raise ConvergenceError(
            f"1F1 asymptotic expansion inaccurate for a={a}, c={c}, z={z}"
        )
    return value


def kummer_1f1(a: float, c: float, z: float) -> float:
    """Kummer's confluent hypergeometric function 1F1(a; c; z) for real input."""
    a, c, z = float(a), float(c), float(z)
    _check_c(c)
    if z == 0.0:
        return 1.0
    if _is_nonpositive_integer(a) and -a <= 200:
        # terminating polynomial, summed exactly in its natural order
        return _series(a, c, z)
    if z < 0:
        # Kummer transformation keeps the series sign-stable
        return math.exp(z) * kummer_1f1(c - a, c, -z)
    if z < KUMMER_CROSSOVER:
        return _series(a, c, z)
    try:
        return _asymptotic_positive(a, c, z)
    except ConvergenceError:
        # fall back to the (slower) series, which still converges
        return _series(a, c, z)


def kummer_1f1_dz(a: float, c: float, z: float) -> float:
    """d/dz 1F1(a; c; z) = (a/c) 1F1(a+1; c+1; z)."""
    a, c = float(a), float(c)
    _check_c(c)
    if a == 0.0:
        return 0.0
    return a / c * kummer_1f1(a + 1.0, c + 1.0, z)
