"""The direct SWKB problem.

For a superpotential W and level n the SWKB integral is

    I = sum over turning intervals of  integral sqrt(E_n - W(x)^2) dx,

which equals n*pi*hbar exactly for conventional shape-invariant systems.
Each interval is mapped by x = mid + half*sin(theta) so the square-root
endpoint behaviour becomes smooth before adaptive quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize

from .catalog import ParameterError, SuperpotentialSpec

__all__ = [
    "SwkbError",
    "SwkbReport",
    "CSV_COLUMNS",
    "turning_intervals",
    "integral_at_energy",
    "swkb_integral",
    "swkb_extended_integral",
    "closed_form_report",
    "quantize_energy",
    "err_table",
    "rescaled_error",
]

CSV_COLUMNS = ("n", "I", "I_over_pi_hbar", "err", "err_rescaled", "delta", "n_intervals")

_SCAN_POINTS = 8192
_EDGE_POINTS = 1024
_MAX_DOUBLINGS = 80


class SwkbError(ArithmeticError):
    """Quadrature or bracketing failure."""


def rescaled_error(err: float) -> float:
    """sgn(Err) * 2^(log10 |Err|), the compressed scale used for error plots."""
    if err == 0 or not math.isfinite(err):
        return 0.0 if err == 0 else err
    return math.copysign(2.0 ** math.log10(abs(err)), err)


@dataclass
class SwkbReport:
    """Per-level SWKB record."""

    n: int
    E: float
    I: float
    hbar: float
    intervals: list[tuple[float, float]] = field(default_factory=list)
    abs_error: float = 0.0

    @property
    def I_over_pi_hbar(self) -> float:
        return self.I / (math.pi * self.hbar)

    @property
    def err(self) -> float:
        if self.n == 0 or self.I == 0:
            return 0.0
        return (self.I - self.n * math.pi * self.hbar) / self.I

    @property
    def err_rescaled(self) -> float:
        return rescaled_error(self.err)

    @property
    def delta(self) -> float:
        return self.n * math.pi * self.hbar - self.I

    @property
    def n_intervals(self) -> int:
        return len(self.intervals)

    def as_row(self) -> dict:
        return {
            "n": self.n,
            "I": self.I,
            "I_over_pi_hbar": self.I_over_pi_hbar,
            "err": self.err,
            "err_rescaled": self.err_rescaled,
            "delta": self.delta,
            "n_intervals": self.n_intervals,
        }


# --------------------------------------------------------------------------
# turning points


def _f(spec: SuperpotentialSpec, E: float, x):
    with np.errstate(all="ignore"):
        w = np.asarray(spec.W(x), dtype=float)
        out = E - w * w
    return np.where(np.isfinite(out), out, -np.inf)


def _edge_offset(end: float, scale: float) -> float:
    return max(abs(end), scale) * 1e-13


def _outer_limit(spec: SuperpotentialSpec, E: float, start: float, direction: int) -> float:
    """Walk outward from ``start`` until E - W^2 stays negative."""
    scale = spec.length_scale
    step = scale
    negative_run = 0
    x = start
    for _ in range(_MAX_DOUBLINGS):
        x = start + direction * step
        if _f(spec, E, x) < 0:
            negative_run += 1
            if negative_run >= 3:
                return x
        else:
            negative_run = 0
        step *= 2.0
    raise SwkbError(f"E={E} is not below the asymptotic value of W^2 (no outer turning point)")


def _scan_range(spec: SuperpotentialSpec, E: float, window) -> tuple[float, float, list[float]]:
    lo, hi = spec.domain
    if window is not None:
        lo, hi = max(lo, window[0]), min(hi, window[1])
    scale = spec.length_scale
    finite_edges = []
    zeros = None
    if not (math.isfinite(lo) and math.isfinite(hi)):
        # walk outward from the zeros of W, where E - W^2 is surely positive
        zeros = [z for z, _ in _zero_of_w(spec, None)] or [0.5 * (lo + hi) if math.isfinite(lo + hi) else 0.0]
    if math.isfinite(lo):
        left = lo + _edge_offset(lo, scale)
        finite_edges.append(left)
    else:
        left = _outer_limit(spec, E, min(zeros), -1)
    if math.isfinite(hi):
        right = hi - _edge_offset(hi, scale)
        finite_edges.append(right)
    else:
        right = _outer_limit(spec, E, max(zeros), +1)
    if window is not None:
        left, right = max(left, window[0]), min(right, window[1])
    return left, right, finite_edges


def _grid(left: float, right: float, finite_edges: list[float]) -> np.ndarray:
    pieces = [np.linspace(left, right, _SCAN_POINTS)]
    width = right - left
    for edge in finite_edges:
        # geometric clustering towards singular endpoints
        offs = np.geomspace(max(abs(edge), 1.0) * 1e-13, width / 50, _EDGE_POINTS)
        pts = edge + offs if edge == left else edge - offs
        pieces.append(pts[(pts >= left) & (pts <= right)])
    return np.unique(np.concatenate(pieces))


def turning_intervals(
    spec: SuperpotentialSpec, E: float, window: tuple[float, float] | None = None
) -> list[tuple[float, float]]:
    """Maximal intervals where E - W(x)^2 > 0.

    For E = 0 the single zero of W is returned as a degenerate interval.
    ``window`` optionally restricts the search to a sub-range of the domain;
    an interval cut by the window edge ends at that edge.
    """
    E = float(E)
    if E < 0:
        return []
    if E == 0:
        return _zero_of_w(spec, window)
    left, right, edges = _scan_range(spec, E, window)
    xs = _grid(left, right, edges)
    fs = _f(spec, E, xs)
    pos = fs > 0
    if not pos.any():
        return []
    fun = lambda x: float(_f(spec, E, x))
    intervals = []
    i = 0
    n = len(xs)
    while i < n:
        if not pos[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and pos[j + 1]:
            j += 1
        a = left if i == 0 else _root(fun, xs[i - 1], xs[i])
        b = right if j == n - 1 else _root(fun, xs[j], xs[j + 1])
        if i == 0 and window is None:
            raise SwkbError("allowed region reaches the scan boundary")
        if j == n - 1 and window is None:
            raise SwkbError("allowed region reaches the scan boundary")
        if i == 0 and window is not None:
            a = max(spec.domain[0], window[0])
        if j == n - 1 and window is not None:
            b = min(spec.domain[1], window[1])
        if b - a > 1e-10 * max(1.0, abs(a)):
            intervals.append((a, b))
        i = j + 1
    return intervals


def _root(fun: Callable, a: float, b: float) -> float:
    fa, fb = fun(a), fun(b)
    if fa == 0:
        return a
    if fb == 0:
        return b
    if not np.isfinite(fa):
        fa = -1.0
    if not np.isfinite(fb):
        fb = -1.0
    if fa * fb > 0:
        return 0.5 * (a + b)
    return optimize.brentq(fun, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def _zero_of_w(spec: SuperpotentialSpec, window=None) -> list[tuple[float, float]]:
    lo, hi = spec.domain
    if window is not None:
        lo, hi = max(lo, window[0]), min(hi, window[1])
    scale = spec.length_scale
    a = lo + _edge_offset(lo, scale) if math.isfinite(lo) else None
    b = hi - _edge_offset(hi, scale) if math.isfinite(hi) else None
    if a is None or b is None:
        c = 0.0 if a is None and b is None else (a + scale if b is None else b - scale)
        step = scale
        for _ in range(_MAX_DOUBLINGS):
            if a is None:
                a_try = c - step
            if b is None:
                b_try = c + step
            wa = float(spec.W(a if a is not None else a_try))
            wb = float(spec.W(b if b is not None else b_try))
            if wa < 0 < wb:
                a = a if a is not None else a_try
                b = b if b is not None else b_try
                break
            step *= 2
        else:
            return []
    xs = _grid(a, b, [e for e in (a, b) if math.isfinite(e)])
    with np.errstate(all="ignore"):
        ws = np.asarray(spec.W(xs), dtype=float)
    idx = np.nonzero(np.sign(ws[:-1]) * np.sign(ws[1:]) < 0)[0]
    out = []
    for k in idx:
        x0 = optimize.brentq(lambda x: float(spec.W(x)), xs[k], xs[k + 1], xtol=1e-15)
        out.append((x0, x0))
    out += [(x, x) for x in xs[ws == 0]]
    return sorted(out)


# --------------------------------------------------------------------------
# integrals


def _interval_integral(spec, E, a, b, weight, epsabs, epsrel) -> tuple[float, float]:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)

    def integrand(theta):
        x = mid + half * math.sin(theta)
        w = float(spec.W(x))
        val = E - w * w
        if val <= 0:
            return 0.0
        out = math.sqrt(val) * half * math.cos(theta)
        if weight is not None:
            out /= float(weight(x))
        return out

    val, err = integrate.quad(
        integrand, -0.5 * math.pi, 0.5 * math.pi, epsabs=epsabs, epsrel=epsrel, limit=400
    )
    return val, err


def integral_at_energy(
    spec: SuperpotentialSpec,
    E: float,
    weight: Callable | None = None,
    window: tuple[float, float] | None = None,
    epsabs: float = 1e-13,
    epsrel: float = 1e-12,
) -> tuple[float, list[tuple[float, float]], float]:
    """SWKB integral at an arbitrary energy; returns (I, intervals, error estimate)."""
    if E <= 0:
        return 0.0, turning_intervals(spec, 0.0, window), 0.0
    intervals = turning_intervals(spec, E, window)
    total = 0.0
    err = 0.0
    for a, b in intervals:
        v, e = _interval_integral(spec, E, a, b, weight, epsabs, epsrel)
        total += v
        err += e
    tol = 1e-9 * max(1.0, abs(total))
    if err > tol:
        raise SwkbError(f"quadrature did not converge (error estimate {err:.3g})")
    return total, intervals, err


def swkb_integral(
    spec: SuperpotentialSpec, n: int, window: tuple[float, float] | None = None
) -> SwkbReport:
    """SWKB integral of level n (multi-interval prescription when needed)."""
    E = spec.energy(n)
    if n == 0:
        return SwkbReport(0, 0.0, 0.0, spec.hbar, turning_intervals(spec, 0.0, window))
    I, intervals, err = integral_at_energy(spec, E, window=window)
    return SwkbReport(int(n), E, I, spec.hbar, intervals, err)


def swkb_extended_integral(spec: SuperpotentialSpec, n: int) -> SwkbReport:
    """Position-dependent-mass SWKB integral with weight 1/eta(x)."""
    if spec.eta is None:
        raise ParameterError(f"{spec.family} has no mass deformation eta(x)")
    E = spec.energy(n)
    if n == 0:
        return SwkbReport(0, 0.0, 0.0, spec.hbar, turning_intervals(spec, 0.0))
    I, intervals, err = integral_at_energy(spec, E, weight=spec.eta)
    return SwkbReport(int(n), E, I, spec.hbar, intervals, err)


def closed_form_report(spec: SuperpotentialSpec, n: int) -> SwkbReport:
    """SWKB report from the analytic integral where the family provides one."""
    if spec.closed_form_integral is None:
        raise ParameterError(f"{spec.family} has no closed-form SWKB integral")
    E = spec.energy(n)
    I = 0.0 if n == 0 else float(spec.closed_form_integral(E))
    return SwkbReport(int(n), E, I, spec.hbar, [])


def quantize_energy(
    spec: SuperpotentialSpec,
    n: int,
    tol: float = 1e-10,
    weight: Callable | None = None,
    E_guess: float | None = None,
) -> float:
    """Energy E with I(E) = n*pi*hbar, found by monotone bracketing."""
    n = int(n)
    if n < 0:
        raise ParameterError("level must be non-negative")
    if n == 0:
        return 0.0
    target = n * math.pi * spec.hbar

    def resid(E):
        return integral_at_energy(spec, E, weight=weight, epsabs=1e-14, epsrel=1e-13)[0] - target

    hi = E_guess if E_guess and E_guess > 0 else max(1.0, 2.0 * n * spec.hbar * spec.omega)
    lo = 0.0
    for _ in range(200):
        try:
            r = resid(hi)
        except SwkbError as exc:
            raise SwkbError(f"cannot bracket level {n}: {exc}") from None
        if r > 0:
            break
        lo = hi
        hi *= 2.0
    else:
        raise SwkbError(f"cannot bracket level {n}")
    # shrink the bracket from below for a tighter start
    return optimize.brentq(resid, lo, hi, xtol=tol * max(1.0, hi) * 1e-2, rtol=1e-15, maxiter=200)


def err_table(
    spec: SuperpotentialSpec, n_lo: int, n_hi: int, extended: bool = False
) -> list[SwkbReport]:
    """Reports for n_lo..n_hi (capped at n_max for bounded families)."""
    if n_lo < 0 or n_hi < n_lo:
        raise ParameterError("invalid level range")
    if spec.n_max is not None:
        n_hi = min(n_hi, spec.n_max)
    fn = swkb_extended_integral if extended else swkb_integral
    return [fn(spec, n) for n in range(n_lo, n_hi + 1)]
