"""Darboux-Crum and Krein-Adler deformations of piecewise quadratic systems.

Wronskians are evaluated from (psi, psi') alone: every higher derivative
of an eigenfunction is written as A_k(x) psi + B_k(x) psi' with
polynomials obtained from psi'' = (V - E) psi.  Derivatives of a
Wronskian are sums of determinants with one row order raised, so the
deformed potential needs no finite differences.  The junction x = 0 is
handled as a one-sided limit selected by ``side``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .catalog import DeletionSet, ParameterError
from .piecewise import EigenSolution, PiecewiseQuadratic, SolverError, eigenvalues, parse_potential

__all__ = [
    "IsospectralError",
    "StateSet",
    "WronskianValues",
    "DeformedSystem",
    "wronskian_eval",
    "darboux_crum",
    "krein_adler",
    "iso_sequence",
    "numerov_eigenvalues",
    "resolve_spectrum",
    "shape_invariance_gap",
]


class IsospectralError(ArithmeticError):
    """Vanishing Wronskian or otherwise ill-defined deformation."""


# --------------------------------------------------------------------------
# state sets


@dataclass(frozen=True)
class StateSet:
    """Lowest eigenstates of one piecewise potential, ordered by energy."""

    potential: PiecewiseQuadratic
    states: tuple[EigenSolution, ...]

    def __post_init__(self):
        E = [s.E for s in self.states]
        if any(b <= a for a, b in zip(E, E[1:])):
            raise ParameterError("state energies must be strictly increasing")
        if any(s.pot is not self.potential and s.pot != self.potential for s in self.states):
            raise ParameterError("states belong to a different potential")

    @classmethod
    def solve(cls, potential: PiecewiseQuadratic | str, count: int) -> "StateSet":
        pot = parse_potential(potential) if isinstance(potential, str) else potential
        return cls(pot, tuple(eigenvalues(pot, count=count)))

    @property
    def energies(self) -> list[float]:
        return [s.E for s in self.states]

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, i: int) -> EigenSolution:
        return self.states[i]


# --------------------------------------------------------------------------
# Wronskians


@lru_cache(maxsize=4096)
def _derivative_polys(c2: float, c1: float, c0: float, E: float, order: int) -> tuple[Polynomial, Polynomial]:
    """(A, B) with d^order psi = A psi + B psi' for -psi'' + V psi = E psi."""
    q = Polynomial([c0 - E, c1, c2])
    A, B = Polynomial([1.0]), Polynomial([0.0])
    for _ in range(order):
        A, B = A.deriv() + B * q, A + B.deriv()
    return A, B


def _side_masks(x: np.ndarray, side: str) -> np.ndarray:
    if side not in ("left", "right"):
        raise ParameterError("side must be 'left' or 'right'")
    return (x < 0) | ((x == 0) & (side == "left"))


def _derivative_table(states: Sequence[EigenSolution], x: np.ndarray, side: str, top: int) -> np.ndarray:
    """D[k, j, i] = d^k psi_j (x_i) for k = 0..top."""
    left = _side_masks(x, side)
    out = np.empty((top + 1, len(states), x.size))
    for j, st in enumerate(states):
        psi, dpsi = st.psi_dpsi(x)
        for mask, sd in ((left, st.pot.left), (~left, st.pot.right)):
            if not mask.any():
                continue
            xs = x[mask]
            for k in range(top + 1):
                A, B = _derivative_polys(sd.c2, sd.c1, sd.c0, st.E, k)
                out[k, j, mask] = A(xs) * psi[mask] + B(xs) * dpsi[mask]
    return out


def _raise_orders(terms: dict[tuple[int, ...], int]) -> dict[tuple[int, ...], int]:
    """Differentiate a sum of row-order determinants once."""
    out: dict[tuple[int, ...], int] = {}
    for orders, c in terms.items():
        for i in range(len(orders)):
            new = orders[:i] + (orders[i] + 1,) + orders[i + 1 :]
            if len(set(new)) < len(new):
                continue
            out[new] = out.get(new, 0) + c
    return {k: v for k, v in out.items() if v}


def _det_sum(table: np.ndarray, terms: dict[tuple[int, ...], int]) -> np.ndarray:
    total = np.zeros(table.shape[2])
    for orders, c in terms.items():
        mats = np.transpose(table[list(orders)], (2, 0, 1))
        total += c * np.linalg.det(mats)
    return total


@dataclass(frozen=True)
class WronskianValues:
    W: np.ndarray
    dW: np.ndarray
    d2W: np.ndarray

    @property
    def dlog(self) -> np.ndarray:
        return self.dW / self.W

    @property
    def d2log(self) -> np.ndarray:
        return self.d2W / self.W - (self.dW / self.W) ** 2


def wronskian_eval(states: Sequence[EigenSolution], x, side: str = "right") -> WronskianValues:
    """W[psi_1..psi_m] and its first two derivatives at x.

    Raises IsospectralError where the Wronskian vanishes.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    m = len(states)
    if m == 0:
        one = np.ones_like(x)
        return WronskianValues(one, np.zeros_like(x), np.zeros_like(x))
    table = _derivative_table(states, x, side, m + 1)
    base = {tuple(range(m)): 1}
    first = _raise_orders(base)
    second = _raise_orders(first)
    W = _det_sum(table, base)
    if np.any(W == 0) or not np.all(np.isfinite(W)):
        raise IsospectralError("Wronskian vanishes (or underflows) on the requested points")
    return WronskianValues(W, _det_sum(table, first), _det_sum(table, second))


# --------------------------------------------------------------------------
# deformed systems


@dataclass
class DeformedSystem:
    """Potential and states obtained by deleting ``deleted`` from ``base``.

    ``levels`` are the original indices of the retained states, ``energies``
    their (unchanged) energies.
    """

    base: StateSet
    deleted: tuple[int, ...]
    levels: list[int] = field(default_factory=list)

    def __post_init__(self):
        kept = [i for i in range(len(self.base)) if i not in self.deleted]
        if not self.levels:
            self.levels = kept
        self._seed = [self.base[i] for i in self.deleted]

    @property
    def energies(self) -> list[float]:
        return [self.base[i].E for i in self.levels]

    def potential(self, x, side: str = "right") -> np.ndarray:
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        left = _side_masks(flat, side)
        V = np.where(left, self.base.potential.left.V(flat), self.base.potential.right.V(flat))
        if self._seed:
            V = V - 2.0 * wronskian_eval(self._seed, flat, side).d2log
        return V.reshape(x.shape) if x.ndim else float(V[0])

    def _norm(self, level: int) -> float:
        E = self.base[level].E
        prod = 1.0
        for d in self.deleted:
            prod *= E - self.base[d].E
        if prod <= 0:
            raise IsospectralError(f"level {level} is not normalizable after the deletion")
        return math.sqrt(prod)

    def psi_dpsi(self, level: int, x, side: str = "right") -> tuple[np.ndarray, np.ndarray]:
        """Deformed state carrying original index ``level``, with its derivative."""
        if level not in self.levels:
            raise ParameterError(f"level {level} is not held by this system")
        x = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
        target = self.base[level]
        if not self._seed:
            return target.psi_dpsi(x)
        Wd = wronskian_eval(self._seed, x, side)
        m = len(self._seed)
        table = _derivative_table(self._seed + [target], x, side, m + 1)
        base = {tuple(range(m + 1)): 1}
        Wn = _det_sum(table, base)
        dWn = _det_sum(table, _raise_orders(base))
        c = self._norm(level)
        psi = Wn / Wd.W / c
        dpsi = (dWn * Wd.W - Wn * Wd.dW) / Wd.W**2 / c
        return psi, dpsi

    def state(self, level: int) -> Callable[[np.ndarray], np.ndarray]:
        return lambda x: self.psi_dpsi(level, x)[0]

    def check_nodeless(self, lo: float = -8.0, hi: float = 8.0, num: int = 4001) -> None:
        """Raise if the seed Wronskian changes sign on [lo, hi]."""
        if not self._seed:
            return
        xs = np.linspace(lo, hi, num)
        W = wronskian_eval(self._seed, xs).W
        if np.any(np.sign(W) != np.sign(W[0])):
            raise IsospectralError("seed Wronskian has a zero; the deformation is singular")

    def sample(self, x) -> np.ndarray:
        return self.potential(x)


def darboux_crum(states: StateSet, M: int) -> DeformedSystem:
    """Delete the M lowest states."""
    M = int(M)
    if M < 0 or M > len(states):
        raise ParameterError(f"M must lie in [0, {len(states)}]")
    sys = DeformedSystem(states, tuple(range(M)))
    sys.check_nodeless()
    return sys


def krein_adler(states: StateSet, D: DeletionSet | Sequence[int]) -> DeformedSystem:
    """Delete an admissible set of levels."""
    D = D if isinstance(D, DeletionSet) else DeletionSet(D)
    if not D.is_admissible():
        raise ParameterError(f"deletion set {list(D)} is not admissible")
    if D.indices and D.indices[-1] >= len(states):
        raise ParameterError("deletion index beyond the held states")
    sys = DeformedSystem(states, D.indices)
    sys.check_nodeless()
    return sys


def iso_sequence(ell: int, extra: int = 5) -> DeformedSystem:
    """Step a = 4 ell with its ell negative levels removed.

    The result has the spectrum 2n of x^2 - 1.
    """
    ell = int(ell)
    if ell < 1:
        raise ParameterError("ell must be a positive integer")
    base = StateSet.solve(PiecewiseQuadratic.step(4 * ell), ell + extra)
    return darboux_crum(base, ell)


# --------------------------------------------------------------------------
# independent re-solve on sampled potentials


def _numerov_inward(V: np.ndarray, E: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Integrate from V[0] (far end) to V[-1]; returns psi and dpsi/dstep at the end."""
    f = V[:, None] - E[None, :]
    c = h * h / 12.0
    prev = np.zeros(E.size)
    cur = np.full(E.size, 1e-30)
    for i in range(1, V.size - 1):
        nxt = (2 * (1 + 5 * c * f[i]) * cur - (1 - c * f[i - 1]) * prev) / (1 - c * f[i + 1])
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e150
        if big.any():
            prev[big] *= 1e-150
            cur[big] *= 1e-150
    d = (cur - prev + h * h * (f[-1] * cur / 3 + f[-2] * prev / 6)) / h
    return cur, d


def numerov_eigenvalues(
    V_left: Callable,
    V_right: Callable,
    E_min: float,
    E_max: float,
    L: float = 9.0,
    h: float = 2e-3,
    dE: float = 0.05,
    tol: float = 1e-10,
) -> list[float]:
    """Bound states of -psi'' + V psi = E psi from sampled V.

    Each side is integrated inward to x = 0 with Numerov's method (the
    side samples include their own limit at 0, so a jump is allowed);
    eigenvalues are zeros of the normalized Wronskian at the junction.
    """
    n = int(round(L / h))
    xl = np.linspace(-L, 0.0, n + 1)
    xr = np.linspace(L, 0.0, n + 1)
    VL = np.asarray(V_left(xl), dtype=float)
    VR = np.asarray(V_right(xr), dtype=float)

    def mismatch(E: np.ndarray) -> np.ndarray:
        pl, dl = _numerov_inward(VL, E, h)
        pr, dr = _numerov_inward(VR, E, h)
        dr = -dr  # right side was stepped in -x
        return (pl * dr - dl * pr) / np.sqrt((pl * pl + dl * dl) * (pr * pr + dr * dr))

    Es = np.arange(E_min, E_max + dE / 2, dE)
    D = mismatch(Es)
    idx = np.nonzero(np.sign(D[:-1]) * np.sign(D[1:]) < 0)[0]
    lo, hi = Es[idx].copy(), Es[idx + 1].copy()
    flo = D[idx].copy()
    while lo.size and np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        fm = mismatch(mid)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    return [float(v) for v in 0.5 * (lo + hi)]


def resolve_spectrum(system: DeformedSystem, count: int = 5, L: float = 9.0, h: float = 2e-3) -> list[float]:
    """Re-solve the deformed potential and return its lowest ``count`` levels."""
    E = system.energies
    if len(E) < count:
        raise ParameterError("system holds fewer retained levels than requested")
    lo = float(np.min(system.potential(np.linspace(-L, L, 2001)))) - 0.5
    hi = E[count - 1] + 1.0
    found = numerov_eigenvalues(
        lambda x: system.potential(x, "left"), lambda x: system.potential(x, "right"), lo, hi, L, h
    )
    if len(found) < count:
        raise SolverError(f"re-solve found {len(found)} levels below {hi}")
    return found[:count]


def shape_invariance_gap(ell: int, num: int = 801) -> dict:
    """Best fit of the partner of step 4 ell by another step potential plus a constant.

    A step potential family would be shape invariant if the residual were
    zero; the returned dict reports the fitted (a', shift) and the residual.
    """
    base = StateSet.solve(PiecewiseQuadratic.step(4 * ell), 2)
    partner = darboux_crum(base, 1)
    x = np.linspace(-5.0, 5.0, num)
    x = x[x != 0]
    V1 = partner.potential(x)
    target = V1 - (x * x - 1.0)
    A = np.column_stack([-(x < 0).astype(float), np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(A, target, rcond=None)
    resid = target - A @ coef
    return {"a_fit": float(coef[0]), "shift": float(coef[1]), "max_residual": float(np.max(np.abs(resid)))}
