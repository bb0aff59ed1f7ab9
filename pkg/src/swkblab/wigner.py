"""Wigner quasiprobability distributions of real bound states.

For real psi the Wigner function reduces to a half-line cosine transform

    W(p, x) = (2/pi) int_0^inf psi(x - u) psi(x + u) cos(2 p u) du,

which is real and even in p by construction.  The u-integral is cut where
either factor leaves the state's support and split at u = |x|, where the
integrand inherits the kink of a piecewise potential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np
from numpy.polynomial import hermite as npherm
from numpy.polynomial import laguerre as nplag
from scipy import integrate
from scipy.interpolate import RegularGridInterpolator

from .catalog import ParameterError

__all__ = [
    "RealState",
    "HarmonicState",
    "PhaseGrid",
    "WignerResult",
    "wigner_point",
    "wigner_values",
    "wigner_grid",
    "ho_wigner",
    "momentum_density",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(48)


class RealState(Protocol):
    def __call__(self, x): ...

    def support(self) -> tuple[float, float]: ...


@dataclass(frozen=True)
class HarmonicState:
    """Normalized eigenstate n of -psi'' + x^2 psi."""

    n: int

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        c = np.zeros(self.n + 1)
        c[-1] = 1.0
        norm = 1.0 / math.sqrt(2.0**self.n * math.factorial(self.n) * math.sqrt(math.pi))
        return norm * npherm.hermval(x, c) * np.exp(-0.5 * x * x)

    def support(self) -> tuple[float, float]:
        r = math.sqrt(2 * self.n + 1) + 8.5
        return -r, r


def ho_wigner(n: int, p, x):
    """Closed form (-1)^n/pi exp(-r^2) L_n(2 r^2), r^2 = p^2 + x^2."""
    r2 = np.asarray(p, dtype=float) ** 2 + np.asarray(x, dtype=float) ** 2
    c = np.zeros(n + 1)
    c[-1] = 1.0
    return (-1) ** n / math.pi * np.exp(-r2) * nplag.lagval(2 * r2, c)


@dataclass(frozen=True)
class PhaseGrid:
    x_range: tuple[float, float] = (-4.0, 4.0)
    p_range: tuple[float, float] = (-4.0, 4.0)
    nx: int = 41
    np_: int = 41

    def __post_init__(self):
        if self.nx < 2 or self.np_ < 2:
            raise ParameterError("grid resolutions must be at least 2")
        if not self.x_range[1] > self.x_range[0]:
            raise ParameterError("x range must be increasing")
        lo, hi = self.p_range
        if not hi > 0 or not math.isclose(lo, -hi, rel_tol=1e-12, abs_tol=1e-12):
            raise ParameterError("p range must be symmetric about 0")

    @classmethod
    def parse(cls, text: str) -> "PhaseGrid":
        """'xmin,xmax,nx,pmax,np' or 'L,n' for the square [-L,L]^2."""
        parts = [float(v) for v in text.split(",")]
        if len(parts) == 2:
            L, n = parts
            return cls((-L, L), (-L, L), int(n), int(n))
        if len(parts) == 5:
            x0, x1, nx, P, npp = parts
            return cls((x0, x1), (-P, P), int(nx), int(npp))
        raise ParameterError("grid must be 'L,n' or 'xmin,xmax,nx,pmax,np'")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(*self.x_range, self.nx)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(*self.p_range, self.np_)


def _u_nodes(x: float, lo: float, hi: float, panel: float = 0.25) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on [0, u_max] with a breakpoint at |x|."""
    u_max = min(x - lo, hi - x)
    if u_max <= 0:
        return np.zeros(0), np.zeros(0)
    cuts = [0.0, u_max]
    if 0 < abs(x) < u_max:
        cuts.insert(1, abs(x))
    us, ws = [], []
    for a, b in zip(cuts, cuts[1:]):
        k = max(1, int(math.ceil((b - a) / panel)))
        edges = np.linspace(a, b, k + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        us.append((mid[:, None] + half[:, None] * _GL_X[None, :]).ravel())
        ws.append((half[:, None] * _GL_W[None, :]).ravel())
    return np.concatenate(us), np.concatenate(ws)


def wigner_values(state: RealState, p, x: float) -> np.ndarray:
    """W(p, x) for an array of p at one x."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    lo, hi = state.support()
    u, w = _u_nodes(float(x), lo, hi)
    if u.size == 0:
        return np.zeros_like(p)
    f = np.asarray(state(x - u)) * np.asarray(state(x + u)) * w
    return (2.0 / math.pi) * np.cos(2.0 * np.outer(p, u)) @ f


def wigner_point(state: RealState, p: float, x: float) -> float:
    return float(wigner_values(state, [p], x)[0])


def momentum_density(state: RealState, p) -> np.ndarray:
    """|psi~(p)|^2 by direct Fourier quadrature of the real state."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    lo, hi = state.support()
    cuts = sorted({lo, hi, *([0.0] if lo < 0 < hi else [])})
    xs, ws = [], []
    for a, b in zip(cuts, cuts[1:]):
        k = max(1, int(math.ceil((b - a) / 0.25)))
        edges = np.linspace(a, b, k + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        xs.append((mid[:, None] + half[:, None] * _GL_X[None, :]).ravel())
        ws.append((half[:, None] * _GL_W[None, :]).ravel())
    x, w = np.concatenate(xs), np.concatenate(ws)
    f = np.asarray(state(x)) * w
    re = np.cos(np.outer(p, x)) @ f
    im = np.sin(np.outer(p, x)) @ f
    return (re * re + im * im) / (2 * math.pi)


@dataclass
class WignerResult:
    grid: PhaseGrid
    W: np.ndarray  # shape (np, nx), rows indexed by p
    normalization: float
    x_marginal_error: float
    p_marginal_error: float
    minimum: float
    anisotropy: float

    def rows(self):
        for i, p in enumerate(self.grid.p):
            for j, x in enumerate(self.grid.x):
                yield {"x": float(x), "p": float(p), "W": float(self.W[i, j])}

    def diagnostics(self) -> dict:
        return {
            "normalization": self.normalization,
            "x_marginal_error": self.x_marginal_error,
            "p_marginal_error": self.p_marginal_error,
            "minimum": self.minimum,
            "anisotropy": self.anisotropy,
        }


def _anisotropy(grid: PhaseGrid, W: np.ndarray, n_dir: int = 36, n_r: int = 60) -> float:
    """Largest spread of the radial profile over directions, relative to max |W|.

    Rays start at the phase-space centroid of |W|.
    """
    x, p = grid.x, grid.p
    interp = RegularGridInterpolator((p, x), W, method="cubic" if min(W.shape) >= 4 else "linear", bounds_error=False, fill_value=0.0)
    mass = np.abs(W)
    tot = mass.sum()
    xc = float((mass.sum(axis=0) * x).sum() / tot)
    pc = float((mass.sum(axis=1) * p).sum() / tot)
    R = min(xc - x[0], x[-1] - xc, pc - p[0], p[-1] - pc)
    if R <= 0:
        return float("nan")
    r = np.linspace(0, R, n_r)
    th = np.linspace(0, 2 * math.pi, n_dir, endpoint=False)
    pts = np.stack([pc + np.outer(np.sin(th), r), xc + np.outer(np.cos(th), r)], axis=-1)
    prof = interp(pts.reshape(-1, 2)).reshape(n_dir, n_r)
    return float(np.max(prof.max(axis=0) - prof.min(axis=0)) / np.max(np.abs(W)))


def wigner_grid(state: RealState, grid: PhaseGrid | None = None) -> WignerResult:
    """Sample W on ``grid`` and report normalization, marginals, minimum and anisotropy.

    Marginal errors are max deviations of the trapezoid integrals over the
    grid from |psi(x)|^2 and |psi~(p)|^2 at the grid points.
    """
    grid = grid or PhaseGrid()
    x, p = grid.x, grid.p
    W = np.column_stack([wigner_values(state, p, xi) for xi in x])
    norm = float(integrate.trapezoid(integrate.trapezoid(W, x, axis=1), p))
    px = integrate.trapezoid(W, p, axis=0)
    xerr = float(np.max(np.abs(px - np.asarray(state(x)) ** 2)))
    pp = integrate.trapezoid(W, x, axis=1)
    perr = float(np.max(np.abs(pp - momentum_density(state, p))))
    return WignerResult(grid, W, norm, xerr, perr, float(W.min()), _anisotropy(grid, W))
