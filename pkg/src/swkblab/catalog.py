"""Registry of solvable superpotentials.

Every entry is a :class:`SuperpotentialSpec`: a domain, vectorised W(x) and
W'(x), the exact spectrum and optional extras (mass deformation, ground state,
closed-form SWKB integral).  Builders:

* :func:`make_conventional` for the shape-invariant families,
* :func:`make_krein_adler` for Krein-Adler deletions of a pair {d, d+1},
* :func:`make_multi_indexed` for Darboux transforms with virtual states,
* :func:`make_ces` for the conditionally exactly solvable oscillator,
* :func:`make_pdem` for position-dependent-mass systems.

Krein-Adler and multi-indexed superpotentials are assembled from exact
polynomial Wronskians (see :mod:`swkblab.orthopoly`); no numerical
differentiation is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .orthopoly import (
    RationalPoly,
    as_fraction,
    classical_poly,
    gauss_power_wronskian,
    poly_eval,
    trig_power_wronskian,
)
from .specfun import kummer_1f1, log_gamma

__all__ = [
    "ParameterError",
    "SuperpotentialSpec",
    "DeletionSet",
    "CONVENTIONAL_FAMILIES",
    "FAMILY_INFO",
    "make_conventional",
    "make_krein_adler",
    "make_multi_indexed",
    "make_ces",
    "make_pdem",
    "make",
    "from_descriptor",
    "list_families",
]

INF = math.inf


class ParameterError(ValueError):
    """Raised when family parameters violate their constraints."""


@dataclass(frozen=True)
class SuperpotentialSpec:
    """A superpotential together with its exact spectrum.

    ``W`` and ``Wprime`` accept scalars or numpy arrays.  ``spectrum(n)`` is
    the exact eigenvalue with ``spectrum(0) == 0``.  ``n_max`` bounds the
    discrete spectrum of non-confining families.
    """

    family: str
    params: Mapping[str, Any]
    domain: tuple[float, float]
    W: Callable
    Wprime: Callable
    spectrum: Callable[[int], float]
    hbar: float = 1.0
    omega: float = 1.0
    eta: Callable | None = None
    n_max: int | None = None
    log_ground_state: Callable | None = None
    listed_potential: Callable | None = None
    closed_form_integral: Callable[[float], float] | None = None
    length_scale: float = 1.0
    symmetric: bool = False
    notes: str = ""
    extras: Mapping[str, Any] = field(default_factory=dict)

    def energy(self, n: int) -> float:
        """Exact eigenvalue of level n, rejecting n beyond ``n_max``."""
        n = int(n)
        if n < 0:
            raise ParameterError("level must be non-negative")
        if self.n_max is not None and n > self.n_max:
            raise ParameterError(
                f"level {n} exceeds the discrete spectrum (n_max={self.n_max}) of {self.family}"
            )
        return float(self.spectrum(n))

    def potential(self, x):
        """V(x) = W^2 - hbar W'."""
        return self.W(x) ** 2 - self.hbar * self.Wprime(x)

    def descriptor(self) -> dict:
        """JSON-serialisable description usable by :func:`from_descriptor`."""
        params = {}
        for k, v in self.params.items():
            if isinstance(v, (list, tuple, frozenset, set)):
                params[k] = sorted(int(i) for i in v)
            elif isinstance(v, Fraction):
                params[k] = float(v)
            else:
                params[k] = v
        return {
            "family": self.family,
            "params": params,
            "units": {"hbar": self.hbar, "omega": self.omega},
        }

    def in_domain(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (x > self.domain[0]) & (x < self.domain[1])


@dataclass(frozen=True)
class DeletionSet:
    """Sorted set of deleted level indices."""

    indices: tuple[int, ...]

    def __init__(self, indices: Sequence[int] = ()):
        idx = tuple(sorted({int(i) for i in indices}))
        if any(i < 0 for i in idx):
            raise ParameterError("deletion indices must be non-negative")
        object.__setattr__(self, "indices", idx)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, n) -> bool:
        return n in self.indices

    def is_admissible(self) -> bool:
        """Krein-Adler condition: prod_j (n - d_j) >= 0 for every integer n >= 0."""
        if not self.indices:
            return True
        top = self.indices[-1] + 2
        for n in range(top + 1):
            prod = 1
            for d in self.indices:
                prod *= n - d
            if prod < 0:
                return False
        return True

    def kept(self, count: int) -> list[int]:
        """The first ``count`` indices of Z>=0 minus the set."""
        out, n = [], 0
        while len(out) < count:
            if n not in self.indices:
                out.append(n)
            n += 1
        return out

    def relabel(self, n: int) -> int:
        """Index of the n-th surviving level of the undeformed system."""
        return self.kept(n + 1)[n]


# --------------------------------------------------------------------------
# helpers


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0:
        raise ParameterError(f"{name} must be positive, got {value}")
    return value


def _strict_floor(x: float) -> int:
    """Largest integer strictly below x."""
    return int(math.ceil(x) - 1)


def _units(hbar, omega) -> tuple[float, float]:
    return _positive("hbar", hbar), _positive("omega", omega)


def _cot(x):
    return np.cos(x) / np.sin(x)


# --------------------------------------------------------------------------
# conventional shape-invariant families


def _harmonic(hbar, omega, **_):
    return dict(
        domain=(-INF, INF),
        W=lambda x: omega * np.asarray(x, dtype=float),
        Wprime=lambda x: omega + 0.0 * np.asarray(x, dtype=float),
        spectrum=lambda n: 2.0 * n * hbar * omega,
        log_ground_state=lambda x: -omega * np.asarray(x, dtype=float) ** 2 / (2 * hbar),
        listed_potential=lambda x: omega**2 * np.asarray(x, dtype=float) ** 2 - hbar * omega,
        closed_form_integral=lambda E: math.pi * E / (2 * omega),
        length_scale=math.sqrt(hbar / omega),
        symmetric=True,
        params={},
    )


def _radial(hbar, omega, g, **_):
    g = float(g)
    if not g > 0.5:
        raise ParameterError("radial oscillator needs g > 1/2")
    return dict(
        domain=(0.0, INF),
        W=lambda x: omega * np.asarray(x, dtype=float) - hbar * g / np.asarray(x, dtype=float),
        Wprime=lambda x: omega + hbar * g / np.asarray(x, dtype=float) ** 2,
        spectrum=lambda n: 4.0 * n * hbar * omega,
        log_ground_state=lambda x: -omega * np.asarray(x, dtype=float) ** 2 / (2 * hbar)
        + g * np.log(np.asarray(x, dtype=float)),
        listed_potential=lambda x: omega**2 * np.asarray(x, dtype=float) ** 2
        + hbar**2 * g * (g - 1) / np.asarray(x, dtype=float) ** 2
        - hbar * omega * (2 * g + 1),
        closed_form_integral=lambda E: math.pi * E / (4 * omega),
        length_scale=math.sqrt(hbar / omega),
        params={"g": g},
    )


def _poschl_teller(hbar, omega, g, h, **_):
    g, h = float(g), float(h)
    if not (g > 0.5 and h > 0.5):
        raise ParameterError("Poschl-Teller needs g, h > 1/2")
    gh = g + h
    return dict(
        domain=(0.0, math.pi / 2),
        W=lambda x: -hbar * (g * _cot(x) - h * np.tan(x)),
        Wprime=lambda x: hbar * (g / np.sin(x) ** 2 + h / np.cos(x) ** 2),
        spectrum=lambda n: 4.0 * hbar**2 * n * (n + g + h),
        log_ground_state=lambda x: g * np.log(np.sin(x)) + h * np.log(np.cos(x)),
        listed_potential=lambda x: hbar**2 * g * (g - 1) / np.sin(x) ** 2
        + hbar**2 * h * (h - 1) / np.cos(x) ** 2
        - hbar**2 * gh**2,
        closed_form_integral=lambda E: 0.5 * math.pi * (math.sqrt(E + hbar**2 * gh**2) - hbar * gh),
        params={"g": g, "h": h},
    )


def _inverse_sin2(hbar, omega, g, **_):
    g = float(g)
    if not g > 0.5:
        raise ParameterError("1/sin^2 potential needs g > 1/2")
    return dict(
        domain=(0.0, math.pi),
        W=lambda x: -hbar * g * _cot(x),
        Wprime=lambda x: hbar * g / np.sin(x) ** 2,
        spectrum=lambda n: hbar**2 * n * (n + 2 * g),
        log_ground_state=lambda x: g * np.log(np.sin(x)),
        listed_potential=lambda x: hbar**2 * g * (g - 1) / np.sin(x) ** 2 - hbar**2 * g**2,
        symmetric=True,
        params={"g": g},
    )


def _coulomb(hbar, omega, g, e2=1.0, **_):
    g, e2 = float(g), _positive("e2", e2)
    if not g > 0.5:
        raise ParameterError("Coulomb potential needs g > 1/2")
    c = e2**2 / (4 * hbar**2)
    return dict(
        domain=(0.0, INF),
        W=lambda x: e2 / (2 * hbar * g) - hbar * g / np.asarray(x, dtype=float),
        Wprime=lambda x: hbar * g / np.asarray(x, dtype=float) ** 2,
        spectrum=lambda n: c * (1 / g**2 - 1 / (g + n) ** 2),
        log_ground_state=lambda x: -e2 * np.asarray(x, dtype=float) / (2 * hbar**2 * g)
        + g * np.log(np.asarray(x, dtype=float)),
        listed_potential=lambda x: hbar**2 * g * (g - 1) / np.asarray(x, dtype=float) ** 2
        - e2 / np.asarray(x, dtype=float)
        + e2**2 / (4 * hbar**2 * g**2),
        length_scale=hbar**2 * g / e2,
        params={"g": g, "e2": e2},
    )


def _kepler_sphere(hbar, omega, g, mu, **_):
    g, mu = float(g), _positive("mu", mu)
    if not g > 1.5:
        raise ParameterError("Kepler problem on a hypersphere needs g > 3/2")
    return dict(
        domain=(0.0, math.pi),
        W=lambda x: hbar * (mu / g - g * _cot(x)),
        Wprime=lambda x: hbar * g / np.sin(x) ** 2,
        spectrum=lambda n: hbar**2 * (mu**2 / g**2 - mu**2 / (g + n) ** 2 - g**2 + (g + n) ** 2),
        log_ground_state=lambda x: -mu / g * np.asarray(x, dtype=float) + g * np.log(np.sin(x)),
        listed_potential=lambda x: hbar**2 * g * (g - 1) / np.sin(x) ** 2
        - 2 * hbar**2 * mu * _cot(x)
        + hbar**2 * mu**2 / g**2
        - hbar**2 * g**2,
        params={"g": g, "mu": mu},
    )


def _morse(hbar, omega, h, mu, **_):
    h, mu = _positive("h", h), _positive("mu", mu)
    return dict(
        domain=(-INF, INF),
        W=lambda x: hbar * (mu * np.exp(x) - h),
        Wprime=lambda x: hbar * mu * np.exp(x),
        spectrum=lambda n: hbar**2 * (2 * n * h - n**2),
        log_ground_state=lambda x: h * np.asarray(x, dtype=float) - mu * np.exp(x),
        listed_potential=lambda x: hbar**2 * mu**2 * np.exp(2 * np.asarray(x, dtype=float))
        - hbar**2 * mu * (2 * h + 1) * np.exp(x)
        + hbar**2 * h**2,
        n_max=_strict_floor(h),
        params={"h": h, "mu": mu},
    )


def _inverse_cosh2(hbar, omega, h, **_):
    h = float(h)
    if not h > 0.5:
        raise ParameterError("1/cosh^2 potential needs h > 1/2")
    return dict(
        domain=(-INF, INF),
        W=lambda x: hbar * h * np.tanh(x),
        Wprime=lambda x: hbar * h / np.cosh(x) ** 2,
        spectrum=lambda n: hbar**2 * (2 * n * h - n**2),
        log_ground_state=lambda x: -h * np.log(np.cosh(x)),
        listed_potential=lambda x: -hbar**2 * h * (h + 1) / np.cosh(x) ** 2 + hbar**2 * h**2,
        n_max=_strict_floor(h),
        symmetric=True,
        params={"h": h},
    )


def _rosen_morse(hbar, omega, h, mu, **_):
    h, mu = float(h), _positive("mu", mu)
    if not h > math.sqrt(mu):
        raise ParameterError("Rosen-Morse needs h > sqrt(mu) > 0")
    return dict(
        domain=(-INF, INF),
        W=lambda x: hbar * (mu / h + h * np.tanh(x)),
        Wprime=lambda x: hbar * h / np.cosh(x) ** 2,
        spectrum=lambda n: hbar**2 * (h**2 - (h - n) ** 2 + mu**2 / h**2 - mu**2 / (h - n) ** 2),
        log_ground_state=lambda x: -mu / h * np.asarray(x, dtype=float) - h * np.log(np.cosh(x)),
        listed_potential=lambda x: -hbar**2 * h * (h + 1) / np.cosh(x) ** 2
        + 2 * hbar**2 * mu * np.tanh(x)
        + hbar**2 * h**2
        + hbar**2 * mu**2 / h**2,
        # bound while (h - n)^2 > mu
        n_max=_strict_floor(h - math.sqrt(mu)),
        params={"h": h, "mu": mu},
    )


def _hyperbolic_top2(hbar, omega, h, mu, **_):
    h, mu = _positive("h", h), _positive("mu", mu)
    return dict(
        domain=(-INF, INF),
        W=lambda x: hbar * (mu / np.cosh(x) + h * np.tanh(x)),
        Wprime=lambda x: hbar * (-mu * np.tanh(x) / np.cosh(x) + h / np.cosh(x) ** 2),
        spectrum=lambda n: hbar**2 * (2 * n * h - n**2),
        log_ground_state=lambda x: -mu * np.arctan(np.sinh(x)) - h * np.log(np.cosh(x)),
        listed_potential=lambda x: hbar**2
        * (-h * (h + 1) + mu**2 + mu * (2 * h + 1) * np.sinh(x))
        / np.cosh(x) ** 2
        + hbar**2 * h**2,
        n_max=_strict_floor(h),
        params={"h": h, "mu": mu},
    )


def _eckart(hbar, omega, g, mu, **_):
    g, mu = float(g), _positive("mu", mu)
    if not (math.sqrt(mu) > g > 0.5):
        raise ParameterError("Eckart potential needs sqrt(mu) > g > 1/2")
    return dict(
        domain=(0.0, INF),
        # W = -hbar (ln phi0)' with phi0 = exp(-mu x / g) sinh^g x
        W=lambda x: hbar * (mu / g - g / np.tanh(x)),
        Wprime=lambda x: hbar * g / np.sinh(x) ** 2,
        spectrum=lambda n: hbar**2 * (g**2 - (g + n) ** 2 + mu**2 / g**2 - mu**2 / (g + n) ** 2),
        log_ground_state=lambda x: -mu / g * np.asarray(x, dtype=float) + g * np.log(np.sinh(x)),
        listed_potential=lambda x: hbar**2 * g * (g - 1) / np.sinh(x) ** 2
        - 2 * hbar**2 * mu / np.tanh(x)
        + hbar**2 * g**2
        + hbar**2 * mu**2 / g**2,
        n_max=_strict_floor(math.sqrt(mu) - g),
        params={"g": g, "mu": mu},
    )


def _hyperbolic_pt(hbar, omega, g, h, **_):
    g, h = float(g), float(h)
    if not (h > g > 0.5):
        raise ParameterError("hyperbolic Poschl-Teller needs h > g > 1/2")
    return dict(
        domain=(0.0, INF),
        W=lambda x: -hbar * (g / np.tanh(x) - h * np.tanh(x)),
        Wprime=lambda x: hbar * (g / np.sinh(x) ** 2 + h / np.cosh(x) ** 2),
        spectrum=lambda n: 4 * hbar**2 * n * (h - g - n),
        log_ground_state=lambda x: g * np.log(np.sinh(x)) - h * np.log(np.cosh(x)),
        listed_potential=lambda x: hbar**2 * g * (g - 1) / np.sinh(x) ** 2
        - hbar**2 * h * (h + 1) / np.cosh(x) ** 2
        + hbar**2 * (h - g) ** 2,
        n_max=_strict_floor((h - g) / 2),
        params={"g": g, "h": h},
    )


CONVENTIONAL_FAMILIES: dict[str, Callable] = {
    "H": _harmonic,
    "L": _radial,
    "J": _poschl_teller,
    "sin2": _inverse_sin2,
    "coulomb": _coulomb,
    "kepler_sphere": _kepler_sphere,
    "morse": _morse,
    "cosh2": _inverse_cosh2,
    "rosen_morse": _rosen_morse,
    "hyperbolic_top2": _hyperbolic_top2,
    "eckart": _eckart,
    "hyperbolic_pt": _hyperbolic_pt,
}

FAMILY_INFO: dict[str, dict] = {
    "H": {"name": "harmonic oscillator", "params": {}, "constraints": "omega > 0"},
    "L": {"name": "radial oscillator", "params": {"g": 3.0}, "constraints": "g > 1/2"},
    "J": {"name": "Poschl-Teller", "params": {"g": 2.0, "h": 3.0}, "constraints": "g, h > 1/2"},
    "sin2": {"name": "1/sin^2 potential", "params": {"g": 2.0}, "constraints": "g > 1/2"},
    "coulomb": {"name": "Coulomb", "params": {"g": 2.0, "e2": 1.0}, "constraints": "g > 1/2"},
    "kepler_sphere": {
        "name": "Kepler problem on a hypersphere",
        "params": {"g": 2.0, "mu": 1.0},
        "constraints": "g > 3/2, mu > 0",
    },
    "morse": {"name": "Morse", "params": {"h": 7.5, "mu": 1.0}, "constraints": "h, mu > 0; n < h"},
    "cosh2": {"name": "1/cosh^2 potential", "params": {"h": 6.5}, "constraints": "h > 1/2; n < h"},
    "rosen_morse": {
        "name": "Rosen-Morse",
        "params": {"h": 8.0, "mu": 4.0},
        "constraints": "h > sqrt(mu) > 0; n < h - sqrt(mu)",
    },
    "hyperbolic_top2": {
        "name": "hyperbolic symmetric top II",
        "params": {"h": 6.5, "mu": 1.0},
        "constraints": "h, mu > 0; n < h",
    },
    "eckart": {
        "name": "Eckart",
        "params": {"g": 1.5, "mu": 100.0},
        "constraints": "sqrt(mu) > g > 1/2; n < sqrt(mu) - g",
    },
    "hyperbolic_pt": {
        "name": "hyperbolic Poschl-Teller",
        "params": {"g": 1.5, "h": 20.0},
        "constraints": "h > g > 1/2; n < (h - g)/2",
    },
    "ka": {
        "name": "Krein-Adler (base H, L or J, deletion {d, d+1})",
        "params": {"base": "H", "d": 1},
        "constraints": "d >= 1; base constraints",
    },
    "mi": {
        "name": "multi-indexed (base L or J, virtual-state sets D1, D2)",
        "params": {"base": "L", "D1": [1], "D2": [2], "g": 5.0},
        "constraints": "L: g > max(|D2| + 3/2, max D2 + 1/2); "
        "J: g > max(|D2| + 2, max D2 + 1/2), h > max(|D1| + 2, max D1 + 1/2)",
    },
    "xlag1": {"name": "type I X1-Laguerre", "params": {"g": 3.0}, "constraints": "g > 1/2"},
    "xlag2": {"name": "type II X1-Laguerre", "params": {"g": 3.0}, "constraints": "g > 3/2"},
    "ces": {
        "name": "conditionally exactly solvable oscillator",
        "params": {"b": 0.0, "beta": 0.0},
        "constraints": "b > -2, |beta| < 2 Gamma(b/4 + 1)/Gamma(b/4 + 1/2)",
    },
    "deformed_ho": {
        "name": "deformed harmonic oscillator (position-dependent mass)",
        "params": {"alpha": 0.5},
        "constraints": "alpha >= 0",
    },
    "semiconfined": {
        "name": "semi-confined harmonic oscillator (position-dependent mass)",
        "params": {"a": 2.0},
        "constraints": "a > 0",
    },
}


def make_conventional(family: str, hbar: float = 1.0, omega: float = 1.0, **params) -> SuperpotentialSpec:
    """Build a conventional shape-invariant superpotential.

    >>> spec = make_conventional("L", g=3)
    >>> float(spec.W(1.0)), spec.energy(2)
    (-2.0, 8.0)
    """
    if family not in CONVENTIONAL_FAMILIES:
        raise ParameterError(f"unknown conventional family {family!r}")
    hbar, omega = _units(hbar, omega)
    try:
        data = CONVENTIONAL_FAMILIES[family](hbar=hbar, omega=omega, **params)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for {family}: {exc}") from None
    return SuperpotentialSpec(family=family, hbar=hbar, omega=omega, **data)


# --------------------------------------------------------------------------
# Wronskian-built superpotentials (Krein-Adler and multi-indexed)


class _GaussLog:
    """d/dxi ln|exp(A xi^2) xi^Q R(xi)| and its derivative."""

    def __init__(self, A, Q, R: RationalPoly):
        self.A, self.Q, self.R = float(A), float(Q), R
        self.R1, self.R2 = R.deriv(), R.deriv(2)

    def d1(self, xi):
        r, r1 = poly_eval(self.R, xi), poly_eval(self.R1, xi)
        out = 2 * self.A * xi + r1 / r
        if self.Q:
            out = out + self.Q / xi
        return out

    def d2(self, xi):
        r, r1, r2 = poly_eval(self.R, xi), poly_eval(self.R1, xi), poly_eval(self.R2, xi)
        out = 2 * self.A + r2 / r - (r1 / r) ** 2
        if self.Q:
            out = out - self.Q / xi**2
        return out


class _TrigLog:
    """d/dx ln|sin^S cos^C R(cos 2x)| and its derivative."""

    def __init__(self, S, C, R: RationalPoly):
        self.S, self.C, self.R = float(S), float(C), R
        self.R1, self.R2 = R.deriv(), R.deriv(2)

    def d1(self, x):
        y = np.cos(2 * x)
        r, r1 = poly_eval(self.R, y), poly_eval(self.R1, y)
        return self.S / np.tan(x) - self.C * np.tan(x) - 2 * np.sin(2 * x) * r1 / r

    def d2(self, x):
        y = np.cos(2 * x)
        r, r1, r2 = poly_eval(self.R, y), poly_eval(self.R1, y), poly_eval(self.R2, y)
        q = r1 / r
        return (
            -self.S / np.sin(x) ** 2
            - self.C / np.cos(x) ** 2
            - 4 * np.cos(2 * x) * q
            + 4 * np.sin(2 * x) ** 2 * (r2 / r - q**2)
        )


def _real_roots_inside(R: RationalPoly, lo: float, hi: float) -> list[float]:
    if R.degree < 1:
        return []
    roots = np.roots([float(c) for c in reversed(R.coeffs)])
    out = []
    for z in roots:
        if abs(z.imag) <= 1e-9 * max(1.0, abs(z)) and lo < z.real < hi:
            out.append(float(z.real))
    return out


def _wronskian_spec(
    family: str,
    base: str,
    seeds: list[tuple],
    ground: tuple,
    spectrum: Callable[[int], float],
    hbar: float,
    omega: float,
    params: dict,
    extras: dict | None = None,
) -> SuperpotentialSpec:
    if base in ("H", "L"):
        num = _GaussLog(*gauss_power_wronskian(seeds + [ground]))
        den = _GaussLog(*gauss_power_wronskian(seeds)) if seeds else _GaussLog(0, 0, RationalPoly([1]))
        lo = -INF if base == "H" else 0.0
        for R in (num.R, den.R):
            bad = _real_roots_inside(R, lo, INF)
            if bad:
                raise ParameterError(f"Wronskian vanishes inside the domain at xi={bad[0]:.6g}")
        s = math.sqrt(omega / hbar)
        amp = math.sqrt(hbar * omega)

        def W(x):
            xi = s * np.asarray(x, dtype=float)
            return -amp * (num.d1(xi) - den.d1(xi))

        def Wprime(x):
            xi = s * np.asarray(x, dtype=float)
            return -omega * (num.d2(xi) - den.d2(xi))

        domain = (lo, INF)
        length = 1.0 / s
    else:
        num = _TrigLog(*trig_power_wronskian(seeds + [ground]))
        den = _TrigLog(*trig_power_wronskian(seeds)) if seeds else _TrigLog(0, 0, RationalPoly([1]))
        for R in (num.R, den.R):
            bad = _real_roots_inside(R, -1.0, 1.0)
            if bad:
                raise ParameterError(f"Wronskian vanishes inside the domain at y={bad[0]:.6g}")

        def W(x):
            x = np.asarray(x, dtype=float)
            return -hbar * (num.d1(x) - den.d1(x))

        def Wprime(x):
            x = np.asarray(x, dtype=float)
            return -hbar * (num.d2(x) - den.d2(x))

        domain = (0.0, math.pi / 2)
        length = 1.0
    ex = {"numerator": num.R, "denominator": den.R}
    if extras:
        ex.update(extras)
    return SuperpotentialSpec(
        family=family,
        params=params,
        domain=domain,
        W=W,
        Wprime=Wprime,
        spectrum=spectrum,
        hbar=hbar,
        omega=omega,
        length_scale=length,
        symmetric=(base == "H"),
        extras=ex,
    )


def _laguerre_in_x2(n: int, alpha, sign: int = 1) -> RationalPoly:
    """L_n^alpha(sign * x^2) as a polynomial in x."""
    return classical_poly("laguerre", n, alpha).compose(RationalPoly([0, 0, sign]))


def _base_eigen(base: str, n: int, g: Fraction, h: Fraction) -> tuple:
    if base == "H":
        return (Fraction(-1, 2), Fraction(0), classical_poly("hermite", n))
    if base == "L":
        return (Fraction(-1, 2), g, _laguerre_in_x2(n, g - Fraction(1, 2)))
    return (g, h, classical_poly("jacobi", n, g - Fraction(1, 2), h - Fraction(1, 2)))


def _base_spectrum(base: str, hbar: float, omega: float, g: float, h: float) -> Callable[[int], float]:
    if base == "H":
        return lambda n: 2.0 * n * hbar * omega
    if base == "L":
        return lambda n: 4.0 * n * hbar * omega
    return lambda n: 4.0 * hbar**2 * n * (n + g + h)


def make_krein_adler(
    base: str,
    d: int | Sequence[int],
    hbar: float = 1.0,
    omega: float = 1.0,
    g: float | None = None,
    h: float | None = None,
) -> SuperpotentialSpec:
    """Krein-Adler system deleting the levels {d, d+1} of base H, L or J.

    ``d`` may also be an explicit admissible deletion list.
    """
    base = base.upper()
    if base not in ("H", "L", "J"):
        raise ParameterError("Krein-Adler base must be H, L or J")
    hbar, omega = _units(hbar, omega)
    if isinstance(d, (int, np.integer)):
        if d < 1:
            raise ParameterError("d must be a positive integer")
        D = DeletionSet([d, d + 1])
    else:
        D = DeletionSet(d)
    if not D.indices or not D.is_admissible():
        raise ParameterError(f"deletion set {list(D)} is not Krein-Adler admissible")
    if base == "L" and (g is None or not g > 0.5):
        raise ParameterError("L base needs g > 1/2")
    if base == "J" and (g is None or h is None or not (g > 0.5 and h > 0.5)):
        raise ParameterError("J base needs g, h > 1/2")
    gf = as_fraction(g) if g is not None else Fraction(0)
    hf = as_fraction(h) if h is not None else Fraction(0)
    seeds = [_base_eigen(base, k, gf, hf) for k in D]
    n0 = D.relabel(0)
    ground = _base_eigen(base, n0, gf, hf)
    base_E = _base_spectrum(base, hbar, omega, float(gf), float(hf))
    E0 = base_E(n0)

    def spectrum(n, _D=D):
        return base_E(_D.relabel(int(n))) - E0

    params: dict[str, Any] = {"base": base, "D": list(D.indices)}
    if base != "H":
        params["g"] = float(gf)
    if base == "J":
        params["h"] = float(hf)
    return _wronskian_spec("ka", base, seeds, ground, spectrum, hbar, omega, params)


def _virtual_state(base: str, kind: str, v: int, g: Fraction, h: Fraction) -> tuple:
    half = Fraction(1, 2)
    if base == "L":
        if kind == "I":
            return (half, g, _laguerre_in_x2(v, g - half, sign=-1))
        return (-half, 1 - g, _laguerre_in_x2(v, half - g))
    if kind == "I":
        return (g, 1 - h, classical_poly("jacobi", v, g - half, half - h))
    return (1 - g, h, classical_poly("jacobi", v, half - g, h - half))


def make_multi_indexed(
    base: str,
    D1: Sequence[int] = (),
    D2: Sequence[int] = (),
    hbar: float = 1.0,
    omega: float = 1.0,
    g: float = 5.0,
    h: float | None = None,
) -> SuperpotentialSpec:
    """Multi-indexed Laguerre or Jacobi system from type I (D1) and type II (D2) virtual states."""
    base = base.upper()
    if base not in ("L", "J"):
        raise ParameterError("multi-indexed base must be L or J")
    hbar, omega = _units(hbar, omega)
    D1s, D2s = DeletionSet(D1), DeletionSet(D2)
    if any(i < 1 for i in D1s) or any(i < 1 for i in D2s):
        raise ParameterError("virtual-state indices must be positive")
    if not (D1s.indices or D2s.indices):
        raise ParameterError("at least one virtual state is required")
    M, N = len(D1s), len(D2s)
    dI = max(D1s.indices, default=0)
    dII = max(D2s.indices, default=0)
    g = float(g)
    if base == "L":
        floor_g = max(N + 1.5, dII + 0.5, 0.5)
        if not g > floor_g:
            raise ParameterError(f"multi-indexed Laguerre needs g > {floor_g}")
        h = 0.0
    else:
        if h is None:
            raise ParameterError("multi-indexed Jacobi needs h")
        h = float(h)
        floor_g = max(N + 2.0, dII + 0.5, 0.5)
        floor_h = max(M + 2.0, dI + 0.5, 0.5)
        if not g > floor_g:
            raise ParameterError(f"multi-indexed Jacobi needs g > {floor_g}")
        if not h > floor_h:
            raise ParameterError(f"multi-indexed Jacobi needs h > {floor_h}")
    gf, hf = as_fraction(g), as_fraction(h)
    seeds = [_virtual_state(base, "I", v, gf, hf) for v in D1s]
    seeds += [_virtual_state(base, "II", v, gf, hf) for v in D2s]
    ground = _base_eigen(base, 0, gf, hf)
    spectrum = _base_spectrum(base, hbar, omega, g, h)
    params: dict[str, Any] = {"base": base, "D1": list(D1s.indices), "D2": list(D2s.indices), "g": g}
    if base == "J":
        params["h"] = h
    return _wronskian_spec("mi", base, seeds, ground, spectrum, hbar, omega, params)


# --------------------------------------------------------------------------
# conditionally exactly solvable oscillator


def ces_beta_bound(b: float) -> float:
    """Upper bound 2 Gamma(b/4 + 1) / Gamma(b/4 + 1/2) on |beta|."""
    l1, s1 = log_gamma(b / 4 + 1)
    l2, s2 = log_gamma(b / 4 + 0.5)
    return 2 * s1 * s2 * math.exp(l1 - l2)


def make_ces(b: float, beta: float = 0.0, hbar: float = 1.0, omega: float = 1.0) -> SuperpotentialSpec:
    """Conditionally exactly solvable deformation of the harmonic oscillator.

    ``b`` is the dimensionless energy shift (in units of hbar*omega).
    """
    hbar, omega = _units(hbar, omega)
    b, beta = float(b), float(beta)
    if not b > -2:
        raise ParameterError("condition I violated: b must exceed -2")
    bound = ces_beta_bound(b)
    if not abs(beta) < bound:
        raise ParameterError(f"condition II violated: |beta| must be below {bound:.6g}")
    a1, a2 = -b / 4, 0.5 - b / 4

    def _u(xi: float) -> tuple[float, float]:
        z = -xi * xi
        m1 = kummer_1f1(a1, 0.5, z)
        dm1 = a1 / 0.5 * kummer_1f1(a1 + 1, 1.5, z)
        u = m1
        du = -2 * xi * dm1
        if beta:
            m2 = kummer_1f1(a2, 1.5, z)
            dm2 = a2 / 1.5 * kummer_1f1(a2 + 1, 2.5, z)
            u += beta * xi * m2
            du += beta * (m2 - 2 * xi * xi * dm2)
        return u, du

    def _w(xi):
        xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
        w = np.empty_like(xi_arr)
        dw = np.empty_like(xi_arr)
        for i, v in enumerate(xi_arr.flat):
            u, du = _u(v)
            q = du / u
            # u'' = b u - 2 xi u' from the linear equation for u
            w.flat[i] = v + q
            dw.flat[i] = 1 + (b - 2 * v * q) - q * q
        if np.ndim(xi) == 0:
            return float(w[0]), float(dw[0])
        return w, dw

    s = math.sqrt(omega / hbar)
    amp = math.sqrt(hbar * omega)

    def spectrum(n):
        return 0.0 if n == 0 else (2 * n + b) * hbar * omega

    return SuperpotentialSpec(
        family="ces",
        params={"b": b, "beta": beta},
        domain=(-INF, INF),
        W=lambda x: amp * _w(s * np.asarray(x, dtype=float))[0],
        Wprime=lambda x: omega * _w(s * np.asarray(x, dtype=float))[1],
        spectrum=spectrum,
        hbar=hbar,
        omega=omega,
        length_scale=1.0 / s,
        symmetric=(beta == 0.0),
    )


# --------------------------------------------------------------------------
# position-dependent effective mass


def make_pdem(kind: str, hbar: float = 1.0, omega: float = 1.0, alpha: float = 0.5, a: float = 2.0) -> SuperpotentialSpec:
    """Position-dependent-mass systems: ``deformed_ho`` (alpha) or ``semiconfined`` (a)."""
    hbar, omega = _units(hbar, omega)
    if kind == "deformed_ho":
        alpha = float(alpha)
        if alpha < 0:
            raise ParameterError("alpha must be non-negative")
        return SuperpotentialSpec(
            family="deformed_ho",
            params={"alpha": alpha},
            domain=(-INF, INF),
            W=lambda x: omega * np.asarray(x, dtype=float),
            Wprime=lambda x: omega + 0.0 * np.asarray(x, dtype=float),
            spectrum=lambda n: 2 * n * hbar * omega + hbar**2 * alpha * n**2,
            hbar=hbar,
            omega=omega,
            eta=lambda x: 1 + alpha * np.asarray(x, dtype=float) ** 2,
            length_scale=math.sqrt(hbar / omega),
            symmetric=True,
        )
    if kind == "semiconfined":
        a = _positive("a", a)

        def W(x):
            x = np.asarray(x, dtype=float)
            inside = x > -a
            safe = np.where(inside, x + a, 1.0)
            return np.where(inside, omega * x * np.sqrt(a / safe), -np.inf)

        def Wprime(x):
            x = np.asarray(x, dtype=float)
            inside = x > -a
            safe = np.where(inside, x + a, 1.0)
            return np.where(
                inside, omega * math.sqrt(a) * (safe**-0.5 - 0.5 * x * safe**-1.5), np.inf
            )

        def eta(x):
            x = np.asarray(x, dtype=float)
            inside = x > -a
            return np.where(inside, np.sqrt(np.where(inside, (x + a) / a, 1.0)), np.inf)

        return SuperpotentialSpec(
            family="semiconfined",
            params={"a": a},
            domain=(-a, INF),
            W=W,
            Wprime=Wprime,
            spectrum=lambda n: 2 * n * hbar * omega,
            hbar=hbar,
            omega=omega,
            eta=eta,
            length_scale=math.sqrt(hbar / omega),
        )
    raise ParameterError(f"unknown position-dependent-mass kind {kind!r}")


# --------------------------------------------------------------------------
# dispatch


def _as_int_list(v) -> list[int]:
    if v is None:
        return []
    if isinstance(v, str):
        v = [p for p in v.replace(";", ",").split(",") if p.strip()]
    if isinstance(v, (int, np.integer)):
        return [int(v)]
    return [int(i) for i in v]


def make(family: str, hbar: float = 1.0, omega: float = 1.0, **params) -> SuperpotentialSpec:
    """Build any registered family by name."""
    if family in CONVENTIONAL_FAMILIES:
        return make_conventional(family, hbar=hbar, omega=omega, **params)
    if family == "ka":
        d = params.pop("D", None)
        if d is None:
            d = int(params.pop("d"))
        else:
            d = _as_int_list(d)
        return make_krein_adler(params.pop("base", "H"), d, hbar=hbar, omega=omega, **params)
    if family == "mi":
        return make_multi_indexed(
            params.pop("base", "L"),
            _as_int_list(params.pop("D1", ())),
            _as_int_list(params.pop("D2", ())),
            hbar=hbar,
            omega=omega,
            **params,
        )
    if family == "xlag1":
        return make_multi_indexed("L", [1], [], hbar=hbar, omega=omega, g=params.get("g", 3.0))
    if family == "xlag2":
        return make_multi_indexed("L", [], [1], hbar=hbar, omega=omega, g=params.get("g", 3.0))
    if family == "ces":
        return make_ces(params.get("b", 0.0), params.get("beta", 0.0), hbar=hbar, omega=omega)
    if family in ("deformed_ho", "semiconfined"):
        return make_pdem(family, hbar=hbar, omega=omega, **params)
    raise ParameterError(f"unknown family {family!r}")


def from_descriptor(desc: Mapping) -> SuperpotentialSpec:
    """Inverse of :meth:`SuperpotentialSpec.descriptor`."""
    units = desc.get("units", {})
    return make(desc["family"], hbar=units.get("hbar", 1.0), omega=units.get("omega", 1.0), **dict(desc.get("params", {})))


def list_families() -> list[dict]:
    """Name, description, default parameters and constraints of every family."""
    return [{"family": k, **v} for k, v in FAMILY_INFO.items()]
