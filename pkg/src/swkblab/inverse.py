"""The inverse SWKB problem: a superpotential from a prescribed spectrum.

Differentiating the SWKB condition in the energy and Abel-inverting gives
the width of the classically allowed region as a function of W^2,

    x_plus - x_minus = 2 hbar * integral_0^{W^2} (dE/dn)^(-1) / sqrt(W^2 - E) dE.

A shape ansatz x_minus = f(x_plus) then closes the problem.  W is taken
negative to the left of its zero so that the ground state is normalizable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, interpolate, optimize

from .catalog import ParameterError, SuperpotentialSpec

__all__ = [
    "InverseError",
    "SpectrumSpec",
    "ShapeAnsatz",
    "Reconstruction",
    "SuperpotentialReconstructor",
    "abel_rhs",
    "reconstruct",
    "classical_period_inverse",
    "parse_spectrum",
    "parse_ansatz",
]


class InverseError(ArithmeticError):
    """The ansatz admits no solution for the requested W^2."""


# --------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectrumSpec:
    """E(n) for continuous n >= 0 together with dE/dn.

    Use the ``linear``, ``quadratic`` and ``tabulated`` constructors.
    """

    kind: str
    E_of_n: Callable[[float], float]
    dE_dn: Callable[[float], float]
    params: tuple = ()
    n_of_E: Callable[[float], float] | None = None
    E_max: float = math.inf

    @classmethod
    def linear(cls, c: float) -> "SpectrumSpec":
        c = float(c)
        if c <= 0:
            raise ParameterError("linear spectrum needs c > 0")
        return cls("linear", lambda n: c * n, lambda n: c, (c,), lambda E: E / c)

    @classmethod
    def quadratic(cls, c1: float, c2: float) -> "SpectrumSpec":
        """E = c1 n + c2 n^2."""
        c1, c2 = float(c1), float(c2)
        if c1 <= 0:
            raise ParameterError("quadratic spectrum needs c1 > 0 so that dE/dn > 0 near n = 0")
        if c2 == 0:
            return cls.linear(c1)
        E_max = math.inf if c2 > 0 else -c1 * c1 / (4 * c2)

        def n_of_E(E):
            return (math.sqrt(c1 * c1 + 4 * c2 * E) - c1) / (2 * c2)

        return cls(
            "quadratic",
            lambda n: c1 * n + c2 * n * n,
            lambda n: c1 + 2 * c2 * n,
            (c1, c2),
            n_of_E,
            E_max,
        )

    @classmethod
    def tabulated(cls, energies: Sequence[float], levels: Sequence[float] | None = None) -> "SpectrumSpec":
        """Monotone cubic interpolation of E_n; E_0 must be 0."""
        E = np.asarray(energies, dtype=float)
        n = np.arange(len(E), dtype=float) if levels is None else np.asarray(levels, dtype=float)
        if len(E) < 2 or len(E) != len(n):
            raise ParameterError("need at least two tabulated levels")
        if abs(E[0]) > 1e-12 or n[0] != 0:
            raise ParameterError("tabulated spectrum must start with E_0 = 0")
        if np.any(np.diff(E) <= 0) or np.any(np.diff(n) <= 0):
            raise ParameterError("tabulated spectrum must be strictly increasing")
        fwd = interpolate.PchipInterpolator(n, E, extrapolate=False)
        der = fwd.derivative()
        inv = interpolate.PchipInterpolator(E, n, extrapolate=False)
        return cls(
            "tabulated",
            lambda x: float(fwd(x)),
            lambda x: float(der(x)),
            tuple(E.tolist()),
            lambda e: float(inv(e)),
            float(E[-1]),
        )

    def __post_init__(self):
        if abs(self.E_of_n(0.0)) > 1e-12:
            raise ParameterError("spectrum must satisfy E(0) = 0")


def parse_spectrum(text: str) -> SpectrumSpec:
    """``linear:c``, ``quad:c1,c2`` or ``file:PATH`` (one energy per line)."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "linear":
            return SpectrumSpec.linear(float(arg))
        if kind in ("quad", "quadratic"):
            c1, c2 = (float(v) for v in arg.split(","))
            return SpectrumSpec.quadratic(c1, c2)
        if kind == "file":
            values = [float(tok) for line in open(arg) for tok in line.replace(",", " ").split()]
            return SpectrumSpec.tabulated(values)
    except (ValueError, OSError) as exc:
        raise ParameterError(f"bad spectrum '{text}': {exc}") from None
    raise ParameterError(f"unknown spectrum kind '{kind}'")


# --------------------------------------------------------------------------
# ansatz


@dataclass(frozen=True)
class ShapeAnsatz:
    """Relation x_minus = f(x_plus) between the two turning points."""

    kind: str
    param: float | None = None

    KINDS = ("mirror", "gamma", "product", "tanprod")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ParameterError(f"unknown ansatz '{self.kind}'")
        p = self.param
        if self.kind == "gamma" and not (p is not None and 0 < p <= 1):
            raise ParameterError("gamma ansatz needs 0 < gamma <= 1")
        if self.kind == "product" and not (p is not None and p > 0):
            raise ParameterError("product ansatz needs x0 > 0")
        if self.kind == "tanprod" and not (p is not None and 0 < p < math.pi / 2):
            raise ParameterError("tan-product ansatz needs 0 < x0 < pi/2")

    @property
    def zero(self) -> float:
        """Position of the zero of W."""
        return float(self.param) if self.kind in ("product", "tanprod") else 0.0

    @property
    def domain(self) -> tuple[float, float]:
        if self.kind == "product":
            return (0.0, math.inf)
        if self.kind == "tanprod":
            return (0.0, math.pi / 2)
        return (-math.inf, math.inf)

    def partner(self, x):
        """The other turning point at the same W^2."""
        x = np.asarray(x, dtype=float)
        p = self.param
        if self.kind == "mirror":
            return -x
        if self.kind == "gamma":
            return np.where(x > 0, -x / p, -p * x)
        if self.kind == "product":
            return p * p / x
        return np.arctan(math.tan(p) ** 2 / np.tan(x))

    def gap(self, x):
        """x_plus - x_minus for the pair containing x."""
        return np.abs(np.asarray(x, dtype=float) - self.partner(x))

    def x_plus_for_gap(self, D: float) -> float:
        """Invert the gap on the right branch."""
        p = self.param
        if D <= 0:
            return self.zero
        if self.kind == "mirror":
            return 0.5 * D
        if self.kind == "gamma":
            return p * D / (1 + p)
        if self.kind == "product":
            # x - x0^2/x = D
            return 0.5 * (D + math.sqrt(D * D + 4 * p * p))
        if D >= math.pi / 2:
            raise InverseError("tan-product gap cannot reach pi/2")
        fun = lambda x: x - float(self.partner(x)) - D
        return optimize.brentq(fun, p, math.pi / 2 - 1e-15, xtol=1e-15, rtol=1e-15)


def parse_ansatz(text: str) -> ShapeAnsatz:
    """``mirror``, ``gamma:G``, ``product:X0`` or ``tanprod:X0``."""
    kind, _, arg = text.partition(":")
    try:
        value = None
        if arg:
            value = float(eval_number(arg))
        return ShapeAnsatz(kind, value)
    except ValueError as exc:
        raise ParameterError(f"bad ansatz '{text}': {exc}") from None


def eval_number(text: str) -> float:
    """Parse ``3``, ``1/2``, ``sqrt(3)`` or ``-sqrt(2)``."""
    t = text.strip().replace(" ", "")
    sign = 1.0
    if t.startswith("-"):
        sign, t = -1.0, t[1:]
    if t.startswith("sqrt(") and t.endswith(")"):
        return sign * math.sqrt(eval_number(t[5:-1]))
    if "/" in t:
        num, den = t.split("/", 1)
        return sign * float(num) / float(den)
    return sign * float(t)


# --------------------------------------------------------------------------
# the Abel-type formula


def abel_rhs(spec: SpectrumSpec, Wsq: float, hbar: float = 1.0) -> float:
    """2 hbar * integral_0^{W^2} (dE/dn)^-1 / sqrt(W^2 - E) dE."""
    s = float(Wsq)
    if s < 0:
        raise ParameterError("W^2 must be non-negative")
    if s == 0:
        return 0.0
    if spec.kind == "linear":
        return 4 * hbar * math.sqrt(s) / spec.params[0]
    if spec.kind == "quadratic":
        c1, c2 = spec.params
        r = 2 * math.sqrt(abs(c2) * s) / c1
        if c2 > 0:
            return 2 * hbar / math.sqrt(c2) * math.atan(r)
        if r >= 1:
            raise InverseError("W^2 beyond the top of the spectrum")
        return 2 * hbar / math.sqrt(-c2) * math.atanh(r)
    if s > spec.E_max:
        raise InverseError("W^2 beyond the tabulated spectrum")

    # E = s sin^2(phi) removes the endpoint singularity
    def integrand(phi):
        E = s * math.sin(phi) ** 2
        slope = spec.dE_dn(spec.n_of_E(E))
        if not slope > 0:
            raise InverseError("dE/dn must stay positive")
        return 2 * math.sqrt(s) * math.sin(phi) / slope

    val, _ = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=1e-13, epsrel=1e-12, limit=200)
    return 2 * hbar * val


def _abel_inverse(spec: SpectrumSpec, D: float, hbar: float) -> float:
    """W^2 whose gap equals D."""
    if D <= 0:
        return 0.0
    if spec.kind == "linear":
        return (spec.params[0] * D / (4 * hbar)) ** 2
    if spec.kind == "quadratic":
        c1, c2 = spec.params
        t = D * math.sqrt(abs(c2)) / (2 * hbar)
        if c2 > 0:
            if t >= math.pi / 2:
                raise InverseError("gap exceeds the range of the spectrum")
            r = math.tan(t)
        else:
            r = math.tanh(t)
        return (c1 * r) ** 2 / (4 * abs(c2))
    hi = spec.E_max
    if abel_rhs(spec, hi, hbar) < D:
        raise InverseError("gap exceeds the range of the tabulated spectrum")
    return optimize.brentq(lambda s: abel_rhs(spec, s, hbar) - D, 0.0, hi, xtol=1e-14, rtol=1e-13)


def _abel_inverse_array(spec: SpectrumSpec, D: np.ndarray, hbar: float) -> np.ndarray:
    # closed-form kinds only; out-of-range gaps give inf
    D = np.asarray(D, dtype=float)
    if spec.kind == "linear":
        return (spec.params[0] * D / (4 * hbar)) ** 2
    c1, c2 = spec.params
    t = D * math.sqrt(abs(c2)) / (2 * hbar)
    with np.errstate(all="ignore"):
        if c2 > 0:
            r = np.where(t < math.pi / 2, np.tan(np.minimum(t, math.pi / 2)), np.inf)
        else:
            r = np.tanh(t)
        return (c1 * r) ** 2 / (4 * abs(c2))


# --------------------------------------------------------------------------
# reconstruction


@dataclass
class Reconstruction:
    """Sampled branches of |W| plus an evaluable superpotential."""

    spectrum: SpectrumSpec
    ansatz: ShapeAnsatz
    hbar: float
    Wsq: np.ndarray
    x_minus: np.ndarray
    x_plus: np.ndarray
    fit: dict = field(default_factory=dict)

    @property
    def absW(self) -> np.ndarray:
        return np.sqrt(self.Wsq)

    def rows(self) -> list[dict]:
        out = [{"x": float(x), "absW": float(w), "branch": "minus"} for x, w in zip(self.x_minus, self.absW)]
        out += [{"x": float(x), "absW": float(w), "branch": "plus"} for x, w in zip(self.x_plus, self.absW)]
        return sorted(out, key=lambda r: r["x"])

    def W(self, x):
        """Signed superpotential at arbitrary points of the ansatz domain."""
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        out = np.empty_like(flat)
        z = self.ansatz.zero
        with np.errstate(all="ignore"):
            gaps = self.ansatz.gap(flat)
        if self.spectrum.kind in ("linear", "quadratic"):
            out = np.sign(flat - z) * np.sqrt(_abel_inverse_array(self.spectrum, gaps, self.hbar))
            return out.reshape(x.shape) if x.ndim else float(out[0])
        for i, (xi, D) in enumerate(zip(flat, gaps)):
            if not np.isfinite(D):
                out[i] = math.copysign(math.inf, xi - z)
                continue
            out[i] = math.copysign(math.sqrt(_abel_inverse(self.spectrum, float(D), self.hbar)), xi - z)
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def Wprime(self, x, h: float = 1e-5):
        x = np.asarray(x, dtype=float)
        return (self.W(x + h) - self.W(x - h)) / (2 * h)

    def superpotential(self) -> SuperpotentialSpec:
        """Wrap the reconstruction for the direct SWKB machinery."""
        sp = self.spectrum
        scale = max(abs(self.ansatz.zero), 1.0) if self.ansatz.kind != "tanprod" else 0.1
        return SuperpotentialSpec(
            family="reconstructed",
            params={"spectrum": sp.kind, "ansatz": self.ansatz.kind, "param": self.ansatz.param},
            domain=self.ansatz.domain,
            W=self.W,
            Wprime=self.Wprime,
            spectrum=lambda n: sp.E_of_n(float(n)),
            hbar=self.hbar,
            length_scale=scale,
        )


def _fit_closed_form(rec: Reconstruction) -> dict:
    """Least-squares fit of the closed form each ansatz is known to produce."""
    kind = rec.ansatz.kind
    xs = np.concatenate([rec.x_minus, rec.x_plus])
    ws = np.concatenate([-rec.absW, rec.absW])
    keep = np.isfinite(xs) & (rec.Wsq.size > 0)
    xs, ws = xs[keep], ws[keep]
    if xs.size < 2:
        return {}
    if kind in ("mirror", "gamma"):
        left, right = xs < 0, xs > 0
        fit = {"form": "piecewise linear"}
        for name, mask in (("slope_left", left), ("slope_right", right)):
            if mask.any():
                fit[name] = float(np.dot(xs[mask], ws[mask]) / np.dot(xs[mask], xs[mask]))
        pred = np.where(xs < 0, fit.get("slope_left", 0.0) * xs, fit.get("slope_right", 0.0) * xs)
    else:
        if kind == "product":
            basis = np.column_stack([xs, -1.0 / xs])
            fit = {"form": "A x - B / x"}
        else:
            basis = np.column_stack([np.tan(xs), -1.0 / np.tan(xs)])
            fit = {"form": "A tan x - B cot x"}
        coef, *_ = np.linalg.lstsq(basis, ws, rcond=None)
        fit["A"], fit["B"] = float(coef[0]), float(coef[1])
        pred = basis @ coef
    fit["max_residual"] = float(np.max(np.abs(pred - ws)))
    return fit


def reconstruct(
    spec: SpectrumSpec,
    ansatz: ShapeAnsatz,
    Wsq_grid: Sequence[float],
    hbar: float = 1.0,
    fit: bool = True,
) -> Reconstruction:
    """Solve x_plus - f(x_plus) = abel_rhs(W^2) on a grid of W^2 values."""
    grid = np.asarray(Wsq_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterError("W^2 grid must be a non-empty 1-d sequence")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ParameterError("W^2 grid must be positive and increasing")
    xp = np.empty_like(grid)
    for i, s in enumerate(grid):
        xp[i] = ansatz.x_plus_for_gap(abel_rhs(spec, s, hbar))
    xm = np.asarray(ansatz.partner(xp), dtype=float)
    rec = Reconstruction(spec, ansatz, float(hbar), grid, xm, xp)
    if fit:
        rec.fit = _fit_closed_form(rec)
    return rec


class SuperpotentialReconstructor:
    """Estimator-style front end: ``fit`` a spectrum, ``predict`` W(x)."""

    def __init__(self, ansatz: ShapeAnsatz | str = "mirror", hbar: float = 1.0, n_grid: int = 200, Wsq_max: float = 25.0):
        self.ansatz = ansatz
        self.hbar = hbar
        self.n_grid = n_grid
        self.Wsq_max = Wsq_max

    def get_params(self) -> dict:
        return {"ansatz": self.ansatz, "hbar": self.hbar, "n_grid": self.n_grid, "Wsq_max": self.Wsq_max}

    def set_params(self, **params) -> "SuperpotentialReconstructor":
        for k, v in params.items():
            if k not in self.get_params():
                raise ParameterError(f"unknown parameter '{k}'")
            setattr(self, k, v)
        return self

    def fit(self, spectrum: SpectrumSpec | str) -> "SuperpotentialReconstructor":
        sp = parse_spectrum(spectrum) if isinstance(spectrum, str) else spectrum
        an = parse_ansatz(self.ansatz) if isinstance(self.ansatz, str) else self.ansatz
        top = min(self.Wsq_max, 0.999 * sp.E_max) if math.isfinite(sp.E_max) else self.Wsq_max
        grid = np.linspace(top / self.n_grid, top, self.n_grid)
        self.reconstruction_ = reconstruct(sp, an, grid, self.hbar)
        self.fit_ = self.reconstruction_.fit
        return self

    def predict(self, x):
        if not hasattr(self, "reconstruction_"):
            raise RuntimeError("call fit() first")
        return self.reconstruction_.W(x)


# --------------------------------------------------------------------------
# classical analogue


def classical_period_inverse(T: float, U_grid: Sequence[float], gamma: float = 1.0) -> dict:
    """Potential with constant period T (particle of mass 1/2).

    Uses x_plus - x_minus = (1/pi) integral_0^U T dE / sqrt(U - E) = 2 T sqrt(U) / pi
    with x_plus = -gamma x_minus.  Returns the sampled branches and the
    curvatures of U = k x^2 on each side.
    """
    T = float(T)
    if T <= 0:
        raise ParameterError("period must be positive")
    if not 0 < gamma <= 1:
        raise ParameterError("gamma must lie in (0, 1]")
    U = np.asarray(U_grid, dtype=float)
    if np.any(U < 0):
        raise ParameterError("U grid must be non-negative")
    gap = 2 * T * np.sqrt(U) / math.pi
    x_plus = gamma * gap / (1 + gamma)
    x_minus = -gap / (1 + gamma)
    base = math.pi**2 * (1 + gamma) ** 2 / (4 * T * T)
    return {
        "U": U,
        "x_minus": x_minus,
        "x_plus": x_plus,
        "k_left": base,
        "k_right": base / gamma**2,
    }
