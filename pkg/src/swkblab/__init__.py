"""SWKB quantization, inverse reconstruction and piecewise-analytic eigenproblems."""

from . import catalog, cli, inverse, isospectral, orthopoly, piecewise, specfun, swkb, wigner

__version__ = "0.1.0"

__all__ = ["catalog", "cli", "inverse", "isospectral", "orthopoly", "piecewise", "specfun", "swkb", "wigner"]
