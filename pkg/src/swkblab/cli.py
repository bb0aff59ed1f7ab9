"""Command-line front end.

Exit status: 0 on success, 2 on invalid input, 3 when a numerical
procedure fails to converge.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from fractions import Fraction

import click
import numpy as np

from . import catalog, inverse, isospectral, piecewise, swkb, wigner
from .specfun import SpecialFunctionError

EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

_NUMERIC_ERRORS = (
    swkb.SwkbError,
    piecewise.SolverError,
    inverse.InverseError,
    isospectral.IsospectralError,
    SpecialFunctionError,
)


def six_sig(v) -> str:
    """Six significant digits, keeping trailing zeros (1 -> 1.00000)."""
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return str(v)
    return f"{float(v):#.6g}"


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def _write(rows: list[dict], fmt: str, notes: list[str] = ()) -> str:
    out = io.StringIO()
    if fmt == "json":
        for r in rows:
            out.write(json.dumps(r, sort_keys=False) + "\n")
        for n in notes:
            out.write(json.dumps({"note": n}) + "\n")
        return out.getvalue()
    if rows:
        w = csv.writer(out, lineterminator="\n")
        cols = list(rows[0].keys())
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in cols])
    for n in notes:
        out.write(f"# {n}\n")
    return out.getvalue()


def _emit(ctx: click.Context, rows: list[dict], notes: list[str] = ()) -> None:
    obj = ctx.find_root().obj
    click.echo(_write(rows, obj["format"], notes), nl=False)
    if obj["manifest"]:
        manifest = {
            "command": ctx.info_name,
            "parameters": {k: v for k, v in ctx.params.items()},
            "tolerances": {"tol": obj["tol"]},
            "units": {"hbar": obj["hbar"], "omega": obj["omega"]},
            "format": obj["format"],
            "deterministic": True,
            "argv": obj["argv"],
        }
        with open(obj["manifest"], "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")


def _parse_value(text: str):
    text = text.strip()
    if "," in text:
        return [_parse_value(t) for t in text.split(",") if t.strip()]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return inverse.eval_number(text)
    except (ValueError, catalog.ParameterError):
        return text


def _parse_params(text: str | None) -> dict:
    """'g=5;D1=1,2;D2=3' -> {'g': 5, 'D1': [1, 2], 'D2': 3}."""
    out = {}
    if not text:
        return out
    for part in text.replace(" ", ";").split(";"):
        if not part:
            continue
        if "=" not in part:
            raise catalog.ParameterError(f"parameter '{part}' is not KEY=VALUE")
        k, v = part.split("=", 1)
        out[k.strip()] = _parse_value(v)
    return out


def _pair(text: str) -> tuple[float, float]:
    try:
        lo, hi = (inverse.eval_number(t) for t in text.split(","))
    except ValueError:
        raise catalog.ParameterError(f"expected 'lo,hi', got {text!r}") from None
    if not hi > lo:
        raise catalog.ParameterError("range must be increasing")
    return lo, hi


def _unit_guard(ctx: click.Context) -> None:
    obj = ctx.find_root().obj
    if obj["hbar"] != 1.0 or obj["omega"] != 1.0:
        raise catalog.ParameterError("piecewise systems are fixed to hbar = omega = 1")


# --------------------------------------------------------------------------


@click.group()
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--tol", type=float, default=1e-12, show_default=True, help="Root-finding tolerance.")
@click.option("--hbar", type=float, default=1.0, show_default=True)
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--manifest", type=click.Path(dir_okay=False), default=None, help="Write a JSON run manifest here.")
@click.pass_context
def main(ctx, fmt, tol, hbar, omega, manifest):
    """SWKB analysis, inverse reconstruction and piecewise eigenproblems."""
    if not (hbar > 0 and omega > 0 and tol > 0):
        raise click.BadParameter("hbar, omega and tol must be positive")
    argv = list((ctx.obj or {}).get("argv", sys.argv[1:]))
    ctx.obj = {"format": fmt, "tol": tol, "hbar": hbar, "omega": omega, "manifest": manifest, "argv": _strip_manifest(argv)}


def _strip_manifest(argv: list[str]) -> list[str]:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--manifest":
            skip = True
            continue
        if a.startswith("--manifest="):
            continue
        out.append(a)
    return out


# catalog ------------------------------------------------------------------


@main.group("catalog")
def catalog_cmd():
    """Registered superpotential families."""


@catalog_cmd.command("list")
@click.pass_context
def catalog_list(ctx):
    rows = [
        {"family": f["family"], "name": f["name"], "params": json.dumps(f["params"]), "constraints": f["constraints"]}
        for f in catalog.list_families()
    ]
    _emit(ctx, rows)


@catalog_cmd.command("show")
@click.argument("family")
@click.option("--params", default=None, help="KEY=VALUE pairs separated by ';'.")
@click.option("--levels", type=int, default=5, show_default=True)
@click.pass_context
def catalog_show(ctx, family, params, levels):
    obj = ctx.find_root().obj
    spec = catalog.make(family, hbar=obj["hbar"], omega=obj["omega"], **_parse_params(params))
    top = levels if spec.n_max is None else min(levels, spec.n_max + 1)
    rows = [{"n": n, "E": spec.energy(n), "E_6sig": six_sig(spec.energy(n))} for n in range(top)]
    desc = spec.descriptor()
    notes = [f"{k}: {json.dumps(desc[k], default=str)}" for k in sorted(desc)]
    notes.append(f"domain: {spec.domain}")
    notes.append(f"n_max: {spec.n_max}")
    _emit(ctx, rows, notes)


# swkb ---------------------------------------------------------------------


@main.command("swkb")
@click.option("--family", required=True)
@click.option("--params", default=None, help="KEY=VALUE pairs separated by ';', lists with ','.")
@click.option("--g", type=str, default=None)
@click.option("--h", type=str, default=None)
@click.option("--n-min", type=int, default=1, show_default=True)
@click.option("--n-max", type=int, required=True)
@click.option("--eta", is_flag=True, help="Use the position-dependent-mass integral.")
@click.option("--window", default=None, help="Restrict the x range, 'lo,hi'.")
@click.pass_context
def swkb_cmd(ctx, family, params, g, h, n_min, n_max, eta, window):
    """SWKB integrals and errors per level."""
    obj = ctx.find_root().obj
    p = _parse_params(params)
    for k, v in (("g", g), ("h", h)):
        if v is not None:
            p[k] = inverse.eval_number(v)
    spec = catalog.make(family, hbar=obj["hbar"], omega=obj["omega"], **p)
    if n_min < 0 or n_max < n_min:
        raise catalog.ParameterError("invalid level range")
    win = _pair(window) if window else None
    if spec.n_max is not None:
        n_max = min(n_max, spec.n_max)
    rows = []
    for n in range(n_min, n_max + 1):
        if eta:
            rep = swkb.swkb_extended_integral(spec, n)
        else:
            rep = swkb.swkb_integral(spec, n, win)
        row = rep.as_row()
        row["I_over_pi_hbar_6sig"] = six_sig(row["I_over_pi_hbar"])
        rows.append(row)
    _emit(ctx, rows)


# invert -------------------------------------------------------------------


@main.command("invert")
@click.option("--spectrum", "spectrum", required=True, help="linear:c | quad:c1,c2 | file:PATH")
@click.option("--ansatz", required=True, help="mirror | gamma:G | product:X0 | tanprod:X0")
@click.option("--wsq-max", type=float, default=10.0, show_default=True)
@click.option("--points", type=int, default=41, show_default=True)
@click.option("--fit/--no-fit", default=True, show_default=True, help="Report a closed-form fit.")
@click.pass_context
def invert_cmd(ctx, spectrum, ansatz, wsq_max, points, fit):
    """Reconstruct |W| from a spectrum and a shape ansatz."""
    obj = ctx.find_root().obj
    if points < 2 or not wsq_max > 0:
        raise catalog.ParameterError("need points >= 2 and wsq-max > 0")
    spec = inverse.parse_spectrum(spectrum)
    ans = inverse.parse_ansatz(ansatz)
    grid = [wsq_max * (i + 1) / points for i in range(points)]
    rec = inverse.reconstruct(spec, ans, grid, hbar=obj["hbar"], fit=fit)
    notes = []
    if rec.fit:
        notes = [f"fit {k}: {rec.fit[k]!r}" for k in sorted(rec.fit)]
    _emit(ctx, rec.rows(), notes)


# piecewise ----------------------------------------------------------------


@main.command("spectrum")
@click.option("--pot", required=True, help="gamma:p/q | step:a | stepramp:a,g")
@click.option("--count", type=int, default=None)
@click.option("--range", "erange", default=None, help="Energy window 'lo,hi'.")
@click.pass_context
def spectrum_cmd(ctx, pot, count, erange):
    """Eigenvalues of a piecewise quadratic potential."""
    _unit_guard(ctx)
    obj = ctx.find_root().obj
    P = piecewise.parse_potential(pot)
    lo = hi = None
    if erange:
        lo, hi = _pair(erange)
    if count is None and hi is None:
        raise catalog.ParameterError("give --count or --range")
    if count is not None and count < 1:
        raise catalog.ParameterError("count must be positive")
    sols = piecewise.eigenvalues(P, lo, hi, count if hi is None else None, tol=obj["tol"])
    if count is not None:
        sols = sols[:count]
    rows = [
        {
            "n": s.n,
            "E": s.E,
            "E_6sig": six_sig(s.E),
            "exact": int(s.is_hermite),
            "nodes": s.nodes,
            "matching_residual": s.matching_residual,
        }
        for s in sols
    ]
    _emit(ctx, rows)


@main.command("hermite-states")
@click.option("--pot", required=True)
@click.option("--e-max", type=float, default=40.0, show_default=True)
@click.pass_context
def hermite_cmd(ctx, pot, e_max):
    """Levels where both sides terminate as Hermite functions."""
    _unit_guard(ctx)
    P = piecewise.parse_potential(pot)
    rows = [
        {
            "n": h.n,
            "E": h.E,
            "left_order": h.left_order,
            "right_order": h.right_order,
            "ratio": h.ratio,
            "ratio_exact": h.ratio_exact or "",
            "boundary": h.boundary,
        }
        for h in piecewise.hermite_states(P, e_max)
    ]
    notes = []
    if P.family == "gamma_mod":
        N = piecewise.equidistance_period(Fraction(P.param_dict["gamma"]))
        notes.append(f"equidistant every {N} states")
    _emit(ctx, rows, notes)


@main.command("darboux")
@click.option("--pot", required=True, help="step:a (a = 4 ell for isoseq)")
@click.option("--mode", required=True, help="crum:M | ka:D1,D2,... | isoseq")
@click.option("--what", type=click.Choice(["potential", "states", "spectrum"]), default="potential", show_default=True)
@click.option("--grid", default="-6,6,241", show_default=True, help="'lo,hi,n' for potential/state dumps.")
@click.option("--levels", type=int, default=5, show_default=True, help="Retained levels to dump or re-solve.")
@click.pass_context
def darboux_cmd(ctx, pot, mode, what, grid, levels):
    """Darboux-Crum / Krein-Adler deformations of a step potential."""
    _unit_guard(ctx)
    P = piecewise.parse_potential(pot)
    kind, _, arg = mode.partition(":")
    if kind == "isoseq":
        if P.family != "step":
            raise catalog.ParameterError("isoseq needs a step potential")
        a = P.param_dict["a"]
        ell = a / 4
        if ell < 1 or ell != int(ell):
            raise catalog.ParameterError("isoseq needs step:a with a = 4 ell, ell >= 1")
        kind, deleted = "crum", list(range(int(ell)))
    elif kind == "crum":
        M = int(_parse_value(arg)) if arg else -1
        if M < 0:
            raise catalog.ParameterError("crum:M needs M >= 0")
        deleted = list(range(M))
    elif kind == "ka":
        v = _parse_value(arg) if arg else []
        deleted = v if isinstance(v, list) else [v]
    else:
        raise catalog.ParameterError(f"unknown mode {mode!r}")
    base = isospectral.StateSet.solve(P, (max(deleted) + 1 if deleted else 0) + levels)
    if kind == "crum":
        sys_ = isospectral.darboux_crum(base, len(deleted))
    else:
        sys_ = isospectral.krein_adler(base, deleted)
    lv = sys_.levels[:levels]
    if what == "spectrum":
        solved = isospectral.resolve_spectrum(sys_, len(lv))
        rows = [
            {"level": i, "E": sys_.base[i].E, "E_6sig": six_sig(sys_.base[i].E), "E_resolved": e}
            for i, e in zip(lv, solved)
        ]
        _emit(ctx, rows)
        return
    parts = grid.split(",")
    if len(parts) != 3:
        raise catalog.ParameterError("grid must be 'lo,hi,n'")
    lo, hi, n = inverse.eval_number(parts[0]), inverse.eval_number(parts[1]), int(parts[2])
    if n < 2 or not hi > lo:
        raise catalog.ParameterError("invalid grid")
    xs = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    x = np.array(xs)
    rows = []
    if what == "potential":
        V = sys_.potential(x)
        rows = [{"x": float(a), "V": float(b)} for a, b in zip(x, V)]
    else:
        cols = {f"psi_{i}": sys_.psi_dpsi(i, x)[0] for i in lv}
        for j, a in enumerate(x):
            r = {"x": float(a)}
            r.update({k: float(v[j]) for k, v in cols.items()})
            rows.append(r)
    _emit(ctx, rows)


@main.command("wigner")
@click.option("--pot", required=True)
@click.option("--level", type=int, default=0, show_default=True)
@click.option("--grid", default="4,41", show_default=True, help="'L,n' or 'xmin,xmax,nx,pmax,np'.")
@click.option("--diagnostics", is_flag=True, help="Print diagnostics instead of the matrix.")
@click.pass_context
def wigner_cmd(ctx, pot, level, grid, diagnostics):
    """Wigner function of one eigenstate on a phase-space grid."""
    _unit_guard(ctx)
    if level < 0:
        raise catalog.ParameterError("level must be non-negative")
    P = piecewise.parse_potential(pot)
    state = piecewise.eigenvalues(P, count=level + 1)[level]
    res = wigner.wigner_grid(state, wigner.PhaseGrid.parse(grid))
    if diagnostics:
        _emit(ctx, [res.diagnostics()])
    else:
        _emit(ctx, list(res.rows()))


@main.command("replay")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def replay_cmd(ctx, path):
    """Re-run a saved manifest."""
    with open(path) as fh:
        argv = json.load(fh)["argv"]
    ctx.exit(run(argv))


# --------------------------------------------------------------------------


def run(argv: list[str] | None = None) -> int:
    """Entry point returning the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        main.main(args=argv, standalone_mode=False, obj={"argv": argv})
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return EXIT_VALIDATION
    except click.Abort:
        return 1
    except (catalog.ParameterError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_VALIDATION
    except _NUMERIC_ERRORS as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERIC


def entry() -> None:
    sys.exit(run())
