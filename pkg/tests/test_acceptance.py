"""Acceptance criteria, one test (or a pair of tests) per criterion.

Each test stores a PASS/FAIL line that conftest prints at the end of the
session.  Two sub-criteria are not reproducible and are marked as strict
expected failures; the analysis lives in the decision log.
"""

import math
import time

import numpy as np
import pytest

from swkblab import catalog, inverse, isospectral, piecewise, swkb, wigner


def six(v: float) -> str:
    return f"{v:#.6g}"


def _inner(a, b, lo=-14.0, hi=14.0):
    x, w = np.polynomial.legendre.leggauss(64)
    total = 0.0
    for a0, b0 in ((lo, 0.0), (0.0, hi)):
        edges = np.linspace(a0, b0, 57)
        for l, r in zip(edges[:-1], edges[1:]):
            xs = 0.5 * (r - l) * x + 0.5 * (r + l)
            total += 0.5 * (r - l) * np.sum(w * a(xs) * b(xs))
    return total


def _hygiene(sols, n_orth=6):
    """Node/index agreement, matching residual and orthogonality."""
    worst_res = max(s.matching_residual for s in sols)
    nodes_ok = all(s.nodes == k for k, s in enumerate(sols))
    first = sols[:n_orth]
    worst_orth = 0.0
    for i in range(len(first)):
        for j in range(i + 1, len(first)):
            worst_orth = max(worst_orth, abs(_inner(first[i], first[j])))
    return nodes_ok, worst_res, worst_orth


# ---------------------------------------------------------------- 1


def test_criterion_01_conventional_exactness(record):
    t0 = time.perf_counter()
    worst_num, worst_closed = 0.0, 0.0
    for fam in catalog.CONVENTIONAL_FAMILIES:
        spec = catalog.make(fam, **catalog.FAMILY_INFO[fam]["params"])
        top = 15 if spec.n_max is None else min(15, spec.n_max)
        for n in range(top + 1):
            worst_num = max(worst_num, abs(swkb.swkb_integral(spec, n).I_over_pi_hbar - n))
            if spec.closed_form_integral is not None:
                worst_closed = max(worst_closed, abs(swkb.closed_form_report(spec, n).I_over_pi_hbar - n))
    dt = time.perf_counter() - t0
    ok = worst_num <= 1e-6 and worst_closed <= 1e-12 and dt < 30
    record("1", ok, f"max|I/pi-n| quad {worst_num:.1e}, closed {worst_closed:.1e}, {dt:.1f}s")
    assert ok


# ---------------------------------------------------------------- 2

TABLE_X1L = {
    3: {1: "0.997674", 2: "1.99781", 10: "9.99930"},
    10: {1: "0.999989", 2: "1.99998"},
    100: {1: "1.00000"},
}


def test_criterion_02_x1_laguerre_table(record):
    t0 = time.perf_counter()
    bad = []
    for g, rows in TABLE_X1L.items():
        spec = catalog.make("xlag2", g=g)
        for n, want in rows.items():
            got = six(swkb.swkb_integral(spec, n).I_over_pi_hbar)
            if got != want:
                bad.append(f"g={g} n={n}: {got} vs {want}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    record("2", ok, f"6 entries, mismatches {bad or 'none'}, {dt:.1f}s")
    assert ok


# ---------------------------------------------------------------- 3


def test_criterion_03a_multi_indexed_laguerre(record):
    spec = catalog.make("mi", base="L", D1=[1], D2=[2], g=5)
    errs = [swkb.swkb_integral(spec, n).err for n in range(1, 21)]
    ok = all(e < 0 for e in errs) and max(abs(e) for e in errs) <= 1e-3
    record("3a", ok, f"Laguerre g=5: all Err<0 {all(e < 0 for e in errs)}, max|Err| {max(map(abs, errs)):.2e}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the Jacobi deformation gives Err < 0, not > 0; see decision log")
def test_criterion_03b_multi_indexed_jacobi(record):
    spec = catalog.make("mi", base="J", D1=[1], D2=[2], g=5, h=6)
    errs = [swkb.swkb_integral(spec, n).err for n in range(1, 21)]
    ok = all(e > 0 for e in errs) and max(abs(e) for e in errs) <= 1e-3
    signs = "all negative" if all(e < 0 for e in errs) else "mixed"
    record("3b", ok, f"Jacobi (5,6): Err {signs}, Err(1) {errs[0]:.2e}, max|Err| {max(map(abs, errs)):.2e}")
    assert ok


# ---------------------------------------------------------------- 4


def test_criterion_04_krein_adler_turning_topology(record):
    spec = catalog.make("ka", base="H", d=4)
    half = swkb.turning_intervals(spec, 2.0, (0.0, math.inf))
    full = swkb.turning_intervals(spec, 2.0)
    ok = len(half) == 2
    record("4", ok, f"x>=0: {len(half)} intervals (full symmetric line: {len(full)})")
    assert ok


# ---------------------------------------------------------------- 5


def test_criterion_05_ces_reductions(record):
    ho = catalog.make("ces", b=0, beta=0)
    c4 = catalog.make("ces", b=4, beta=0)
    ka = catalog.make("ka", base="H", d=1)
    d0 = max(abs(swkb.swkb_integral(ho, n).I - n * math.pi) for n in range(6))
    d4 = max(abs(swkb.swkb_integral(c4, n).I - swkb.swkb_integral(ka, n).I) for n in range(6))
    ok = d0 <= 1e-6 and d4 <= 1e-6
    record("5", ok, f"(0,0) max|I-n pi| {d0:.1e}; (4,0) vs KA d=1 {d4:.1e}")
    assert ok


# ---------------------------------------------------------------- 6


def test_criterion_06_pdem_extended(record):
    worst = 0.0
    for spec in (catalog.make("deformed_ho", alpha=0.5), catalog.make("semiconfined", a=2)):
        for n in range(11):
            rep = swkb.swkb_extended_integral(spec, n)
            worst = max(worst, abs(rep.I - n * math.pi * spec.hbar))
    ok = worst <= 1e-6
    record("6", ok, f"max|I_eta - n pi hbar| {worst:.1e}")
    assert ok


# ---------------------------------------------------------------- 7


def test_criterion_07_inverse(record):
    grid = np.linspace(0.05, 30.0, 120)
    notes, ok = [], True

    rec = inverse.reconstruct(inverse.SpectrumSpec.linear(2), inverse.ShapeAnsatz("mirror"), grid)
    xs = np.linspace(0.1, 3, 200)
    e1 = float(np.max(np.abs(rec.W(xs) - xs)))
    ok &= e1 <= 1e-6
    notes.append(f"(i) {e1:.1e}")
    recs = [rec]

    rec = inverse.reconstruct(inverse.SpectrumSpec.linear(4), inverse.ShapeAnsatz("product", math.sqrt(3)), grid)
    xs = np.linspace(0.3, 6, 200)
    e2 = float(np.max(np.abs(rec.W(xs) - (xs - 3 / xs))))
    ok &= e2 <= 1e-5
    notes.append(f"(ii) {e2:.1e}")
    recs.append(rec)

    g, h = 2.0, 3.0
    x0 = math.atan(math.sqrt(g / h))
    rec = inverse.reconstruct(
        inverse.SpectrumSpec.quadratic(4 * (g + h), 4), inverse.ShapeAnsatz("tanprod", x0), grid
    )
    pt = catalog.make("J", g=g, h=h)
    xs = np.linspace(0.1, 1.4, 200)
    e3 = float(np.max(np.abs(rec.W(xs) - pt.W(xs))))
    ok &= e3 <= 1e-5
    notes.append(f"(iii) {e3:.1e}")
    recs.append(rec)

    rec = inverse.reconstruct(inverse.SpectrumSpec.linear(2), inverse.ShapeAnsatz("gamma", 0.5), grid)
    e4 = max(abs(rec.fit["slope_left"] - 0.75), abs(rec.fit["slope_right"] - 1.5))
    ok &= e4 <= 1e-6
    notes.append(f"(iv) {e4:.1e}")
    recs.append(rec)

    trip = 0.0
    for r in recs:
        sp = r.superpotential()
        for n in range(1, 9):
            trip = max(trip, abs(swkb.quantize_energy(sp, n) - r.spectrum.E_of_n(n)))
    ok &= trip <= 1e-6
    notes.append(f"round trip {trip:.1e}")
    record("7", ok, ", ".join(notes))
    assert ok


# ---------------------------------------------------------------- 8


@pytest.mark.parametrize(
    "gamma, table, exact",
    [
        ("1/2", ["0", "1.96156", "4.02277", "6", "7.98757", "10.0101", "12"], {0, 3, 6}),
        ("1/3", ["0", "1.92412", "4", "6.03248", "8", "9.97945", "12"], {0, 2, 4, 6}),
    ],
)
def test_criterion_08_gamma_modulated(record, gamma, table, exact):
    sols = piecewise.eigenvalues(piecewise.PiecewiseQuadratic.gamma_mod(gamma), count=len(table))
    ok = True
    for k, (s, want) in enumerate(zip(sols, table)):
        if k in exact:
            ok &= abs(s.E - float(want)) <= 1e-9 and s.is_hermite
        else:
            ok &= six(s.E) == want
    record(f"8{'a' if gamma == '1/2' else 'b'}", ok, f"gamma={gamma}: " + " ".join(six(s.E) for s in sols))
    assert ok


# ---------------------------------------------------------------- 9

TABLE_STEP2 = ["-1.30908", "1.09714", "2.93715", "5.04459", "6.96479", "9.02870", "10.9756"]
TABLE_L6 = ["-22.4357", "-18.6885", "-14.8995", "-11.1005", "-7.31152", "-3.56427"]


def test_criterion_09_step(record):
    s2 = piecewise.eigenvalues(piecewise.PiecewiseQuadratic.step(2), count=7)
    ok2 = [six(s.E) for s in s2] == TABLE_STEP2
    s4 = piecewise.eigenvalues(piecewise.PiecewiseQuadratic.step(4), count=6)
    ok4 = abs(s4[0].E + 3) <= 1e-10 and all(abs(s4[n].E - 2 * (n - 1)) <= 1e-10 for n in range(1, 6))
    s24 = piecewise.eigenvalues(piecewise.PiecewiseQuadratic.step(24), count=6)
    alg = piecewise.algebraic_eigenvalues(6)
    ok6 = [six(s.E) for s in s24] == TABLE_L6 and [six(e) for e in alg] == TABLE_L6
    pair = max(abs(alg[i] + alg[5 - i] + 26) for i in range(6))
    ok = ok2 and ok4 and ok6 and pair <= 1e-9
    record("9", ok, f"a=2 table {ok2}; a=4 exact {ok4}; l=6 table {ok6}, pair-sum dev {pair:.1e}")
    assert ok


# ---------------------------------------------------------------- 10

TABLE_RAMP = ["-1.97196", "0.343665", "2.12101", "4.02740", "5.91817", "7.81348"]


def test_criterion_10a_step_ramp(record):
    sols = piecewise.eigenvalues(piecewise.PiecewiseQuadratic.step_ramp(2, 1), count=6)
    ok_tab = [six(s.E) for s in sols] == TABLE_RAMP
    qes = piecewise.eigenvalues(piecewise.PiecewiseQuadratic.step_ramp(1.5, -math.sqrt(2)), count=4)
    hit = [s for s in qes if abs(s.E - 2) <= 1e-9 and s.is_hermite]
    ok = ok_tab and len(hit) == 1
    record("10a", ok, f"(2,1) table {ok_tab}; g=-sqrt2 Hermite state at E=2: {bool(hit)}")
    assert ok


@pytest.mark.xfail(strict=True, reason="g=+sqrt2 has its Hermite state at E=2 (n=2), not E=4; see decision log")
def test_criterion_10b_step_ramp_qes_e4(record):
    qes = piecewise.eigenvalues(piecewise.PiecewiseQuadratic.step_ramp(1.5, math.sqrt(2)), count=5)
    at4 = [s for s in qes if abs(s.E - 4) <= 1e-9 and s.is_hermite]
    herm = [f"E={s.E:.6g} (n={s.n})" for s in qes if s.is_hermite]
    record("10b", bool(at4), f"g=+sqrt2 Hermite states: {', '.join(herm) or 'none'}; none at E=4")
    assert at4


# ---------------------------------------------------------------- 11


def test_criterion_11_solver_hygiene(record):
    PQ = piecewise.PiecewiseQuadratic
    cases = [
        (PQ.gamma_mod("1/2"), 7),
        (PQ.gamma_mod("1/3"), 7),
        (PQ.step(2), 7),
        (PQ.step(4), 6),
        (PQ.step(24), 8),
        (PQ.step_ramp(2, 1), 6),
        (PQ.step_ramp(1.5, -math.sqrt(2)), 6),
        (PQ.step_ramp(1.5, math.sqrt(2)), 6),
    ]
    ok, worst_res, worst_orth = True, 0.0, 0.0
    for pot, count in cases:
        nodes_ok, res, orth = _hygiene(piecewise.eigenvalues(pot, count=count))
        ok &= nodes_ok
        worst_res, worst_orth = max(worst_res, res), max(worst_orth, orth)
    ok = ok and worst_res <= 1e-9 and worst_orth <= 1e-6
    record("11", ok, f"nodes=k on {len(cases)} spectra; max residual {worst_res:.1e}; max overlap {worst_orth:.1e}")
    assert ok


# ---------------------------------------------------------------- 12


def test_criterion_12_isospectral(record):
    worst = 0.0
    for ell in (1, 2, 3):
        solved = isospectral.resolve_spectrum(isospectral.iso_sequence(ell), 5)
        worst = max(worst, max(abs(e - 2 * k) for k, e in enumerate(solved)))
    base = isospectral.StateSet.solve(piecewise.PiecewiseQuadratic.step(4), 8)
    ka = isospectral.krein_adler(base, [1, 2])
    want = ka.energies[:5]
    got = isospectral.resolve_spectrum(ka, 5)
    dka = max(abs(a - b) for a, b in zip(got, want))
    ok = worst <= 1e-4 and dka <= 1e-5 and ka.levels[:3] == [0, 3, 4]
    record("12", ok, f"iso l=1..3 max dev {worst:.1e}; KA {{1,2}} levels {ka.levels[:4]} dev {dka:.1e}")
    assert ok


# ---------------------------------------------------------------- 13


def test_criterion_13_wigner(record):
    grid = wigner.PhaseGrid((-4, 4), (-4, 4), 41, 41)
    ho = piecewise.eigenvalues(piecewise.PiecewiseQuadratic.step(0), count=1)[0]
    res = wigner.wigner_grid(ho, grid)
    P, X = np.meshgrid(grid.p, grid.x, indexing="ij")
    dev = float(np.max(np.abs(res.W - np.exp(-(P**2 + X**2)) / math.pi)))
    marg = max(res.x_marginal_error, res.p_marginal_error)
    step = piecewise.eigenvalues(piecewise.PiecewiseQuadratic.step(4), count=1)[0]
    neg = wigner.wigner_grid(step, wigner.PhaseGrid((-6, 6), (-5, 5), 61, 61)).minimum
    ok = dev <= 1e-6 and marg <= 1e-4 and neg < -1e-4
    record("13", ok, f"HO dev {dev:.1e}; marginals {marg:.1e}; step l=1 min {neg:.2e}")
    assert ok
