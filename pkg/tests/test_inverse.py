import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swkblab import inverse
from swkblab.catalog import ParameterError
from swkblab.inverse import ShapeAnsatz, SpectrumSpec


def test_parse_spectrum_kinds(tmp_path):
    assert inverse.parse_spectrum("linear:2").params == (2.0,)
    assert inverse.parse_spectrum("quad:20,4").params == (20.0, 4.0)
    f = tmp_path / "levels.txt"
    f.write_text("0\n2\n4\n6\n8\n")
    assert inverse.parse_spectrum(f"file:{f}").kind == "tabulated"
    for bad in ("cubic:1", "linear:-1", "linear:x", "file:/nonexistent"):
        with pytest.raises(ParameterError):
            inverse.parse_spectrum(bad)


def test_eval_number():
    assert inverse.eval_number("1/2") == 0.5
    assert inverse.eval_number("-sqrt(2)") == -math.sqrt(2)
    assert inverse.eval_number("sqrt(3)") == math.sqrt(3)


def test_ansatz_validation():
    for kind, p in (("gamma", 1.5), ("product", -1.0), ("tanprod", 2.0), ("spiral", None)):
        with pytest.raises(ParameterError):
            ShapeAnsatz(kind, p)


def test_tabulated_matches_linear():
    lin = SpectrumSpec.linear(2)
    tab = SpectrumSpec.tabulated([2.0 * n for n in range(40)])
    for s in (0.5, 3.0, 20.0):
        assert inverse.abel_rhs(tab, s) == pytest.approx(inverse.abel_rhs(lin, s), rel=1e-10)


def test_quadratic_with_negative_curvature_has_a_ceiling():
    sp = SpectrumSpec.quadratic(10, -1)
    assert sp.E_max == pytest.approx(25)
    with pytest.raises(inverse.InverseError):
        inverse.abel_rhs(sp, 26)


@settings(max_examples=40, deadline=None)
@given(
    kind=st.sampled_from(["mirror", "gamma", "product", "tanprod"]),
    p=st.floats(0.2, 0.95),
    x=st.floats(0.05, 1.5),
)
def test_partner_is_an_involution(kind, p, x):
    a = ShapeAnsatz(kind, None if kind == "mirror" else p)
    if kind == "tanprod":
        x = min(x, 1.5)
    y = float(a.partner(x))
    assert float(a.partner(y)) == pytest.approx(x, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(kind=st.sampled_from(["mirror", "gamma", "product", "tanprod"]), D=st.floats(0.01, 1.4))
def test_gap_inversion(kind, D):
    a = ShapeAnsatz(kind, None if kind == "mirror" else 0.6)
    x = a.x_plus_for_gap(D)
    assert float(a.gap(x)) == pytest.approx(D, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(c=st.floats(0.5, 8), s=st.floats(0.1, 30))
def test_linear_spectrum_mirror_gives_linear_w(c, s):
    rec = inverse.reconstruct(SpectrumSpec.linear(c), ShapeAnsatz("mirror"), [s])
    # W = (c/2) x for E = c n
    assert rec.absW[0] == pytest.approx(0.5 * c * rec.x_plus[0], rel=1e-12)


def test_reconstruction_rows_and_sign():
    rec = inverse.reconstruct(SpectrumSpec.linear(2), ShapeAnsatz("gamma", 0.5), [1.0, 4.0])
    rows = rec.rows()
    assert [r["branch"] for r in rows] == ["minus", "minus", "plus", "plus"]
    assert rec.W(-1.0) < 0 < rec.W(1.0)


def test_product_fit_recovers_radial_oscillator():
    rec = inverse.reconstruct(SpectrumSpec.linear(4), ShapeAnsatz("product", math.sqrt(3)), np.linspace(0.1, 20, 50))
    assert rec.fit["A"] == pytest.approx(1.0, abs=1e-10)
    assert rec.fit["B"] == pytest.approx(3.0, abs=1e-10)


def test_bad_grid():
    with pytest.raises(ParameterError):
        inverse.reconstruct(SpectrumSpec.linear(2), ShapeAnsatz("mirror"), [0.0, 1.0])


def test_estimator_interface():
    est = inverse.SuperpotentialReconstructor("mirror", n_grid=50)
    assert est.get_params()["n_grid"] == 50
    est.set_params(Wsq_max=16.0).fit("linear:2")
    assert est.predict(1.5) == pytest.approx(1.5, rel=1e-12)
    with pytest.raises(ParameterError):
        est.set_params(colour="red")
    with pytest.raises(RuntimeError):
        inverse.SuperpotentialReconstructor().predict(1.0)


def test_classical_period_harmonic():
    T = 2.0
    out = inverse.classical_period_inverse(T, [0.5, 1.0, 2.0])
    # U = k x^2 with mass 1/2 has period pi / sqrt(k)
    assert out["k_left"] == pytest.approx(math.pi**2 / T**2)
    assert out["k_right"] == pytest.approx(math.pi**2 / T**2)
