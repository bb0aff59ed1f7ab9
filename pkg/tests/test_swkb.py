import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swkblab import catalog, swkb
from swkblab.catalog import ParameterError


def test_harmonic_integral_closed_form():
    ho = catalog.make("H")
    I, intervals, _ = swkb.integral_at_energy(ho, 3.0)
    assert I == pytest.approx(math.pi * 3.0 / 2, rel=1e-12)
    (a, b), = intervals
    assert (a, b) == pytest.approx((-math.sqrt(3), math.sqrt(3)), rel=1e-12)


def test_ground_state_report_is_trivial():
    rep = swkb.swkb_integral(catalog.make("H"), 0)
    assert rep.I == 0.0 and rep.err == 0.0 and rep.n_intervals == 1


def test_rescaled_error():
    assert swkb.rescaled_error(-1e-3) == pytest.approx(-0.125)
    assert swkb.rescaled_error(1e-2) == pytest.approx(0.25)
    assert swkb.rescaled_error(0.0) == 0.0


def test_report_row_columns():
    row = swkb.swkb_integral(catalog.make("H"), 2).as_row()
    assert list(row) == ["n", "I", "I_over_pi_hbar", "err", "err_rescaled", "delta", "n_intervals"]


@settings(max_examples=15, deadline=None)
@given(hbar=st.floats(0.2, 5), omega=st.floats(0.2, 5), n=st.integers(1, 8))
def test_units_do_not_change_exactness(hbar, omega, n):
    for fam, p in (("H", {}), ("L", {"g": 3.0}), ("J", {"g": 2.0, "h": 3.0})):
        spec = catalog.make(fam, hbar=hbar, omega=omega, **p)
        assert swkb.swkb_integral(spec, n).I_over_pi_hbar == pytest.approx(n, abs=1e-8)


@settings(max_examples=15, deadline=None)
@given(E1=st.floats(0.5, 20), dE=st.floats(0.1, 10))
def test_integral_increases_with_energy(E1, dE):
    spec = catalog.make("xlag2", g=3)
    assert swkb.integral_at_energy(spec, E1 + dE)[0] > swkb.integral_at_energy(spec, E1)[0]


def test_quantize_energy_inverts_the_integral():
    ho = catalog.make("H")
    for n in range(1, 5):
        assert swkb.quantize_energy(ho, n) == pytest.approx(2 * n, abs=1e-9)


def test_quantize_energy_rejects_negative_levels():
    with pytest.raises(ParameterError):
        swkb.quantize_energy(catalog.make("H"), -1)


def test_err_table_caps_bounded_families():
    spec = catalog.make("morse", h=7.5, mu=1.0)
    assert [r.n for r in swkb.err_table(spec, 0, 40)] == list(range(8))


def test_extended_integral_needs_eta():
    with pytest.raises(ParameterError):
        swkb.swkb_extended_integral(catalog.make("H"), 1)


def test_closed_form_matches_quadrature():
    spec = catalog.make("J", g=2.0, h=3.0)
    for n in range(1, 6):
        assert swkb.closed_form_report(spec, n).I == pytest.approx(swkb.swkb_integral(spec, n).I, rel=1e-12)


def test_krein_adler_has_several_intervals_on_full_line():
    spec = catalog.make("ka", base="H", d=4)
    assert len(swkb.turning_intervals(spec, 2.0)) == 3
    assert len(swkb.turning_intervals(spec, 2.0, (0.0, math.inf))) == 2


def test_x1_laguerre_large_coupling_converges():
    rep = swkb.swkb_integral(catalog.make("xlag2", g=100), 1)
    assert rep.n_intervals == 1 and abs(rep.err) < 1e-5


def test_multi_indexed_laguerre_error_shrinks():
    spec = catalog.make("mi", base="L", D1=[1], D2=[2], g=5)
    errs = [abs(swkb.swkb_integral(spec, n).err) for n in (1, 5, 10)]
    assert errs[0] > errs[1] > errs[2]


def test_negative_energy_has_no_allowed_region():
    assert swkb.turning_intervals(catalog.make("H"), -1.0) == []


def test_reconstructed_style_window_truncates():
    ho = catalog.make("H")
    (a, b), = swkb.turning_intervals(ho, 4.0, (0.0, 10.0))
    assert a == 0.0 and b == pytest.approx(2.0)
    assert np.isfinite(swkb.integral_at_energy(ho, 4.0, window=(0.0, 10.0))[0])
