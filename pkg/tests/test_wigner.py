import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swkblab import wigner
from swkblab.catalog import ParameterError
from swkblab.piecewise import PiecewiseQuadratic as PQ
from swkblab.piecewise import eigenvalues


@pytest.mark.parametrize("n", range(5))
def test_origin_value(n):
    assert wigner.wigner_point(wigner.HarmonicState(n), 0.0, 0.0) == pytest.approx((-1) ** n / math.pi, rel=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_closed_form_excited(n):
    grid = wigner.PhaseGrid((-3, 3), (-3, 3), 13, 13)
    res = wigner.wigner_grid(wigner.HarmonicState(n), grid)
    P, X = np.meshgrid(grid.p, grid.x, indexing="ij")
    assert np.max(np.abs(res.W - wigner.ho_wigner(n, P, X))) < 1e-10


@settings(max_examples=25, deadline=None)
@given(p=st.floats(0, 4), x=st.floats(-3, 3))
def test_even_in_momentum(p, x):
    s = wigner.HarmonicState(2)
    assert wigner.wigner_point(s, p, x) == wigner.wigner_point(s, -p, x)


@pytest.fixture(scope="module")
def step_ground():
    return eigenvalues(PQ.step(4), count=1)[0]


def test_step_state_goes_negative_and_normalizes(step_ground):
    res = wigner.wigner_grid(step_ground, wigner.PhaseGrid((-6, 6), (-6, 6), 61, 61))
    assert res.minimum < -1e-4
    assert res.normalization == pytest.approx(1.0, abs=1e-3)
    assert res.anisotropy > 0.05


def test_marginal_against_density(step_ground):
    xs = [-1.0, 0.0, 0.7]
    p = np.linspace(-40, 40, 4001)
    for x in xs:
        m = np.trapezoid(wigner.wigner_values(step_ground, p, x), p)
        assert m == pytest.approx(step_ground(x) ** 2, abs=1e-4)


def test_momentum_density_oscillator():
    p = np.linspace(-3, 3, 7)
    assert np.allclose(wigner.momentum_density(wigner.HarmonicState(0), p), np.exp(-p * p) / math.sqrt(math.pi))


def test_deep_step_localizes_left():
    s = eigenvalues(PQ.step(40), count=1)[0]
    res = wigner.wigner_grid(s, wigner.PhaseGrid((-8, 4), (-5, 5), 49, 41))
    x = res.grid.x
    assert res.W[:, x < 0].sum() / res.W.sum() > 0.9


def test_oscillator_is_isotropic():
    res = wigner.wigner_grid(wigner.HarmonicState(0))
    assert res.anisotropy < 1e-3


def test_grid_validation():
    with pytest.raises(ParameterError):
        wigner.PhaseGrid((-1, 1), (-1, 2))
    with pytest.raises(ParameterError):
        wigner.PhaseGrid(nx=1)
    assert wigner.PhaseGrid.parse("3,5").x_range == (-3.0, 3.0)
    with pytest.raises(ParameterError):
        wigner.PhaseGrid.parse("1,2,3")
