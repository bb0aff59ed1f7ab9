import numpy as np
import pytest

from swkblab import isospectral as iso
from swkblab.catalog import ParameterError
from swkblab.piecewise import PiecewiseQuadratic as PQ


@pytest.fixture(scope="module")
def ho():
    return iso.StateSet.solve(PQ.step(0), 5)


@pytest.fixture(scope="module")
def step4():
    return iso.StateSet.solve(PQ.step(4), 8)


X = np.array([-2.3, -1.1, -0.4, 0.35, 0.9, 1.7, 2.6])


def test_single_state_wronskian_is_the_state(step4):
    w = iso.wronskian_eval([step4[0]], X)
    assert np.allclose(w.W, step4[0](X), rtol=1e-13)


def test_empty_wronskian_is_one(step4):
    assert np.all(iso.wronskian_eval([], X).W == 1.0)


def test_oscillator_partner_is_shifted(ho):
    partner = iso.darboux_crum(ho, 1)
    assert np.allclose(partner.potential(X) - X**2, 1.0, atol=1e-8)


def test_identity_deformations(step4):
    for sysm in (iso.darboux_crum(step4, 0), iso.krein_adler(step4, [])):
        assert np.allclose(sysm.potential(X), PQ.step(4).V(X))
        assert sysm.energies == step4.energies


def test_crum_equals_deleting_the_bottom_pair(step4):
    a, b = iso.darboux_crum(step4, 2), iso.krein_adler(step4, [0, 1])
    assert np.allclose(a.potential(X), b.potential(X), rtol=1e-12)


def test_inadmissible_deletion(step4):
    with pytest.raises(ParameterError):
        iso.krein_adler(step4, [1])
    with pytest.raises(ParameterError):
        iso.darboux_crum(step4, 99)


def test_pair_deletion_wronskian_keeps_its_sign(step4):
    W = iso.wronskian_eval([step4[1], step4[2]], np.linspace(-7, 7, 2801)).W
    assert np.all(W > 0) or np.all(W < 0)


def test_partner_levels(step4):
    p = iso.darboux_crum(step4, 1)
    assert p.levels[0] == 1
    assert p.energies[:3] == pytest.approx([0.0, 2.0, 4.0], abs=1e-10)


def _second_derivative(f, x, h=1e-4):
    return (f(x + h) - 2 * f(x) + f(x - h)) / h**2


def test_deformed_states_solve_the_deformed_equation(step4):
    sysm = iso.krein_adler(step4, [1, 2])
    x = X[np.abs(X) > 0.01]
    V = sysm.potential(x)
    for lvl in sysm.levels[:3]:
        f = sysm.state(lvl)
        psi = f(x)
        resid = -_second_derivative(f, x) + (V - step4[lvl].E) * psi
        assert np.max(np.abs(resid)) <= 1e-5 * max(1.0, np.max(np.abs(psi)) * 10)


def test_deformed_derivative_matches_finite_difference(step4):
    sysm = iso.darboux_crum(step4, 1)
    psi, dpsi = sysm.psi_dpsi(2, X)
    h = 1e-6
    fd = (sysm.psi_dpsi(2, X + h)[0] - sysm.psi_dpsi(2, X - h)[0]) / (2 * h)
    assert np.allclose(dpsi, fd, atol=1e-7)


def _overlap(f, g):
    x, w = np.polynomial.legendre.leggauss(64)
    tot = 0.0
    for a, b in ((-10, 0), (0, 10)):
        e = np.linspace(a, b, 41)
        for l, r in zip(e[:-1], e[1:]):
            xs = 0.5 * (r - l) * x + 0.5 * (r + l)
            tot += 0.5 * (r - l) * np.sum(w * f(xs) * g(xs))
    return tot


def test_deformed_states_orthonormal(step4):
    sysm = iso.krein_adler(step4, [1, 2])
    lv = sysm.levels[:4]
    for i in lv:
        for j in lv:
            want = 1.0 if i == j else 0.0
            assert _overlap(sysm.state(i), sysm.state(j)) == pytest.approx(want, abs=1e-5)


def test_wronskian_nesting_identity(step4):
    f1, f2, f3 = step4[0], step4[1], step4[3]
    A = iso.wronskian_eval([f1, f2], X)
    B = iso.wronskian_eval([f1, f3], X)
    lhs = A.W * B.dW - A.dW * B.W
    rhs = f1(X) * iso.wronskian_eval([f1, f2, f3], X).W
    assert np.allclose(lhs, rhs, rtol=1e-6, atol=1e-12)


def test_numerov_on_the_oscillator():
    E = iso.numerov_eigenvalues(lambda x: x * x - 1, lambda x: x * x - 1, -1.0, 7.0)
    assert E == pytest.approx([0, 2, 4, 6], abs=1e-7)


def test_iso_sequence_far_field_and_jump():
    ell = 2
    s = iso.iso_sequence(ell)
    E_deleted = sum(s.base[i].E for i in s.deleted)
    x = np.array([-8.0, 8.0])
    # x^2 - 1 + 2 ell on the right, x^2 - 1 - 2 ell on the left, with 1/x^2 corrections
    want = x**2 - 1 + np.array([-2 * ell, 2 * ell]) + (E_deleted + np.array([4 * ell * ell, 0])) / x**2
    assert np.allclose(s.potential(x), want, atol=0.05)
    left, right = s.potential(0.0, "left"), s.potential(0.0, "right")
    assert np.isfinite(left) and np.isfinite(right) and abs(left - right) > 1


def test_iso_sequence_rejects_bad_ell():
    with pytest.raises(ParameterError):
        iso.iso_sequence(0)


def test_shape_invariance_diagnostic_is_nonzero():
    gap = iso.shape_invariance_gap(1)
    assert gap["max_residual"] > 0.1
