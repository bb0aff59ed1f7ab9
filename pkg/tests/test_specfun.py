import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swkblab.specfun import PoleError, kummer_1f1, kummer_1f1_dz, log_gamma, recip_gamma


def test_recip_gamma_zero_at_poles():
    for k in range(0, 6):
        assert recip_gamma(-k) == 0.0


def test_recip_gamma_values():
    assert recip_gamma(1.0) == 1.0
    assert recip_gamma(0.5) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
    assert recip_gamma(-0.5) == pytest.approx(-1 / (2 * math.sqrt(math.pi)), rel=1e-14)


def test_log_gamma_sign_and_pole():
    assert log_gamma(-0.5)[1] == -1
    assert log_gamma(-1.5)[1] == 1
    with pytest.raises(PoleError):
        log_gamma(-2.0)


def test_kummer_trivial_cases():
    assert kummer_1f1(0.3, 0.7, 0.0) == 1.0
    assert kummer_1f1(1.0, 1.0, 2.0) == pytest.approx(math.exp(2.0), rel=1e-15)
    # terminating: 1F1(-2; 1/2; z) = 1 - 4z + 4z^2/3
    z = 1.7
    assert kummer_1f1(-2, 0.5, z) == pytest.approx(1 - 4 * z + 4 * z * z / 3, rel=1e-14)


def test_kummer_pole_in_c():
    with pytest.raises(PoleError):
        kummer_1f1(0.5, -1.0, 1.0)


@settings(max_examples=80, deadline=None)
@given(
    a=st.floats(-6, 6, allow_nan=False),
    c=st.sampled_from([0.5, 1.5, 2.5, 0.3, 3.7]),
    z=st.floats(-60, 80, allow_nan=False),
)
def test_kummer_matches_mpmath(a, c, z):
    # default 15 digits drops the e^z / Gamma(a) term when a is tiny
    with mpmath.workdps(40):
        want = float(mpmath.hyp1f1(a, c, z))
        bound = float(mpmath.hyp1f1(abs(a), c, abs(z)))
    got = kummer_1f1(a, c, z)
    scale = max(abs(want), bound * 1e-16, 1e-300)
    assert abs(got - want) <= 1e-10 * scale


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-3, 3), z=st.floats(-10, 10))
def test_derivative_identity(a, z):
    c = 1.5
    h = 1e-5
    fd = (kummer_1f1(a, c, z + h) - kummer_1f1(a, c, z - h)) / (2 * h)
    assert kummer_1f1_dz(a, c, z) == pytest.approx(fd, rel=1e-6, abs=1e-8)
