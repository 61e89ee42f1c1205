import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eitkit import QuadratureConfig, integrate_adaptive
from eitkit.errors import QuadratureFailure


def test_polynomial_exact():
    value, err = integrate_adaptive(lambda x: x**3 - 2 * x + 1, -1.0, 3.0)
    exact = (3.0**4 / 4 - 3.0**2 + 3.0) - (0.25 - 1.0 - 1.0)
    assert value == pytest.approx(exact, rel=1e-13)
    assert err < 1e-9 * abs(exact)


def test_complex_integrand():
    value, _ = integrate_adaptive(lambda x: np.exp(1j * x), 0.0, math.pi)
    assert value == pytest.approx(2j * math.sin(math.pi / 2) * math.e**0, rel=1e-12)
    assert value == pytest.approx((np.exp(1j * math.pi) - 1.0) / 1j, rel=1e-12)


def test_narrow_feature_needs_breakpoints():
    # A Lorentzian 1e5 times narrower than the domain: the seeded
    # subdivision localizes it, and the result matches the arctan analytic
    # value.
    w = 1e-5
    center = 0.3

    def f(x):
        return w / ((x - center) ** 2 + w**2)

    exact = math.atan((1.0 - center) / w) - math.atan((-1.0 - center) / w)
    value, _ = integrate_adaptive(f, -1.0, 1.0, breakpoints=[center])
    assert value == pytest.approx(exact, rel=1e-9)


def test_failure_at_subdivision_cap():
    config = QuadratureConfig(rel_tol=1e-14, max_subdivisions=2)
    with pytest.raises(QuadratureFailure):
        integrate_adaptive(lambda x: np.abs(x - 0.12345) ** 0.1, -1.0, 1.0, config)


def test_breakpoints_outside_domain_ignored():
    value, _ = integrate_adaptive(np.sin, 0.0, math.pi, breakpoints=[-5.0, 10.0])
    assert value == pytest.approx(2.0, rel=1e-12)


def test_invalid_interval_rejected():
    with pytest.raises(ValueError):
        integrate_adaptive(np.sin, 1.0, 1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0.0, abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)


@given(
    a=st.floats(min_value=-5.0, max_value=0.0),
    b=st.floats(min_value=0.5, max_value=5.0),
    scale=st.floats(min_value=-10.0, max_value=10.0),
)
def test_linearity_in_integrand(a, b, scale):
    base, _ = integrate_adaptive(lambda x: np.cos(x), a, b)
    scaled, _ = integrate_adaptive(lambda x: scale * np.cos(x), a, b,
                                   QuadratureConfig(rel_tol=1e-9, abs_tol=1e-15))
    assert scaled == pytest.approx(scale * base, rel=1e-9, abs=1e-12)
