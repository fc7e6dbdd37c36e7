import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tunnelbound import make_profile
from tunnelbound.errors import NonPositive
from tunnelbound.numerics import fd_derivative
from tunnelbound.trial import (
    constant,
    exp_integral,
    from_callable,
    from_samples,
    k_trial,
    max_cut,
    power,
    product,
    schwartzian_J,
    sech_bump,
    tanh_interpolant,
)

X = np.linspace(-4.0, 4.0, 33)


def _check_derivatives(f, x=X, rtol=1e-5):
    d1 = fd_derivative(f.value, x, 1)
    d2 = fd_derivative(f.value, x, 2)
    scale1 = max(1.0, float(np.max(np.abs(d1))))
    scale2 = max(1.0, float(np.max(np.abs(d2))))
    assert np.max(np.abs(f.d1(x) - d1)) <= rtol * scale1
    assert np.max(np.abs(f.d2(x) - d2)) <= rtol * scale2


def test_constant():
    c = constant(2.5)
    assert np.all(c(X) == 2.5) and np.all(c.d1(X) == 0) and np.all(c.d2(X) == 0)
    assert c.limits == (2.5, 2.5) and c.family == "constant"


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 3), st.floats(0.2, 3), st.floats(-1, 1), st.floats(0.3, 3),
       st.floats(-0.15, 1.0))
def test_tanh_interpolant_derivatives(left, right, x0, w, bump):
    f = tanh_interpolant(left, right, x0, w, bump)
    _check_derivatives(f)
    assert f.limits == (left, right)


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.9, 2), st.floats(-1, 1), st.floats(0.3, 3))
def test_sech_bump_derivatives(amp, x0, w):
    f = sech_bump(amp, x0, w)
    _check_derivatives(f)
    assert f.value(np.array(1e4)) == pytest.approx(1.0)


def test_tanh_interpolant_limits_reached():
    f = tanh_interpolant(1.0, 3.0, 0.0, 0.5)
    assert f.value(np.array(-50.0)) == pytest.approx(1.0)
    assert f.value(np.array(50.0)) == pytest.approx(3.0)


def test_max_cut_and_k_trial(square):
    s = square.at(2.0)
    h = max_cut(s, 1.2)
    assert h.value(np.array(0.5)) == pytest.approx(1.2)
    assert h.value(np.array(3.0)) == pytest.approx(math.sqrt(2.0))
    assert h.breakpoints == (0.0, 1.0)
    k = k_trial(s)
    assert k.value(np.array(0.5)) == pytest.approx(1.0)


def test_max_cut_smooth_derivatives_away_from_kink(sech2):
    s = sech2.at(2.0)
    h = max_cut(s, 0.0)
    _check_derivatives(h)


def test_schwartzian_J_derivatives(sech2):
    s = sech2.at(2.0)
    J = schwartzian_J(s)
    _check_derivatives(J)
    assert J.limits == pytest.approx((1.0, 1.0))


@settings(max_examples=20, deadline=None)
@given(st.floats(-2.5, 2.5))
def test_power_and_product(p):
    f = tanh_interpolant(1.0, 2.0, 0.2, 0.7)
    g = sech_bump(0.4, -0.3, 1.1)
    _check_derivatives(power(f, p))
    _check_derivatives(product(f, g))
    assert power(f, p).limits == pytest.approx((1.0, 2.0 ** p))


def test_exp_integral():
    # phi = tanh(x): J = exp(tanh x), chi = sech^2 x
    sech2 = lambda x: 1.0 / np.cosh(x) ** 2
    J = exp_integral(np.tanh, sech2, lambda x: -2.0 * sech2(x) * np.tanh(x),
                     limits=(math.exp(-1), math.e))
    _check_derivatives(J)
    assert J.family == "exp-integral-of-chi"


def test_from_callable_and_samples():
    f = from_callable(lambda x: 2.0 + np.sin(x))
    assert np.allclose(f.d1(X), np.cos(X), atol=1e-8)
    assert np.allclose(f.d2(X), -np.sin(X), atol=1e-5)
    xs = np.linspace(-3, 3, 61)
    g = from_samples(xs, 1.0 + np.exp(-xs ** 2))
    assert g.family == "custom-sampled"
    assert g.value(np.array(0.0)) == pytest.approx(2.0, abs=1e-3)
    assert g.value(np.array(100.0)) == pytest.approx(g.limits[1])


def test_positivity_check():
    f = tanh_interpolant(1.0, 1.0, 0.0, 1.0, bump=-2.0)
    with pytest.raises(NonPositive):
        f.check_positive(X)
    constant(1.0).check_positive(X)


def test_log_derivative():
    f = tanh_interpolant(1.0, 2.0)
    assert np.allclose(f.log_derivative(X), f.d1(X) / f.value(X))
