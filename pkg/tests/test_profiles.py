import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tunnelbound import (
    PotentialProfile,
    forbidden_regions,
    k_squared,
    make_corpus,
    make_profile,
)
from tunnelbound.errors import InvalidEnergy, RegionResolutionError
from tunnelbound.numerics import DEFAULT_CONFIG, fd_derivative
from tunnelbound.profiles import FAMILIES, family_defaults


def test_corpus_contents():
    names = {p.name for p in make_corpus()}
    assert {"zero", "square", "smooth_square", "sech2", "step", "sharp_step",
            "gaussian"} <= names


def test_corpus_values(zero, square, sech2):
    assert zero.v(np.array(3.7)) == 0.0
    assert square.v(np.array(0.5)) == 1.0
    assert square.v(np.array(2.0)) == 0.0
    assert sech2.v(np.array(0.0)) == 1.0


def test_k_squared_examples(zero, square):
    assert k_squared(zero.at(1.0), 0.0) == 1.0
    assert k_squared(square.at(2.0), 0.5) == 1.0
    assert k_squared(square.at(0.5), 0.5) == -0.5


def test_energy_must_exceed_both_asymptotes():
    step = make_profile("step", {"Vplus": 1.0})
    with pytest.raises(InvalidEnergy):
        step.at(1.0)
    with pytest.raises(InvalidEnergy):
        make_profile("zero").at(0.0)
    assert step.at(1.5).k_plus == pytest.approx(math.sqrt(0.5))


def test_unknown_parameter_rejected():
    with pytest.raises(ValueError, match="unknown parameter"):
        make_profile("square", {"V0": 1.0, "width": 2.0})
    with pytest.raises(ValueError, match="unknown potential"):
        make_profile("morse")


def test_family_defaults():
    assert family_defaults("square") == {"V0": 1.0, "L": 1.0}
    assert set(family_defaults("smooth_square")) == {"V0", "L", "s"}


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_asymptotics_reached(name):
    p = make_profile(name)
    for E in (max(p.v_minus_inf, p.v_plus_inf) + d for d in (0.3, 2.0)):
        s = p.at(E)
        lo, hi = s.window
        big = np.array([lo, 2 * lo - 1.0])
        assert np.all(np.abs(p.v(big) - p.v_minus_inf) < DEFAULT_CONFIG.tail_tol)
        big = np.array([hi, 2 * hi + 1.0])
        assert np.all(np.abs(p.v(big) - p.v_plus_inf) < DEFAULT_CONFIG.tail_tol)


@pytest.mark.parametrize("name", ["smooth_square", "sech2", "step", "gaussian"])
def test_analytic_derivatives_match_finite_differences(name):
    p = make_profile(name)
    x = np.linspace(-3.0, 3.0, 41)
    assert np.allclose(p.dv(x), fd_derivative(p.v, x, 1), atol=1e-7)
    assert np.allclose(p.d2v(x), fd_derivative(p.v, x, 2), atol=1e-5)


def test_forbidden_regions_none(zero, square):
    assert forbidden_regions(zero.at(1.0)).empty
    assert forbidden_regions(square.at(2.0)).empty
    assert forbidden_regions(zero.at(1.0)).penetration_integral == 0.0


def test_forbidden_regions_square(square):
    fr = forbidden_regions(square.at(0.5))
    assert len(fr.intervals) == 1
    (a, b), = fr.intervals
    assert abs(a) < 1e-12 and abs(b - 1.0) < 1e-12
    assert fr.kappa_max == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert fr.penetration_integral == pytest.approx(math.sqrt(0.5), abs=1e-9)
    assert fr.total_width == pytest.approx(1.0, abs=1e-11)


def test_forbidden_regions_sech2_analytic(sech2):
    # kappa^2 = sech^2 x - E; int kappa over the forbidden interval is
    # pi (1 - sqrt(E)) for V0 = a = 1
    E = 0.25
    fr = forbidden_regions(sech2.at(E))
    assert fr.penetration_integral == pytest.approx(math.pi * (1 - math.sqrt(E)), abs=1e-9)
    assert fr.kappa_max == pytest.approx(math.sqrt(1 - E), abs=1e-10)
    (a, b), = fr.intervals
    assert b - a == pytest.approx(fr.total_width)
    assert b == pytest.approx(math.acosh(1 / math.sqrt(E)), abs=1e-10)


def test_forbidden_regions_double_barrier():
    def v(x):
        x = np.asarray(x, dtype=float)
        return np.exp(-(x - 3) ** 2) + np.exp(-(x + 3) ** 2)

    p = PotentialProfile("double", v, 0.0, 0.0)
    fr = forbidden_regions(p.at(0.5))
    assert len(fr.intervals) == 2
    assert fr.total_width == pytest.approx(sum(b - a for a, b in fr.intervals))


def test_forbidden_region_touching_domain_edge(square):
    with pytest.raises(RegionResolutionError):
        forbidden_regions(square.at(0.5), domain=(0.2, 3.0))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["square", "sech2", "gaussian", "smooth_square"]), st.floats(0.05, 3.0))
def test_forbidden_iff_negative_on_scan(name, E):
    s = make_profile(name).at(E)
    x = np.linspace(*s.window, DEFAULT_CONFIG.n_scan + 1)
    fr = forbidden_regions(s)
    assert fr.empty == bool(np.min(s.k2(x)) >= 0)
    for a, b in fr.intervals:
        xs = np.linspace(a, b, 50)[1:-1]
        assert np.all(s.k2(xs) < 0)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["sech2", "gaussian", "smooth_square"]), st.floats(0.05, 0.95))
def test_penetration_integral_stable_under_scan_doubling(name, E):
    s = make_profile(name).at(E)
    a = forbidden_regions(s).penetration_integral
    b = forbidden_regions(s, cfg=DEFAULT_CONFIG.with_(n_scan=4096)).penetration_integral
    assert abs(a - b) < 1e-9
