import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tunnelbound import (
    PotentialProfile,
    best_bound,
    bound_basic,
    bound_delta_mg,
    bound_special,
    make_profile,
    optimize_delta,
    optimize_trial,
    transmission,
)
from tunnelbound.errors import PreconditionFailed


def test_delta_zero_potential(zero):
    rep = optimize_delta(zero.at(1.0), "delta-mg")
    assert rep.best_params["delta"] == pytest.approx(1.0)
    assert rep.best_bound.theta == 0.0


def test_delta_cut_square_beats_endpoints(square):
    s = square.at(2.0)
    rep = optimize_delta(s, "delta-cut")
    kmin = 1.0
    t_top = bound_special(s, "delta-cut", {"delta": s.k_inf}).theta
    t_low = bound_special(s, "delta-cut", {"delta": kmin + 1e-9}).theta
    assert rep.best_bound.theta <= t_top + 1e-12
    assert rep.best_bound.theta <= t_low + 1e-12
    # theta(D) = ln(2/D^2)/2 + (D^2 - 1)/(2D), d theta/dD = (D - 1)^2 / (2 D^2) >= 0,
    # so the optimum sits at the lower end D = k_min = 1
    assert rep.best_params["delta"] == pytest.approx(1.0, abs=1e-5)
    assert rep.best_bound.theta == pytest.approx(0.5 * math.log(2.0), abs=1e-9)


def test_delta_mg_optimum_matches_dense_scan(square):
    s = square.at(2.0)
    rep = optimize_delta(s, "delta-mg")
    grid = np.linspace(1e-3, s.k_inf, 2001)
    dense = min(bound_delta_mg(s, d).theta for d in grid)
    assert rep.best_bound.theta <= dense + 1e-6


def test_delta_deterministic(sech2):
    s = sech2.at(1.5)
    a = optimize_delta(s, "delta-mg")
    b = optimize_delta(sech2.at(1.5), "delta-mg")
    assert abs(a.best_bound.theta - b.best_bound.theta) < 1e-6
    assert a.trace == b.trace


@pytest.mark.parametrize("family", ["delta-mg", "delta-cut"])
def test_delta_trace_not_below_best(sech2, family):
    rep = optimize_delta(sech2.at(1.5), family)
    assert all(t >= rep.best_bound.theta for _, t in rep.trace)
    assert rep.evaluations == len(rep.trace)


def test_delta_empty_interval():
    def v(x):
        return -0.5 / np.cosh(np.asarray(x, dtype=float)) ** 2
    well = PotentialProfile("well", v, 0.0, 0.0)
    with pytest.raises(PreconditionFailed):
        optimize_delta(well.at(1.0), "delta-cut")


def test_delta_bad_family(sech2):
    with pytest.raises(ValueError):
        optimize_delta(sech2.at(2.0), "kmin")


def test_trial_budget_one_is_baseline(square):
    s = square.at(2.0)
    rep = optimize_trial(s, "HJ-bump", budget=1)
    base = bound_basic(s, None)
    assert rep.evaluations == 1 and rep.budget_exhausted
    assert rep.best_params["A"] == 0.0
    assert rep.best_bound.theta == pytest.approx(base.theta, abs=1e-10)


@pytest.mark.parametrize("family", ["HJ-bump", "h-bump"])
def test_trial_never_worse_than_baseline(square, family):
    s = square.at(2.0)
    rep = optimize_trial(s, family, budget=40)
    base = bound_basic(s, None)
    assert rep.best_bound.theta <= base.theta + 1e-12
    assert rep.evaluations <= 40
    assert all(t >= rep.best_bound.theta for _, t in rep.trace)
    assert rep.best_bound.bound <= transmission(s).transmission + 1e-8


def test_trial_two_parameter_box(square):
    s = square.at(2.0)
    rep = optimize_trial(s, "HJ-bump", param_box={"A": (-0.5, 1.0), "w": (0.2, 3.0)}, budget=30)
    assert rep.best_bound.theta <= bound_basic(s, None).theta + 1e-12
    assert rep.as_dict()["evaluations"] == rep.evaluations


def test_trial_argument_errors(square):
    s = square.at(2.0)
    with pytest.raises(ValueError):
        optimize_trial(s, "HJ-bump", param_box={"q": (0, 1)})
    with pytest.raises(ValueError):
        optimize_trial(s, "HJ-bump", param_box={"A": (0, math.inf)})
    with pytest.raises(ValueError):
        optimize_trial(s, "J-wiggle", budget=5)
    with pytest.raises(ValueError):
        optimize_trial(s, "HJ-bump", budget=0)


def test_trial_deterministic(sech2):
    a = optimize_trial(sech2.at(1.5), "h-bump", budget=25)
    b = optimize_trial(sech2.at(1.5), "h-bump", budget=25)
    assert a.trace == b.trace


def test_best_zero(zero):
    assert best_bound(zero.at(1.0), budget=5).bound == 1.0


def test_best_square_saturation(square):
    s = square.at(0.5)
    b = best_bound(s, budget=10)
    T = transmission(s).transmission
    assert b.bound <= T + 1e-8
    assert b.bound == pytest.approx(T, abs=1e-9)
    assert b.bound == pytest.approx(0.6293, abs=1e-4)
    assert b.params["winner"] == "hconst"
    cands = b.diagnostics["candidates"]
    assert {"hconst", "wkb-like", "delta-mg-opt", "low-energy"} <= set(cands)


def test_best_step_monotone_h():
    s = make_profile("sharp_step").at(2.0)
    b = best_bound(s, budget=10)
    assert b.params["winner"] == "monotone-h"
    assert b.bound == pytest.approx(0.9706, abs=1e-4)
    assert b.bound == pytest.approx(transmission(s).transmission, abs=1e-8)


def test_best_without_admissible_family():
    def v(x):
        x = np.asarray(x, dtype=float)
        return np.exp(-(x - 2.5) ** 2) + np.exp(-(x + 2.5) ** 2) - 0.3 * np.exp(-x ** 2)
    s = PotentialProfile("odd", v, 0.0, 0.0, center=0.0, scale=3.0).at(0.5)
    b = best_bound(s, budget=5)
    assert 0.0 <= b.bound <= transmission(s).transmission + 1e-8


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["sech2", "gaussian", "smooth_square", "square"]), st.floats(0.1, 4.0))
def test_best_at_least_hconst_and_sound(name, E):
    s = make_profile(name).at(E)
    b = best_bound(s, budget=8)
    T = transmission(s).transmission
    assert b.bound <= T + 1e-8
    try:
        h = bound_special(s, "hconst")
    except PreconditionFailed:
        return
    assert b.bound >= h.bound
