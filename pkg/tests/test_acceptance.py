"""Acceptance criteria, one test each. The docstring's first line is echoed
in the terminal summary as a PASS/FAIL line."""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from tunnelbound import (
    DEFAULT_CONFIG,
    SolverConfig,
    TunnelBoundError,
    best_bound,
    bound_basic,
    bound_basic_weak,
    bound_delta_mg,
    bound_improved,
    bound_low_energy,
    bound_old_low_energy,
    bound_special,
    bound_wkb_like,
    forbidden_regions,
    make_corpus,
    make_profile,
    oracle_transmission,
    sech2,
    to_particle_bound,
    transmission,
    verify_invariance,
    wkb_estimate,
)
from tunnelbound.cli import CSV_HEADER, sweep_row
from tunnelbound.trial import constant, k_trial, power, product, sech_bump, tanh_interpolant

# Trial-search budget per family inside the soundness sweep. The default of
# 200 would take several minutes on one core; every optimised point is still
# a complete bound evaluation, so soundness is exercised the same way.
SWEEP_BUDGET = 10


def _energies(p, n=50):
    vtop = max(p.v_minus_inf, p.v_plus_inf)
    scale = max(p.params.get("V0", p.params.get("Vplus", 1.0)), 1.0)
    return np.linspace(vtop + 0.02, vtop + 10.0 * scale, n)


def test_oracle_equivalence():
    """1. oracle equivalence: solver matches closed-form T within 1e-6 on 3 families x 50 energies, < 10 s"""
    t0 = time.perf_counter()
    worst = 0.0
    for name in ("square", "sharp_step", "sech2"):
        p = make_profile(name)
        vtop = max(p.v_minus_inf, p.v_plus_inf)
        # tunnelling and above-barrier energies, including near the barrier top
        energies = np.concatenate([np.linspace(0.02, 0.98, 20) * max(vtop, 1.0),
                                   np.linspace(1.02, 8.0, 30) * max(vtop, 1.0)])
        energies = energies[energies > vtop]
        if len(energies) < 50:
            energies = np.linspace(vtop + 0.02, vtop + 8.0, 50)
        assert len(energies) >= 50
        for E in energies:
            exact = oracle_transmission(name, dict(p.params), float(E))
            worst = max(worst, abs(transmission(p.at(E)).transmission - exact))
    elapsed = time.perf_counter() - t0
    print(f"max |T - T_oracle| = {worst:.2e}, {elapsed:.2f} s")
    assert worst < 1e-6
    assert elapsed < 10.0


def test_soundness_sweep():
    """2. soundness: every admissible bound (default and optimised) <= T + 1e-8 on corpus x 50 energies, < 60 s"""
    t0 = time.perf_counter()
    checked, violations = 0, []
    for p in make_corpus():
        for E in _energies(p):
            s = p.at(E)
            T = transmission(s).transmission
            # best_bound evaluates every family, default and optimised
            best = best_bound(s, budget=SWEEP_BUDGET)
            values = {k: v for k, v in best.diagnostics["candidates"].items()
                      if isinstance(v, float)}
            values["best"] = best.bound
            extras = {
                "basic-weak": lambda: bound_basic_weak(s),
                "delta-cut": lambda: bound_special(
                    s, "delta-cut", {"delta": min(s.k_minus, s.k_plus)}),
                "delta-mg-half": lambda: bound_delta_mg(s, 0.5 * min(s.k_minus, s.k_plus)),
            }
            for fam, run in extras.items():
                try:
                    values[fam] = run().bound
                except TunnelBoundError:
                    pass
            for fam, b in values.items():
                checked += 1
                if b > T + 1e-8:
                    violations.append((p.name, float(E), fam, b, T))
    elapsed = time.perf_counter() - t0
    print(f"checked {checked} bounds, {len(violations)} violations, {elapsed:.1f} s")
    assert not violations, violations[:10]
    assert checked > 7 * 50 * 5
    assert elapsed < 60.0


def test_saturation_cases():
    """3. saturation: square at E=V0/2 with hconst and sharp step with h=k reach T within 1e-6"""
    V0, L = 1.0, 1.0
    E = V0 / 2
    s = make_profile("square", {"V0": V0, "L": L}).at(E)
    T = transmission(s).transmission
    closed = sech2(V0 * L / (2 * math.sqrt(E)))
    b = bound_special(s, "hconst").bound
    assert abs(b - T) < 1e-6 and abs(T - closed) < 1e-6

    s = make_profile("sharp_step", {"Vplus": 1.0}).at(2.0)
    T = transmission(s).transmission
    km, kp = s.k_minus, s.k_plus
    closed = 4 * km * kp / (km + kp) ** 2
    b = bound_basic_weak(s, k_trial(s)).bound
    assert abs(b - T) < 1e-6 and abs(T - closed) < 1e-6


def test_miller_good_invariance():
    """4. invariance: |T_transformed - T_original| < 1e-6 for constant, bump and interpolant j on 4 potentials"""
    cases = [("square", 2.0), ("sech2", 1.5), ("gaussian", 0.6), ("step", 1.8)]
    worst = 0.0
    for name, E in cases:
        s = make_profile(name).at(E)
        p = s.profile
        for j in (constant(2.0),
                  sech_bump(0.7, p.center, p.scale),
                  tanh_interpolant(1.0, 2.5, p.center, p.scale)):
            for form in ("j", "J"):
                rep = verify_invariance(s, j, form=form)
                worst = max(worst, rep.difference)
    print(f"max |dT| = {worst:.2e}")
    assert worst < 1e-6


def test_form_equivalence():
    """5. form equivalence: HJ, hJ and hj thetas agree within 1e-8 with j = J^-2, h = H J^2 on 4 slices"""
    worst = 0.0
    for name, E in [("sech2", 2.0), ("gaussian", 0.5), ("smooth_square", 1.5), ("step", 2.0)]:
        s = make_profile(name).at(E)
        H = tanh_interpolant(s.k_minus, s.k_plus, 0.1, 1.2, bump=0.25)
        J = sech_bump(0.4, -0.2, 0.9)
        h, j = product(H, power(J, 2.0)), power(J, -2.0)
        thetas = [bound_improved(s, "HJ", H, J).theta,
                  bound_improved(s, "hJ", h, J).theta,
                  bound_improved(s, "hj", h, j).theta]
        worst = max(worst, max(thetas) - min(thetas))
    print(f"max spread = {worst:.2e}")
    assert worst < 1e-8


def test_reduction_lattice():
    """6. reductions: J=1 gives baseline (1e-10), delta-cut tends to kmin (1e-6), wkb-like equals hconst without a barrier"""
    for name, E in [("sech2", 2.0), ("square", 2.0), ("gaussian", 0.5), ("step", 2.0)]:
        s = make_profile(name).at(E)
        H = tanh_interpolant(s.k_minus, s.k_plus, 0.0, 1.0)
        assert abs(bound_improved(s, "HJ", H, constant(1.0)).theta
                   - bound_basic(s, H).theta) < 1e-10

    for name, E in [("sech2", 2.0), ("gaussian", 1.5), ("square", 2.0)]:
        s = make_profile(name).at(E)
        kmin = bound_special(s, "kmin")
        kmin_val = math.sqrt(min(s.k2(np.linspace(*s.window, 20001))))
        cut = bound_special(s, "delta-cut", {"delta": kmin_val * (1 + 1e-9) + 1e-12})
        assert abs(cut.theta - kmin.theta) < 1e-6

    for name, E in [("sech2", 2.0), ("square", 2.0), ("gaussian", 3.0), ("smooth_square", 1.4)]:
        s = make_profile(name).at(E)
        assert forbidden_regions(s).empty
        w, h = bound_wkb_like(s), bound_special(s, "hconst")
        d = w.diagnostics
        assert d["penetration_term"] == 0.0 and d["peak_term"] == 0.0
        assert d["width_term"] == 0.0
        assert d["allowed_term"] == h.diagnostics["integral_term"]
        assert w.theta == h.theta and w.bound == h.bound


def test_stringency_condition():
    """7. stringency: new low-energy theta beats the old one on a wide low barrier and loses on a tall narrow one"""
    wide = make_profile("square", {"V0": 0.01, "L": 100.0})
    vmax, int_v = 0.01, 0.01 * 100.0
    assert math.sqrt(vmax) < 0.5 * int_v
    for E in (1e-4, 1e-3):
        s = wide.at(E)
        assert bound_low_energy(s).theta < bound_old_low_energy(s).theta

    narrow = make_profile("square", {"V0": 100.0, "L": 0.01})
    vmax, int_v = 100.0, 100.0 * 0.01
    assert math.sqrt(vmax) > 0.5 * int_v
    for E in (1e-4, 1e-3):
        s = narrow.at(E)
        assert bound_low_energy(s).theta > bound_old_low_energy(s).theta


def test_bogoliubov_identity():
    """8. Bogoliubov: (1 - sech^2)/sech^2 = sinh^2 theta within 1e-12 and N_exact = (1 - T)/T within 1e-12"""
    results = []
    for p in make_corpus():
        for E in _energies(p, 6):
            s = p.at(E)
            for run in (lambda: bound_special(s, "hconst"), lambda: bound_low_energy(s),
                        lambda: bound_wkb_like(s), lambda: bound_basic(s),
                        lambda: bound_delta_mg(s, min(s.k_minus, s.k_plus))):
                try:
                    b = run()
                except TunnelBoundError:
                    continue
                if not b.divergent:
                    results.append(b)
    assert len(results) > 50
    for b in results:
        n = to_particle_bound(b).n_bound
        lhs = (1.0 - b.bound) / b.bound
        # relative form: at large theta both sides are ~e^{2 theta}/4
        assert abs(lhs - n) <= 1e-12 * max(1.0, n)

    qcfg, scfg = DEFAULT_CONFIG, SolverConfig()
    for name, E in [("square", 2.0), ("square", 0.5), ("sech2", 1.2), ("zero", 1.0)]:
        row = sweep_row(make_profile(name).at(E), qcfg, scfg, 2)
        T = row["T_exact"]
        assert abs(row["N_exact"] - (1.0 - T) / T) <= 1e-12


def test_wkb_sanity():
    """9. WKB: on a thick barrier exp/sech^2 ratio in [0.9, 1.1] and wkb-like bound <= T"""
    for params, E in [({"V0": 1.0, "L": 10.0}, 0.5), ({"V0": 2.0, "L": 6.0}, 0.4)]:
        s = make_profile("square", params).at(E)
        w = wkb_estimate(s)
        assert w.penetration_integral >= 5.0
        assert 0.9 <= w.exp_form / w.sech2_form <= 1.1
        assert bound_wkb_like(s).bound <= transmission(s).transmission
    s = make_profile("sech2", {"V0": 40.0, "a": 1.0}).at(5.0)
    w = wkb_estimate(s)
    assert w.penetration_integral >= 5.0
    assert 0.9 <= w.exp_form / w.sech2_form <= 1.1
    assert bound_wkb_like(s).bound <= transmission(s).transmission


def test_determinism():
    """10. determinism: two consecutive runs of the sweep command give byte-identical CSV"""
    cmd = [sys.executable, "-m", "tunnelbound.cli", "sweep", "--potential", "sech2",
           "--emin", "0.3", "--emax", "4", "--n", "8", "--format", "csv"]
    a = subprocess.run(cmd, capture_output=True, timeout=300)
    b = subprocess.run(cmd, capture_output=True, timeout=300)
    assert a.returncode == 0 and b.returncode == 0, a.stderr
    assert a.stdout == b.stdout
    lines = a.stdout.decode().splitlines()
    assert lines[0] == CSV_HEADER and len(lines) == 9
