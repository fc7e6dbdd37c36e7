"""Rigorous sech^2 lower bounds on the transmission probability.

Every bound has the shape T >= sech^2(theta) where theta is an integral
functional of k^2 and of freely chosen positive trial functions. The
functions here evaluate theta for each family, check the structural
assumptions the family relies on, and record the individual terms that
make up theta.

Divergent integrals are not errors: they produce a flagged result with
theta = inf and bound = 0, which is the trivial (but true) statement T >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    AsymmetricAsymptotics,
    DivergentBound,
    ForbiddenRegionPresent,
    InvalidDelta,
    NoConvergence,
    NonPositive,
    PreconditionFailed,
)
from .numerics import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    bracket_roots,
    count_sign_changes,
    grow_window,
    integrate,
)
from .profiles import EnergySlice, forbidden_regions
from .trial import TrialFunction, constant, k_trial, max_cut, tanh_interpolant

__all__ = [
    "BoundResult",
    "ParticleBound",
    "WKBEstimate",
    "sech2",
    "theta_integrand",
    "bound_basic",
    "bound_basic_weak",
    "bound_special",
    "bound_improved",
    "bound_schwartzian",
    "bound_low_energy",
    "bound_old_low_energy",
    "bound_wkb_like",
    "wkb_estimate",
    "bound_delta_mg",
    "to_particle_bound",
    "SPECIAL_CASES",
]

SPECIAL_CASES = ("hconst", "monotone-h", "single-extremum", "delta-cut", "kmin")


def sech2(theta: float) -> float:
    """sech^2 written with exp(-2 theta) so large arguments underflow cleanly."""
    if math.isinf(theta):
        return 0.0
    e = math.exp(-2.0 * abs(theta))
    return 4.0 * e / (1.0 + e) ** 2


@dataclass(frozen=True)
class BoundResult:
    theta: float
    bound: float
    family: str
    params: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    divergent: bool = False

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "theta": self.theta,
            "bound": self.bound,
            "divergent": self.divergent,
            "params": dict(self.params),
            "diagnostics": dict(self.diagnostics),
        }


@dataclass(frozen=True)
class ParticleBound:
    """Upper bound N <= sinh^2(theta) on the produced particle number."""

    n_bound: float
    theta: float


@dataclass(frozen=True)
class WKBEstimate:
    """Semiclassical ESTIMATE of T. Not a bound."""

    sech2_form: float
    exp_form: float
    penetration_integral: float
    no_barrier: bool
    label: str = "ESTIMATE"


def _result(theta, family, params=None, diagnostics=None) -> BoundResult:
    theta = max(float(theta), 0.0)
    return BoundResult(theta, sech2(theta), family, dict(params or {}), dict(diagnostics or {}))


def _divergent(family, params=None, reason="integral diverges") -> BoundResult:
    return BoundResult(math.inf, 0.0, family, dict(params or {}), {"reason": reason}, True)


# ---------------------------------------------------------------- helpers

def _cfg(cfg):
    return cfg or DEFAULT_CONFIG


def _require_symmetric(s: EnergySlice):
    if not s.symmetric:
        raise AsymmetricAsymptotics(
            f"requires k(-inf) = k(+inf), got {s.k_minus:.6g} and {s.k_plus:.6g}")


def _scan(s: EnergySlice, cfg):
    return s.scan(cfg.n_scan)


def _require_single_minimum(s: EnergySlice, cfg):
    """k^2 decreases then increases (or is monotone/flat): one hump in V."""
    x, k2 = _scan(s, cfg)
    d = np.diff(k2)
    atol = 1e-13 * max(1.0, float(np.max(np.abs(k2))))
    sig = np.sign(d[np.abs(d) > atol])
    changes = count_sign_changes(d, atol)
    if changes > 1:
        raise PreconditionFailed("multiple minima of k^2 detected (potential is not single-hump)")
    if changes == 1 and sig[0] > 0:
        raise PreconditionFailed("k^2 has an interior maximum, not a minimum (potential well)")


def _require_nonnegative_potential(s: EnergySlice, cfg):
    x, _ = _scan(s, cfg)
    if np.min(s.excess(x)) < -1e-12 * s.k_inf2:
        raise PreconditionFailed("negative potential region (k^2 exceeds k_inf^2)")


def _k2_min(s: EnergySlice, cfg) -> float:
    return s.k2_extremum("min", cfg)[1]


def _check_positive(f: TrialFunction, s: EnergySlice, cfg, what):
    x, _ = _scan(s, cfg)
    f.check_positive(x, what)


def _integration_window(s: EnergySlice, integrand, cfg):
    with np.errstate(all="ignore"):
        return grow_window(integrand, cfg.tail_tol, *s.window)


def _splits(s: EnergySlice, lo, hi, kink_fns, extra, cfg):
    pts = set(b for b in s.breakpoints if lo < b < hi)
    pts.update(b for b in extra if lo < b < hi)
    known = sorted(pts)
    for fn in kink_fns:
        pts.update(bracket_roots(fn, lo, hi, cfg.n_scan, cfg.root_tol, known))
    return sorted(pts)


def _theta_integral(s: EnergySlice, integrand, cfg, kink_fns=(), extra_splits=()):
    """Integrate over the real line; returns None when the tail does not decay."""
    try:
        lo, hi = _integration_window(s, integrand, cfg)
    except NoConvergence:
        return None
    splits = _splits(s, lo, hi, kink_fns, extra_splits, cfg)
    return integrate(integrand, lo, hi, splits, cfg), (lo, hi)


def _one_sided(f, b):
    d = 1e-9 * (1.0 + abs(b))
    return float(f(np.array(b - d))), float(f(np.array(b + d)))


def _log_jumps(h: TrialFunction, lo, hi):
    total = 0.0
    for b in h.breakpoints:
        if lo < b < hi:
            left, right = _one_sided(h.value, b)
            total += abs(math.log(right) - math.log(left))
    return total


def _log_variation(h: TrialFunction, lo, hi, cfg):
    """Total variation of ln h over the real line, jumps included."""
    cuts = set(b for b in h.breakpoints if lo < b < hi)
    cuts.update(bracket_roots(h.d1, lo, hi, cfg.n_scan, cfg.root_tol, sorted(cuts)))
    inner = np.array(sorted(c for c in cuts if lo < c < hi))
    d = 1e-9 * (1.0 + np.abs(inner))
    starts = np.concatenate([[lo], inner + d])
    ends = np.concatenate([inner - d, [hi]])
    log_h = lambda x: np.log(np.asarray(h.value(x), dtype=float))
    tv = float(np.sum(np.abs(log_h(ends) - log_h(starts))))
    tv += _log_jumps(h, lo, hi)
    if h.limits is not None:
        tv += abs(float(log_h(np.array(lo))) - math.log(h.limits[0]))
        tv += abs(math.log(h.limits[1]) - float(log_h(np.array(hi))))
    return tv


def _delta_gap(s: EnergySlice, delta):
    """delta^2 - k^2 as a function of x, exact in the tails when delta = min k(+-inf)."""
    p = s.profile
    v_top = max(p.v_minus_inf, p.v_plus_inf)
    d2 = delta * delta
    offset = d2 - (s.energy - v_top)
    if abs(offset) <= 1e-14 * d2:
        offset = 0.0
    return lambda x: offset + (p.v(x) - v_top)


def _default_h(s: EnergySlice) -> TrialFunction:
    if s.symmetric:
        return constant(s.k_inf)
    p = s.profile
    return tanh_interpolant(s.k_minus, s.k_plus, p.center, p.scale)


# ---------------------------------------------------------------- baseline

def theta_integrand(s: EnergySlice, h: TrialFunction) -> Callable:
    """Pointwise sqrt(h'^2 + (k^2 - h^2)^2) / (2h)."""

    def f(x):
        hv = h.value(x)
        if np.any(hv <= 0):
            raise NonPositive("h must be positive")
        return np.hypot(h.d1(x), s.k2(x) - hv * hv) / (2.0 * hv)

    return f


def bound_basic(s: EnergySlice, h: TrialFunction | None = None,
                cfg: QuadratureConfig | None = None) -> BoundResult:
    """T >= sech^2( int sqrt(h'^2 + (k^2-h^2)^2) / (2h) dx )."""
    cfg = _cfg(cfg)
    h = h or _default_h(s)
    _check_positive(h, s, cfg, "h")
    f = theta_integrand(s, h)
    out = _theta_integral(s, f, cfg, kink_fns=(lambda x: s.k2(x) - h.value(x) ** 2,),
                          extra_splits=h.breakpoints)
    params = {"h": h.family, **{f"h.{k}": v for k, v in h.params.items()}}
    if out is None:
        return _divergent("basic", params)
    val, (lo, hi) = out
    jumps = 0.5 * _log_jumps(h, lo, hi)
    return _result(val + jumps, "basic", params, {"integral": val, "jump_term": jumps})


def bound_basic_weak(s: EnergySlice, h: TrialFunction | None = None,
                     cfg: QuadratureConfig | None = None) -> BoundResult:
    """Triangle-inequality form: theta = (1/2) int |ln(h)'| + |k^2-h^2|/h dx.

    The |ln(h)'| part is the total variation of ln h, evaluated exactly on
    monotone pieces so jumps in h contribute |delta ln h|.
    """
    cfg = _cfg(cfg)
    h = h or _default_h(s)
    _check_positive(h, s, cfg, "h")

    def dist(x):
        hv = h.value(x)
        return np.abs(s.k2(x) - hv * hv) / (2.0 * hv)

    def full(x):
        return 0.5 * np.abs(h.d1(x) / h.value(x)) + dist(x)

    params = {"h": h.family, **{f"h.{k}": v for k, v in h.params.items()}}
    try:
        lo, hi = _integration_window(s, full, cfg)
    except NoConvergence:
        return _divergent("basic-weak", params)
    splits = _splits(s, lo, hi, (lambda x: s.k2(x) - h.value(x) ** 2,), h.breakpoints, cfg)
    dist_int = integrate(dist, lo, hi, splits, cfg)
    log_term = 0.5 * _log_variation(h, lo, hi, cfg)
    return _result(log_term + dist_int, "basic-weak", params,
                   {"log_term": log_term, "integral_term": dist_int})


# ---------------------------------------------------------------- special cases

def _hconst_integral(s: EnergySlice, cfg, exclude=()):
    """int |k_inf^2 - k^2| / (2 k_inf) dx, optionally skipping intervals."""
    two_k = 2.0 * s.k_inf

    if exclude:
        def f(x):
            x = np.asarray(x, dtype=float)
            inside = np.zeros(x.shape, dtype=bool)
            for a, b in exclude:
                inside |= (x > a) & (x < b)
            return np.where(inside, 0.0, np.abs(s.excess(x)) / two_k)
    else:
        def f(x):
            return np.abs(s.excess(x)) / two_k

    extra = [e for iv in exclude for e in iv]
    out = _theta_integral(s, f, cfg, kink_fns=(s.excess,), extra_splits=extra)
    if out is None:
        raise DivergentBound("constant-h integral diverges")
    return out[0]


def _monotone_default_h(s: EnergySlice, cfg) -> TrialFunction:
    x, k2 = _scan(s, cfg)
    d = np.diff(k2)
    if np.min(k2) > 0 and count_sign_changes(d, 1e-13 * max(1.0, float(np.max(np.abs(k2))))) == 0:
        return k_trial(s)
    return _default_h(s)


def _trial_extremum(h: TrialFunction, s: EnergySlice, cfg):
    x, _ = _scan(s, cfg)
    hv = h.value(x)
    d = np.diff(hv)
    atol = 1e-13 * float(np.max(hv))
    changes = count_sign_changes(d, atol)
    if changes > 1:
        raise PreconditionFailed("h has more than one extremum")
    sig = np.sign(d[np.abs(d) > atol])
    if changes == 0:
        return float(hv[0])
    return float(np.min(hv) if sig[0] < 0 else np.max(hv))


def bound_special(s: EnergySlice, case: str, params: dict | None = None,
                  h: TrialFunction | None = None, cfg: QuadratureConfig | None = None) -> BoundResult:
    """Closed-form specialisations of the triangle-inequality bound.

    ``case`` is one of ``hconst``, ``monotone-h``, ``single-extremum``,
    ``delta-cut`` (needs ``params["delta"]``) and ``kmin``.
    """
    cfg = _cfg(cfg)
    params = dict(params or {})
    km, kp = s.k_minus, s.k_plus

    if case == "hconst":
        _require_symmetric(s)
        try:
            val = _hconst_integral(s, cfg)
        except DivergentBound:
            return _divergent("hconst")
        return _result(val, "hconst", {"h": s.k_inf}, {"integral_term": val})

    if case in ("monotone-h", "single-extremum"):
        if h is None:
            if case == "monotone-h":
                h = _monotone_default_h(s, cfg)
            else:
                h = _single_extremum_default_h(s, cfg)
        _check_positive(h, s, cfg, "h")
        if h.limits is not None:
            if not (math.isclose(h.limits[0], km, rel_tol=1e-9)
                    and math.isclose(h.limits[1], kp, rel_tol=1e-9)):
                raise PreconditionFailed("h must approach k(-inf) and k(+inf) at the two ends")
        if case == "monotone-h":
            x, _ = _scan(s, cfg)
            hv = h.value(x)
            if count_sign_changes(np.diff(hv), 1e-13 * float(np.max(hv))) > 0:
                raise PreconditionFailed("h is not monotone")
            log_term = 0.5 * abs(math.log(kp / km))
            extra = {}
        else:
            h_ext = _trial_extremum(h, s, cfg)
            log_term = 0.5 * abs(math.log(kp * km / h_ext ** 2))
            extra = {"h_ext": h_ext}

        def dist(x):
            hv = h.value(x)
            return np.abs(s.k2(x) - hv * hv) / (2.0 * hv)

        out = _theta_integral(s, dist, cfg, kink_fns=(lambda x: s.k2(x) - h.value(x) ** 2,),
                              extra_splits=h.breakpoints)
        p = {"h": h.family, **{f"h.{k}": v for k, v in h.params.items()}, **extra}
        if out is None:
            return _divergent(case, p)
        return _result(log_term + out[0], case, p,
                       {"log_term": log_term, "integral_term": out[0]})

    if case == "delta-cut":
        if "delta" not in params:
            raise ValueError("delta-cut needs params['delta']")
        delta = float(params["delta"])
        _require_single_minimum(s, cfg)
        k2min = _k2_min(s, cfg)
        if not delta > 0:
            raise InvalidDelta("delta must be positive")
        if delta ** 2 < k2min * (1.0 - 1e-12) or delta > min(km, kp) * (1.0 + 1e-12):
            raise InvalidDelta(
                f"need k2_min <= delta^2 <= k(+-inf)^2; got delta^2={delta ** 2:.6g}, "
                f"k2_min={k2min:.6g}, min k(+-inf)^2={min(km, kp) ** 2:.6g}")
        log_term = 0.5 * math.log(kp * km / delta ** 2)
        gap = _delta_gap(s, delta)

        def cut(x):
            return np.maximum(gap(x), 0.0) / (2.0 * delta)

        out = _theta_integral(s, cut, cfg, kink_fns=(gap,))
        if out is None:
            return _divergent("delta-cut", {"delta": delta})
        integral = out[0]
        return _result(log_term + integral, "delta-cut", {"delta": delta},
                       {"log_term": log_term, "integral_term": integral})

    if case == "kmin":
        _require_single_minimum(s, cfg)
        k2min = _k2_min(s, cfg)
        if not k2min > 0:
            raise ForbiddenRegionPresent("kmin case needs k^2 > 0 everywhere")
        log_term = 0.5 * math.log(kp * km / k2min)
        return _result(log_term, "kmin", {"k2_min": k2min}, {"log_term": log_term})

    raise ValueError(f"unknown special case {case!r}; choose from {SPECIAL_CASES}")


def _single_extremum_default_h(s: EnergySlice, cfg) -> TrialFunction:
    _require_single_minimum(s, cfg)
    k2min = _k2_min(s, cfg)
    if k2min > 0:
        return k_trial(s)
    return max_cut(s, 0.5 * min(s.k_minus, s.k_plus))


# ---------------------------------------------------------------- improved forms

def _improved_integrand(s: EnergySlice, form: str, f1: TrialFunction, f2: TrialFunction):
    if form == "HJ":
        H, J = f1, f2

        def f(x):
            Hv, Jv = H.value(x), J.value(x)
            a = H.d1(x) + 2.0 * Hv * J.d1(x) / Jv
            b = s.k2(x) + J.d2(x) / Jv - Hv * Hv
            return np.hypot(a, b) / (2.0 * Hv)

        def kink(x):
            Hv, Jv = H.value(x), J.value(x)
            return s.k2(x) + J.d2(x) / Jv - Hv * Hv

    elif form == "hJ":
        h, J = f1, f2

        def f(x):
            hv, Jv = h.value(x), J.value(x)
            b = Jv * Jv * (s.k2(x) + J.d2(x) / Jv) - hv * hv / (Jv * Jv)
            return np.hypot(h.d1(x), b) / (2.0 * hv)

        def kink(x):
            hv, Jv = h.value(x), J.value(x)
            return Jv * Jv * (s.k2(x) + J.d2(x) / Jv) - hv * hv / (Jv * Jv)

    elif form == "hj":
        h, j = f1, f2

        def _b(x):
            hv, jv = h.value(x), j.value(x)
            g = j.d1(x) / jv
            return (s.k2(x) - 0.5 * j.d2(x) / jv + 0.75 * g * g) / jv - jv * hv * hv

        def f(x):
            return np.hypot(h.d1(x), _b(x)) / (2.0 * h.value(x))

        kink = _b
    else:
        raise ValueError("form must be one of 'HJ', 'hJ', 'hj'")
    return f, kink


def _flat_derivatives(f: TrialFunction, s: EnergySlice, cfg) -> bool:
    """f' and f'' vanish at both ends (the J-side convergence conditions)."""
    def dev(x):
        scale = np.abs(f.value(x))
        return np.maximum(np.abs(f.d1(x)), np.abs(f.d2(x))) / np.maximum(scale, 1e-300)

    try:
        grow_window(dev, cfg.tail_tol, *s.window)
    except NoConvergence:
        return False
    return True


def bound_improved(s: EnergySlice, form: str, f1: TrialFunction, f2: TrialFunction,
                   cfg: QuadratureConfig | None = None) -> BoundResult:
    """Bound with two free positive functions.

    form ``HJ``: (f1, f2) = (H, J); ``hJ``: (h, J); ``hj``: (h, j) with
    j = X'. The three forms coincide under j = J^-2 and h = H J^2.
    """
    cfg = _cfg(cfg)
    _check_positive(f1, s, cfg, "first trial function")
    _check_positive(f2, s, cfg, "second trial function")
    f, kink = _improved_integrand(s, form, f1, f2)
    params = {"form": form, "f1": f1.family, "f2": f2.family,
              **{f"f1.{k}": v for k, v in f1.params.items()},
              **{f"f2.{k}": v for k, v in f2.params.items()}}
    if not _flat_derivatives(f2, s, cfg):
        return _divergent(f"improved-{form}", params, "second trial function does not flatten")
    out = _theta_integral(s, f, cfg, kink_fns=(kink,),
                          extra_splits=tuple(f1.breakpoints) + tuple(f2.breakpoints))
    family = f"improved-{form}"
    if out is None:
        return _divergent(family, params)
    return _result(out[0], family, params, {"integral": out[0]})


# ---------------------------------------------------------------- applications

def _schwartzian_density(s: EnergySlice):
    """(1/sqrt k) (1/sqrt k)'' written in q = k^2 and its derivatives."""

    def f(x):
        q, g1, g2 = s.k2(x), s.dk2(x), s.d2k2(x)
        return -0.25 * g2 / q ** 1.5 + 5.0 / 16.0 * g1 * g1 / q ** 2.5

    return f


def bound_schwartzian(s: EnergySlice, cfg: QuadratureConfig | None = None) -> BoundResult:
    cfg = _cfg(cfg)
    _require_symmetric(s)
    if not _k2_min(s, cfg) > 0:
        raise ForbiddenRegionPresent("Schwartzian bound fails with a classically forbidden region")
    if not s.profile.smooth:
        raise PreconditionFailed("Schwartzian bound needs a twice-differentiable potential")
    dens = _schwartzian_density(s)

    def f(x):
        return 0.5 * np.abs(dens(x))

    out = _theta_integral(s, f, cfg, kink_fns=(dens,))
    if out is None:
        return _divergent("schwartzian")
    return _result(out[0], "schwartzian", {}, {"integral": out[0]})


def bound_low_energy(s: EnergySlice, cfg: QuadratureConfig | None = None) -> BoundResult:
    """theta = sqrt(V_max/E) + int sqrt(V) dx, in k language:
    (sqrt(k_inf^2 - k^2))_max / k_inf + int sqrt(k_inf^2 - k^2) dx."""
    cfg = _cfg(cfg)
    _require_symmetric(s)
    _require_nonnegative_potential(s, cfg)
    _require_single_minimum(s, cfg)
    chi_max = math.sqrt(max(s.k_inf2 - _k2_min(s, cfg), 0.0))
    peak = chi_max / s.k_inf

    def chi(x):
        return np.sqrt(np.maximum(s.excess(x), 0.0))

    out = _theta_integral(s, chi, cfg)
    if out is None:
        return _divergent("low-energy")
    return _result(peak + out[0], "low-energy", {},
                   {"peak_term": peak, "integral_term": out[0]})


def bound_old_low_energy(s: EnergySlice, cfg: QuadratureConfig | None = None) -> BoundResult:
    """chi = 0 companion: theta = int V dx / (2 sqrt E)."""
    cfg = _cfg(cfg)
    _require_symmetric(s)
    _require_nonnegative_potential(s, cfg)
    try:
        val = _hconst_integral(s, cfg)
    except DivergentBound:
        return _divergent("old-low-energy")
    return _result(val, "old-low-energy", {}, {"integral_term": val})


def bound_wkb_like(s: EnergySlice, cfg: QuadratureConfig | None = None) -> BoundResult:
    """theta = int_{k^2<0} kappa + kappa_max/k_inf + k_inf L/2
    + int_{k^2>0} |k_inf^2 - k^2| / (2 k_inf)."""
    cfg = _cfg(cfg)
    _require_symmetric(s)
    fr = forbidden_regions(s, None, cfg)
    if not fr.empty:
        _require_single_minimum(s, cfg)
    kinf = s.k_inf
    try:
        allowed = _hconst_integral(s, cfg, exclude=fr.intervals)
    except DivergentBound:
        return _divergent("wkb-like")
    terms = {
        "penetration_term": fr.penetration_integral,
        "peak_term": fr.kappa_max / kinf,
        "width_term": 0.5 * kinf * fr.total_width,
        "allowed_term": allowed,
    }
    return _result(sum(terms.values()), "wkb-like",
                   {"barrier_width": fr.total_width, "kappa_max": fr.kappa_max}, terms)


def wkb_estimate(s: EnergySlice, cfg: QuadratureConfig | None = None) -> WKBEstimate:
    """Standard semiclassical estimates sech^2(I + ln 2) and exp(-2 I)."""
    cfg = _cfg(cfg)
    fr = forbidden_regions(s, None, cfg)
    if fr.empty:
        return WKBEstimate(1.0, 1.0, 0.0, True)
    I = fr.penetration_integral
    return WKBEstimate(sech2(I + math.log(2.0)), math.exp(-2.0 * I), I, False)


def bound_delta_mg(s: EnergySlice, delta: float, cfg: QuadratureConfig | None = None) -> BoundResult:
    """theta = ln(k+ k- / delta^2)/2 + (sqrt(delta^2-k^2))_max / delta
    + int_{delta^2 > k^2} sqrt(delta^2 - k^2) dx."""
    cfg = _cfg(cfg)
    delta = float(delta)
    if not 0 < delta <= min(s.k_minus, s.k_plus) * (1.0 + 1e-12):
        raise InvalidDelta(f"need 0 < delta <= min k(+-inf) = {min(s.k_minus, s.k_plus):.6g}")
    _require_single_minimum(s, cfg)
    d2 = delta ** 2
    k2min = _k2_min(s, cfg)
    log_term = 0.5 * math.log(s.k_plus * s.k_minus / d2)
    peak = math.sqrt(max(d2 - k2min, 0.0)) / delta

    gap = _delta_gap(s, delta)

    def chi(x):
        return np.sqrt(np.maximum(gap(x), 0.0))

    if d2 > k2min:
        out = _theta_integral(s, chi, cfg, kink_fns=(gap,))
        if out is None:
            return _divergent("delta-mg", {"delta": delta})
        integral = out[0]
    else:
        integral = 0.0
    return _result(log_term + peak + integral, "delta-mg", {"delta": delta},
                   {"log_term": log_term, "peak_term": peak, "integral_term": integral})


def to_particle_bound(b: BoundResult) -> ParticleBound:
    """N <= sinh^2(theta), the time-domain reading of T >= sech^2(theta)."""
    if b.divergent or math.isinf(b.theta):
        raise DivergentBound("no finite particle-number bound from a divergent theta")
    return ParticleBound(math.sinh(b.theta) ** 2, b.theta)
