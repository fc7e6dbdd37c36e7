"""Deterministic parameter searches that tighten the bounds, and the
best-of-all-families selector.

Nothing here is random: Delta is found by golden section (or a fixed grid
when theta(Delta) is not unimodal) and trial-function parameters by a
compass search with a fixed polling order, so reruns give identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .bounds import (
    BoundResult,
    _default_h,
    _k2_min,
    bound_basic,
    bound_delta_mg,
    bound_improved,
    bound_low_energy,
    bound_old_low_energy,
    bound_schwartzian,
    bound_special,
    bound_wkb_like,
)
from .errors import (
    NonPositive,
    PreconditionFailed,
    RegionResolutionError,
    ToleranceNotMet,
    TunnelBoundError,
)
from .numerics import DEFAULT_CONFIG, QuadratureConfig, golden_section
from .profiles import EnergySlice
from .trial import tanh_interpolant

__all__ = [
    "OptimizationReport",
    "optimize_delta",
    "optimize_trial",
    "best_bound",
    "DELTA_FAMILIES",
    "TRIAL_FAMILIES",
]

DELTA_FAMILIES = ("delta-cut", "delta-mg")
TRIAL_FAMILIES = ("HJ-bump", "h-bump")
DEFAULT_BUDGET = 200

# errors that mean "this parameter point is not admissible", scored as theta = inf
_INFEASIBLE = (PreconditionFailed, NonPositive, ToleranceNotMet, RegionResolutionError,
               FloatingPointError, ZeroDivisionError, ValueError)


@dataclass(frozen=True)
class OptimizationReport:
    best_params: dict
    best_bound: BoundResult
    evaluations: int
    trace: list = field(default_factory=list)  # (params, theta) in evaluation order
    budget_exhausted: bool = False

    def as_dict(self) -> dict:
        return {
            "best_params": dict(self.best_params),
            "best_bound": self.best_bound.as_dict(),
            "evaluations": self.evaluations,
            "budget_exhausted": self.budget_exhausted,
        }


class _Recorder:
    """Caches evaluations by parameter tuple and keeps the trace."""

    def __init__(self, evaluate: Callable[[dict], BoundResult], names):
        self.evaluate = evaluate
        self.names = tuple(names)
        self.cache: dict[tuple, BoundResult | None] = {}
        self.trace: list[tuple[dict, float]] = []

    def theta(self, values) -> float:
        key = tuple(float(v) for v in values)
        if key not in self.cache:
            params = dict(zip(self.names, key))
            try:
                res = self.evaluate(params)
            except _INFEASIBLE:
                res = None
            self.cache[key] = res
            self.trace.append((params, math.inf if res is None else res.theta))
        res = self.cache[key]
        return math.inf if res is None else res.theta

    @property
    def evaluations(self) -> int:
        return len(self.trace)

    def best(self):
        finite = [(t, i) for i, (_, t) in enumerate(self.trace)]
        theta, i = min(finite)
        params = self.trace[i][0]
        return params, self.cache[tuple(params[n] for n in self.names)]


# ---------------------------------------------------------------- Delta

def _delta_interval(s: EnergySlice, family: str, cfg) -> tuple[float, float]:
    upper = min(s.k_minus, s.k_plus)
    k2min = _k2_min(s, cfg)
    if family == "delta-cut":
        if k2min > upper * upper * (1.0 + 1e-12):
            raise PreconditionFailed("empty Delta interval: k2_min exceeds min k(+-inf)^2")
        lower = math.sqrt(max(k2min, 0.0))
    else:
        lower = math.sqrt(k2min) if k2min > 0 else 0.0
    lower = min(lower, upper)
    if lower == 0.0:
        # theta ~ -ln(Delta) as Delta -> 0, so the optimum is away from zero
        lower = 1e-6 * upper
    return lower, upper


def _is_unimodal(values) -> bool:
    v = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(v)):
        return False
    d = np.diff(v)
    scale = 1e-12 * max(1.0, float(np.max(np.abs(v))))
    signs = np.sign(d[np.abs(d) > scale])
    # non-increasing then non-decreasing
    return not np.any(np.diff(signs) < 0)


def optimize_delta(s: EnergySlice, family: str = "delta-mg", cfg: QuadratureConfig | None = None,
                   n_probe: int = 9, n_grid: int = 64, xtol: float = 1e-6) -> OptimizationReport:
    """Minimise theta(Delta) over the admissible Delta interval.

    Nine probes decide whether theta(Delta) looks unimodal; if so a golden
    section search runs on the probe bracket, otherwise a 64-point grid scan
    is refined locally around its best point.
    """
    cfg = cfg or DEFAULT_CONFIG
    if family == "delta-mg":
        def evaluate(p):
            return bound_delta_mg(s, p["delta"], cfg)
    elif family == "delta-cut":
        def evaluate(p):
            return bound_special(s, "delta-cut", {"delta": p["delta"]}, cfg=cfg)
    else:
        raise ValueError(f"family must be one of {DELTA_FAMILIES}")

    lo, hi = _delta_interval(s, family, cfg)
    rec = _Recorder(evaluate, ("delta",))
    f = lambda d: rec.theta([d])

    if hi - lo <= 1e-12 * hi:
        f(hi)
    else:
        probes = np.linspace(lo, hi, n_probe)
        vals = [f(d) for d in probes]
        if _is_unimodal(vals):
            i = int(np.argmin(vals))
            a, b = probes[max(i - 1, 0)], probes[min(i + 1, n_probe - 1)]
        else:
            grid = np.linspace(lo, hi, n_grid)
            gvals = [f(d) for d in grid]
            i = int(np.argmin(gvals))
            a, b = grid[max(i - 1, 0)], grid[min(i + 1, n_grid - 1)]
        if b > a:
            golden_section(f, float(a), float(b), tol=xtol * hi)

    params, res = rec.best()
    if res is None:
        raise PreconditionFailed(f"no admissible Delta for {family} on this slice")
    return OptimizationReport(params, res, rec.evaluations, rec.trace, False)


# ---------------------------------------------------------------- trial families

def _default_box(s: EnergySlice) -> dict[str, tuple[float, float]]:
    p = s.profile
    w = p.scale
    return {
        "A": (-0.9, 2.0),
        "x0": (p.center - 2.0 * w, p.center + 2.0 * w),
        "w": (0.1 * w, 10.0 * w),
    }


def _trial_evaluator(s: EnergySlice, family: str, cfg):
    base = _default_h(s)
    bp = base.params

    if family == "HJ-bump":
        def evaluate(p):
            J = tanh_interpolant(1.0, 1.0, p.get("x0", s.profile.center),
                                 p.get("w", s.profile.scale), p["A"])
            return bound_improved(s, "HJ", base, J, cfg)
    elif family == "h-bump":
        def evaluate(p):
            left = bp.get("left", bp.get("c"))
            right = bp.get("right", bp.get("c"))
            h = tanh_interpolant(left, right, p.get("x0", bp.get("x0", s.profile.center)),
                                 p.get("w", bp.get("w", s.profile.scale)), p["A"])
            return bound_basic(s, h, cfg)
    else:
        raise ValueError(f"family must be one of {TRIAL_FAMILIES}")
    return evaluate


def optimize_trial(s: EnergySlice, family: str = "HJ-bump",
                   param_box: Mapping[str, tuple[float, float]] | None = None,
                   budget: int = DEFAULT_BUDGET, cfg: QuadratureConfig | None = None,
                   start: Mapping[str, float] | None = None,
                   min_step: float = 1e-6) -> OptimizationReport:
    """Compass search over a parametric trial family.

    ``HJ-bump`` uses H = the default h and J = 1 + A sech^2((x - x0)/w);
    ``h-bump`` adds A sech^2((x - x0)/w) to the default h. The start point
    has A = 0, i.e. the baseline bound, so the result is never worse than
    the baseline. Points that break positivity or convergence score inf.
    """
    cfg = cfg or DEFAULT_CONFIG
    if budget < 1:
        raise ValueError("budget must be at least 1")
    box = dict(_default_box(s))
    if param_box:
        unknown = set(param_box) - set(box)
        if unknown:
            raise ValueError(f"unknown trial parameter(s): {', '.join(sorted(unknown))}")
        box.update(param_box)
    names = [n for n in ("A", "x0", "w") if n in box]
    lo = np.array([box[n][0] for n in names], dtype=float)
    hi = np.array([box[n][1] for n in names], dtype=float)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) and np.all(hi >= lo)):
        raise ValueError("parameter box must be finite with lo <= hi")

    default_start = {"A": 0.0, "x0": s.profile.center, "w": s.profile.scale}
    default_start.update(start or {})
    x = np.clip(np.array([default_start[n] for n in names], dtype=float), lo, hi)

    rec = _Recorder(_trial_evaluator(s, family, cfg), names)
    fx = rec.theta(x)
    step = 0.25 * (hi - lo)
    exhausted = False
    while np.any(step > min_step * np.maximum(hi - lo, 1e-300)):
        improved = False
        for i in range(len(names)):
            for sign in (1.0, -1.0):
                if step[i] <= 0:
                    continue
                if rec.evaluations >= budget:
                    exhausted = True
                    break
                y = x.copy()
                y[i] = min(max(y[i] + sign * step[i], lo[i]), hi[i])
                if y[i] == x[i]:
                    continue
                fy = rec.theta(y)
                if fy < fx:
                    x, fx, improved = y, fy, True
                    break
            if exhausted or improved:
                break
        if exhausted:
            break
        if not improved:
            step = 0.5 * step

    params, res = rec.best()
    if res is None:
        raise PreconditionFailed(f"no admissible point for {family} on this slice")
    return OptimizationReport(params, res, rec.evaluations, rec.trace, exhausted)


# ---------------------------------------------------------------- best of all

def _candidates(s: EnergySlice, cfg, budget, optimize):
    yield "hconst", lambda: bound_special(s, "hconst", cfg=cfg)
    yield "monotone-h", lambda: bound_special(s, "monotone-h", cfg=cfg)
    yield "single-extremum", lambda: bound_special(s, "single-extremum", cfg=cfg)
    yield "kmin", lambda: bound_special(s, "kmin", cfg=cfg)
    yield "basic", lambda: bound_basic(s, None, cfg)
    yield "schwartzian", lambda: bound_schwartzian(s, cfg)
    yield "low-energy", lambda: bound_low_energy(s, cfg)
    yield "old-low-energy", lambda: bound_old_low_energy(s, cfg)
    yield "wkb-like", lambda: bound_wkb_like(s, cfg)
    yield "delta-mg", lambda: bound_delta_mg(s, min(s.k_minus, s.k_plus), cfg)
    if optimize:
        yield "delta-mg-opt", lambda: optimize_delta(s, "delta-mg", cfg).best_bound
        yield "delta-cut-opt", lambda: optimize_delta(s, "delta-cut", cfg).best_bound
        if budget > 0:
            yield "HJ-bump-opt", lambda: optimize_trial(s, "HJ-bump", budget=budget,
                                                        cfg=cfg).best_bound
            yield "h-bump-opt", lambda: optimize_trial(s, "h-bump", budget=budget,
                                                       cfg=cfg).best_bound


def best_bound(s: EnergySlice, cfg: QuadratureConfig | None = None, budget: int = DEFAULT_BUDGET,
               optimize: bool = True) -> BoundResult:
    """Largest bound over every family whose preconditions hold.

    ``diagnostics["candidates"]`` maps each family to its bound, or to the
    reason it was skipped. With no admissible family the flagged trivial
    bound 0 is returned.
    """
    cfg = cfg or DEFAULT_CONFIG
    table: dict[str, float | str] = {}
    best: tuple[str, BoundResult] | None = None
    for name, run in _candidates(s, cfg, budget, optimize):
        try:
            res = run()
        except TunnelBoundError as exc:
            table[name] = f"skipped: {type(exc).__name__}: {exc}"
            continue
        table[name] = res.bound
        # earlier (simpler) families keep ties
        if best is None or res.bound > best[1].bound + 1e-12:
            best = (name, res)
    if best is None:
        return BoundResult(math.inf, 0.0, "best", {}, {"candidates": table}, True)
    name, res = best
    diag = {"winner": name, "theta": res.theta, "candidates": table}
    return BoundResult(res.theta, res.bound, "best", {"winner": name, **res.params}, diag,
                       res.divergent)
