"""Command-line front end.

    tunnelbound sweep      energy sweep, CSV or JSON rows
    tunnelbound bound      one bound family at one energy, JSON
    tunnelbound invariance Miller-Good transmission check
    tunnelbound corpus     list the built-in potentials

Exit codes: 0 ok, 1 numerical failure, 2 usage error, 3 precondition failed.
Results go to stdout, warnings to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import fields

import numpy as np

from . import __version__
from .bounds import (
    bound_basic,
    bound_basic_weak,
    bound_delta_mg,
    bound_low_energy,
    bound_old_low_energy,
    bound_schwartzian,
    bound_special,
    bound_wkb_like,
    wkb_estimate,
)
from .errors import (
    DivergentAsymptotics,
    InvalidEnergy,
    NonPositive,
    PreconditionFailed,
    TunnelBoundError,
)
from .millergood import verify_invariance
from .numerics import QuadratureConfig
from .optimize import DEFAULT_BUDGET, best_bound, optimize_delta, optimize_trial
from .profiles import FAMILIES, family_defaults, make_profile
from .solver import SolverConfig, oracle_transmission, transmission
from .trial import TrialFunction, constant, sech_bump, tanh_interpolant

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3

CSV_HEADER = ("E,T_exact,R_exact,unitarity_defect,b_hconst,b_low_energy,b_wkb_like,"
              "b_delta_mg,b_schwartzian,b_best,N_exact,N_bound_best")

BOUND_FAMILIES = (
    "basic", "basic-weak", "hconst", "monotone-h", "single-extremum", "delta-cut", "kmin",
    "schwartzian", "low-energy", "old-low-energy", "wkb-like", "delta-mg", "HJ-bump",
    "h-bump", "best", "wkb-estimate",
)
J_FAMILIES = ("identity", "constant", "bump", "interp", "growing")

_QUAD_KEYS = {f.name: f.type for f in fields(QuadratureConfig)}
_SOLVER_KEYS = ("n_init", "refine_tol", "max_refine")
_OTHER_KEYS = ("budget", "tol")
CONFIG_KEYS = tuple(_QUAD_KEYS) + _SOLVER_KEYS + _OTHER_KEYS
_INT_KEYS = {"max_depth", "n_scan", "n_init", "max_refine", "budget"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers

def parse_params(text: str | None) -> dict[str, float]:
    """``k1=v1,k2=v2`` -> {k1: v1, k2: v2}."""
    out: dict[str, float] = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"bad parameter {item!r}; expected key=value")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"parameter {key.strip()!r} is not a number: {value!r}") from None
    return out


def read_config(path: str | None) -> dict[str, float]:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out: dict[str, float] = {}
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise UsageError(f"{path}:{n}: expected 'key = value'")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown config key {key!r}")
        try:
            out[key] = int(value) if key in _INT_KEYS else float(value)
        except ValueError:
            raise UsageError(f"{path}:{n}: {key} is not a number: {value.strip()!r}") from None
    return out


def _settings(args) -> dict:
    """Config file values overridden by any flag given on the command line."""
    merged = read_config(getattr(args, "config", None))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _quad_cfg(settings) -> QuadratureConfig:
    kw = {k: settings[k] for k in _QUAD_KEYS if k in settings}
    try:
        return QuadratureConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _solver_cfg(settings) -> SolverConfig:
    kw = {k: settings[k] for k in _SOLVER_KEYS if k in settings}
    try:
        return SolverConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _profile(args):
    try:
        return make_profile(args.potential, parse_params(args.params))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _slice(profile, energy):
    try:
        return profile.at(float(energy))
    except InvalidEnergy as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------- formatting

def fmt(value) -> str:
    """Scientific notation with 12 significant digits; NaN for missing."""
    if value is None or not math.isfinite(value):
        return "NaN"
    return f"{value:.11e}"


def _clean(obj):
    """Make a structure JSON-safe and deterministic (non-finite -> null)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def _dump(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False)


# ---------------------------------------------------------------- sweep

def _bound_value(run):
    try:
        res = run()
    except TunnelBoundError:
        return None
    return None if res.divergent else res.bound


def sweep_row(s, qcfg, scfg, budget) -> dict:
    sr = transmission(s, scfg)
    T = sr.transmission
    best = best_bound(s, qcfg, budget)
    row = {
        "E": s.energy,
        "T_exact": T,
        "R_exact": sr.reflection,
        "unitarity_defect": sr.unitarity_defect,
        "b_hconst": _bound_value(lambda: bound_special(s, "hconst", cfg=qcfg)),
        "b_low_energy": _bound_value(lambda: bound_low_energy(s, qcfg)),
        "b_wkb_like": _bound_value(lambda: bound_wkb_like(s, qcfg)),
        "b_delta_mg": _bound_value(lambda: optimize_delta(s, "delta-mg", qcfg).best_bound),
        "b_schwartzian": _bound_value(lambda: bound_schwartzian(s, qcfg)),
        "b_best": None if best.divergent else best.bound,
        "N_exact": (1.0 - T) / T if T > 0 else None,
        "N_bound_best": None if best.divergent else math.sinh(best.theta) ** 2,
        "best_family": best.params.get("winner"),
    }
    return row


def _energies(args):
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if not args.emax > args.emin:
        raise UsageError("--emax must exceed --emin")
    if args.spacing == "log":
        if args.emin <= 0:
            raise UsageError("log spacing needs --emin > 0")
        return np.geomspace(args.emin, args.emax, args.n)
    return np.linspace(args.emin, args.emax, args.n)


def cmd_sweep(args, out=sys.stdout, err=sys.stderr) -> int:
    settings = _settings(args)
    qcfg, scfg = _quad_cfg(settings), _solver_cfg(settings)
    budget = int(settings.get("budget", DEFAULT_BUDGET))
    profile = _profile(args)
    energies = _energies(args)
    vtop = max(profile.v_minus_inf, profile.v_plus_inf)
    if not args.emin > vtop:
        raise UsageError(f"--emin must exceed max(V-inf, V+inf) = {vtop:g}")

    columns = CSV_HEADER.split(",")
    rows, status = [], EXIT_OK
    for E in energies:
        s = _slice(profile, E)
        try:
            row = sweep_row(s, qcfg, scfg, budget)
        except TunnelBoundError as exc:
            if not args.keep_going:
                print(f"error at E={fmt(E)}: {type(exc).__name__}: {exc}", file=err)
                return EXIT_NUMERIC
            print(f"warning: E={fmt(E)}: {type(exc).__name__}: {exc}", file=err)
            row = {c: None for c in columns}
            row.update(E=float(E), best_family=None)
        rows.append(row)

    if args.format == "csv":
        out.write(CSV_HEADER + "\n")
        for row in rows:
            out.write(",".join(fmt(row[c]) for c in columns) + "\n")
    else:
        out.write(_dump({
            "potential": profile.name,
            "params": dict(profile.params),
            "columns": columns,
            "rows": rows,
        }) + "\n")
    return status


# ---------------------------------------------------------------- bound

def _need_delta(args, s):
    return args.delta if args.delta is not None else min(s.k_minus, s.k_plus)


def _run_bound(args, s, qcfg, budget):
    fam = args.family
    extra = {}
    if fam == "basic":
        return bound_basic(s, None, qcfg), extra
    if fam == "basic-weak":
        return bound_basic_weak(s, None, qcfg), extra
    if fam in ("hconst", "monotone-h", "single-extremum", "kmin"):
        return bound_special(s, fam, cfg=qcfg), extra
    if fam in ("delta-cut", "delta-mg"):
        if args.optimize:
            rep = optimize_delta(s, fam, qcfg)
            extra = {"evaluations": rep.evaluations, "optimized": True}
            return rep.best_bound, extra
        if fam == "delta-mg":
            return bound_delta_mg(s, _need_delta(args, s), qcfg), extra
        return bound_special(s, "delta-cut", {"delta": _need_delta(args, s)}, cfg=qcfg), extra
    if fam == "schwartzian":
        return bound_schwartzian(s, qcfg), extra
    if fam == "low-energy":
        return bound_low_energy(s, qcfg), extra
    if fam == "old-low-energy":
        return bound_old_low_energy(s, qcfg), extra
    if fam == "wkb-like":
        return bound_wkb_like(s, qcfg), extra
    if fam in ("HJ-bump", "h-bump"):
        rep = optimize_trial(s, fam, budget=budget if args.optimize else 1, cfg=qcfg)
        extra = {"evaluations": rep.evaluations, "budget_exhausted": rep.budget_exhausted,
                 "optimized": bool(args.optimize)}
        return rep.best_bound, extra
    if fam == "best":
        return best_bound(s, qcfg, budget, optimize=True), extra
    raise UsageError(f"unknown family {fam!r}")


def cmd_bound(args, out=sys.stdout, err=sys.stderr) -> int:
    settings = _settings(args)
    qcfg = _quad_cfg(settings)
    budget = int(settings.get("budget", DEFAULT_BUDGET))
    s = _slice(_profile(args), args.energy)
    base = {"potential": s.profile.name, "potential_params": dict(s.profile.params),
            "energy": s.energy}
    try:
        if args.family == "wkb-estimate":
            w = wkb_estimate(s, qcfg)
            out.write(_dump({**base, "family": "wkb-estimate", "label": w.label,
                             "sech2_form": w.sech2_form, "exp_form": w.exp_form,
                             "penetration_integral": w.penetration_integral,
                             "no_barrier": w.no_barrier}) + "\n")
            return EXIT_OK
        res, extra = _run_bound(args, s, qcfg, budget)
    except PreconditionFailed as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return EXIT_PRECONDITION
    except NonPositive as exc:
        print(f"NonPositive: {exc}", file=err)
        return EXIT_PRECONDITION
    payload = {**base, **res.as_dict(), **extra}
    payload["n_bound"] = None if res.divergent else math.sinh(res.theta) ** 2
    if res.divergent:
        print("warning: bound integral diverges; only T >= 0 holds", file=err)
    out.write(_dump(payload) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- invariance

def _growing(rate=0.25) -> TrialFunction:
    # exp(rate x): no finite positive limit at either end
    def value(x):
        return np.exp(rate * np.asarray(x, dtype=float))
    return TrialFunction(value, lambda x: rate * value(x), lambda x: rate * rate * value(x),
                         "custom", {"rate": rate}, limits=(0.0, math.inf))


def make_j(kind: str, s, c: float = 2.0) -> TrialFunction:
    p = s.profile
    if kind == "identity":
        return constant(1.0)
    if kind == "constant":
        return constant(c)
    if kind == "bump":
        return sech_bump(0.5, p.center, p.scale)
    if kind == "interp":
        return tanh_interpolant(1.0, c, p.center, p.scale)
    if kind == "growing":
        return _growing()
    raise UsageError(f"unknown j family {kind!r}; choose from {J_FAMILIES}")


def cmd_invariance(args, out=sys.stdout, err=sys.stderr) -> int:
    settings = _settings(args)
    scfg = _solver_cfg(settings)
    tol = float(settings.get("tol", 1e-6))
    s = _slice(_profile(args), args.energy)
    j = make_j(args.j, s, args.c)
    try:
        rep = verify_invariance(s, j, scfg, form=args.form)
    except (DivergentAsymptotics, NonPositive, PreconditionFailed) as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return EXIT_PRECONDITION
    ok = rep.difference < tol
    payload = {"potential": s.profile.name, "energy": s.energy, "j": args.j, "form": args.form,
               "T_original": rep.T_original, "T_transformed": rep.T_transformed,
               "difference": rep.difference, "tol": tol, "ok": ok}
    if args.format == "json":
        out.write(_dump(payload) + "\n")
    else:
        out.write(f"T_original    {fmt(rep.T_original)}\n"
                  f"T_transformed {fmt(rep.T_transformed)}\n"
                  f"difference    {fmt(rep.difference)}\n")
    if not ok:
        print(f"invariance check failed: |dT| = {rep.difference:.3e} >= {tol:g}", file=err)
        return EXIT_NUMERIC
    return EXIT_OK


# ---------------------------------------------------------------- corpus

def cmd_corpus(args, out=sys.stdout, err=sys.stderr) -> int:
    entries = []
    for name in FAMILIES:
        p = make_profile(name)
        try:
            oracle_transmission(name, {}, max(p.v_minus_inf, p.v_plus_inf) + 1.0)
            has_oracle = True
        except TunnelBoundError:
            has_oracle = False
        entries.append({"name": name, "params": family_defaults(name),
                        "v_minus_inf": p.v_minus_inf, "v_plus_inf": p.v_plus_inf,
                        "smooth": p.smooth, "oracle": has_oracle})
    if args.format == "json":
        out.write(_dump(entries) + "\n")
    else:
        for e in entries:
            params = ",".join(f"{k}={v:g}" for k, v in e["params"].items()) or "-"
            out.write(f"{e['name']:<14} {params:<18} V(-inf)={e['v_minus_inf']:g} "
                      f"V(+inf)={e['v_plus_inf']:g} {'smooth' if e['smooth'] else 'sharp'}"
                      f"{' oracle' if e['oracle'] else ''}\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_common(p, with_slice=True):
    p.add_argument("--potential", required=True, choices=sorted(FAMILIES))
    p.add_argument("--params", default="", help="k1=v1,k2=v2 overriding family defaults")
    p.add_argument("--config", help="file of 'key = value' lines for numeric defaults")
    g = p.add_argument_group("numeric overrides (win over --config)")
    for key in _QUAD_KEYS:
        g.add_argument("--" + key.replace("_", "-"), dest=key, default=None,
                       type=int if key in _INT_KEYS else float)
    for key in _SOLVER_KEYS:
        g.add_argument("--" + key.replace("_", "-"), dest=key, default=None,
                       type=int if key in _INT_KEYS else float)
    if with_slice:
        p.add_argument("--energy", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tunnelbound", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="energy sweep of T and the bound families")
    _add_common(p, with_slice=False)
    p.add_argument("--emin", type=float, required=True)
    p.add_argument("--emax", type=float, required=True)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--spacing", choices=("lin", "log"), default="lin")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--budget", type=int, default=None, help="trial-search evaluations per family")
    p.add_argument("--keep-going", action="store_true",
                   help="emit NaN rows instead of stopping on numerical failure")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bound", help="evaluate one bound family at one energy")
    _add_common(p)
    p.add_argument("--family", required=True, choices=BOUND_FAMILIES)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--optimize", action="store_true", help="search the free parameters")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("invariance", help="check T under a Miller-Good transform")
    _add_common(p)
    p.add_argument("--j", choices=J_FAMILIES, default="identity")
    p.add_argument("--c", type=float, default=2.0, help="constant / asymptote for j")
    p.add_argument("--form", choices=("j", "J"), default="j")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_invariance)

    p = sub.add_parser("corpus", help="list built-in potentials")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out=out, err=err)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except PreconditionFailed as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return EXIT_PRECONDITION
    except TunnelBoundError as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
