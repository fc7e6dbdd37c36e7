"""Positive trial functions (h, j, J, H) with first and second derivatives.

Built-in families carry analytic derivatives. Functions built from a bare
callable or from samples fall back to central finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import NonPositive
from .numerics import fd_derivative
from .profiles import EnergySlice, _sech2

Array = np.ndarray


@dataclass(frozen=True)
class TrialFunction:
    value: Callable[[Array], Array]
    d1: Callable[[Array], Array]
    d2: Callable[[Array], Array]
    family: str
    params: Mapping[str, float] = field(default_factory=dict)
    # values at x -> -inf / +inf, when known
    limits: tuple[float, float] | None = None
    # jump locations (only max-cut functions of sharp profiles have any)
    breakpoints: tuple[float, ...] = ()

    def __call__(self, x):
        return self.value(x)

    def check_positive(self, x, what="trial function"):
        v = np.asarray(self.value(x))
        if not np.all(v > 0):
            raise NonPositive(f"{what} must be positive (min {float(np.min(v)):.3g})")

    def log_derivative(self, x):
        return self.d1(x) / self.value(x)


def _f(x):
    return np.asarray(x, dtype=float)


def constant(c: float) -> TrialFunction:
    c = float(c)
    zero = lambda x: np.zeros_like(_f(x))
    return TrialFunction(lambda x: np.full_like(_f(x), c), zero, zero,
                         "constant", {"c": c}, limits=(c, c))


def tanh_interpolant(left: float, right: float, x0: float = 0.0, w: float = 1.0,
                     bump: float = 0.0) -> TrialFunction:
    """left + (right - left) (1 + tanh u) / 2 + bump sech^2 u, with u = (x - x0) / w."""
    d = right - left

    def value(x):
        u = (_f(x) - x0) / w
        return left + 0.5 * d * (1.0 + np.tanh(u)) + bump * _sech2(u)

    def d1(x):
        u = (_f(x) - x0) / w
        s2 = _sech2(u)
        return (0.5 * d * s2 - 2.0 * bump * s2 * np.tanh(u)) / w

    def d2(x):
        u = (_f(x) - x0) / w
        s2, th = _sech2(u), np.tanh(u)
        return (-d * s2 * th + bump * s2 * (4.0 * th * th - 2.0 * s2)) / (w * w)

    return TrialFunction(value, d1, d2, "tanh-interpolant",
                         {"left": left, "right": right, "x0": x0, "w": w, "bump": bump},
                         limits=(left, right))


def sech_bump(amp: float, x0: float = 0.0, w: float = 1.0, base: float = 1.0) -> TrialFunction:
    """base + amp sech((x - x0) / w); a localized bump returning to ``base``."""

    def sech(u):
        e = np.exp(-np.abs(u))
        return 2.0 * e / (1.0 + e * e)

    def value(x):
        return base + amp * sech((_f(x) - x0) / w)

    def d1(x):
        u = (_f(x) - x0) / w
        return -amp * sech(u) * np.tanh(u) / w

    def d2(x):
        u = (_f(x) - x0) / w
        s = sech(u)
        return amp * s * (np.tanh(u) ** 2 - s * s) / (w * w)

    return TrialFunction(value, d1, d2, "tanh-interpolant",
                         {"amp": amp, "x0": x0, "w": w, "base": base}, limits=(base, base))


def max_cut(slice_: EnergySlice, delta: float) -> TrialFunction:
    """sqrt(max{k^2, delta^2}); delta = 0 on an allowed slice gives h = k."""
    d2 = float(delta) ** 2

    def value(x):
        return np.sqrt(np.maximum(slice_.k2(x), d2))

    def d1(x):
        k2 = slice_.k2(x)
        h = np.sqrt(np.maximum(k2, d2))
        on = k2 > d2
        return np.where(on, slice_.dk2(x) / (2.0 * np.where(on, h, 1.0)), 0.0)

    def dd2(x):
        k2 = slice_.k2(x)
        on = k2 > d2
        h = np.where(on, np.sqrt(np.maximum(k2, d2)), 1.0)
        g1, g2 = slice_.dk2(x), slice_.d2k2(x)
        return np.where(on, g2 / (2.0 * h) - g1 * g1 / (4.0 * h ** 3), 0.0)

    lim = (math.sqrt(max(slice_.k_minus ** 2, d2)), math.sqrt(max(slice_.k_plus ** 2, d2)))
    return TrialFunction(value, d1, dd2, "max-cut", {"delta": float(delta)},
                         limits=lim, breakpoints=slice_.breakpoints)


def k_trial(slice_: EnergySlice) -> TrialFunction:
    """h = k(x) itself, valid where k^2 > 0."""
    return max_cut(slice_, 0.0)


def exp_integral(phi: Callable, chi: Callable, dchi: Callable, params=None,
                 limits=None) -> TrialFunction:
    """J = exp(phi) with phi' = chi, so J'/J = chi and J''/J = chi' + chi^2."""

    def value(x):
        return np.exp(phi(_f(x)))

    def d1(x):
        x = _f(x)
        return chi(x) * np.exp(phi(x))

    def d2(x):
        x = _f(x)
        c = chi(x)
        return (dchi(x) + c * c) * np.exp(phi(x))

    return TrialFunction(value, d1, d2, "exp-integral-of-chi", dict(params or {}), limits=limits)


def schwartzian_J(slice_: EnergySlice) -> TrialFunction:
    """J = sqrt(k_inf / k), the choice that turns the improved bound into the
    Schwartzian bound. Requires k^2 > 0 everywhere."""
    kinf = slice_.k_inf
    root = math.sqrt(kinf)

    def value(x):
        return root * slice_.k2(x) ** -0.25

    def d1(x):
        q = slice_.k2(x)
        return -0.25 * root * q ** -1.25 * slice_.dk2(x)

    def d2(x):
        q = slice_.k2(x)
        g1, g2 = slice_.dk2(x), slice_.d2k2(x)
        return root * (5.0 / 16.0 * q ** -2.25 * g1 * g1 - 0.25 * q ** -1.25 * g2)

    lim = (math.sqrt(kinf / slice_.k_minus), math.sqrt(kinf / slice_.k_plus))
    return TrialFunction(value, d1, d2, "custom", {"kind": "sqrt(k_inf/k)"}, limits=lim)


def power(f: TrialFunction, p: float) -> TrialFunction:
    """f**p with chain-rule derivatives."""

    def value(x):
        return f.value(x) ** p

    def d1(x):
        v = f.value(x)
        return p * v ** (p - 1.0) * f.d1(x)

    def d2(x):
        v, g1 = f.value(x), f.d1(x)
        return p * (p - 1.0) * v ** (p - 2.0) * g1 * g1 + p * v ** (p - 1.0) * f.d2(x)

    lim = None if f.limits is None else (f.limits[0] ** p, f.limits[1] ** p)
    return TrialFunction(value, d1, d2, f.family, {**f.params, "power": p}, lim, f.breakpoints)


def product(f: TrialFunction, g: TrialFunction) -> TrialFunction:
    def value(x):
        return f.value(x) * g.value(x)

    def d1(x):
        return f.d1(x) * g.value(x) + f.value(x) * g.d1(x)

    def d2(x):
        return f.d2(x) * g.value(x) + 2.0 * f.d1(x) * g.d1(x) + f.value(x) * g.d2(x)

    lim = None
    if f.limits is not None and g.limits is not None:
        lim = (f.limits[0] * g.limits[0], f.limits[1] * g.limits[1])
    return TrialFunction(value, d1, d2, "custom", {"product_of": f"{f.family}*{g.family}"},
                         lim, tuple(sorted(set(f.breakpoints) | set(g.breakpoints))))


def from_callable(fn: Callable, family="custom", params=None, limits=None) -> TrialFunction:
    """Wrap a plain callable; derivatives come from finite differences."""
    return TrialFunction(fn, lambda x: fd_derivative(fn, x, 1),
                         lambda x: fd_derivative(fn, x, 2), family, dict(params or {}), limits)


def from_samples(x, y) -> TrialFunction:
    """Cubic-spline trial function through samples, held flat beyond the ends."""
    from scipy.interpolate import CubicSpline

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    spline = CubicSpline(x, y, bc_type="clamped")

    def value(t):
        return spline(np.clip(_f(t), x[0], x[-1]))

    return from_callable(value, "custom-sampled", {"n_samples": float(x.size)},
                         limits=(float(y[0]), float(y[-1])))
