"""Miller-Good change of variables u(x) = U(X(x)) / sqrt(X'(x)).

The transformed problem U_XX + K^2 U = 0 is built either from j = X'
or from J with X' = J^-2, and handed back to the scattering solver on a
grid in the new coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DivergentAsymptotics, NoConvergence, NonPositive
from .numerics import DEFAULT_CONFIG, WINDOW_CAP, grow_window
from .profiles import EnergySlice
from .solver import SolverConfig, solve_k2
from .trial import TrialFunction

__all__ = [
    "TransformedProfile",
    "schwartzian_term",
    "transform_with_j",
    "transform_with_J",
    "verify_invariance",
    "InvarianceReport",
]

MAP_TOL = 1e-10

_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


def schwartzian_term(Xprime: TrialFunction, x):
    """-X'''/(2 X') + 3/4 (X''/X')^2, i.e. sqrt(X') (1/sqrt(X'))''."""
    v = np.asarray(Xprime.value(x), dtype=float)
    if np.any(v <= 0):
        raise NonPositive("X' must be positive")
    g = Xprime.d1(x) / v
    return -0.5 * Xprime.d2(x) / v + 0.75 * g * g


@dataclass(frozen=True)
class TransformedProfile:
    """The transformed field K^2 together with the coordinate maps."""

    X_of_x: Callable
    x_of_X: Callable
    k2_transformed: Callable  # K^2 as a function of X
    k2_of_x: Callable  # K^2 evaluated at the preimage x
    j_inf_minus: float
    j_inf_plus: float
    k_minus: float  # K at X -> -inf
    k_plus: float
    x_window: tuple[float, float]
    X_window: tuple[float, float]
    breakpoints_X: tuple[float, ...]

    def transmission(self, cfg: SolverConfig | None = None):
        return solve_k2(self.k2_transformed, self.k_minus, self.k_plus,
                        self.X_window[0], self.X_window[1], self.breakpoints_X, cfg)


def _limits(f: TrialFunction):
    if f.limits is not None:
        return float(f.limits[0]), float(f.limits[1])
    with np.errstate(all="ignore"):
        lo, hi = f.value(np.array([-WINDOW_CAP, WINDOW_CAP]))
    return float(lo), float(hi)


class _CoordinateMap:
    """X(x) = x_lo + int_{x_lo}^x j, tabulated on Gauss-Legendre panels."""

    def __init__(self, j, lo, hi, j_minus, j_plus):
        self.j, self.lo, self.hi = j, lo, hi
        self.j_minus, self.j_plus = j_minus, j_plus
        n = 1024
        prev = None
        while True:
            edges = np.linspace(lo, hi, n + 1)
            cum = np.concatenate([[0.0], np.cumsum(self._panel(edges[:-1], edges[1:]))])
            if prev is not None and abs(cum[-1] - prev) <= 1e-13 * (1.0 + abs(cum[-1])):
                break
            prev = cum[-1]
            n *= 2
            if n > 1 << 20:
                break
        self.edges = edges
        self.X_edges = lo + cum

    def _panel(self, a, b):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        x = mid[..., None] + half[..., None] * _GL_X
        return half * (self.j(x.reshape(-1)).reshape(x.shape) @ _GL_W)

    def X_of_x(self, x):
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, self.lo, self.hi)
        i = np.clip(np.searchsorted(self.edges, xc, side="right") - 1, 0, self.edges.size - 2)
        X = self.X_edges[i] + self._panel(self.edges[i], xc)
        X = np.where(x < self.lo, self.X_edges[0] + self.j_minus * (x - self.lo), X)
        return np.where(x > self.hi, self.X_edges[-1] + self.j_plus * (x - self.hi), X)

    def x_of_X(self, X):
        X = np.asarray(X, dtype=float)
        x = np.interp(X, self.X_edges, self.edges)
        for _ in range(50):
            step = (self.X_of_x(x) - X) / self.j(x)
            x = x - step
            if np.all(np.abs(step) <= 1e-14 * (1.0 + np.abs(x))):
                break
        lo_side = X < self.X_edges[0]
        hi_side = X > self.X_edges[-1]
        x = np.where(lo_side, self.lo + (X - self.X_edges[0]) / self.j_minus, x)
        return np.where(hi_side, self.hi + (X - self.X_edges[-1]) / self.j_plus, x)


def _build(slice_: EnergySlice, Xprime: Callable, k2_of_x: Callable, j_minus, j_plus,
           tail_tol=None) -> TransformedProfile:
    tol = DEFAULT_CONFIG.tail_tol if tail_tol is None else tail_tol
    if not (np.isfinite(j_minus) and np.isfinite(j_plus) and j_minus > 0 and j_plus > 0):
        raise DivergentAsymptotics("X' has no finite positive limit at infinity")
    K_minus, K_plus = slice_.k_minus / j_minus, slice_.k_plus / j_plus

    def dev(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            K2 = k2_of_x(x)
        return np.where(x < 0, K2 - K_minus ** 2, K2 - K_plus ** 2)

    lo0, hi0 = slice_.window
    try:
        lo, hi = grow_window(dev, tol, lo0, hi0)
    except NoConvergence:
        raise DivergentAsymptotics("transformed K^2 does not flatten at infinity") from None

    grid = np.linspace(lo, hi, 4097)
    jv = Xprime(grid)
    if not np.all(jv > 0):
        raise NonPositive("X' must be positive on the whole window")

    cmap = _CoordinateMap(Xprime, lo, hi, j_minus, j_plus)
    bps = tuple(float(cmap.X_of_x(b)) for b in slice_.breakpoints if lo < b < hi)

    def k2_X(X):
        return k2_of_x(cmap.x_of_X(X))

    return TransformedProfile(
        X_of_x=cmap.X_of_x, x_of_X=cmap.x_of_X, k2_transformed=k2_X, k2_of_x=k2_of_x,
        j_inf_minus=j_minus, j_inf_plus=j_plus, k_minus=K_minus, k_plus=K_plus,
        x_window=(lo, hi), X_window=(float(cmap.X_edges[0]), float(cmap.X_edges[-1])),
        breakpoints_X=bps,
    )


def transform_with_j(slice_: EnergySlice, j: TrialFunction, tail_tol=None) -> TransformedProfile:
    """K^2 = (k^2 - j''/(2j) + 3/4 (j'/j)^2) / j^2 with X' = j."""
    j_minus, j_plus = _limits(j)

    def k2_of_x(x):
        v = j.value(x)
        return (slice_.k2(x) + schwartzian_term(j, x)) / (v * v)

    return _build(slice_, j.value, k2_of_x, j_minus, j_plus, tail_tol)


def transform_with_J(slice_: EnergySlice, J: TrialFunction, tail_tol=None) -> TransformedProfile:
    """K^2 = J^4 (k^2 + J''/J) with X' = J^-2."""
    J_minus, J_plus = _limits(J)

    def k2_of_x(x):
        v = J.value(x)
        return v ** 4 * (slice_.k2(x) + J.d2(x) / v)

    def Xprime(x):
        return J.value(x) ** -2.0

    with np.errstate(all="ignore"):
        jm, jp = J_minus ** -2.0, J_plus ** -2.0
    return _build(slice_, Xprime, k2_of_x, jm, jp, tail_tol)


@dataclass(frozen=True)
class InvarianceReport:
    T_original: float
    T_transformed: float
    difference: float


def verify_invariance(slice_: EnergySlice, trial: TrialFunction, cfg: SolverConfig | None = None,
                      form: str = "j") -> InvarianceReport:
    """Solve the original and the transformed problem and compare T."""
    from .solver import transmission

    if form == "j":
        tp = transform_with_j(slice_, trial)
    elif form == "J":
        tp = transform_with_J(slice_, trial)
    else:
        raise ValueError("form must be 'j' or 'J'")
    t0 = transmission(slice_, cfg).transmission
    t1 = tp.transmission(cfg).transmission
    return InvarianceReport(t0, t1, abs(t1 - t0))
