"""Potential profiles, energy slices and the built-in test corpus.

Units follow 2m = hbar = 1 throughout, so k^2(x) = E - V(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping

import numpy as np

from .errors import InvalidEnergy, RegionResolutionError
from .numerics import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    bracket_roots,
    fd_derivative,
    golden_section,
    integrate,
    truncate_domain,
)

Array = np.ndarray


@dataclass(frozen=True)
class PotentialProfile:
    """A one-dimensional potential with finite limits at both infinities.

    ``dv``/``d2v`` are analytic derivatives when the family provides them.
    Sharp profiles list their jump locations in ``breakpoints``; their
    derivatives are zero on each smooth piece and undefined at the jumps.
    """

    name: str
    v: Callable[[Array], Array]
    v_minus_inf: float
    v_plus_inf: float
    params: Mapping[str, float] = field(default_factory=dict)
    dv: Callable[[Array], Array] | None = None
    d2v: Callable[[Array], Array] | None = None
    breakpoints: tuple[float, ...] = ()
    center: float = 0.0
    scale: float = 1.0

    @property
    def smooth(self) -> bool:
        return not self.breakpoints

    def dv_or_fd(self, x):
        if self.dv is not None:
            return self.dv(x)
        return fd_derivative(self.v, x, 1)

    def d2v_or_fd(self, x):
        if self.d2v is not None:
            return self.d2v(x)
        return fd_derivative(self.v, x, 2)

    def at(self, energy: float) -> "EnergySlice":
        return EnergySlice(self, energy)


def _arr(x):
    return np.asarray(x, dtype=float)


def zero_potential() -> PotentialProfile:
    z = lambda x: np.zeros_like(_arr(x))
    return PotentialProfile("zero", z, 0.0, 0.0, {}, z, z)


def square_barrier(V0: float = 1.0, L: float = 1.0) -> PotentialProfile:
    """Sharp barrier of height V0 on [0, L]."""
    def v(x):
        x = _arr(x)
        return np.where((x >= 0.0) & (x <= L), V0, 0.0)
    z = lambda x: np.zeros_like(_arr(x))
    return PotentialProfile("square", v, 0.0, 0.0, {"V0": V0, "L": L}, z, z,
                            breakpoints=(0.0, float(L)), center=0.5 * L, scale=max(L, 1e-3))


def smooth_square_barrier(V0: float = 1.0, L: float = 1.0, s: float = 8.0) -> PotentialProfile:
    """V0 * [tanh(s x) - tanh(s (x - L))] / 2."""
    def v(x):
        x = _arr(x)
        return 0.5 * V0 * (np.tanh(s * x) - np.tanh(s * (x - L)))

    def dv(x):
        x = _arr(x)
        return 0.5 * V0 * s * (_sech2(s * x) - _sech2(s * (x - L)))

    def d2v(x):
        x = _arr(x)
        a, b = s * x, s * (x - L)
        return -V0 * s * s * (_sech2(a) * np.tanh(a) - _sech2(b) * np.tanh(b))

    return PotentialProfile("smooth_square", v, 0.0, 0.0, {"V0": V0, "L": L, "s": s},
                            dv, d2v, center=0.5 * L, scale=max(L, 1.0 / s))


def sech2_barrier(V0: float = 1.0, a: float = 1.0) -> PotentialProfile:
    """Poschl-Teller barrier V0 sech^2(x / a)."""
    def v(x):
        return V0 * _sech2(_arr(x) / a)

    def dv(x):
        u = _arr(x) / a
        return -2.0 * V0 / a * _sech2(u) * np.tanh(u)

    def d2v(x):
        u = _arr(x) / a
        s2 = _sech2(u)
        return 2.0 * V0 / (a * a) * s2 * (2.0 * np.tanh(u) ** 2 - s2)

    return PotentialProfile("sech2", v, 0.0, 0.0, {"V0": V0, "a": a}, dv, d2v, scale=a)


def smooth_step(Vplus: float = 1.0, a: float = 1.0) -> PotentialProfile:
    """Vplus * [1 + tanh(x / a)] / 2."""
    def v(x):
        return 0.5 * Vplus * (1.0 + np.tanh(_arr(x) / a))

    def dv(x):
        return 0.5 * Vplus / a * _sech2(_arr(x) / a)

    def d2v(x):
        u = _arr(x) / a
        return -Vplus / (a * a) * _sech2(u) * np.tanh(u)

    return PotentialProfile("step", v, 0.0, float(Vplus), {"Vplus": Vplus, "a": a}, dv, d2v,
                            scale=a)


def sharp_step(Vplus: float = 1.0) -> PotentialProfile:
    def v(x):
        return np.where(_arr(x) >= 0.0, Vplus, 0.0)
    z = lambda x: np.zeros_like(_arr(x))
    return PotentialProfile("sharp_step", v, 0.0, float(Vplus), {"Vplus": Vplus}, z, z,
                            breakpoints=(0.0,))


def gaussian_barrier(V0: float = 1.0, a: float = 1.0) -> PotentialProfile:
    def v(x):
        u = _arr(x) / a
        return V0 * np.exp(-u * u)

    def dv(x):
        u = _arr(x) / a
        return -2.0 * V0 / a * u * np.exp(-u * u)

    def d2v(x):
        u = _arr(x) / a
        return V0 / (a * a) * (4.0 * u * u - 2.0) * np.exp(-u * u)

    return PotentialProfile("gaussian", v, 0.0, 0.0, {"V0": V0, "a": a}, dv, d2v, scale=a)


def _sech2(u):
    # 1/cosh^2 without overflow for large |u|
    e = np.exp(-2.0 * np.abs(u))
    return 4.0 * e / (1.0 + e) ** 2


FAMILIES: dict[str, Callable[..., PotentialProfile]] = {
    "zero": zero_potential,
    "square": square_barrier,
    "smooth_square": smooth_square_barrier,
    "sech2": sech2_barrier,
    "step": smooth_step,
    "sharp_step": sharp_step,
    "gaussian": gaussian_barrier,
}


def make_profile(name: str, params: Mapping[str, float] | None = None) -> PotentialProfile:
    """Build a corpus profile by name; unknown parameter keys are rejected."""
    try:
        factory = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown potential {name!r}; choose from {sorted(FAMILIES)}") from None
    params = dict(params or {})
    allowed = set(factory.__code__.co_varnames[:factory.__code__.co_argcount])
    unknown = set(params) - allowed
    if unknown:
        raise ValueError(f"unknown parameter(s) for {name}: {', '.join(sorted(unknown))}")
    return factory(**{k: float(v) for k, v in params.items()})


def family_defaults(name: str) -> dict[str, float]:
    factory = FAMILIES[name]
    code = factory.__code__
    names = code.co_varnames[:code.co_argcount]
    return dict(zip(names, factory.__defaults__ or ()))


def make_corpus() -> list[PotentialProfile]:
    """Every built-in family at its default parameters."""
    return [factory() for factory in FAMILIES.values()]


@dataclass(frozen=True)
class ForbiddenRegionSummary:
    intervals: tuple[tuple[float, float], ...]
    kappa_max: float
    total_width: float
    penetration_integral: float

    @property
    def empty(self) -> bool:
        return not self.intervals


@dataclass(frozen=True)
class EnergySlice:
    """A profile at fixed energy E, exposing the k^2 field."""

    profile: PotentialProfile
    energy: float

    def __post_init__(self):
        p = self.profile
        if not (self.energy > max(p.v_minus_inf, p.v_plus_inf)):
            raise InvalidEnergy(
                f"E={self.energy:g} must exceed max(V-inf, V+inf)="
                f"{max(p.v_minus_inf, p.v_plus_inf):g}"
            )

    def k2(self, x):
        return self.energy - self.profile.v(x)

    def dk2(self, x):
        return -self.profile.dv_or_fd(x)

    def d2k2(self, x):
        return -self.profile.d2v_or_fd(x)

    @property
    def k_minus(self) -> float:
        return math.sqrt(self.energy - self.profile.v_minus_inf)

    @property
    def k_plus(self) -> float:
        return math.sqrt(self.energy - self.profile.v_plus_inf)

    @property
    def symmetric(self) -> bool:
        return abs(self.k_minus - self.k_plus) <= 1e-12 * max(self.k_minus, self.k_plus)

    @property
    def k_inf2(self) -> float:
        return self.energy - self.profile.v_minus_inf

    def excess(self, x):
        """k_inf^2 - k^2 = V - V(-inf), computed without cancellation."""
        return self.profile.v(x) - self.profile.v_minus_inf

    @property
    def k_inf(self) -> float:
        """Common asymptotic wavenumber; only meaningful when ``symmetric``."""
        return self.k_minus

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.profile.breakpoints

    @cached_property
    def window(self) -> tuple[float, float]:
        return truncate_domain(self, DEFAULT_CONFIG.tail_tol)

    def scan(self, n_scan: int):
        """(x, k^2) on ``n_scan + 1`` points across the window, cached."""
        cache = self.__dict__.setdefault("_scan_cache", {})
        if n_scan not in cache:
            lo, hi = self.window
            x = np.linspace(lo, hi, n_scan + 1)
            cache[n_scan] = (x, self.k2(x))
        return cache[n_scan]

    def k2_extremum(self, kind="min", cfg: QuadratureConfig | None = None):
        """Global min (or max) of k^2 over the window: scan, then golden refinement."""
        cfg = cfg or DEFAULT_CONFIG
        cache = self.__dict__.setdefault("_extremum_cache", {})
        key = (kind, cfg.n_scan)
        if key not in cache:
            cache[key] = self._k2_extremum(kind, cfg)
        return cache[key]

    def _k2_extremum(self, kind, cfg):
        x, k2 = self.scan(cfg.n_scan)
        sign = 1.0 if kind == "min" else -1.0
        vals = sign * k2
        i = int(np.argmin(vals))
        best_x, best = float(x[i]), float(vals[i])
        if self.profile.smooth:
            a, b = x[max(i - 1, 0)], x[min(i + 1, x.size - 1)]
            xr, fr, _ = golden_section(lambda t: sign * float(self.k2(t)), a, b, tol=1e-12)
            if fr < best:
                best_x, best = xr, fr
        return best_x, sign * best


def k_squared(slice_: EnergySlice, x):
    return slice_.k2(x)


def forbidden_regions(slice_: EnergySlice, domain=None,
                      cfg: QuadratureConfig | None = None) -> ForbiddenRegionSummary:
    """Intervals where k^2 < 0, with kappa_max, total width and the
    penetration integral of kappa = sqrt(-k^2) over them."""
    cfg = cfg or DEFAULT_CONFIG
    lo, hi = domain if domain is not None else slice_.window
    edges_k2 = slice_.k2(np.array([lo, hi]))
    if np.any(edges_k2 < 0):
        raise RegionResolutionError("k^2 is negative at the domain boundary; widen the domain")
    roots = bracket_roots(slice_.k2, lo, hi, cfg.n_scan, cfg.root_tol, slice_.breakpoints)
    pts = [lo, *roots, hi]
    pieces = []
    for a, b in zip(pts[:-1], pts[1:]):
        if b <= a:
            continue
        if slice_.k2(0.5 * (a + b)) < 0:
            if pieces and pieces[-1][1] == a:
                pieces[-1] = (pieces[-1][0], b)
            else:
                pieces.append((a, b))
    if not pieces:
        return ForbiddenRegionSummary((), 0.0, 0.0, 0.0)

    def kappa(x):
        return np.sqrt(np.maximum(-slice_.k2(x), 0.0))

    inner = [b for b in slice_.breakpoints]
    total = 0.0
    kmax = 0.0
    for a, b in pieces:
        total += integrate(kappa, a, b, inner, cfg)
        xs = np.linspace(a, b, 257)
        vals = kappa(xs)
        i = int(np.argmax(vals))
        kmax = max(kmax, float(vals[i]))
        if slice_.profile.smooth:
            _, fr, _ = golden_section(lambda t: -float(kappa(t)),
                                      xs[max(i - 1, 0)], xs[min(i + 1, 256)], tol=1e-12)
            kmax = max(kmax, -fr)
    width = sum(b - a for a, b in pieces)
    return ForbiddenRegionSummary(tuple(pieces), kmax, width, total)
