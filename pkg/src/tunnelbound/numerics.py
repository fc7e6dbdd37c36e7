"""Shared numerical infrastructure.

Adaptive Gauss-Kronrod quadrature with explicit split points, root
bracketing by scan + bisection, fourth-order central differences, golden
section minimisation and the window truncation used to realise integrals
over the whole real line.

All callables handed to these routines must accept and return numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NoConvergence, ToleranceNotMet

__all__ = [
    "QuadratureConfig",
    "DEFAULT_CONFIG",
    "integrate",
    "bracket_roots",
    "fd_derivative",
    "golden_section",
    "grow_window",
    "truncate_domain",
    "count_sign_changes",
]

WINDOW_CAP = 1.0e6


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances used across the package.

    ``tail_tol`` is the absolute flatness threshold that decides where an
    infinite domain may be cut off. ``root_tol`` and ``n_scan`` drive root
    bracketing.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_depth: int = 50
    tail_tol: float = 1e-12
    root_tol: float = 1e-12
    n_scan: int = 2048

    def __post_init__(self):
        if min(self.abs_tol, self.rel_tol, self.tail_tol, self.root_tol) <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_depth < 10:
            raise ValueError("max_depth must be at least 10")
        if self.n_scan < 2:
            raise ValueError("n_scan must be at least 2")

    def with_(self, **kw) -> "QuadratureConfig":
        return replace(self, **kw)


DEFAULT_CONFIG = QuadratureConfig()


# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod abscissae (xgk[1], xgk[3], ...).
_GW[[1, 3, 5]] = _WG[:3]
_GW[[9, 11, 13]] = _WG[2::-1]
_GW[7] = _WG[3]


def _gk15(f, lo, hi):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise FloatingPointError("integrand is not finite on the integration interval")
    k = half * (fx @ _KW)
    g = half * (fx @ _GW)
    return k, np.abs(k - g)


def integrate(f, a, b, split_points=(), cfg: QuadratureConfig | None = None) -> float:
    """Integrate ``f`` over ``[a, b]`` adaptively.

    The range is first cut at every split point strictly inside ``(a, b)``,
    so kinks and jumps placed there never sit inside a Kronrod panel. Panels
    are then bisected, worst error first, until the summed error estimate is
    below ``max(abs_tol, rel_tol * |I|)``.

    Raises:
        ToleranceNotMet: the depth cap stopped refinement first; the best
            estimate is attached to the exception.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not a < b:
        if a == b:
            return 0.0
        raise ValueError("integrate requires a < b")
    pts = sorted({float(p) for p in split_points if a < p < b})
    edges = np.array([a, *pts, b], dtype=float)
    lo, hi = edges[:-1], edges[1:]
    depth = np.zeros(lo.size, dtype=int)
    val, err = _gk15(f, lo, hi)

    while True:
        total = float(np.sum(val))
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        err_sum = float(np.sum(err))
        if err_sum <= tol:
            return total
        # split every panel carrying more than its fair share of the budget
        share = tol / (2.0 * lo.size)
        split = (err > share) & (depth < cfg.max_depth)
        if not np.any(split):
            raise ToleranceNotMet(
                f"quadrature error {err_sum:.3e} above tolerance {tol:.3e}",
                estimate=total, error=err_sum,
            )
        keep = ~split
        m = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], m])
        new_hi = np.concatenate([m, hi[split]])
        new_depth = np.concatenate([depth[split], depth[split]]) + 1
        nv, ne = _gk15(f, new_lo, new_hi)
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        depth = np.concatenate([depth[keep], new_depth])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])


def bracket_roots(f, a, b, n_scan: int = 2048, tol: float = 1e-12,
                  breakpoints=()) -> list[float]:
    """Locate the sign changes of ``f`` on ``[a, b]``.

    ``f`` is sampled on ``n_scan + 1`` equispaced points; every sign change
    is refined by safeguarded false position to ``tol`` in position (floored at a few ulps of
    the root). Exact zeros count only where the sign differs on either side. Features
    narrower than ``(b - a) / n_scan`` can be missed.

    A jump discontinuity through zero is reported like a root, which is what
    callers splitting integrals at kinks want. Known jump locations passed
    as ``breakpoints`` are bracketed tightly up front instead of refined.
    """
    x = np.linspace(a, b, n_scan + 1)
    bps = np.array([p for p in breakpoints if a < p < b], dtype=float)
    if bps.size:
        d = 0.25 * np.maximum(tol, 8 * np.finfo(float).eps * np.abs(bps))
        x = np.unique(np.concatenate([x, bps - d, bps + d]))
    fx = np.asarray(f(x), dtype=float)
    s = np.sign(fx)
    nz = np.nonzero(s)[0]
    i, j = nz[:-1], nz[1:]
    # a run of exact zeros counts only if the sign differs across it
    run = (j > i + 1) & (s[i] != s[j])
    roots = list(0.5 * (x[i[run] + 1] + x[j[run] - 1]))
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    if idx.size:
        # Illinois false position, with a plain bisection every third step so
        # jumps and other non-smooth crossings still shrink geometrically
        lo, hi = x[idx].copy(), x[idx + 1].copy()
        f_lo, f_hi = fx[idx].copy(), fx[idx + 1].copy()
        side = np.zeros(idx.size, dtype=int)
        for it in range(300):
            width_ok = (hi - lo) <= np.maximum(tol, 8 * np.finfo(float).eps * np.abs(lo))
            if np.all(width_ok):
                break
            if it % 3 == 2:
                mid = 0.5 * (lo + hi)
            else:
                with np.errstate(all="ignore"):
                    mid = hi - f_hi * (hi - lo) / (f_hi - f_lo)
                bad = ~np.isfinite(mid) | (mid <= lo) | (mid >= hi)
                mid = np.where(bad, 0.5 * (lo + hi), mid)
            mid = np.where(width_ok, lo, mid)
            fm = np.asarray(f(mid), dtype=float)
            exact = (fm == 0) & ~width_ok
            left = (np.sign(fm) == np.sign(f_lo)) & ~exact & ~width_ok
            right = ~left & ~exact & ~width_ok
            # the endpoint kept twice in a row has its value halved
            f_hi = np.where(left & (side == 1), 0.5 * f_hi, f_hi)
            f_lo = np.where(right & (side == -1), 0.5 * f_lo, f_lo)
            lo, f_lo = np.where(left, mid, lo), np.where(left, fm, f_lo)
            hi, f_hi = np.where(right, mid, hi), np.where(right, fm, f_hi)
            side = np.where(left, 1, np.where(right, -1, side))
            lo, hi = np.where(exact, mid, lo), np.where(exact, mid, hi)
        roots.extend(0.5 * (lo + hi))
    return sorted(float(r) for r in roots)


def fd_derivative(f, x, order: int = 1, h_step: float | None = None):
    """Fourth-order central difference of ``f`` at ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    eps = np.finfo(float).eps
    if order == 1:
        h = (eps ** (1 / 3) if h_step is None else h_step) * (1 + np.abs(x))
        return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
    if order == 2:
        h = (eps ** 0.25 if h_step is None else h_step) * (1 + np.abs(x))
        return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h)
                - f(x - 2 * h)) / (12 * h * h)
    raise ValueError("order must be 1 or 2")


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, a, b, tol=1e-10, max_iter=200):
    """Minimise a scalar function on ``[a, b]`` by golden-section search.

    Returns ``(x_best, f_best, trace)`` where trace lists every ``(x, f(x))``
    evaluated, in order. The best point over the whole trace is returned, so
    the result is never worse than any probe.
    """
    trace = []

    def ev(x):
        v = float(f(x))
        trace.append((x, v))
        return v

    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = ev(c), ev(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * (1 + abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = ev(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = ev(d)
    x_best, f_best = min(trace, key=lambda t: t[1])
    return x_best, f_best, trace


def _flat_beyond(dev, x, direction, tol):
    # probe the edge itself and a few points further out
    probes = x + direction * np.array([0.0, 0.25, 0.5, 1.0, 3.0]) * max(1.0, abs(x))
    vals = np.asarray(dev(probes), dtype=float)
    return bool(np.all(np.isfinite(vals)) and np.all(np.abs(vals) < tol))


def grow_window(dev, tol, lo=-1.0, hi=1.0, cap=WINDOW_CAP, shrink=False):
    """Widen ``[lo, hi]`` until ``|dev| < tol`` at and beyond both edges.

    Each side is doubled independently. With ``shrink=True`` the final edges
    are pulled back by bisection to the innermost point that still passes,
    so the result is close to the smallest admissible window.

    Raises:
        NoConvergence: an edge passed ``cap`` without the tail flattening.
    """
    out = []
    for edge, direction in ((lo, -1.0), (hi, 1.0)):
        inner = edge
        step = max(1.0, abs(edge))
        while not _flat_beyond(dev, edge, direction, tol):
            inner = edge
            edge = edge + direction * step
            step *= 2.0
            if abs(edge) > cap:
                raise NoConvergence(f"tail did not flatten within |x| <= {cap:g}")
        if shrink and edge != inner:
            good, bad = edge, inner
            for _ in range(80):
                if abs(good - bad) <= 1e-9 * (1 + abs(good)):
                    break
                mid = 0.5 * (good + bad)
                if _flat_beyond(dev, mid, direction, tol):
                    good = mid
                else:
                    bad = mid
            edge = good
        out.append(edge)
    return out[0], out[1]


def truncate_domain(slice_, tail_tol: float | None = None):
    """Finite window outside which ``k^2`` sits within ``tail_tol`` of its limits.

    Starts from ``[-1, 1]``, doubles each side until flat, then bisects back
    toward the smallest passing edge. A small margin proportional to the
    width is added so compactly supported profiles keep their edges inside.
    """
    tol = DEFAULT_CONFIG.tail_tol if tail_tol is None else tail_tol
    p = slice_.profile

    def dev(x):
        x = np.asarray(x, dtype=float)
        v = p.v(x)
        return np.where(x < 0, v - p.v_minus_inf, v - p.v_plus_inf)

    lo, hi = grow_window(dev, tol, -1.0, 1.0, shrink=True)
    pad = 1e-3 * (1.0 + hi - lo)
    if lo < -1.0:
        lo -= pad
    if hi > 1.0:
        hi += pad
    return lo, hi


def count_sign_changes(values, atol=0.0) -> int:
    """Number of sign changes in a sequence, ignoring entries with ``|v| <= atol``."""
    v = np.asarray(values, dtype=float)
    s = np.sign(v[np.abs(v) > atol])
    if s.size < 2:
        return 0
    return int(np.count_nonzero(s[1:] != s[:-1]))
