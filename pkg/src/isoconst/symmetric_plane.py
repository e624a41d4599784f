"""Closed-form reduction of Omega on symmetric Minkowski planes.

A pair of unit vectors ``e1, e2`` is a pair of axes when
``||e1 + t e2|| = ||e1 - t e2|| = ||e2 + t e1|| = ||e2 - t e1||`` for every
real ``t``.  On such planes the supremum defining Omega collapses to the
one-variable problem

    h(t) = (f(t)^2 + f(-t)^2) / (5 g(t)^2),    t >= 0,

with ``f(t) = ||(1+2t) e1 + (2-t) e2||`` and ``g(t) = ||(1+t) e1 + (1-t) e2||``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SpecificationError
from .estimators import OMEGA, Direction, Estimate, GridConfig, Witness, _check_range
from .geometry import NormSpec, Vec2, as_vec2
from .search import golden_section

AXES_TOL = 1e-8


@dataclass(frozen=True)
class AxesPair:
    e1: Vec2
    e2: Vec2
    symmetry_defect: float


def t_samples(sample_count: int) -> np.ndarray:
    """Log-symmetric sample of [-10, 10] that always contains 0 and +-1."""
    k = max(1, int(sample_count) // 2)
    pos = np.logspace(-3.0, 1.0, k)
    return np.unique(np.concatenate([pos, -pos, [0.0, 1.0, -1.0]]))


def check_axes(spec: NormSpec, e1, e2, sample_count: int = 100) -> AxesPair:
    """Normalize ``e1, e2`` and measure how far they are from a pair of axes."""
    a = np.asarray(as_vec2(e1), dtype=float)
    b = np.asarray(as_vec2(e2), dtype=float)
    det = a[0] * b[1] - a[1] * b[0]
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)))
    if scale == 0.0 or abs(det) <= 1e-12 * scale**2:
        raise SpecificationError("axes must be linearly independent")
    a = a / spec.norm(a)
    b = b / spec.norm(b)
    t = t_samples(sample_count)[:, None]
    four = np.stack([spec.norm(a + t * b), spec.norm(a - t * b), spec.norm(b + t * a), spec.norm(b - t * a)])
    defect = float(np.max(four.max(axis=0) - four.min(axis=0)))
    return AxesPair(Vec2(float(a[0]), float(a[1])), Vec2(float(b[0]), float(b[1])), defect)


def _axes_arrays(e1, e2):
    return np.asarray(e1, dtype=float), np.asarray(e2, dtype=float)


def f_func(spec: NormSpec, e1, e2, t):
    a, b = _axes_arrays(e1, e2)
    t = np.asarray(t, dtype=float)[..., None]
    out = spec.norm((1 + 2 * t) * a + (2 - t) * b)
    return float(out) if out.ndim == 0 else out


def g_func(spec: NormSpec, e1, e2, t):
    a, b = _axes_arrays(e1, e2)
    t = np.asarray(t, dtype=float)[..., None]
    out = spec.norm((1 + t) * a + (1 - t) * b)
    return float(out) if out.ndim == 0 else out


def h_value(spec: NormSpec, axes: AxesPair, t):
    """The reduced objective; ``t = inf`` gives the limit value."""
    t = np.asarray(t, dtype=float)
    a, b = _axes_arrays(axes.e1, axes.e2)
    fin = np.isfinite(t)
    tt = np.where(fin, t, 0.0)
    fp = f_func(spec, a, b, tt)
    fm = f_func(spec, a, b, -tt)
    g = g_func(spec, a, b, tt)
    h = (fp**2 + fm**2) / (5 * g**2)
    h_inf = 2 * spec.norm(2 * a - b) ** 2 / (5 * spec.norm(a - b) ** 2)
    out = np.where(fin, h, h_inf)
    return float(out) if out.ndim == 0 else out


def lemma_pair(axes: AxesPair, t: float) -> tuple[Vec2, Vec2]:
    """An isosceles pair on the unit sphere whose omega ratio is ``h(t)``.

    ``x`` is proportional to ``e1 + t e2`` and ``y`` to ``t e1 - e2``; both
    have the same norm on a symmetric plane.  ``t = inf`` gives
    ``x = e2, y = e1``.
    """
    a, b = _axes_arrays(axes.e1, axes.e2)
    if math.isinf(t):
        return Vec2(*map(float, b)), Vec2(*map(float, a))
    return Vec2(*map(float, a + t * b)), Vec2(*map(float, t * a - b))


def _unit_lemma_pair(spec, axes, t):
    x, y = (np.asarray(v, dtype=float) for v in lemma_pair(axes, t))
    return x / spec.norm(x), y / spec.norm(y)


def omega_closed_form(spec: NormSpec, axes: AxesPair, cfg: GridConfig | None = None) -> Estimate:
    """Omega of a symmetric plane from the reduced objective ``h``.

    ``t`` ranges over ``[0, inf)`` through ``t = s / (1 - s)`` with ``s`` on
    a uniform grid of ``[0, 1)``; the best cell is refined by golden-section
    search and the limit ``h(inf)`` competes as a separate candidate.
    """
    cfg = cfg or GridConfig()
    if not axes.symmetry_defect <= AXES_TOL:
        raise DomainError(
            f"axes symmetry defect {axes.symmetry_defect:.3e} exceeds {AXES_TOL:g}; the reduction does not apply"
        )
    n = cfg.theta_grid
    s = np.arange(n) / n
    hs = h_value(spec, axes, s / (1 - s))
    k = int(np.argmax(hs))  # argmax returns the first, i.e. smallest s, on ties
    best_s, best_v = float(s[k]), float(hs[k])

    if cfg.refine_budget > 0:
        lo = max(0.0, best_s - 1.0 / n)
        hi = min(float(np.nextafter(1.0, 0.0)), best_s + 1.0 / n)
        ss, v = golden_section(
            lambda u: h_value(spec, axes, u / (1 - u)),
            lo, hi, maximize=True, tol=cfg.refine_tol, max_iter=cfg.refine_budget,
        )
        if v > best_v:
            best_s, best_v = float(ss), float(v)

    h_inf = h_value(spec, axes, math.inf)
    if h_inf > best_v:
        best_s, best_v = 1.0, float(h_inf)

    t = math.inf if best_s >= 1.0 else best_s / (1 - best_s)
    x, y = _unit_lemma_pair(spec, axes, t)
    res = float(spec.norm(x + y) - spec.norm(x - y))
    witness = Witness(Vec2(float(x[0]), float(x[1])), Vec2(float(y[0]), float(y[1])), (("s", best_s), ("t", t)), res)
    _check_range(OMEGA, best_v, None, 1.6)
    return Estimate(OMEGA, best_v, witness, n, cfg.refine_tol, Direction.SUP)
