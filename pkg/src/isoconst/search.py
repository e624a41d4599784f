"""Derivative-free one-dimensional search used for refinement."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    maximize: bool = False,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Golden-section search on [a, b].

    Returns the best point evaluated (endpoints included) and its value,
    so the result never does worse than the bracket ends even when ``f``
    is not unimodal on the bracket.
    """
    sign = -1.0 if maximize else 1.0

    def g(t):
        return sign * f(t)

    if b < a:
        a, b = b, a
    best_t, best_v = a, g(a)
    vb = g(b)
    if vb < best_v:
        best_t, best_v = b, vb

    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = g(c), g(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = g(d)
    for t, v in ((c, fc), (d, fd)):
        if v < best_v:
            best_t, best_v = t, v
    return best_t, sign * best_v


def golden_section_vec(f, a, b, *, iters: int = 64, maximize: bool = False):
    """Golden-section search run elementwise on arrays of brackets.

    ``f`` maps an array of abscissae (one per bracket) to values.  A fixed
    number of iterations is used so all brackets advance in lockstep.
    Returns the best abscissa and value seen for every bracket, endpoints
    included.
    """
    sign = -1.0 if maximize else 1.0
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    fa, fb = sign * f(a), sign * f(b)
    best_t = np.where(fb < fa, b, a)
    best_v = np.minimum(fa, fb)

    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = sign * f(c), sign * f(d)
    for t, v in ((c, fc), (d, fd)):
        upd = v < best_v
        best_t = np.where(upd, t, best_t)
        best_v = np.where(upd, v, best_v)

    for _ in range(iters):
        left = fc <= fd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        w = b - a
        new = np.where(left, b - INV_PHI * w, a + INV_PHI * w)
        fnew = sign * f(new)
        c, d = np.where(left, new, d), np.where(left, c, new)
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
        upd = fnew < best_v
        best_t = np.where(upd, new, best_t)
        best_v = np.where(upd, fnew, best_v)
    return best_t, sign * best_v


def zoom_search(
    f,
    center,
    half,
    lower,
    upper,
    *,
    maximize: bool = False,
    points: int = 9,
    tol: float = 1e-10,
    max_rounds: int = 200,
):
    """Shrinking local grid search in a box.

    Each round evaluates a ``points ** d`` grid spanning ``center +- half``
    (clipped to ``[lower, upper]``) in a single vectorized call of ``f``,
    which maps an ``(m, d)`` array to ``m`` values.  The window moves to
    the best point and halves whenever that point is interior.  Unlike
    coordinate sweeps this follows narrow diagonal ridges, which are
    common for polyhedral norms.  When a round brings no improvement the
    grids with a single axis halved are tried too, so the window can turn
    anisotropic when the ridge is much sharper along one axis.
    Returns the best point evaluated and its value.
    """
    sign = -1.0 if maximize else 1.0
    c = np.array(center, dtype=float)
    w = np.array(half, dtype=float)
    lo = np.array(lower, dtype=float)
    hi = np.array(upper, dtype=float)
    d = len(c)
    steps = np.linspace(-1.0, 1.0, points)
    offsets = np.stack(np.meshgrid(*([steps] * d), indexing="ij"), axis=-1).reshape(-1, d)
    best_p = c.copy()
    best_v = sign * float(np.asarray(f(c[None]))[0])

    def probe(width):
        pts = np.clip(c + offsets * width, lo, hi)
        v = sign * np.asarray(f(pts), dtype=float)
        k = int(np.argmin(v))
        return pts, k, float(v[k])

    for _ in range(max_rounds):
        if np.all(w <= tol):
            break
        pts, k, v = probe(w)
        width = w
        if not v < best_v and d > 1:
            for i in range(d):
                if w[i] <= tol:
                    continue
                wi = w.copy()
                wi[i] *= 0.5
                p2, k2, v2 = probe(wi)
                if v2 < v:
                    pts, k, v, width = p2, k2, v2, wi
        if v < best_v:
            best_p, best_v = pts[k].copy(), v
            # keep the width along axes where the best point sits on the window edge
            stuck = (np.abs(offsets[k]) == 1.0) & (pts[k] > lo) & (pts[k] < hi)
            w = np.where(stuck, width, 0.5 * width)
        else:
            w = 0.5 * w
        c = best_p.copy()
    return best_p, sign * best_v
