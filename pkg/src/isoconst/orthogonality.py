"""Isosceles and Birkhoff orthogonality on a normed plane.

Partners are located on a fixed 720-direction scan of the unit sphere.
Only the half circle [0, pi) is evaluated: the isosceles residual is odd
and the Birkhoff defect is even under ``y -> -y``, and the parametrization
satisfies ``u(phi + pi) == -u(phi)`` on that half, so the other half is
filled in by negation.  Every result is therefore closed under sign.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DomainError
from .geometry import NormSpec, SpherePoint, Vec2, as_vec2, unit_point, unit_points
from .search import golden_section_vec

SCAN_POINTS = 720
MAX_BISECT = 200
DEFAULT_TOL = 1e-10
BIRKHOFF_TOL = 1e-9
LAMBDA_ITERS = 64


class OrthoKind(enum.Enum):
    ISOSCELES = "isosceles"
    BIRKHOFF = "birkhoff"


class OrthoPair(NamedTuple):
    x: Vec2
    y: Vec2
    residual: float
    kind: OrthoKind


class RootSet(NamedTuple):
    """Flat listing of partner roots, sorted by (row, phi)."""

    row: np.ndarray
    phi: np.ndarray
    y: np.ndarray
    residual: np.ndarray


@lru_cache(maxsize=128)
def scan_table(spec: NormSpec) -> tuple[np.ndarray, np.ndarray]:
    """Angles and unit directions for the first half of the scan circle."""
    half = SCAN_POINTS // 2
    phi = 2.0 * math.pi * np.arange(half) / SCAN_POINTS
    _, dirs = unit_points(spec, phi)
    phi.setflags(write=False)
    dirs.setflags(write=False)
    return phi, dirs


def isosceles_residual(spec: NormSpec, x, y) -> float:
    x = np.asarray(as_vec2(x))
    y = np.asarray(as_vec2(y))
    return float(spec.norm(x + y) - spec.norm(x - y))


def _residual(spec, x, y):
    return spec.norm(x + y) - spec.norm(x - y)


def isosceles_roots(
    spec: NormSpec,
    x: np.ndarray,
    radius: np.ndarray,
    tol: float = DEFAULT_TOL,
    thetas: np.ndarray | None = None,
) -> RootSet:
    """All isosceles partners ``y = radius[i] * u(phi)`` of each row ``x[i]``.

    Sign changes of the residual on the scan are bisected; scan points
    where the residual vanishes exactly are roots as they stand.
    ``thetas`` only labels rows in a `ConvergenceError`.
    """
    x = np.asarray(x, dtype=float).reshape(-1, 2)
    radius = np.broadcast_to(np.asarray(radius, dtype=float), (len(x),))
    phi_tab, dirs = scan_table(spec)
    half = len(phi_tab)

    ry = radius[:, None, None] * dirs[None]
    res = _residual(spec, x[:, None, :], ry)
    nxt = np.concatenate([res[:, 1:], -res[:, :1]], axis=1)

    z_row, z_k = np.nonzero(res == 0.0)
    b_row, b_k = np.nonzero(np.sign(res) * np.sign(nxt) < 0)

    lo = phi_tab[b_k].copy()
    hi = np.where(b_k + 1 < half, phi_tab[np.minimum(b_k + 1, half - 1)], math.pi)
    sgn_lo = np.sign(res[b_row, b_k])
    m = len(b_row)
    best_abs = np.full(m, np.inf)
    best_phi = lo.copy()
    best_y = np.zeros((m, 2))
    best_res = np.full(m, np.inf)
    active = np.ones(m, dtype=bool)

    for _ in range(MAX_BISECT):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        mid = 0.5 * (lo[idx] + hi[idx])
        _, u = unit_points(spec, mid)
        yy = radius[b_row[idx], None] * u
        rm = _residual(spec, x[b_row[idx]], yy)
        a = np.abs(rm)
        imp = a < best_abs[idx]
        j = idx[imp]
        best_abs[j] = a[imp]
        best_phi[j] = mid[imp]
        best_y[j] = yy[imp]
        best_res[j] = rm[imp]
        done = a <= tol
        same = np.sign(rm) == sgn_lo[idx]
        lo[idx] = np.where(same, mid, lo[idx])
        hi[idx] = np.where(same, hi[idx], mid)
        active[idx[done]] = False

    if active.any():
        i = int(np.flatnonzero(active)[0])
        th = None if thetas is None else float(np.asarray(thetas)[b_row[i]])
        raise ConvergenceError(
            f"isosceles partner not within tol={tol:g} after {MAX_BISECT} bisection steps"
            + ("" if th is None else f" at theta={th!r}")
            + f"; best residual {best_res[i]:.3e}",
            best_residual=float(best_res[i]),
            theta=th,
        )

    row = np.concatenate([z_row, b_row])
    phi = np.concatenate([phi_tab[z_k], best_phi])
    y = np.concatenate([ry[z_row, z_k], best_y])
    r = np.concatenate([np.zeros(len(z_row)), best_res])
    # antipodal copies: u(phi + pi) == -u(phi) for phi in [0, pi)
    row = np.concatenate([row, row])
    phi = np.concatenate([phi, phi + math.pi])
    y = np.concatenate([y, -y])
    r = np.concatenate([r, -r])
    order = np.lexsort((phi, row))
    return RootSet(row[order], phi[order], y[order], r[order])


def isosceles_partner(
    spec: NormSpec, theta_x: float, radius: float = 1.0, tol: float = DEFAULT_TOL
) -> list[OrthoPair]:
    """Isosceles partners of ``x = u(theta_x)`` on the sphere of the given radius.

    Every root found on the scan is returned; the list is closed under
    ``y -> -y``.
    """
    if not 0.0 < radius <= 1.0:
        raise DomainError(f"radius must lie in (0, 1], got {radius}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    x = np.asarray(unit_point(spec, theta_x).coords)
    roots = isosceles_roots(spec, x[None], np.array([radius]), tol, thetas=np.array([theta_x]))
    xv = Vec2(float(x[0]), float(x[1]))
    return [
        OrthoPair(xv, Vec2(float(y[0]), float(y[1])), float(r), OrthoKind.ISOSCELES)
        for y, r in zip(roots.y, roots.residual)
    ]


def lambda_min(spec: NormSpec, x: np.ndarray, y: np.ndarray, iters: int = LAMBDA_ITERS):
    """Vectorized ``min over lambda of ||x + lambda y||`` for rows of x, y.

    The bracket ``[-h, h]``, starting at ``h = ||x|| / ||y||``, is doubled
    until both ends are no lower than ``||x||``; convexity then puts a
    minimizer inside.  Golden-section search follows.  ``lambda = 0`` is
    always a candidate, so the minimum never exceeds ``||x||``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    shape = x.shape[:-1]
    x = x.reshape(-1, 2)
    y = y.reshape(-1, 2)
    nx = spec.norm(x)
    ny = spec.norm(y)
    h = np.where(ny > 0, nx / np.where(ny > 0, ny, 1.0), 0.0)
    h = np.where(h > 0, h, 1.0)

    def f(lam):
        return spec.norm(x + lam[:, None] * y)

    for _ in range(64):
        grow = (f(h) < nx) | (f(-h) < nx)
        if not grow.any():
            break
        h = np.where(grow, 2.0 * h, h)

    lam, val = golden_section_vec(f, -h, h, iters=iters)
    at_zero = val >= nx
    lam = np.where(at_zero, 0.0, lam)
    val = np.where(at_zero, nx, val)
    return lam.reshape(shape), val.reshape(shape)


def birkhoff_lambda_min(spec: NormSpec, x, y) -> tuple[float, float]:
    """Global minimizer of the convex map ``lambda -> ||x + lambda y||``."""
    x = np.asarray(as_vec2(x), dtype=float)
    y = np.asarray(as_vec2(y), dtype=float)
    if not np.any(y):
        raise DomainError("y must be nonzero")
    lam, val = lambda_min(spec, x[None], y[None])
    return float(lam[0]), float(val[0])


def is_birkhoff(spec: NormSpec, x, y, tol: float = BIRKHOFF_TOL) -> bool:
    xv = np.asarray(as_vec2(x), dtype=float)
    if not np.any(xv):
        raise DomainError("x must be nonzero")
    _, val = birkhoff_lambda_min(spec, x, y)
    return val >= float(spec.norm(xv)) - tol


def _birkhoff_defect(spec, x, phi):
    """``min_lambda ||x + lambda u(phi)|| - ||x||`` (always <= 0)."""
    _, u = unit_points(spec, phi)
    _, val = lambda_min(spec, x, u)
    return val - spec.norm(x)


def birkhoff_directions(spec: NormSpec, x: np.ndarray, tol: float = BIRKHOFF_TOL):
    """Birkhoff-orthogonal directions for each row of ``x``.

    Scan directions passing the test are kept as they are; each strict
    local maximum of the defect that fails is refined by golden-section
    over its two neighbouring cells and kept if it then passes.  Returns
    ``(row, phi, y)`` with unit ``y``, sorted by (row, phi) and closed
    under ``y -> -y``.
    """
    x = np.asarray(x, dtype=float).reshape(-1, 2)
    n = len(x)
    phi_tab, dirs = scan_table(spec)
    half = len(phi_tab)
    step = math.pi / half

    xs = np.repeat(x, half, axis=0)
    _, val = lambda_min(spec, xs, np.tile(dirs, (n, 1)))
    d = val.reshape(n, half) - spec.norm(x)[:, None]

    ok = d >= -tol
    prev = np.roll(d, 1, axis=1)
    nxt = np.roll(d, -1, axis=1)
    cand = ~ok & (d >= prev) & (d >= nxt)
    g_row, g_k = np.nonzero(ok)
    c_row, c_k = np.nonzero(cand)

    rows = [g_row]
    phis = [phi_tab[g_k]]
    if c_row.size:
        xc = x[c_row]
        center = phi_tab[c_k]
        t, dv = golden_section_vec(
            lambda p: _birkhoff_defect(spec, xc, p), center - step, center + step, iters=48, maximize=True
        )
        t = np.mod(t, math.pi)
        t = np.where(t >= math.pi, 0.0, t)
        dv = _birkhoff_defect(spec, xc, t)
        keep = dv >= -tol
        rr, tt = c_row[keep], t[keep]
        if rr.size:
            o = np.lexsort((tt, rr))
            rr, tt = rr[o], tt[o]
            fresh = np.ones(len(rr), dtype=bool)
            fresh[1:] = (rr[1:] != rr[:-1]) | (np.diff(tt) > 1e-9)
            rows.append(rr[fresh])
            phis.append(tt[fresh])

    row = np.concatenate(rows)
    phi = np.concatenate(phis)
    _, y = unit_points(spec, phi)
    row = np.concatenate([row, row])
    phi = np.concatenate([phi, phi + math.pi])
    y = np.concatenate([y, -y])
    order = np.lexsort((phi, row))
    return row[order], phi[order], y[order]


def birkhoff_partners(spec: NormSpec, theta_x: float, tol: float = BIRKHOFF_TOL) -> list[SpherePoint]:
    """Unit vectors ``y`` with ``u(theta_x)`` Birkhoff orthogonal to ``y``."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    x = np.asarray(unit_point(spec, theta_x).coords)
    _, phi, y = birkhoff_directions(spec, x[None], tol)
    return [SpherePoint(float(p), Vec2(float(a), float(b))) for p, (a, b) in zip(phi, y)]
