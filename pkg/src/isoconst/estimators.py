"""Grid-plus-refinement estimators for the geometric constants of a plane.

Every estimator scans a fixed grid of sphere parameters, keeps the best
cell (ties broken toward the lexicographically smallest parameters) and
refines it with golden-section search.  The reported value is the
objective at a concrete witness, so suprema are certified lower bounds
and infima certified upper bounds.

Grid work is split into fixed-size chunks; ``workers`` only decides how
many chunks run at once, so results do not depend on it.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import BoundViolation, DomainError
from .geometry import NormSpec, Vec2, unit_points
from .orthogonality import (
    DEFAULT_TOL,
    OrthoKind,
    OrthoPair,
    birkhoff_directions,
    isosceles_roots,
    lambda_min,
)
from .search import golden_section, zoom_search

WORKERS_ENV = "ISOCONST_WORKERS"
BOUND_SLACK = 1e-9
ALPHA_EXP = 20
ALPHA_STEPS_PER_OCTAVE = 4
# local grid optima refined per estimate
STARTS_1D = 16
STARTS_ROOTS = 8
STARTS_FREE = 32
ZOOM_POINTS_2D = 17


class Direction(enum.Enum):
    SUP = "sup"
    INF = "inf"


TAGS = ("omega", "omega-prime", "james", "schaffer", "cnj", "gamma", "delta", "d", "br")


@dataclass(frozen=True)
class ConstantKind:
    tag: str
    param: float | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise DomainError(f"unknown constant {self.tag!r}; expected one of {', '.join(TAGS)}")
        if self.tag in ("gamma", "delta"):
            if self.param is None:
                raise DomainError(f"{self.tag} needs a parameter")
            p = float(self.param)
            hi = 1.0 if self.tag == "gamma" else 2.0
            if not 0.0 <= p <= hi:
                raise DomainError(f"{self.tag} parameter must lie in [0, {hi:g}], got {p}")
            object.__setattr__(self, "param", p)
        elif self.param is not None:
            raise DomainError(f"{self.tag} takes no parameter")

    @property
    def label(self) -> str:
        return self.tag if self.param is None else f"{self.tag}({self.param:.12g})"


OMEGA = ConstantKind("omega")
OMEGA_PRIME = ConstantKind("omega-prime")
JAMES = ConstantKind("james")
SCHAFFER = ConstantKind("schaffer")
CNJ = ConstantKind("cnj")
DCONST = ConstantKind("d")
BR = ConstantKind("br")


def Gamma(t: float) -> ConstantKind:
    return ConstantKind("gamma", t)


def Delta(eps: float) -> ConstantKind:
    return ConstantKind("delta", eps)


@dataclass(frozen=True)
class GridConfig:
    theta_grid: int = 2048
    radius_grid: int = 32
    refine_tol: float = 1e-10
    refine_budget: int = 200

    def __post_init__(self):
        if int(self.theta_grid) < 64:
            raise DomainError("theta_grid must be >= 64")
        if int(self.radius_grid) < 1:
            raise DomainError("radius_grid must be >= 1")
        if not self.refine_tol > 0:
            raise DomainError("refine_tol must be positive")
        if int(self.refine_budget) < 0:
            raise DomainError("refine_budget must be >= 0")


@dataclass(frozen=True)
class Witness:
    """The pair (and auxiliary parameters) at which an estimate is attained."""

    x: Vec2
    y: Vec2
    params: tuple = ()
    residual: float | None = None

    def param(self, name: str, default=None):
        return dict(self.params).get(name, default)


@dataclass(frozen=True)
class Estimate:
    constant: ConstantKind
    value: float
    witness: Witness
    grid_size: int
    refine_tol: float
    direction: Direction

    @property
    def pair(self) -> OrthoPair | None:
        """The witness as an isosceles pair, for the isosceles-type constants."""
        if self.witness.residual is None:
            return None
        return OrthoPair(self.witness.x, self.witness.y, self.witness.residual, OrthoKind.ISOSCELES)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _map_chunks(fn, n: int, chunk: int, workers: int | None):
    starts = list(range(0, n, chunk))
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(starts) == 1:
        return [fn(s, min(s + chunk, n)) for s in starts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda s: fn(s, min(s + chunk, n)), starts))


def theta_grid(n: int) -> np.ndarray:
    return 2.0 * math.pi * np.arange(n) / n


def _pick(values: np.ndarray, keys, maximize: bool) -> int:
    """Index of the best value; exact ties go to the smallest key tuple."""
    best = np.max(values) if maximize else np.min(values)
    cand = np.flatnonzero(values == best)
    if cand.size > 1:
        order = np.lexsort(tuple(np.asarray(k)[cand] for k in reversed(keys)))
        return int(cand[order[0]])
    return int(cand[0])


def _vec(v) -> Vec2:
    return Vec2(float(v[0]), float(v[1]))


def _check_range(kind: ConstantKind, value: float, lo: float | None, hi: float | None):
    if lo is not None and value < lo - BOUND_SLACK:
        raise BoundViolation(f"{kind.label} estimate {value!r} is below its lower bound {lo!r}")
    if hi is not None and value > hi + BOUND_SLACK:
        raise BoundViolation(f"{kind.label} estimate {value!r} is above its upper bound {hi!r}")


# objectives on isosceles pairs -------------------------------------------------


def _ratio(spec, x, y):
    return (spec.norm(x + 2 * y) ** 2 + spec.norm(2 * x + y) ** 2) / (5 * spec.norm(x + y) ** 2)


def _sum_norm(spec, x, y):
    return spec.norm(x + y)


def _lambda_value(spec, x, y):
    return lambda_min(spec, x, y)[1]


def omega_ratio(spec: NormSpec, x, y) -> float:
    """``(||x+2y||^2 + ||2x+y||^2) / (5 ||x+y||^2)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    den = float(spec.norm(x + y))
    if den == 0.0:
        raise DomainError("||x + y|| = 0; the ratio is undefined")
    return float(_ratio(spec, x, y))


ROOT_CHUNK = 256


@lru_cache(maxsize=32)
def _unit_isosceles(spec: NormSpec, n: int, workers: int | None):
    thetas = theta_grid(n)
    _, xs = unit_points(spec, thetas)

    def work(a, b):
        rs = isosceles_roots(spec, xs[a:b], 1.0, DEFAULT_TOL, thetas=thetas[a:b])
        return rs._replace(row=rs.row + a)

    parts = _map_chunks(work, n, ROOT_CHUNK, workers)
    roots = type(parts[0])(*(np.concatenate(f) for f in zip(*parts)))
    for arr in (thetas, xs, *roots):
        arr.setflags(write=False)
    return thetas, xs, roots


def _best_root_at(spec, theta, radius, objective, maximize):
    _, x = unit_points(spec, theta)
    rs = isosceles_roots(spec, x[None], radius, DEFAULT_TOL, thetas=np.array([theta]))
    xx = np.broadcast_to(x, rs.y.shape)
    v = objective(spec, xx, rs.y)
    j = _pick(v, [rs.phi], maximize)
    return float(v[j]), float(rs.phi[j]), rs.y[j], float(rs.residual[j]), x


def _best_root_rows(spec, theta, radius, objective, maximize):
    """Best objective over the partners of each ``u(theta[i])`` at ``radius[i]``."""
    _, x = unit_points(spec, theta)
    rs = isosceles_roots(spec, x, radius, DEFAULT_TOL, thetas=theta)
    v = objective(spec, x[rs.row], rs.y)
    out = np.full(len(x), -np.inf if maximize else np.inf)
    (np.maximum if maximize else np.minimum).at(out, rs.row, v)
    return out


def _peaks(v: np.ndarray, periodic, maximize: bool, k: int) -> list[tuple]:
    """Indices of up to ``k`` best grid cells that no axis neighbour beats.

    Axes flagged in ``periodic`` wrap around.  Ties go to the smallest
    index tuple, so the first entry is always the grid optimum.
    """
    s = v if maximize else -v
    mask = np.ones(v.shape, dtype=bool)
    for ax, per in enumerate(periodic):
        if v.shape[ax] < 2:
            continue
        for shift in (1, -1):
            nb = np.roll(s, shift, axis=ax)
            if not per:
                cut = [slice(None)] * v.ndim
                cut[ax] = 0 if shift == 1 else -1
                nb[tuple(cut)] = -np.inf
            mask &= s >= nb
    flat = np.flatnonzero(mask)
    order = np.lexsort((flat, -s.ravel()[flat]))[:k]
    return [tuple(int(j) for j in np.unravel_index(i, v.shape)) for i in flat[order]]


def _select(cands, maximize: bool, tol: float):
    """Pick from ``(value, key, payload)`` candidates.

    Values within ``tol`` of the best count as ties, resolved toward the
    smallest key; this keeps witnesses reproducible when several symmetric
    optima agree up to rounding.
    """
    vals = np.array([c[0] for c in cands])
    top = vals.max() if maximize else vals.min()
    tied = [c for c, v in zip(cands, vals) if abs(v - top) <= tol]
    return min(tied, key=lambda c: c[1])


def _per_row(rows, vals, n, maximize):
    out = np.full(n, -np.inf if maximize else np.inf)
    (np.maximum if maximize else np.minimum).at(out, rows, vals)
    return out


def _isosceles_estimate(spec, kind, cfg, objective, direction, workers, extra=None):
    maximize = direction is Direction.SUP
    n = cfg.theta_grid
    thetas, xs, roots = _unit_isosceles(spec, n, workers)
    per = _per_row(roots.row, objective(spec, xs[roots.row], roots.y), n, maximize)
    # (x, y) -> (-x, -y) preserves every objective, so peaks are sought on [0, pi)
    per = per[: n // 2]
    h = 2 * math.pi / n

    def value_at(th):
        return _best_root_at(spec, th, 1.0, objective, maximize)[0]

    cands = []
    for (i,) in _peaks(per, (True,), maximize, STARTS_1D):
        ths = [float(thetas[i])]
        if cfg.refine_budget > 0:
            t, _ = golden_section(
                value_at, ths[0] - h, ths[0] + h,
                maximize=maximize, tol=cfg.refine_tol, max_iter=cfg.refine_budget,
            )
            ths.append(float(np.mod(t, 2 * math.pi)))
        for th in ths:
            v, phi, y, res, x = _best_root_at(spec, th, 1.0, objective, maximize)
            cands.append((v, (th, phi), (y, res, x)))

    value, (th, phi), (y, res, x) = _select(cands, maximize, cfg.refine_tol)
    params = (("theta", th), ("phi", phi), ("r", 1.0))
    if extra is not None:
        params = params + extra(spec, x, y)
    return Estimate(kind, value, Witness(_vec(x), _vec(y), params, res), n, cfg.refine_tol, direction)


def estimate_omega(spec: NormSpec, cfg: GridConfig | None = None, workers: int | None = None) -> Estimate:
    """Supremum of the omega ratio over isosceles pairs on the unit sphere."""
    cfg = cfg or GridConfig()
    est = _isosceles_estimate(spec, OMEGA, cfg, _ratio, Direction.SUP, workers)
    _check_range(OMEGA, est.value, None, 1.6)
    return est


def estimate_james(spec: NormSpec, cfg: GridConfig | None = None, workers: int | None = None) -> Estimate:
    cfg = cfg or GridConfig()
    est = _isosceles_estimate(spec, JAMES, cfg, _sum_norm, Direction.SUP, workers)
    _check_range(JAMES, est.value, None, 2.0)
    return est


def estimate_schaffer(spec: NormSpec, cfg: GridConfig | None = None, workers: int | None = None) -> Estimate:
    cfg = cfg or GridConfig()
    est = _isosceles_estimate(spec, SCHAFFER, cfg, _sum_norm, Direction.INF, workers)
    _check_range(SCHAFFER, est.value, 1.0, None)
    return est


def _lambda_param(spec, x, y):
    lam, _ = lambda_min(spec, np.asarray(x)[None], np.asarray(y)[None])
    return (("lambda", float(lam[0])),)


def estimate_d(spec: NormSpec, cfg: GridConfig | None = None, workers: int | None = None) -> Estimate:
    """Infimum over unit isosceles pairs of ``min_lambda ||x + lambda y||``."""
    cfg = cfg or GridConfig()
    est = _isosceles_estimate(spec, DCONST, cfg, _lambda_value, Direction.INF, workers, extra=_lambda_param)
    _check_range(DCONST, est.value, 0.0, 1.0)
    return est


def estimate_omega_prime(spec: NormSpec, cfg: GridConfig | None = None, workers: int | None = None) -> Estimate:
    """Supremum of the omega ratio over ``x`` on the sphere, ``y`` in the ball.

    ``y = r u(phi)`` with ``r`` on a uniform grid over (0, 1].  The point
    ``y = 0`` contributes the exact value 1, and the ``r = 1`` search
    (the omega estimate) is carried along as a candidate because its
    constraint set is contained in this one.
    """
    cfg = cfg or GridConfig()
    n, R = cfg.theta_grid, cfg.radius_grid
    half = n // 2
    thetas = theta_grid(n)[:half]
    _, xs = unit_points(spec, thetas)
    radii = np.arange(1, R + 1) / R
    row_theta = np.repeat(np.arange(half), R)
    row_r = np.tile(radii, half)

    def work(a, b):
        rs = isosceles_roots(
            spec, xs[row_theta[a:b]], row_r[a:b], DEFAULT_TOL, thetas=thetas[row_theta[a:b]]
        )
        return _per_row(rs.row, _ratio(spec, xs[row_theta[a:b]][rs.row], rs.y), b - a, True)

    grid = np.concatenate(_map_chunks(work, half * R, ROOT_CHUNK, workers)).reshape(half, R)
    h = 2 * math.pi / n

    cands = []
    for i, m in _peaks(grid, (True, False), True, STARTS_ROOTS):
        pts = [(float(thetas[i]), float(radii[m]))]
        if cfg.refine_budget > 0:
            (t, rr), _ = zoom_search(
                lambda p: _best_root_rows(spec, p[:, 0], p[:, 1], _ratio, True),
                pts[0], [2 * h, 2.0 / R], [-math.inf, 1e-3 / R], [math.inf, 1.0],
                maximize=True, tol=cfg.refine_tol, max_rounds=cfg.refine_budget,
            )
            pts.append((float(np.mod(t, 2 * math.pi)), float(rr)))
        for th, r in pts:
            v, phi, y, res, x = _best_root_at(spec, th, r, _ratio, True)
            w = Witness(_vec(x), _vec(y), (("theta", th), ("phi", phi), ("r", r)), res)
            cands.append((v, (th, phi, r), w))

    value, _, witness = _select(cands, True, cfg.refine_tol)
    om = estimate_omega(spec, cfg, workers)
    if om.value > value:
        witness, value = om.witness, om.value
    if value < 1.0:
        # y = 0 is isosceles orthogonal to every x and gives exactly 1
        _, x0 = unit_points(spec, 0.0)
        witness = Witness(_vec(x0), Vec2(0.0, 0.0), (("theta", 0.0), ("phi", 0.0), ("r", 0.0)), 0.0)
        value = 1.0
    _check_range(OMEGA_PRIME, value, 1.0, 1.6)
    return Estimate(OMEGA_PRIME, value, witness, n, cfg.refine_tol, Direction.SUP)


# free-pair estimators --------------------------------------------------------


def _cnj_obj(spec, x, y):
    return (spec.norm(x + y) ** 2 + spec.norm(x - y) ** 2) / (2 * (spec.norm(x) ** 2 + spec.norm(y) ** 2))


def estimate_cnj(spec: NormSpec, cfg: GridConfig | None = None, workers: int | None = None) -> Estimate:
    """Von Neumann-Jordan constant over ``x = u(theta)``, ``y = r u(phi)``, ``r`` in [0, 1].

    Swapping x and y and joint scaling leave the quotient unchanged, and
    ``y -> -y`` does too, so ``phi`` ranges over a half circle.
    """
    cfg = cfg or GridConfig()
    n, R = cfg.theta_grid, cfg.radius_grid
    half = n // 2
    thetas = theta_grid(n)[:half]
    # both x -> -x and y -> -y preserve the quotient, so both angles live on [0, pi)
    _, xs = unit_points(spec, thetas)
    us = xs
    radii = np.arange(1, R + 1) / R
    nx = spec.norm(xs)
    nu = nx
    chunk = max(1, 2**18 // (half * R))

    def work(a, b):
        x = xs[a:b, None, None, :]
        y = radii[None, None, :, None] * us[None, :, None, :]
        num = spec.norm(x + y) ** 2 + spec.norm(x - y) ** 2
        den = 2 * (nx[a:b, None, None] ** 2 + (radii[None, None, :] * nu[None, :, None]) ** 2)
        v = num / den
        return v.max(axis=2), v.argmax(axis=2)

    parts = _map_chunks(work, half, chunk, workers)
    grid = np.concatenate([p[0] for p in parts])
    arg_r = np.concatenate([p[1] for p in parts])
    h = 2 * math.pi / n

    def f(p):
        _, x = unit_points(spec, p[:, 0])
        _, u = unit_points(spec, p[:, 1])
        return _cnj_obj(spec, x, p[:, 2:3] * u)

    cands = []
    for i, j in _peaks(grid, (True, True), True, STARTS_FREE):
        pts = [(float(thetas[i]), float(thetas[j]), float(radii[arg_r[i, j]]))]
        if cfg.refine_budget > 0:
            th, ph, r = pts[0]
            p, _ = zoom_search(
                f, pts[0], [2 * h, 2 * h, 2.0 / R], [-math.inf, -math.inf, 0.0], [math.inf, math.inf, 1.0],
                maximize=True, tol=cfg.refine_tol, max_rounds=cfg.refine_budget,
            )
            pts.append((float(np.mod(p[0], 2 * math.pi)), float(np.mod(p[1], 2 * math.pi)), float(p[2])))
        cands.extend((float(v), c, None) for v, c in zip(f(np.array(pts)), pts))

    value, (th, ph, r), _ = _select(cands, True, cfg.refine_tol)
    _, x = unit_points(spec, th)
    _, u = unit_points(spec, ph)
    y = r * u
    if value < 1.0:
        value, y, r = 1.0, np.zeros(2), 0.0
    witness = Witness(_vec(x), _vec(y), (("theta", th), ("phi", ph), ("r", r)))
    _check_range(CNJ, value, 1.0, 2.0)
    return Estimate(CNJ, value, witness, n, cfg.refine_tol, Direction.SUP)


def _gamma_obj(spec, x, y, t):
    return (spec.norm(x + t * y) ** 2 + spec.norm(x - t * y) ** 2) / 2


def estimate_gamma(spec: NormSpec, t: float, cfg: GridConfig | None = None, workers: int | None = None) -> Estimate:
    """``sup (||x + t y||^2 + ||x - t y||^2) / 2`` over unit x, y."""
    kind = Gamma(t)
    t = kind.param
    cfg = cfg or GridConfig()
    n = cfg.theta_grid
    thetas = theta_grid(n)
    _, xs = unit_points(spec, thetas)
    if t == 0.0:
        return Estimate(
            kind, 1.0, Witness(_vec(xs[0]), _vec(xs[0]), (("theta", 0.0), ("phi", 0.0))), n,
            cfg.refine_tol, Direction.SUP,
        )
    # the objective is even in x and in y separately: both angles live on [0, pi)
    half = n // 2
    xs = xs[:half]
    chunk = max(1, 2**18 // half)

    def work(a, b):
        return _gamma_obj(spec, xs[a:b, None, :], xs[None, :, :], t)

    grid = np.concatenate(_map_chunks(work, half, chunk, workers))
    h = 2 * math.pi / n

    def f(p):
        _, x = unit_points(spec, p[:, 0])
        _, y = unit_points(spec, p[:, 1])
        return _gamma_obj(spec, x, y, t)

    cands = []
    for i, j in _peaks(grid, (True, True), True, STARTS_FREE):
        pts = [(float(thetas[i]), float(thetas[j]))]
        if cfg.refine_budget > 0:
            th, ph = pts[0]
            p, _ = zoom_search(
                f, pts[0], [2 * h, 2 * h], [-math.inf, -math.inf], [math.inf, math.inf],
                maximize=True, points=ZOOM_POINTS_2D, tol=cfg.refine_tol, max_rounds=cfg.refine_budget,
            )
            pts.append((float(np.mod(p[0], 2 * math.pi)), float(np.mod(p[1], 2 * math.pi))))
        cands.extend((float(v), c, None) for v, c in zip(f(np.array(pts)), pts))

    value, (th, ph), _ = _select(cands, True, cfg.refine_tol)
    _, x = unit_points(spec, th)
    _, y = unit_points(spec, ph)
    _check_range(kind, value, 1.0, (1.0 + t) ** 2)
    return Estimate(kind, value, Witness(_vec(x), _vec(y), (("theta", th), ("phi", ph))), n, cfg.refine_tol, Direction.SUP)


def _eps_crossing(spec, x, lo, hi, eps, iters=80):
    """Bisect ``||x - u(phi)|| = eps`` between lo (below eps) and hi (at or above)."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        _, u = unit_points(spec, mid)
        above = spec.norm(x - u) >= eps
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return hi


def estimate_delta(spec: NormSpec, eps: float, cfg: GridConfig | None = None, workers: int | None = None) -> Estimate:
    """Modulus of convexity: inf of ``1 - ||x+y||/2`` over unit x, y with ``||x-y|| >= eps``.

    Feasible grid pairs are scanned, and for every grid ``x`` the two
    directions where ``||x - y||`` first reaches ``eps`` on either side of
    ``x`` are added as candidates; refinement follows those boundary
    points.
    """
    kind = Delta(eps)
    eps = kind.param
    cfg = cfg or GridConfig()
    n = cfg.theta_grid
    thetas = theta_grid(n)
    _, xs = unit_points(spec, thetas)
    if eps == 0.0:
        return Estimate(
            kind, 0.0, Witness(_vec(xs[0]), _vec(xs[0]), (("theta", 0.0), ("phi", 0.0))), n,
            cfg.refine_tol, Direction.INF,
        )
    chunk = max(1, 2**18 // n)

    def work(a, b):
        x = xs[a:b, None, :]
        feas = spec.norm(x - xs[None]) >= eps
        v = np.where(feas, 1.0 - spec.norm(x + xs[None]) / 2, np.inf).ravel()
        k = int(np.argmin(v))
        i, j = divmod(k, n)
        return float(v[k]), float(thetas[a + i]), float(thetas[j])

    def boundary(th):
        th = np.asarray(th, dtype=float)
        _, x = unit_points(spec, th)
        cands = [_eps_crossing(spec, x, th, th + math.pi, eps), _eps_crossing(spec, x, th, th - math.pi, eps)]
        vals = []
        for ph in cands:
            _, y = unit_points(spec, ph)
            vals.append(1.0 - spec.norm(x + y) / 2)
        vals = np.stack(vals)
        cands = np.stack(cands)
        k = np.argmin(vals, axis=0)
        idx = np.arange(vals.shape[1]) if vals.ndim > 1 else ()
        return vals[k, idx], np.mod(cands[k, idx], 2 * math.pi)

    best = None
    for part in _map_chunks(work, n, chunk, workers):
        if best is None or part[0] < best[0]:
            best = part
    bvals, bphi = boundary(thetas)
    i = _pick(bvals, [thetas, bphi], False)
    if best is None or bvals[i] < best[0] or best[0] == np.inf:
        best = (float(bvals[i]), float(thetas[i]), float(bphi[i]))
    value, th, ph = best

    if cfg.refine_budget > 0:
        h = 2 * math.pi / n
        t, _ = golden_section(
            lambda s: float(boundary(np.array([s]))[0][0]),
            float(thetas[i]) - h, float(thetas[i]) + h,
            tol=cfg.refine_tol, max_iter=cfg.refine_budget,
        )
        v, p = boundary(np.array([t]))
        if v[0] < value:
            value, th, ph = float(v[0]), float(np.mod(t, 2 * math.pi)), float(p[0])
    _, x = unit_points(spec, th)
    _, y = unit_points(spec, ph)
    _check_range(kind, value, 0.0, 1.0)
    return Estimate(kind, value, Witness(_vec(x), _vec(y), (("theta", th), ("phi", ph))), n, cfg.refine_tol, Direction.INF)


def alpha_grid() -> np.ndarray:
    k = ALPHA_EXP * ALPHA_STEPS_PER_OCTAVE
    return 2.0 ** (np.arange(-k, k + 1) / ALPHA_STEPS_PER_OCTAVE)


def _br_quotient(spec, x, y, alpha):
    ay = np.asarray(alpha)[..., None] * y
    return (spec.norm(x + ay) - spec.norm(x - ay)) / alpha


def estimate_br(spec: NormSpec, cfg: GridConfig | None = None, workers: int | None = None) -> Estimate:
    """Supremum of ``(||x + a y|| - ||x - a y||)/a`` over Birkhoff pairs and ``a > 0``."""
    cfg = cfg or GridConfig()
    n = cfg.theta_grid
    thetas = theta_grid(n)
    _, xs = unit_points(spec, thetas)
    alphas = alpha_grid()

    def work(a, b):
        row, phi, y = birkhoff_directions(spec, xs[a:b])
        x = xs[a:b][row]
        q = _br_quotient(spec, x[:, None, :], y[:, None, :], alphas[None, :])
        # the pair (x, -y) is in the set too and flips the sign
        q = q.ravel()
        pair = np.repeat(np.arange(len(row)), len(alphas))
        al = np.tile(alphas, len(row))
        k = _pick(q, [thetas[a:b][row][pair], phi[pair], al], True)
        p = pair[k]
        return float(q[k]), a + int(row[p]), float(phi[p]), y[p], float(al[k])

    best = None
    for part in _map_chunks(work, n, 32, workers):
        if best is None or part[0] > best[0]:
            best = part
    value, i, ph, y, al = best
    x = xs[i]

    if cfg.refine_budget > 0:
        step = 1.0 / ALPHA_STEPS_PER_OCTAVE
        s, v = golden_section(
            lambda s: float(_br_quotient(spec, x, y, 2.0**s)),
            math.log2(al) - step, math.log2(al) + step,
            maximize=True, tol=cfg.refine_tol, max_iter=cfg.refine_budget,
        )
        if v > value:
            value, al = v, 2.0**s
    witness = Witness(_vec(x), _vec(y), (("theta", float(thetas[i])), ("phi", ph), ("alpha", al)))
    _check_range(BR, value, 0.0, 1.0)
    return Estimate(BR, value, witness, n, cfg.refine_tol, Direction.SUP)


_DISPATCH: dict[str, Callable] = {
    "omega": estimate_omega,
    "omega-prime": estimate_omega_prime,
    "james": estimate_james,
    "schaffer": estimate_schaffer,
    "cnj": estimate_cnj,
    "d": estimate_d,
    "br": estimate_br,
}


def estimate(spec: NormSpec, kind: ConstantKind, cfg: GridConfig | None = None, workers: int | None = None) -> Estimate:
    if kind.tag == "gamma":
        return estimate_gamma(spec, kind.param, cfg, workers)
    if kind.tag == "delta":
        return estimate_delta(spec, kind.param, cfg, workers)
    return _DISPATCH[kind.tag](spec, cfg, workers)


def reevaluate(spec: NormSpec, est: Estimate) -> float:
    """Objective of ``est.constant`` recomputed at the witness."""
    x = np.asarray(est.witness.x, dtype=float)
    y = np.asarray(est.witness.y, dtype=float)
    tag = est.constant.tag
    if tag in ("omega", "omega-prime"):
        return 1.0 if not np.any(y) else float(_ratio(spec, x, y))
    if tag in ("james", "schaffer"):
        return float(spec.norm(x + y))
    if tag == "cnj":
        return float(_cnj_obj(spec, x, y))
    if tag == "gamma":
        return float(_gamma_obj(spec, x, y, est.constant.param))
    if tag == "delta":
        return float(1.0 - spec.norm(x + y) / 2)
    if tag == "d":
        lam = est.witness.param("lambda")
        return float(spec.norm(x + lam * y))
    if tag == "br":
        return float(_br_quotient(spec, x, y, est.witness.param("alpha")))
    raise DomainError(tag)
