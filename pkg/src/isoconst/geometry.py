"""Norm catalog for two-dimensional normed planes.

Every norm is a frozen, hashable dataclass with a vectorized ``norm``
method acting on arrays whose last axis has length two.  Scalar helpers
(`eval_norm`, `unit_point`) wrap the vectorized forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import SpecificationError

TWO_PI = 2.0 * math.pi

# relative tolerance used when matching functionals / vertices up to sign
_SYM_TOL = 1e-12


class Vec2(NamedTuple):
    x1: float
    x2: float


def as_vec2(v) -> Vec2:
    a, b = float(v[0]), float(v[1])
    if not (math.isfinite(a) and math.isfinite(b)):
        raise SpecificationError(f"vector coordinates must be finite, got ({a}, {b})")
    return Vec2(a, b)


class SpherePoint(NamedTuple):
    theta: float
    coords: Vec2


class NormSpec:
    """Base class of the norm catalog."""

    def norm(self, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, v) -> float:
        return eval_norm(self, v)


@dataclass(frozen=True)
class Lp(NormSpec):
    """The l_p norm; ``p = math.inf`` is the max norm."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1.0:
            raise SpecificationError(f"p must be >= 1, got {self.p!r}")
        object.__setattr__(self, "p", p)

    def norm(self, v):
        v = np.asarray(v, dtype=float)
        a = np.abs(v[..., 0])
        b = np.abs(v[..., 1])
        p = self.p
        if p == 1.0:
            return a + b
        if p == 2.0:
            return np.hypot(a, b)
        if math.isinf(p):
            return np.maximum(a, b)
        big = np.maximum(a, b)
        small = np.minimum(a, b)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(big > 0, small / np.where(big > 0, big, 1.0), 0.0)
        return big * (1.0 + ratio**p) ** (1.0 / p)


@dataclass(frozen=True)
class Polyhedral(NormSpec):
    """Norm whose unit ball is ``{v : <a_i, v> <= 1 for all i}``."""

    functionals: tuple

    def __post_init__(self):
        try:
            fs = tuple((float(a), float(b)) for a, b in self.functionals)
        except (TypeError, ValueError) as exc:
            raise SpecificationError(f"functionals must be pairs of numbers: {exc}") from None
        if not fs:
            raise SpecificationError("polyhedral norm needs at least one functional")
        arr = np.array(fs, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise SpecificationError("functionals must be finite")
        scale = np.max(np.abs(arr))
        for a in arr:
            if np.min(np.max(np.abs(arr + a), axis=1)) > _SYM_TOL * max(scale, 1.0):
                raise SpecificationError(
                    f"functional set is not centrally symmetric: -({a[0]}, {a[1]}) is missing"
                )
        if np.linalg.matrix_rank(arr, tol=1e-12 * max(scale, 1.0)) < 2:
            raise SpecificationError("functionals do not span the plane; the unit ball is unbounded")
        object.__setattr__(self, "functionals", fs)
        arr.setflags(write=False)
        object.__setattr__(self, "_a", arr)

    def norm(self, v):
        v = np.asarray(v, dtype=float)
        a = self._a
        hi = v[..., 0] * a[0, 0] + v[..., 1] * a[0, 1]
        lo = hi
        for k in range(1, len(a)):
            p = v[..., 0] * a[k, 0] + v[..., 1] * a[k, 1]
            hi = np.maximum(hi, p)
            lo = np.minimum(lo, p)
        # max(hi, -lo) makes ||-v|| == ||v|| bit-for-bit even when the
        # functional set is only symmetric up to rounding
        return np.maximum(hi, -lo)


@dataclass(frozen=True)
class HexagonalMixed(NormSpec):
    """``||x||_1`` when ``x1*x2 <= 0`` and ``||x||_inf`` when ``x1*x2 >= 0``."""

    def norm(self, v):
        v = np.asarray(v, dtype=float)
        x1 = v[..., 0]
        x2 = v[..., 1]
        a, b = np.abs(x1), np.abs(x2)
        return np.where(x1 * x2 <= 0, a + b, np.maximum(a, b))


@dataclass(frozen=True)
class AffineImage(NormSpec):
    """Pushforward of ``base`` under ``matrix``: ``||v|| = base(matrix^-1 v)``.

    ``matrix`` is then a linear isometry from the base plane onto this one.
    """

    base: NormSpec
    matrix: tuple

    def __post_init__(self):
        if not isinstance(self.base, NormSpec):
            raise SpecificationError("affine image base must be a norm spec")
        try:
            m = np.array(self.matrix, dtype=float)
        except (TypeError, ValueError) as exc:
            raise SpecificationError(f"matrix must be 2x2 numeric: {exc}") from None
        if m.shape != (2, 2) or not np.all(np.isfinite(m)):
            raise SpecificationError("matrix must be a finite 2x2 array")
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if not abs(det) > 1e-14 * max(np.max(np.abs(m)) ** 2, 1e-300):
            raise SpecificationError("matrix must be invertible (|det| > 0)")
        inv = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det
        inv.setflags(write=False)
        object.__setattr__(self, "matrix", tuple(tuple(float(c) for c in row) for row in m))
        object.__setattr__(self, "_inv", inv)

    def norm(self, v):
        v = np.asarray(v, dtype=float)
        inv = self._inv
        w = np.stack(
            [inv[0, 0] * v[..., 0] + inv[0, 1] * v[..., 1], inv[1, 0] * v[..., 0] + inv[1, 1] * v[..., 1]],
            axis=-1,
        )
        return self.base.norm(w)


L1 = Lp(1.0)
L2 = Lp(2.0)
LINF = Lp(math.inf)
HEX = HexagonalMixed()


def eval_norm(spec: NormSpec, v) -> float:
    """Norm of a single vector."""
    return float(spec.norm(np.asarray(as_vec2(v), dtype=float)))


def _base_angle(theta):
    """Split angles into (canonical theta in [0, 2pi), base angle in [0, pi), antipodal flag).

    The base angle is snapped to the float grid of [pi, 2pi) so that
    ``theta`` and ``theta + pi`` map to the same base with opposite flags.
    """
    s = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    s = np.where(s >= TWO_PI, 0.0, s)
    upper = s >= math.pi
    base = np.where(upper, s - math.pi, s)
    base = (base + math.pi) - math.pi
    wrap = base >= math.pi
    base = np.where(wrap, base - math.pi, base)
    upper = upper ^ wrap
    return s, base, upper


def unit_points(spec: NormSpec, theta) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized gauge parametrization of the unit sphere.

    Returns ``(theta mod 2pi, coords)`` where ``coords[..., :]`` is the
    direction ``(cos theta, sin theta)`` rescaled to unit norm.
    """
    s, base, upper = _base_angle(theta)
    d = np.stack([np.cos(base), np.sin(base)], axis=-1)
    d = d / spec.norm(d)[..., None]
    d = np.where(upper[..., None], -d, d)
    return s, d


def unit_point(spec: NormSpec, theta: float) -> SpherePoint:
    s, d = unit_points(spec, float(theta))
    return SpherePoint(float(s), Vec2(float(d[0]), float(d[1])))


def polyhedral_from_vertices(vertices: Sequence) -> Polyhedral:
    """Build the polyhedral norm whose unit ball is the given polygon.

    ``vertices`` must describe a centrally symmetric, strictly convex
    polygon in counterclockwise order.  Each edge ``(v_i, v_{i+1})``
    contributes the functional ``a`` solving ``<a, v_i> = <a, v_{i+1}> = 1``.
    """
    vs = np.array([as_vec2(v) for v in vertices], dtype=float)
    n = len(vs)
    if n < 4:
        raise SpecificationError(f"need at least 4 vertices, got {n}")
    if n % 2:
        raise SpecificationError("a centrally symmetric polygon has an even number of vertices")
    scale = np.max(np.abs(vs))
    h = n // 2
    if np.max(np.abs(vs[h:] + vs[:h])) > _SYM_TOL * max(scale, 1.0):
        raise SpecificationError("vertices are not centrally symmetric (v[i + n/2] != -v[i])")
    e = np.roll(vs, -1, axis=0) - vs
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    if np.any(cross <= 1e-14 * max(scale, 1.0) ** 2):
        raise SpecificationError("vertices do not form a strictly convex counterclockwise polygon")
    funcs = []
    for i in range(n):
        p, q = vs[i], vs[(i + 1) % n]
        det = p[0] * q[1] - p[1] * q[0]
        if det <= 0:
            raise SpecificationError("origin is not interior to the polygon")
        funcs.append(((q[1] - p[1]) / det, (p[0] - q[0]) / det))
    # exact central symmetry of the functional set
    for i in range(h):
        funcs[i + h] = (-funcs[i][0], -funcs[i][1])
    return Polyhedral(tuple(funcs))


@dataclass
class AxiomReport:
    passed: bool
    samples: int
    homogeneity_violations: int = 0
    triangle_violations: int = 0
    symmetry_violations: int = 0
    counterexample: dict | None = field(default=None)


def verify_norm_axioms(spec: NormSpec, sample_count: int = 1000, seed: int = 0) -> AxiomReport:
    """Spot-check homogeneity, the triangle inequality and symmetry on random pairs."""
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((sample_count, 2)) * np.exp(rng.uniform(-3, 3, (sample_count, 1)))
    v = rng.standard_normal((sample_count, 2)) * np.exp(rng.uniform(-3, 3, (sample_count, 1)))
    lam = rng.choice(np.array([-2.0, -1.0, 0.5, 3.0]), size=sample_count) * rng.uniform(0.1, 10, sample_count)
    nu, nv = spec.norm(u), spec.norm(v)

    hom_err = np.abs(spec.norm(lam[:, None] * u) - np.abs(lam) * nu)
    hom_bad = hom_err > 1e-10 * np.maximum(np.abs(lam) * nu, 1.0)
    tri_bad = spec.norm(u + v) > nu + nv + 1e-10 * np.maximum(nu + nv, 1.0)
    sym_bad = spec.norm(-u) != nu
    pos_bad = (nu <= 0) | ~np.isfinite(nu)

    report = AxiomReport(
        passed=not (hom_bad.any() or tri_bad.any() or sym_bad.any() or pos_bad.any()),
        samples=sample_count,
        homogeneity_violations=int(hom_bad.sum()),
        triangle_violations=int(tri_bad.sum()),
        symmetry_violations=int(sym_bad.sum() + pos_bad.sum()),
    )
    for name, bad in (("homogeneity", hom_bad), ("triangle", tri_bad), ("symmetry", sym_bad | pos_bad)):
        if bad.any():
            i = int(np.argmax(bad))
            report.counterexample = {
                "axiom": name,
                "u": tuple(u[i].tolist()),
                "v": tuple(v[i].tolist()),
                "lambda": float(lam[i]),
            }
            break
    return report


def describe(spec: NormSpec) -> str:
    """Short human label for a norm spec."""
    if isinstance(spec, Lp):
        if math.isinf(spec.p):
            return "linf"
        if spec.p in (1.0, 2.0):
            return f"l{int(spec.p)}"
        return f"lp({spec.p:g})"
    if isinstance(spec, HexagonalMixed):
        return "hex"
    if isinstance(spec, Polyhedral):
        return f"polyhedral[{len(spec.functionals)}]"
    if isinstance(spec, AffineImage):
        return f"affine({describe(spec.base)})"
    return type(spec).__name__
