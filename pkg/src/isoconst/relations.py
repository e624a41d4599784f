"""Proven inequalities and identities between the constants, checked per norm.

Every check reads already computed estimates, so the two sides of a report
are exactly the estimate values (or closed expressions in them).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import InputError
from .estimators import (
    BOUND_SLACK,
    CNJ,
    JAMES,
    OMEGA,
    OMEGA_PRIME,
    SCHAFFER,
    ConstantKind,
    Estimate,
    Gamma,
    GridConfig,
    estimate,
)
from .geometry import HEX, L1, L2, LINF, Lp, NormSpec, describe, polyhedral_from_vertices

BOUND_TOL = 2e-3
IDENTITY_TOL = 2e-3
JS_TOL = 4e-3
DEFAULT_TAU = 0.02
BATTERY_SEED = 20240917
GAMMA_THIRD = Gamma(1.0 / 3.0)

INEQUALITY = "inequality"
IDENTITY = "identity"
EQUIVALENCE = "equivalence"


@dataclass(frozen=True)
class RelationReport:
    relation_id: str
    norm_label: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    tolerance: float
    kind: str = INEQUALITY
    asserted: bool = True
    detail: str = ""
    error: str | None = None

    @property
    def failed(self) -> bool:
        """True when an asserted relation does not hold."""
        return self.asserted and not self.passed


def _leq(rid, label, lhs, rhs, tol, detail="", asserted=True):
    lhs, rhs = float(lhs), float(rhs)
    slack = rhs - lhs
    return RelationReport(rid, label, lhs, rhs, slack, bool(slack >= -tol), tol, INEQUALITY, asserted, detail)


def _eq(rid, label, lhs, rhs, tol, detail=""):
    lhs, rhs = float(lhs), float(rhs)
    slack = abs(lhs - rhs)
    return RelationReport(rid, label, lhs, rhs, slack, bool(slack <= tol), tol, IDENTITY, True, detail)


def _need(estimates: Mapping[ConstantKind, Estimate], *kinds: ConstantKind) -> list[float]:
    missing = [k.label for k in kinds if k not in estimates]
    if missing:
        raise InputError(f"missing estimate(s): {', '.join(missing)}")
    return [float(estimates[k].value) for k in kinds]


def _label(spec, label):
    return describe(spec) if label is None else label


def check_omega_range(spec: NormSpec, estimates, label: str | None = None) -> list[RelationReport]:
    """``Omega <= 8/5`` and ``1 <= Omega' <= 8/5``; ``Omega >= 1`` is reported only."""
    om, omp = _need(estimates, OMEGA, OMEGA_PRIME)
    lab = _label(spec, label)
    return [
        _leq("omega.upper", lab, om, 1.6, BOUND_SLACK, "Omega <= 8/5"),
        _leq("omega.lower", lab, 1.0, om, BOUND_SLACK, "1 <= Omega (informational)", asserted=False),
        _leq("omega_prime.lower", lab, 1.0, omp, BOUND_SLACK, "1 <= Omega'"),
        _leq("omega_prime.upper", lab, omp, 1.6, BOUND_SLACK, "Omega' <= 8/5"),
    ]


def james_lower(j: float) -> float:
    return 1.6 + 0.4 / j**2 - 1.6 / j


def james_upper(j: float) -> float:
    return 0.4 + j**2 / 10 + 0.4 * j


def check_james_bounds(spec: NormSpec, estimates, label: str | None = None) -> list[RelationReport]:
    """Two-sided bound on Omega in terms of the James constant J."""
    j, om = _need(estimates, JAMES, OMEGA)
    lab = _label(spec, label)
    return [
        _leq("james.lower", lab, james_lower(j), om, BOUND_TOL, f"8/5 + (2/5)/J^2 - (8/5)/J <= Omega, J={j:.6g}"),
        _leq("james.upper", lab, om, james_upper(j), BOUND_TOL, f"Omega <= 2/5 + J^2/10 + 2J/5, J={j:.6g}"),
    ]


def check_cnj_bound(spec: NormSpec, estimates, label: str | None = None) -> list[RelationReport]:
    omp, c = _need(estimates, OMEGA_PRIME, CNJ)
    return [
        _leq("cnj.bound", _label(spec, label), omp, 0.4 * c + 0.8, BOUND_TOL, f"Omega' <= (2/5) C_NJ + 4/5, C_NJ={c:.6g}")
    ]


def check_gamma_identity(spec: NormSpec, estimates, label: str | None = None) -> list[RelationReport]:
    omp, g = _need(estimates, OMEGA_PRIME, GAMMA_THIRD)
    return [_eq("gamma.identity", _label(spec, label), omp, 0.9 * g, IDENTITY_TOL, f"Omega' = (9/10) gamma(1/3), gamma={g:.6g}")]


def check_nonsquare_equivalence(
    spec: NormSpec, estimates, tau: float = DEFAULT_TAU, label: str | None = None
) -> list[RelationReport]:
    """The plane is J-degenerate (``J >= 2 - tau``) iff it is Omega-extremal (``Omega >= 8/5 - tau``).

    ``lhs`` and ``rhs`` are the two classifications as 0/1.
    """
    if not 0.0 < tau <= 0.1:
        raise ValueError(f"tau must lie in (0, 0.1], got {tau}")
    j, om = _need(estimates, JAMES, OMEGA)
    a = 1.0 if j >= 2.0 - tau else 0.0
    b = 1.0 if om >= 1.6 - tau else 0.0
    slack = abs(a - b)
    detail = f"J={j:.6g} {'>=' if a else '<'} {2 - tau:g}; Omega={om:.6g} {'>=' if b else '<'} {1.6 - tau:g}"
    return [RelationReport("nonsquare.equivalence", _label(spec, label), a, b, slack, slack == 0.0, 0.0, EQUIVALENCE, True, detail)]


def check_js_product(spec: NormSpec, estimates, label: str | None = None) -> list[RelationReport]:
    j, s = _need(estimates, JAMES, SCHAFFER)
    return [_eq("js.product", _label(spec, label), j * s, 2.0, JS_TOL, f"J S = 2, J={j:.6g}, S={s:.6g}")]


BATTERY_CONSTANTS: tuple[ConstantKind, ...] = (OMEGA, OMEGA_PRIME, JAMES, SCHAFFER, CNJ, GAMMA_THIRD)

# (check, relation ids it emits, constants it reads)
CHECKS: tuple[tuple[Callable, tuple[str, ...], tuple[ConstantKind, ...]], ...] = (
    (check_omega_range, ("omega.upper", "omega.lower", "omega_prime.lower", "omega_prime.upper"), (OMEGA, OMEGA_PRIME)),
    (check_james_bounds, ("james.lower", "james.upper"), (JAMES, OMEGA)),
    (check_cnj_bound, ("cnj.bound",), (OMEGA_PRIME, CNJ)),
    (check_gamma_identity, ("gamma.identity",), (OMEGA_PRIME, GAMMA_THIRD)),
    (check_nonsquare_equivalence, ("nonsquare.equivalence",), (JAMES, OMEGA)),
    (check_js_product, ("js.product",), (JAMES, SCHAFFER)),
)


# default battery ----------------------------------------------------------------


def _hull(points: np.ndarray) -> np.ndarray:
    """Convex hull, counterclockwise, collinear points dropped (monotone chain)."""
    pts = sorted(map(tuple, points))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def random_polyhedral(rng: np.random.Generator, pairs: int = 5):
    """Polyhedral norm whose ball is the hull of ``pairs`` random points and their negatives."""
    ang = np.sort(rng.uniform(0.0, math.pi, pairs))
    rad = rng.uniform(0.6, 1.4, pairs)
    half = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
    return polyhedral_from_vertices(_hull(np.concatenate([half, -half])))


def default_battery(seed: int = BATTERY_SEED) -> list[tuple[str, NormSpec]]:
    rng = np.random.default_rng(seed)
    norms = [("l1", L1), ("lp(1.5)", Lp(1.5)), ("l2", L2), ("lp(3)", Lp(3.0)), ("linf", LINF), ("hex", HEX)]
    for i in range(3):
        norms.append((f"random-polyhedral-{i + 1}", random_polyhedral(rng, pairs=int(rng.integers(3, 7)))))
    return norms


def compute_estimates(spec: NormSpec, cfg: GridConfig, workers: int | None = None, kinds=BATTERY_CONSTANTS):
    """Estimates for ``kinds``; failures are returned as messages instead of raised."""
    estimates: dict[ConstantKind, Estimate] = {}
    errors: dict[ConstantKind, str] = {}
    for kind in kinds:
        try:
            estimates[kind] = estimate(spec, kind, cfg, workers)
        except Exception as exc:  # noqa: BLE001 - reported per relation
            errors[kind] = f"{kind.label}: {type(exc).__name__}: {exc}"
    return estimates, errors


def evaluate_relations(label: str, spec: NormSpec, estimates, errors=None, tau: float = DEFAULT_TAU):
    errors = errors or {}
    out: list[RelationReport] = []
    for check, ids, needs in CHECKS:
        bad = [errors[k] for k in needs if k not in estimates and k in errors]
        if bad:
            msg = "; ".join(bad)
            out.extend(RelationReport(rid, label, math.nan, math.nan, math.nan, False, 0.0, error=msg) for rid in ids)
            continue
        if check is check_nonsquare_equivalence:
            out.extend(check(spec, estimates, tau=tau, label=label))
        else:
            out.extend(check(spec, estimates, label=label))
    return out


def run_battery(
    norms: Sequence[tuple[str, NormSpec]],
    cfg: GridConfig | None = None,
    workers: int | None = None,
    tau: float = DEFAULT_TAU,
) -> list[RelationReport]:
    """Every relation on every norm, ordered by (norm label, relation id)."""
    if not norms:
        raise InputError("battery is empty")
    cfg = cfg or GridConfig()
    reports: list[RelationReport] = []
    for label, spec in norms:
        est, err = compute_estimates(spec, cfg, workers)
        reports.extend(evaluate_relations(label, spec, est, err, tau))
    reports.sort(key=lambda r: (r.norm_label, r.relation_id))
    return reports
