"""Acceptance criteria 1-10, one test per criterion.

Each test records a PASS/FAIL line (printed in the terminal summary and
with ``-s``) before asserting, so a failing criterion still reports what
was measured.
"""

import json
import math
import time

import numpy as np
import pytest

from isoconst import cli
from isoconst.estimators import (
    BR,
    CNJ,
    DCONST,
    JAMES,
    OMEGA,
    OMEGA_PRIME,
    SCHAFFER,
    Delta,
    Gamma,
    GridConfig,
    _unit_isosceles,
    estimate,
    estimate_omega,
    reevaluate,
)
from isoconst.geometry import HEX, L2, LINF, AffineImage, unit_points, verify_norm_axioms
from isoconst.orthogonality import DEFAULT_TOL, scan_table
from isoconst.relations import compute_estimates, default_battery, evaluate_relations
from isoconst.symmetric_plane import check_axes, omega_closed_form

BATTERY = default_battery()
LABELS = [b[0] for b in BATTERY]


def cold():
    _unit_isosceles.cache_clear()
    scan_table.cache_clear()


def record(log, n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    log[n] = (bool(ok), detail)
    assert ok, line


@pytest.fixture(scope="module")
def battery_run():
    """Default battery at grid 1024 on one worker, timed from a cold cache."""
    cold()
    cfg = GridConfig(1024)
    t0 = time.perf_counter()
    estimates, reports = {}, []
    for label, spec in BATTERY:
        est, err = compute_estimates(spec, cfg, workers=1)
        estimates[label] = est
        reports.extend(evaluate_relations(label, spec, est, err))
    reports.sort(key=lambda r: (r.norm_label, r.relation_id))
    elapsed = time.perf_counter() - t0
    return estimates, reports, elapsed


def pick(reports, rid):
    return {r.norm_label: r for r in reports if r.relation_id == rid}


# 1 --------------------------------------------------------------------------------


def test_criterion_1_linf_exact_value(acceptance_log):
    cold()
    t0 = time.perf_counter()
    om = estimate_omega(LINF, GridConfig(2048), workers=1).value
    closed = omega_closed_form(LINF, check_axes(LINF, (1, 0), (0, 1))).value
    elapsed = time.perf_counter() - t0
    ok = abs(om - 1.6) <= 1e-4 and abs(closed - 1.6) <= 1e-9 and elapsed <= 5.0
    record(acceptance_log, 1, ok, f"Omega={om:.12g} closed form={closed:.12g} in {elapsed:.2f}s")


# 2 --------------------------------------------------------------------------------


def _orbit_distance(x, y):
    """Distance of (x, y) to the hexagon maximizer pair under swap and joint negation."""
    target = np.array([[1 / 3, 1.0], [1.0, 1 / 3]])
    pair = np.array([x, y])
    orbit = [pair, pair[::-1], -pair, -pair[::-1]]
    return min(float(np.max(np.abs(p - target))) for p in orbit)


def test_criterion_2_hex_exact_value(acceptance_log):
    dists = []
    for n in (1024, 2048):
        w = estimate_omega(HEX, GridConfig(n), workers=1).witness
        dists.append(_orbit_distance(w.x, w.y))
    cold()
    t0 = time.perf_counter()
    est = estimate_omega(HEX, GridConfig(4096), workers=1)
    elapsed = time.perf_counter() - t0
    dists.append(_orbit_distance(est.witness.x, est.witness.y))
    converging = dists[-1] <= 1e-6 and all(b <= a + 1e-9 for a, b in zip(dists, dists[1:]))
    ok = abs(est.value - 1.225) <= 1e-4 and converging and elapsed <= 10.0
    record(
        acceptance_log, 2, ok,
        f"Omega={est.value:.12g} in {elapsed:.2f}s, witness distance by grid "
        + ", ".join(f"{d:.1e}" for d in dists),
    )


# 3 --------------------------------------------------------------------------------


def test_criterion_3_inner_product_collapse(acceptance_log):
    cfg = GridConfig()
    got = {k.label: estimate(L2, k, cfg).value for k in (OMEGA, OMEGA_PRIME, CNJ, BR, Gamma(1 / 3))}
    want = {"omega": (1.0, 1e-6), "omega-prime": (1.0, 1e-6), "cnj": (1.0, 1e-6), "br": (0.0, 1e-3),
            "gamma(0.333333333333)": (10 / 9, 1e-4)}
    ok = all(abs(got[k] - v) <= tol for k, (v, tol) in want.items())
    record(acceptance_log, 3, ok, " ".join(f"{k}={v:.10g}" for k, v in got.items()))


# 4 --------------------------------------------------------------------------------


def test_criterion_4_gamma_identity(acceptance_log, battery_run):
    _, reports, elapsed = battery_run
    rows = pick(reports, "gamma.identity")
    worst = max(r.slack for r in rows.values())
    ok = set(rows) == set(LABELS) and worst <= 2e-3 and elapsed <= 120.0
    record(acceptance_log, 4, ok, f"max |Omega' - 0.9 gamma(1/3)| = {worst:.2e} over {len(rows)} norms, battery {elapsed:.1f}s")


# 5 --------------------------------------------------------------------------------

BOUND_IDS = ("omega.upper", "omega_prime.lower", "omega_prime.upper", "james.lower", "james.upper", "cnj.bound")


def test_criterion_5_bound_suite(acceptance_log, battery_run):
    _, reports, _ = battery_run
    rows = [r for r in reports if r.relation_id in BOUND_IDS]
    worst = min(rows, key=lambda r: r.slack)
    tight = [pick(reports, rid)["linf"].slack for rid in ("james.upper", "cnj.bound")]
    ok = (
        len(rows) == len(BOUND_IDS) * len(LABELS)
        and worst.slack >= -2e-3
        and not any(r.error for r in rows)
        and all(abs(s) <= 2e-3 for s in tight)
    )
    record(
        acceptance_log, 5, ok,
        f"min slack {worst.slack:.2e} ({worst.norm_label} {worst.relation_id}); "
        f"linf slack james.upper={tight[0]:.1e} cnj.bound={tight[1]:.1e}",
    )


# 6 --------------------------------------------------------------------------------


def test_criterion_6_nonsquare_equivalence(acceptance_log, battery_run):
    _, reports, _ = battery_run
    rows = pick(reports, "nonsquare.equivalence")
    classes = {lab: int(r.lhs) for lab, r in rows.items()}
    expected = {"l1": 1, "linf": 1, "lp(1.5)": 0, "l2": 0, "lp(3)": 0}
    ok = (
        set(rows) == set(LABELS)
        and all(r.passed for r in rows.values())
        and all(classes[k] == v for k, v in expected.items())
    )
    record(acceptance_log, 6, ok, "degenerate: " + ", ".join(k for k, v in classes.items() if v) or "none")


# 7 --------------------------------------------------------------------------------


def test_criterion_7_js_product(acceptance_log, battery_run):
    _, reports, _ = battery_run
    rows = pick(reports, "js.product")
    worst = max(r.slack for r in rows.values())
    ok = set(rows) == set(LABELS) and worst <= 4e-3
    record(acceptance_log, 7, ok, f"max |J S - 2| = {worst:.2e}")


# 8 --------------------------------------------------------------------------------


def _unit(spec, ang):
    d = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    return d / spec.norm(d)[..., None]


def brute_force_pairs(spec, n_theta=20000, n_phi=400, iters=60, block=1000):
    """Unit isosceles pairs with x on a uniform angle grid, no refinement in x.

    Partners come from a sign scan of the residual over a closed half
    circle of directions followed by Illinois regula falsi.
    """
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    phi = np.pi * np.arange(n_phi + 1) / n_phi
    ys_scan = _unit(spec, phi)
    xs_out, ys_out = [], []
    for a in range(0, n_theta, block):
        x = _unit(spec, theta[a : a + block])
        r = spec.norm(x[:, None] + ys_scan[None]) - spec.norm(x[:, None] - ys_scan[None])
        i, j = np.nonzero(np.sign(r[:, :-1]) * np.sign(r[:, 1:]) < 0)
        zi, zj = np.nonzero(r[:, :-1] == 0)
        lo, hi = phi[j].copy(), phi[j + 1].copy()
        flo, fhi = r[i, j].copy(), r[i, j + 1].copy()
        xb = x[i]
        side = np.zeros(len(i))
        for _ in range(iters):
            m = hi - fhi * (hi - lo) / (fhi - flo)
            m = np.where(np.isfinite(m) & (m > lo) & (m < hi), m, 0.5 * (lo + hi))
            u = _unit(spec, m)
            fm = spec.norm(xb + u) - spec.norm(xb - u)
            keep_hi = np.sign(fm) == np.sign(flo)
            lo, flo = np.where(keep_hi, m, lo), np.where(keep_hi, fm, flo)
            hi, fhi = np.where(keep_hi, hi, m), np.where(keep_hi, fhi, fm)
            # Illinois step: halve the value at an endpoint retained twice in a row
            fhi = np.where(keep_hi & (side == 1), fhi / 2, fhi)
            flo = np.where(~keep_hi & (side == -1), flo / 2, flo)
            side = np.where(keep_hi, 1, -1)
        root = np.where(np.abs(flo) < np.abs(fhi), lo, hi)
        xs_out += [xb, x[zi]]
        ys_out += [_unit(spec, root), ys_scan[zj]]
    x, y = np.concatenate(xs_out), np.concatenate(ys_out)
    return np.concatenate([x, x]), np.concatenate([y, -y])


def test_criterion_8_oracle_equivalence(acceptance_log):
    cfg = GridConfig(2048)
    worst, where = 0.0, ""
    for label, spec in BATTERY:
        x, y = brute_force_pairs(spec)
        assert np.max(np.abs(spec.norm(x + y) - spec.norm(x - y))) <= 1e-12
        s = spec.norm(x + y)
        ratio = (spec.norm(x + 2 * y) ** 2 + spec.norm(2 * x + y) ** 2) / (5 * s**2)
        oracle = {"omega": ratio.max(), "james": s.max(), "schaffer": s.min()}
        for kind in (OMEGA, JAMES, SCHAFFER):
            d = abs(estimate(spec, kind, cfg).value - oracle[kind.tag])
            if d >= worst:
                worst, where = d, f"{label} {kind.tag}"
    record(acceptance_log, 8, worst <= 5e-4, f"max |production - brute force| = {worst:.2e} ({where})")


# 9 --------------------------------------------------------------------------------


def test_criterion_9_isometry_invariance(acceptance_log):
    m = np.random.default_rng(20240917).normal(size=(2, 2))
    assert abs(np.linalg.det(m)) > 1e-3
    img = AffineImage(L2, tuple(map(tuple, m)))
    cfg = GridConfig(1024)
    kinds = (OMEGA, OMEGA_PRIME, JAMES, SCHAFFER, CNJ, Gamma(1 / 3), Delta(1.0), DCONST, BR)
    diffs = {k.label: abs(estimate(img, k, cfg).value - estimate(L2, k, cfg).value) for k in kinds}
    worst = max(diffs, key=diffs.get)
    record(
        acceptance_log, 9, diffs[worst] <= 2e-3,
        f"{len(kinds)} constants, max deviation {diffs[worst]:.2e} ({worst}), cond(M)={np.linalg.cond(m):.1f}",
    )


# 10 -------------------------------------------------------------------------------


def _cli_json(argv):
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    assert code == 0
    return buf.getvalue()


def test_criterion_10_property_suites(acceptance_log, battery_run):
    estimates, _, _ = battery_run
    problems = []

    theta = 2 * math.pi * np.arange(4096) / 4096
    for label, spec in BATTERY:
        rep = verify_norm_axioms(spec, 1000)
        if not rep.passed:
            problems.append(f"axioms {label}: {rep.counterexample}")
        _, pts = unit_points(spec, theta)
        if np.max(np.abs(spec.norm(pts) - 1.0)) > 1e-10:
            problems.append(f"gauge {label}")

    checked = 0
    for label, spec in BATTERY:
        for kind, est in estimates[label].items():
            checked += 1
            if abs(reevaluate(spec, est) - est.value) > est.refine_tol:
                problems.append(f"witness value {label} {kind.label}")
            if est.witness.residual is not None:
                x, y = np.array(est.witness.x), np.array(est.witness.y)
                if abs(spec.norm(x + y) - spec.norm(x - y)) > DEFAULT_TOL:
                    problems.append(f"witness residual {label} {kind.label}")

    argv = ["verify", "--battery", "default", "--format", "json", "--grid", "256", "--radius-grid", "16"]
    runs = [_cli_json(argv + ["--workers", w]) for w in ("1", "1", "8")]
    if len(set(runs)) != 1:
        problems.append("verify json differs between runs or worker counts")
    json.loads(runs[0])
    comp = ["compute", "--norm", "builtin:hex", "--constant", "omega-prime", "--grid", "512", "--radius-grid", "16"]
    if _cli_json(comp + ["--workers", "1"]) != _cli_json(comp + ["--workers", "8"]):
        problems.append("compute json differs between worker counts")

    record(
        acceptance_log, 10, not problems,
        f"{len(BATTERY)} norms x 1000 axiom samples, 4096-point gauge check, {checked} witnesses, "
        f"3 verify runs byte-identical" + ("" if not problems else "; problems: " + "; ".join(problems)),
    )
