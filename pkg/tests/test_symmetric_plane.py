import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isoconst.errors import DomainError, SpecificationError
from isoconst.estimators import GridConfig, estimate_omega, omega_ratio
from isoconst.geometry import HEX, L1, L2, LINF, AffineImage, Lp, polyhedral_from_vertices
from isoconst.symmetric_plane import (
    check_axes,
    f_func,
    g_func,
    h_value,
    lemma_pair,
    omega_closed_form,
    t_samples,
)

OCTAGON = polyhedral_from_vertices(
    [(math.cos(k * math.pi / 4 + math.pi / 8), math.sin(k * math.pi / 4 + math.pi / 8)) for k in range(8)]
)
ROT = (math.cos(0.4), -math.sin(0.4)), (math.sin(0.4), math.cos(0.4))
# (plane, e1, e2) triples where (e1, e2) is a pair of axes
SYMMETRIC = [
    (LINF, (1, 0), (0, 1)),
    (L1, (1, 0), (0, 1)),
    (L2, (1, 0), (0, 1)),
    (L2, (0.6, 0.8), (-0.8, 0.6)),
    (Lp(1.5), (1, 0), (0, 1)),
    (Lp(3.0), (1, 0), (0, 1)),
    (Lp(3.0), (1, 1), (1, -1)),
    (LINF, (1, 1), (1, -1)),
    (OCTAGON, (1, 0), (0, 1)),
    # pushforward of the coordinate axes are the columns of ROT
    (AffineImage(Lp(3.0), ROT), (ROT[0][0], ROT[1][0]), (ROT[0][1], ROT[1][1])),
]
IDS = ["linf", "l1", "l2", "l2-rot", "lp1.5", "lp3", "lp3-diag", "linf-diag", "octagon", "lp3-rotated"]


def test_t_samples_cover_the_fixed_points():
    t = t_samples(100)
    assert {0.0, 1.0, -1.0} <= set(t)
    assert np.all(t == -t[::-1])
    assert t.max() == 10.0


@pytest.mark.parametrize("spec, e1, e2", SYMMETRIC, ids=IDS)
def test_axes_pass(spec, e1, e2):
    ax = check_axes(spec, e1, e2, 100)
    assert ax.symmetry_defect <= 1e-12
    assert spec(ax.e1) == pytest.approx(1.0) and spec(ax.e2) == pytest.approx(1.0)


def test_hex_coordinate_axes_fail():
    assert check_axes(HEX, (1, 0), (0, 1)).symmetry_defect >= 1.0


def test_dependent_axes_rejected():
    with pytest.raises(SpecificationError, match="independent"):
        check_axes(L2, (1, 2), (2, 4))
    with pytest.raises(SpecificationError):
        check_axes(L2, (0, 0), (0, 1))


def test_f_g_examples():
    assert f_func(LINF, (1, 0), (0, 1), 0.0) == 2.0
    assert g_func(LINF, (1, 0), (0, 1), 0.0) == 1.0
    assert f_func(L2, (1, 0), (0, 1), 1.0) == pytest.approx(math.sqrt(10), abs=1e-15)
    assert g_func(L2, (1, 0), (0, 1), 1.0) == pytest.approx(2.0, abs=1e-15)
    assert f_func(LINF, (1, 0), (0, 1), 1 / 3) == pytest.approx(5 / 3, abs=1e-15)
    v = f_func(L2, (1, 0), (0, 1), np.array([0.0, 1.0]))
    assert v.shape == (2,)


def test_closed_form_examples():
    ax = check_axes(LINF, (1, 0), (0, 1))
    est = omega_closed_form(LINF, ax)
    assert est.value == pytest.approx(1.6, abs=1e-9)
    assert est.witness.param("t") == 0.0
    assert omega_closed_form(L2, check_axes(L2, (1, 0), (0, 1))).value == pytest.approx(1.0, abs=1e-9)
    assert omega_closed_form(L1, check_axes(L1, (1, 0), (0, 1))).value == pytest.approx(1.6, abs=1e-9)


def test_h_identically_one_on_l2():
    ax = check_axes(L2, (0.6, 0.8), (-0.8, 0.6))
    t = np.concatenate([np.linspace(0, 50, 101), [math.inf]])
    assert np.max(np.abs(h_value(L2, ax, t) - 1.0)) <= 1e-14


def test_closed_form_rejects_non_axes():
    ax = check_axes(HEX, (1, 0), (0, 1))
    with pytest.raises(DomainError, match="defect"):
        omega_closed_form(HEX, ax)


def test_closed_form_witness_is_isosceles():
    for spec, e1, e2 in SYMMETRIC:
        est = omega_closed_form(spec, check_axes(spec, e1, e2), GridConfig(512))
        x, y = np.array(est.witness.x), np.array(est.witness.y)
        assert abs(est.witness.residual) <= 1e-12
        assert omega_ratio(spec, x, y) == pytest.approx(est.value, abs=1e-12)


@pytest.mark.parametrize("spec, e1, e2", SYMMETRIC, ids=IDS)
def test_limit_equals_value_at_zero(spec, e1, e2):
    # axes symmetry turns the t -> inf pair into the t = 0 pair up to swap and sign
    ax = check_axes(spec, e1, e2)
    assert h_value(spec, ax, math.inf) == pytest.approx(h_value(spec, ax, 0.0), abs=1e-12)


@pytest.mark.parametrize("spec, e1, e2", SYMMETRIC, ids=IDS)
def test_h_matches_ratio_at_lemma_pair(spec, e1, e2):
    ax = check_axes(spec, e1, e2)
    rng = np.random.default_rng(11)
    ts = np.concatenate([rng.exponential(2.0, 50), -rng.exponential(2.0, 50)])
    for t in ts:
        x, y = (np.array(v) for v in lemma_pair(ax, float(t)))
        assert spec.norm(x) == pytest.approx(spec.norm(y), abs=1e-12)
        assert abs(spec.norm(x + y) - spec.norm(x - y)) <= 1e-12 * spec.norm(x)
        assert abs(h_value(spec, ax, float(t)) - omega_ratio(spec, x, y)) <= 1e-10
    x, y = lemma_pair(ax, math.inf)
    assert abs(h_value(spec, ax, math.inf) - omega_ratio(spec, x, y)) <= 1e-10


@pytest.mark.parametrize("spec, e1, e2", SYMMETRIC, ids=IDS)
def test_g_is_even_and_max_is_symmetric(spec, e1, e2):
    ax = check_axes(spec, e1, e2)
    t = t_samples(200)
    assert np.max(np.abs(g_func(spec, ax.e1, ax.e2, t) - g_func(spec, ax.e1, ax.e2, -t))) <= 1e-12
    s = np.linspace(0, 1, 2001)[:-1]
    pos = h_value(spec, ax, s / (1 - s))
    neg = h_value(spec, ax, -s / (1 - s))
    assert abs(pos.max() - neg.max()) <= 1e-12


@pytest.mark.parametrize("spec, e1, e2", SYMMETRIC, ids=IDS)
def test_cross_validates_against_generic_estimator(spec, e1, e2):
    cfg = GridConfig(2048)
    closed = omega_closed_form(spec, check_axes(spec, e1, e2), cfg)
    generic = estimate_omega(spec, cfg)
    assert abs(closed.value - generic.value) <= 2 * (closed.refine_tol + generic.refine_tol)


@given(st.floats(min_value=0.0, max_value=1e6))
def test_h_never_exceeds_upper_bound(t):
    # h can drop below 1 (l_inf at t = 1 gives 0.9), but never above 8/5
    for spec, e1, e2 in SYMMETRIC[:6]:
        v = h_value(spec, check_axes(spec, e1, e2), t)
        assert 0.0 < v <= 1.6 + 1e-12
