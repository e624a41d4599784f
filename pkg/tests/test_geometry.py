import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isoconst.errors import SpecificationError
from isoconst.geometry import (
    HEX,
    L1,
    L2,
    LINF,
    AffineImage,
    Lp,
    Polyhedral,
    describe,
    eval_norm,
    polyhedral_from_vertices,
    unit_point,
    unit_points,
    verify_norm_axioms,
)
from isoconst.relations import default_battery

HEXAGON = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
CATALOG = [L1, L2, LINF, Lp(1.5), Lp(3.0), HEX, polyhedral_from_vertices(HEXAGON), AffineImage(Lp(3.0), ((2, 1), (0.5, 1)))]

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
specs = st.sampled_from(CATALOG)


@pytest.mark.parametrize(
    "spec, v, expected",
    [(HEX, (1, 1), 1.0), (HEX, (1, -1), 2.0), (LINF, (1, 0), 1.0), (L2, (3, 4), 5.0), (L1, (-2, 3), 5.0)],
)
def test_eval_norm_examples(spec, v, expected):
    assert eval_norm(spec, v) == pytest.approx(expected, abs=1e-15)


def test_eval_norm_rejects_non_finite():
    with pytest.raises(SpecificationError):
        eval_norm(L2, (math.nan, 0.0))


@pytest.mark.parametrize("p", [0.5, 0.0, -1.0, math.nan])
def test_lp_rejects_p_below_one(p):
    with pytest.raises(SpecificationError, match="p must be >= 1"):
        Lp(p)


def test_polyhedral_rejects_asymmetric_functionals():
    with pytest.raises(SpecificationError, match="symmetric"):
        Polyhedral(((1, 0), (-1, 0), (0, 1)))


def test_polyhedral_rejects_unbounded_ball():
    with pytest.raises(SpecificationError, match="span"):
        Polyhedral(((1, 0), (-1, 0)))


def test_affine_rejects_singular_matrix():
    with pytest.raises(SpecificationError, match="invertible"):
        AffineImage(L2, ((1, 2), (2, 4)))


def test_unit_point_examples():
    assert unit_point(LINF, math.pi / 4).coords == pytest.approx((1, 1), abs=1e-15)
    assert unit_point(L2, 0.0).coords == (1.0, 0.0)
    p = unit_point(HEX, 3 * math.pi / 4)
    assert p.coords == pytest.approx((-0.5, 0.5), abs=1e-15)
    assert eval_norm(HEX, p.coords) == pytest.approx(1.0, abs=1e-15)


def test_unit_point_wraps_theta():
    assert unit_point(L2, 2 * math.pi + 0.5).theta == pytest.approx(0.5)
    assert unit_point(L2, -0.5).theta == pytest.approx(2 * math.pi - 0.5)


def test_square_vertices_give_linf():
    sq = polyhedral_from_vertices([(1, 1), (-1, 1), (-1, -1), (1, -1)])
    v = np.random.default_rng(1).normal(size=(1000, 2))
    assert np.max(np.abs(sq.norm(v) - LINF.norm(v))) <= 1e-12


def test_diamond_vertices_give_l1():
    dm = polyhedral_from_vertices([(1, 0), (0, 1), (-1, 0), (0, -1)])
    v = np.random.default_rng(2).normal(size=(1000, 2))
    assert np.max(np.abs(dm.norm(v) - L1.norm(v))) <= 1e-12


def test_hexagon_vertices_match_hex_formula():
    poly = polyhedral_from_vertices(HEXAGON)
    v = np.random.default_rng(3).normal(size=(1000, 2)) * 3
    assert np.max(np.abs(poly.norm(v) - HEX.norm(v))) <= 1e-12


@pytest.mark.parametrize(
    "verts, match",
    [
        ([(1, 0), (0, 1), (-1, 0)], "at least 4"),
        ([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1)], "even"),
        ([(1, 0), (0, 1), (-1, 0), (0, -2)], "symmetric"),
        ([(1, 0), (0, -1), (-1, 0), (0, 1)], "convex"),
        ([(1, 0), (0.5, 0.5), (0, 1), (-1, 0), (-0.5, -0.5), (0, -1)], "convex"),
    ],
)
def test_polyhedral_from_vertices_errors(verts, match):
    with pytest.raises(SpecificationError, match=match):
        polyhedral_from_vertices(verts)


@pytest.mark.parametrize("spec", CATALOG, ids=describe)
def test_axioms_pass_on_catalog(spec):
    rep = verify_norm_axioms(spec, 1000)
    assert rep.passed, rep.counterexample
    assert rep.samples == 1000
    assert rep.homogeneity_violations == rep.triangle_violations == rep.symmetry_violations == 0


def test_axioms_flag_a_broken_norm():
    class Skewed(Lp):
        def norm(self, v):
            v = np.asarray(v, dtype=float)
            return np.abs(v[..., 0]) + np.abs(v[..., 1]) + 0.5 * v[..., 0]

    rep = verify_norm_axioms(Skewed(1.0), 200)
    assert not rep.passed
    assert rep.symmetry_violations > 0
    assert rep.counterexample is not None


def test_affine_identity_reproduces_base():
    v = np.random.default_rng(4).normal(size=(1000, 2)) * 5
    for base in (L2, HEX, Lp(1.5)):
        img = AffineImage(base, ((1, 0), (0, 1)))
        assert np.max(np.abs(img.norm(v) - base.norm(v))) <= 1e-12


def test_affine_image_is_isometry():
    m = np.array([[2.0, 1.0], [0.5, 1.0]])
    img = AffineImage(HEX, m)
    v = np.random.default_rng(5).normal(size=(500, 2))
    assert np.max(np.abs(img.norm(v @ m.T) - HEX.norm(v))) <= 1e-12


def test_describe_labels():
    assert [describe(s) for s in (LINF, L1, L2, Lp(1.5), HEX)] == ["linf", "l1", "l2", "lp(1.5)", "hex"]
    assert describe(polyhedral_from_vertices(HEXAGON)) == "polyhedral[6]"
    assert describe(AffineImage(L2, ((1, 1), (0, 1)))) == "affine(l2)"


@pytest.mark.parametrize("label, spec", default_battery(), ids=[b[0] for b in default_battery()])
def test_gauge_consistency_4096(label, spec):
    theta = 2 * math.pi * np.arange(4096) / 4096
    _, pts = unit_points(spec, theta)
    assert np.max(np.abs(spec.norm(pts) - 1.0)) <= 1e-10


# properties -------------------------------------------------------------------


@given(specs, finite, finite, st.sampled_from([-2.0, -1.0, 0.5, 3.0]))
def test_homogeneity(spec, a, b, lam):
    v = np.array([a, b])
    n = float(spec.norm(v))
    assert abs(float(spec.norm(lam * v)) - abs(lam) * n) <= 1e-10 * (1 + n)


@given(specs, finite, finite, finite, finite)
def test_triangle_inequality(spec, a, b, c, d):
    u, w = np.array([a, b]), np.array([c, d])
    lhs = float(spec.norm(u + w))
    rhs = float(spec.norm(u)) + float(spec.norm(w))
    assert lhs <= rhs + 1e-10 * max(1.0, rhs)


@given(specs, st.floats(min_value=0.0, max_value=math.pi, exclude_max=True))
def test_antipodal_parametrization_is_exact(spec, theta):
    a = unit_point(spec, theta).coords
    b = unit_point(spec, theta + math.pi).coords
    assert b == (-a[0], -a[1])


@given(specs, st.floats(min_value=-20.0, max_value=20.0))
def test_unit_point_lies_on_sphere(spec, theta):
    p = unit_point(spec, theta)
    assert 0.0 <= p.theta < 2 * math.pi
    assert abs(eval_norm(spec, p.coords) - 1.0) <= 1e-12
    # same direction as (cos, sin)
    c = p.coords
    assert c[0] * math.sin(theta) - c[1] * math.cos(theta) == pytest.approx(0.0, abs=1e-12)
