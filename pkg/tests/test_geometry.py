import numpy as np
import pytest

from anisodrop.anisotropy import (
    QuadraticForm,
    RegularizedQuartic,
    box_tension,
    euclidean,
    square_tension,
    stretch_tension,
)
from anisodrop.errors import GeometryError, NotAGraphError
from anisodrop.geometry import (
    BoundaryCurve,
    ConvexPolygon,
    anisotropic_perimeter,
    area_and_barycenter,
    chord_strips,
    convex_hull,
    intersect_convex,
    lemma_graph_bounds,
    normal_graph,
    set_covariance,
    stretch_set,
    sym_diff_area,
    unit_square,
    wulff_shape,
)
from anisodrop.cases import lemma_case_bump, lemma_case_circles, lemma_case_dilation

from conftest import philox, random_convex


def centered_rect(w, h):
    return ConvexPolygon([[w / 2, -h / 2], [w / 2, h / 2], [-w / 2, h / 2], [-w / 2, -h / 2]])


# -- polygons ---------------------------------------------------------------

def test_polygon_validation():
    with pytest.raises(GeometryError):
        ConvexPolygon([[0, 0], [1, 0]])
    with pytest.raises(GeometryError):
        # non-convex arrowhead
        ConvexPolygon([[0, 0], [2, 0], [0.2, 0.2], [0, 2]])
    # clockwise input is accepted and flipped
    p = ConvexPolygon([[0, 0], [0, 1], [1, 1], [1, 0]])
    assert p.area == pytest.approx(1.0)


def test_area_and_barycenter_examples():
    area, bary = area_and_barycenter(unit_square())
    assert area == pytest.approx(1.0, abs=1e-15)
    assert np.allclose(bary, [0.0, 0.0], atol=1e-15)

    rect = ConvexPolygon([[0.75, -1 / 3], [0.75, 1 / 3], [-0.75, 1 / 3], [-0.75, -1 / 3]])
    area, bary = area_and_barycenter(rect)
    assert area == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(bary, [0.0, 0.0], atol=1e-14)

    moved = rect.translate([2.0, 3.0])
    area2, bary2 = area_and_barycenter(moved)
    assert area2 == pytest.approx(area, abs=1e-12)
    assert np.allclose(bary2, [2.0, 3.0], atol=1e-12)


def test_convex_hull_and_degenerate():
    pts = [[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5], [0.2, 0.7]]
    hull = convex_hull(pts)
    assert hull.area == pytest.approx(1.0)
    assert len(hull) == 4
    with pytest.raises(GeometryError):
        convex_hull([[0, 0], [1, 1], [2, 2]])


# -- Wulff construction -----------------------------------------------------

def test_wulff_crystalline_box():
    k = wulff_shape(box_tension(1.5))
    assert k.area == pytest.approx(1.0, abs=1e-14)
    got = sorted(map(tuple, np.round(k.vertices, 12)))
    want = sorted([(0.75, 1 / 3), (0.75, -1 / 3), (-0.75, 1 / 3), (-0.75, -1 / 3)])
    assert np.allclose(got, want, atol=1e-12)


def test_wulff_euclidean_circumscribed():
    k = wulff_shape(euclidean(), 360)
    delta = (k.area - np.pi) / np.pi
    assert 0.0 <= delta <= 3e-5


def test_wulff_quadratic_ellipse_area():
    k = wulff_shape(QuadraticForm([[4.0, 0.0], [0.0, 1.0]]), 720)
    assert abs(k.area / (2.0 * np.pi) - 1.0) <= 1e-4


def test_wulff_stretched_crystalline_exact():
    k = wulff_shape(stretch_tension(square_tension(), 2.0))
    xs = np.sort(np.unique(np.round(k.vertices[:, 0], 12)))
    ys = np.sort(np.unique(np.round(k.vertices[:, 1], 12)))
    assert np.allclose(xs, [-1.0, 1.0]) and np.allclose(ys, [-0.25, 0.25])


def test_wulff_area_monotone_and_rate():
    areas = [wulff_shape(euclidean(), n).area for n in (90, 180, 360, 720)]
    assert all(a >= np.pi for a in areas)
    assert all(a1 >= a2 for a1, a2 in zip(areas, areas[1:]))
    # error ~ C / N^2: quartering when N doubles
    r = (areas[2] - np.pi) / (areas[3] - np.pi)
    assert r == pytest.approx(4.0, rel=0.07)


def test_wulff_refine_tol():
    k = wulff_shape(euclidean(), 90, refine_tol=1e-6)
    assert (k.area - np.pi) / np.pi <= 1e-5


# -- perimeter --------------------------------------------------------------

def test_perimeter_examples():
    assert anisotropic_perimeter(unit_square(), euclidean()) == pytest.approx(4.0, abs=1e-14)
    a0 = 1.5
    for b in (1.0, 1.5, 2.2):
        rect = centered_rect(b, 1.0 / b)
        want = a0 / b + b / a0
        assert anisotropic_perimeter(rect, box_tension(a0)) == pytest.approx(want, abs=1e-13)


def test_wulff_identity_all_tensions():
    for tension, tol in (
        (box_tension(1.5), 1e-9),
        (square_tension(), 1e-9),
        (euclidean(), 1e-6),
        (QuadraticForm([[4.0, 0.0], [0.0, 1.0]]), 1e-6),
        (RegularizedQuartic(0.5), 1e-6),
    ):
        k = wulff_shape(tension, 720)
        assert abs(anisotropic_perimeter(k, tension) / (2.0 * k.area) - 1.0) <= tol


def test_isoperimetric_inequality_random():
    rng = philox(5150)
    tension = box_tension(1.5)
    k = wulff_shape(tension)
    best = anisotropic_perimeter(k, tension) / np.sqrt(k.area)
    for _ in range(50):
        poly = random_convex(rng)
        ratio = anisotropic_perimeter(poly, tension) / np.sqrt(poly.area)
        assert ratio >= best - 1e-9


def test_quantitative_wulff_rectangles():
    # P(S_b) - P(S_a0) = (b - a0)^2 / (a0 b), and it dominates |S_b d S_a0|^2 / 16
    a0 = 1.5
    tension = box_tension(a0)
    p0 = anisotropic_perimeter(centered_rect(a0, 1 / a0), tension)
    for b in np.linspace(a0 / 2, 2 * a0, 13):
        gap = anisotropic_perimeter(centered_rect(b, 1 / b), tension) - p0
        assert gap == pytest.approx((b - a0) ** 2 / (a0 * b), abs=1e-12)
        sd = sym_diff_area(centered_rect(b, 1 / b), centered_rect(a0, 1 / a0))
        assert gap >= sd ** 2 / 16.0 - 1e-12


# -- stretch ----------------------------------------------------------------

def test_stretch_set_examples():
    sq = unit_square()
    s = stretch_set(sq, 2.0)
    assert np.allclose(np.sort(np.unique(np.round(s.vertices[:, 0], 14))), [-0.25, 0.25])
    assert np.allclose(np.sort(np.unique(np.round(s.vertices[:, 1], 14))), [-1.0, 1.0])
    assert s.area == pytest.approx(sq.area, abs=1e-12)

    rng = philox(77)
    poly = random_convex(rng)
    round_trip = stretch_set(stretch_set(poly, 1.7), 1.0 / 1.7)
    assert np.max(np.abs(round_trip.vertices - poly.vertices)) <= 1e-12
    with pytest.raises(ValueError):
        stretch_set(poly, 0.0)


# -- booleans and covariance ------------------------------------------------

def test_intersect_examples():
    sq = unit_square()
    same = intersect_convex(sq, sq)
    assert same is not None and same.area == pytest.approx(1.0, abs=1e-12)
    shifted = intersect_convex(sq, sq.translate([0.5, 0.0]))
    assert shifted.area == pytest.approx(0.5, abs=1e-12)
    assert intersect_convex(sq, sq.translate([3.0, 0.0])) is None


def test_sym_diff_examples():
    sq = unit_square()
    assert sym_diff_area(sq, sq) == 0.0
    assert sym_diff_area(sq, sq.translate([0.5, 0.0])) == pytest.approx(1.0, abs=1e-12)
    a0 = 1.5
    for b in (1.1, 1.8):
        sd = sym_diff_area(centered_rect(b, 1 / b), centered_rect(a0, 1 / a0))
        assert sd == pytest.approx(2.0 * abs(b - a0) / max(b, a0), abs=1e-12)


def test_sym_diff_align_flag():
    sq = unit_square()
    moved = sq.translate([0.3, -0.2])
    assert sym_diff_area(sq, moved, align=True) == pytest.approx(0.0, abs=1e-12)


def test_set_covariance_examples():
    sq = unit_square()
    assert set_covariance(sq, [0.5, 0.0]) == pytest.approx(0.5, abs=1e-12)
    assert set_covariance(sq, [0.5, 0.5]) == pytest.approx(0.25, abs=1e-12)
    assert set_covariance(sq, [1.5, 0.0]) == 0.0
    assert set_covariance(sq, [0.0, 0.0]) == pytest.approx(1.0, abs=1e-12)


def test_set_covariance_properties(rng):
    poly = random_convex(rng)
    dirs = rng.normal(size=(5, 2))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    for d in dirs:
        # even in z
        z = 0.3 * d
        assert set_covariance(poly, z) == pytest.approx(set_covariance(poly, -z), abs=1e-10)
        # non-increasing along the ray, zero beyond the diameter
        vals = [set_covariance(poly, r * d) for r in np.linspace(0.0, poly.diameter, 9)]
        assert all(a >= b - 1e-10 for a, b in zip(vals, vals[1:]))
        assert set_covariance(poly, 1.0001 * poly.diameter * d) == 0.0


def _strip_plus_integral(widths, l0, l1, r):
    """exact integral of max(L - r, 0) over strips with linear L"""
    total = 0.0
    for h, a, b in zip(widths, l0, l1):
        lo, hi = min(a, b), max(a, b)
        if hi <= r:
            continue
        if lo >= r:
            total += h * (0.5 * (a + b) - r)
        else:
            total += h * (hi - r) ** 2 / (2.0 * (hi - lo))
    return total


def test_chord_strips_against_clipped_covariance(rng):
    # the chord profile must reproduce the covariance computed by clipping
    for _ in range(5):
        poly = random_convex(rng)
        theta = float(rng.uniform(0.0, np.pi))
        widths, l0, l1 = chord_strips(poly, theta)
        assert np.sum(widths * 0.5 * (l0 + l1)) == pytest.approx(poly.area, abs=1e-10)
        direction = np.array([np.cos(theta), np.sin(theta)])
        for r in rng.uniform(0.0, 0.8 * poly.diameter, size=4):
            want = set_covariance(poly, r * direction)
            got = _strip_plus_integral(widths, l0, l1, r)
            assert got == pytest.approx(want, abs=1e-10)


# -- boundary curves ---------------------------------------------------------

def test_curve_constructors_gauss_bonnet():
    assert BoundaryCurve.circle(0.7, 512).gauss_bonnet_defect() <= 1e-3
    assert BoundaryCurve.ellipse(2.0, 1.0, 512).gauss_bonnet_defect() <= 1e-3
    curve = BoundaryCurve.from_tension(RegularizedQuartic(0.5), 512)
    assert curve.gauss_bonnet_defect() <= 1e-3
    assert np.max(np.abs(np.linalg.norm(curve.normals, axis=1) - 1.0)) <= 1e-10


def test_curve_uniform_spacing():
    curve = BoundaryCurve.ellipse(2.0, 1.0, 600)
    gaps = np.linalg.norm(np.roll(curve.positions, -1, axis=0) - curve.positions, axis=1)
    # chord lengths approximate ds uniformly
    assert np.max(np.abs(gaps - curve.ds)) <= 1e-3 * curve.ds + 1e-6


def test_curve_from_polygon_rounds_corners():
    curve = BoundaryCurve.from_polygon(unit_square(), 512, corner_radius=0.05)
    assert curve.gauss_bonnet_defect() <= 1e-3
    # straight runs at zero curvature, arcs at 1/r, fractions only at joints
    assert curve.curvatures.min() == 0.0
    assert curve.curvatures.max() == pytest.approx(20.0, rel=1e-9)
    assert curve.length == pytest.approx(4 * 0.9 + 2 * np.pi * 0.05, abs=1e-12)


def test_curve_json_round_trip():
    curve = BoundaryCurve.circle(1.0, 128)
    clone = BoundaryCurve.from_dict(curve.to_dict())
    assert np.allclose(clone.positions, curve.positions)
    assert np.allclose(clone.curvatures, curve.curvatures)


# -- normal graphs and the two-sided graph-distance estimates ----------------

def test_normal_graph_identity():
    base = BoundaryCurve.circle(1.0, 256)
    graph = normal_graph(base, base.to_polygon())
    assert np.max(np.abs(graph.psi)) <= 1e-9


def test_normal_graph_concentric_circles():
    base, target = lemma_case_circles(t=0.01)
    graph = normal_graph(base, target)
    assert np.allclose(graph.psi, 0.01, atol=1e-5)
    assert np.max(np.abs(graph.dpsi_ds)) <= 1e-5


def test_normal_graph_reconstruction_on_target():
    base, target = lemma_case_bump(0.1)
    graph = normal_graph(base, target)
    hits = base.positions + graph.psi[:, None] * base.normals
    # distance from each reconstructed point to the target boundary
    v = target.vertices
    e = np.roll(v, -1, axis=0) - v
    elen2 = np.sum(e * e, axis=1)
    rel = hits[:, None, :] - v[None, :, :]
    t = np.clip(np.sum(rel * e[None, :, :], axis=2) / elen2[None, :], 0.0, 1.0)
    feet = v[None, :, :] + t[:, :, None] * e[None, :, :]
    dist = np.min(np.linalg.norm(hits[:, None, :] - feet, axis=2), axis=1)
    assert np.max(dist) <= 1e-8


def test_normal_graph_dilation_first_order():
    # psi = eps (x . nu) + O(eps^2); the first-order error scales with eps^2
    base = BoundaryCurve.ellipse(2.0, 1.0, 1024)
    h = np.sum(base.positions * base.normals, axis=1)
    for eps, tol in ((0.01, 6e-5), (0.001, 1e-6)):
        _, target = lemma_case_dilation(eps=eps)
        graph = normal_graph(base, target)
        assert np.max(np.abs(graph.psi - eps * h)) <= tol


def test_normal_graph_failure():
    base = BoundaryCurve.circle(1.0, 64)
    target = BoundaryCurve.circle(1.0, 256).to_polygon().translate([5.0, 0.0])
    with pytest.raises(NotAGraphError):
        normal_graph(base, target)


def test_lemma_circles_annulus():
    base, target = lemma_case_circles(t=0.01)
    rep = lemma_graph_bounds(base, target)
    annulus = 2.0 * np.pi * 0.01 + np.pi * 0.01 ** 2
    assert rep.sym_diff == pytest.approx(annulus, rel=1e-3)
    assert rep.lhs_ok and rep.rhs_ok
    # the literal first-order identity undercounts the annulus area
    assert not rep.lhs_ok_raw


def test_lemma_identical_shapes():
    base = BoundaryCurve.circle(1.0, 256)
    rep = lemma_graph_bounds(base, base.to_polygon())
    assert rep.psi_c0 <= 1e-9 and rep.psi_c1 <= 1e-7
    assert rep.lhs_ok and rep.rhs_ok


def test_lemma_bump_family_ratio_bounded():
    ratios = []
    for delta in (0.2, 0.1, 0.05):
        base, target = lemma_case_bump(delta)
        rep = lemma_graph_bounds(base, target)
        assert rep.lhs_ok and rep.rhs_ok
        ratios.append(rep.psi_c1 / rep.sym_diff ** (1.0 / 3.0))
    # ||psi||_C1 ~ delta and |EdF| ~ delta^3, so the ratio stays bounded
    assert max(ratios) <= 1.0
