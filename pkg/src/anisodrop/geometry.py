"""Exact convex-polygon geometry and discrete boundary curves.

Polygons are the universal carrier: Wulff bodies, rectangles, random
competitors.  Everything here is numpy-vectorized and pure; polygons and
curves are immutable after construction.

Conventions: vertices are ordered counter-clockwise, outward normals point
away from the interior, curvature of a convex curve is positive.
"""

from __future__ import annotations

import numpy as np

from .anisotropy import Crystalline, Stretched
from .errors import GeometryError, NotAGraphError, UnsupportedError

CLIP_EPS = 1e-12  # absolute tolerances for clipping and vertex merging


# ---------------------------------------------------------------------------
# convex polygons
# ---------------------------------------------------------------------------

def _signed_area(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)


def _clean_vertices(v):
    """Merge near-duplicate consecutive vertices and drop collinear ones."""
    keep = np.linalg.norm(v - np.roll(v, 1, axis=0), axis=1) > CLIP_EPS
    v = v[keep]
    if len(v) < 3:
        return v
    e_prev = v - np.roll(v, 1, axis=0)
    e_next = np.roll(v, -1, axis=0) - v
    cross = e_prev[:, 0] * e_next[:, 1] - e_prev[:, 1] * e_next[:, 0]
    dot = np.sum(e_prev * e_next, axis=1)
    # drop vertices interior to a straight run (tiny turn, same direction)
    collinear = (np.abs(cross) <= CLIP_EPS) & (dot > 0.0)
    return v[~collinear]


class ConvexPolygon:
    """Immutable convex polygon with counter-clockwise vertices."""

    __slots__ = ("vertices", "_area", "_barycenter", "_diameter")

    def __init__(self, vertices, clean=True):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise GeometryError("need at least 3 planar vertices")
        if _signed_area(v) < 0.0:
            v = v[::-1]
        if clean:
            v = _clean_vertices(v)
        if len(v) < 3:
            raise GeometryError("polygon degenerates to fewer than 3 vertices")
        scale2 = max(1.0, float(np.max(np.abs(v))) ** 2)
        e = np.roll(v, -1, axis=0) - v
        cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if np.any(cross < -1e-9 * scale2):
            raise GeometryError("vertices are not in convex position")
        if _signed_area(v) <= 0.0:
            raise GeometryError("polygon has no interior")
        self.vertices = v
        self.vertices.setflags(write=False)
        self._area = None
        self._barycenter = None
        self._diameter = None

    def __len__(self):
        return len(self.vertices)

    @property
    def area(self):
        if self._area is None:
            self._area = float(_signed_area(self.vertices))
        return self._area

    @property
    def barycenter(self):
        if self._barycenter is None:
            v = self.vertices
            w = np.roll(v, -1, axis=0)
            cross = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
            self._barycenter = ((v + w) * cross[:, None]).sum(axis=0) / (6.0 * self.area)
        return self._barycenter

    @property
    def diameter(self):
        if self._diameter is None:
            v = self.vertices
            if len(v) <= 2048:
                d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=-1)
                self._diameter = float(np.sqrt(d2.max()))
            else:
                # extreme vertices over a dense direction fan, then exact
                # pairwise distances among the candidates
                th = np.linspace(0.0, np.pi, 1440, endpoint=False)
                dirs = np.stack([np.cos(th), np.sin(th)], axis=-1)
                proj = v @ dirs.T
                cand = np.unique(np.concatenate([proj.argmax(0), proj.argmin(0)]))
                w = v[cand]
                d2 = np.sum((w[:, None, :] - w[None, :, :]) ** 2, axis=-1)
                self._diameter = float(np.sqrt(d2.max()))
        return self._diameter

    def translate(self, shift):
        return ConvexPolygon(self.vertices + np.asarray(shift, dtype=float), clean=False)

    def rescale(self, factor):
        """Scale about the barycenter by ``factor``."""
        b = self.barycenter
        return ConvexPolygon(b + factor * (self.vertices - b), clean=False)

    def contains(self, points, tol=0.0):
        """Vectorized membership test; ``tol`` is a signed-distance slack in
        length units (boundary counts as inside)."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        elen = np.linalg.norm(e, axis=1)
        rel = p[:, None, :] - v[None, :, :]
        cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
        inside = np.all(cross >= -tol * elen[None, :], axis=1)
        return inside if np.asarray(points).ndim > 1 else bool(inside[0])

    def to_dict(self):
        return {"vertices": self.vertices.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(data["vertices"])


def convex_hull(points):
    """Convex hull of a point cloud (Andrew's monotone chain)."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) < 3:
        raise GeometryError("hull needs at least 3 distinct points")
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]

    def build(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2:
                o, a = chain[-2], chain[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0.0:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = build(pts)
    upper = build(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:
        raise GeometryError("points are collinear, hull has no interior")
    return ConvexPolygon(hull)


def area_and_barycenter(poly):
    """Shoelace area and first-moment barycenter."""
    return poly.area, poly.barycenter.copy()


def rescale_to_area(poly, area=1.0, center=True):
    """Rescale about the barycenter to the target area; optionally move the
    barycenter to the origin."""
    if not area > 0.0:
        raise ValueError("target area must be positive")
    factor = np.sqrt(area / poly.area)
    b = poly.barycenter
    v = (poly.vertices - b) * factor
    if not center:
        v = v + b
    return ConvexPolygon(v, clean=False)


def regular_polygon(n, circumradius=1.0, phase=0.0):
    th = phase + 2.0 * np.pi * np.arange(n) / n
    return ConvexPolygon(circumradius * np.stack([np.cos(th), np.sin(th)], axis=-1), clean=False)


def unit_square():
    return ConvexPolygon([[0.5, -0.5], [0.5, 0.5], [-0.5, 0.5], [-0.5, -0.5]], clean=False)


def disk_polygon(n=720, area=1.0):
    """Regular n-gon of the given exact area (polygonal stand-in for a disk)."""
    r = np.sqrt(2.0 * area / (n * np.sin(2.0 * np.pi / n)))
    return regular_polygon(n, circumradius=r)


# ---------------------------------------------------------------------------
# Wulff construction
# ---------------------------------------------------------------------------

def _crystalline_generators(tension):
    """Effective generators of a (possibly stretched) crystalline tension.

    f_a(nu) = max_i x_i . (a nu1, nu2/a) = max_i (a x_i1, x_i2/a) . nu, so a
    stretch maps generators by diag(a, 1/a).
    """
    if isinstance(tension, Crystalline):
        return tension.generators
    if isinstance(tension, Stretched):
        inner = _crystalline_generators(tension.base)
        if inner is None:
            return None
        out = inner.copy()
        out[:, 0] *= tension.a
        out[:, 1] /= tension.a
        return out
    return None


def wulff_shape(tension, n_directions=720, refine_tol=None):
    """Wulff body {x : x . nu <= f(nu) for all nu} as a convex polygon.

    Crystalline tensions give the exact hull of their generators and ignore
    ``n_directions``.  Smooth tensions give the circumscribed polygon cut by
    ``n_directions`` equi-spaced support half-planes; its area overshoots the
    smooth body by O(n_directions^-2).  With ``refine_tol`` set, the direction
    count doubles until the relative area change drops below it.
    """
    gens = _crystalline_generators(tension)
    if gens is not None:
        return convex_hull(gens)
    n = int(n_directions)
    if n < 3:
        raise ValueError("need at least 3 support directions")

    def build(k):
        th = 2.0 * np.pi * np.arange(k) / k
        nu = np.stack([np.cos(th), np.sin(th)], axis=-1)
        f = tension.value(nu)
        r = 1.5 * float(np.max(f))
        verts = np.array([[r, -r], [r, r], [-r, r], [-r, -r]])
        for j in range(k):
            verts = _clip_halfplane(verts, nu[j], f[j])
            if verts is None:
                raise GeometryError("support half-planes have empty intersection")
        return ConvexPolygon(verts)

    poly = build(n)
    if refine_tol is not None:
        while n < 32 * 720:
            n *= 2
            finer = build(n)
            if abs(finer.area - poly.area) <= refine_tol * finer.area:
                return finer
            poly = finer
    return poly


def anisotropic_perimeter(shape, tension):
    """Integral of f over outward normals: sum of f(edge normal) * length for
    polygons (exact by 1-homogeneity), arclength quadrature for curves."""
    if isinstance(shape, BoundaryCurve):
        return float(np.sum(tension.value(shape.normals)) * shape.ds)
    v = shape.vertices
    e = np.roll(v, -1, axis=0) - v
    scaled_normals = np.stack([e[:, 1], -e[:, 0]], axis=-1)
    return float(np.sum(tension.value(scaled_normals)))


def stretch_set(poly, a):
    """Area-preserving stretch (x, y) -> (x/a, a y)."""
    a = float(a)
    if not a > 0.0:
        raise ValueError("stretch factor a must be positive")
    v = poly.vertices.copy()
    v[:, 0] /= a
    v[:, 1] *= a
    return ConvexPolygon(v, clean=False)


# ---------------------------------------------------------------------------
# clipping, intersections, covariance
# ---------------------------------------------------------------------------

def _clip_halfplane(verts, normal, offset):
    """Clip a convex CCW vertex loop against {x : x . normal <= offset}.

    Exploits convexity: the kept vertices form one contiguous arc, so there
    is exactly one entering and one exiting edge.
    """
    d = verts @ normal - offset
    keep = d <= CLIP_EPS
    if keep.all():
        return verts
    if not keep.any():
        return None
    nxt = np.roll(keep, -1)
    enter = np.where(~keep & nxt)[0]
    exit_ = np.where(keep & ~nxt)[0]
    if len(enter) != 1 or len(exit_) != 1:
        # roundoff near tangency; treat near-boundary vertices as kept
        keep = d <= 1e-9 * max(1.0, np.abs(offset))
        if keep.all():
            return verts
        if not keep.any():
            return None
        nxt = np.roll(keep, -1)
        enter = np.where(~keep & nxt)[0]
        exit_ = np.where(keep & ~nxt)[0]
        if len(enter) != 1 or len(exit_) != 1:
            raise GeometryError("inconsistent clip of a convex loop")
    i_en, i_ex = int(enter[0]), int(exit_[0])
    n = len(verts)

    def crossing(i):
        j = (i + 1) % n
        t = d[i] / (d[i] - d[j])
        return verts[i] + t * (verts[j] - verts[i])

    if i_en < i_ex:
        arc = verts[i_en + 1:i_ex + 1]
    else:
        arc = np.vstack([verts[i_en + 1:], verts[:i_ex + 1]])
    return np.vstack([crossing(i_en)[None, :], arc, crossing(i_ex)[None, :]])


def intersect_convex(A, B):
    """Intersection polygon of two convex polygons, or None when the
    interiors are disjoint.  Successive half-plane clipping of A by B's
    edges."""
    verts = A.vertices
    bv = B.vertices
    e = np.roll(bv, -1, axis=0) - bv
    normals = np.stack([e[:, 1], -e[:, 0]], axis=-1)
    offsets = np.sum(normals * bv, axis=1)
    for k in range(len(bv)):
        verts = _clip_halfplane(verts, normals[k], offsets[k])
        if verts is None:
            return None
    verts = _clean_vertices(verts)
    if len(verts) < 3 or _signed_area(verts) <= 0.0:
        return None
    return ConvexPolygon(verts, clean=False)


def sym_diff_area(A, B, align=False):
    """|A| + |B| - 2 |A ∩ B|; with ``align`` both sets are first translated
    to a common barycenter."""
    if align:
        A = A.translate(-A.barycenter)
        B = B.translate(-B.barycenter)
    inter = intersect_convex(A, B)
    overlap = inter.area if inter is not None else 0.0
    return max(0.0, A.area + B.area - 2.0 * overlap)


def set_covariance(poly, z):
    """C(z) = |poly ∩ (poly - z)|."""
    shifted = poly.translate(-np.asarray(z, dtype=float))
    inter = intersect_convex(poly, shifted)
    return inter.area if inter is not None else 0.0


def chord_strips(poly, theta):
    """Chord-length profile of a convex polygon transverse to direction theta.

    Rotating so the ray direction is +x, the chord length L(p) at transverse
    offset p is piecewise linear in p between projected vertices.  Returns
    (widths, L0, L1): strip widths and the chord length at each strip's lower
    and upper end.  This is the exact ingredient behind the set-covariance
    reduction: |F ∩ (F - r e_theta)| = integral of (L(p) - r)+ dp.
    """
    v = poly.vertices
    c, s = np.cos(theta), np.sin(theta)
    y = -s * v[:, 0] + c * v[:, 1]
    x = c * v[:, 0] + s * v[:, 1]
    i_min = int(np.argmin(y))
    i_max = int(np.argmax(y))
    n = len(v)

    def chain(i0, i1):
        if i0 <= i1:
            idx = np.arange(i0, i1 + 1)
        else:
            idx = np.concatenate([np.arange(i0, n), np.arange(0, i1 + 1)])
        return y[idx], x[idx]

    yr, xr = chain(i_min, i_max)          # right chain, y non-decreasing
    yl, xl = chain(i_max, i_min)          # left chain, y non-increasing
    yl, xl = yl[::-1], xl[::-1]

    breaks = np.unique(y)
    if len(breaks) < 2:
        return (np.zeros(0), np.zeros(0), np.zeros(0))
    widths = np.diff(breaks)
    lo = breaks[:-1]
    # two interior samples per strip; L is linear inside, so the strip-end
    # values follow by linear extension (robust to ties at the breakpoints)
    ya = lo + widths / 3.0
    yb = lo + 2.0 * widths / 3.0
    la = np.interp(ya, yr, xr) - np.interp(ya, yl, xl)
    lb = np.interp(yb, yr, xr) - np.interp(yb, yl, xl)
    L0 = np.maximum(2.0 * la - lb, 0.0)
    L1 = np.maximum(2.0 * lb - la, 0.0)
    return widths, L0, L1


# ---------------------------------------------------------------------------
# discrete boundary curves
# ---------------------------------------------------------------------------

class BoundaryCurve:
    """Closed convex C^2 boundary sampled uniformly in arclength.

    Stores per-node position, outward unit normal and curvature; ``ds`` is
    the constant arclength step.
    """

    __slots__ = ("positions", "normals", "curvatures", "ds")

    def __init__(self, positions, normals, curvatures, ds):
        self.positions = np.asarray(positions, dtype=float)
        self.normals = np.asarray(normals, dtype=float)
        self.curvatures = np.asarray(curvatures, dtype=float)
        self.ds = float(ds)
        norms = np.linalg.norm(self.normals, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-10):
            raise GeometryError("normals must be unit vectors")

    def __len__(self):
        return len(self.positions)

    @property
    def length(self):
        return self.ds * len(self.positions)

    def gauss_bonnet_defect(self):
        """|sum kappa ds - 2 pi| for the discrete closed curve."""
        return abs(float(np.sum(self.curvatures) * self.ds) - 2.0 * np.pi)

    def to_polygon(self):
        return ConvexPolygon(self.positions, clean=False)

    def to_dict(self):
        return {
            "vertices": self.positions.tolist(),
            "normals": self.normals.tolist(),
            "curvatures": self.curvatures.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        pos = np.asarray(data["vertices"], dtype=float)
        ds_arr = np.linalg.norm(np.roll(pos, -1, axis=0) - pos, axis=1)
        return cls(pos, data["normals"], data["curvatures"], float(np.mean(ds_arr)))

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_support(cls, h_fn, n_nodes, hp_fn=None, position_fn=None, fine=8192):
        """Build from a support function h(theta) of a convex body.

        Boundary point at normal angle theta is x = h nu + h' tau with
        nu = (cos, sin) and tau = nu^perp; the curvature radius is h + h''.
        Derivatives default to periodic finite differences on a fine grid.
        """
        th = 2.0 * np.pi * np.arange(fine) / fine
        dth = 2.0 * np.pi / fine
        h = np.asarray(h_fn(th), dtype=float)
        if hp_fn is not None:
            hp = np.asarray(hp_fn(th), dtype=float)
        else:
            hp = (np.roll(h, -1) - np.roll(h, 1)) / (2.0 * dth)
        hpp = (np.roll(h, -1) - 2.0 * h + np.roll(h, 1)) / dth ** 2
        rho = h + hpp
        if np.any(rho <= 0.0):
            raise GeometryError("support function is not convex (h + h'' <= 0)")

        # cumulative arclength on the fine grid, then uniform resampling
        s = np.concatenate([[0.0], np.cumsum(0.5 * (rho[:-1] + rho[1:]) * dth)])
        total = s[-1] + 0.5 * (rho[-1] + rho[0]) * dth
        s_nodes = total * np.arange(n_nodes) / n_nodes
        th_ext = np.concatenate([th, [2.0 * np.pi]])
        s_ext = np.concatenate([s, [total]])
        th_nodes = np.interp(s_nodes, s_ext, th_ext)

        nu = np.stack([np.cos(th_nodes), np.sin(th_nodes)], axis=-1)
        tau = np.stack([-np.sin(th_nodes), np.cos(th_nodes)], axis=-1)
        if position_fn is not None:
            pos = position_fn(th_nodes)
        else:
            h_n = np.asarray(h_fn(th_nodes), dtype=float)
            if hp_fn is not None:
                hp_n = np.asarray(hp_fn(th_nodes), dtype=float)
            else:
                hp_n = np.interp(th_nodes, th_ext, np.concatenate([hp, [hp[0]]]))
            pos = h_n[:, None] * nu + hp_n[:, None] * tau
        rho_n = np.interp(th_nodes, th_ext, np.concatenate([rho, [rho[0]]]))
        return cls(pos, nu, 1.0 / rho_n, total / n_nodes)

    @classmethod
    def circle(cls, radius, n_nodes, center=(0.0, 0.0)):
        th = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
        nu = np.stack([np.cos(th), np.sin(th)], axis=-1)
        pos = np.asarray(center, dtype=float) + radius * nu
        kappa = np.full(n_nodes, 1.0 / radius)
        return cls(pos, nu, kappa, 2.0 * np.pi * radius / n_nodes)

    @classmethod
    def ellipse(cls, p, q, n_nodes):
        """Ellipse with semi-axes p, q; support h = sqrt(p^2 c^2 + q^2 s^2)."""
        p, q = float(p), float(q)

        def h_fn(t):
            return np.sqrt(p ** 2 * np.cos(t) ** 2 + q ** 2 * np.sin(t) ** 2)

        def hp_fn(t):
            return (q ** 2 - p ** 2) * np.sin(t) * np.cos(t) / h_fn(t)

        curve = cls.from_support(h_fn, n_nodes, hp_fn=hp_fn)
        # exact curvature radius of an ellipse in support parametrization
        h_nodes = np.sum(curve.positions * curve.normals, axis=1)
        rho = (p * q) ** 2 / h_nodes ** 3
        return cls(curve.positions, curve.normals, 1.0 / rho, curve.ds)

    @classmethod
    def from_tension(cls, tension, n_nodes, fine=8192):
        """Boundary of the (unscaled) Wulff body of a smooth tension; node
        positions are exact via x(theta) = grad f(nu(theta))."""
        if not tension.smooth:
            raise UnsupportedError("Wulff boundary curve needs a smooth tension")

        def h_fn(t):
            return tension.value(np.stack([np.cos(t), np.sin(t)], axis=-1))

        def position_fn(t):
            return tension.gradient(np.stack([np.cos(t), np.sin(t)], axis=-1))

        return cls.from_support(h_fn, n_nodes, position_fn=position_fn, fine=fine)

    @classmethod
    def from_polygon(cls, poly, n_nodes, corner_radius=None):
        """Rounded-corner curve tracing a polygon: straight runs joined by
        arcs of the given radius (default 1e-3 * diameter)."""
        r = corner_radius if corner_radius is not None else 1e-3 * poly.diameter
        v = poly.vertices
        n = len(v)
        e = np.roll(v, -1, axis=0) - v
        elen = np.linalg.norm(e, axis=1)
        u = e / elen[:, None]
        # exterior turn angle at the vertex between edge i-1 and edge i
        turn = np.array([
            np.arctan2(u[i - 1, 0] * u[i, 1] - u[i - 1, 1] * u[i, 0], np.dot(u[i - 1], u[i]))
            for i in range(n)
        ])
        if np.any(turn <= 0.0):
            raise GeometryError("polygon must be strictly convex to round corners")
        setback = r * np.tan(0.5 * turn)
        if np.any(setback + np.roll(setback, -1) >= elen):
            raise GeometryError("corner radius too large for an edge")

        segments = []  # (kind, data, length)
        for i in range(n):
            j = (i + 1) % n
            a = v[i] + setback[i] * u[i]
            b = v[j] - setback[j] * u[i]
            segments.append(("line", (a, u[i]), float(np.linalg.norm(b - a))))
            normal_i = np.array([u[i][1], -u[i][0]])
            phi0 = np.arctan2(normal_i[1], normal_i[0])
            center = b - r * normal_i
            segments.append(("arc", (center, phi0, turn[j]), r * float(turn[j])))

        total = sum(seg[2] for seg in segments)
        ds = total / n_nodes
        s_nodes = total * np.arange(n_nodes) / n_nodes
        pos = np.empty((n_nodes, 2))
        nrm = np.empty((n_nodes, 2))
        bounds = np.cumsum([seg[2] for seg in segments])
        start = np.concatenate([[0.0], bounds[:-1]])
        seg_idx = np.searchsorted(bounds, s_nodes, side="right")
        for k in range(n_nodes):
            kind, data, _ = segments[seg_idx[k]]
            local = s_nodes[k] - start[seg_idx[k]]
            if kind == "line":
                a, d = data
                pos[k] = a + local * d
                nrm[k] = (d[1], -d[0])
            else:
                center, phi0, _ = data
                phi = phi0 + local / r
                nrm[k] = (np.cos(phi), np.sin(phi))
                pos[k] = center + r * nrm[k]
        # curvature is discontinuous across arc/line joints; assign each node
        # the average turn over its arclength cell so that the discrete
        # Gauss-Bonnet sum stays exactly 2 pi
        kap = np.zeros(n_nodes)
        for idx, (kind, _, seg_len) in enumerate(segments):
            if kind != "arc" or seg_len == 0.0:
                continue
            a, b = start[idx], start[idx] + seg_len
            for shift in (-total, 0.0, total):
                cl = s_nodes - 0.5 * ds + shift
                overlap = np.maximum(0.0, np.minimum(b, cl + ds) - np.maximum(a, cl))
                kap += overlap / (r * ds)
        return cls(pos, nrm, kap, ds)


class NormalGraph:
    """Offsets psi writing a target boundary as {x + psi(x) nu(x)} over a base
    curve, together with the centered arclength derivative."""

    __slots__ = ("base", "psi", "dpsi_ds")

    def __init__(self, base, psi, dpsi_ds):
        self.base = base
        self.psi = np.asarray(psi, dtype=float)
        self.dpsi_ds = np.asarray(dpsi_ds, dtype=float)

    @property
    def c0_norm(self):
        return float(np.max(np.abs(self.psi)))

    @property
    def c1_norm(self):
        return self.c0_norm + float(np.max(np.abs(self.dpsi_ds)))


def normal_graph(base, target):
    """Write the target boundary as a normal graph over the base curve.

    Casts the normal line of every node against the target boundary and
    keeps intersections inside the embedding radius 1/max|kappa|; each node
    must see exactly one.  Raises NotAGraphError otherwise.
    """
    poly = target if isinstance(target, ConvexPolygon) else target.to_polygon()
    tv = poly.vertices
    seg_a = tv
    seg_d = np.roll(tv, -1, axis=0) - tv

    kappa_max = float(np.max(np.abs(base.curvatures)))
    embed = np.inf if kappa_max == 0.0 else 1.0 / kappa_max
    merge_tol = 1e-9 * max(1.0, poly.diameter)

    n = len(base)
    psi = np.empty(n)
    P = base.positions
    V = base.normals
    for i in range(n):
        rel = seg_a - P[i]
        denom = V[i, 0] * seg_d[:, 1] - V[i, 1] * seg_d[:, 0]
        ok = np.abs(denom) > 1e-15
        t = np.where(ok, rel[:, 0] * seg_d[:, 1] - rel[:, 1] * seg_d[:, 0], np.nan)
        u = np.where(ok, rel[:, 0] * V[i, 1] - rel[:, 1] * V[i, 0], np.nan)
        with np.errstate(invalid="ignore", divide="ignore"):
            t = t / denom
            u = u / denom
        # tolerant segment window so a ray through a shared vertex cannot
        # fall between two edges; duplicates merge by parameter below
        hits = t[ok & (u >= -1e-10) & (u < 1.0 + 1e-10) & (np.abs(t) < embed)]
        hits = np.sort(hits)
        if len(hits) > 1:
            hits = hits[np.concatenate([[True], np.diff(hits) > merge_tol])]
        if len(hits) != 1:
            raise NotAGraphError(
                f"node {i}: {len(hits)} normal-line intersections inside the embedding radius"
            )
        psi[i] = hits[0]
    dpsi = (np.roll(psi, -1) - np.roll(psi, 1)) / (2.0 * base.ds)
    return NormalGraph(base, psi, dpsi)


class LemmaReport:
    """Outcome of the graph-distance estimates for one (base, target) pair."""

    __slots__ = ("sym_diff", "psi_c0", "psi_c1", "lhs_ok", "lhs_ok_raw", "rhs_ok", "C")

    def __init__(self, sym_diff, psi_c0, psi_c1, lhs_ok, lhs_ok_raw, rhs_ok, C):
        self.sym_diff = sym_diff
        self.psi_c0 = psi_c0
        self.psi_c1 = psi_c1
        self.lhs_ok = lhs_ok
        self.lhs_ok_raw = lhs_ok_raw
        self.rhs_ok = rhs_ok
        self.C = C

    def to_dict(self):
        return {
            "sym_diff": self.sym_diff,
            "psi_c0": self.psi_c0,
            "psi_c1": self.psi_c1,
            "lhs_ok": self.lhs_ok,
            "lhs_ok_raw": self.lhs_ok_raw,
            "rhs_ok": self.rhs_ok,
            "C": self.C,
        }


def lemma_graph_bounds(base, target):
    """Check both graph-distance inequalities for a convex target over a
    convex base curve.

    The first inequality is tested in the curvature-corrected form
    |E △ F| <= ||psi||_C0 (1 + ||psi||_C0 kappa_max) H^1(dE); the literal
    first-order identity |E △ F| = int |psi| is reported separately as
    ``lhs_ok_raw`` (it fails for curved boundaries, e.g. an annulus).  The
    second inequality uses the explicit constant
    C = (1 + H^1(dE)) (6 c_kappa^4 / c_E)^{1/3} with c_kappa = 2 kappa_max
    and c_E the measured area of a normal patch of half-width
    min(0.1 diameter, 0.5 / kappa_max).
    """
    graph = normal_graph(base, target)
    poly_e = base.to_polygon()
    poly_f = target if isinstance(target, ConvexPolygon) else target.to_polygon()
    sd = sym_diff_area(poly_e, poly_f)

    kappa_max = float(np.max(np.abs(base.curvatures)))
    length = base.length
    psi_c0 = graph.c0_norm
    psi_c1 = graph.c1_norm

    w = min(0.1 * poly_e.diameter, 0.5 / kappa_max) if kappa_max > 0 else 0.1 * poly_e.diameter
    i_star = int(np.argmax(np.abs(graph.dpsi_ds)))
    s = base.ds * np.arange(len(base))
    circ = np.abs(s - s[i_star])
    circ = np.minimum(circ, length - circ)
    window_len = float(np.sum(circ <= w) * base.ds)
    c_e = window_len * 2.0 * w
    c_kappa = 2.0 * kappa_max
    C = (1.0 + length) * (6.0 * c_kappa ** 4 / c_e) ** (1.0 / 3.0)

    lhs_ok = sd <= psi_c0 * (1.0 + psi_c0 * kappa_max) * length + 1e-12
    lhs_ok_raw = sd <= psi_c0 * length + 1e-12
    rhs_ok = psi_c1 <= C * sd ** (1.0 / 3.0) + 1e-12
    return LemmaReport(sd, psi_c0, psi_c1, bool(lhs_ok), bool(lhs_ok_raw), bool(rhs_ok), C)
