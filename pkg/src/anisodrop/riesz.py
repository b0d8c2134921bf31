"""Riesz interaction energy V(F), Riesz potential v_F, and related constants.

The energy of a polygon is computed through its set covariance
C(z) = |F ∩ (F - z)| in polar coordinates,

    V(F) = ∮ ∫_0^∞ C(r e_θ) r^(1-α) dr dθ.

Along a fixed direction, C(r e_θ) = ∫ (L_θ(p) - r)+ dp where L_θ is the
chord-length profile transverse to θ, piecewise linear in p for a polygon.
Swapping the r and p integrals makes the radial part exact:

    ∫_0^∞ C(r e_θ) r^(1-α) dr = J(θ) / ((2-α)(3-α)),
    J(θ) = ∫ L_θ(p)^(3-α) dp,

with J available in closed form per θ.  All first-variation integrals used
elsewhere carry the same radial power and differ only by a bounded angular
weight, so a single adaptive quadrature over θ in [0, π) serves them all.

The independent Monte Carlo oracle draws point pairs with a counter-based
generator keyed by (seed, block index), so any parallel partitioning of the
blocks reproduces the same estimate bit for bit.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError, UnsupportedError
from .geometry import ConvexPolygon, chord_strips


@dataclass(frozen=True)
class RieszSpec:
    """Parameters of the Riesz term: exponent, quadrature tolerance, and the
    Monte Carlo oracle's sample count and seed."""

    alpha: float
    quad_tol: float = 1e-7
    mc_samples: int = 1_000_000
    mc_seed: int = 0

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not self.quad_tol > 0.0:
            raise ValueError("quad_tol must be positive")


def _check_alpha(alpha):
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (0, 2), got {alpha}")


# ---------------------------------------------------------------------------
# angular quadrature over chord profiles
# ---------------------------------------------------------------------------

_GL_LO = np.polynomial.legendre.leggauss(10)
_GL_HI = np.polynomial.legendre.leggauss(21)


def chord_power_integral(poly, theta, power):
    """J(θ) = ∫ L_θ(p)^power dp, exact for the polygon's piecewise-linear
    chord profile."""
    widths, L0, L1 = chord_strips(poly, theta)
    if len(widths) == 0:
        return 0.0
    q = power
    diff = L1 - L0
    big = np.abs(diff) > 1e-12 * np.maximum(L0, L1)
    out = np.empty_like(widths)
    with np.errstate(invalid="ignore", divide="ignore"):
        out[big] = (L1[big] ** (q + 1.0) - L0[big] ** (q + 1.0)) / ((q + 1.0) * diff[big])
    mid = 0.5 * (L0[~big] + L1[~big])
    out[~big] = mid ** q
    return float(np.sum(widths * out))


def _adaptive_theta(f, a, b, rel_tol, seeds=(), max_panels=4096, min_width=1e-13):
    """Globally adaptive Gauss quadrature of a scalar f over [a, b].

    Panels are split worst-first until the summed error estimate (difference
    of nested Gauss rules) drops below rel_tol times the integral scale.
    ``seeds`` are interior breakpoints (kink locations) used for the initial
    subdivision.  Raises QuadratureError with the best estimate on failure.
    """
    xlo, wlo = _GL_LO
    xhi, whi = _GL_HI

    def panel(lo, hi):
        mid, rad = 0.5 * (lo + hi), 0.5 * (hi - lo)
        y_hi = np.array([f(mid + rad * x) for x in xhi])
        i_hi = rad * float(whi @ y_hi)
        y_lo = np.array([f(mid + rad * x) for x in xlo])
        i_lo = rad * float(wlo @ y_lo)
        return i_hi, abs(i_hi - i_lo)

    pts = [a] + sorted(p for p in set(float(s) for s in seeds) if a < p < b) + [b]
    heap = []
    counter = 0
    total = 0.0
    total_abs = 0.0
    total_err = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        val, err = panel(lo, hi)
        heapq.heappush(heap, (-err, counter, lo, hi, val))
        counter += 1
        total += val
        total_abs += abs(val)
        total_err += err

    n_panels = len(heap)
    while total_err > rel_tol * max(total_abs, 1e-300) and n_panels < max_panels:
        neg_err, _, lo, hi, val = heapq.heappop(heap)
        if hi - lo < min_width:
            # cannot refine further; put it back and accept the floor
            heapq.heappush(heap, (neg_err, counter, lo, hi, val))
            counter += 1
            break
        total -= val
        total_abs -= abs(val)
        total_err += neg_err  # neg_err is -err
        mid = 0.5 * (lo + hi)
        for seg in ((lo, mid), (mid, hi)):
            v, e = panel(*seg)
            heapq.heappush(heap, (-e, counter, seg[0], seg[1], v))
            counter += 1
            total += v
            total_abs += abs(v)
            total_err += e
        n_panels += 1

    if total_err > 10.0 * rel_tol * max(total_abs, 1e-300):
        raise QuadratureError(
            "angular quadrature did not converge", estimate=total, error=total_err
        )
    return total


def _kink_seeds(poly):
    """Directions (mod π) where the chord profile changes structure: all
    vertex-pair directions for small polygons, edge directions otherwise."""
    v = poly.vertices
    n = len(v)
    if n <= 12:
        diffs = v[:, None, :] - v[None, :, :]
        iu = np.triu_indices(n, k=1)
        d = diffs[iu]
    else:
        d = np.roll(v, -1, axis=0) - v
        if n > 256:
            return ()
    ang = np.mod(np.arctan2(d[:, 1], d[:, 0]), np.pi)
    # chord kinks sit at the transverse directions of these angles
    return np.unique(np.round(np.mod(ang + 0.5 * np.pi, np.pi), 14))


def covariance_angular_integral(poly, alpha, weight=None, rel_tol=1e-7, extra_seeds=()):
    """∫_{R^2} C_poly(z) w(θ(z)) |z|^(-α) dz for a bounded angular weight w.

    This is the common reduction behind the interaction energy (w = 1) and
    the stretch-variation integrals (w = cos 2θ, quartic harmonics, ...).
    """
    _check_alpha(alpha)
    power = 3.0 - alpha
    c_alpha = 1.0 / ((2.0 - alpha) * (3.0 - alpha))

    if weight is None:
        def f(th):
            return chord_power_integral(poly, th, power)
    else:
        def f(th):
            w = weight(th)
            return w * chord_power_integral(poly, th, power) if w != 0.0 else 0.0

    seeds = list(_kink_seeds(poly)) + [float(s) for s in extra_seeds]
    total = _adaptive_theta(f, 0.0, np.pi, rel_tol, seeds=seeds)
    return 2.0 * c_alpha * total


def riesz_energy(shape, spec):
    """V(F) = ∫_F ∫_F |x - y|^(-α) dx dy by the covariance-polar reduction."""
    if not isinstance(shape, ConvexPolygon):
        raise TypeError("riesz_energy expects a ConvexPolygon")
    return covariance_angular_integral(shape, spec.alpha, rel_tol=spec.quad_tol)


# ---------------------------------------------------------------------------
# Monte Carlo oracle
# ---------------------------------------------------------------------------

_MC_BLOCK = 1 << 18  # pairs per counter block


def riesz_energy_mc(shape, spec):
    """Seeded rejection-sampling estimate of V(F) with its standard error.

    Pairs are drawn uniformly in F x F, blocks of fixed size keyed by
    (seed, block); the result is independent of how blocks are scheduled.
    """
    n_pairs = int(spec.mc_samples)
    if n_pairs < 10_000:
        raise ValueError("the Monte Carlo oracle needs at least 1e4 samples")
    v = shape.vertices
    lo = v.min(axis=0)
    span = v.max(axis=0) - lo
    bbox_area = float(span[0] * span[1])
    accept_rate = shape.area / bbox_area

    total = 0.0
    total_sq = 0.0
    done = 0
    block = 0
    while done < n_pairs:
        quota = min(_MC_BLOCK, n_pairs - done)
        rng = np.random.Generator(np.random.Philox(key=np.array([spec.mc_seed, block], dtype=np.uint64)))
        need = 2 * quota
        pts = np.empty((0, 2))
        chunk = int(need / accept_rate * 1.2) + 64
        while len(pts) < need:
            cand = lo + span * rng.random((chunk, 2))
            pts = np.vstack([pts, cand[shape.contains(cand)]])
        pts = pts[:need]
        d = np.linalg.norm(pts[0::2] - pts[1::2], axis=1)
        k = d ** (-spec.alpha)
        total += float(np.sum(k))
        total_sq += float(np.sum(k * k))
        done += quota
        block += 1

    mean = total / n_pairs
    var = max(0.0, total_sq / n_pairs - mean * mean)
    scale = shape.area ** 2
    return scale * mean, scale * np.sqrt(var / n_pairs)


# ---------------------------------------------------------------------------
# Riesz potential
# ---------------------------------------------------------------------------

def _tan_antiderivative(v, alpha):
    """G(v) = ∫_0^v (1 + t^2)^(-α/2) dt; odd in v.

    asinh for the degenerate α = 1, a Gauss hypergeometric otherwise.  The
    argument is clamped at 1e12: the omitted tail is negligible against the
    d^(2-α) prefactor that accompanies large tangents.
    """
    v = np.clip(v, -1e12, 1e12)
    if abs(alpha - 1.0) < 1e-12:
        return np.arcsinh(v)
    from scipy.special import hyp2f1

    return v * hyp2f1(0.5, 0.5 * alpha, 1.5, -v * v)


def riesz_potential(shape, x, alpha):
    """v_F(x) = ∫_F |x - y|^(-α) dy for x in the closure of a convex polygon.

    Radial reduction about x: v = (2-α)^(-1) ∮ R(θ; x)^(2-α) dθ with R the
    ray length to the boundary, R = d / cos(θ - φ) per edge.  Substituting
    the tangent of the offset angle turns each edge's window into the exact
    primitive d^(2-α) [G(v2) - G(v1)], so the whole potential is closed form.
    Accepts a single point or a batch of shape (N, 2).
    """
    _check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    inside = shape.contains(pts, tol=1e-9 * max(1.0, shape.diameter))
    if not np.all(inside):
        raise UnsupportedError("riesz_potential needs x inside the shape (star-shaped reduction)")

    verts = shape.vertices
    edge = np.roll(verts, -1, axis=0) - verts
    ulen = np.linalg.norm(edge, axis=1)
    uhat = edge / ulen[:, None]

    rel_p = verts[None, :, :] - pts[:, None, :]          # (N, M, 2)
    rel_q = rel_p + edge[None, :, :]
    # perpendicular distance from x to the edge line (positive inside)
    d = uhat[None, :, 1] * rel_p[:, :, 0] - uhat[None, :, 0] * rel_p[:, :, 1]
    t1 = np.sum(rel_p * uhat[None, :, :], axis=2)
    t2 = np.sum(rel_q * uhat[None, :, :], axis=2)

    active = d > 1e-14 * max(1.0, shape.diameter)
    d_safe = np.where(active, d, 1.0)
    g = _tan_antiderivative(t2 / d_safe, alpha) - _tan_antiderivative(t1 / d_safe, alpha)
    contrib = np.where(active, d_safe ** (2.0 - alpha) * g, 0.0)
    out = contrib.sum(axis=1) / (2.0 - alpha)
    return float(out[0]) if single else out


def potential_volume_integral(poly, alpha, levels=3):
    """∫_F v_F(x) dx by fan triangulation and a degree-5 triangle rule.

    Independent outer-quadrature route to V(F); used to cross-check
    riesz_energy.
    """
    # Dunavant degree-5, 7 points (barycentric coordinates and weights)
    a1, a2 = 0.059715871789770, 0.470142064105115
    b1, b2 = 0.797426985353087, 0.101286507323456
    bary = np.array([
        [1 / 3, 1 / 3, 1 / 3],
        [a1, a2, a2], [a2, a1, a2], [a2, a2, a1],
        [b1, b2, b2], [b2, b1, b2], [b2, b2, b1],
    ])
    wts = np.array([0.225,
                    0.132394152788506, 0.132394152788506, 0.132394152788506,
                    0.125939180544827, 0.125939180544827, 0.125939180544827])

    center = poly.barycenter
    verts = poly.vertices
    tris = [(center, verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts))]
    for _ in range(levels):
        finer = []
        for (p, q, r) in tris:
            pq, qr, rp = 0.5 * (p + q), 0.5 * (q + r), 0.5 * (r + p)
            finer += [(p, pq, rp), (pq, q, qr), (rp, qr, r), (pq, qr, rp)]
        tris = finer

    corners = np.array(tris)                      # (T, 3, 2)
    pts = np.einsum("kj,tjd->tkd", bary, corners).reshape(-1, 2)
    vals = riesz_potential(poly, pts, alpha).reshape(len(tris), len(wts))
    d1 = corners[:, 1] - corners[:, 0]
    d2 = corners[:, 2] - corners[:, 0]
    areas = 0.5 * np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    return float(np.sum(areas * (vals @ wts)))


# ---------------------------------------------------------------------------
# closed-form constants
# ---------------------------------------------------------------------------

def lipschitz_constant(alpha):
    """c_{2,α} = 4 π^(α/2) / (2 - α): Lipschitz constant of V with respect to
    the symmetric difference among sets of area at most 1."""
    _check_alpha(alpha)
    return 4.0 * np.pi ** (0.5 * alpha) / (2.0 - alpha)


def mass_to_gamma(m, alpha):
    """Rescaling γ = m^((3-α)/2) linking the mass-m model to the unit-mass
    problem with coefficient γ (n = 2)."""
    _check_alpha(alpha)
    m = float(m)
    if not m > 0.0:
        raise ValueError("mass must be positive")
    return m ** (0.5 * (3.0 - alpha))


def ball_potential_sup(alpha, area=1.0):
    """Sup of the Riesz potential over all sets of the given area: attained
    at the center of the ball, v = 2 π r^(2-α) / (2-α) with π r^2 = area."""
    _check_alpha(alpha)
    r = np.sqrt(area / np.pi)
    return 2.0 * np.pi * r ** (2.0 - alpha) / (2.0 - alpha)
