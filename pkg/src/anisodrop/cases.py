"""Named experiment setups shared by the CLI, the service and the tests.

The graph-distance checks need concrete (base curve, convex target) pairs;
the Euler-Lagrange dichotomy needs a boundary, a tension and the enclosed
shape.  Keeping the constructions here makes CLI runs and acceptance runs
byte-for-byte the same experiments.
"""

from __future__ import annotations

import numpy as np

from .anisotropy import QuadraticForm, euclidean
from .geometry import BoundaryCurve

ELLIPSE_AXES = (2.0, 1.0)
BUMP_HEIGHT_COEFF = 0.2      # bump amplitude = coeff * delta^2; keeps the target convex
BUMP_CENTER = np.pi / 3.0


def lemma_case_circles(t=0.01, n_base=1024, n_target=4096, radius=1.0):
    """Concentric circles radius r and r + t; the symmetric difference is an
    annulus of area 2 pi r t + pi t^2."""
    base = BoundaryCurve.circle(radius, n_base)
    target = BoundaryCurve.circle(radius + t, n_target).to_polygon()
    return base, target


def lemma_case_dilation(eps=0.001, n_base=1024, n_target=8192):
    """Ellipse and its (1+eps)-dilation; psi = eps (x . nu) + O(eps^2)."""
    p, q = ELLIPSE_AXES
    base = BoundaryCurve.ellipse(p, q, n_base)
    target = BoundaryCurve.ellipse(p * (1.0 + eps), q * (1.0 + eps), n_target).to_polygon()
    return base, target


def _ellipse_support(p, q):
    def h(t):
        return np.sqrt(p ** 2 * np.cos(t) ** 2 + q ** 2 * np.sin(t) ** 2)

    return h


def lemma_case_bump(delta, coeff=BUMP_HEIGHT_COEFF, theta0=BUMP_CENTER,
                    n_base=1024, n_target=8192):
    """Ellipse with a localized convex bump grafted onto its support function.

    The bump has amplitude coeff * delta^2 and angular width delta, so
    ||psi||_C1 scales like delta while |E triangle F| scales like delta^3;
    coeff below the ellipse's minimal curvature radius keeps the target
    convex.  The bump is nonnegative, so the pair is nested.
    """
    p, q = ELLIPSE_AXES
    h = _ellipse_support(p, q)
    amp = coeff * delta ** 2

    def h_bumped(t):
        d = np.mod(t - theta0 + np.pi, 2.0 * np.pi) - np.pi
        return h(t) + amp * np.exp(-0.5 * (d / delta) ** 2)

    base = BoundaryCurve.ellipse(p, q, n_base)
    target = BoundaryCurve.from_support(h_bumped, n_target).to_polygon()
    return base, target


def el_case_disk(n_nodes=512):
    """Unit-area disk with the isotropic tension: both terms of the
    Euler-Lagrange operator are constant."""
    curve = BoundaryCurve.circle(np.pi ** -0.5, n_nodes)
    return curve, euclidean(), curve.to_polygon()


def el_case_ellipse(n_nodes=1024):
    """Unscaled Wulff ellipse of the diag(4, 1) quadratic tension: constant
    anisotropic curvature, non-constant potential."""
    tension = QuadraticForm([[4.0, 0.0], [0.0, 1.0]])
    curve = BoundaryCurve.from_tension(tension, n_nodes)
    return curve, tension, curve.to_polygon()
