"""Variation coefficients along the stretch family, and the Euler-Lagrange
residual of a boundary.

The family through a unit-area base set K is member(a) = {(a x, y / a)}:
stretching widthwise while preserving area, with member(1) = K.  When the
energy's tension is the a0-stretch of a tension with square symmetry, the
Wulff body of the stretched tension is exactly member(a0) of the base Wulff
body, so the family passes through the Wulff shape at a = a0.

Coefficients at a0:

    mu1 = d^2/da^2 P_f(member(a)),   mu2 = d/da V(member(a)),
    mu3 = d^2/da^2 V(member(a)),

with the tension held fixed and only the set stretched.  mu2 also has the
closed covariance form

    mu2(a0) = -(alpha/a0) ∫ C_{member(a0)}(z) (z1^2 - z2^2) / |z|^(2+alpha) dz,

which this module evaluates independently of the finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .anisotropy import is_dihedral_symmetric, stretch_tension
from .errors import UnsupportedError
from .geometry import (
    ConvexPolygon,
    anisotropic_perimeter,
    rescale_to_area,
    stretch_set,
    sym_diff_area,
    wulff_shape,
)
from .riesz import RieszSpec, covariance_angular_integral, riesz_energy, riesz_potential


@dataclass(frozen=True)
class StretchFamily:
    """Area-preserving stretch family through a unit-area base set."""

    base: ConvexPolygon
    tension: object
    alpha: float

    def __init__(self, base, tension, alpha, normalize=True):
        if normalize:
            base = rescale_to_area(base, 1.0, center=True)
        else:
            base = base.translate(-base.barycenter)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "tension", tension)
        object.__setattr__(self, "alpha", float(alpha))

    def member(self, a):
        """member(a) = {(a x, y / a) : (x, y) in base}; equals
        stretch_set(base, 1/a) and has the base's area for every a > 0."""
        a = float(a)
        if not a > 0.0:
            raise ValueError("family parameter a must be positive")
        return stretch_set(self.base, 1.0 / a)

    def perimeter(self, a):
        return anisotropic_perimeter(self.member(a), self.tension)

    def interaction(self, a, quad_tol=1e-10):
        return riesz_energy(self.member(a), RieszSpec(self.alpha, quad_tol=quad_tol))


@dataclass(frozen=True)
class VariationCoefficients:
    """Stretch derivatives of perimeter and interaction at a0."""

    mu1: float
    mu2: float
    mu3: float
    a0: float

    def to_dict(self):
        return {"mu1": self.mu1, "mu2": self.mu2, "mu3": self.mu3, "a0": self.a0}


def stretch_derivatives(family, a0, h=None, quad_tol=1e-10):
    """Central finite differences of P_f and V along the family at a0, with
    one Richardson extrapolation level.

    The quadrature tolerance must sit well below h^2 so the difference
    quotients see truncation error, not quadrature noise.
    """
    a0 = float(a0)
    if not a0 > 0.0:
        raise ValueError("a0 must be positive")
    if h is None:
        h = 1e-3 * a0
    if not 0.0 < h < 0.1 * a0:
        raise ValueError("step h must lie in (0, 0.1 a0)")

    def stencil(fn):
        return (fn(a0 - h), fn(a0 - h / 2), fn(a0), fn(a0 + h / 2), fn(a0 + h))

    def first(vals):
        m1, m2, _, p2, p1 = vals
        d_h = (p1 - m1) / (2.0 * h)
        d_h2 = (p2 - m2) / h
        return (4.0 * d_h2 - d_h) / 3.0

    def second(vals):
        m1, m2, c, p2, p1 = vals
        s_h = (p1 - 2.0 * c + m1) / h ** 2
        s_h2 = (p2 - 2.0 * c + m2) / (0.5 * h) ** 2
        return (4.0 * s_h2 - s_h) / 3.0

    p_vals = stencil(family.perimeter)
    v_vals = stencil(lambda a: family.interaction(a, quad_tol=quad_tol))
    return VariationCoefficients(
        mu1=second(p_vals), mu2=first(v_vals), mu3=second(v_vals), a0=a0
    )


def mu2_integral(family, a0, quad_tol=1e-9):
    """mu2(a0) by the closed covariance form, no finite differences.

    In polar coordinates the kernel (z1^2 - z2^2)/|z|^(2+alpha) contributes
    the angular weight cos(2 theta) on top of the common radial reduction.
    """
    a0 = float(a0)
    if not a0 > 0.0:
        raise ValueError("a0 must be positive")
    member = family.member(a0)
    val = covariance_angular_integral(
        member, family.alpha, weight=lambda th: np.cos(2.0 * th), rel_tol=quad_tol
    )
    return -(family.alpha / a0) * val


def dmu2_da_at_one(family, quad_tol=1e-9):
    """d/da mu2(member(a)) at a = 1 for a base with square symmetry.

    Differentiating V(member(a)) twice in a and evaluating at a = 1 gives

        alpha ∫∫ [(1+alpha) dx^4 - (1-alpha) dy^4 - (8+2alpha) dx^2 dy^2]
                  / |d|^(4+alpha),

    an angular weight in cos^4, sin^4 and cos^2 sin^2 over the covariance.
    This slope drives the small-(a0 - 1) expansion of mu2 around the
    symmetric point; the finite-difference oracle over mu2_integral
    confirms the kernel.
    """
    if not _base_is_square_symmetric(family):
        raise UnsupportedError("dmu2_da_at_one needs a base with square symmetry")
    alpha = family.alpha

    def weight(th):
        c2 = np.cos(th) ** 2
        s2 = np.sin(th) ** 2
        return (1.0 + alpha) * c2 * c2 - (1.0 - alpha) * s2 * s2 - (8.0 + 2.0 * alpha) * c2 * s2

    val = covariance_angular_integral(family.base, alpha, weight=weight, rel_tol=quad_tol)
    return alpha * val


def _base_is_square_symmetric(family, tol=1e-7):
    """Dihedral symmetry of the tension, or covariance symmetry of the base:
    the chord-angular profile must be invariant under a quarter turn and the
    axis reflection."""
    if is_dihedral_symmetric(family.tension, tol=1e-9):
        return True
    from .riesz import chord_power_integral

    probes = np.array([0.13, 0.51, 0.97, 1.31])
    j = np.array([chord_power_integral(family.base, t, 2.0) for t in probes])
    j_quarter = np.array([chord_power_integral(family.base, t + 0.5 * np.pi, 2.0) for t in probes])
    j_reflect = np.array([chord_power_integral(family.base, -t, 2.0) for t in probes])
    scale = np.max(np.abs(j))
    return bool(
        np.all(np.abs(j - j_quarter) <= tol * scale)
        and np.all(np.abs(j - j_reflect) <= tol * scale)
    )


def mu2_squeeze_bounds(p, a0, alpha, quad_tol=1e-9):
    """Two-sided bounds on mu2(K_{a0}) for any convex K with square-diagonal
    symmetry whose boundary passes through (2p, 0).

    Such a K is squeezed between S_min = [-p, p]^2 and S_max = [-2p, 2p]^2,
    and each half of the mu2 integrand is monotone under set inclusion; the
    S_min integrals equal 2^(alpha-4) times the S_max ones by scaling.  Both
    bounds are therefore integrals over S_max alone:

        hi = -(alpha/a0) (2^(alpha-4) X - Y),
        lo = -(alpha/a0) (X - 2^(alpha-4) Y),

    where X and Y are the stretched-kernel moments of z1^2 and z2^2 over the
    covariance of S_max.
    """
    p = float(p)
    a0 = float(a0)
    if not p > 0.0:
        raise ValueError("p must be positive")
    if not a0 > 0.0:
        raise ValueError("a0 must be positive")
    s_max = ConvexPolygon(
        [[2 * p, -2 * p], [2 * p, 2 * p], [-2 * p, 2 * p], [-2 * p, -2 * p]], clean=False
    )

    def w_x(th):
        c2 = np.cos(th) ** 2
        s2 = np.sin(th) ** 2
        return a0 ** 2 * c2 / (a0 ** 2 * c2 + s2 / a0 ** 2) ** (1.0 + 0.5 * alpha)

    def w_y(th):
        c2 = np.cos(th) ** 2
        s2 = np.sin(th) ** 2
        return (s2 / a0 ** 2) / (a0 ** 2 * c2 + s2 / a0 ** 2) ** (1.0 + 0.5 * alpha)

    x_mom = covariance_angular_integral(s_max, alpha, weight=w_x, rel_tol=quad_tol)
    y_mom = covariance_angular_integral(s_max, alpha, weight=w_y, rel_tol=quad_tol)
    factor = 2.0 ** (alpha - 4.0)
    lo = -(alpha / a0) * (x_mom - factor * y_mom)
    hi = -(alpha / a0) * (factor * x_mom - y_mom)
    return lo, hi


def mu2_asymptotic(family, a0_list, quad_tol=1e-6):
    """Large-a0 law mu2(a0) ~ -(alpha / a0^(1+alpha)) I with the marginal
    integral I = ∫ C_base(z) |z1|^(-alpha) dz.

    Returns [(a0, ratio)] with ratio = mu2(a0) / prediction -> 1.  The
    marginal integral converges only for alpha < 1 (the kernel |z1|^(-alpha)
    has a line singularity), so larger exponents are rejected.
    """
    alpha = family.alpha
    if alpha >= 1.0:
        raise UnsupportedError("the marginal integral diverges for alpha >= 1")
    a0_list = [float(a) for a in a0_list]
    if any(a < 2.0 for a in a0_list):
        raise ValueError("asymptotic regime needs a0 >= 2")

    marginal = covariance_angular_integral(
        family.base,
        alpha,
        weight=lambda th: np.abs(np.cos(th)) ** (-alpha),
        rel_tol=quad_tol,
        extra_seeds=(0.5 * np.pi,),
    )
    out = []
    for a0 in a0_list:
        mu2 = mu2_integral(family, a0, quad_tol=quad_tol)
        pred = -alpha * a0 ** (-(1.0 + alpha)) * marginal
        out.append((a0, mu2 / pred))
    return out


def wulff_stretch_consistency(tension, a, n_directions=720):
    """Defect |K_{f_a} △ member_a(K_f)| checking the adopted pairing between
    the tension stretch f_a(nu) = f(a nu1, nu2/a) and the set stretch
    (x, y) -> (a x, y/a).  Exactly zero for crystalline tensions; for smooth
    tensions the two polygonal constructions differ at the O(N^-2) level."""
    k_base = wulff_shape(tension, n_directions)
    lhs = wulff_shape(stretch_tension(tension, a), n_directions)
    rhs = stretch_set(k_base, 1.0 / a)
    return sym_diff_area(lhs, rhs)


# ---------------------------------------------------------------------------
# Euler-Lagrange residual
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ELReport:
    """Per-node anisotropic curvature and potential along a boundary, with
    the constancy diagnostics of H^f + gamma v."""

    curvature_f: np.ndarray = field(repr=False)
    potential: np.ndarray = field(repr=False)
    gamma: float = 0.0
    lambda_hat: float = 0.0
    residual_std: float = 0.0

    def to_dict(self):
        return {
            "curvature_f": list(map(float, self.curvature_f)),
            "potential": list(map(float, self.potential)),
            "gamma": self.gamma,
            "lambda_hat": self.lambda_hat,
            "residual_std": self.residual_std,
        }


def el_residual(curve, tension, shape, gamma, alpha):
    """Residual nonconstancy of H^f + gamma v on a discretized boundary.

    H^f is the tangential divergence of grad f composed with the normal
    field, discretized by centered arclength differences; v is the Riesz
    potential of the enclosed shape at each node.  A critical boundary makes
    the sum constant; the report carries the mean (Lagrange-multiplier
    estimate) and the standard deviation across nodes.
    """
    if not tension.smooth:
        raise UnsupportedError("anisotropic curvature needs a smooth tension")
    if gamma < 0.0:
        raise ValueError("gamma must be nonnegative")
    x_field = tension.gradient(curve.normals)
    tau = np.stack([-curve.normals[:, 1], curve.normals[:, 0]], axis=-1)
    d_x = (np.roll(x_field, -1, axis=0) - np.roll(x_field, 1, axis=0)) / (2.0 * curve.ds)
    curvature_f = np.sum(tau * d_x, axis=1)

    if gamma > 0.0:
        potential = riesz_potential(shape, curve.positions, alpha)
    else:
        potential = np.zeros(len(curve))
    lhs = curvature_f + gamma * potential
    return ELReport(
        curvature_f=curvature_f,
        potential=potential,
        gamma=float(gamma),
        lambda_hat=float(np.mean(lhs)),
        residual_std=float(np.std(lhs)),
    )
