"""Surface tensions: positively 1-homogeneous convex weights on normal directions.

Four families are implemented:

* ``Crystalline`` -- max of finitely many linear forms; its unit Wulff body
  is the convex hull of the generators.
* ``QuadraticForm`` -- sqrt(nu . M nu) for a symmetric positive-definite M;
  the Wulff body is an ellipse.
* ``RegularizedQuartic`` -- ((1-beta)|nu|^4 + beta(nu1^4+nu2^4))^(1/4), a
  concrete smooth, uniformly elliptic family with the full symmetry of the
  square.
* ``Stretched`` -- f_a(nu) = f(a*nu1, nu2/a), the one-parameter anisotropic
  deformation used throughout the stretch-family experiments.

All evaluations broadcast over a trailing axis of length 2, so a single call
handles one direction or a batch of directions.
"""

from __future__ import annotations

import numpy as np

from .errors import UnsupportedError

_TIE_RTOL = 1e-9  # relative tie tolerance for crystalline subgradients


def _as_directions(nu):
    """Validate and return directions as a float array of shape (..., 2)."""
    nu = np.asarray(nu, dtype=float)
    if nu.shape[-1] != 2:
        raise ValueError("directions must have a trailing axis of length 2")
    norms = np.hypot(nu[..., 0], nu[..., 1])
    if np.any(norms == 0.0):
        raise ValueError("surface tensions are undefined at the zero vector")
    return nu


class SurfaceTension:
    """Base class; subclasses implement ``value`` and ``gradient``."""

    smooth = False

    def value(self, nu):
        raise NotImplementedError

    def gradient(self, nu):
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError

    def __call__(self, nu):
        return self.value(nu)


class Crystalline(SurfaceTension):
    """f(nu) = max_i x_i . nu over a finite generator set."""

    smooth = False

    def __init__(self, generators):
        gens = np.atleast_2d(np.asarray(generators, dtype=float))
        if gens.ndim != 2 or gens.shape[1] != 2 or gens.shape[0] < 1:
            raise ValueError("generators must be a nonempty list of 2-vectors")
        centered = gens - gens.mean(axis=0)
        if np.linalg.matrix_rank(centered, tol=1e-12) < 2:
            raise ValueError("generator hull has empty interior (collinear points)")
        self.generators = gens
        # positivity of f on the sphere means 0 lies inside the hull;
        # checked on a direction sample, which is enough for sane inputs
        th = np.linspace(0.0, 2.0 * np.pi, 256, endpoint=False)
        sample = np.stack([np.cos(th), np.sin(th)], axis=-1)
        if np.min(self.value(sample)) <= 0.0:
            raise ValueError("generators must surround the origin (f > 0 on the sphere)")

    def value(self, nu):
        nu = _as_directions(nu)
        return np.max(nu @ self.generators.T, axis=-1)

    def gradient(self, nu):
        """Subgradient selection: average of all generators within a
        relative tie tolerance of the max.  Deterministic and symmetric,
        and satisfies the Euler identity grad . nu = f(nu) exactly."""
        nu = _as_directions(nu)
        dots = nu @ self.generators.T
        top = np.max(dots, axis=-1, keepdims=True)
        active = dots >= top - _TIE_RTOL * np.abs(top)
        weights = active / active.sum(axis=-1, keepdims=True)
        return weights @ self.generators

    def to_dict(self):
        return {"type": "crystalline", "generators": self.generators.tolist()}


class QuadraticForm(SurfaceTension):
    """f(nu) = sqrt(nu . M nu), M symmetric positive definite."""

    smooth = True

    def __init__(self, M):
        M = np.asarray(M, dtype=float)
        if M.shape != (2, 2):
            raise ValueError("M must be a 2x2 matrix")
        if not np.allclose(M, M.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(M).max())):
            raise ValueError("M must be symmetric")
        if np.min(np.linalg.eigvalsh(M)) <= 0.0:
            raise ValueError("M must be positive definite")
        self.M = 0.5 * (M + M.T)

    def value(self, nu):
        nu = _as_directions(nu)
        q = np.einsum("...i,ij,...j->...", nu, self.M, nu)
        return np.sqrt(q)

    def gradient(self, nu):
        nu = _as_directions(nu)
        return (nu @ self.M) / self.value(nu)[..., None]

    def to_dict(self):
        return {"type": "quadratic", "M": self.M.tolist()}


def euclidean():
    """The isotropic tension f(nu) = |nu|."""
    return QuadraticForm(np.eye(2))


class RegularizedQuartic(SurfaceTension):
    """f(nu) = ((1-beta)|nu|^4 + beta(nu1^4 + nu2^4))^(1/4), beta in (0,1).

    Smooth and uniformly elliptic on that open range, with the dihedral
    symmetry of the square.  This is the package's concrete smooth elliptic
    family: no canonical closed-form example exists, so experiments that
    need one use this stand-in.  beta interpolates between the Euclidean
    norm (beta=0) and the 4-norm (beta=1); both endpoints are excluded.
    """

    smooth = True

    def __init__(self, beta):
        beta = float(beta)
        if not 0.0 < beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        self.beta = beta

    def _g(self, nu):
        r2 = nu[..., 0] ** 2 + nu[..., 1] ** 2
        return (1.0 - self.beta) * r2 ** 2 + self.beta * (nu[..., 0] ** 4 + nu[..., 1] ** 4)

    def value(self, nu):
        nu = _as_directions(nu)
        return self._g(nu) ** 0.25

    def gradient(self, nu):
        nu = _as_directions(nu)
        g = self._g(nu)
        r2 = nu[..., 0] ** 2 + nu[..., 1] ** 2
        dg = (1.0 - self.beta) * r2[..., None] * nu + self.beta * nu ** 3
        return dg * g[..., None] ** -0.75

    def to_dict(self):
        return {"type": "quartic", "beta": self.beta}


class Stretched(SurfaceTension):
    """f_a(nu) = base(a*nu1, nu2/a) for a > 0."""

    def __init__(self, base, a):
        a = float(a)
        if not a > 0.0:
            raise ValueError("stretch factor a must be positive")
        if not isinstance(base, SurfaceTension):
            raise TypeError("base must be a SurfaceTension")
        self.base = base
        self.a = a

    @property
    def smooth(self):
        return self.base.smooth

    def _scaled(self, nu):
        out = np.empty_like(nu)
        out[..., 0] = self.a * nu[..., 0]
        out[..., 1] = nu[..., 1] / self.a
        return out

    def value(self, nu):
        nu = _as_directions(nu)
        return self.base.value(self._scaled(nu))

    def gradient(self, nu):
        nu = _as_directions(nu)
        g = self.base.gradient(self._scaled(nu))
        out = np.empty_like(g)
        out[..., 0] = self.a * g[..., 0]
        out[..., 1] = g[..., 1] / self.a
        return out

    def to_dict(self):
        return {"type": "stretched", "a": self.a, "base": self.base.to_dict()}


def stretch_tension(tension, a):
    """Wrap ``tension`` into its stretched version f_a(nu) = f(a nu1, nu2/a)."""
    return Stretched(tension, a)


def box_tension(a0):
    """Crystalline tension (a0|nu1| + |nu2|/a0)/2 whose Wulff body is the
    unit-area rectangle [-a0/2, a0/2] x [-1/(2 a0), 1/(2 a0)]."""
    a0 = float(a0)
    if not a0 > 0.0:
        raise ValueError("a0 must be positive")
    h = 0.5 * a0
    v = 0.5 / a0
    return Crystalline([[h, v], [-h, v], [-h, -v], [h, -v]])


def square_tension():
    """Crystalline tension (|nu1| + |nu2|)/2; Wulff body is the unit square."""
    return box_tension(1.0)


def ellipticity_bounds(tension, n_samples=64, h=1e-4):
    """Sampled bounds (lambda, Lambda) on the tangential second derivative.

    For unit directions nu and tangents tau = nu^perp this estimates
    d^2/dt^2 f(nu + t tau) at t=0 by central differences with one Richardson
    extrapolation level, and returns the (min, max) over the sample.
    """
    if not tension.smooth:
        raise UnsupportedError("ellipticity bounds need a smooth tension variant")
    n_samples = int(n_samples)
    if n_samples < 16:
        raise ValueError("need at least 16 sample directions")
    th = np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)
    nu = np.stack([np.cos(th), np.sin(th)], axis=-1)
    tau = np.stack([-np.sin(th), np.cos(th)], axis=-1)

    def second_diff(step):
        fp = tension.value(nu + step * tau)
        fm = tension.value(nu - step * tau)
        f0 = tension.value(nu)
        return (fp - 2.0 * f0 + fm) / step ** 2

    d_h = second_diff(h)
    d_h2 = second_diff(0.5 * h)
    d = (4.0 * d_h2 - d_h) / 3.0
    return float(np.min(d)), float(np.max(d))


#: The eight matrices of the dihedral group of the square.
D4_MATRICES = [
    np.array([[1.0, 0.0], [0.0, 1.0]]),
    np.array([[0.0, -1.0], [1.0, 0.0]]),
    np.array([[-1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [-1.0, 0.0]]),
    np.array([[1.0, 0.0], [0.0, -1.0]]),
    np.array([[-1.0, 0.0], [0.0, 1.0]]),
    np.array([[0.0, 1.0], [1.0, 0.0]]),
    np.array([[0.0, -1.0], [-1.0, 0.0]]),
]


def is_dihedral_symmetric(tension, tol=1e-9):
    """True iff f(A nu) = f(nu) for all A in D4, within relative ``tol``,
    checked on 64 sampled unit directions."""
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    th = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
    nu = np.stack([np.cos(th), np.sin(th)], axis=-1)
    f0 = tension.value(nu)
    for A in D4_MATRICES:
        if np.any(np.abs(tension.value(nu @ A.T) - f0) > tol * f0):
            return False
    return True


def tension_from_dict(data):
    """Parse the wire format {"type": ..., ...} into a SurfaceTension."""
    if not isinstance(data, dict) or "type" not in data:
        raise ValueError("tension JSON must be an object with a 'type' field")
    kind = data["type"]
    if kind == "crystalline":
        return Crystalline(data["generators"])
    if kind == "quadratic":
        return QuadraticForm(data["M"])
    if kind == "quartic":
        return RegularizedQuartic(data["beta"])
    if kind == "stretched":
        return Stretched(tension_from_dict(data["base"]), data["a"])
    raise ValueError(f"unknown tension type {kind!r}")
