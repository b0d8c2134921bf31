"""Acceptance criteria: the quantitative predictions the package must verify.

Each criterion is a function returning a CriterionResult; ``run_acceptance``
executes a selection and reports one pass/fail line per criterion.  All
tolerances are fixed here, not configurable: they are the contract.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .anisotropy import (
    QuadraticForm,
    RegularizedQuartic,
    box_tension,
    square_tension,
)
from .cases import (
    el_case_disk,
    el_case_ellipse,
    lemma_case_bump,
    lemma_case_circles,
    lemma_case_dilation,
)
from .dropsolve import SweepConfig, lower_bound_constant, minimize_stretch, sweep_gamma, total_energy
from .geometry import (
    anisotropic_perimeter,
    convex_hull,
    disk_polygon,
    lemma_graph_bounds,
    regular_polygon,
    rescale_to_area,
    sym_diff_area,
    unit_square,
    wulff_shape,
)
from .riesz import (
    RieszSpec,
    ball_potential_sup,
    lipschitz_constant,
    riesz_energy,
    riesz_energy_mc,
    riesz_potential,
)
from .variations import (
    StretchFamily,
    dmu2_da_at_one,
    el_residual,
    mu2_integral,
    mu2_squeeze_bounds,
    mu2_asymptotic,
    stretch_derivatives,
)


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    details: str

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.index:2d} {self.name}: {self.details}"

    def to_dict(self):
        return {"index": self.index, "name": self.name,
                "passed": self.passed, "details": self.details}


def _rng(seed):
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def _random_convex(rng, n_points=12, area=None):
    poly = convex_hull(rng.normal(size=(n_points, 2)))
    if area is not None:
        poly = rescale_to_area(poly, area)
    return poly


def criterion_1_riesz_oracles():
    """Disk closed form and Monte Carlo agreement for the square."""
    t_start = time.perf_counter()
    disk = regular_polygon(720, 1.0)
    v_disk = riesz_energy(disk, RieszSpec(1.0, quad_tol=1e-9))
    target = 16.0 * np.pi / 3.0
    rel = abs(v_disk / target - 1.0)
    ok = rel <= 1e-3
    notes = [f"disk |V/ (16pi/3) - 1| = {rel:.2e}"]

    square = unit_square()
    for alpha in (0.5, 1.0, 1.5):
        spec = RieszSpec(alpha, quad_tol=1e-9, mc_samples=10_000_000, mc_seed=20_240_817)
        v_quad = riesz_energy(square, spec)
        est, se = riesz_energy_mc(square, spec)
        z = abs(v_quad - est) / se
        ok = ok and z <= 3.0
        notes.append(f"alpha={alpha}: |V - MC|/sigma = {z:.2f}")
    elapsed = time.perf_counter() - t_start
    ok = ok and elapsed < 30.0
    notes.append(f"runtime {elapsed:.1f}s < 30s")
    return CriterionResult(1, "Riesz oracle agreement", bool(ok), "; ".join(notes))


def criterion_2_wulff_identities():
    """P_f(K_f) = 2 |K_f| and the anisotropic isoperimetric inequality."""
    notes = []
    ok = True
    for tension, tol, label in (
        (box_tension(1.5), 1e-9, "box"),
        (square_tension(), 1e-9, "square"),
        (QuadraticForm([[4.0, 0.0], [0.0, 1.0]]), 1e-5, "quadratic"),
        (RegularizedQuartic(0.5), 1e-5, "quartic"),
    ):
        k = wulff_shape(tension, 720)
        rel = abs(anisotropic_perimeter(k, tension) / (2.0 * k.area) - 1.0)
        ok = ok and rel <= tol
        notes.append(f"{label}: |P/(2A) - 1| = {rel:.2e}")

    rng = _rng(42)
    worst = np.inf
    for tension in (box_tension(1.5), QuadraticForm([[4.0, 0.0], [0.0, 1.0]]), RegularizedQuartic(0.5)):
        k = wulff_shape(tension, 720)
        ratio_k = anisotropic_perimeter(k, tension) / np.sqrt(k.area)
        for _ in range(50):
            poly = _random_convex(rng)
            slack = anisotropic_perimeter(poly, tension) / np.sqrt(poly.area) - ratio_k
            worst = min(worst, slack)
    ok = ok and worst >= -1e-9
    notes.append(f"isoperimetric worst slack = {worst:.3e}")
    return CriterionResult(2, "Wulff identities", bool(ok), "; ".join(notes))


def criterion_3_symmetry_nulls():
    """mu2 vanishes at a0 = 1 for square-symmetric bases, and the family
    energy is symmetric under a <-> 1/a."""
    notes = []
    ok = True
    for base, label in ((unit_square(), "square"), (disk_polygon(720), "disk"),
                        (regular_polygon(8, 1.0), "octagon")):
        fam = StretchFamily(base, square_tension(), alpha=1.0)
        mu2 = mu2_integral(fam, 1.0, quad_tol=1e-9)
        ok = ok and abs(mu2) <= 1e-7
        notes.append(f"mu2({label}, a0=1) = {mu2:.2e}")

    a, gamma = 1.3, 0.1
    for tension, base, label in (
        (square_tension(), unit_square(), "crystalline-square"),
        (RegularizedQuartic(0.5), wulff_shape(RegularizedQuartic(0.5), 720), "quartic"),
    ):
        fam = StretchFamily(base, tension, alpha=1.0)
        spec = RieszSpec(1.0, quad_tol=1e-9)
        e_a = total_energy(fam.member(a), tension, gamma, spec)
        e_inv = total_energy(fam.member(1.0 / a), tension, gamma, spec)
        rel = abs(e_a / e_inv - 1.0)
        ok = ok and rel <= 1e-5
        notes.append(f"{label}: |E(K_a)/E(K_1/a) - 1| = {rel:.2e}")
    return CriterionResult(3, "symmetry nulls", bool(ok), "; ".join(notes))


_FD_CONFIGS = (
    ("square", 1.5, 1.0),
    ("square", 1.2, 0.5),
    ("square", 2.0, 1.5),
    ("octagon", 1.5, 1.0),
    ("disk", 1.3, 1.0),
)


def _base_by_name(name):
    if name == "square":
        return unit_square()
    if name == "octagon":
        return regular_polygon(8, 1.0)
    if name == "disk":
        return disk_polygon(256)
    raise ValueError(name)


def criterion_4_formula_fd_agreement():
    """Covariance-integral mu2 against finite differences, and the explicit
    derivative dmu2/da at a = 1 against its finite-difference oracle."""
    notes = []
    ok = True
    for name, a0, alpha in _FD_CONFIGS:
        fam = StretchFamily(_base_by_name(name), square_tension(), alpha=alpha)
        mu2_int = mu2_integral(fam, a0, quad_tol=1e-10)
        mu2_fd = stretch_derivatives(fam, a0, quad_tol=1e-10).mu2
        err = abs(mu2_int - mu2_fd)
        tol = max(1e-6, 1e-4 * abs(mu2_int))
        ok = ok and err <= tol
        notes.append(f"{name}/a0={a0}/alpha={alpha}: |int-fd| = {err:.1e}")

    for alpha in (0.5, 1.0):
        fam = StretchFamily(unit_square(), square_tension(), alpha=alpha)
        exact = dmu2_da_at_one(fam, quad_tol=1e-11)
        h = 1e-3
        fd_plain = (mu2_integral(fam, 1.0 + h, quad_tol=1e-12)
                    - mu2_integral(fam, 1.0 - h, quad_tol=1e-12)) / (2.0 * h)
        fd_half = (mu2_integral(fam, 1.0 + h / 2, quad_tol=1e-12)
                   - mu2_integral(fam, 1.0 - h / 2, quad_tol=1e-12)) / h
        fd = (4.0 * fd_half - fd_plain) / 3.0
        rel = abs(exact / fd - 1.0)
        ok = ok and rel <= 1e-4
        notes.append(f"dmu2/da alpha={alpha}: rel = {rel:.1e}")
    return CriterionResult(4, "formula/FD agreement", bool(ok), "; ".join(notes))


def _box_family(a0=1.5, alpha=1.0):
    return StretchFamily(unit_square(), box_tension(a0), alpha=alpha)


def criterion_5_minimizer_location():
    """(a*(gamma) - a0)/gamma converges to -mu2 a0^2 / 2, within 5 percent at
    gamma = 1e-3 and improving as gamma decreases."""
    a0 = 1.5
    fam = _box_family(a0)
    cfg = SweepConfig(family=fam, a0=a0, gammas=(1e-1, 1e-2, 1e-3, 1e-4), tol_a=1e-9)
    mu2 = mu2_integral(fam, a0, quad_tol=1e-11)
    target = -0.5 * mu2 * a0 ** 2
    errs = []
    for gamma in (3e-2, 1e-2, 3e-3, 1e-3):
        a_star, _ = minimize_stretch(cfg, gamma)
        errs.append(abs((a_star - a0) / gamma / target - 1.0))
    ok = errs[-1] <= 0.05 and all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    details = "rel errs over gamma 3e-2..1e-3: " + ", ".join(f"{e:.4f}" for e in errs)
    return CriterionResult(5, "Wulff-parameter drift coefficient", bool(ok), details)


def criterion_6_energy_expansion():
    """deficit/gamma^2 -> (mu2 a0 / 2)^2, cubic correction sign, and the
    mu2^2/(8 mu1) lower bound."""
    a0 = 1.5
    fam = _box_family(a0)
    cfg = SweepConfig(family=fam, a0=a0, gammas=(1e-1, 1e-2, 1e-3, 1e-4), tol_a=1e-9)
    coeffs = stretch_derivatives(fam, a0, quad_tol=1e-11)
    mu2 = mu2_integral(fam, a0, quad_tol=1e-11)
    lead = (0.5 * mu2 * a0) ** 2
    cubic = (0.5 * mu2 * a0) ** 3 + mu2 ** 2 * coeffs.mu3 * a0 ** 4 / 8.0

    spec = cfg.spec()
    member_a0 = fam.member(a0)
    e_wulff_base = anisotropic_perimeter(member_a0, fam.tension)
    v_wulff = riesz_energy(member_a0, spec)

    def deficit(gamma):
        _, e_star = minimize_stretch(cfg, gamma)
        return (e_wulff_base + gamma * v_wulff) - e_star

    d4 = deficit(1e-4)
    rel = abs(d4 / (lead * 1e-8) - 1.0)
    ok = rel <= 0.05

    gamma_c = 1e-2  # cubic term visible, quartic negligible
    corr = deficit(gamma_c) - lead * gamma_c ** 2
    ok = ok and np.sign(corr) == np.sign(-cubic)

    bound = lower_bound_constant(coeffs)
    d3 = deficit(1e-3)
    ok = ok and d4 >= bound * 1e-8 * 0.9 and d3 >= bound * 1e-6 * 0.9
    details = (f"deficit/gamma^2 rel err = {rel:.4f}; cubic sign {np.sign(corr):+.0f} "
               f"matches {np.sign(-cubic):+.0f}; lower bound {bound:.4f} respected")
    return CriterionResult(6, "energy expansion", bool(ok), details)


def criterion_7_scaling_laws():
    """Fitted log-log slopes: symmetric difference ~ gamma, deficit ~ gamma^2."""
    fam = _box_family(1.5)
    cfg = SweepConfig(family=fam, a0=1.5, gammas=np.logspace(-1, -4, 8), tol_a=1e-9)
    rep = sweep_gamma(cfg)
    ok = abs(rep.slope_symdiff - 1.0) <= 0.05 and abs(rep.slope_deficit - 2.0) <= 0.05
    details = f"slope_symdiff = {rep.slope_symdiff:.4f}, slope_deficit = {rep.slope_deficit:.4f}"
    return CriterionResult(7, "gamma scaling laws", bool(ok), details)


def criterion_8_squeeze_bounds():
    """Two-sided square bounds squeeze mu2 of the octagon through (2p, 0)."""
    p = 0.25
    octagon = regular_polygon(8, 2.0 * p)
    notes = []
    ok = True
    for alpha in (0.5, 1.0):
        fam = StretchFamily(octagon, square_tension(), alpha=alpha, normalize=False)
        for a0 in (1.2, 1.5, 2.0):
            mu2 = mu2_integral(fam, a0, quad_tol=1e-9)
            lo, hi = mu2_squeeze_bounds(p, a0, alpha, quad_tol=1e-9)
            good = lo <= mu2 <= hi
            ok = ok and good
            notes.append(f"alpha={alpha},a0={a0}: {lo:.3f} <= {mu2:.3f} <= {hi:.3f}")
    return CriterionResult(8, "squeeze bounds", bool(ok), "; ".join(notes))


def criterion_9_asymptotics():
    """Large-a0 law for alpha = 0.5 on the square: monotone ratios -> 1."""
    fam = StretchFamily(unit_square(), square_tension(), alpha=0.5)
    ratios = [r for _, r in mu2_asymptotic(fam, (4.0, 8.0, 16.0), quad_tol=1e-7)]
    ok = abs(ratios[-1] - 1.0) <= 0.1 and all(
        abs(b - 1.0) < abs(a - 1.0) for a, b in zip(ratios, ratios[1:])
    )
    details = "ratios: " + ", ".join(f"{r:.4f}" for r in ratios)
    return CriterionResult(9, "large-a0 asymptotics", bool(ok), details)


def criterion_10_lipschitz_and_sup():
    """|V(E) - V(F)| <= c_{2,alpha} |E triangle F| on random pairs, and the
    ball bound on boundary potentials."""
    rng = _rng(7)
    ok = True
    worst = -np.inf
    for alpha in (0.5, 1.0, 1.5):
        c = lipschitz_constant(alpha)
        spec = RieszSpec(alpha, quad_tol=1e-9)
        for _ in range(20):
            e_poly = _random_convex(rng, area=float(rng.uniform(0.25, 1.0)))
            f_poly = _random_convex(rng, area=float(rng.uniform(0.25, 1.0)))
            f_poly = f_poly.translate(rng.uniform(-0.3, 0.3, size=2))
            gap = abs(riesz_energy(e_poly, spec) - riesz_energy(f_poly, spec))
            margin = gap - c * sym_diff_area(e_poly, f_poly)
            worst = max(worst, margin)
            ok = ok and margin <= 1e-6

    sup_bound = ball_potential_sup(1.0)
    sup_seen = -np.inf
    shapes = [unit_square(), rescale_to_area(regular_polygon(7, 1.0), 1.0),
              rescale_to_area(_random_convex(rng), 1.0)]
    for poly in shapes:
        verts = poly.vertices
        k = len(verts)
        pts = 0.5 * (verts + np.roll(verts, -1, axis=0))
        pts = np.vstack([verts, pts])[: max(32, 2 * k)]
        sup_seen = max(sup_seen, float(np.max(riesz_potential(poly, pts, 1.0))))
    ok = ok and sup_seen <= sup_bound + 1e-6
    details = (f"worst Lipschitz margin = {worst:.2e}; "
               f"sup boundary potential {sup_seen:.4f} <= {sup_bound:.4f}")
    return CriterionResult(10, "Lipschitz and sup bounds", bool(ok), details)


def criterion_11_lemma_checker():
    """Graph-distance inequalities: corrected first form everywhere, second
    form with the declared constant on the shrinking bump family."""
    notes = []
    ok = True
    pairs = [("circles", lemma_case_circles()), ("dilation", lemma_case_dilation())]
    pairs += [(f"bump d={d}", lemma_case_bump(d)) for d in (0.2, 0.1, 0.05)]
    ratios = []
    for label, (base, target) in pairs:
        rep = lemma_graph_bounds(base, target)
        ok = ok and rep.lhs_ok and rep.rhs_ok
        if label.startswith("bump"):
            ratios.append(rep.psi_c1 / rep.sym_diff ** (1.0 / 3.0))
        notes.append(f"{label}: lhs={rep.lhs_ok} rhs={rep.rhs_ok}")
    notes.append("bump ratios |psi|_C1 / |EdF|^(1/3): "
                 + ", ".join(f"{r:.3f}" for r in ratios))
    return CriterionResult(11, "graph-distance lemma", bool(ok), "; ".join(notes))


def criterion_12_el_dichotomy():
    """Euler-Lagrange residual: constant for the isotropic disk, visibly
    non-constant for the anisotropic Wulff ellipse."""
    curve, tension, shape = el_case_disk()
    rep = el_residual(curve, tension, shape, 0.1, 1.0)
    ratio_disk = rep.residual_std / rep.lambda_hat

    curve_e, tension_e, shape_e = el_case_ellipse()
    rep0 = el_residual(curve_e, tension_e, shape_e, 0.0, 1.0)
    h_err = float(np.max(np.abs(rep0.curvature_f - 1.0)))
    rep1 = el_residual(curve_e, tension_e, shape_e, 0.1, 1.0)
    ratio_ell = rep1.residual_std / rep1.lambda_hat

    ok = ratio_disk <= 1e-4 and h_err <= 1e-3 and ratio_ell >= 0.01
    details = (f"disk ratio = {ratio_disk:.2e}; ellipse max|H-1| = {h_err:.2e}; "
               f"ellipse ratio = {ratio_ell:.4f}")
    return CriterionResult(12, "Euler-Lagrange dichotomy", bool(ok), details)


_CRITERIA = (
    criterion_1_riesz_oracles,
    criterion_2_wulff_identities,
    criterion_3_symmetry_nulls,
    criterion_4_formula_fd_agreement,
    criterion_5_minimizer_location,
    criterion_6_energy_expansion,
    criterion_7_scaling_laws,
    criterion_8_squeeze_bounds,
    criterion_9_asymptotics,
    criterion_10_lipschitz_and_sup,
    criterion_11_lemma_checker,
    criterion_12_el_dichotomy,
)


def run_acceptance(indices=None, printer=None):
    """Run the selected criteria (all by default); returns the result list
    and optionally prints one line per criterion."""
    if indices is None:
        indices = range(1, len(_CRITERIA) + 1)
    results = []
    for i in indices:
        if not 1 <= i <= len(_CRITERIA):
            raise ValueError(f"criterion index out of range: {i}")
        res = _CRITERIA[i - 1]()
        results.append(res)
        if printer is not None:
            printer(res.line())
    return results
