"""Anisotropic liquid-drop energies in the plane.

Core objects: surface tensions and their Wulff bodies, exact convex-polygon
geometry, Riesz interaction energies via the set-covariance reduction, the
stretch-family variation coefficients, and gamma-sweep experiments around
the Wulff shape.
"""

from .anisotropy import (
    Crystalline,
    QuadraticForm,
    RegularizedQuartic,
    Stretched,
    SurfaceTension,
    box_tension,
    ellipticity_bounds,
    euclidean,
    is_dihedral_symmetric,
    square_tension,
    stretch_tension,
    tension_from_dict,
)
from .errors import (
    AnisodropError,
    BracketError,
    ExpansionError,
    GeometryError,
    NotAGraphError,
    QuadratureError,
    UnsupportedError,
)
from .geometry import (
    BoundaryCurve,
    ConvexPolygon,
    NormalGraph,
    anisotropic_perimeter,
    area_and_barycenter,
    convex_hull,
    disk_polygon,
    intersect_convex,
    lemma_graph_bounds,
    normal_graph,
    regular_polygon,
    rescale_to_area,
    set_covariance,
    stretch_set,
    sym_diff_area,
    unit_square,
    wulff_shape,
)
from .riesz import (
    RieszSpec,
    ball_potential_sup,
    lipschitz_constant,
    mass_to_gamma,
    riesz_energy,
    riesz_energy_mc,
    riesz_potential,
)
from .variations import (
    ELReport,
    StretchFamily,
    VariationCoefficients,
    dmu2_da_at_one,
    el_residual,
    mu2_asymptotic,
    mu2_integral,
    mu2_squeeze_bounds,
    stretch_derivatives,
    wulff_stretch_consistency,
)
from .dropsolve import (
    ExperimentReport,
    SweepConfig,
    lower_bound_constant,
    minimize_stretch,
    predicted_minimizer,
    sweep_gamma,
    total_energy,
)

__version__ = "0.1.0"
