"""Pydantic request/response models for the HTTP service.

The tension wire format mirrors the JSON files the CLI reads:
{"type": "crystalline"|"quadratic"|"quartic"|"stretched", ...}.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field

from ..anisotropy import tension_from_dict


class CrystallineModel(BaseModel):
    type: Literal["crystalline"]
    generators: List[Tuple[float, float]]


class QuadraticModel(BaseModel):
    type: Literal["quadratic"]
    M: List[List[float]]


class QuarticModel(BaseModel):
    type: Literal["quartic"]
    beta: float = Field(gt=0.0, lt=1.0)


class StretchedModel(BaseModel):
    type: Literal["stretched"]
    a: float = Field(gt=0.0)
    base: "TensionModel"


TensionModel = Union[CrystallineModel, QuadraticModel, QuarticModel, StretchedModel]
StretchedModel.model_rebuild()


def build_tension(model):
    return tension_from_dict(model.model_dump())


class PolygonModel(BaseModel):
    vertices: List[Tuple[float, float]]


BaseName = Literal["square", "disk", "octagon"]


class WulffRequest(BaseModel):
    tension: TensionModel = Field(discriminator="type")
    n_directions: int = Field(default=720, ge=3)


class WulffResponse(BaseModel):
    polygon: PolygonModel
    area: float
    perimeter: float


class EnergyRequest(BaseModel):
    tension: TensionModel = Field(discriminator="type")
    alpha: float = Field(gt=0.0, lt=2.0)
    gamma: float = Field(default=0.0, ge=0.0)
    shape: Optional[PolygonModel] = None  # default: the tension's Wulff body
    n_directions: int = Field(default=720, ge=3)
    quad_tol: float = Field(default=1e-7, gt=0.0)
    mc_samples: Optional[int] = Field(default=None, ge=10_000)
    seed: int = 0


class EnergyResponse(BaseModel):
    area: float
    perimeter: float
    riesz_energy: float
    total_energy: float
    mc_estimate: Optional[float] = None
    mc_std_error: Optional[float] = None


class CoeffsRequest(BaseModel):
    tension: TensionModel = Field(discriminator="type")
    alpha: float = Field(gt=0.0, lt=2.0)
    a0: float = Field(gt=0.0)
    base: BaseName = "square"
    base_polygon: Optional[PolygonModel] = None
    fd_step: Optional[float] = Field(default=None, gt=0.0)
    quad_tol: float = Field(default=1e-10, gt=0.0)


class CoeffsResponse(BaseModel):
    mu1: float
    mu2: float
    mu3: float
    a0: float
    mu2_covariance: float
    lower_bound_constant: float


class SweepRequest(BaseModel):
    tension: TensionModel = Field(discriminator="type")
    alpha: float = Field(gt=0.0, lt=2.0)
    a0: float = Field(gt=0.0)
    gammas: List[float]
    base: BaseName = "square"
    base_polygon: Optional[PolygonModel] = None
    bracket: Optional[Tuple[float, float]] = None
    tol_a: float = Field(default=1e-8, gt=0.0)
    quad_tol: float = Field(default=1e-11, gt=0.0)


class SweepRowModel(BaseModel):
    gamma: float
    a_star: float
    E_star: float
    E_wulff: float
    sym_diff: float
    deficit: float


class SweepResponse(BaseModel):
    rows: List[SweepRowModel]
    slope_symdiff: float
    slope_deficit: float
    symdiff_over_gamma: float
    deficit_over_gamma2: float
    a_shift_over_gamma: float
    a0: float
    minimizer_scope: str
    nonconvex_gammas: List[float]


class LemmaRequest(BaseModel):
    case: Literal["circles", "dilation", "bump"]
    t: float = Field(default=0.01, gt=0.0)
    eps: float = Field(default=0.001, gt=0.0)
    delta: float = Field(default=0.1, gt=0.0)


class LemmaResponse(BaseModel):
    case: str
    sym_diff: float
    psi_c0: float
    psi_c1: float
    lhs_ok: bool
    lhs_ok_raw: bool
    rhs_ok: bool
    C: float


class ELRequest(BaseModel):
    tension: TensionModel = Field(discriminator="type")
    alpha: float = Field(gt=0.0, lt=2.0)
    gamma: float = Field(default=0.0, ge=0.0)
    n_nodes: int = Field(default=1024, ge=64)
    include_nodes: bool = False


class ELResponse(BaseModel):
    gamma: float
    lambda_hat: float
    residual_std: float
    nonconstancy_ratio: float
    n_nodes: int
    curvature_f: Optional[List[float]] = None
    potential: Optional[List[float]] = None


class VerifyRequest(BaseModel):
    criteria: Optional[List[int]] = None


class CriterionModel(BaseModel):
    index: int
    name: str
    passed: bool
    details: str


class VerifyResponse(BaseModel):
    results: List[CriterionModel]
    all_passed: bool
