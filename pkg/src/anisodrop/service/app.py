"""FastAPI service exposing the package over HTTP.

Each endpoint wraps one public operation of the core package; the CLI is a
thin client of these endpoints.  Domain failures surface as 422 responses
with the exception class in the payload, so clients can distinguish bad
inputs from genuine numeric breakdowns (502).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..acceptance import run_acceptance
from ..anisotropy import tension_from_dict
from ..cases import lemma_case_bump, lemma_case_circles, lemma_case_dilation
from ..dropsolve import SweepConfig, lower_bound_constant, sweep_gamma, total_energy
from ..errors import AnisodropError, QuadratureError
from ..geometry import (
    BoundaryCurve,
    ConvexPolygon,
    anisotropic_perimeter,
    disk_polygon,
    lemma_graph_bounds,
    regular_polygon,
    unit_square,
    wulff_shape,
)
from ..riesz import RieszSpec, riesz_energy, riesz_energy_mc
from ..variations import StretchFamily, el_residual, mu2_integral, stretch_derivatives
from . import schemas as sm

app = FastAPI(title="anisodrop", version=__version__)


@app.exception_handler(QuadratureError)
async def _quadrature_error(request: Request, exc: QuadratureError):
    return JSONResponse(
        status_code=502,
        content={"error": "QuadratureError", "detail": str(exc), "estimate": exc.estimate},
    )


@app.exception_handler(AnisodropError)
async def _domain_error(request: Request, exc: AnisodropError):
    return JSONResponse(status_code=422, content={"error": type(exc).__name__, "detail": str(exc)})


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError):
    return JSONResponse(status_code=422, content={"error": "ValueError", "detail": str(exc)})


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


def _shape_for(req_shape, tension, n_directions):
    if req_shape is not None:
        return ConvexPolygon(req_shape.vertices)
    return wulff_shape(tension, n_directions)


def _family_base(name, polygon_model):
    if polygon_model is not None:
        return ConvexPolygon(polygon_model.vertices)
    return {"square": unit_square, "disk": disk_polygon, "octagon": lambda: regular_polygon(8, 1.0)}[name]()


@app.post("/wulff", response_model=sm.WulffResponse)
def wulff(req: sm.WulffRequest):
    tension = sm.build_tension(req.tension)
    poly = wulff_shape(tension, req.n_directions)
    return sm.WulffResponse(
        polygon=sm.PolygonModel(vertices=poly.vertices.tolist()),
        area=poly.area,
        perimeter=anisotropic_perimeter(poly, tension),
    )


@app.post("/energy", response_model=sm.EnergyResponse)
def energy(req: sm.EnergyRequest):
    tension = sm.build_tension(req.tension)
    shape = _shape_for(req.shape, tension, req.n_directions)
    spec = RieszSpec(req.alpha, quad_tol=req.quad_tol,
                     mc_samples=req.mc_samples or 10_000, mc_seed=req.seed)
    perimeter = anisotropic_perimeter(shape, tension)
    v = riesz_energy(shape, spec)
    mc_est = mc_se = None
    if req.mc_samples is not None:
        mc_est, mc_se = riesz_energy_mc(shape, spec)
    return sm.EnergyResponse(
        area=shape.area,
        perimeter=perimeter,
        riesz_energy=v,
        total_energy=perimeter + req.gamma * v,
        mc_estimate=mc_est,
        mc_std_error=mc_se,
    )


@app.post("/coeffs", response_model=sm.CoeffsResponse)
def coeffs(req: sm.CoeffsRequest):
    tension = sm.build_tension(req.tension)
    base = _family_base(req.base, req.base_polygon)
    family = StretchFamily(base, tension, req.alpha)
    co = stretch_derivatives(family, req.a0, h=req.fd_step, quad_tol=req.quad_tol)
    mu2_cov = mu2_integral(family, req.a0, quad_tol=req.quad_tol)
    return sm.CoeffsResponse(
        mu1=co.mu1, mu2=co.mu2, mu3=co.mu3, a0=co.a0,
        mu2_covariance=mu2_cov,
        lower_bound_constant=lower_bound_constant(co),
    )


@app.post("/sweep", response_model=sm.SweepResponse)
def sweep(req: sm.SweepRequest):
    tension = sm.build_tension(req.tension)
    base = _family_base(req.base, req.base_polygon)
    family = StretchFamily(base, tension, req.alpha)
    config = SweepConfig(family=family, a0=req.a0, gammas=tuple(req.gammas),
                         bracket=req.bracket, tol_a=req.tol_a, quad_tol=req.quad_tol)
    report = sweep_gamma(config)
    payload = report.to_dict()
    return sm.SweepResponse(**payload)


@app.post("/lemma", response_model=sm.LemmaResponse)
def lemma(req: sm.LemmaRequest):
    if req.case == "circles":
        base, target = lemma_case_circles(t=req.t)
    elif req.case == "dilation":
        base, target = lemma_case_dilation(eps=req.eps)
    else:
        base, target = lemma_case_bump(req.delta)
    rep = lemma_graph_bounds(base, target)
    return sm.LemmaResponse(case=req.case, **rep.to_dict())


@app.post("/el", response_model=sm.ELResponse)
def el(req: sm.ELRequest):
    tension = sm.build_tension(req.tension)
    curve = BoundaryCurve.from_tension(tension, req.n_nodes)
    shape = curve.to_polygon()
    rep = el_residual(curve, tension, shape, req.gamma, req.alpha)
    ratio = rep.residual_std / abs(rep.lambda_hat) if rep.lambda_hat != 0.0 else float("inf")
    return sm.ELResponse(
        gamma=rep.gamma,
        lambda_hat=rep.lambda_hat,
        residual_std=rep.residual_std,
        nonconstancy_ratio=ratio,
        n_nodes=req.n_nodes,
        curvature_f=list(map(float, rep.curvature_f)) if req.include_nodes else None,
        potential=list(map(float, rep.potential)) if req.include_nodes else None,
    )


@app.post("/verify", response_model=sm.VerifyResponse)
def verify(req: sm.VerifyRequest):
    results = run_acceptance(req.criteria)
    return sm.VerifyResponse(
        results=[sm.CriterionModel(**r.to_dict()) for r in results],
        all_passed=all(r.passed for r in results),
    )


# referenced by the CLI's tension file loader; kept here so the service and
# CLI agree on the accepted wire format
def parse_tension_payload(data):
    return tension_from_dict(data)
