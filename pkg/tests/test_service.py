import numpy as np
import pytest
from fastapi.testclient import TestClient

from anisodrop.service.app import app

BOX = {"type": "crystalline",
       "generators": [[0.75, 1 / 3], [-0.75, 1 / 3], [-0.75, -1 / 3], [0.75, -1 / 3]]}
QUAD = {"type": "quadratic", "M": [[4.0, 0.0], [0.0, 1.0]]}


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    data = client.get("/health").json()
    assert data["status"] == "ok"


def test_wulff_endpoint(client):
    resp = client.post("/wulff", json={"tension": BOX})
    assert resp.status_code == 200
    data = resp.json()
    assert data["area"] == pytest.approx(1.0, abs=1e-12)
    assert data["perimeter"] == pytest.approx(2.0, abs=1e-12)
    verts = np.array(data["polygon"]["vertices"])
    assert len(verts) == 4


def test_energy_endpoint_with_shape(client):
    body = {"tension": BOX, "alpha": 1.0, "gamma": 0.1,
            "shape": {"vertices": [[0.5, -0.5], [0.5, 0.5], [-0.5, 0.5], [-0.5, -0.5]]}}
    data = client.post("/energy", json=body).json()
    assert data["perimeter"] == pytest.approx(1.5 + 1 / 1.5, abs=1e-12)
    assert data["total_energy"] == pytest.approx(
        data["perimeter"] + 0.1 * data["riesz_energy"], rel=1e-12)


def test_energy_endpoint_mc(client):
    body = {"tension": BOX, "alpha": 1.0, "mc_samples": 20000, "seed": 5,
            "shape": {"vertices": [[0.5, -0.5], [0.5, 0.5], [-0.5, 0.5], [-0.5, -0.5]]}}
    d1 = client.post("/energy", json=body).json()
    d2 = client.post("/energy", json=body).json()
    assert d1["mc_estimate"] == d2["mc_estimate"]
    assert abs(d1["riesz_energy"] - d1["mc_estimate"]) <= 3.0 * d1["mc_std_error"]


def test_energy_validation_422(client):
    resp = client.post("/energy", json={"tension": BOX, "alpha": 2.5})
    assert resp.status_code == 422


def test_unknown_tension_type_422(client):
    resp = client.post("/wulff", json={"tension": {"type": "weird"}})
    assert resp.status_code == 422


def test_degenerate_shape_maps_to_422(client):
    bad = {"vertices": [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]}
    resp = client.post("/energy", json={"tension": BOX, "alpha": 1.0, "shape": bad})
    assert resp.status_code == 422
    assert resp.json()["error"] == "GeometryError"


def test_coeffs_endpoint_matches_library(client):
    from anisodrop.anisotropy import box_tension
    from anisodrop.geometry import unit_square
    from anisodrop.variations import StretchFamily, stretch_derivatives

    data = client.post("/coeffs", json={"tension": BOX, "alpha": 1.0, "a0": 1.5}).json()
    co = stretch_derivatives(StretchFamily(unit_square(), box_tension(1.5), 1.0), 1.5)
    assert data["mu1"] == pytest.approx(co.mu1, rel=1e-12)
    assert data["mu2"] == pytest.approx(co.mu2, rel=1e-12)
    assert data["mu2_covariance"] == pytest.approx(co.mu2, rel=1e-3)


def test_sweep_endpoint(client):
    body = {"tension": BOX, "alpha": 1.0, "a0": 1.5,
            "gammas": list(np.logspace(-1, -3.1, 5))}
    data = client.post("/sweep", json=body).json()
    assert len(data["rows"]) == 5
    assert data["rows"][0]["gamma"] > data["rows"][-1]["gamma"]
    assert data["minimizer_scope"].startswith("rectangle-family")


def test_lemma_endpoint(client):
    data = client.post("/lemma", json={"case": "circles", "t": 0.01}).json()
    annulus = 2 * np.pi * 0.01 + np.pi * 1e-4
    assert data["sym_diff"] == pytest.approx(annulus, rel=1e-3)
    assert data["lhs_ok"] and data["rhs_ok"] and not data["lhs_ok_raw"]


def test_el_endpoint(client):
    body = {"tension": QUAD, "alpha": 1.0, "gamma": 0.1, "n_nodes": 256,
            "include_nodes": True}
    data = client.post("/el", json=body).json()
    assert data["nonconstancy_ratio"] >= 0.01
    assert len(data["curvature_f"]) == 256
    # crystalline tension has no classical curvature
    resp = client.post("/el", json={"tension": BOX, "alpha": 1.0})
    assert resp.status_code == 422
    assert resp.json()["error"] == "UnsupportedError"


def test_verify_endpoint_subset(client):
    data = client.post("/verify", json={"criteria": [2, 3]}).json()
    assert [r["index"] for r in data["results"]] == [2, 3]
    assert data["all_passed"] is True
    resp = client.post("/verify", json={"criteria": [99]})
    assert resp.status_code == 422
