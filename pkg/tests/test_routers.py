"""Integration tests for s2rkit FastAPI packing router."""
import math

import pytest
from fastapi import FastAPI
from fastapi.testclient import TestClient

from s2rkit import PackingSettings
from s2rkit.fastapi import build_packing_router


@pytest.fixture
def client(packing_settings: PackingSettings) -> TestClient:
    app = FastAPI()
    app.include_router(build_packing_router(settings=packing_settings), prefix="/packing")
    return TestClient(app)


def test_volume(client):
    r = client.get("/packing/volume", params={"rho": math.pi / 2})
    assert r.status_code == 200
    assert r.json()["volume"] == pytest.approx(13.74539472, abs=1e-6)


def test_volume_out_of_range(client):
    r = client.get("/packing/volume", params={"rho": 3.2})
    assert r.status_code == 400
    assert "rho < pi" in r.json()["detail"]


def test_distance(client):
    body = {"a": {"phi": 0.0, "theta": 0.0}, "b": {"phi": 0.0, "theta": 0.0, "t": 2.5}}
    r = client.post("/packing/distance", json=body)
    assert r.status_code == 200
    assert r.json()["distance"] == pytest.approx(2.5)


def test_frobenius(client):
    r = client.get("/packing/frobenius", params={"q": 3})
    assert r.status_code == 200
    assert len(r.json()["classes"]) == 4
    assert client.get("/packing/frobenius", params={"q": 1}).status_code == 400


def test_orbit(client):
    tau = math.pi / math.sqrt(3)
    body = {"q": 2, "tau": tau, "K": {"phi": 0.0, "theta": math.pi / 2}, "fiber_window": 2 * tau}
    r = client.post("/packing/orbit", json=body)
    assert r.status_code == 200
    assert [p["label"] for p in r.json()].count("1") == 1
    assert len(r.json()) == 5


def test_orbit_bad_tau(client):
    body = {"tau": -1.0, "K": {"phi": 0.0, "theta": 0.0}, "fiber_window": 1.0}
    assert client.post("/packing/orbit", json=body).status_code == 400


def test_optimize_tau(client):
    r = client.post("/packing/optimize/tau", json={"K": {"phi": math.pi / 4, "theta": 0.0}})
    assert r.status_code == 200
    data = r.json()
    assert data["tau"] == pytest.approx(math.pi / 2, abs=1e-8)
    assert data["density"] == pytest.approx(0.39461737, abs=1e-6)


def test_optimize_tau_outside_triangle(client):
    r = client.post("/packing/optimize/tau", json={"K": {"phi": 3.0, "theta": 0.2}})
    assert r.status_code == 400
