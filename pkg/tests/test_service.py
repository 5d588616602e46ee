import json

import pytest
from fastapi.testclient import TestClient

from ppsbounds.service.app import LOCAL_HANDLERS, app

client = TestClient(app)


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_bounds_endpoint():
    response = client.post("/bounds", json={"spheres": [2, 7]})
    assert response.status_code == 200
    data = response.json()
    assert data["tc"] == {"lo": 4, "hi": 4}
    assert data["flags"]["tc_below_dim"] is True
    assert any(item["tag"] == "zcl" and item["value"] == 4 for item in data["items"])


def test_bounds_with_overrides():
    payload = {
        "spheres": [5],
        "overrides": [{"key": "tc.P.5", "value": 8, "provenance": "survey"}],
    }
    data = client.post("/bounds", json=payload).json()
    assert data["tc"] == {"lo": 8, "hi": 8}


def test_validation_errors_map_to_exit_codes():
    response = client.post("/bounds", json={"spheres": [7, 2]})
    assert response.status_code == 400
    assert response.json()["exit_code"] == 2
    response = client.post("/bounds", json={"spheres": [1] * 17})
    assert response.status_code == 422
    assert response.json()["exit_code"] == 3


def test_axial_endpoint():
    data = client.post("/axial", json={"m": 12, "n": 27, "l": 31}).json()
    assert data["verdict"] == "unobstructed"
    data = client.post("/axial", json={"m": 2, "n": 2, "l": 2}).json()
    assert data["obstructed"] is True


def test_axial_interval_endpoint():
    data = client.post(
        "/axial-interval", json={"spheres": [3, 5], "other": [3, 5]}
    ).json()
    assert (data["lo"], data["hi"]) == (3, 3)


def test_immersion_endpoint():
    payload = {"spheres": [12, 14], "gd": 5, "gd_provenance": "external tables"}
    data = client.post("/immersion", json=payload).json()
    assert data["imm_exact"] == 31
    assert data["gd_source"] == "external tables"


def test_ring_endpoint():
    data = client.post("/ring", json={"spheres": [2, 2], "poincare": True, "degree": 2}).json()
    assert data["total_rank"] == 6
    assert data["poincare"] == [1, 1, 2, 1, 1]
    assert set(data["basis"]) == {"x^2", "x2"}
    assert "x2^2 = x^2*x2" in data["relations"]


def test_zcl_endpoint():
    data = client.post("/zcl", json={"spheres": [2, 2]}).json()
    assert data["zcl"] == 4
    assert data["search"] == "standard-generator"


def test_plan_endpoint():
    payload = {"spheres": [2], "start": [1, 0, 0], "goal": [-1, 0, 0]}
    data = client.post("/plan", json=payload).json()
    assert data["rule"] == [2]
    assert data["level"] == 2


def test_plan_product_endpoint():
    payload = {
        "spheres": [3, 4],
        "start": [1, 0, 0, 0, 1, 0, 0, 0, 0],
        "goal": [-1, 0, 0, 0, -1, 0, 0, 0, 0],
    }
    data = client.post("/plan", json=payload).json()
    assert data["level"] == 3
    assert data["rule"] == [1, 2]
    assert len(data["points"]) == 2


def test_verify_endpoint():
    payload = {"spheres": [3], "samples": 2000, "seed": 1}
    data = client.post("/verify", json=payload).json()
    assert data["ok"] is True
    assert data["coverage"] == 1.0
    assert data["rule_count"] == 2


def test_verify_triple_product_endpoint():
    payload = {"spheres": [1, 1, 2], "samples": 2000, "seed": 5}
    data = client.post("/verify", json=payload).json()
    assert data["ok"] is True
    assert data["max_level"] == 4
    assert data["rule_count"] == 12


def test_table_endpoint():
    payload = {"family": "2^e,2^e", "start": 1, "stop": 3}
    data = client.post("/table", json=payload).json()
    assert [row["axial_dim"] for row in data["rows"]] == [7, 13, 25]
    assert [row["borel_product_strict"] for row in data["rows"]] == [12, 24, 48]


def test_check_map_endpoint():
    payload = {"map": "inner_product", "budget": 5000}
    data = client.post("/check-map", json=payload).json()
    assert data["ok"] is False
    assert data["counterexample"]["norm"] < 1e-8


def test_http_matches_local_dispatch():
    # the CLI's in-process path and the HTTP path must agree byte for byte
    for path, payload in [
        ("/bounds", {"spheres": [2, 7]}),
        ("/zcl", {"spheres": [2, 2]}),
        ("/verify", {"spheres": [2], "samples": 500, "seed": 9}),
    ]:
        model_cls, handler = LOCAL_HANDLERS[path]
        local = json.loads(handler(model_cls(**payload)).model_dump_json())
        remote = client.post(path, json=payload).json()
        assert json.dumps(local, sort_keys=True) == json.dumps(remote, sort_keys=True)


def test_openapi_lists_all_paths():
    spec = client.get("/openapi.json").json()
    for path in LOCAL_HANDLERS:
        assert path in spec["paths"]
