"""HTTP service contract tests (in-process, no network)."""

import pytest
from fastapi.testclient import TestClient

from sveiqhr import ModelParameters, compute_r0
from sveiqhr.interface.server import create_app

ENDEMIC = {"delta": 0.653, "u2": 0.278}


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


class TestHealthAndDefaults:
    def test_health(self, client):
        r = client.get("/api/health")
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "ok" and body["version"]

    def test_defaults_shape(self, client):
        body = client.get("/api/defaults").json()
        assert body["parameters"]["delta"] is None
        assert body["parameters"]["u2"] is None
        assert body["parameters"]["beta"] == 4.74396e-8
        assert "lambda" in body["parameters"]  # external names
        assert body["required"] == ["delta", "u2"]
        assert body["initial_presets"] == ["default", "dfe"]
        assert body["integrator"]["method"] == "rk45"

    def test_defaults_ppkm_levels(self, client):
        levels = client.get("/api/defaults").json()["ppkm_levels"]
        assert set(levels) == {"1", "2", "3", "4"}
        assert levels["1"] == pytest.approx(2.5 / 9.0, abs=1e-15)
        assert levels["2"] == 0.389
        assert levels["3"] == 0.694
        assert levels["4"] == 0.861

    def test_cors_open(self, client):
        r = client.get("/api/health", headers={"Origin": "http://localhost:5173"})
        assert r.headers.get("access-control-allow-origin") == "*"


class TestR0:
    def test_matches_library_exactly(self, client):
        r = client.post("/api/r0", json=ENDEMIC)
        assert r.status_code == 200
        expected = compute_r0(ModelParameters(delta=0.653, u2=0.278))
        assert r.json()["r0"] == expected

    def test_ppkm_level_accepted(self, client):
        a = client.post("/api/r0", json={"delta": 0.653, "ppkm_level": 4}).json()
        b = client.post("/api/r0", json={"delta": 0.653, "u2": 0.861}).json()
        assert a == b

    def test_missing_u2_is_a_field_error(self, client):
        r = client.post("/api/r0", json={"delta": 0.653})
        assert r.status_code == 400
        assert r.json()["field"] == "u2"

    def test_out_of_domain_value(self, client):
        r = client.post("/api/r0", json={"delta": 0.653, "u2": 1.5})
        assert r.status_code == 400
        assert r.json()["field"] == "u2"

    def test_unknown_key_named(self, client):
        r = client.post("/api/r0", json={"delta": 0.653, "u2": 0.2, "betta": 1})
        assert r.status_code == 400
        assert r.json()["field"] == "betta"

    def test_malformed_json_body(self, client):
        r = client.post("/api/r0", content=b"{oops",
                        headers={"content-type": "application/json"})
        assert r.status_code == 400
        assert r.json()["error"] == "malformed request body"

    def test_non_object_body(self, client):
        r = client.post("/api/r0", json=[1, 2, 3])
        assert r.status_code == 400


class TestRegion:
    def test_u2_not_required(self, client):
        r = client.post("/api/region", json={"delta": 0.93})
        assert r.status_code == 200
        body = r.json()
        assert body["l2"] == pytest.approx(0.92938079458929514984, rel=1e-10)
        assert body["slope_sign"] == -1
        assert len(body["feasible_polygon"]) == 5

    def test_singular_geometry_is_422_with_code(self, client):
        r = client.post("/api/region", json={"delta": 0.92938079458929514984})
        assert r.status_code == 422
        body = r.json()
        assert body["code"] == "SingularL1"
        assert "error" in body


class TestSensitivity:
    def test_full_table(self, client):
        r = client.post("/api/sensitivity", json=ENDEMIC)
        assert r.status_code == 200
        body = r.json()
        rows = body["rows"]
        assert len(rows) == 17
        assert sorted(row["rank"] for row in rows) == list(range(1, 18))
        assert rows[0]["parameter"] == "delta"
        beta = next(row for row in rows if row["parameter"] == "beta")
        assert beta["upsilon"] == 1.0

    def test_zero_r0_is_422_with_code(self, client):
        r = client.post("/api/sensitivity",
                        json={"delta": 0.5, "u2": 1.0, "u1": 0.0})
        assert r.status_code == 422
        assert r.json()["code"] == "ZeroR0"


class TestSimulate:
    def test_basic_run(self, client):
        r = client.post("/api/simulate", json={
            "parameters": ENDEMIC,
            "integrator": {"horizon": 10.0, "sample_interval": 2.0},
        })
        assert r.status_code == 200
        body = r.json()
        assert len(body["times"]) == 6
        assert set(body["states"]) == {"S", "V", "E", "I", "Q", "H", "R"}
        assert all(len(v) == 6 for v in body["states"].values())
        assert len(body["total"]) == 6 and len(body["non_healthy"]) == 6
        assert body["peak"]["peak"] >= body["peak"]["terminal"] > 0.0
        assert body["initial_preset"] == "default"

    def test_explicit_initial_state(self, client):
        initial = {"S": 273523620.0, "V": 0.0, "E": 0.0, "I": 1.0,
                   "Q": 0.0, "H": 0.0, "R": 0.0}
        r = client.post("/api/simulate", json={
            "parameters": ENDEMIC,
            "initial": initial,
            "integrator": {"horizon": 1.0, "sample_interval": 1.0},
        })
        assert r.status_code == 200
        body = r.json()
        assert body["states"]["I"][0] == 1.0
        assert body["initial_preset"] is None

    def test_dfe_preset(self, client):
        r = client.post("/api/simulate", json={
            "parameters": {"delta": 0.653, "u2": 0.93, "u1": 1e-8},
            "initial": "dfe",
            "integrator": {"horizon": 2.0},
        })
        assert r.status_code == 200
        body = r.json()
        assert body["initial_preset"] == "dfe"
        series = body["non_healthy"]
        assert series[-1] == pytest.approx(series[0], rel=1e-9)

    def test_unknown_payload_key(self, client):
        r = client.post("/api/simulate", json={"parameters": ENDEMIC, "plot": True})
        assert r.status_code == 400
        assert r.json()["field"] == "plot"

    def test_sample_cap(self, client):
        r = client.post("/api/simulate", json={
            "parameters": ENDEMIC,
            "integrator": {"horizon": 2_000_000.0, "sample_interval": 1.0},
        })
        assert r.status_code == 400
        assert r.json()["field"] == "integrator.sample_interval"

    def test_missing_compartment_in_initial(self, client):
        r = client.post("/api/simulate", json={
            "parameters": ENDEMIC,
            "initial": {"S": 1.0},
            "integrator": {"horizon": 1.0},
        })
        assert r.status_code == 400
        assert r.json()["field"].startswith("initial.")


class TestSweep:
    def test_basic_sweep(self, client):
        r = client.post("/api/sweep", json={
            "parameters": ENDEMIC,
            "targets": ["u3"],
            "boosts": [0.3],
            "integrator": {"horizon": 30.0},
        })
        assert r.status_code == 200
        body = r.json()
        assert set(body) == {"baseline", "entries"}
        assert len(body["entries"]) == 1
        entry = body["entries"][0]
        assert entry["target"] == "u3" and entry["boost"] == 0.3

    def test_run_cap(self, client):
        r = client.post("/api/sweep", json={
            "parameters": ENDEMIC,
            "targets": ["u1", "u2", "u3", "u4", "u5"],
            "boosts": [i / 100.0 for i in range(13)],
            "integrator": {"horizon": 10.0},
        })
        assert r.status_code == 400
        assert r.json()["field"] == "targets"

    def test_total_sample_cap(self, client):
        r = client.post("/api/sweep", json={
            "parameters": ENDEMIC,
            "targets": ["u1", "u2", "u3", "u4", "u5"],
            "boosts": [0.1, 0.2, 0.3, 0.4],
            "integrator": {"horizon": 100_000.0, "sample_interval": 1.0},
        })
        assert r.status_code == 400
        assert r.json()["field"] == "integrator.sample_interval"

    def test_bad_target_rejected(self, client):
        r = client.post("/api/sweep", json={
            "parameters": ENDEMIC,
            "targets": ["beta"],
            "boosts": [0.3],
            "integrator": {"horizon": 10.0},
        })
        assert r.status_code == 400


class TestStatelessness:
    REQUESTS = (
        ("post", "/api/r0", ENDEMIC),
        ("post", "/api/region", {"delta": 0.93}),
        ("post", "/api/sensitivity", {"delta": 0.653, "u2": 0.93, "u1": 1e-8}),
        ("post", "/api/simulate", {"parameters": ENDEMIC,
                                   "integrator": {"horizon": 5.0}}),
        ("get", "/api/defaults", None),
        ("post", "/api/r0", {"delta": 0.9, "u2": 0.5}),
    )

    def _run(self, client, spec):
        method, path, payload = spec
        if method == "get":
            return client.get(path).text
        return client.post(path, json=payload).text

    def test_response_independent_of_request_order(self, client):
        forward = [self._run(client, s) for s in self.REQUESTS]
        backward = [self._run(client, s) for s in reversed(self.REQUESTS)]
        assert forward == list(reversed(backward))
