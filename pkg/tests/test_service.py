from fastapi.testclient import TestClient

from conftest import contractible_poke
from heegaard import formats
from heegaard.arrangement import canonical_torus_arrangement
from heegaard.service.app import app
from heegaard.service.models import ArrangementModel

client = TestClient(app)


def arr_payload(arr):
    return ArrangementModel.from_core(arr).model_dump(by_alias=True)


def diagram_payload(genus, theta, **kw):
    return {"genus": genus, "theta": theta, **kw}


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_validate_arrangement_ok():
    resp = client.post(
        "/arrangement/validate", json={"arrangement": arr_payload(contractible_poke())}
    )
    assert resp.status_code == 200
    assert resp.json() == {"ok": True, "violations": []}


def test_validate_arrangement_reports_violations():
    payload = arr_payload(contractible_poke())
    payload["genus"] = 2
    resp = client.post("/arrangement/validate", json={"arrangement": payload})
    body = resp.json()
    assert not body["ok"]
    assert body["violations"][0]["invariant"] == "euler"


def test_arrangement_model_roundtrip_matches_file_format():
    arr = canonical_torus_arrangement((2, 1), (1, 1))
    model = ArrangementModel.from_core(arr)
    assert model.model_dump(by_alias=True, mode="json") == formats.arrangement_to_dict(arr)
    assert model.to_core() == arr


def test_arrangement_invariants_endpoint():
    resp = client.post(
        "/arrangement/invariants", json={"arrangement": arr_payload(contractible_poke())}
    )
    body = resp.json()
    assert body["crossings"] == 3
    assert body["signed_sum"] == 1
    assert body["degree"] == 1
    assert body["euler_characteristic"] == 0


def test_arrangement_reduce_endpoint():
    resp = client.post(
        "/arrangement/reduce", json={"arrangement": arr_payload(contractible_poke())}
    )
    body = resp.json()
    assert body["initial_crossings"] == 3
    assert body["final_crossings"] == 1
    assert len(body["steps"]) == 1
    reduced = ArrangementModel.model_validate(body["arrangement"]).to_core()
    assert reduced.validate() == []
    assert reduced.free_loops["M"] == 1


def test_diagram_validate_endpoint():
    resp = client.post(
        "/diagram/validate", json={"diagram": diagram_payload(2, ["b1", "b2"])}
    )
    assert resp.json() == {"ok": True, "issues": []}
    resp = client.post(
        "/diagram/validate", json={"diagram": diagram_payload(2, ["a1 b1", "a1 B1"])}
    )
    assert not resp.json()["ok"]


def test_diagram_pi1_endpoint():
    resp = client.post(
        "/diagram/pi1", json={"diagram": diagram_payload(1, ["b1"]), "max_tietze": 64}
    )
    body = resp.json()
    assert body["generators"] == ["b1"]
    assert body["relators"] == ["b1"]
    assert body["trivial"] is True


def test_diagram_homology_lens():
    resp = client.post("/diagram/homology", json={"diagram": diagram_payload(1, ["b1 b1 b1 b1 b1"])})
    body = resp.json()
    assert body["matrix"] == [[-5]]
    assert body["convention"] == "theta_dot_alpha"
    assert body["invariant_factors"] == [5]
    assert body["group"] == "Z/5"


def test_diagram_cancel_endpoint_with_certificate():
    resp = client.post("/diagram/cancel", json={"diagram": diagram_payload(2, ["b2", "B1"])})
    body = resp.json()
    assert body["certificate"] == {"sigma": [2, 1], "eps": [-1, 1], "geometric": True}
    assert body["degrees"]["1,2"] == 1
    assert body["degrees"]["1,1"] == 0


def test_diagram_cancel_endpoint_without_certificate():
    resp = client.post("/diagram/cancel", json={"diagram": diagram_payload(1, ["b1 b1"])})
    body = resp.json()
    assert body["certificate"] is None


def test_diagram_cancel_warns_on_missing_embedding():
    resp = client.post(
        "/diagram/cancel",
        json={"diagram": diagram_payload(2, ["b1 a2 b2 A2 B2", "b2"])},
    )
    body = resp.json()
    assert body["certificate"] is not None
    assert body["certificate"]["geometric"] is False
    assert any("geometric check skipped" in w for w in body["warnings"])


def test_diagram_reduce_endpoint_trivial():
    resp = client.post("/diagram/reduce", json={"diagram": diagram_payload(3, ["b1", "b2", "b3"])})
    body = resp.json()
    assert body["verdict"] == "trivial-diagram"
    assert len(body["steps"]) == 3
    assert body["h1_group"] == "trivial"


def test_diagram_reduce_endpoint_stuck():
    resp = client.post("/diagram/reduce", json={"diagram": diagram_payload(1, ["b1 b1"])})
    body = resp.json()
    assert body["verdict"] == "stuck"
    assert body["h1_factors"] == [2]
    assert body["matrix"] == [[-2]]


def test_diagram_with_embedded_pairs():
    chart = canonical_torus_arrangement((0, 1), (1, 0))
    payload = diagram_payload(
        1, ["b1"], embedded=[{"i": 1, "j": 1, "arrangement": arr_payload(chart)}]
    )
    resp = client.post("/diagram/reduce", json={"diagram": payload})
    assert resp.json()["verdict"] == "trivial-diagram"


def test_domain_error_maps_to_422():
    resp = client.post("/diagram/homology", json={"diagram": diagram_payload(1, ["b9"])})
    assert resp.status_code == 422
    assert resp.json()["kind"] == "ValidationError"


def test_schema_error_maps_to_422():
    resp = client.post("/diagram/homology", json={"diagram": {"genus": -1, "theta": []}})
    assert resp.status_code == 422


def test_morse_endpoints():
    program = {
        "points": [
            {"id": "o1", "index": 0, "level": "1/2"},
            {"id": "p1", "index": 1, "level": "0"},
            {"id": "q1", "index": 2, "level": "7/2"},
            {"id": "r1", "index": 3, "level": "3"},
        ],
        "hints": [],
    }
    resp = client.post("/morse/chi", json={"program": program})
    assert resp.json() == {"chi": 0}

    resp = client.post("/morse/self-index", json={"program": program})
    body = resp.json()["program"]
    assert [p["level"] for p in body["points"]] == ["0", "1", "2", "3"]
    assert body["self_indexed"] is True

    resp = client.post(
        "/morse/to-heegaard", json={"program": program, "theta": ["b1 b1 b1"]}
    )
    body = resp.json()
    assert body["genus"] == 1
    assert body["reduction"]["verdict"] == "stuck"
    assert body["reduction"]["h1_group"] == "Z/3"


def test_morse_cancel_endpoint():
    program = {
        "points": [
            {"id": "o1", "index": 0, "level": "0"},
            {"id": "o2", "index": 0, "level": "0"},
            {"id": "p1", "index": 1, "level": "1"},
            {"id": "r1", "index": 3, "level": "3"},
        ],
        "hints": [["o2", "p1"]],
    }
    resp = client.post(
        "/morse/cancel", json={"program": program, "first": "p1", "second": "o2"}
    )
    ids = [p["id"] for p in resp.json()["program"]["points"]]
    assert ids == ["o1", "r1"]

    resp = client.post(
        "/morse/cancel", json={"program": program, "first": "o1", "second": "r1"}
    )
    assert resp.status_code == 422
