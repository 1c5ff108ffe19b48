import pytest
from fastapi.testclient import TestClient

from main import app

client = TestClient(app)

SLACK_APPARATUS = {
    "pi_pulse_duration": 2e-4,
    "beam_diameter": 0.01,
    "curvature": 1e5,
    "cloud": {"longitudinal_temperature": 1e-12},
}


def test_root_and_health():
    assert client.get("/").json()["docs"] == "/api/v1/docs"
    response = client.get("/api/v1/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_builtin_species():
    body = client.get("/api/v1/species/builtin").json()
    assert body["name"] == "Rb87"
    assert body["bragg_bandwidth"] == pytest.approx(4 * body["recoil_frequency"], rel=1e-12)


def test_requirements_report():
    response = client.post("/api/v1/requirements", json={"preset": "typical"})
    assert response.status_code == 200
    body = response.json()
    assert body["report"]["passed"] is False
    names = [e["name"] for e in body["report"]["entries"]]
    assert names[0] == "longitudinal_temperature" and "fall_time" in names
    assert body["text"].rstrip().endswith("overall: FAIL")


def test_requirements_pass():
    response = client.post("/api/v1/requirements", json={"apparatus": SLACK_APPARATUS})
    assert response.status_code == 200
    assert response.json()["report"]["passed"] is True


def test_parameter_table():
    body = client.get("/api/v1/table1", params={"detuning_ghz": 1.0}).json()
    assert [row["order"] for row in body["rows"]] == [1, 5, 10, 15, 20, 25]
    assert body["rows"][0]["intensity"] == pytest.approx(180.1, rel=2e-3)


def test_parameter_table_rejects_zero_detuning():
    assert client.get("/api/v1/table1", params={"detuning_ghz": 0}).status_code == 422


def test_chirp_simulation():
    response = client.post("/api/v1/simulate/chirp", json={"scan": {"samples": 4001}})
    assert response.status_code == 200
    body = response.json()
    assert len(body["scans"]) == 3
    assert body["resonance"]["gravity"] == pytest.approx(9.8, rel=1e-8)


def test_phase_simulation():
    response = client.post("/api/v1/simulate/phase", json={"scan": {"kind": "phase", "contrast": 0.6}})
    assert response.status_code == 200
    body = response.json()
    assert body["fit"]["contrast"] == pytest.approx(0.6, abs=1e-9)
    assert body["gravity"] == pytest.approx(9.8, rel=1e-12)


def test_sequence():
    response = client.post("/api/v1/sequence", json={"preset": "debs"})
    assert response.status_code == 200
    body = response.json()
    assert body["valid"] is True
    assert body["violations"] == []
    assert len(body["schedule"]["events"]) == 6


def test_sequence_build_error_is_422():
    response = client.post("/api/v1/sequence", json={"apparatus": {"order": 2, "first_pulse_time": 0.001}})
    assert response.status_code == 422
    assert "fall time" in response.json()["detail"]


def test_unknown_preset_is_422():
    response = client.post("/api/v1/requirements", json={"preset": "nope"})
    assert response.status_code == 422


def test_missing_species_file_is_404():
    response = client.post("/api/v1/requirements", json={"species": "missing/species.yaml"})
    assert response.status_code == 404


def test_unknown_field_rejected():
    assert client.post("/api/v1/requirements", json={"colour": "blue"}).status_code == 422
