import math

import pytest


def test_root_is_alive(client):
    response = client.get("/")
    assert response.status_code == 200
    assert response.json() == {"status": "alive"}


def test_driver_samples(client):
    response = client.get("/api/v1/drivers/linear/samples", params={"slope": 2.0, "n": 4})
    assert response.status_code == 200
    body = response.json()
    assert body["t"] == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert body["value"] == pytest.approx([0.0, 0.5, 1.0, 1.5, 2.0])


def test_driver_samples_invalid_description(client):
    assert client.get("/api/v1/drivers/wang/samples").status_code == 422
    response = client.get("/api/v1/drivers/spiral/samples")
    assert response.status_code == 422
    assert "family" in response.json()["detail"][0]["loc"]


def test_wang_and_emw_params(client):
    body = client.get("/api/v1/drivers/wang/params", params={"theta": math.pi / 2.0}).json()
    assert body["tau"] == pytest.approx(0.25)
    assert body["terminal_xi"] == pytest.approx(0.0, abs=1e-15)
    assert body["weld_x"] == pytest.approx(-1.0)
    assert body["weld_y"] == pytest.approx(1.0)

    body = client.get("/api/v1/drivers/emw/params", params={"x0": -1.0, "y0": 2.0}).json()
    assert body["r"] == 0.5
    assert body["tau"] == pytest.approx(13.0 / 24.0)
    assert body["terminal_lambda"] == pytest.approx(-2.0 / 3.0)


@pytest.mark.parametrize("url, params", [
    ("/api/v1/drivers/wang/params", {"theta": 4.0}),
    ("/api/v1/drivers/emw/params", {"x0": 1.0, "y0": 2.0}),
])
def test_params_preconditions(client, url, params):
    assert client.get(url, params=params).status_code == 422


def test_trace_of_zero_driver(client):
    response = client.post("/api/v1/flow/trace", json={"driver": {"family": "zero"}, "n": 100, "samples": 10})
    assert response.status_code == 200
    body = response.json()
    assert body["t"][-1] == pytest.approx(1.0)
    assert body["im"][-1] == pytest.approx(2.0, abs=1e-9)
    assert max(abs(x) for x in body["re"]) < 1e-12
    assert body["capacity"] == pytest.approx(2.0)
    assert body["simple"] is True


def test_hitting_time(client):
    body = client.post("/api/v1/flow/hitting-time", json={"driver": {"family": "zero"}, "x0": 1.0}).json()
    assert body["hitting_time"] == pytest.approx(0.25, abs=1e-8)
    body = client.post("/api/v1/flow/hitting-time", json={"driver": {"family": "zero"}, "x0": 3.0}).json()
    assert body["hitting_time"] is None


def test_energy_quadrature(client):
    response = client.post("/api/v1/energy/quadrature", json={"driver": {"family": "linear", "slope": 1.0}})
    assert response.status_code == 200
    body = response.json()
    assert body["value"] == pytest.approx(0.5)
    assert body["method"] == "quadrature"
    response = client.post("/api/v1/energy/quadrature",
                           json={"driver": {"family": "linear"}, "method": "partition", "n": 16})
    assert response.json()["value"] == pytest.approx(0.5)


def test_closed_form_energy(client):
    body = client.get("/api/v1/energy/closed-form", params={"family": "wang", "parameter": math.pi / 6.0}).json()
    assert body["value"] == pytest.approx(8.0 * math.log(2.0))
    body = client.get("/api/v1/energy/closed-form", params={"family": "emw", "parameter": 1.0}).json()
    assert body["value"] == pytest.approx(0.0, abs=1e-15)
    assert client.get("/api/v1/energy/closed-form", params={"family": "sle", "parameter": 1.0}).status_code == 422


def test_emw_weld_table(client):
    response = client.get("/api/v1/welding/emw", params={"x0": -1.0, "y0": 2.0, "n": 5})
    assert response.status_code == 200
    points = response.json()
    assert len(points) == 5
    assert all(p["residual"] < 1e-8 for p in points)
    assert client.get("/api/v1/welding/emw", params={"x0": 1.0, "y0": 2.0}).status_code == 422


def test_numeric_weld(client):
    response = client.post("/api/v1/welding/numeric", json={"driver": {"family": "zero"}, "n_pairs": 3})
    assert response.status_code == 200
    body = response.json()
    assert body["x_end"] == pytest.approx(-2.0, abs=1e-7)
    assert len(body["pairs"]) == 3


def test_sle_integrate(client):
    response = client.post("/api/v1/sle/integrate", json={
        "config": {"direction": "up", "rho": [0.0], "start_force_points": [1.0]},
        "horizon": 1.0, "n": 20,
    })
    assert response.status_code == 200
    body = response.json()
    assert body["stop_reason"] == "collision"
    assert body["stop_time"] == pytest.approx(0.25, abs=1e-8)
    response = client.post("/api/v1/sle/integrate", json={
        "config": {"direction": "up", "rho": [-2.0], "start_driver": 1.0, "start_force_points": [1.0]},
        "horizon": 1.0,
    })
    assert response.status_code == 422


def test_local_ratio(client):
    response = client.post("/api/v1/compare/local", json={"slope": 1.0, "deltas": [1e-3, 1e-4]})
    assert response.status_code == 200
    assert response.json()["ratios"][-1] == pytest.approx(9.0 / 8.0, rel=1e-2)


def test_verify_group(client):
    response = client.post("/api/v1/verify", json={"only": ["energy"]})
    assert response.status_code == 200
    body = response.json()
    assert body["schema"] == 1
    assert body["passed"] is True
    assert {r["group"] for r in body["results"]} == {"energy"}
    assert all(r["pass"] for r in body["results"])
    assert client.post("/api/v1/verify", json={"only": ["magic"]}).status_code == 422
