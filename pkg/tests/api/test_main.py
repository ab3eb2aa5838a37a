import pytest
from fastapi.testclient import TestClient

from src.api.main import app

client = TestClient(app)

TRIANGLE = "0 1\n1 2\n2 0\n"


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_verify_best_of_three():
    response = client.post("/verify", json={"kind": "best-of-k", "k": 3})
    assert response.status_code == 200
    body = response.json()
    assert body["passed"] is True
    assert body["failed"] == []


def test_verify_pull_reports_failures():
    body = client.post("/verify", json={"kind": "pull"}).json()
    assert body["failed"] == [4, 5]


def test_profile_strict_rejects_majority():
    assert client.post("/profile", json={"kind": "majority"}).json()["available"] is False
    response = client.post("/profile", params={"strict": True}, json={"kind": "majority"})
    assert response.status_code == 400


def test_spectral_of_triangle():
    response = client.post("/spectral", json={"edges": TRIANGLE, "method": "dense"})
    assert response.status_code == 200
    assert response.json()["lambda"] == pytest.approx(0.5)


def test_moments_on_triangle():
    response = client.post(
        "/moments",
        json={"edges": TRIANGLE, "spec": {"kind": "best-of-k", "k": 2}, "opinion_zero": [0]},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["pi_a"] == pytest.approx(1 / 3)
    assert body["mean"] == pytest.approx(1 / 6)


@pytest.mark.parametrize(
    "payload",
    [
        {"edges": "0 1\n2 3\n", "spec": {"kind": "pull"}, "opinion_zero": [0]},
        {"edges": TRIANGLE, "spec": {"kind": "pull"}, "opinion_zero": [7]},
        {"edges": "0 x\n", "spec": {"kind": "pull"}, "opinion_zero": [0]},
    ],
    ids=["disconnected", "vertex-out-of-range", "malformed"],
)
def test_moments_bad_requests(payload):
    assert client.post("/moments", json=payload).status_code == 400


def test_bok_constants():
    body = client.get("/bok/1").json()
    assert body["f1_half_exact"] == "3/2"
    assert body["f2_ok"] is False
    assert client.get("/bok/0").status_code == 400


def test_invalid_spec_body():
    assert client.post("/verify", json={"kind": "plurality"}).status_code == 422


@pytest.mark.parametrize("endpoint", ["/verify", "/profile"])
def test_custom_expression_cannot_reach_numpy(tmp_path, endpoint):
    target = tmp_path / "written.npy"
    expression = f"(np.save('{target}', x) or x)"
    response = client.post(endpoint, json={"kind": "custom", "expression": expression})
    assert response.status_code == 400
    assert not target.exists()


@pytest.mark.parametrize("expression", [
    "__import__('os').getcwd()", "len(x)", "x.T", "sqrt(x - 1)", "x / (x - x)",
])
def test_disallowed_expressions_are_bad_requests(expression):
    response = client.post("/verify", json={"kind": "custom", "expression": expression})
    assert response.status_code == 400


def test_moments_with_disallowed_expression():
    payload = {"edges": TRIANGLE, "opinion_zero": [0],
               "spec": {"kind": "custom", "expression": "open('/etc/hosts') and x"}}
    assert client.post("/moments", json=payload).status_code == 400


def test_verify_custom_expression():
    response = client.post("/verify", json={"kind": "custom", "expression": "3*x**2 - 2*x**3"})
    assert response.status_code == 200
    assert response.json()["passed"] is True
