import pytest
from fastapi.testclient import TestClient

from conftest import layered
from main import app, get_store
from taskmodel.documents import taskset_to_document


@pytest.fixture
def client(store):
    app.dependency_overrides[get_store] = lambda: store
    yield TestClient(app)
    app.dependency_overrides.clear()


def test_root_and_health(client):
    assert client.get("/").json()["status"] == "online"
    health = client.get("/health").json()
    assert health["status"] == "healthy"
    assert health["tasksets"] == 0


def test_generate_check_and_simulate(client):
    response = client.post("/tasksets/generate", json={"m": 8, "n": 10, "util": 0.3, "seed": 4})
    assert response.status_code == 200
    taskset_id = response.json()["taskset_id"]
    assert response.json()["task_count"] == 10

    stored = client.get(f"/tasksets/{taskset_id}").json()
    assert stored["document"]["m"] == 8
    assert stored["plans"] == []

    checked = client.post(f"/tasksets/{taskset_id}/check", json={"algorithm": "sfs", "mode": "fast"}).json()
    assert checked["schedulable"]
    assert checked["outcome"] == "Success"

    plan = client.get(f"/plans/{checked['plan_id']}").json()
    assert plan["algorithm"] == "sfs"
    assert plan["outcome"]["success"]

    result = client.post(f"/plans/{checked['plan_id']}/simulate", json={}).json()
    assert result["clean"]
    assert result["violations"] == []
    assert len(client.get(f"/tasksets/{taskset_id}").json()["plans"]) == 1


def test_upload_taskset(client):
    document = taskset_to_document(2, [layered(1, [[10, 10, 10, 10]], period=20)])
    response = client.post("/tasksets", json=document.dict())
    assert response.status_code == 200
    taskset_id = response.json()["taskset_id"]

    checked = client.post(f"/tasksets/{taskset_id}/check", json={"algorithm": "fs"}).json()
    assert not checked["schedulable"]
    assert checked["outcome"] == "Failure(task 1, InsufficientProcessors)"
    simulated = client.post(f"/plans/{checked['plan_id']}/simulate", json={})
    assert simulated.status_code == 400


def test_bad_requests(client):
    assert client.post("/tasksets/generate", json={"m": 8, "n": 10, "util": 1.5}).status_code == 400
    assert client.get("/tasksets/taskset_missing").status_code == 404
    assert client.get("/plans/nothing").status_code == 404
    assert client.post("/tasksets/taskset_missing/check", json={}).status_code == 404

    taskset_id = client.post("/tasksets/generate", json={"m": 8, "n": 10, "util": 0.3}).json()["taskset_id"]
    response = client.post(f"/tasksets/{taskset_id}/check", json={"algorithm": "edf"})
    assert response.status_code == 400


def test_invalid_uploaded_task_is_rejected(client):
    document = taskset_to_document(2, [layered(1, [[10]], period=20, deadline=30)])
    response = client.post("/tasksets", json=document.dict())
    assert response.status_code == 200
    taskset_id = response.json()["taskset_id"]
    assert client.post(f"/tasksets/{taskset_id}/check", json={}).status_code == 400
