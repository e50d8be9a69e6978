import pytest
from fastapi.testclient import TestClient

from relsearch.app import create_app
from relsearch.index import save_index


@pytest.fixture(scope="module")
def client(engine, tmp_path_factory):
    # persist once so the fingerprint reported by /api/health is the file digest
    save_index(engine.index, tmp_path_factory.mktemp("api") / "index.json")
    return TestClient(create_app(engine))


def test_health(client, engine):
    response = client.get("/api/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"
    assert body["index_fingerprint"] == engine.fingerprint
    assert body["classes"] == len(engine.index.classes)
    assert body["relation_keys"] == len(engine.index.postings)


def test_search_endpoint_matches_engine(client, engine):
    response = client.get("/api/search", params={"q": "Favipiravir"})
    assert response.status_code == 200
    assert response.json() == engine.search("Favipiravir").model_dump()


def test_search_with_options(client):
    response = client.get("/api/search",
                          params={"q": "Favipiravir", "k": 2, "offset": 1,
                                  "min_similarity": 0.5})
    assert response.status_code == 200
    body = response.json()
    assert len(body["similar"]) == 2
    assert body["related"][0]["co_mention_count"] == 5
    assert len(body["related"][0]["evidence"]) == 4  # five postings, offset 1


def test_search_no_match_is_well_formed(client):
    body = client.get("/api/search", params={"q": "qqqqqq"}).json()
    assert body == {"query": "qqqqqq", "matched": None, "related": [], "similar": []}


def test_bad_parameters_return_400(client):
    for params in ({}, {"q": ""}, {"q": "x", "k": 0}, {"q": "x", "k": "lots"},
                   {"q": "x", "min_similarity": 2}, {"q": "x", "offset": -1}):
        response = client.get("/api/search", params=params)
        assert response.status_code == 400
        body = response.json()
        assert body["error"] == "bad_parameters" and body["detail"]


def test_entity_card_endpoint(client, engine):
    cid = engine.search("Favipiravir").matched.class_id
    body = client.get(f"/api/entity/{cid}").json()
    assert body["canonical"] == "Favipiravir"
    assert body["degree"] == 2
    assert body["surfaces"]["T-705"] == 2


def test_entity_endpoint_errors(client):
    response = client.get("/api/entity/99999")
    assert response.status_code == 404
    assert response.json() == {"error": "unknown_class",
                               "detail": "no entity class with id 99999"}
    assert client.get("/api/entity/not-a-number").status_code == 400


def test_identical_queries_are_byte_equal(client):
    first = client.get("/api/search", params={"q": "Zinc"})
    second = client.get("/api/search", params={"q": "Zinc"})
    assert first.content == second.content


def test_root_without_static_ui(client):
    body = client.get("/").json()
    assert body["service"] == "relsearch"


def test_static_ui_mount(engine, tmp_path):
    (tmp_path / "index.html").write_text("<!doctype html><title>ui</title>")
    ui_client = TestClient(create_app(engine, static_dir=tmp_path))
    response = ui_client.get("/")
    assert response.status_code == 200
    assert "ui" in response.text
    assert ui_client.get("/api/health").status_code == 200
