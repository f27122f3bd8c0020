import json

import pytest

from rigicount import gallery
from rigicount.cli import main
from rigicount.graphs import serialize_graph, triangulation_to_json


@pytest.fixture
def k4_file(tmp_path):
    p = tmp_path / "k4.edges"
    p.write_text(serialize_graph(gallery.complete(4)))
    return str(p)


@pytest.fixture
def c4_file(tmp_path):
    p = tmp_path / "c4.edges"
    p.write_text(serialize_graph(gallery.cycle(4)))
    return str(p)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


def test_rigid_k4(capsys, k4_file):
    code, doc = _run(capsys, ["rigid", "--d", "2", k4_file])
    assert code == 0
    assert doc["rigid"] is True
    assert doc["minimal"] is False


def test_rigid_flexible_exit_code(capsys, c4_file):
    code, doc = _run(capsys, ["rigid", "--d", "2", c4_file])
    assert code == 1
    assert doc["rigid"] is False


def test_rigid_double_banana(capsys, tmp_path):
    p = tmp_path / "db.edges"
    p.write_text(serialize_graph(gallery.double_banana()))
    code, doc = _run(capsys, ["rigid", "--d", "3", str(p)])
    assert code == 1
    assert doc["rank"] == 17


def test_rigid_bad_file(capsys, tmp_path):
    p = tmp_path / "bad.edges"
    p.write_text("2; 0 0")
    code, doc = _run(capsys, ["rigid", "--d", "2", str(p)])
    assert code == 2
    assert doc["error"] == "bad-input"


def test_count_k4_minus_edge(capsys, tmp_path):
    p = tmp_path / "g.edges"
    p.write_text(serialize_graph(gallery.complete(4).without_edge(0, 1)))
    code, doc = _run(capsys, ["count", "--d", "2", str(p)])
    assert code == 0
    assert doc["c"] == 2
    assert doc["reliable"] is True


def test_count_flexible_error(capsys, c4_file):
    code, doc = _run(capsys, ["count", "--d", "2", c4_file])
    assert code == 2
    assert doc["error"] == "not-rigid"


def test_count_real_samples(capsys, tmp_path):
    p = tmp_path / "g.edges"
    p.write_text(serialize_graph(gallery.flip_demo_graph()))
    code, doc = _run(capsys, ["count", "--d", "2", "--real-samples", "4", str(p)])
    assert code == 0
    assert doc["c"] == 4
    assert len(doc["samples"]) == 4
    assert doc["r_lower"] == max(doc["samples"])


def test_count_deterministic_output(capsys, tmp_path):
    p = tmp_path / "g.edges"
    p.write_text(serialize_graph(gallery.complete_multipartite([1, 1, 3])))
    code1 = main(["count", "--d", "2", "--seed", "42", str(p)])
    out1 = capsys.readouterr().out
    code2 = main(["count", "--d", "2", "--seed", "42", str(p)])
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2


def test_certify_sphere(capsys, tmp_path):
    p = tmp_path / "octa.json"
    p.write_text(json.dumps(triangulation_to_json(gallery.octahedron())))
    code, doc = _run(capsys, ["certify", "sphere", str(p), "--d", "3"])
    assert code == 0
    assert doc["verdict"] == "verified"
    assert doc["evidence"]["bound"] == 4
    assert doc["evidence"]["sequence_length"] == 2


def test_certify_sphere_icosahedron_no_count(capsys, tmp_path):
    p = tmp_path / "ico.json"
    p.write_text(json.dumps(triangulation_to_json(gallery.icosahedron())))
    code, doc = _run(capsys, ["certify", "sphere", str(p), "--d", "3"])
    assert code == 0
    assert doc["verdict"] == "verified"
    assert doc["evidence"]["bound"] == 2**8
    assert doc["evidence"]["sequence_length"] == 8
    assert "count" not in doc["evidence"]  # 30 equations exceed the counting cap


def test_certify_divides_and_verify(capsys, tmp_path):
    g_file = tmp_path / "g.edges"
    h_file = tmp_path / "h.edges"
    g_file.write_text(serialize_graph(gallery.complete(4)))
    h_file.write_text(serialize_graph(gallery.complete(4).without_edge(0, 1)))
    cert_file = tmp_path / "cert.json"
    code = main(["certify", "divides", "--g", str(g_file), "--h", str(h_file),
                 "--d", "2", "--out", str(cert_file)])
    assert code == 0
    doc = json.loads(cert_file.read_text())
    assert doc["verdict"] == "verified"

    code, recheck = _run(capsys, ["certify", "verify", str(cert_file)])
    assert code == 0
    assert recheck["matches_recorded_verdict"] is True


def test_certify_augment(capsys, tmp_path):
    p = tmp_path / "g.edges"
    p.write_text(serialize_graph(gallery.complete_multipartite([1, 1, 2])))
    code, doc = _run(capsys, ["certify", "augment", str(p), "--d", "2"])
    assert code == 0
    assert doc["verdict"] == "verified"
    assert len(doc["evidence"]["added_edges"]) == 1


def test_certify_operation_cli(capsys, tmp_path):
    p = tmp_path / "g.edges"
    p.write_text(serialize_graph(gallery.complete(4).without_edge(0, 1)))
    params = json.dumps({"neighbors": [0, 1]})
    code, doc = _run(capsys, ["certify", "operation", "--kind", "zero-extension",
                              "--graph", str(p), "--params", params, "--d", "2"])
    assert code == 0
    assert doc["verdict"] == "verified"


def test_threads_env_fallback(monkeypatch):
    from rigicount.config import threads_from_env

    monkeypatch.delenv("RIGIDITY_THREADS", raising=False)
    assert threads_from_env() == 1
    monkeypatch.setenv("RIGIDITY_THREADS", "3")
    assert threads_from_env() == 3
    monkeypatch.setenv("RIGIDITY_THREADS", "junk")
    assert threads_from_env(2) == 2
