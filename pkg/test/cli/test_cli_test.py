import json

import numpy as np
import pytest

from src.app.cli import main
from src.services import graph_core


@pytest.fixture
def dataset(write_csv):
    rng = np.random.default_rng(31)
    data = np.vstack([rng.standard_normal((12, 3)), rng.standard_normal((12, 3)) + 0.7])
    labels = [0] * 12 + [1] * 12
    return {
        "data": data,
        "data_path": write_csv("data.csv", data),
        "labels_path": write_csv("labels.csv", labels),
    }


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def _base(dataset, *extra):
    return [
        "test",
        "--data", dataset["data_path"],
        "--labels", dataset["labels_path"],
        "--k", "3",
        "--nperm", "99",
        "--seed", "2",
        "--threads", "1",
        *extra,
    ]


def test_default_statistics(capsys, dataset):
    code, payload = _run(capsys, _base(dataset))
    assert code == 0
    assert [r["statistic"] for r in payload["results"]] == ["S_R", "M_R"]
    for r in payload["results"]:
        assert 0.01 <= r["p_perm"] <= 1.0
        assert r["n1"] == 12 and r["n2"] == 12
        assert r["weight"] == "w1"
        assert r["graph"]["type"] == "kmst" and r["graph"]["k"] == 3
    assert payload["config"]["graph"] == "kmst"
    assert payload["config"]["nperm"] == 99
    assert payload["well_defined"]["well_defined"] is True
    assert payload["lower_bound_ratio"] >= 1.0
    assert set(payload["hubs"]) >= {"d_max", "p95_degree"}


def test_output_is_deterministic(capsys, dataset):
    _, first = _run(capsys, _base(dataset, "--stat", "sr,mr,s,m"))
    _, again = _run(capsys, _base(dataset, "--stat", "sr,mr,s,m"))
    _, threaded = _run(capsys, _base(dataset, "--stat", "sr,mr,s,m", "--threads", "3"))
    assert first == again
    assert first["results"] == threaded["results"]


def test_distance_matrix_input_matches_data_input(capsys, dataset, write_csv):
    D = graph_core.distance_matrix(dataset["data"])
    dist_path = write_csv("dist.csv", D)
    _, from_data = _run(capsys, _base(dataset))
    _, from_dist = _run(
        capsys,
        ["test", "--dist", dist_path, "--labels", dataset["labels_path"], "--k", "3", "--nperm", "99", "--seed", "2"],
    )
    assert [r["p_perm"] for r in from_data["results"]] == [r["p_perm"] for r in from_dist["results"]]


def test_out_file(capsys, dataset, tmp_path):
    target = tmp_path / "result.json"
    code = main(_base(dataset, "--out", str(target)))
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["results"]


def test_weighted_edge_list_uses_file_weights(capsys, tmp_path, write_csv):
    rng = np.random.default_rng(2)
    n = 14
    edges = {(int(rng.integers(0, i)), i) for i in range(1, n)}
    while len(edges) < 24:
        i, j = sorted(int(v) for v in rng.choice(n, size=2, replace=False))
        edges.add((i, j))
    edge_path = tmp_path / "g.txt"
    edge_path.write_text("".join(f"{i} {j} {0.5 + (i + j) / 10}\n" for i, j in sorted(edges)), encoding="utf-8")
    labels = write_csv("labels.csv", [0, 1] * 7)

    code, payload = _run(
        capsys,
        ["test", "--graph", "edgelist", "--edges", str(edge_path), "--labels", labels, "--nperm", "49", "--weight", "w3"],
    )
    assert code == 0
    assert all(r["weight"] == "file" for r in payload["results"])


def test_influence_rows(capsys, dataset):
    code, payload = _run(capsys, _base(dataset, "--influence", "2", "--stat", "sr"))
    assert code == 0
    assert len(payload["influence"]) == 2
    assert set(payload["influence"][0]["p_values"]) == {"S_R"}


def test_exhaustive_small_problem(capsys, tmp_path, write_csv):
    edge_path = tmp_path / "g.txt"
    edge_path.write_text("0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n1 5\n", encoding="utf-8")
    labels = write_csv("labels.csv", [0, 0, 0, 0, 1, 1, 1, 1])
    code, payload = _run(
        capsys,
        ["test", "--graph", "edgelist", "--edges", str(edge_path), "--labels", labels, "--exhaustive", "--stat", "sr"],
    )
    assert code == 0
    result = payload["results"][0]
    assert result["n_perm"] == 70
    assert result["seed"] is None


# ============================================================================
# Errors
# ============================================================================

def test_missing_labels_is_a_config_error(capsys, dataset):
    code, payload = _run(capsys, ["test", "--data", dataset["data_path"]])
    assert code == 2
    assert payload["success"] is False
    assert payload["exit_code"] == 2
    assert payload["error"]["type"] == "config_error"
    assert payload["error"]["details"]["validation_errors"]


def test_unknown_statistic(capsys, dataset):
    code, payload = _run(capsys, _base(dataset, "--stat", "sr,bogus"))
    assert code == 2
    assert payload["error"]["type"] == "config_error"


def test_label_count_mismatch(capsys, dataset, write_csv):
    short = write_csv("short.csv", [0, 1, 0, 1])
    code, payload = _run(capsys, ["test", "--data", dataset["data_path"], "--labels", short, "--k", "3"])
    assert code == 3
    assert payload["error"]["type"] == "invalid_input"


def test_malformed_csv_names_the_line(capsys, tmp_path, dataset):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,3\n4,5\n", encoding="utf-8")
    code, payload = _run(capsys, ["test", "--data", str(bad), "--labels", dataset["labels_path"]])
    assert code == 3
    assert payload["error"]["type"] == "file_format"
    assert payload["error"]["details"]["line"] == 2


def test_ill_conditioned_graph(capsys, tmp_path, write_csv):
    edge_path = tmp_path / "cycle.txt"
    edge_path.write_text("0 1\n1 2\n2 3\n0 3\n", encoding="utf-8")
    labels = write_csv("labels.csv", [0, 0, 1, 1])
    code, payload = _run(
        capsys,
        ["test", "--graph", "edgelist", "--edges", str(edge_path), "--labels", labels, "--weight", "none", "--nperm", "9"],
    )
    assert code == 4
    assert payload["error"]["type"] == "ill_conditioned_graph"
    assert payload["error"]["details"]["condition"] == "a"


def test_star_graph_fails_condition_b(capsys, tmp_path, write_csv):
    edge_path = tmp_path / "star.txt"
    edge_path.write_text("0 1\n0 2\n0 3\n", encoding="utf-8")
    labels = write_csv("labels.csv", [0, 0, 1, 1])
    code, payload = _run(
        capsys,
        ["test", "--graph", "edgelist", "--edges", str(edge_path), "--labels", labels, "--weight", "none", "--nperm", "9"],
    )
    assert code == 4
    assert payload["exit_code"] == 4
    assert payload["error"]["type"] == "ill_conditioned_graph"
    assert payload["error"]["details"]["condition"] == "b"
    assert "NaN" not in json.dumps(payload)


def test_infeasible_k(capsys, dataset):
    code, payload = _run(capsys, _base(dataset, "--k", "20"))
    assert code == 3
    assert payload["error"]["type"] == "infeasible_k"


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["test", "--graph", "grid"])
    assert err.value.code == 2


def test_error_details_can_be_hidden(capsys, monkeypatch, dataset):
    from src.app.config import get_settings

    monkeypatch.setenv("RGTEST_EXPOSE_ERROR_DETAILS", "false")
    get_settings.cache_clear()
    code, payload = _run(capsys, _base(dataset, "--k", "20"))
    assert code == 3
    assert payload["error"]["details"] is None
