import logging
import math

import pytest

from src.models.graph import SimilarityGraph
from src.services.inference import condition_report
from src.services.weighting import assign_weights


def test_path_ratios(path4):
    report = condition_report(assign_weights(path4, "none"), 2)
    assert report.lambda_ratio == 0.5
    assert report.n_edges == 3
    assert report.edges_per_node == pytest.approx(0.75)
    assert not report.dense
    # sum of squared node sums is 10, 4 S3 / N is 9
    assert report.ratio_ii == pytest.approx(0.1)
    # one-hop neighborhoods have sizes 2, 3, 2
    assert report.ratio_iii == pytest.approx(17 / 6)
    # every two-hop neighborhood is the whole path
    assert report.ratio_iv == pytest.approx(21 / 3 ** 1.5)


def test_ratios_are_weight_scale_free(random_graph_factory):
    Gw = assign_weights(random_graph_factory(n=30, extra=20, seed=4), "w1")
    base = condition_report(Gw, 12)
    scaled = condition_report(Gw.scaled(4.0), 12)
    assert scaled.ratio_ii == pytest.approx(base.ratio_ii)
    assert scaled.ratio_iii == pytest.approx(base.ratio_iii)
    assert scaled.ratio_iv == pytest.approx(base.ratio_iv)


def test_dense_graph_warns(caplog):
    n = 6
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    G = SimilarityGraph.from_edges(n, edges)

    with caplog.at_level(logging.WARNING, logger="src.services.inference"):
        report = condition_report(assign_weights(G, "none"), 3)

    assert report.dense
    assert report.edges_envelope == pytest.approx(15 / n ** 1.25)
    assert any("asymptotic p-values may be unreliable" in r.getMessage() for r in caplog.records)


def test_to_dict_keys(path4):
    data = condition_report(assign_weights(path4, "none"), 2).to_dict()
    assert set(data) == {
        "n1_over_N",
        "n_edges",
        "edges_per_node",
        "edges_over_N_1_25",
        "dense",
        "ratio_ii",
        "ratio_iii",
        "ratio_iv",
    }
    assert math.isfinite(data["ratio_iv"])
