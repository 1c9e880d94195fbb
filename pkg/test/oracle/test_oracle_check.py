import dataclasses

import numpy as np
import pytest

from src.models.graph import SimilarityGraph, WeightedGraph
from src.services.edge_stats import weight_sums
from src.services.oracle import (
    ORACLE_WEIGHTS,
    QUANTITIES,
    compare_case,
    enumerated_moments,
    oracle_check,
    random_knn,
    random_tree,
)
from src.utils.rng import stream

pytestmark = pytest.mark.oracle


def test_small_oracle_run_passes():
    report = oracle_check(6, seed=1)
    assert report.passed
    assert report.failures == []
    # path fixture plus every quantity for each weighting of each graph
    assert report.comparisons == 7 + 6 * len(ORACLE_WEIGHTS) * len(QUANTITIES)


def test_oracle_run_is_reproducible():
    a = oracle_check(3, seed=9).to_dict()
    b = oracle_check(3, seed=9).to_dict()
    assert a == b
    assert a["graphs"] == 3 and a["seed"] == 9


def test_broken_pair_sum_is_detected():
    def doubled_s2(Gw):
        sums = weight_sums(Gw)
        return dataclasses.replace(sums, s2=2 * sums.s2)

    report = oracle_check(4, seed=1, sums_fn=doubled_s2)
    assert not report.passed
    assert "sigma11" in {f.quantity for f in report.failures}
    failure = report.failures[0].to_dict()
    assert set(failure) == {"case", "weight", "n1", "quantity", "formula", "exact", "graph"}
    assert failure["formula"] != pytest.approx(failure["exact"])


def test_enumerated_moments_of_path():
    path = WeightedGraph(SimilarityGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)]), np.ones(3))
    exact = enumerated_moments(path, 2)
    assert exact["sigma11"] == pytest.approx(0.25)
    assert exact["var_diff"] == pytest.approx(1 / 3)
    assert exact["var_w"] == pytest.approx(1 / 6)
    assert compare_case(path, 2, weight_sums) == []


def test_random_graph_families():
    tree = random_tree(9, stream(1, 0))
    assert tree.n_edges == 8 and tree.kind == "tree"
    knn = random_knn(9, stream(1, 1))
    assert knn.kind == "knn" and knn.degrees.min() >= 2


@pytest.mark.slow
def test_default_oracle_run_passes():
    report = oracle_check()
    assert report.graphs == 50
    assert report.passed
    assert report.comparisons == 7 + 50 * len(ORACLE_WEIGHTS) * len(QUANTITIES)
