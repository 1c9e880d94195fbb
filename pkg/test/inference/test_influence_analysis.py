import numpy as np
import pytest

from src.models.labels import LabelVector
from src.services import graph_core
from src.services.inference import influence_analysis


@pytest.fixture
def samples():
    rng = np.random.default_rng(21)
    data = np.vstack([rng.standard_normal((14, 4)), rng.standard_normal((14, 4)) + 0.8])
    labels = LabelVector.from_values(np.r_[np.zeros(14), np.ones(14)].astype(int))
    return graph_core.distance_matrix(data), labels


def test_hubs_are_ranked_and_split_by_sample(samples):
    D, labels = samples
    G = graph_core.kmst(D, 3)
    rows = influence_analysis(G, labels, "w1", ["sr", "mr"], 3, 99, seed=1, distances=D, threads=1)

    assert len(rows) == 3
    degrees = [r.degree for r in rows]
    assert degrees == sorted(degrees, reverse=True)
    assert degrees[0] == int(G.degrees.max())
    for row in rows:
        assert row.same_sample_edges + row.other_sample_edges == row.degree
        assert row.error_message is None
        assert set(row.p_values) == {"S_R", "M_R"}
        assert all(0.0 < p <= 1.0 for p in row.p_values.values())


def test_rebuild_needs_distances(samples):
    D, labels = samples
    G = graph_core.kmst(D, 2)
    rows = influence_analysis(G, labels, "w1", ["sr"], 1, 50, seed=1, threads=1)
    assert rows[0].p_values == {}
    assert "distance matrix" in rows[0].error_message


def test_edge_list_keeps_file_weights(random_graph_factory):
    G = random_graph_factory(n=16, extra=12, seed=2)
    labels = LabelVector.from_values([0, 1] * 8)
    weights = np.linspace(0.5, 2.0, G.n_edges)

    rows = influence_analysis(G, labels, "w1", ["sr"], 2, 50, seed=3, edge_weights=weights, threads=1)
    assert len(rows) == 2
    assert all(r.error_message is None for r in rows)


def test_removal_that_empties_a_sample_is_reported(random_graph_factory):
    G = random_graph_factory(n=12, extra=10, seed=5)
    hub = graph_core.top_hubs(G, 1)[0]
    other = (hub + 1) % 12
    labels = LabelVector.from_sample_x(12, [hub, other])

    rows = influence_analysis(G, labels, "w3", ["sr"], 1, 20, seed=1, threads=1)
    assert rows[0].node == hub
    assert "n1 < 2" in rows[0].error_message
    assert rows[0].to_dict()["error"] == rows[0].error_message
