import itertools

import numpy as np
import pytest

from src.errors import InvalidInputError
from src.models.graph import SimilarityGraph
from src.models.labels import LabelVector
from src.services import graph_core


def test_hub_report_star(star):
    report = graph_core.hub_report(star)
    assert report.degrees == (3, 1, 1, 1)
    assert report.d_max == 3
    assert report.sum_sq_degrees == 12
    assert report.C == 3
    assert report.p95_degree == 3


def test_hub_report_path(path4):
    report = graph_core.hub_report(path4)
    assert report.sum_sq_degrees == 10
    assert report.C == 2


def test_hub_report_single_edge(single_edge):
    assert graph_core.hub_report(single_edge).C == 0


def test_p95_is_nearest_rank():
    # 19 leaves of degree 1 and one hub of degree 19: rank ceil(0.95 * 20) = 19 is a leaf
    star19 = SimilarityGraph.from_edges(20, [(0, i) for i in range(1, 20)])
    assert graph_core.hub_report(star19).p95_degree == 1


@pytest.mark.parametrize("seed", range(5))
def test_C_matches_brute_force(random_graph_factory, seed):
    G = random_graph_factory(n=15 + seed, extra=10, seed=seed)
    edges = [tuple(e) for e in G.edges.tolist()]
    brute = sum(1 for a, b in itertools.combinations(edges, 2) if set(a) & set(b))
    assert graph_core.hub_report(G).C == brute


def test_edge_neighborhoods_path(path4):
    nb = graph_core.edge_neighborhoods(path4)
    assert nb.a_of(0) == {0, 1}
    assert nb.b_of(0) == {0, 1, 2}
    assert nb.a_sizes[1] == 3


def test_edge_neighborhoods_isolated_edge():
    G = SimilarityGraph.from_edges(4, [(0, 1), (2, 3)])
    nb = graph_core.edge_neighborhoods(G)
    assert nb.a_of(0) == {0}
    assert nb.b_of(0) == {0}


@pytest.mark.parametrize("seed", range(4))
def test_edge_neighborhood_invariants(random_graph_factory, seed):
    G = random_graph_factory(n=20, extra=15, seed=seed)
    nb = graph_core.edge_neighborhoods(G)
    deg = G.degrees

    for e, (i, j) in enumerate(G.edges):
        a, b = nb.a_of(e), nb.b_of(e)
        assert e in a
        assert a <= b
        assert len(a) == deg[i] + deg[j] - 1
    assert int(nb.a_sizes.sum()) == int(np.sum(deg ** 2))


def test_degree_distribution(star):
    assert graph_core.degree_distribution(star) == [(1, 3), (3, 1)]


def test_node_edge_split(star):
    labels = LabelVector.from_sample_x(4, [0, 1])
    assert graph_core.node_edge_split(star, labels, 0) == (3, 1, 2)
    assert graph_core.node_edge_split(star, labels, 2) == (1, 0, 1)


def test_top_hubs_prefers_smaller_index_on_ties(path4):
    assert graph_core.top_hubs(path4, 2) == [1, 2]


def test_remove_node_reindexes(path4):
    reduced, keep = graph_core.remove_node(path4, 1)
    assert reduced.node_count == 3
    assert reduced.edge_set() == {(1, 2)}
    assert keep.tolist() == [False, False, True]


def test_remove_node_out_of_range(path4):
    with pytest.raises(InvalidInputError):
        graph_core.remove_node(path4, 4)


def test_similarity_graph_validation():
    with pytest.raises(InvalidInputError):
        SimilarityGraph.from_edges(3, [(0, 0)])
    with pytest.raises(InvalidInputError):
        SimilarityGraph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(InvalidInputError):
        SimilarityGraph.from_edges(3, [(0, 3)])
