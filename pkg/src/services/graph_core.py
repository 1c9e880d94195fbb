"""
Similarity-graph construction and structural diagnostics.

Distances are dense (N x N); k-MSTs come from repeated Kruskal passes over the
pair list sorted by (distance, i, j), so tied distances always resolve the same
way. k-NN graphs are the undirected union of the directed neighbor relations,
ties going to the smaller index.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Optional

import numpy as np
from scipy.cluster.hierarchy import DisjointSet
from scipy.spatial.distance import pdist, squareform

from ..errors import InfeasibleKError, InvalidInputError, InvalidKError
from ..models.graph import EdgeNeighborhoods, HubReport, SimilarityGraph
from ..models.labels import LabelVector

logger = logging.getLogger(__name__)

# Relative tolerance for accepting an externally supplied distance matrix as symmetric.
SYMMETRY_RTOL = 1e-12


class Metric(str, Enum):
    L1 = "l1"
    L2 = "l2"


class GraphKind(str, Enum):
    KMST = "kmst"
    KNN = "knn"
    EDGELIST = "edgelist"


_SCIPY_METRIC = {Metric.L1: "cityblock", Metric.L2: "euclidean"}


# ============================================================================
# Distances
# ============================================================================

def validate_data(data: np.ndarray) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InvalidInputError("Data must be a 2-D matrix (observations x features).")
    if arr.shape[0] < 2:
        raise InvalidInputError("Data needs at least two observations.")
    if arr.shape[1] < 1:
        raise InvalidInputError("Data needs at least one feature.")
    if not np.all(np.isfinite(arr)):
        rows = np.unique(np.nonzero(~np.isfinite(arr))[0])
        raise InvalidInputError(
            f"Data contains non-finite entries (first offending row index {int(rows[0])}).",
            details={"rows": rows[:20].tolist()},
        )
    return arr


def distance_matrix(data: np.ndarray, metric: Metric | str = Metric.L2) -> np.ndarray:
    """Pairwise L1 or L2 distances; symmetric with a zero diagonal."""
    arr = validate_data(data)
    metric = Metric(metric)
    return squareform(pdist(arr, metric=_SCIPY_METRIC[metric]))


def validate_distance_matrix(D: np.ndarray) -> np.ndarray:
    arr = np.asarray(D, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError("Distance matrix must be square.")
    if arr.shape[0] < 2:
        raise InvalidInputError("Distance matrix needs at least two observations.")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("Distance matrix contains non-finite entries.")
    if np.any(arr < 0):
        raise InvalidInputError("Distances must be nonnegative.")
    if np.any(np.diag(arr) != 0):
        raise InvalidInputError("Distance matrix must have a zero diagonal.")
    scale = max(float(arr.max()), 1.0)
    if not np.allclose(arr, arr.T, rtol=0.0, atol=SYMMETRY_RTOL * scale):
        raise InvalidInputError("Distance matrix must be symmetric.")
    return (arr + arr.T) / 2.0


def drop_observation(matrix: np.ndarray, node: int, *, square: bool = False) -> np.ndarray:
    """Remove one observation from a data matrix (row) or a distance matrix (row and column)."""
    out = np.delete(np.asarray(matrix), node, axis=0)
    if square:
        out = np.delete(out, node, axis=1)
    return out


# ============================================================================
# Graph construction
# ============================================================================

def _sorted_pairs(D: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = D.shape[0]
    ii, jj = np.triu_indices(n, k=1)
    order = np.lexsort((jj, ii, D[ii, jj]))
    return ii[order], jj[order]


def kmst(D: np.ndarray, k: int) -> SimilarityGraph:
    """
    Union of k edge-disjoint spanning trees; tree t+1 is a minimum spanning
    tree of the complete graph minus the edges of trees 1..t.

    Once the remaining edges no longer connect every node (a hub whose edges
    were all used by earlier trees), the tree is completed as a minimum
    spanning forest and the graph has fewer than k(N-1) edges.
    """
    D = np.asarray(D, dtype=float)
    n = D.shape[0]
    if k < 1:
        raise InvalidKError("k must be a positive integer.")
    if k * (n - 1) > n * (n - 1) // 2:
        raise InfeasibleKError(
            f"A {k}-MST needs {k * (n - 1)} edges but the complete graph on {n} nodes has {n * (n - 1) // 2}.",
            details={"k": k, "N": n},
        )

    ii, jj = _sorted_pairs(D)
    used = np.zeros(ii.size, dtype=bool)
    edges: list[tuple[int, int]] = []

    for t in range(k):
        forest = DisjointSet(range(n))
        taken = 0
        for idx in np.flatnonzero(~used):
            a, b = int(ii[idx]), int(jj[idx])
            if forest.merge(a, b):
                used[idx] = True
                edges.append((a, b))
                taken += 1
                if taken == n - 1:
                    break
        if taken < n - 1:
            logger.warning(
                "Tree %d of %d-MST is a spanning forest: %d of %d edges (%d components)",
                t + 1, k, taken, n - 1, n - taken,
            )

    logger.debug("Built %d-MST on %d nodes (%d edges)", k, n, len(edges))
    return SimilarityGraph.from_edges(n, edges, kind=GraphKind.KMST.value, k=k)


def knn_graph(D: np.ndarray, k: int) -> SimilarityGraph:
    """Undirected union of each node's k nearest neighbors (ties to the smaller index)."""
    D = np.array(D, dtype=float, copy=True)
    n = D.shape[0]
    if k < 1 or k >= n:
        raise InvalidKError(f"k must lie in [1, {n - 1}] for {n} observations.", details={"k": k, "N": n})

    np.fill_diagonal(D, np.inf)
    neighbors = np.argsort(D, axis=1, kind="stable")[:, :k]
    src = np.repeat(np.arange(n), k)
    dst = neighbors.ravel()
    lo, hi = np.minimum(src, dst), np.maximum(src, dst)
    keys = np.unique(lo * n + hi)
    edges = np.column_stack((keys // n, keys % n))

    logger.debug("Built %d-NN graph on %d nodes (%d edges)", k, n, len(edges))
    return SimilarityGraph.from_edges(n, edges, kind=GraphKind.KNN.value, k=k)


def build_graph(D: np.ndarray, kind: GraphKind | str, k: int) -> SimilarityGraph:
    kind = GraphKind(kind)
    if kind is GraphKind.KMST:
        return kmst(D, k)
    if kind is GraphKind.KNN:
        return knn_graph(D, k)
    raise InvalidInputError("Edge-list graphs are read from a file, not built from distances.")


# ============================================================================
# Diagnostics
# ============================================================================

def hub_report(G: SimilarityGraph) -> HubReport:
    deg = G.degrees
    sum_sq = int(np.sum(deg.astype(np.int64) ** 2))
    # nearest-rank percentile
    p95 = int(np.percentile(deg, 95, method="inverted_cdf"))
    return HubReport(
        degrees=tuple(int(d) for d in deg),
        d_max=int(deg.max()),
        p95_degree=p95,
        sum_sq_degrees=sum_sq,
        n_edges=G.n_edges,
        C=sum_sq // 2 - G.n_edges,
    )


def degree_distribution(G: SimilarityGraph) -> list[tuple[int, int]]:
    values, counts = np.unique(G.degrees, return_counts=True)
    return [(int(v), int(c)) for v, c in zip(values, counts)]


def edge_neighborhoods(G: SimilarityGraph) -> EdgeNeighborhoods:
    """
    A_e: e plus every edge sharing a node with e.
    B_e: A_e plus every edge sharing a node with a member of A_e.
    """
    inc = G.incidence
    shared = (inc @ inc.T).tocsr()
    a = shared.astype(bool).astype(np.int64)
    b = (a @ a).tocsr()
    a.sort_indices()
    b.sort_indices()
    return EdgeNeighborhoods(
        a_sizes=np.diff(a.indptr),
        a_members=a.astype(bool).tocsr(),
        b_members=b.astype(bool).tocsr(),
    )


def node_edge_split(G: SimilarityGraph, labels: LabelVector, node: int) -> tuple[int, int, int]:
    """(degree, edges to the node's own sample, edges to the other sample)."""
    e = G.edges
    incident = (e[:, 0] == node) | (e[:, 1] == node)
    others = np.where(e[incident, 0] == node, e[incident, 1], e[incident, 0])
    same = int(np.count_nonzero(labels.values[others] == labels.values[node]))
    degree = int(incident.sum())
    return degree, same, degree - same


def top_hubs(G: SimilarityGraph, count: int) -> list[int]:
    """Indices of the `count` highest-degree nodes (ties to the smaller index)."""
    order = np.argsort(-G.degrees, kind="stable")
    return [int(i) for i in order[: max(0, count)]]


def graph_from_input(
    D: Optional[np.ndarray],
    kind: GraphKind | str,
    k: int,
    *,
    edgelist: Optional[SimilarityGraph] = None,
) -> SimilarityGraph:
    if GraphKind(kind) is GraphKind.EDGELIST:
        if edgelist is None:
            raise InvalidInputError("An edge list is required for --graph edgelist.")
        return edgelist
    if D is None:
        raise InvalidInputError("A distance matrix is required to build a similarity graph.")
    return build_graph(D, kind, k)


def remove_node(G: SimilarityGraph, node: int) -> tuple[SimilarityGraph, np.ndarray]:
    """
    G without `node` and its edges, nodes above it shifted down by one.
    Also returns the boolean mask of kept edges (to carry per-edge data along).
    """
    if not 0 <= node < G.node_count:
        raise InvalidInputError(f"Node {node} outside [0, {G.node_count}).")
    e = G.edges
    keep = (e[:, 0] != node) & (e[:, 1] != node)
    kept = e[keep]
    kept = kept - (kept > node)
    return SimilarityGraph.from_edges(G.node_count - 1, kept, kind=G.kind, k=G.k), keep
