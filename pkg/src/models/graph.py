from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Optional

import numpy as np
import scipy.sparse as sp

from ..errors import InvalidInputError, InvalidWeightError


@dataclass(frozen=True, eq=False)
class SimilarityGraph:
    """
    Undirected simple graph on nodes 0..N-1.

    `edges` is an (m, 2) integer array with i < j in every row, no duplicates.
    Row order is the construction order (tree by tree for a k-MST).
    """

    node_count: int
    edges: np.ndarray
    kind: str = "edgelist"
    k: Optional[int] = None

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: Iterable[tuple[int, int]] | np.ndarray,
        *,
        kind: str = "edgelist",
        k: Optional[int] = None,
    ) -> "SimilarityGraph":
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise InvalidInputError("Edges must be pairs of node indices.")
        if node_count < 1:
            raise InvalidInputError("Graph needs at least one node.")
        if arr.size and (arr.min() < 0 or arr.max() >= node_count):
            raise InvalidInputError(f"Edge endpoint outside [0, {node_count}).")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise InvalidInputError("Self-loops are not allowed.")

        arr = np.sort(arr, axis=1)
        keys = arr[:, 0] * node_count + arr[:, 1]
        if np.unique(keys).size != keys.size:
            raise InvalidInputError("Duplicate edges are not allowed.")
        arr.setflags(write=False)
        return cls(node_count=int(node_count), edges=arr, kind=kind, k=k)

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.bincount(self.edges.ravel(), minlength=self.node_count)
        deg.setflags(write=False)
        return deg

    @cached_property
    def incidence(self) -> sp.csr_matrix:
        """|G| x N edge-node incidence matrix (two ones per row)."""
        m = self.n_edges
        rows = np.repeat(np.arange(m), 2)
        data = np.ones(2 * m, dtype=np.int64)
        return sp.csr_matrix((data, (rows, self.edges.ravel())), shape=(m, self.node_count))

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.edges}

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": self.kind,
            "k": self.k,
            "n_nodes": self.node_count,
            "n_edges": self.n_edges,
            "d_max": int(self.degrees.max()) if self.node_count else 0,
        }


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Similarity graph with a strictly positive, finite weight per edge."""

    graph: SimilarityGraph
    weights: np.ndarray
    weight_name: str = "none"

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.graph.n_edges,):
            raise InvalidWeightError(
                f"Expected {self.graph.n_edges} weights, got {w.size}."
            )
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InvalidWeightError("Edge weights must be finite and strictly positive.")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def edges(self) -> np.ndarray:
        return self.graph.edges

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @property
    def n_edges(self) -> int:
        return self.graph.n_edges

    @property
    def degrees(self) -> np.ndarray:
        return self.graph.degrees

    @cached_property
    def node_sums(self) -> np.ndarray:
        """s_i: total weight of the edges incident to node i."""
        sums = np.zeros(self.node_count)
        np.add.at(sums, self.edges[:, 0], self.weights)
        np.add.at(sums, self.edges[:, 1], self.weights)
        return sums

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def scaled(self, factor: float) -> "WeightedGraph":
        return WeightedGraph(self.graph, self.weights * factor, self.weight_name)

    def unit(self) -> "WeightedGraph":
        return WeightedGraph(self.graph, np.ones(self.n_edges), "none")


@dataclass(frozen=True)
class HubReport:
    degrees: tuple[int, ...]
    d_max: int
    p95_degree: int
    sum_sq_degrees: int
    n_edges: int
    C: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "d_max": self.d_max,
            "p95_degree": self.p95_degree,
            "sum_sq_degrees": self.sum_sq_degrees,
            "n_edges": self.n_edges,
            "C": self.C,
        }


@dataclass(frozen=True, eq=False)
class EdgeNeighborhoods:
    """
    One-hop (A_e) and two-hop (B_e) edge neighborhoods as sparse boolean
    |G| x |G| matrices: row e marks the members of A_e / B_e.
    """

    a_sizes: np.ndarray
    a_members: sp.csr_matrix
    b_members: sp.csr_matrix = field(repr=False)

    def a_of(self, e: int) -> set[int]:
        return set(self.a_members[e].indices.tolist())

    def b_of(self, e: int) -> set[int]:
        return set(self.b_members[e].indices.tolist())

    def weight_sums(self, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(W(A_e), W(B_e)) for every edge."""
        w = np.asarray(weights, dtype=float)
        return self.a_members @ w, self.b_members @ w
