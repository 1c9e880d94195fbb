"""
Self-check of the closed-form null moments against brute-force enumeration.

Random small graphs (random trees and 2-NN graphs, N in [6, 12]) are weighted
five ways (unit, W1, W2, W3, random positive) and every closed-form moment is
compared with the value obtained by enumerating all C(N, n1) labelings.
`sums_fn` is injectable so a deliberately broken S1/S2/S3 can be shown to fail.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from ..models.graph import SimilarityGraph, WeightedGraph
from ..models.moments import MomentSet, WeightSums
from ..utils.rng import stream
from . import graph_core
from .edge_stats import mixing_weights, null_moments, weight_sums
from .inference import exact_null
from .weighting import assign_weights, weight_from_values

logger = logging.getLogger(__name__)

SumsFn = Callable[[WeightedGraph], WeightSums]

ORACLE_RTOL = 1e-10
ORACLE_ATOL = 1e-12
ORACLE_WEIGHTS = ("none", "w1", "w2", "w3", "random")
QUANTITIES = ("mu1w", "mu2w", "sigma11", "sigma22", "sigma12", "e_diff", "var_diff", "e_w", "var_w")

# Path 0-1-2-3, unit weights, n1 = n2 = 2.
PATH4_EXPECTED = {
    "mu1w": 0.5,
    "sigma11": 0.25,
    "sigma12": 1.0 / 12.0,
    "var_diff": 1.0 / 3.0,
    "var_w": 1.0 / 6.0,
    "e_w": 0.5,
    "e_diff": 0.0,
}


@dataclass
class OracleFailure:
    case: int
    weight: str
    n1: int
    quantity: str
    formula: float
    exact: float
    graph: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {
            "case": self.case,
            "weight": self.weight,
            "n1": self.n1,
            "quantity": self.quantity,
            "formula": self.formula,
            "exact": self.exact,
            "graph": self.graph,
        }


@dataclass
class OracleReport:
    graphs: int
    seed: int
    comparisons: int = 0
    failures: list[OracleFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "graphs": self.graphs,
            "seed": self.seed,
            "comparisons": self.comparisons,
            "failures": [f.to_dict() for f in self.failures],
        }


def random_tree(n: int, rng: np.random.Generator) -> SimilarityGraph:
    """Node i > 0 attaches to a uniformly chosen earlier node."""
    edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    return SimilarityGraph.from_edges(n, edges, kind="tree")


def random_knn(n: int, rng: np.random.Generator, k: int = 2) -> SimilarityGraph:
    points = rng.standard_normal((n, 2))
    return graph_core.knn_graph(graph_core.distance_matrix(points, "l2"), k)


def weighted_variant(G: SimilarityGraph, weight: str, rng: np.random.Generator) -> WeightedGraph:
    if weight == "random":
        return weight_from_values(G, rng.uniform(0.1, 2.0, size=G.n_edges), "random")
    return assign_weights(G, weight)


def enumerated_moments(Gw: WeightedGraph, n1: int) -> dict[str, float]:
    exact = exact_null(Gw, n1)
    n2 = Gw.node_count - n1
    p, q = mixing_weights(n1, n2)
    v11, v22, c12 = exact.var_r1w, exact.var_r2w, exact.cov_r1w_r2w
    return {
        "mu1w": exact.mean_r1w,
        "mu2w": exact.mean_r2w,
        "sigma11": v11,
        "sigma22": v22,
        "sigma12": c12,
        "e_diff": exact.mean_r1w - exact.mean_r2w,
        "var_diff": v11 + v22 - 2 * c12,
        "e_w": q * exact.mean_r1w + p * exact.mean_r2w,
        "var_w": q * q * v11 + p * p * v22 + 2 * p * q * c12,
    }


def _close(a: float, b: float, scale: float) -> bool:
    return math.isclose(a, b, rel_tol=ORACLE_RTOL, abs_tol=ORACLE_ATOL * max(1.0, scale))


def compare_case(Gw: WeightedGraph, n1: int, sums_fn: SumsFn) -> list[tuple[str, float, float]]:
    """(quantity, formula, exact) for every moment that disagrees."""
    sums = sums_fn(Gw)
    moments: MomentSet = null_moments(Gw, n1, Gw.node_count - n1, sums=sums, check=False)
    exact = enumerated_moments(Gw, n1)
    scale = Gw.total_weight ** 2
    bad = []
    for name in QUANTITIES:
        formula = getattr(moments, name)
        if not _close(formula, exact[name], scale):
            bad.append((name, float(formula), float(exact[name])))
    return bad


def _serialize(Gw: WeightedGraph) -> dict[str, Any]:
    return {
        "n_nodes": Gw.node_count,
        "edges": Gw.edges.tolist(),
        "weights": Gw.weights.tolist(),
    }


def oracle_check(n_graphs: int = 50, seed: int = 1, *, sums_fn: Optional[SumsFn] = None) -> OracleReport:
    sums_fn = sums_fn or weight_sums
    report = OracleReport(graphs=n_graphs, seed=seed)

    path = WeightedGraph(SimilarityGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)]), np.ones(3))
    fixture = null_moments(path, 2, 2, sums=sums_fn(path), check=False)
    for name, expected in PATH4_EXPECTED.items():
        report.comparisons += 1
        value = getattr(fixture, name)
        if not _close(value, expected, 9.0):
            report.failures.append(OracleFailure(0, "none", 2, name, float(value), expected, _serialize(path)))

    for case in range(1, n_graphs + 1):
        rng = stream(seed, case)
        n = int(rng.integers(6, 13))
        G = random_tree(n, rng) if case % 2 else random_knn(n, rng)
        n1 = int(rng.integers(2, n - 1))
        for weight in ORACLE_WEIGHTS:
            Gw = weighted_variant(G, weight, rng)
            mismatches = compare_case(Gw, n1, sums_fn)
            report.comparisons += len(QUANTITIES)
            for name, formula, exact in mismatches:
                report.failures.append(OracleFailure(case, weight, n1, name, formula, exact, _serialize(Gw)))

    if report.passed:
        logger.info("Oracle check passed: %d graphs, %d comparisons", n_graphs, report.comparisons)
    else:
        logger.warning("Oracle check failed: %d of %d comparisons", len(report.failures), report.comparisons)
    return report
