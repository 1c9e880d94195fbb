"""
Degree-based edge weights and the checks that make weighted statistics well defined.

Built-in weight functions of the endpoint degrees (d_i, d_j):

  W1 = 1 / max(d_i, d_j)
  W2 = 1 / sqrt(d_i * d_j)
  W3 = 2 / (d_i + d_j)
  none = 1

All are symmetric and non-increasing in each argument, so edges touching a hub
are down-weighted. Custom functions must have the same properties; they are
checked on the degrees that actually occur in the graph.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Optional

import numpy as np

from ..errors import IllConditionedGraphError, InvalidDegreeError, InvalidInputError, InvalidWeightError
from ..models.graph import SimilarityGraph, WeightedGraph
from .edge_stats import weight_sums

logger = logging.getLogger(__name__)

# Relative tolerance for the two well-definedness conditions.
CONDITION_RTOL = 1e-12
# Relative slack when checking a custom function's symmetry and monotonicity.
CUSTOM_RTOL = 1e-12

DegreeFunction = Callable[[float, float], float]


class WeightKind(str, Enum):
    W1 = "w1"
    W2 = "w2"
    W3 = "w3"
    NONE = "none"
    CUSTOM = "custom"


def _evaluate_builtin(kind: WeightKind, d_i: np.ndarray, d_j: np.ndarray) -> np.ndarray:
    d_i = np.asarray(d_i, dtype=float)
    d_j = np.asarray(d_j, dtype=float)
    if np.any(d_i < 1) or np.any(d_j < 1):
        raise InvalidDegreeError("Degrees must be positive integers.")
    if kind is WeightKind.W1:
        return 1.0 / np.maximum(d_i, d_j)
    if kind is WeightKind.W2:
        return 1.0 / np.sqrt(d_i * d_j)
    if kind is WeightKind.W3:
        return 2.0 / (d_i + d_j)
    if kind is WeightKind.NONE:
        return np.ones(np.broadcast(d_i, d_j).shape)
    raise InvalidWeightError(f"'{kind.value}' is not a built-in weight.")


def builtin_weight(kind: WeightKind | str, d_i: int, d_j: int) -> float:
    return float(_evaluate_builtin(WeightKind(kind), np.array(d_i), np.array(d_j)))


@dataclass(frozen=True)
class WeightFunctionSpec:
    kind: WeightKind
    func: Optional[DegreeFunction] = None
    name: Optional[str] = None

    @classmethod
    def builtin(cls, kind: WeightKind | str) -> "WeightFunctionSpec":
        kind = WeightKind(kind)
        if kind is WeightKind.CUSTOM:
            raise InvalidWeightError("Use WeightFunctionSpec.custom() for custom weights.")
        return cls(kind=kind)

    @classmethod
    def custom(cls, func: DegreeFunction, name: str = "custom") -> "WeightFunctionSpec":
        return cls(kind=WeightKind.CUSTOM, func=func, name=name)

    @property
    def label(self) -> str:
        return self.name or self.kind.value


def _custom_table(func: DegreeFunction, degrees: np.ndarray) -> np.ndarray:
    """W(a, b) over the realized degree set, validated."""
    table = np.array([[float(func(int(a), int(b))) for b in degrees] for a in degrees])
    if not np.all(np.isfinite(table)) or np.any(table <= 0):
        raise InvalidWeightError("Custom weight function must return finite, strictly positive values.")
    scale = float(table.max())
    if not np.allclose(table, table.T, rtol=0.0, atol=CUSTOM_RTOL * scale):
        raise InvalidWeightError("Custom weight function is not symmetric on the observed degrees.")
    # degrees are sorted ascending, so each row must be non-increasing
    if np.any(np.diff(table, axis=1) > CUSTOM_RTOL * scale):
        raise InvalidWeightError("Custom weight function increases with degree on the observed degrees.")
    return table


def assign_weights(G: SimilarityGraph, spec: WeightFunctionSpec | WeightKind | str) -> WeightedGraph:
    """w_ij = W(d_i, d_j) with degrees taken from G itself."""
    if not isinstance(spec, WeightFunctionSpec):
        spec = WeightFunctionSpec.builtin(spec)

    deg = G.degrees
    d_i = deg[G.edges[:, 0]]
    d_j = deg[G.edges[:, 1]]

    if spec.kind is WeightKind.CUSTOM:
        if spec.func is None:
            raise InvalidWeightError("Custom weight spec has no function.")
        realized = np.unique(np.concatenate((d_i, d_j)))
        table = _custom_table(spec.func, realized)
        weights = table[np.searchsorted(realized, d_i), np.searchsorted(realized, d_j)]
    else:
        weights = _evaluate_builtin(spec.kind, d_i, d_j)

    return WeightedGraph(G, weights, spec.label)


def weight_from_values(G: SimilarityGraph, weights: np.ndarray, name: str = "custom") -> WeightedGraph:
    """Attach externally supplied weights (e.g. from an "i j w" edge list)."""
    return WeightedGraph(G, np.asarray(weights, dtype=float), name)


# ============================================================================
# Well-definedness
# ============================================================================

@dataclass(frozen=True)
class WellDefinedReport:
    """
    condition_a: node weight-sums are not all equal (Z_diff has positive variance).
    condition_b: (N-3)S1 - S2 + 2 S3/(N-1) > 0 (Z_w has positive variance).
    """

    condition_a: bool
    condition_b: bool
    node_sum_min: float
    node_sum_max: float
    condition_b_value: float
    s1: float

    @property
    def well_defined(self) -> bool:
        return self.condition_a and self.condition_b

    def failed_condition(self) -> Optional[str]:
        if not self.condition_a:
            return "a"
        if not self.condition_b:
            return "b"
        return None

    def raise_if_ill_conditioned(self) -> None:
        if not self.condition_a:
            raise IllConditionedGraphError(
                "Condition (a) failed: every node has the same incident weight sum, so Z_diff has zero variance.",
                condition="a",
                value=self.node_sum_max - self.node_sum_min,
            )
        if not self.condition_b:
            raise IllConditionedGraphError(
                "Condition (b) failed: (N-3)S1 - S2 + 2S3/(N-1) is not positive, so Z_w has zero variance.",
                condition="b",
                value=self.condition_b_value,
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "well_defined": self.well_defined,
            "condition_a": self.condition_a,
            "condition_b": self.condition_b,
            "node_sum_min": self.node_sum_min,
            "node_sum_max": self.node_sum_max,
            "condition_b_value": self.condition_b_value,
        }


def well_definedness(Gw: WeightedGraph, n1: int, n2: int) -> WellDefinedReport:
    N = n1 + n2
    if N != Gw.node_count:
        raise InvalidInputError(f"n1 + n2 = {N} does not match the graph's {Gw.node_count} nodes.")
    sums = weight_sums(Gw)
    s = sums.node_sums
    s_min, s_max = float(s.min()), float(s.max())
    cond_a = (s_max - s_min) > CONDITION_RTOL * max(s_max, 0.0)
    value_b = (N - 3) * sums.s1 - sums.s2 + 2.0 * sums.s3 / (N - 1)
    cond_b = value_b > CONDITION_RTOL * sums.s1
    return WellDefinedReport(
        condition_a=bool(cond_a),
        condition_b=bool(cond_b),
        node_sum_min=s_min,
        node_sum_max=s_max,
        condition_b_value=float(value_b),
        s1=sums.s1,
    )


# ============================================================================
# Lower bound
# ============================================================================

def lower_bound_ratio(Gw: WeightedGraph) -> float:
    """min edge weight times |G|; small values mean some weight is far below 1/|G|."""
    if Gw.n_edges == 0:
        return 0.0
    return float(Gw.weights.min()) * Gw.n_edges


def check_lower_bound(Gw: WeightedGraph, threshold: float) -> float:
    ratio = lower_bound_ratio(Gw)
    if ratio < threshold:
        logger.warning(
            "Smallest weight times |G| is %.4g, below %.4g; the weighted test may lose power",
            ratio,
            threshold,
        )
    return ratio
