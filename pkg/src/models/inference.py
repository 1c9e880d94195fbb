from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np


class StatisticKind(str, Enum):
    """Statistics the inference layer can report."""

    SR = "sr"
    MR = "mr"
    S = "s"
    M = "m"
    Z_DIFF = "z_diff"
    Z_W = "z_w"

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def unweighted(self) -> bool:
        """S and M are S_R and M_R evaluated with every weight equal to one."""
        return self in (StatisticKind.S, StatisticKind.M)

    @property
    def base(self) -> "StatisticKind":
        return {StatisticKind.S: StatisticKind.SR, StatisticKind.M: StatisticKind.MR}.get(self, self)


_LABELS = {
    StatisticKind.SR: "S_R",
    StatisticKind.MR: "M_R",
    StatisticKind.S: "S",
    StatisticKind.M: "M",
    StatisticKind.Z_DIFF: "Z_diff",
    StatisticKind.Z_W: "Z_w",
}

# Relative slack when comparing null values against the observed one; values
# that agree up to floating-point noise count as ties.
TIE_RTOL = 1e-9


def count_at_least(values: np.ndarray, observed: float, kind: StatisticKind) -> int:
    """Number of null values at least as extreme as `observed` (|Z_diff| is two-sided)."""
    values = np.asarray(values, dtype=float)
    if kind.base is StatisticKind.Z_DIFF:
        values, observed = np.abs(values), abs(observed)
    slack = TIE_RTOL * max(1.0, abs(observed))
    return int(np.count_nonzero(values >= observed - slack))


@dataclass(frozen=True)
class ConditionReport:
    """Finite-sample ratios behind the asymptotic-normality conditions."""

    lambda_ratio: float
    n_nodes: int
    n_edges: int
    edges_per_node: float
    edges_envelope: float
    dense: bool
    ratio_ii: float
    ratio_iii: float
    ratio_iv: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "n1_over_N": self.lambda_ratio,
            "n_edges": self.n_edges,
            "edges_per_node": self.edges_per_node,
            "edges_over_N_1_25": self.edges_envelope,
            "dense": self.dense,
            "ratio_ii": self.ratio_ii,
            "ratio_iii": self.ratio_iii,
            "ratio_iv": self.ratio_iv,
        }

    def ratios(self) -> dict[str, float]:
        return {"ratio_ii": self.ratio_ii, "ratio_iii": self.ratio_iii, "ratio_iv": self.ratio_iv}


@dataclass(frozen=True)
class PValueReport:
    """
    One statistic's observed value with its permutation and asymptotic p-values.

    `p_perm = (1 + count_ge) / (1 + n_perm)` for sampled permutations and
    `count_ge / n_perm` for an exhaustive enumeration.
    """

    statistic: StatisticKind
    value: float
    p_perm: Optional[float]
    p_asym: Optional[float]
    n_perm: int
    seed: Optional[int]
    n1: int
    n2: int
    count_ge: Optional[int] = None
    exhaustive: bool = False
    graph: dict[str, Any] = field(default_factory=dict)
    weight: str = "none"
    conditions: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "statistic": self.statistic.label,
            "value": self.value,
            "p_perm": self.p_perm,
            "p_asym": self.p_asym,
            "n_perm": self.n_perm,
            "seed": self.seed,
            "n1": self.n1,
            "n2": self.n2,
            "graph": {
                "type": self.graph.get("type"),
                "k": self.graph.get("k"),
                "n_edges": self.graph.get("n_edges"),
                "d_max": self.graph.get("d_max"),
            },
            "weight": self.weight,
            "conditions": dict(self.conditions),
        }


@dataclass(frozen=True, eq=False)
class ExactNull:
    """
    Full enumeration of the C(N, n1) labelings.

    `distributions` maps statistic kinds (S_R, M_R, Z_diff, Z_w of the given
    weighting) to arrays over all labelings; it is empty when the labeling
    set is degenerate (a single labeling, or zero null variance).
    """

    n1: int
    n2: int
    n_labelings: int
    mean_r1w: float
    mean_r2w: float
    var_r1w: float
    var_r2w: float
    cov_r1w_r2w: float
    degenerate: bool
    distributions: dict[StatisticKind, np.ndarray] = field(default_factory=dict)

    def exact_pvalue(self, kind: StatisticKind, observed: float) -> float:
        values = self.distributions[kind.base]
        return count_at_least(values, observed, kind) / self.n_labelings

    def moments(self) -> dict[str, float]:
        return {
            "mu1w": self.mean_r1w,
            "mu2w": self.mean_r2w,
            "sigma11": self.var_r1w,
            "sigma22": self.var_r2w,
            "sigma12": self.cov_r1w_r2w,
        }


@dataclass(frozen=True)
class CriticalGap:
    statistic: StatisticKind
    alpha: float
    asymptotic: float
    permutation: float

    @property
    def gap(self) -> float:
        return self.asymptotic - self.permutation

    def to_dict(self) -> dict[str, Any]:
        return {
            "statistic": self.statistic.label,
            "alpha": self.alpha,
            "asymptotic": self.asymptotic,
            "permutation": self.permutation,
            "gap": self.gap,
        }
