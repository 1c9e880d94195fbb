"""
Weighted within-sample edge counts and their permutation-null moments.

For labels g (0 = sample X, 1 = sample Y) and positive edge weights w:

  R1w = sum of w over edges inside X, R2w = sum of w over edges inside Y
  Z_diff = standardized (R1w - R2w)
  Z_w    = standardized (q R1w + p R2w),  p = (n1-1)/(N-2), q = 1 - p
  S_R = Z_diff^2 + Z_w^2,  M_R = max(Z_w, |Z_diff|)

The moments are exact under uniform relabelings preserving (n1, n2) and depend
on the graph only through S1, S2, S3 and the total weight.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

from ..errors import (
    DegenerateSizeError,
    IllConditionedGraphError,
    InvalidInputError,
    MomentConsistencyError,
)
from ..models.graph import WeightedGraph
from ..models.inference import StatisticKind
from ..models.labels import LabelVector
from ..models.moments import MomentSet, ObservedCounts, StatValues, WeightSums

logger = logging.getLogger(__name__)

# A permutation variance below VARIANCE_RTOL * (sum of weights)^2 counts as zero.
VARIANCE_RTOL = 1e-12
# Quadratic-form and decomposed S_R must agree to this relative tolerance.
DECOMPOSITION_RTOL = 1e-8


def weight_sums(Gw: WeightedGraph) -> WeightSums:
    w = Gw.weights
    s = Gw.node_sums
    s1 = float(np.dot(w, w))
    total = float(w.sum())
    return WeightSums(
        s1=s1,
        s2=float(np.dot(s, s)) - s1,
        s3=total * total,
        total_weight=total,
        node_sums=s,
    )


def mixing_weights(n1: int, n2: int) -> tuple[float, float]:
    """(p, q) with p = (n1-1)/(N-2)."""
    p = (n1 - 1) / (n1 + n2 - 2)
    return p, 1.0 - p


def observed_counts(Gw: WeightedGraph, labels: LabelVector) -> ObservedCounts:
    if labels.N != Gw.node_count:
        raise InvalidInputError(
            f"Label length {labels.N} does not match graph node count {Gw.node_count}."
        )
    g = labels.values
    a = g[Gw.edges[:, 0]]
    b = g[Gw.edges[:, 1]]
    in_x = (a == 0) & (b == 0)
    in_y = (a == 1) & (b == 1)
    p, q = mixing_weights(labels.n1, labels.n2)
    r1 = int(in_x.sum())
    r2 = int(in_y.sum())
    return ObservedCounts(
        r1w=float(Gw.weights[in_x].sum()),
        r2w=float(Gw.weights[in_y].sum()),
        r0=Gw.n_edges - r1 - r2,
        r1=r1,
        r2=r2,
        p=p,
        q=q,
    )


def null_moments(
    Gw: WeightedGraph,
    n1: int,
    n2: int,
    *,
    sums: Optional[WeightSums] = None,
    check: bool = True,
) -> MomentSet:
    """
    Permutation-null means, variances and covariance of (R1w, R2w), plus the
    moments of R1w - R2w and q R1w + p R2w.

    With `check`, a vanishing variance raises IllConditionedGraphError naming
    the failed well-definedness condition.
    """
    N = n1 + n2
    if N <= 3:
        raise DegenerateSizeError(f"Null moments need N >= 4 observations, got {N}.")
    if n1 < 2 or n2 < 2:
        raise InvalidInputError("Null moments need n1 >= 2 and n2 >= 2.")

    sums = sums if sums is not None else weight_sums(Gw)
    S1, S2, S3, T = sums.s1, sums.s2, sums.s3, sums.total_weight

    pairs = N * (N - 1)
    mu1w = T * n1 * (n1 - 1) / pairs
    mu2w = T * n2 * (n2 - 1) / pairs

    factor = n1 * n2 * (n1 - 1) * (n2 - 1) / (N * (N - 1) * (N - 2) * (N - 3))
    shared = -S2 + 2 * (2 * N - 3) * S3 / pairs
    sigma11 = (shared + (N - 3) / (n2 - 1) * (S1 + S2) - 4 * (N - 3) / (N * (n2 - 1)) * S3) * factor
    sigma22 = (shared + (N - 3) / (n1 - 1) * (S1 + S2) - 4 * (N - 3) / (N * (n1 - 1)) * S3) * factor
    sigma12 = shared * factor

    p, q = mixing_weights(n1, n2)
    e_diff = T * (n1 - n2) / N
    var_diff = ((S1 + S2) - 4 * S3 / N) * n1 * n2 / pairs
    e_w = T * (n1 - 1) * (n2 - 1) / ((N - 1) * (N - 2))
    var_w = (
        (S1 * (N - 3) / (N - 2) - S2 / (N - 2) + 2 * S3 / ((N - 1) * (N - 2)))
        * (n1 * n2 / pairs)
        * ((n1 - 1) * (n2 - 1) / ((N - 2) * (N - 3)))
    )

    moments = MomentSet(
        n1=n1,
        n2=n2,
        mu1w=mu1w,
        mu2w=mu2w,
        sigma11=sigma11,
        sigma22=sigma22,
        sigma12=sigma12,
        e_diff=e_diff,
        var_diff=var_diff,
        e_w=e_w,
        var_w=var_w,
        p=p,
        q=q,
    )
    if check:
        require_well_conditioned(moments, T)
    return moments


def require_well_conditioned(moments: MomentSet, total_weight: float) -> None:
    floor = VARIANCE_RTOL * total_weight * total_weight
    if moments.var_diff <= floor:
        raise IllConditionedGraphError(
            "Var(R1w - R2w) is zero: every node has the same incident weight sum (condition a).",
            condition="a",
            value=moments.var_diff,
        )
    if moments.var_w <= floor:
        raise IllConditionedGraphError(
            "Var(q R1w + p R2w) is zero: (N-3)S1 - S2 + 2S3/(N-1) is not positive (condition b).",
            condition="b",
            value=moments.var_w,
        )


def unweighted_variance(n_edges: int, C: int, n_j: int, N: int) -> float:
    """
    Permutation variance of the unweighted within-sample count R_j, from |G|,
    the number C of edge pairs sharing a node, and the sample size n_j.
    """
    if N <= 3:
        raise DegenerateSizeError(f"Need N >= 4 observations, got {N}.")
    p1 = n_j * (n_j - 1) / (N * (N - 1))
    p2 = p1 * (n_j - 2) / (N - 2)
    p3 = p2 * (n_j - 3) / (N - 3)
    mu = n_edges * p1
    return mu + 2 * C * p2 + (n_edges * (n_edges - 1) - 2 * C) * p3 - mu * mu


def z_scores(counts: ObservedCounts, moments: MomentSet) -> tuple[float, float]:
    """(Z_diff, Z_w)."""
    if moments.var_diff <= 0:
        raise IllConditionedGraphError("Var(R1w - R2w) is zero.", condition="a", value=moments.var_diff)
    if moments.var_w <= 0:
        raise IllConditionedGraphError("Var(q R1w + p R2w) is zero.", condition="b", value=moments.var_w)
    r_w = moments.q * counts.r1w + moments.p * counts.r2w
    z_diff = (counts.r_diff - moments.e_diff) / math.sqrt(moments.var_diff)
    z_w = (r_w - moments.e_w) / math.sqrt(moments.var_w)
    return z_diff, z_w


def quadratic_form(counts: ObservedCounts, moments: MomentSet) -> float:
    """(R - mu)^T Sigma^-1 (R - mu) with a closed-form 2x2 inverse."""
    s11, s22, s12 = moments.sigma11, moments.sigma22, moments.sigma12
    det = s11 * s22 - s12 * s12
    if det <= VARIANCE_RTOL * max(s11 * s22, np.finfo(float).tiny):
        raise IllConditionedGraphError(
            "Covariance of (R1w, R2w) is singular.", condition="covariance", value=det
        )
    a = counts.r1w - moments.mu1w
    b = counts.r2w - moments.mu2w
    return (s22 * a * a - 2 * s12 * a * b + s11 * b * b) / det


def statistics(z: tuple[float, float], moments: MomentSet, counts: ObservedCounts) -> StatValues:
    z_diff, z_w = z
    if not (math.isfinite(z_diff) and math.isfinite(z_w)):
        raise IllConditionedGraphError("Standardized scores are not finite.", condition="a", value=None)
    decomposed = z_diff * z_diff + z_w * z_w
    quad = quadratic_form(counts, moments)
    if abs(quad - decomposed) > DECOMPOSITION_RTOL * max(1.0, decomposed):
        raise MomentConsistencyError(
            "Quadratic-form S_R disagrees with Z_diff^2 + Z_w^2.",
            details={"quadratic_form": quad, "decomposed": decomposed},
        )
    return StatValues(z_diff=z_diff, z_w=z_w, s_r=decomposed, m_r=max(z_w, abs(z_diff)))


def evaluate(Gw: WeightedGraph, labels: LabelVector) -> tuple[ObservedCounts, MomentSet, StatValues]:
    """Observed counts, null moments and the four statistics for one labeling."""
    counts = observed_counts(Gw, labels)
    moments = null_moments(Gw, labels.n1, labels.n2)
    values = statistics(z_scores(counts, moments), moments, counts)
    return counts, moments, values


# ============================================================================
# Batch engine
# ============================================================================

class EdgeCountEngine:
    """
    Vectorized statistics for many labelings of one weighted graph.

    The moments are computed once (labelings share n1, n2) and the engine is
    read-only afterwards, so one instance can serve several worker threads.
    """

    def __init__(self, Gw: WeightedGraph, n1: int, n2: int, *, moments: Optional[MomentSet] = None):
        self.graph = Gw
        self.moments = moments if moments is not None else null_moments(Gw, n1, n2)
        self._left = Gw.edges[:, 0]
        self._right = Gw.edges[:, 1]
        self._weights = Gw.weights

    def counts(self, label_matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(R1w, R2w) per row of an (m, N) 0/1 label matrix."""
        in_x = np.asarray(label_matrix) == 0
        r1w = (in_x[:, self._left] & in_x[:, self._right]) @ self._weights
        r2w = (~in_x[:, self._left] & ~in_x[:, self._right]) @ self._weights
        return r1w, r2w

    def evaluate(self, label_matrix: np.ndarray) -> dict[StatisticKind, np.ndarray]:
        m = self.moments
        r1w, r2w = self.counts(label_matrix)
        z_diff = ((r1w - r2w) - m.e_diff) / math.sqrt(m.var_diff)
        z_w = ((m.q * r1w + m.p * r2w) - m.e_w) / math.sqrt(m.var_w)
        return {
            StatisticKind.Z_DIFF: z_diff,
            StatisticKind.Z_W: z_w,
            StatisticKind.SR: z_diff * z_diff + z_w * z_w,
            StatisticKind.MR: np.maximum(z_w, np.abs(z_diff)),
        }
