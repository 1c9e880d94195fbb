"""
Permutation and asymptotic inference for the weighted edge-count statistics.

Permutations are drawn in blocks of 256 relabelings, block c from the stream
seeded by (seed, c), so a given (seed, B) reproduces the same null sample no
matter how many threads evaluate the blocks. Weighted and unit-weight
statistics are evaluated on the same relabelings.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import bisect
from scipy.special import ndtr, ndtri
from scipy.stats import chi2

from ..app.config import get_settings
from ..errors import ConfigError, DegenerateSizeError, EnumerationBudgetError, InvalidInputError, RGTestError
from ..models.graph import SimilarityGraph, WeightedGraph
from ..models.inference import (
    ConditionReport,
    CriticalGap,
    ExactNull,
    PValueReport,
    StatisticKind,
    count_at_least,
)
from ..models.labels import LabelVector
from ..runner.pool import map_ordered
from ..utils.rng import permutation_blocks, permuted_labels
from . import graph_core
from .edge_stats import EdgeCountEngine, VARIANCE_RTOL, evaluate, null_moments, weight_sums
from .weighting import WeightFunctionSpec, assign_weights, weight_from_values, well_definedness

logger = logging.getLogger(__name__)

# Each statistic's distribution under the null, keyed by which graph it came from.
NullSample = dict[StatisticKind, np.ndarray]

GAP_KINDS = (StatisticKind.Z_DIFF, StatisticKind.Z_W, StatisticKind.SR, StatisticKind.MR)


# ============================================================================
# Asymptotic p-values
# ============================================================================

def normal_cdf(x: float) -> float:
    """Standard normal CDF; accurate in both tails."""
    return float(ndtr(x))


def asym_pvalue_sr(s: float) -> float:
    """Chi-squared (2 df) survival function, exp(-s/2)."""
    if s < 0:
        raise InvalidInputError(f"S_R must be nonnegative, got {s}.")
    return float(chi2.sf(s, df=2))


def asym_pvalue_mr(m: float) -> float:
    """
    P(max(Z_w, |Z_diff|) >= m) for independent standard normals:
    1 - Phi(m)(2 Phi(m) - 1) for m >= 0, else 1.
    """
    if m < 0:
        return 1.0
    tail = normal_cdf(-m)
    # 1 - (1 - t)(1 - 2t), written to keep precision for large m
    return min(1.0, 3.0 * tail - 2.0 * tail * tail)


def asym_pvalue_zw(z: float) -> float:
    return normal_cdf(-z)


def asym_pvalue_zdiff(z: float) -> float:
    return min(1.0, 2.0 * normal_cdf(-abs(z)))


def asym_pvalue(kind: StatisticKind, value: float) -> float:
    base = kind.base
    if base is StatisticKind.SR:
        return asym_pvalue_sr(value)
    if base is StatisticKind.MR:
        return asym_pvalue_mr(value)
    if base is StatisticKind.Z_W:
        return asym_pvalue_zw(value)
    return asym_pvalue_zdiff(value)


def asym_critical_value(kind: StatisticKind, alpha: float) -> float:
    _check_alpha(alpha)
    base = kind.base
    if base is StatisticKind.SR:
        return -2.0 * math.log(alpha)
    if base is StatisticKind.MR:
        if alpha >= 1.0:
            return 0.0
        return float(bisect(lambda m: asym_pvalue_mr(m) - alpha, 0.0, 40.0, xtol=1e-10))
    return float(ndtri(1.0 - alpha))


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}.")


# ============================================================================
# Conditions
# ============================================================================

def condition_report(Gw: WeightedGraph, n1: int, neighborhoods=None) -> ConditionReport:
    N = Gw.node_count
    sums = weight_sums(Gw)
    nb = neighborhoods if neighborhoods is not None else graph_core.edge_neighborhoods(Gw.graph)
    w = Gw.weights
    w_a, w_b = nb.weight_sums(w)

    s12 = sums.s1 + sums.s2
    ratio_ii = (s12 - 4.0 * sums.s3 / N) / s12
    ratio_iii = float(np.sum((w * nb.a_sizes) ** 2)) / (sums.s1 * math.sqrt(N))
    ratio_iv = float(np.sum(w * w_a * w_b)) / sums.s1 ** 1.5

    envelope = Gw.n_edges / N ** 1.25
    dense = Gw.n_edges > N ** 1.25
    if dense:
        logger.warning(
            "Graph has %d edges > N^1.25 = %.1f; asymptotic p-values may be unreliable",
            Gw.n_edges,
            N ** 1.25,
        )
    return ConditionReport(
        lambda_ratio=n1 / N,
        n_nodes=N,
        n_edges=Gw.n_edges,
        edges_per_node=Gw.n_edges / N,
        edges_envelope=envelope,
        dense=dense,
        ratio_ii=float(ratio_ii),
        ratio_iii=ratio_iii,
        ratio_iv=ratio_iv,
    )


# ============================================================================
# Null sampling
# ============================================================================

def _require_well_defined(Gw: WeightedGraph, labels: LabelVector) -> None:
    well_definedness(Gw, labels.n1, labels.n2).raise_if_ill_conditioned()


def sample_null(
    engines: dict[str, EdgeCountEngine],
    labels: LabelVector,
    n_perm: int,
    seed: int,
    *,
    threads: Optional[int] = None,
) -> dict[str, NullSample]:
    """Evaluate every engine on the same B seeded relabelings."""
    if n_perm < 1:
        raise ConfigError("The number of permutations must be at least 1.")
    base = np.asarray(labels.values)

    def run_block(block: tuple[int, int]) -> dict[str, NullSample]:
        index, size = block
        matrix = permuted_labels(base, seed, index, size)
        return {name: engine.evaluate(matrix) for name, engine in engines.items()}

    parts = map_ordered(run_block, permutation_blocks(n_perm), threads)
    return {
        name: {kind: np.concatenate([p[name][kind] for p in parts]) for kind in parts[0][name]}
        for name in engines
    }


# ============================================================================
# Tests
# ============================================================================

def run_test(
    Gw: WeightedGraph,
    labels: LabelVector,
    kinds: Sequence[StatisticKind | str],
    n_perm: int,
    seed: int,
    *,
    threads: Optional[int] = None,
    exhaustive: bool = False,
    with_conditions: bool = True,
) -> list[PValueReport]:
    """
    One permutation pass shared by every requested statistic.

    S and M are S_R and M_R on the unit-weight copy of the graph. With
    `exhaustive`, the null is the full enumeration of C(N, n1) labelings and
    p = #{T >= T_obs} / C(N, n1).
    """
    kinds = [StatisticKind(k) for k in kinds]
    if not kinds:
        raise ConfigError("At least one statistic must be requested.")
    labels.require_two_per_sample()

    graphs: dict[str, WeightedGraph] = {}
    if any(not k.unweighted for k in kinds):
        graphs["weighted"] = Gw
    if any(k.unweighted for k in kinds):
        graphs["unit"] = Gw.unit()

    for graph in graphs.values():
        _require_well_defined(graph, labels)

    observed = {name: evaluate(graph, labels) for name, graph in graphs.items()}
    engines = {
        name: EdgeCountEngine(graph, labels.n1, labels.n2, moments=observed[name][1])
        for name, graph in graphs.items()
    }

    if exhaustive:
        nulls = {name: _enumerated(engine, labels.N, labels.n1) for name, engine in engines.items()}
        n_null = math.comb(labels.N, labels.n1)
    else:
        nulls = sample_null(engines, labels, n_perm, seed, threads=threads)
        n_null = n_perm

    conditions_by_graph: dict[str, dict[str, float]] = {}
    if with_conditions:
        neighborhoods = graph_core.edge_neighborhoods(Gw.graph)
        conditions_by_graph = {
            name: condition_report(graph, labels.n1, neighborhoods).ratios() for name, graph in graphs.items()
        }

    reports: list[PValueReport] = []
    for kind in kinds:
        name = "unit" if kind.unweighted else "weighted"
        graph = graphs[name]
        values = observed[name][2]
        value = _stat_value(values, kind.base)
        count = count_at_least(nulls[name][kind.base], value, kind)
        p_perm = count / n_null if exhaustive else (1 + count) / (1 + n_perm)
        reports.append(
            PValueReport(
                statistic=kind,
                value=value,
                p_perm=p_perm,
                p_asym=asym_pvalue(kind, value),
                n_perm=n_null,
                seed=None if exhaustive else seed,
                n1=labels.n1,
                n2=labels.n2,
                count_ge=count,
                exhaustive=exhaustive,
                graph=graph.graph.to_dict(),
                weight=graph.weight_name,
                conditions=conditions_by_graph.get(name, {}),
            )
        )
    logger.info(
        "Test finished: %s (N=%d, |G|=%d, B=%d)",
        ", ".join(f"{r.statistic.label}={r.value:.4g} p={r.p_perm:.4g}" for r in reports),
        labels.N,
        Gw.n_edges,
        n_null,
    )
    return reports


def permutation_pvalue(
    Gw: WeightedGraph,
    labels: LabelVector,
    kind: StatisticKind | str,
    n_perm: int,
    seed: int,
    *,
    threads: Optional[int] = None,
) -> PValueReport:
    return run_test(Gw, labels, [kind], n_perm, seed, threads=threads)[0]


def _stat_value(values, kind: StatisticKind) -> float:
    return {
        StatisticKind.SR: values.s_r,
        StatisticKind.MR: values.m_r,
        StatisticKind.Z_DIFF: values.z_diff,
        StatisticKind.Z_W: values.z_w,
    }[kind]


# ============================================================================
# Exact enumeration
# ============================================================================

def _labelings(N: int, n1: int) -> np.ndarray:
    """Every 0/1 vector with exactly n1 zeros, one per row."""
    idx = np.array(list(combinations(range(N), n1)), dtype=np.int64).reshape(math.comb(N, n1), n1)
    matrix = np.ones((idx.shape[0], N), dtype=np.int8)
    matrix[np.arange(idx.shape[0])[:, None], idx] = 0
    return matrix


def _check_budget(N: int, n1: int, budget: Optional[int]) -> int:
    budget = budget if budget is not None else get_settings().exact_budget
    count = math.comb(N, n1)
    if count > budget:
        raise EnumerationBudgetError(
            f"C({N}, {n1}) = {count} labelings exceeds the enumeration budget of {budget}.",
            details={"N": N, "n1": n1, "labelings": count, "budget": budget},
        )
    return count


def _enumerated(engine: EdgeCountEngine, N: int, n1: int, budget: Optional[int] = None) -> NullSample:
    _check_budget(N, n1, budget)
    return engine.evaluate(_labelings(N, n1))


def exact_null(Gw: WeightedGraph, n1: int, *, budget: Optional[int] = None) -> ExactNull:
    """Moments and statistic distributions over all C(N, n1) labelings."""
    N = Gw.node_count
    if not 0 <= n1 <= N:
        raise InvalidInputError(f"n1 must lie in [0, {N}], got {n1}.")
    n_labelings = _check_budget(N, n1, budget)
    n2 = N - n1

    matrix = _labelings(N, n1)
    in_x = matrix == 0
    left, right = Gw.edges[:, 0], Gw.edges[:, 1]
    r1w = (in_x[:, left] & in_x[:, right]) @ Gw.weights
    r2w = (~in_x[:, left] & ~in_x[:, right]) @ Gw.weights

    cov = np.cov(np.vstack((r1w, r2w)), bias=True) if n_labelings > 1 else np.zeros((2, 2))
    floor = VARIANCE_RTOL * Gw.total_weight ** 2
    degenerate = n_labelings == 1 or (cov[0, 0] <= floor and cov[1, 1] <= floor)

    distributions: NullSample = {}
    if not degenerate and n1 >= 2 and n2 >= 2 and N >= 4:
        moments = null_moments(Gw, n1, n2, check=False)
        if moments.var_diff > floor and moments.var_w > floor:
            engine = EdgeCountEngine(Gw, n1, n2, moments=moments)
            distributions = engine.evaluate(matrix)
        else:
            degenerate = True

    return ExactNull(
        n1=n1,
        n2=n2,
        n_labelings=n_labelings,
        mean_r1w=float(r1w.mean()),
        mean_r2w=float(r2w.mean()),
        var_r1w=float(cov[0, 0]),
        var_r2w=float(cov[1, 1]),
        cov_r1w_r2w=float(cov[0, 1]),
        degenerate=bool(degenerate),
        distributions=distributions,
    )


# ============================================================================
# Critical values
# ============================================================================

def critical_gaps(
    Gw: WeightedGraph,
    n1: int,
    alphas: Iterable[float],
    n_perm: int,
    seed: int,
    *,
    threads: Optional[int] = None,
    exhaustive: bool = False,
) -> list[CriticalGap]:
    """
    Asymptotic minus permutation critical value for Z_diff, Z_w, S_R and M_R at
    each alpha. The permutation critical value is the upper (1 - alpha)
    quantile of the null sample (the next attained value above it).
    """
    alphas = list(alphas)
    for alpha in alphas:
        _check_alpha(alpha)
    N = Gw.node_count
    labels = LabelVector.from_values(np.r_[np.zeros(n1, dtype=np.int8), np.ones(N - n1, dtype=np.int8)])
    _require_well_defined(Gw, labels)

    if exhaustive:
        null = exact_null(Gw, n1).distributions
        if not null:
            raise DegenerateSizeError("Enumerated null is degenerate; no critical values exist.")
    else:
        engine = EdgeCountEngine(Gw, labels.n1, labels.n2)
        null = sample_null({"g": engine}, labels, n_perm, seed, threads=threads)["g"]

    gaps: list[CriticalGap] = []
    for alpha in alphas:
        for kind in GAP_KINDS:
            perm = float(np.quantile(null[kind], 1.0 - alpha, method="higher"))
            gaps.append(
                CriticalGap(statistic=kind, alpha=alpha, asymptotic=asym_critical_value(kind, alpha), permutation=perm)
            )
    return gaps


def critical_gap(
    Gw: WeightedGraph,
    n1: int,
    alpha: float,
    n_perm: int,
    seed: int,
    *,
    threads: Optional[int] = None,
    exhaustive: bool = False,
) -> dict[StatisticKind, CriticalGap]:
    gaps = critical_gaps(Gw, n1, [alpha], n_perm, seed, threads=threads, exhaustive=exhaustive)
    return {g.statistic: g for g in gaps}


# ============================================================================
# Influence of individual observations
# ============================================================================

@dataclass
class InfluenceRow:
    """Leave-one-out result for a single (high-degree) observation."""

    node: int
    degree: int
    same_sample_edges: int
    other_sample_edges: int
    p_values: dict[str, float] = field(default_factory=dict)
    error_message: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "node": self.node,
            "degree": self.degree,
            "same_sample_edges": self.same_sample_edges,
            "other_sample_edges": self.other_sample_edges,
            "p_values": dict(self.p_values),
            "error": self.error_message,
        }


def influence_analysis(
    graph: SimilarityGraph,
    labels: LabelVector,
    weight: WeightFunctionSpec | str,
    kinds: Sequence[StatisticKind | str],
    top: int,
    n_perm: int,
    seed: int,
    *,
    distances: Optional[np.ndarray] = None,
    edge_weights: Optional[np.ndarray] = None,
    threads: Optional[int] = None,
) -> list[InfluenceRow]:
    """
    For each of the `top` highest-degree nodes: its edge split by sample and the
    permutation p-values after removing it. k-MST / k-NN graphs are rebuilt from
    the reduced distance matrix; edge-list graphs just lose the node's edges.
    """
    rows: list[InfluenceRow] = []
    for node in graph_core.top_hubs(graph, top):
        degree, same, other = graph_core.node_edge_split(graph, labels, node)
        row = InfluenceRow(node=node, degree=degree, same_sample_edges=same, other_sample_edges=other)
        try:
            reduced_labels = labels.without(node)
            reduced_labels.require_two_per_sample()
            if graph.kind in (graph_core.GraphKind.KMST.value, graph_core.GraphKind.KNN.value):
                if distances is None:
                    raise InvalidInputError("Rebuilding a k-MST / k-NN graph needs the distance matrix.")
                reduced_d = graph_core.drop_observation(distances, node, square=True)
                reduced = graph_core.build_graph(reduced_d, graph.kind, graph.k)
                reduced_w = assign_weights(reduced, weight)
            else:
                reduced, keep = graph_core.remove_node(graph, node)
                if edge_weights is not None:
                    reduced_w = weight_from_values(reduced, np.asarray(edge_weights)[keep], "file")
                else:
                    reduced_w = assign_weights(reduced, weight)
            reports = run_test(
                reduced_w, reduced_labels, kinds, n_perm, seed, threads=threads, with_conditions=False
            )
            row.p_values = {r.statistic.label: r.p_perm for r in reports}
        except RGTestError as exc:
            row.error_message = exc.message
            logger.warning("Influence analysis for node %d failed: %s", node, exc.message)
        rows.append(row)
    return rows
