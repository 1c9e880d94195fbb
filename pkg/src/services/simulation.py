"""
Monte Carlo studies: sample generators, influential-point injection, power and
calibration tables, and hub-emergence profiles.

Trial t draws sample X from stream (seed, t, 0), sample Y from (seed, t, 1) and
its permutations from a seed derived from (seed, t, 2), so a study is
reproducible bit for bit and independent of the thread count.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from ..app.schemas.simulation import DistributionSpec, SimConfig
from ..errors import InvalidDfError, InvalidInputError
from ..models.inference import StatisticKind
from ..models.labels import LabelVector
from ..models.simulation import PowerRow, PowerTable, TrialRecord
from ..runner.pool import map_ordered
from ..runner.trial_executor import execute_trial
from ..utils.rng import derive_seed, stream
from . import graph_core
from .edge_stats import null_moments
from .inference import run_test
from .weighting import assign_weights

logger = logging.getLogger(__name__)


# ============================================================================
# Generators
# ============================================================================

def _scales(spec: DistributionSpec) -> np.ndarray:
    if spec.scale_blocks:
        return np.concatenate([np.full(block.size, block.scale) for block in spec.scale_blocks])
    return np.full(spec.dim, spec.scale)


def location_offset(spec: DistributionSpec) -> np.ndarray:
    """Offset vector with L2 norm mean_shift (+ noncentrality for mvt), equal in every coordinate."""
    magnitude = spec.mean_shift + (spec.noncentrality if spec.family == "mvt" else 0.0)
    return np.full(spec.dim, magnitude / np.sqrt(spec.dim))


def generate_sample(spec: DistributionSpec, n: int, rng: np.random.Generator | int) -> np.ndarray:
    """n i.i.d. rows from `spec`."""
    if n < 1:
        raise InvalidInputError("Sample size must be at least 1.")
    if not isinstance(rng, np.random.Generator):
        rng = stream(rng)
    if spec.family == "mvt" and (spec.df is None or spec.df <= 2):
        raise InvalidDfError(f"mvt needs df > 2 for finite variance, got {spec.df}.")

    z = rng.standard_normal((n, spec.dim)) * _scales(spec)
    offset = location_offset(spec)
    if spec.family == "gaussian":
        return z + offset
    if spec.family == "lognormal":
        return np.exp(z + offset)
    mixing = np.sqrt(rng.chisquare(spec.df, size=(n, 1)) / spec.df)
    return z / mixing + offset


def inject_influential(sample: np.ndarray, gamma: float, index: int = 0) -> np.ndarray:
    """Pull row `index` towards the mean of the other rows: m + gamma (x - m)."""
    if not 0.0 <= gamma <= 1.0:
        raise InvalidInputError(f"gamma must lie in [0, 1], got {gamma}.")
    out = np.array(sample, dtype=float, copy=True)
    if out.shape[0] < 2:
        return out
    rest = np.delete(out, index, axis=0).mean(axis=0)
    out[index] = rest + gamma * (out[index] - rest)
    return out


# ============================================================================
# Power study
# ============================================================================

def _row_keys(config: SimConfig) -> list[tuple[StatisticKind, str]]:
    """(statistic, weight) rows: unweighted S / M first, then each weighted statistic per weight."""
    kinds = [StatisticKind(s) for s in config.statistics]
    keys = [(k, "none") for k in kinds if k.unweighted]
    keys += [(k, w) for k in kinds if not k.unweighted for w in config.weights]
    return keys


def _p_key(kind: StatisticKind, weight: str) -> str:
    return kind.label if weight == "none" else f"{kind.label}({weight})"


def draw_trial_data(config: SimConfig, trial: int, gamma: Optional[float]) -> tuple[np.ndarray, LabelVector]:
    x = generate_sample(config.sample_x, config.n1, stream(config.seed, trial, 0))
    y = generate_sample(config.sample_y, config.n2, stream(config.seed, trial, 1))
    if gamma is not None:
        if config.inject_sample == "x":
            x = inject_influential(x, gamma)
        else:
            y = inject_influential(y, gamma)
    labels = LabelVector.from_values(
        np.r_[np.zeros(config.n1, dtype=np.int8), np.ones(config.n2, dtype=np.int8)]
    )
    return np.vstack((x, y)), labels


def _run_trial(config: SimConfig, scenario: str, trial: int, gamma: Optional[float]) -> TrialRecord:
    keys = _row_keys(config)
    unweighted = [k for k, w in keys if w == "none"]
    weighted = list(dict.fromkeys(k for k, w in keys if w != "none"))
    perm_seed = derive_seed(config.seed, trial, 2)

    def body(record: TrialRecord) -> None:
        data, labels = draw_trial_data(config, trial, gamma)
        D = graph_core.distance_matrix(data, config.graph.metric)
        G = graph_core.build_graph(D, config.graph.kind, config.graph.k)
        hubs = graph_core.hub_report(G)
        record.d_max = hubs.d_max
        record.p95_degree = hubs.p95_degree

        weighted_graphs = {w: assign_weights(G, w) for w in config.weights}
        unit = assign_weights(G, "none")
        for name, Gw in [("none", unit), *weighted_graphs.items()]:
            moments = null_moments(Gw, labels.n1, labels.n2, check=False)
            record.sigma11[name] = moments.sigma11
            record.sigma22[name] = moments.sigma22

        if unweighted:
            for report in run_test(unit, labels, unweighted, config.nperm, perm_seed, threads=1, with_conditions=False):
                record.p_values[_p_key(report.statistic, "none")] = report.p_perm
        if weighted:
            for w, Gw in weighted_graphs.items():
                for report in run_test(Gw, labels, weighted, config.nperm, perm_seed, threads=1, with_conditions=False):
                    record.p_values[_p_key(report.statistic, w)] = report.p_perm

    return execute_trial(scenario, trial, body)


def summarize(config: SimConfig, scenario: str, records: Sequence[TrialRecord]) -> list[PowerRow]:
    done = [r for r in records if r.status == "success"]
    median_dmax = float(np.median([r.d_max for r in done])) if done else float("nan")
    rows: list[PowerRow] = []
    for kind, weight in _row_keys(config):
        key = _p_key(kind, weight)
        rejections = sum(1 for r in done if r.p_values.get(key, 1.0) < config.alpha)
        rows.append(
            PowerRow(
                scenario=scenario,
                statistic=kind.label,
                weight=weight,
                rejections=rejections,
                trials=len(records),
                median_dmax=median_dmax,
            )
        )
    return rows


def power_study(
    config: SimConfig,
    *,
    threads: Optional[int] = None,
    gamma: Optional[float] = None,
    scenario: Optional[str] = None,
) -> PowerTable:
    """
    Run `config.trials` independent trials and count rejections at `config.alpha`.
    `gamma` overrides the config's injection level.
    """
    gamma = config.inject_gamma if gamma is None else gamma
    scenario = scenario or config.name
    records = map_ordered(lambda t: _run_trial(config, scenario, t, gamma), range(config.trials), threads)
    failed = sum(1 for r in records if r.status != "success")
    if failed:
        logger.warning("Scenario '%s': %d of %d trials failed", scenario, failed, len(records))
    table = PowerTable(rows=summarize(config, scenario, records), records=list(records))
    logger.info(
        "Scenario '%s' finished: %s",
        scenario,
        ", ".join(f"{r.statistic}/{r.weight}={r.rejections}/{r.trials}" for r in table.rows),
    )
    return table


def hub_sweep(
    config: SimConfig,
    gammas: Optional[Iterable[float]] = None,
    *,
    threads: Optional[int] = None,
) -> PowerTable:
    """One power study per injection level; smaller gamma means a stronger hub."""
    table = PowerTable()
    for gamma in (config.sweep_gammas if gammas is None else list(gammas)):
        table.extend(power_study(config, threads=threads, gamma=gamma, scenario=f"{config.name}_gamma{gamma:g}"))
    return table


# ============================================================================
# Hubness profile
# ============================================================================

@dataclass(frozen=True)
class HubnessRow:
    dimension: int
    trial: int
    d_max: int
    p95_degree: int

    def to_dict(self) -> dict[str, Any]:
        return {"dimension": self.dimension, "trial": self.trial, "d_max": self.d_max, "p95_degree": self.p95_degree}


def hubness_profile(
    spec: DistributionSpec,
    n_per_sample: int,
    dims: Sequence[int],
    k: int,
    trials: int,
    seed: int,
    *,
    metric: str = "l2",
    threads: Optional[int] = None,
) -> list[HubnessRow]:
    """Max and 95th-percentile node degree of k-MSTs on 2n same-distribution points, per dimension."""
    if spec.scale_blocks:
        raise InvalidInputError("hubness_profile varies the dimension; use a scalar scale.")

    def one(job: tuple[int, int]) -> HubnessRow:
        dim, trial = job
        dim_spec = spec.model_copy(update={"dim": dim})
        data = generate_sample(dim_spec, 2 * n_per_sample, stream(seed, dim, trial))
        G = graph_core.kmst(graph_core.distance_matrix(data, metric), k)
        hubs = graph_core.hub_report(G)
        return HubnessRow(dimension=dim, trial=trial, d_max=hubs.d_max, p95_degree=hubs.p95_degree)

    jobs = [(int(d), t) for d in dims for t in range(trials)]
    return map_ordered(one, jobs, threads)
