"""
Shared input handling for `test` and `diagnose`: merge flags over settings,
load files, and build the weighted graph.
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import ValidationError

from ...errors import ConfigError, InvalidInputError
from ...models.graph import SimilarityGraph, WeightedGraph
from ...models.labels import LabelVector
from ...services import graph_core
from ...services.weighting import assign_weights, weight_from_values
from ...utils import io
from ..config import Settings
from ..schemas import RunConfig, validation_items

logger = logging.getLogger(__name__)


def _pick(value, default):
    return default if value is None else value


def split_stats(raw: Optional[str]) -> Optional[list[str]]:
    if raw is None:
        return None
    return [part.strip().lower() for part in raw.split(",") if part.strip()]


def load_run_config(args: argparse.Namespace, settings: Settings, command: str) -> RunConfig:
    payload = {
        "command": command,
        "data": args.data,
        "dist": args.dist,
        "edges": args.edges,
        "labels": args.labels,
        "header": bool(args.header),
        "metric": _pick(args.metric, settings.metric),
        "graph": _pick(args.graph, settings.graph),
        "k": _pick(args.k, settings.k),
        "weight": _pick(args.weight, settings.weight),
        "nperm": _pick(getattr(args, "nperm", None), settings.nperm),
        "alpha": _pick(getattr(args, "alpha", None), settings.alpha),
        "seed": _pick(getattr(args, "seed", None), settings.seed),
        "threads": getattr(args, "threads", None),
        "exhaustive": bool(getattr(args, "exhaustive", False)),
        "influence": _pick(getattr(args, "influence", None), 0),
    }
    stats = split_stats(getattr(args, "stat", None))
    if stats is not None:
        payload["stat"] = stats
    try:
        return RunConfig.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError("Invalid options.", details={"validation_errors": validation_items(exc.errors())}) from exc


@dataclass
class LoadedInputs:
    graph: SimilarityGraph
    distances: Optional[np.ndarray] = None
    edge_weights: Optional[np.ndarray] = None
    labels: Optional[LabelVector] = None


def load_inputs(cfg: RunConfig, *, require_labels: bool) -> LoadedInputs:
    raw_labels = io.read_labels_csv(cfg.labels, header=cfg.header) if cfg.labels else None

    distances = None
    if cfg.data:
        distances = graph_core.distance_matrix(io.read_matrix_csv(cfg.data, header=cfg.header), cfg.metric)
    elif cfg.dist:
        distances = graph_core.validate_distance_matrix(io.read_matrix_csv(cfg.dist, header=cfg.header))

    edge_weights = None
    if cfg.graph == "edgelist":
        node_count = distances.shape[0] if distances is not None else (
            raw_labels.size if raw_labels is not None else None
        )
        graph, edge_weights = io.read_edge_list(cfg.edges, node_count=node_count)
    else:
        graph = graph_core.build_graph(distances, cfg.graph, cfg.k)

    labels = None
    if raw_labels is not None:
        if raw_labels.size != graph.node_count:
            raise InvalidInputError(
                f"{cfg.labels}: {raw_labels.size} labels for {graph.node_count} observations."
            )
        labels = LabelVector.from_values(raw_labels, node_count=graph.node_count, require_both=require_labels)
    elif require_labels:
        raise ConfigError("Labels are required.")

    return LoadedInputs(graph=graph, distances=distances, edge_weights=edge_weights, labels=labels)


def weighted_graph(inputs: LoadedInputs, cfg: RunConfig) -> WeightedGraph:
    """Weights from the edge list when it has a weight column, otherwise --weight."""
    if inputs.edge_weights is not None:
        logger.info("Using the %d edge weights from %s; --weight is ignored", inputs.graph.n_edges, cfg.edges)
        return weight_from_values(inputs.graph, inputs.edge_weights, "file")
    return assign_weights(inputs.graph, cfg.weight)
