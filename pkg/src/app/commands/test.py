"""
`test`: run the requested statistics on one labeled dataset.
"""

from __future__ import annotations

import argparse
import logging

from ...services import graph_core
from ...services.inference import condition_report, influence_analysis, run_test
from ...services.weighting import check_lower_bound, well_definedness
from ...utils.formatting import dumps
from ..config import Settings
from . import CommandResult
from .inputs import load_inputs, load_run_config, weighted_graph

logger = logging.getLogger(__name__)


def run(args: argparse.Namespace, settings: Settings) -> CommandResult:
    cfg = load_run_config(args, settings, "test")
    inputs = load_inputs(cfg, require_labels=True)
    labels = inputs.labels
    Gw = weighted_graph(inputs, cfg)

    ratio = check_lower_bound(Gw, settings.lower_bound_warn)
    well_defined = well_definedness(Gw, labels.n1, labels.n2)
    hubs = graph_core.hub_report(inputs.graph)

    reports = run_test(
        Gw,
        labels,
        cfg.stat,
        cfg.nperm,
        cfg.seed,
        threads=cfg.threads,
        exhaustive=cfg.exhaustive,
    )

    payload = {
        "config": cfg.model_dump(),
        "results": [r.to_dict() for r in reports],
        "hubs": hubs.to_dict(),
        "conditions": condition_report(Gw, labels.n1).to_dict(),
        "well_defined": well_defined.to_dict(),
        "lower_bound_ratio": ratio,
    }
    if cfg.influence:
        rows = influence_analysis(
            inputs.graph,
            labels,
            cfg.weight,
            cfg.stat,
            cfg.influence,
            cfg.nperm,
            cfg.seed,
            distances=inputs.distances,
            edge_weights=inputs.edge_weights,
            threads=cfg.threads,
        )
        payload["influence"] = [row.to_dict() for row in rows]
    return CommandResult(text=dumps(payload))
