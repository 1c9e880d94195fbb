"""
`diagnose`: hub structure, condition ratios and well-definedness of a graph.

Labels are optional; without them the sample sizes are taken as balanced
(n1 = floor(N/2)).
"""

from __future__ import annotations

import argparse

from ...services import graph_core
from ...services.inference import condition_report
from ...services.weighting import check_lower_bound, well_definedness
from ...utils.formatting import dumps
from ..config import Settings
from . import CommandResult
from .inputs import load_inputs, load_run_config, weighted_graph


def run(args: argparse.Namespace, settings: Settings) -> CommandResult:
    cfg = load_run_config(args, settings, "diagnose")
    inputs = load_inputs(cfg, require_labels=False)
    Gw = weighted_graph(inputs, cfg)

    N = inputs.graph.node_count
    if inputs.labels is not None:
        n1, n2 = inputs.labels.n1, inputs.labels.n2
    else:
        n1 = N // 2
        n2 = N - n1

    payload = {
        "config": cfg.model_dump(),
        "n1": n1,
        "n2": n2,
        "graph": inputs.graph.to_dict(),
        "weight": Gw.weight_name,
        "hubs": graph_core.hub_report(inputs.graph).to_dict(),
        "degree_distribution": [list(pair) for pair in graph_core.degree_distribution(inputs.graph)],
        "conditions": condition_report(Gw, n1).to_dict(),
        "well_defined": well_definedness(Gw, n1, n2).to_dict(),
        "lower_bound_ratio": check_lower_bound(Gw, settings.lower_bound_warn),
    }
    return CommandResult(text=dumps(payload))
