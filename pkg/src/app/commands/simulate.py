"""
`simulate`: run a SimConfig power study (or the hub sweep) and emit a CSV table.

The CSV starts with one `# config: {...}` comment line echoing the effective
configuration, followed by the header
`scenario,statistic,weight,rejections,trials,median_dmax`.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
from pathlib import Path

from pydantic import ValidationError

from ...errors import ConfigError
from ...models.simulation import PowerTable
from ...services.simulation import hub_sweep, power_study
from ...utils.formatting import csv_number, to_jsonable
from ...utils.io import write_csv
from ..config import Settings
from ..schemas import SimConfig, validation_items
from . import CommandResult

logger = logging.getLogger(__name__)

POWER_COLUMNS = ["scenario", "statistic", "weight", "rejections", "trials", "median_dmax"]


def load_sim_config(path: str, overrides: dict) -> SimConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror or exc})") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SimConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(
            f"{path}: invalid simulation config ({exc.error_count()} errors)",
            details={"validation_errors": validation_items(exc.errors())},
        ) from exc


def _csv_text(config: SimConfig, table: PowerTable) -> str:
    echo = json.dumps(to_jsonable(config.model_dump()), separators=(",", ":"), sort_keys=True)
    buffer = io.StringIO()
    buffer.write(f"# config: {echo}\n")
    rows = [
        [csv_number(v) for v in (row.scenario, row.statistic, row.weight, row.rejections, row.trials, row.median_dmax)]
        for row in table.rows
    ]
    write_csv(buffer, POWER_COLUMNS, rows)
    return buffer.getvalue()


def _trial_rows(table: PowerTable) -> tuple[list[str], list[list[str]]]:
    p_keys = sorted({k for r in table.records for k in r.p_values})
    weights = sorted({k for r in table.records for k in r.sigma11})
    header = (
        ["scenario", "trial", "status", "d_max", "p95_degree"]
        + [f"p_{k}" for k in p_keys]
        + [f"sigma11_{w}" for w in weights]
        + [f"sigma22_{w}" for w in weights]
        + ["error_message"]
    )
    rows = []
    for r in table.records:
        rows.append(
            [csv_number(v) for v in (r.scenario, r.trial, r.status, r.d_max, r.p95_degree)]
            + [csv_number(r.p_values.get(k)) for k in p_keys]
            + [csv_number(r.sigma11.get(w)) for w in weights]
            + [csv_number(r.sigma22.get(w)) for w in weights]
            + [r.error_message or ""]
        )
    return header, rows


def run(args: argparse.Namespace, settings: Settings) -> CommandResult:
    config = load_sim_config(args.config, {"seed": args.seed, "trials": args.trials, "nperm": args.nperm})
    if args.sweep:
        table = hub_sweep(config, threads=args.threads)
    else:
        table = power_study(config, threads=args.threads)

    result = CommandResult(text=_csv_text(config, table))
    if args.trials_out:
        header, rows = _trial_rows(table)
        write_csv(args.trials_out, header, rows)
        logger.info("Wrote %d trial records to %s", len(rows), args.trials_out)
    return result
