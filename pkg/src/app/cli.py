"""
Command-line entry point.

  python -m src test --data d.csv --labels g.csv --graph kmst --k 5 --weight w1 --stat sr,mr
  python -m src diagnose --edges g.txt --graph edgelist
  python -m src simulate --config configs/null_calibration.json --out power.csv
  python -m src oracle-check --graphs 50 --seed 1

stdout carries only the JSON / CSV result (or the error payload); logs go to
stderr. Exit codes: 0 success, 2 usage/config error, 3 data error,
4 ill-conditioned graph, 5 oracle failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from ..errors import RGTestError
from ..utils.formatting import to_jsonable
from . import __version__
from .commands import CommandResult, diagnose, oracle, simulate, test
from .config import Settings, get_settings
from .schemas import ErrorDetail, ErrorResponse

logger = logging.getLogger(__name__)

COMMANDS = {
    "test": test.run,
    "diagnose": diagnose.run,
    "simulate": simulate.run,
    "oracle-check": oracle.run,
}


def _input_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("inputs")
    group.add_argument("--data", help="Observations CSV (one row per observation)")
    group.add_argument("--dist", help="Precomputed N x N distance-matrix CSV")
    group.add_argument("--edges", help="Edge list: 'i j' or 'i j w' per line")
    group.add_argument("--labels", help="Labels CSV: one 0 (sample X) or 1 (sample Y) per row")
    group.add_argument("--header", action="store_true", help="Input CSVs start with a header row")

    graph = parser.add_argument_group("graph")
    graph.add_argument("--metric", choices=["l1", "l2"], help="Distance for --data (default l2)")
    graph.add_argument("--graph", choices=["kmst", "knn", "edgelist"], help="Similarity graph (default kmst)")
    graph.add_argument("--k", type=int, help="k for kmst / knn (default 5)")
    graph.add_argument("--weight", choices=["w1", "w2", "w3", "none"], help="Edge weights (default w1)")


def _output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="Write the result here instead of stdout")
    parser.add_argument("--threads", type=int, help="Worker threads (default RGTEST_THREADS, else all cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rgtest", description="Hub-robust graph-based two-sample tests."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="Test whether two labeled samples share a distribution")
    _input_arguments(p_test)
    p_test.add_argument("--stat", help="Comma list of sr,mr,s,m (also z_diff,z_w); default sr,mr")
    p_test.add_argument("--nperm", type=int, help="Permutations (default 10000)")
    p_test.add_argument("--alpha", type=float, help="Significance level echoed in the output (default 0.05)")
    p_test.add_argument("--seed", type=int, help="Permutation seed (default 1)")
    p_test.add_argument("--exhaustive", action="store_true", help="Enumerate every labeling instead of sampling")
    p_test.add_argument("--influence", type=int, metavar="N", help="Leave-one-out p-values for the N highest-degree nodes")
    _output_arguments(p_test)

    p_diag = sub.add_parser("diagnose", help="Hub, condition-ratio and well-definedness report for a graph")
    _input_arguments(p_diag)
    _output_arguments(p_diag)

    p_sim = sub.add_parser("simulate", help="Monte Carlo power / calibration study from a JSON config")
    p_sim.add_argument("--config", required=True, help="SimConfig JSON file")
    p_sim.add_argument("--seed", type=int, help="Override the config's master seed")
    p_sim.add_argument("--trials", type=int, help="Override the config's trial count")
    p_sim.add_argument("--nperm", type=int, help="Override the config's permutations per test")
    p_sim.add_argument("--sweep", action="store_true", help="Run one scenario per gamma in sweep_gammas")
    p_sim.add_argument("--trials-out", dest="trials_out", help="Write per-trial records CSV here")
    _output_arguments(p_sim)

    p_oracle = sub.add_parser("oracle-check", help="Check null-moment formulas against enumeration")
    p_oracle.add_argument("--graphs", type=int, default=50, help="Random graphs to check (default 50)")
    p_oracle.add_argument("--seed", type=int, help="Seed for graph generation (default 1)")
    p_oracle.add_argument("--out", help="Write the report here instead of stdout")

    return parser


def configure_logging(settings: Settings) -> None:
    level = getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def error_payload(exc: RGTestError, settings: Settings) -> str:
    detail = ErrorDetail(
        type=exc.error_type,
        message=exc.message,
        details=to_jsonable(exc.details) if settings.expose_error_details else None,
    )
    return ErrorResponse(exit_code=exc.exit_code, error=detail).model_dump_json(indent=2) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    configure_logging(settings)

    try:
        result: CommandResult = COMMANDS[args.command](args, settings)
    except RGTestError as exc:
        logger.error("%s failed: %s", args.command, exc.message)
        sys.stdout.write(error_payload(exc, settings))
        return exc.exit_code
    except Exception as exc:
        logger.exception("Unexpected error in %s", args.command)
        detail = ErrorDetail(
            type="internal_error",
            message="An unexpected error occurred",
            details={"error": str(exc)} if settings.expose_error_details else None,
        )
        sys.stdout.write(ErrorResponse(exit_code=1, error=detail).model_dump_json(indent=2) + "\n")
        return 1

    _emit(result.text, getattr(args, "out", None))
    return result.exit_code
