"""Command-line entry point for polywitt."""

import argparse
import logging
import os
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.api.commands import render, run
from app.core.config import settings
from app.core.errors import PolywittError
from app.models.schemas import RunConfig

logger = logging.getLogger("polywitt")


def configure_logging() -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.enable_debug_outputs:
        os.makedirs(settings.debug_dir, exist_ok=True)
        handlers.append(logging.FileHandler(os.path.join(settings.debug_dir, "polywitt.log"), encoding="utf-8"))
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
        handlers=handlers,
    )


def _parts(text: str) -> List[int]:
    return [int(p) for p in text.split(",") if p.strip()] if text else []


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--operad", default="com", help="trivial, com, comnu or as")
    common.add_argument("--degree", "-D", type=int, dest="D", help="truncation degree")
    common.add_argument("--vars", "-n", type=int, dest="n", help="number of variables")
    common.add_argument("--cap", type=int, help="table size for homdim, enumeration cap otherwise")
    common.add_argument("--format", default=settings.default_format, choices=["json", "csv", "table"])
    common.add_argument("--seed", type=int, default=settings.default_seed)
    common.add_argument("--input", help="presentation JSON file")

    parser = argparse.ArgumentParser(prog="polywitt", description=f"{settings.app_name} {settings.app_version}")
    sub = parser.add_subparsers(dest="command", required=True)
    homdim = sub.add_parser("homdim", parents=[common], help="dim Hom_W([n],[m]) table")
    homdim.add_argument("--oracle", action="store_true", help="add the Schur-Weyl cross-check for n, m <= 3")
    sub.add_parser("char", parents=[common], help="formal character of a presented module")
    hilbert = sub.add_parser("hilbert", parents=[common], help="Hilbert series and rational fit")
    hilbert.add_argument("--method", default="specialize", choices=["specialize", "character"])
    verify = sub.add_parser("verify", parents=[common], help="run a named scenario, or all")
    verify.add_argument("scenario", choices=list(settings.scenario_names) + ["all"])
    charexp = sub.add_parser("charexp", parents=[common], help="e^A and the nilpotent expansion")
    charexp.add_argument("--A", dest="A", type=_parts, default=[], help="partition A, e.g. 2,1")
    charexp.add_argument("--r", type=int, default=1)
    charexp.add_argument("--k", type=int, default=0)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the process exit code."""
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    fields = {k: v for k, v in vars(args).items() if v is not None}
    try:
        config = RunConfig(**fields)
    except ValidationError as e:
        logger.error(f"invalid arguments: {e}")
        return 2

    try:
        result = run(config)
    except PolywittError as e:
        logger.error(f"{config.command} failed: {e.detail}")
        return e.exit_code
    except Exception as e:
        logger.error(f"Unhandled exception: {e}", exc_info=True)
        return 1

    sys.stdout.write(render(result, config.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
