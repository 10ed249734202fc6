"""Command handlers: turn a RunConfig into a result model and render it."""

import csv
import io
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

from pydantic import BaseModel, ValidationError

from app.core.config import settings
from app.core.errors import InputError, PolywittError
from app.models.schemas import (
    CharacterResult,
    CharExpResult,
    HilbertResult,
    HomDimTable,
    PresentationModel,
    RunConfig,
    VerifyResult,
)
from app.services import CharacterService, CharExpService, HomService, VerifyService

logger = logging.getLogger("polywitt.commands")


def save_debug_output(filename: str, data: Any):
    """Save debug output to the debug directory only if debug outputs are enabled."""
    if not settings.enable_debug_outputs:
        return None
    debug_dir = Path(settings.debug_dir)
    debug_dir.mkdir(parents=True, exist_ok=True)
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    filepath = debug_dir / f"{filename}_{timestamp}.json"
    with open(filepath, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
    logger.info(f"Debug output saved: {filepath}")
    return filepath


def load_presentation(path: str) -> PresentationModel:
    """Read a presentation JSON file; parse errors carry line and column."""
    if not path:
        raise InputError("this command needs --input PATH")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: {e.msg}", e.lineno, e.colno) from None
    try:
        return PresentationModel.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise InputError(f"{path}: {problems}") from None


# ---------- Handlers ----------

def cmd_homdim(config: RunConfig) -> HomDimTable:
    size = 3 if config.cap is None else config.cap
    return HomService().hom_table(config.operad, size, oracle=config.oracle)


def cmd_char(config: RunConfig) -> CharacterResult:
    return CharacterService(config.cap).character(load_presentation(config.input), config.D)


def cmd_hilbert(config: RunConfig) -> HilbertResult:
    n = 1 if config.n is None else config.n
    return CharacterService(config.cap).hilbert(load_presentation(config.input), n, config.D, config.method)


def cmd_verify(config: RunConfig) -> VerifyResult:
    if not config.scenario:
        raise InputError("verify needs a scenario name or 'all'")
    return VerifyService().verify(config.scenario)


def cmd_charexp(config: RunConfig) -> CharExpResult:
    D = settings.char_degree if config.D is None else config.D
    return CharExpService().expansion(config.A, config.r, config.k, D, config.n)


HANDLERS: Dict[str, Callable[[RunConfig], BaseModel]] = {
    "homdim": cmd_homdim,
    "char": cmd_char,
    "hilbert": cmd_hilbert,
    "verify": cmd_verify,
    "charexp": cmd_charexp,
}


# ---------- Rendering ----------

def _rows(result: BaseModel) -> List[List[Any]]:
    """Header row followed by data rows, for the csv and table formats."""
    if isinstance(result, HomDimTable):
        rows = [["n", "m", "dimension", "oracle", "oracle_agrees"]]
        rows += [[r.n, r.m, r.dimension, "" if r.oracle is None else r.oracle,
                  "" if r.oracle_agrees is None else r.oracle_agrees] for r in result.rows]
        return rows
    if isinstance(result, CharacterResult):
        rows = [["partition", "coefficient"]]
        rows += [["(" + ",".join(map(str, t.partition)) + ")", t.coeff] for t in result.character.terms]
        return rows
    if isinstance(result, HilbertResult):
        rows = [["degree", "coefficient"]]
        rows += [[d, c] for d, c in enumerate(result.coefficients)]
        fit = result.fit.form.text if result.fit.form is not None else result.fit.message
        rows.append(["fit", fit])
        return rows
    if isinstance(result, VerifyResult):
        return [["scenario", "passed"]] + [[s.name, s.passed] for s in result.scenarios]
    if isinstance(result, CharExpResult):
        rows = [["part", "E-monomial", "terms"]]
        rows += [["e_A", "", len(result.e_A.terms)]]
        rows += [["rhs", "(" + ",".join(map(str, t.nu)) + ")", len(t.series.terms) if t.series else 0]
                 for t in result.rhs]
        rows += [["exp", "(" + ",".join(map(str, t.nu)) + ")", len(t.symfunc.terms) if t.symfunc else 0]
                 for t in result.exponential]
        return rows
    raise TypeError(f"no tabular layout for {type(result).__name__}")


def _table(rows: Sequence[Sequence[Any]]) -> str:
    cells = [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells if i < len(row)) for i in range(max(len(r) for r in cells))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render(result: BaseModel, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(_rows(result))
        return buffer.getvalue()
    return _table(_rows(result))


def run(config: RunConfig) -> BaseModel:
    """Dispatch one command and save its debug record."""
    try:
        result = HANDLERS[config.command](config)
        save_debug_output(config.command, {
            "config": config.model_dump(mode="json"),
            "result": result.model_dump(mode="json"),
        })
        return result
    except PolywittError as e:
        save_debug_output(f"{config.command}_error", {
            "config": config.model_dump(mode="json"),
            "error": e.detail,
            "exit_code": e.exit_code,
        })
        raise
