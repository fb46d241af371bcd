import json
import logging
import os
import tempfile
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence

import json5
import numpy as np

import config
from utils.errors import DataError, DomainError

logger = logging.getLogger(__name__)

REPORT_FORMAT_TAG = "# mink-report v1"


def atomic_write_text(path: str, text: str) -> str:
    """
    Write text so that the destination either holds all of it or is untouched.

    Args:
        path (str): Destination file; its directory must exist.
        text (str): Full file content.

    Returns:
        str: The path written.
    """
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise OSError(f"output directory does not exist: {directory}")
    fd, tmp_path = tempfile.mkstemp(prefix=".mink-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    return path


def format_value(value: Any) -> str:
    if value is None:
        return "nan"
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def render_tsv(
    command: str,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    params: Optional[Dict[str, Any]] = None,
    cache_sha256: Optional[str] = None,
) -> str:
    """
    Render a report table with its provenance header.

    The header lists the format tag, command, version, cache hash and parameters, one per
    ``#`` line; the last ``#`` line holds the tab-separated column names.
    """
    lines = [
        REPORT_FORMAT_TAG,
        f"# command={command}",
        f"# version={config.VERSION}",
        f"# cache_sha256={cache_sha256 or 'none'}",
    ]
    for key in sorted(params or {}):
        lines.append(f"# {key}={format_value(params[key])}")
    lines.append("# " + "\t".join(columns))
    for row in rows:
        if len(row) != len(columns):
            raise DataError(f"row of width {len(row)} under {len(columns)} columns")
        lines.append("\t".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return value


def render_json(summary: Dict[str, Any]) -> str:
    """Sorted keys, two-space indentation; NaN and infinities become null."""
    return json.dumps(_jsonable(summary), sort_keys=True, indent=2, allow_nan=False) + "\n"


def emit(text: str, out: Optional[str]) -> None:
    """Write a rendered report to ``out``, or to stdout when no path is given."""
    if out is None or out == "-":
        print(text, end="")
        return
    atomic_write_text(out, text)
    logger.info(f"Wrote report to {out}")


def parse_rational(text: str) -> Fraction:
    """
    Parse "p/q", an integer or a decimal literal into an exact Fraction.

    Decimal literals are taken at face value ("0.1" is 1/10).
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"cannot read '{text}' as a rational number: {e}") from e


def parse_grid(spec: str) -> np.ndarray:
    """
    Parse "start:stop:step" into the points start, start+step, ... <= stop.

    Args:
        spec (str): Grid description with step > 0 and start <= stop.

    Returns:
        np.ndarray: Grid points; stop is included when it falls on the grid.
    """
    parts = spec.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid '{spec}' is not of the form start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as e:
        raise DomainError(f"grid '{spec}' has a non-numeric field: {e}") from e
    if step <= 0:
        raise DomainError(f"grid step must be positive, got {step}")
    if stop < start:
        raise DomainError(f"grid stop {stop} is below start {start}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def parse_int_list(spec: str) -> List[int]:
    """
    Parse "8", "8,16,32" or "a:b" (inclusive) or "a:b:step" into a list of integers.
    """
    values: List[int] = []
    for chunk in str(spec).split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            if ":" in chunk:
                pieces = [int(p) for p in chunk.split(":")]
                if len(pieces) == 2:
                    pieces.append(1)
                if len(pieces) != 3 or pieces[2] <= 0:
                    raise DomainError(f"range '{chunk}' needs the form a:b or a:b:step with step > 0")
                values.extend(range(pieces[0], pieces[1] + 1, pieces[2]))
            else:
                values.append(int(chunk))
        except ValueError as e:
            raise DomainError(f"cannot read '{chunk}' as integers: {e}") from e
    if not values:
        raise DomainError(f"no integers in '{spec}'")
    return values


def load_params_file(path: str) -> Dict[str, Any]:
    """
    Read a JSON5 parameter file (comments and trailing commas allowed).

    Returns:
        dict: Keys with dashes normalized to underscores.
    """
    with open(path, "r", encoding="utf-8") as handle:
        data = json5.load(handle)
    if not isinstance(data, dict):
        raise DataError(f"parameter file {path} must hold an object, found {type(data).__name__}")
    logger.info(f"Loaded {len(data)} parameters from {path}")
    return {str(k).replace("-", "_"): v for k, v in data.items()}
