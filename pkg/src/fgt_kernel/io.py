"""Income file ingestion and report serialisation."""

import json
import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .distributions import IncomeSample
from .exceptions import FgtError

OUTPUT_DIR_ENV = "FGT_KERNEL_OUTPUT_DIR"

_SPLIT = re.compile(r"[,;\t ]+")


class IncomeFileError(FgtError):
    pass


@dataclass
class IncomeFile:
    path: Path
    values: list[float]
    errors: list[str] = field(default_factory=list)

    @property
    def sample(self):
        return IncomeSample(np.asarray(self.values, dtype=float))


def read_income_file(path, header=False, column=0, delimiter=None):
    """Parse one income per row, collecting per-row errors.

    Parameters
    ----------
    path : str or Path
    header : bool
        Skip the first non-blank line.
    column : int
        Zero-based column holding the income.
    delimiter : str, optional
        Field separator.  By default commas, semicolons, tabs and runs of
        spaces all separate fields.

    Raises
    ------
    IncomeFileError
        Missing/unreadable file, or no valid row at all.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise IncomeFileError(f"cannot read {path}: {exc.strerror or exc}") from None

    values, errors = [], []
    header_pending = header
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if header_pending:
            header_pending = False
            continue
        fields = line.split(delimiter) if delimiter else _SPLIT.split(line)
        if column >= len(fields):
            errors.append(f"missing column {column} at line {lineno}")
            continue
        token = fields[column].strip().strip('"').strip("'")
        try:
            x = float(token)
        except ValueError:
            errors.append(f"unparseable value {token!r} at line {lineno}")
            continue
        if not math.isfinite(x):
            errors.append(f"non-finite income at line {lineno}")
        elif x < 0:
            errors.append(f"negative income at line {lineno}")
        else:
            values.append(x)

    if not values:
        detail = f" ({errors[0]})" if errors else ""
        raise IncomeFileError(f"no valid income rows in {path}{detail}")
    return IncomeFile(path, values, errors)


def load_incomes(path, header=False, column=0, delimiter=None, strict=False):
    """Read an income file into an :class:`IncomeSample`.

    Rows with errors are skipped unless ``strict`` is set, in which case
    the first row error is raised.
    """
    parsed = read_income_file(path, header=header, column=column, delimiter=delimiter)
    if strict and parsed.errors:
        raise IncomeFileError(parsed.errors[0])
    return parsed.sample


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dumps(obj):
    """JSON text; floats keep their shortest round-trip repr, NaN becomes null."""
    return json.dumps(_clean(obj), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def resolve_output(path):
    """Relative output paths go under ``$FGT_KERNEL_OUTPUT_DIR`` when it is set."""
    path = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_text(path, text):
    path = resolve_output(path)
    path.write_text(text, encoding="utf-8")
    return path
