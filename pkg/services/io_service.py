"""
I/O service - result files shared by all command plugins.

CSV files carry a header row and 17-significant-digit floats, so every double survives a
write/read cycle unchanged. JSON files are written with sorted keys for byte-stable output.
"""
import json
import math
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from solvers.errors import InputError
from solvers.stepfn import StepFn

import logging

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _jsonable(obj: Any) -> Any:
    """numpy-скаляры и массивы -> стандартные типы; NaN/inf -> null"""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        return val if math.isfinite(val) else None
    return obj


def ensure_dir(path: Path) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_frame(df: pd.DataFrame, path: Path) -> Path:
    """Пишет DataFrame в CSV без индекса, с точным представлением чисел"""
    path = Path(path)
    ensure_dir(path.parent)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.debug(f"CSV записан: {path.name} ({len(df)} строк)")
    return path


def read_frame(path: Path) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise InputError("CSV file not found", path=str(path))
    try:
        return pd.read_csv(path, float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise InputError(f"malformed CSV: {e}", path=str(path))


def write_json(payload: Dict[str, Any], path: Path) -> Path:
    path = Path(path)
    ensure_dir(path.parent)
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True, ensure_ascii=False)
    path.write_text(text + "\n", encoding="utf-8")
    logger.debug(f"JSON записан: {path.name}")
    return path


def read_json(path: Path) -> Dict[str, Any]:
    path = Path(path)
    if not path.exists():
        raise InputError("file not found", path=str(path))
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise InputError(f"malformed JSON: {e}", path=str(path))
    if not isinstance(payload, dict):
        raise InputError("top-level JSON value must be an object", path=str(path))
    return payload


def write_stepfn(fn: StepFn, path: Path) -> Path:
    """StepFnFile: breakpoints, values и (для отрезка) domain"""
    return write_json(fn.to_dict(), path)


def read_stepfn(path: Path) -> StepFn:
    return StepFn.from_dict(read_json(path))


def stepfn_frame(fn: StepFn) -> pd.DataFrame:
    """Куски StepFn таблицей (lo, hi, value) для отчётов"""
    lo, hi, vals = fn.domain_pieces()
    return pd.DataFrame({"lo": lo, "hi": hi, "value": vals})
