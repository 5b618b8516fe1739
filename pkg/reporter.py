"""
Deterministic report writers: JSON with sorted keys and floats pinned to
FLOAT_DIGITS significant digits, and pandas CSV tables.
"""
import dataclasses
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

import numpy as np
import pandas as pd

import config
from unified_logger import get_logger

logger = get_logger(__name__)

FLOAT_FORMAT = f"%.{config.FLOAT_DIGITS}g"


def _float(x: float) -> Union[float, str]:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(FLOAT_FORMAT % x)


def to_jsonable(obj: Any) -> Any:
    """Plain JSON types from report objects, numpy values and tuples."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return _float(float(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _float(obj.real), "im": _float(obj.imag)}
    if isinstance(obj, Path):
        return str(obj)
    if dataclasses.is_dataclass(obj):
        return to_jsonable(dataclasses.asdict(obj))
    return obj


def dumps_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(obj: Any, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(obj), encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path


def write_table(df: pd.DataFrame, path: Union[str, Path], fmt: str = "csv") -> Path:
    """One table as CSV (pandas, FLOAT_FORMAT) or as a JSON list of rows."""
    path = Path(path).with_suffix(f".{fmt}")
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(f"Wrote {path} ({len(df)} rows)")
        return path
    return write_json(df.to_dict(orient="records"), path)


def magnitude_grid(values: np.ndarray) -> pd.DataFrame:
    """|F(k, l)| as a long table with columns k, l, magnitude."""
    n = values.shape[0]
    k, l = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return pd.DataFrame({"k": k.ravel(), "l": l.ravel(), "magnitude": np.abs(values).ravel()})


def summarize(command: str, exit_code: int, payload: dict) -> str:
    """One-line human summary of a command result, logged and returned."""
    headline = {k: v for k, v in payload.items() if isinstance(v, (bool, int, float, str))}
    parts = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                      for k, v in sorted(headline.items()))
    line = f"{command}: exit {exit_code}" + (f" ({parts})" if parts else "")
    logger.info(line)
    return line
