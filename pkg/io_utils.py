"""
JSON wire formats for signals, windows, phase-space arrays, lattices, window
bundles and norm specs, plus loading and schema validation of run configs.
"""
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Optional, Union

import jsonschema
import numpy as np

import config
from errors import ConfigError, DimensionError
from gabor import WindowBundle
from get_signals import EnsembleSpec, symbol_from_spec
from lattice import Lattice, full_lattice, lattice_from_generators, separable_lattice, trivial_lattice
from modnorm import NormSpec, Weight, constant_weight
from phase_space import Signal, TFMatrix, Window, box_window, delta_window, gaussian_window, make_window
from unified_logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


# --- WIRE TYPES ---

def _complex_payload(values: np.ndarray) -> dict:
    flat = np.asarray(values).reshape(-1)
    return {"re": [float(x) for x in flat.real], "im": [float(x) for x in flat.imag]}


def _complex_values(obj: dict) -> np.ndarray:
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", [0.0] * len(obj["re"])), dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed complex array: {e}") from e
    if re.shape != im.shape:
        raise DimensionError(f"re / im lengths differ: {re.shape} vs {im.shape}")
    return re + 1j * im


def signal_to_dict(f: Signal) -> dict:
    out = {"n": f.n, **_complex_payload(f.values)}
    if isinstance(f, Window):
        out["normalization"] = f.normalization
    return out


def signal_from_dict(obj: dict) -> Signal:
    values = _complex_values(obj)
    if "n" in obj and obj["n"] != values.shape[0]:
        raise DimensionError(f"declared n={obj['n']} but {values.shape[0]} samples given")
    if "normalization" in obj:
        try:
            return Window(values, normalization=obj["normalization"])
        except ValueError as e:
            raise ConfigError(f"bad window: {e}") from e
    return Signal(values)


def tfmatrix_to_dict(F: TFMatrix) -> dict:
    """Row-major (k, l) flattening."""
    return {"n": F.n, **_complex_payload(F.values)}


def tfmatrix_from_dict(obj: dict) -> TFMatrix:
    values = _complex_values(obj)
    n = obj.get("n") or int(round(math.sqrt(values.shape[0])))
    if n * n != values.shape[0]:
        raise DimensionError(f"{values.shape[0]} entries do not form an {n} x {n} array")
    return TFMatrix(values.reshape(n, n))


def lattice_to_dict(lattice: Lattice) -> dict:
    return {"n": lattice.n, "generators": [list(g) for g in lattice.generators]}


def lattice_from_dict(obj: dict) -> Lattice:
    return lattice_from_generators(obj["n"], [tuple(g) for g in obj["generators"]])


def bundle_to_list(bundle: WindowBundle) -> List[dict]:
    return [signal_to_dict(w) for w in bundle.windows]


def bundle_from_list(items: List[dict]) -> WindowBundle:
    return WindowBundle(tuple(signal_from_dict(item) for item in items))


def _exponent(x) -> float:
    return math.inf if x == "inf" else float(x)


def norm_spec_from_dict(obj: dict) -> NormSpec:
    def weight(w: Optional[dict]) -> Weight:
        if not w:
            return constant_weight()
        return Weight(w["kind"], tuple(w.get("params", ())))

    try:
        return NormSpec(_exponent(obj.get("p", 2)), _exponent(obj.get("q", 2)),
                        weight(obj.get("m")), weight(obj.get("nu")))
    except (ValueError, KeyError) as e:
        raise ConfigError(f"invalid norm spec: {e}") from e


def read_json(path: PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as e:
        raise ConfigError(f"file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e


# --- RUN CONFIG ---

_EXPONENT = {"oneOf": [{"type": "number", "minimum": 1}, {"const": "inf"}]}
_WEIGHT = {
    "type": "object",
    "properties": {"kind": {"enum": ["constant", "polynomial", "exponential"]},
                   "params": {"type": "array", "items": {"type": "number"}}},
    "required": ["kind"],
    "additionalProperties": False,
}

RUN_CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "window": {
            "type": "object",
            "properties": {"kind": {"enum": ["gaussian", "box", "delta", "file"]},
                           "width": {"type": "integer", "minimum": 1},
                           "path": {"type": "string"},
                           "normalize": {"type": "boolean"}},
            "required": ["kind"],
            "additionalProperties": False,
        },
        "lattice": {
            "type": "object",
            "properties": {"kind": {"enum": ["separable", "generators", "full", "trivial"]},
                           "a": {"type": "integer", "minimum": 1},
                           "b": {"type": "integer", "minimum": 1},
                           "generators": {"type": "array",
                                          "items": {"type": "array", "items": {"type": "integer"},
                                                    "minItems": 2, "maxItems": 2}}},
            "required": ["kind"],
            "additionalProperties": False,
        },
        "symbol": {
            "type": "object",
            "properties": {"kind": {"enum": ["indicator-box", "gaussian-bump", "fundamental-cell",
                                             "point-mass", "file", "constant"]},
                           "k0": {"type": "integer"}, "l0": {"type": "integer"},
                           "width": {"type": "number", "exclusiveMinimum": 0},
                           "height": {"type": "integer", "minimum": 1},
                           "center": {"type": "array", "items": {"type": "number"},
                                      "minItems": 2, "maxItems": 2},
                           "k": {"type": "integer"}, "l": {"type": "integer"},
                           "value": {"type": "number"},
                           "path": {"type": "string"}},
            "required": ["kind"],
            "additionalProperties": False,
        },
        "norm": {
            "type": "object",
            "properties": {"p": _EXPONENT, "q": _EXPONENT, "m": _WEIGHT, "nu": _WEIGHT},
            "additionalProperties": False,
        },
        "ensemble": {
            "type": "object",
            "properties": {"count": {"type": "integer", "minimum": 0},
                           "seed": {"type": "integer", "minimum": 0},
                           "mix": {"type": "array", "minItems": 1,
                                   "items": {"enum": ["noise", "gaussian", "chirp", "spike"]}}},
            "additionalProperties": False,
        },
        "signals": {
            "type": "array",
            "items": {"oneOf": [
                {"type": "string"},
                {"type": "object",
                 "properties": {"n": {"type": "integer"},
                                "re": {"type": "array", "items": {"type": "number"}},
                                "im": {"type": "array", "items": {"type": "number"}}},
                 "required": ["re"],
                 "additionalProperties": False},
            ]},
        },
        "options": {
            "type": "object",
            "properties": {
                "strategy": {"enum": ["first", "conditioned"]},
                "target": {"type": "number", "exclusiveMinimum": 1},
                "block": {"type": "integer", "minimum": 1},
                "compare": {"enum": ["localization", "coefficient", "window"]},
                "window2": {"$ref": "#/properties/window"},
                "dual": {"enum": ["canonical", "zero"]},
                "min_size": {"type": "integer", "minimum": 1},
                "csv_grid": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
    },
    "required": ["n"],
    "additionalProperties": False,
}


@dataclass
class RunConfig:
    """A validated run config; relative paths resolve against `base_dir`."""
    n: int
    window: dict = field(default_factory=lambda: {"kind": "gaussian"})
    lattice: dict = field(default_factory=lambda: {"kind": "full"})
    symbol: dict = field(default_factory=lambda: {"kind": "fundamental-cell"})
    norm: dict = field(default_factory=dict)
    ensemble: dict = field(default_factory=dict)
    signals: list = field(default_factory=list)
    options: dict = field(default_factory=dict)
    base_dir: Path = field(default_factory=Path.cwd)

    @property
    def seed(self) -> int:
        return int(self.ensemble.get("seed", config.DEFAULT_SEED))

    def resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p


def validate_run_config(raw: Any) -> None:
    try:
        jsonschema.validate(raw, RUN_CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(x) for x in e.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {e.message}") from e


def load_run_config(path: PathLike, seed: Optional[int] = None) -> RunConfig:
    """Reads and validates a run config; `seed` overrides ensemble.seed."""
    raw = read_json(path)
    validate_run_config(raw)
    cfg = RunConfig(base_dir=Path(path).resolve().parent, **raw)
    if seed is not None:
        cfg.ensemble = {**cfg.ensemble, "seed": seed}
    logger.info(f"Loaded config {path} (N={cfg.n}, seed={cfg.seed})")
    return cfg


# --- BUILDERS ---

def build_window(cfg: RunConfig, spec: Optional[dict] = None) -> Window:
    spec = cfg.window if spec is None else spec
    kind, n = spec["kind"], cfg.n
    if kind == "gaussian":
        window = gaussian_window(n)
    elif kind == "box":
        if "width" not in spec:
            raise ConfigError("box window needs a width")
        window = box_window(n, spec["width"])
    elif kind == "delta":
        window = delta_window(n)
    else:
        if "path" not in spec:
            raise ConfigError("file window needs a path")
        window = signal_from_dict(read_json(cfg.resolve(spec["path"])))
        if window.n != n:
            raise DimensionError(f"window file has N={window.n}, config says N={n}")
    if spec.get("normalize", True) and not window.is_zero():
        return make_window(window.values, normalize=True)
    return Window(window.values)


def build_lattice(cfg: RunConfig) -> Lattice:
    spec, n = cfg.lattice, cfg.n
    kind = spec["kind"]
    if kind == "separable":
        if "a" not in spec or "b" not in spec:
            raise ConfigError("separable lattice needs a and b")
        return separable_lattice(n, spec["a"], spec["b"])
    if kind == "generators":
        return lattice_from_generators(n, [tuple(g) for g in spec.get("generators", [])])
    if kind == "full":
        return full_lattice(n)
    return trivial_lattice(n)


def build_symbol(cfg: RunConfig, lattice: Lattice) -> np.ndarray:
    spec = cfg.symbol
    if spec["kind"] == "file":
        if "path" not in spec:
            raise ConfigError("file symbol needs a path")
        sigma = tfmatrix_from_dict(read_json(cfg.resolve(spec["path"])))
        if sigma.n != cfg.n:
            raise DimensionError(f"symbol file has N={sigma.n}, config says N={cfg.n}")
        return sigma.values
    try:
        return symbol_from_spec(spec, cfg.n, lattice)
    except KeyError as e:
        raise ConfigError(f"symbol '{spec['kind']}' is missing {e}") from e


def build_norm_spec(cfg: RunConfig) -> NormSpec:
    return norm_spec_from_dict(cfg.norm)


def build_ensemble(cfg: RunConfig) -> EnsembleSpec:
    mix = tuple(cfg.ensemble.get("mix", config.ENSEMBLE_MIX))
    return EnsembleSpec(cfg.n, int(cfg.ensemble.get("count", config.ENSEMBLE_COUNT)), mix)


def build_signals(cfg: RunConfig) -> List[Signal]:
    signals = []
    for item in cfg.signals:
        f = signal_from_dict(read_json(cfg.resolve(item)) if isinstance(item, str) else item)
        if f.n != cfg.n:
            raise DimensionError(f"signal has N={f.n}, config says N={cfg.n}")
        signals.append(Signal(f.values))
    return signals
