import json
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

import reporter
from errors import ConfigError, DimensionError, LatticeError
from gabor import bundle_of
from io_utils import (RunConfig, build_lattice, build_signals, build_symbol, build_window, bundle_from_list,
                      bundle_to_list, lattice_from_dict, lattice_to_dict, load_run_config, norm_spec_from_dict,
                      read_json, signal_from_dict, signal_to_dict, tfmatrix_from_dict, tfmatrix_to_dict,
                      validate_run_config)
from lattice import lattice_from_generators, separable_lattice
from modnorm import NormSpec, polynomial_weight
from phase_space import Signal, TFMatrix, Window, gaussian_window, random_signal


# --- WIRE TYPES ---

def test_window_keeps_its_normalization_tag(rng):
    phi = gaussian_window(6)
    back = signal_from_dict(signal_to_dict(phi))
    assert isinstance(back, Window) and back.normalization == "unit"
    assert back == phi
    f = random_signal(5, rng)
    plain = signal_from_dict(json.loads(json.dumps(signal_to_dict(f))))
    assert not isinstance(plain, Window) and plain == f


def test_malformed_signals():
    with pytest.raises(DimensionError):
        signal_from_dict({"re": [1.0, 2.0], "im": [0.0]})
    with pytest.raises(DimensionError):
        signal_from_dict({"n": 3, "re": [1.0, 2.0]})
    with pytest.raises(ConfigError):
        signal_from_dict({"im": [1.0]})
    assert signal_from_dict({"re": [1.0, 2.0]}) == Signal(np.array([1.0, 2.0]))


def test_bad_window_tags_are_config_errors():
    with pytest.raises(ConfigError):
        signal_from_dict({"re": [1.0, 1.0, 0.0, 0.0], "normalization": "unit"})
    with pytest.raises(ConfigError):
        signal_from_dict({"re": [1.0, 0.0], "normalization": "tight"})
    raw = signal_from_dict({"re": [1.0, 1.0, 0.0, 0.0], "normalization": "raw"})
    assert isinstance(raw, Window) and raw.norm2() == pytest.approx(np.sqrt(2))


def test_tfmatrix_is_row_major(rng):
    F = TFMatrix(np.arange(9).reshape(3, 3) + 1j)
    d = tfmatrix_to_dict(F)
    assert d["re"][:3] == [0.0, 1.0, 2.0]
    assert np.array_equal(tfmatrix_from_dict(d).values, F.values)
    with pytest.raises(DimensionError):
        tfmatrix_from_dict({"re": [1.0] * 5})


def test_lattice_and_bundle_wire_format(rng):
    lat = lattice_from_generators(4, [(1, 2)])
    assert lattice_from_dict(json.loads(json.dumps(lattice_to_dict(lat)))) == lat
    assert lattice_from_dict(lattice_to_dict(separable_lattice(8, 2, 4))) == separable_lattice(8, 2, 4)
    bundle = bundle_of(gaussian_window(4), Window(np.array([1.0, 0, 0, 0])))
    back = bundle_from_list(bundle_to_list(bundle))
    assert back.count == 2 and all(a == b for a, b in zip(back.windows, bundle.windows))


def test_norm_spec_from_dict():
    spec = norm_spec_from_dict({"p": "inf", "q": 1, "m": {"kind": "polynomial", "params": [1]}})
    assert spec == NormSpec(float("inf"), 1.0, m=polynomial_weight(1))
    assert norm_spec_from_dict({}) == NormSpec()
    with pytest.raises(ConfigError):
        norm_spec_from_dict({"m": {"kind": "polynomial"}})
    with pytest.raises(ConfigError):
        norm_spec_from_dict({"p": 0.5})


def test_read_json_errors(tmp_path):
    with pytest.raises(ConfigError):
        read_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        read_json(bad)


# --- RUN CONFIG ---

@pytest.mark.parametrize("raw", [
    {},
    {"n": 0},
    {"n": 4, "colour": "blue"},
    {"n": 4, "window": {"kind": "hann"}},
    {"n": 4, "norm": {"p": 0.5}},
    {"n": 4, "norm": {"q": "infinity"}},
    {"n": 4, "lattice": {"kind": "separable", "a": 2, "b": 2, "c": 1}},
    {"n": 4, "options": {"target": 1}},
    {"n": 4, "ensemble": {"seed": -1}},
])
def test_schema_rejects(raw):
    with pytest.raises(ConfigError):
        validate_run_config(raw)


def test_schema_accepts_full_config():
    validate_run_config({
        "n": 8,
        "window": {"kind": "box", "width": 3, "normalize": False},
        "lattice": {"kind": "generators", "generators": [[1, 2], [0, 4]]},
        "symbol": {"kind": "gaussian-bump", "center": [0, 0], "width": 1.5},
        "norm": {"p": "inf", "q": 2, "m": {"kind": "exponential", "params": [0.1, 1]}},
        "ensemble": {"count": 10, "seed": 3, "mix": ["noise", "spike"]},
        "signals": ["f.json", {"re": [1, 0, 0, 0, 0, 0, 0, 0]}],
        "options": {"strategy": "conditioned", "target": 5, "compare": "window",
                    "window2": {"kind": "delta"}, "dual": "zero", "csv_grid": True},
    })


def test_load_run_config_resolves_relative_paths(tmp_path):
    f = gaussian_window(4)
    (tmp_path / "data").mkdir()
    (tmp_path / "data" / "phi.json").write_text(json.dumps(signal_to_dict(f)))
    (tmp_path / "data" / "sigma.json").write_text(json.dumps(tfmatrix_to_dict(TFMatrix(np.eye(4)))))
    (tmp_path / "run.json").write_text(json.dumps({
        "n": 4,
        "window": {"kind": "file", "path": "data/phi.json"},
        "symbol": {"kind": "file", "path": "data/sigma.json"},
        "signals": ["data/phi.json"],
        "ensemble": {"seed": 9},
    }))
    cfg = load_run_config(tmp_path / "run.json")
    assert cfg.seed == 9
    assert load_run_config(tmp_path / "run.json", seed=1).seed == 1
    assert np.allclose(build_window(cfg).values, f.values)
    assert np.array_equal(build_symbol(cfg, build_lattice(cfg)), np.eye(4))
    assert build_signals(cfg)[0] == Signal(f.values)


def test_builders_reject_bad_input(tmp_path):
    with pytest.raises(ConfigError):
        build_window(RunConfig(n=4, window={"kind": "box"}))
    with pytest.raises(LatticeError):
        build_lattice(RunConfig(n=8, lattice={"kind": "separable", "a": 3, "b": 2}))
    with pytest.raises(ConfigError):
        build_lattice(RunConfig(n=8, lattice={"kind": "separable", "a": 2}))
    with pytest.raises(DimensionError):
        build_signals(RunConfig(n=4, signals=[{"re": [1.0, 2.0]}]))
    with pytest.raises(ConfigError):
        build_symbol(RunConfig(n=4, symbol={"kind": "indicator-box", "k0": 0}), separable_lattice(4, 2, 2))


def test_window_normalization_option():
    raw = build_window(RunConfig(n=8, window={"kind": "box", "width": 3, "normalize": False}))
    assert raw.normalization == "raw"
    assert build_window(RunConfig(n=8, window={"kind": "box", "width": 3})).norm2() == pytest.approx(1)


# --- REPORTS ---

def test_json_floats_and_specials():
    out = json.loads(reporter.dumps_json({
        "x": 0.1, "third": Fraction(1, 3), "big": np.float64(1e300), "i": np.int64(7),
        "flag": np.bool_(True), "pos": float("inf"), "neg": -np.inf, "nan": float("nan"),
        "z": 1 - 2j, "arr": np.array([1.5, 2.5]),
    }))
    assert out["x"] == 0.1 and out["third"] == 1 / 3 and out["big"] == 1e300
    assert out["i"] == 7 and out["flag"] is True
    assert (out["pos"], out["neg"], out["nan"]) == ("inf", "-inf", "nan")
    assert out["z"] == {"re": 1.0, "im": -2.0}
    assert out["arr"] == [1.5, 2.5]


def test_json_is_sorted_and_reports_serialize():
    text = reporter.dumps_json({"b": 1, "a": {"d": 2, "c": NormSpec()}})
    assert text.index('"a"') < text.index('"b"') and text.index('"c"') < text.index('"d"')
    assert json.loads(text)["a"]["c"]["p"] == 2.0
    assert text.endswith("}\n")


def test_write_table_formats(tmp_path):
    df = reporter.magnitude_grid(np.array([[3 + 4j, 0], [1, -2j]]))
    assert len(df) == 4 and df["magnitude"].tolist() == [5.0, 0.0, 1.0, 2.0]
    csv = reporter.write_table(df, tmp_path / "grid", "csv")
    assert csv.suffix == ".csv"
    assert csv.read_text().splitlines()[0] == "k,l,magnitude"
    pd.testing.assert_frame_equal(pd.read_csv(csv), df, check_dtype=False)
    js = reporter.write_table(df, tmp_path / "grid", "json")
    assert json.loads(js.read_text())[0] == {"k": 0, "l": 0, "magnitude": 5.0}


def test_summarize():
    line = reporter.summarize("frame-check", 1, {"N": 8, "A": 0.25, "nested": {"x": 1}})
    assert line == "frame-check: exit 1 (A=0.25, N=8)"
