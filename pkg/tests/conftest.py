import json
import os
from functools import lru_cache
from pathlib import Path

# Keep test runs from writing the shared log file
os.environ.setdefault("TFL_LOG_FILE", "")

import numpy as np
import pytest

from gabor import WindowBundle
from lattice import enumerate_lattices
from phase_space import Signal, gaussian_window, make_window, random_signal

FIXTURES = Path(__file__).parent / "fixtures"
REGRESSION_FILE = FIXTURES / "regression.json"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_symbol(n, rng, density=1.0):
    sigma = rng.uniform(0.0, 2.0, size=(n, n))
    if density < 1.0:
        sigma[rng.uniform(size=(n, n)) > density] = 0.0
    return sigma


def random_window(n, rng):
    return make_window(random_signal(n, rng).values)


def random_bundle(n, count, rng):
    return WindowBundle(tuple(random_window(n, rng) for _ in range(count)))


@lru_cache(maxsize=None)
def all_lattices(n):
    return tuple(enumerate_lattices(n))


def random_lattice(n, rng, min_size=1):
    lattices = [lat for lat in all_lattices(n) if lat.size >= min_size]
    return lattices[int(rng.integers(len(lattices)))]


@pytest.fixture
def gauss8():
    return gaussian_window(8)


@pytest.fixture
def regression():
    """
    check(key, value): compares `value` against the recorded entry for `key`
    within 5%. Unknown keys fail; run with TFL_RECORD_REGRESSION=1 to record
    them instead.
    """
    stored = json.loads(REGRESSION_FILE.read_text()) if REGRESSION_FILE.exists() else {}
    recording = os.environ.get("TFL_RECORD_REGRESSION") == "1"

    def check(key, value, rel=0.05):
        if key not in stored:
            if not recording:
                pytest.fail(f"{key}: no recorded value in {REGRESSION_FILE.name} "
                            f"(set TFL_RECORD_REGRESSION=1 to record {value!r})")
            stored[key] = value
            REGRESSION_FILE.write_text(json.dumps(stored, indent=2, sort_keys=True) + "\n")
            return
        expected = stored[key]
        if isinstance(expected, (int, float)):
            assert abs(value - expected) <= rel * abs(expected), f"{key}: {value} vs recorded {expected}"
        else:
            assert value == expected, f"{key}: {value} vs recorded {expected}"

    return check


def assert_signal_close(f, g, atol=1e-10):
    a = f.values if isinstance(f, Signal) else np.asarray(f)
    b = g.values if isinstance(g, Signal) else np.asarray(g)
    assert np.allclose(a, b, atol=atol, rtol=0), f"max deviation {np.abs(a - b).max():.3g}"
