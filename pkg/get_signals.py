"""
Seeded test-signal ensembles and named symbol generators.

Signal i of an ensemble is drawn from numpy.random.default_rng([seed, i]), so
ensembles are nested: the first 200 signals of a 2000-signal ensemble are the
200-signal ensemble.
"""
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

import config
from errors import ConfigError, EmptyEnsembleError
from lattice import Lattice, fundamental_domain
from phase_space import Signal, gaussian_window, random_signal, tf_shift
from unified_logger import get_logger

logger = get_logger(__name__)

FAMILIES = ("noise", "gaussian", "chirp", "spike")


@dataclass(frozen=True)
class EnsembleSpec:
    n: int
    count: int = config.ENSEMBLE_COUNT
    mix: Tuple[str, ...] = field(default=config.ENSEMBLE_MIX)

    def __post_init__(self):
        unknown = [m for m in self.mix if m not in FAMILIES]
        if unknown or not self.mix:
            raise ConfigError(f"unknown ensemble families {unknown}; choose from {FAMILIES}")

    def descriptor(self, seed: int) -> dict:
        return {"n": self.n, "count": self.count, "mix": list(self.mix), "seed": seed,
                "recipe": "signal i ~ default_rng([seed, i]), family mix[i % len(mix)]"}


def _complex_scale(rng: np.random.Generator) -> complex:
    return complex(rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform()))


def generate_signal(n: int, family: str, rng: np.random.Generator) -> Signal:
    """One non-zero signal of the given family."""
    t = np.arange(n)
    if family == "noise":
        return random_signal(n, rng)
    if family == "gaussian":
        z = (int(rng.integers(n)), int(rng.integers(n)))
        return Signal(_complex_scale(rng) * tf_shift(z, gaussian_window(n)).values)
    if family == "chirp":
        # exp(2j*pi*(f0*t + c*t^2/2)/N) with random start frequency and rate
        f0 = rng.uniform(0, n)
        rate = rng.uniform(-1.0, 1.0)
        return Signal(_complex_scale(rng) * np.exp(2j * np.pi * (f0 * t + 0.5 * rate * t ** 2) / n))
    if family == "spike":
        count = int(rng.integers(1, min(3, n) + 1))
        values = np.zeros(n, dtype=complex)
        for k in rng.choice(n, size=count, replace=False):
            values[k] = _complex_scale(rng)
        return Signal(values)
    raise ConfigError(f"unknown signal family '{family}'")


def generate_ensemble(spec: EnsembleSpec, seed: int = config.DEFAULT_SEED) -> List[Signal]:
    """Deterministic ensemble of spec.count non-zero signals."""
    if spec.count < 1:
        raise EmptyEnsembleError("an ensemble needs at least one signal")
    signals = []
    for i in range(spec.count):
        rng = np.random.default_rng([seed, i])
        signals.append(generate_signal(spec.n, spec.mix[i % len(spec.mix)], rng))
    logger.info(f"Generated ensemble of {spec.count} signals (N={spec.n}, seed={seed})")
    return signals


# --- SYMBOLS ---

def indicator_box(n: int, k0: int, l0: int, width: int, height: int, value: float = 1.0) -> np.ndarray:
    """value on {k0..k0+width-1} x {l0..l0+height-1} (wrapping), 0 elsewhere."""
    sigma = np.zeros((n, n))
    ks = (int(k0) + np.arange(int(width))) % n
    ls = (int(l0) + np.arange(int(height))) % n
    sigma[np.ix_(ks, ls)] = value
    return sigma


def gaussian_bump(n: int, center: Sequence[float], width: float) -> np.ndarray:
    """exp(-pi * d(z, center)^2 / width^2) with the wrapped distance."""
    if width <= 0:
        raise ConfigError("gaussian-bump width must be positive")
    k = np.arange(n)
    dk = np.abs(k - center[0]) % n
    dl = np.abs(k - center[1]) % n
    dk = np.minimum(dk, n - dk)
    dl = np.minimum(dl, n - dl)
    return np.exp(-np.pi * (dk[:, None] ** 2 + dl[None, :] ** 2) / width ** 2)


def fundamental_cell(lattice: Lattice, value: float = 1.0) -> np.ndarray:
    """value times the indicator of the fundamental domain Q at the origin."""
    n = lattice.n
    sigma = np.zeros((n, n))
    for q in fundamental_domain(lattice).offsets:
        sigma[q.k, q.l] = value
    return sigma


def point_mass(n: int, k: int = 0, l: int = 0, value: float = 1.0) -> np.ndarray:
    sigma = np.zeros((n, n))
    sigma[k % n, l % n] = value
    return sigma


def symbol_from_spec(spec: dict, n: int, lattice: Lattice) -> np.ndarray:
    """
    Builds a symbol from a generator spec:
    {"kind": "indicator-box", "k0", "l0", "width", "height", "value"?}
    {"kind": "gaussian-bump", "center": [k, l], "width"}
    {"kind": "fundamental-cell", "value"?}
    {"kind": "point-mass", "k"?, "l"?, "value"?}
    {"kind": "constant", "value"}
    """
    kind = spec.get("kind")
    if kind == "indicator-box":
        return indicator_box(n, spec["k0"], spec["l0"], spec["width"], spec["height"], spec.get("value", 1.0))
    if kind == "gaussian-bump":
        return gaussian_bump(n, spec["center"], spec["width"])
    if kind == "fundamental-cell":
        return fundamental_cell(lattice, spec.get("value", 1.0))
    if kind == "point-mass":
        return point_mass(n, spec.get("k", 0), spec.get("l", 0), spec.get("value", 1.0))
    if kind == "constant":
        return np.full((n, n), float(spec.get("value", 1.0)))
    raise ConfigError(f"unknown symbol kind '{kind}'")
