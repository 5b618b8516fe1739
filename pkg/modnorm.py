"""
Weights, weighted mixed norms over phase space and lattices, the modulation
norm, the localization-operator norm, multi-window coefficient norms,
empirical equivalence constants and the amalgam sampling inequality.

Mixed-norm axis convention: the inner l^p sum runs over the time index k,
the outer l^q sum over the frequency index l.

The continuous theory also asks nu to satisfy lim nu(nz)^(1/n) = 1; every
weight on the finite torus is bounded, so that condition is vacuous here and
is not checked.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
import pandas as pd

import config
from errors import BlockSizeError, DimensionError, EmptyEnsembleError
from gabor import WindowBundle, analysis
from get_signals import EnsembleSpec, generate_ensemble
from lattice import CellMap, Lattice, fundamental_domain
from locop import localization_operator, partition_check, translate_symbol, SymbolLike
from phase_space import Signal, check_dimension, stft
from unified_logger import get_logger

logger = get_logger(__name__)

WEIGHT_KINDS = ("constant", "polynomial", "exponential")


def wrapped_distance(n: int) -> np.ndarray:
    """|z| = sqrt(min(k, N-k)^2 + min(l, N-l)^2) for every (k, l)."""
    k = np.arange(n)
    d = np.minimum(k, n - k)
    return np.sqrt(d[:, None] ** 2 + d[None, :] ** 2)


@dataclass(frozen=True)
class Weight:
    """
    constant(c):        c
    polynomial(s):      (1 + |z|)^s
    exponential(a, b):  exp(a * |z|^b)
    """
    kind: str = "constant"
    params: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind '{self.kind}'")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        allowed = {"constant": (0, 1), "polynomial": (1,), "exponential": (2,)}[self.kind]
        if len(self.params) not in allowed:
            raise ValueError(f"{self.kind} weight takes {' or '.join(map(str, allowed))} parameters, "
                             f"got {len(self.params)}")

    def grid(self, n: int) -> np.ndarray:
        d = wrapped_distance(n)
        if self.kind == "constant":
            c = self.params[0] if self.params else 1.0
            values = np.full((n, n), c)
        elif self.kind == "polynomial":
            values = (1.0 + d) ** self.params[0]
        else:
            a, b = self.params
            values = np.exp(a * d ** b)
        if np.any(values <= 0):
            raise ValueError(f"weight {self} is not strictly positive")
        return values

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": list(self.params)}


def constant_weight(c: float = 1.0) -> Weight:
    return Weight("constant", (c,))


def polynomial_weight(s: float) -> Weight:
    return Weight("polynomial", (s,))


def exponential_weight(a: float, b: float) -> Weight:
    return Weight("exponential", (a, b))


@dataclass(frozen=True)
class NormSpec:
    """Mixed-norm exponents (p, q) in [1, inf], weight m and its reference weight nu."""
    p: float = 2.0
    q: float = 2.0
    m: Weight = field(default_factory=constant_weight)
    nu: Weight = field(default_factory=constant_weight)

    def __post_init__(self):
        for name in ("p", "q"):
            value = float(getattr(self, name))
            if not value >= 1:
                raise ValueError(f"{name} must lie in [1, inf], got {value}")
            object.__setattr__(self, name, value)

    def to_dict(self) -> dict:
        enc = lambda x: "inf" if math.isinf(x) else x
        return {"p": enc(self.p), "q": enc(self.q), "m": self.m.to_dict(), "nu": self.nu.to_dict()}


def mixed_norm(F: np.ndarray, p: float, q: float) -> float:
    """(sum_l (sum_k |F(k, l)|^p)^(q/p))^(1/q), sup-norms for p or q = inf."""
    inner = np.linalg.norm(np.abs(F), ord=p, axis=0)
    return float(np.linalg.norm(inner, ord=q))


def _root(x: float, p: float) -> float:
    """x^(1/p) with x^(1/inf) = 1."""
    return 1.0 if math.isinf(p) else x ** (1.0 / p)


# --- NORMS ---

def modulation_norm(f: Signal, phi: Signal, spec: NormSpec) -> float:
    """(1/N) * || m * V_phi f ||_{l^{p,q}}; phi is expected to have unit norm."""
    check_dimension(phi.n, f)
    V = np.abs(stft(phi, f).values)
    return mixed_norm(V * spec.m.grid(f.n), spec.p, spec.q) * float(f.n) ** config.MODNORM_SCALE_POWER


@lru_cache(maxsize=64)
def _cells(lattice: Lattice) -> CellMap:
    return fundamental_domain(lattice)


def spread_sequence(values, lattice: Lattice, weight: Optional[Weight] = None) -> np.ndarray:
    """
    sum_lambda |a_lambda| m(lambda) chi_{lambda + Q} as an N x N array, with
    the weight sampled at the lattice point of each cell.
    """
    a = np.abs(np.asarray(values)).reshape(-1)
    if a.shape[0] != lattice.size:
        raise DimensionError(f"expected {lattice.size} values (one per lattice point), got {a.shape[0]}")
    if weight is not None:
        m = weight.grid(lattice.n)
        a = a * m[lattice.points[:, 0], lattice.points[:, 1]]
    return a[_cells(lattice).owner]


def sequence_norm(values, lattice: Lattice, spec: NormSpec) -> float:
    """|| sum_lambda |a_lambda| chi_{lambda+Q} ||_{L^{p,q}_m} over Z_N^2."""
    return mixed_norm(spread_sequence(values, lattice, spec.m), spec.p, spec.q)


def separable_sequence_norm(values, lattice: Lattice, spec: NormSpec) -> float:
    """
    Closed form for aZ x bZ: a^(1/p) b^(1/q) || a_{i,j} m(a*i, b*j) ||_{l^{p,q}},
    inner sum over the time index i.
    """
    ab = lattice.is_separable()
    if ab is None:
        raise DimensionError(f"{lattice} is not separable")
    a, b = ab
    n = lattice.n
    grid = np.zeros((n // a, n // b))
    m = spec.m.grid(n)
    for (k, l), value in zip(lattice.elements, np.abs(np.asarray(values)).reshape(-1)):
        grid[k // a, l // b] = value * m[k, l]
    return _root(a, spec.p) * _root(b, spec.q) * mixed_norm(grid, spec.p, spec.q)


def shifted_family(sigma: SymbolLike, phi: Signal, lattice: Lattice) -> np.ndarray:
    """Matrices of H_lambda for every lattice point, shape (|L|, N, N)."""
    return np.stack([localization_operator(translate_symbol(sigma, lam), phi).matrix
                     for lam in lattice.elements])


def _warn_partition(sigma: SymbolLike, lattice: Lattice) -> None:
    partition = partition_check(sigma, lattice)
    if not partition.holds:
        logger.warning(f"Symbol fails the lattice partition condition (A={partition.A:.3g}); "
                       f"the localization norm need not be equivalent to the modulation norm")


def localization_norm(f: Signal, sigma: SymbolLike, phi: Signal, lattice: Lattice, spec: NormSpec) -> float:
    """sequence_norm of a_lambda = ||H_lambda f||_2 over the lattice."""
    _warn_partition(sigma, lattice)
    check_dimension(lattice.n, f, phi)
    family = shifted_family(sigma, phi, lattice)
    return sequence_norm(np.linalg.norm(family @ f.values, axis=1), lattice, spec)


def localization_norm_fn(sigma: SymbolLike, phi: Signal, lattice: Lattice,
                         spec: NormSpec) -> Callable[[Signal], float]:
    """localization_norm with the |L| operators assembled once, for ensembles."""
    _warn_partition(sigma, lattice)
    family = shifted_family(sigma, phi, lattice)

    def norm(f: Signal) -> float:
        check_dimension(lattice.n, f)
        return sequence_norm(np.linalg.norm(family @ f.values, axis=1), lattice, spec)

    return norm


def multiwindow_coefficient_norm(f: Signal, bundle: WindowBundle, lattice: Lattice, spec: NormSpec) -> float:
    """sequence_norm of b_lambda = (sum_j |<f, pi(lambda) phi_j>|^2)^(1/2)."""
    coefficients = analysis(bundle, lattice, f).values
    return sequence_norm(np.linalg.norm(coefficients, axis=1), lattice, spec)


# --- EQUIVALENCE CONSTANTS ---

@dataclass(frozen=True)
class EquivalenceReport:
    ratios: Tuple[float, ...]
    r_min: float
    r_max: float
    condition: float
    ensemble: dict

    def to_dict(self) -> dict:
        return {"r_min": self.r_min, "r_max": self.r_max, "condition": self.condition,
                "ensemble": self.ensemble, "ratios": list(self.ratios)}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"signal": range(len(self.ratios)), "ratio": self.ratios})


def equivalence_estimate(norm_a: Callable[[Signal], float], norm_b: Callable[[Signal], float],
                         ensemble: EnsembleSpec, seed: int = config.DEFAULT_SEED) -> EquivalenceReport:
    """
    Ratios norm_b(f) / norm_a(f) over a seeded ensemble, giving the empirical
    constants A * ||f||_a <= ||f||_b <= B * ||f||_a. The ratio list keeps
    signal order whatever the worker count.
    """
    if ensemble.count < 1:
        raise EmptyEnsembleError("an ensemble needs at least one signal")
    signals = generate_ensemble(ensemble, seed)

    def ratio(f: Signal) -> float:
        denominator = norm_a(f)
        return norm_b(f) / denominator if denominator > 0 else math.inf

    with ThreadPoolExecutor(max_workers=config.THREADS) as pool:
        ratios = tuple(float(r) for r in pool.map(ratio, signals))

    r_min, r_max = min(ratios), max(ratios)
    if not all(math.isfinite(r) and r > 0 for r in ratios):
        logger.warning("Some ratios are zero or infinite; the two functionals are not equivalent norms")
    condition = r_max / r_min if r_min > 0 else math.inf
    logger.info(f"Equivalence over {len(ratios)} signals: r_min={r_min:.6g}, r_max={r_max:.6g}, "
                f"condition={condition:.6g}")
    return EquivalenceReport(ratios, r_min, r_max, condition, ensemble.descriptor(seed))


# --- AMALGAM NORM AND SAMPLING ---

def _block_maxima(F: np.ndarray, block: int, spec: NormSpec) -> np.ndarray:
    n = F.shape[0]
    if block < 1 or n % block:
        raise BlockSizeError(f"block size {block} must divide N={n}")
    G = np.abs(F) * spec.m.grid(n)
    return G.reshape(n // block, block, n // block, block).max(axis=(1, 3))


def local_sup_norm(F, block: int, spec: NormSpec) -> float:
    """Mixed norm over the block grid of M_beta = max_{z in beta} |F(z)| m(z)."""
    values = F.values if hasattr(F, "values") else np.asarray(F)
    return mixed_norm(_block_maxima(values, block, spec), spec.p, spec.q)


@dataclass(frozen=True)
class SamplingReport:
    lhs: float
    rhs: float
    constant: float
    block: int

    @property
    def passes(self) -> bool:
        return self.lhs <= self.rhs + config.TOL_ESTIMATE * max(1.0, self.rhs)

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "constant": self.constant,
                "block": self.block, "passes": self.passes}


def sampling_constant(lattice: Lattice, block: int, spec: NormSpec) -> float:
    """
    C_L = P_k^(1/p) * P_l^(1/q): P_k is the most lattice points sharing one
    frequency inside one block, P_l the most occupied frequencies inside one
    block row.
    """
    n = lattice.n
    if block < 1 or n % block:
        raise BlockSizeError(f"block size {block} must divide N={n}")
    pts = lattice.points
    per_row = {}
    bands = {}
    for k, l in pts:
        key = (k // block, l)
        per_row[key] = per_row.get(key, 0) + 1
        bands.setdefault(l // block, set()).add(l)
    p_k = max(per_row.values())
    p_l = max(len(ls) for ls in bands.values())
    return _root(p_k, spec.p) * _root(p_l, spec.q)


def sampling_check(F, lattice: Lattice, spec: NormSpec, block: Optional[int] = None) -> SamplingReport:
    """
    ||F restricted to L||_{l^{p,q}_m} <= C_L * local_sup_norm(F). The default
    block is max(a, b) for separable lattices and 1 otherwise.
    """
    values = F.values if hasattr(F, "values") else np.asarray(F)
    n = lattice.n
    if values.shape != (n, n):
        raise DimensionError(f"F must be {n} x {n}, got {values.shape}")
    if block is None:
        ab = lattice.is_separable()
        block = max(ab) if ab else 1
    mask = np.zeros((n, n), dtype=bool)
    mask[lattice.points[:, 0], lattice.points[:, 1]] = True
    restricted = np.where(mask, np.abs(values) * spec.m.grid(n), 0.0)
    lhs = mixed_norm(restricted, spec.p, spec.q)
    constant = sampling_constant(lattice, block, spec)
    rhs = constant * local_sup_norm(values, block, spec)
    return SamplingReport(lhs, rhs, constant, block)


# --- WEIGHT CONDITIONS ---

@dataclass(frozen=True)
class WeightCheck:
    passes: bool
    worst_pair: Optional[Tuple[Tuple[int, int], Tuple[int, int]]]
    worst_ratio: float

    def to_dict(self) -> dict:
        pair = [list(z) for z in self.worst_pair] if self.worst_pair else None
        return {"passes": self.passes, "worst_pair": pair, "worst_ratio": self.worst_ratio}


def moderate_check(m: Weight, nu: Weight, n: int, seed: int = config.DEFAULT_SEED) -> WeightCheck:
    """
    m(z1 + z2) <= nu(z1) m(z2) over all pairs for N <= EXHAUSTIVE_WEIGHT_N,
    over WEIGHT_SAMPLE_PAIRS random pairs above. worst_pair maximizes
    m(z1 + z2) / (nu(z1) m(z2)).
    """
    mg, ng = m.grid(n).reshape(-1), nu.grid(n).reshape(-1)
    if n <= config.EXHAUSTIVE_WEIGHT_N:
        idx = np.arange(n * n)
        i1, i2 = np.meshgrid(idx, idx, indexing="ij")
        i1, i2 = i1.ravel(), i2.ravel()
    else:
        rng = np.random.default_rng(seed)
        i1 = rng.integers(n * n, size=config.WEIGHT_SAMPLE_PAIRS)
        i2 = rng.integers(n * n, size=config.WEIGHT_SAMPLE_PAIRS)
    k1, l1 = np.divmod(i1, n)
    k2, l2 = np.divmod(i2, n)
    total = ((k1 + k2) % n) * n + (l1 + l2) % n
    ratios = mg[total] / (ng[i1] * mg[i2])
    worst = int(np.argmax(ratios))
    worst_ratio = float(ratios[worst])
    passes = worst_ratio <= 1.0 + config.TOL_WEIGHT_REL
    pair = ((int(k1[worst]), int(l1[worst])), (int(k2[worst]), int(l2[worst])))
    return WeightCheck(bool(passes), None if passes else pair, worst_ratio)


def submultiplicative_check(nu: Weight, n: int, seed: int = config.DEFAULT_SEED) -> WeightCheck:
    """nu(z1 + z2) <= nu(z1) nu(z2), i.e. nu is moderate with respect to itself."""
    return moderate_check(nu, nu, n, seed)
