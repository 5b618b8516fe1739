"""
Time-frequency localization operators H_sigma = (1/N) V*_phi sigma V_phi,
their lattice-shifted family, spectral decomposition, and the constructive
multi-window frame search built on their eigenfunctions.

The 1/N normalization makes sigma == 1 (with a unit window) the identity, so
eigenvalues are bounded by max(sigma) and concentration bounds carry no N.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import scipy.linalg

import config
from errors import (ConfigError, DimensionError, ExhaustedError, NotHermitianError, PartitionError,
                    SupportError, SymbolSignError, ZeroWindowError)
from gabor import FrameReport, WindowBundle, dual_windows, frame_bounds, frame_operator, wexler_raz_check
from lattice import Lattice
from phase_space import PhasePoint, Signal, TFMatrix, check_dimension, stft, stft_matrix, tf_shift_matrix
from unified_logger import get_logger

logger = get_logger(__name__)

SymbolLike = Union[TFMatrix, np.ndarray]


def symbol_array(sigma: SymbolLike) -> np.ndarray:
    """A real N x N array from a TFMatrix or array; complex symbols must be real-valued."""
    values = sigma.values if isinstance(sigma, TFMatrix) else np.asarray(sigma)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise DimensionError(f"a symbol must be N x N, got shape {values.shape}")
    if np.iscomplexobj(values):
        if np.any(np.abs(values.imag) > 0):
            raise SymbolSignError("symbols must be real-valued")
        values = values.real
    return np.array(values, dtype=float)


@dataclass(frozen=True, eq=False)
class LocOp:
    symbol: TFMatrix
    window: Signal
    matrix: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.window.n


def localization_operator(sigma: SymbolLike, phi: Signal) -> LocOp:
    """
    H_sigma with <H f, g> = (1/N) sum_z sigma(z) V_phi f(z) conj(V_phi g(z)).
    """
    values = symbol_array(sigma)
    check_dimension(values.shape[0], phi)
    if np.any(values < 0):
        raise SymbolSignError(f"symbol has negative entries (min {values.min():.3g})")
    if phi.is_zero():
        raise ZeroWindowError("the localization window must be non-zero")

    n = phi.n
    V = stft_matrix(phi)
    H = (V.conj().T * values.reshape(-1)) @ V * float(n) ** config.LOCOP_SCALE_POWER
    matrix = 0.5 * (H + H.conj().T)
    matrix.setflags(write=False)
    return LocOp(TFMatrix(values), phi, matrix)


def translate_symbol(sigma: SymbolLike, lam) -> np.ndarray:
    """(T_lambda sigma)(z) = sigma(z - lambda) on the torus."""
    values = symbol_array(sigma)
    k, l = PhasePoint(*lam).canonical(values.shape[0])
    return np.roll(values, shift=(k, l), axis=(0, 1))


def shifted_locop(locop: LocOp, lam) -> LocOp:
    """H_lambda = H_{T_lambda sigma} = pi(lambda) H_sigma pi(lambda)*."""
    return localization_operator(translate_symbol(locop.symbol, lam), locop.window)


def conjugated_matrix(locop: LocOp, lam) -> np.ndarray:
    """pi(lambda) H_sigma pi(lambda)*, the second route to H_lambda."""
    P = tf_shift_matrix(lam, locop.n)
    return P @ locop.matrix @ P.conj().T


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues in descending order; column j of `vectors` is phi_j."""
    eigenvalues: np.ndarray
    vectors: np.ndarray = field(repr=False)
    locop: Optional[LocOp] = field(default=None, repr=False)

    def eigenfunction(self, j: int) -> Signal:
        return Signal(self.vectors[:, j])

    def eigenfunctions(self, count: Optional[int] = None) -> List[Signal]:
        count = len(self.eigenvalues) if count is None else count
        return [self.eigenfunction(j) for j in range(count)]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.eigenvalues) @ self.vectors.conj().T


def spectral_decomposition(locop: Union[LocOp, np.ndarray]) -> SpectralDecomposition:
    """Orthonormal eigenbasis of a hermitian PSD operator, eigenvalues descending."""
    H = locop.matrix if isinstance(locop, LocOp) else np.asarray(locop)
    scale = max(1.0, float(np.linalg.norm(H)))
    if np.linalg.norm(H - H.conj().T) / scale > config.TOL_HERMITIAN:
        raise NotHermitianError("spectral_decomposition needs a hermitian operator")

    eigenvalues, vectors = scipy.linalg.eigh(H)
    eigenvalues, vectors = eigenvalues[::-1].copy(), vectors[:, ::-1].copy()
    noise = (eigenvalues < 0) & (eigenvalues >= -config.TOL_PSD_CLIP)
    eigenvalues[noise] = 0.0
    if np.any(eigenvalues < 0):
        logger.warning(f"Operator is not PSD: smallest eigenvalue {eigenvalues.min():.3g}")
    return SpectralDecomposition(eigenvalues, vectors, locop if isinstance(locop, LocOp) else None)


# --- SYMBOL CONDITIONS AND ESTIMATES ---

@dataclass(frozen=True)
class PartitionReport:
    A: float
    B: float

    @property
    def holds(self) -> bool:
        return self.A > 0

    def to_dict(self) -> dict:
        return {"A": self.A, "B": self.B, "holds": self.holds}


def lattice_periodization(sigma: SymbolLike, lattice: Lattice) -> np.ndarray:
    """sum_{lambda in L} sigma(z - lambda) at every z."""
    values = symbol_array(sigma)
    total = np.zeros_like(values)
    for lam in lattice.elements:
        total += translate_symbol(values, lam)
    return total


def partition_check(sigma: SymbolLike, lattice: Lattice) -> PartitionReport:
    """A <= sum_lambda T_lambda sigma <= B, with A and B the exact extremes."""
    values = symbol_array(sigma)
    if np.any(values < 0):
        raise SymbolSignError("partition_check needs a non-negative symbol")
    total = lattice_periodization(values, lattice)
    return PartitionReport(float(total.min()), float(total.max()))


def torus_convolution(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a * b)(z) = sum_w a(z - w) b(w) over Z_N^2, summed directly."""
    n = a.shape[0]
    out = np.zeros(a.shape, dtype=np.result_type(a, b))
    for k in range(n):
        for l in range(n):
            if b[k, l] != 0:
                out += b[k, l] * np.roll(a, shift=(k, l), axis=(0, 1))
    return out


@dataclass(frozen=True)
class PointwiseReport:
    max_violation: float
    scale: float

    @property
    def passes(self) -> bool:
        return self.max_violation <= config.TOL_ESTIMATE * self.scale

    def to_dict(self) -> dict:
        return {"max_violation": self.max_violation, "scale": self.scale, "passes": self.passes}


def pointwise_estimate_check(sigma: SymbolLike, phi: Signal, f: Signal) -> PointwiseReport:
    """
    |V_phi(H_sigma f)(z)| <= (1/N) (|V_phi phi| * (sigma |V_phi f|))(z).
    Returns the largest lhs - rhs for audit.
    """
    locop = localization_operator(sigma, phi)
    check_dimension(phi.n, f)
    lhs = np.abs(stft(phi, Signal(locop.matrix @ f.values)).values)
    ambiguity = np.abs(stft(phi, phi).values)
    weighted = locop.symbol.values.real * np.abs(stft(phi, f).values)
    rhs = torus_convolution(ambiguity, weighted) * float(phi.n) ** config.LOCOP_SCALE_POWER
    scale = max(1.0, float(rhs.max()))
    return PointwiseReport(float((lhs - rhs).max()), scale)


@dataclass(frozen=True)
class ConcentrationReport:
    lhs: float
    bound: float
    equality_expected: bool

    @property
    def holds(self) -> bool:
        if self.lhs < self.bound - config.TOL_ESTIMATE:
            return False
        return not self.equality_expected or abs(self.lhs - self.bound) < config.TOL_ESTIMATE

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "bound": self.bound,
                "equality_expected": self.equality_expected, "holds": self.holds}


def concentration(decomp: SpectralDecomposition, j: int, omega: np.ndarray,
                  phi: Optional[Signal] = None) -> ConcentrationReport:
    """
    Energy of V_phi phi_j inside omega against c_j / C_sigma:
    (1/N) sum_{z in omega} |V_phi phi_j(z)|^2 >= c_j / C_sigma,
    with equality when sigma = C_sigma * chi_omega.
    """
    if decomp.locop is None:
        raise DimensionError("concentration needs a decomposition of a localization operator")
    locop = decomp.locop
    phi = locop.window if phi is None else phi
    if phi is not locop.window and not np.allclose(phi.values, locop.window.values):
        raise DimensionError("concentration must use the operator's own window")
    omega = np.asarray(omega, dtype=bool)
    sigma = locop.symbol.values.real
    if omega.shape != sigma.shape:
        raise DimensionError(f"omega must have shape {sigma.shape}, got {omega.shape}")
    if np.any(sigma[~omega] > 0):
        raise SupportError("symbol is supported outside omega")

    c_sigma = float(sigma[omega].max()) if omega.any() else 0.0
    n = locop.n
    energy = np.abs(stft(phi, decomp.eigenfunction(j)).values) ** 2
    lhs = float(energy[omega].sum()) / n
    bound = float(decomp.eigenvalues[j]) / c_sigma if c_sigma > 0 else 0.0
    equality = c_sigma > 0 and bool(np.all(sigma[omega] == c_sigma))
    return ConcentrationReport(lhs, bound, equality)


@dataclass(frozen=True)
class DecayProfile:
    eigenvalues: Tuple[float, ...]
    counts_above: Dict[float, int]
    trace: float
    symbol_trace: float

    def to_dict(self) -> dict:
        return {
            "eigenvalues": list(self.eigenvalues),
            "counts_above": {str(t): c for t, c in self.counts_above.items()},
            "trace": self.trace,
            "symbol_trace": self.symbol_trace,
        }


def eigenvalue_decay_profile(decomp: SpectralDecomposition, sigma: Optional[SymbolLike] = None) -> DecayProfile:
    """
    Eigenvalue ladder used to pick n for the frame construction. counts_above[t]
    is the number of c_j above t * max(sigma); symbol_trace is
    (1/N) sum_z sigma(z) ||phi||^2, which must equal the trace.
    """
    if sigma is None:
        if decomp.locop is None:
            raise DimensionError("a symbol is required for a bare matrix decomposition")
        sigma = decomp.locop.symbol
    values = symbol_array(sigma)
    top = float(values.max()) if values.size else 0.0
    eigs = decomp.eigenvalues
    counts = {t: int(np.sum(eigs > t * top)) for t in config.DECAY_THRESHOLDS}
    window_energy = decomp.locop.window.norm2() ** 2 if decomp.locop is not None else 1.0
    symbol_trace = float(values.sum()) * window_energy * float(values.shape[0]) ** config.LOCOP_SCALE_POWER
    return DecayProfile(tuple(float(e) for e in eigs), counts, float(eigs.sum()), symbol_trace)


# --- CONSTRUCTIVE MULTI-WINDOW FRAMES ---

@dataclass(frozen=True, eq=False)
class ConstructionResult:
    n: int
    bundle: WindowBundle
    report: FrameReport
    wexler_raz_passes: bool
    eigenvalues: Tuple[float, ...]
    history: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "frame": self.report.to_dict(),
            "wexler_raz_passes": self.wexler_raz_passes,
            "eigenvalues": list(self.eigenvalues),
            "history": self.history,
        }


def eigenvalue_clusters(eigenvalues: np.ndarray) -> List[List[int]]:
    """Groups of consecutive indices whose eigenvalues coincide up to TOL_DEGENERATE."""
    tol = config.TOL_DEGENERATE * max(1.0, float(np.abs(eigenvalues).max(initial=0.0)))
    clusters = []
    for j, c in enumerate(eigenvalues):
        if clusters and abs(eigenvalues[clusters[-1][-1]] - c) <= tol:
            clusters[-1].append(j)
        else:
            clusters.append([j])
    return clusters


def construct_multiwindow_frame(sigma: SymbolLike, phi: Signal, lattice: Lattice,
                                strategy: str = "first", target: Optional[float] = None) -> ConstructionResult:
    """
    Takes the top-n eigenfunctions of H_sigma as windows, growing n one
    degenerate cluster at a time, until the multi-window system over the
    lattice is a frame ("first") or has B/A <= target ("conditioned").
    """
    if strategy not in ("first", "conditioned"):
        raise ConfigError(f"unknown strategy '{strategy}' (expected 'first' or 'conditioned')")
    target = config.CONDITIONED_TARGET if target is None else target

    partition = partition_check(sigma, lattice)
    if not partition.holds:
        raise PartitionError(f"sum of lattice translates of the symbol vanishes somewhere (A={partition.A:.3g})")

    locop = localization_operator(sigma, phi)
    decomp = spectral_decomposition(locop)
    n_dim = locop.n
    S = np.zeros((n_dim, n_dim), dtype=complex)
    windows: List[Signal] = []
    history = []

    for cluster in eigenvalue_clusters(decomp.eigenvalues):
        for j in cluster:
            window = decomp.eigenfunction(j)
            windows.append(window)
            S = S + frame_operator(WindowBundle((window,)), lattice)
        report = frame_bounds(S)
        history.append({"n": len(windows), "A": report.lower_bound, "B": report.upper_bound,
                        "is_frame": report.is_frame, "condition": report.condition})
        done = report.is_frame and (strategy == "first" or report.condition <= target)
        if done:
            bundle = WindowBundle(tuple(windows))
            wr = wexler_raz_check(bundle, dual_windows(bundle, lattice), lattice)
            logger.info(f"Multi-window frame found with n={len(windows)} windows over {lattice} "
                        f"(A={report.lower_bound:.6g}, B={report.upper_bound:.6g})")
            return ConstructionResult(len(windows), bundle, report, wr.passes,
                                      tuple(float(c) for c in decomp.eigenvalues), history)

    raise ExhaustedError(f"no {strategy} frame with up to {n_dim} eigenfunctions over {lattice}",
                         diagnostics={"history": history, "partition": partition.to_dict()})
