"""
Single- and multi-window Gabor systems over a lattice: analysis, synthesis
and frame operators, frame bounds, canonical duals, and the duality theory on
the adjoint lattice (Janssen expansion, Wexler-Raz, Ron-Shen, Gramian).

Shapes: coefficient arrays are |L| x n, indexed (lambda, j) with lambda in
the lattice's element order; the analysis matrix flattens (lambda, j)
row-major.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.linalg

import config
from errors import DimensionError, NotAFrameError, NotHermitianError, ZeroWindowError
from lattice import Lattice, adjoint_lattice, coset_representatives
from phase_space import PhasePoint, Signal, Window, check_dimension, tf_atoms, tf_shift, tf_shift_matrix
from unified_logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class WindowBundle:
    """Windows (phi_1, ..., phi_n) sharing one ambient dimension."""
    windows: Tuple[Signal, ...]

    def __post_init__(self):
        windows = tuple(self.windows)
        if not windows:
            raise DimensionError("a window bundle needs at least one window")
        check_dimension(windows[0].n, *windows)
        object.__setattr__(self, "windows", windows)

    @property
    def n(self) -> int:
        return self.windows[0].n

    @property
    def count(self) -> int:
        return len(self.windows)

    def require_nonzero(self) -> None:
        for j, w in enumerate(self.windows):
            if w.is_zero():
                raise ZeroWindowError(f"window {j} of the bundle is zero")

    def as_array(self) -> np.ndarray:
        """Windows stacked as rows, shape (n_windows, N)."""
        return np.stack([w.values for w in self.windows])


def bundle_of(*windows) -> WindowBundle:
    return WindowBundle(tuple(windows))


@dataclass(frozen=True, eq=False)
class Coefficients:
    lattice: Lattice
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.ndim != 2 or values.shape[0] != self.lattice.size:
            raise DimensionError(f"coefficients must have shape (|L|={self.lattice.size}, n), got {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_windows(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class FrameReport:
    lower_bound: float
    upper_bound: float
    is_frame: bool
    spectrum: Tuple[float, ...]
    condition: float

    def to_dict(self) -> dict:
        return {
            "A": self.lower_bound,
            "B": self.upper_bound,
            "is_frame": self.is_frame,
            "condition": self.condition,
            "spectrum": list(self.spectrum),
        }


# --- ANALYSIS / SYNTHESIS ---

def _check(bundle: WindowBundle, lattice: Lattice, *objs) -> None:
    check_dimension(lattice.n, bundle, *objs)


def lattice_atoms(bundle: WindowBundle, lattice: Lattice) -> np.ndarray:
    """pi(lambda) phi_j for every (lambda, j), shape (|L|, n, N)."""
    _check(bundle, lattice)
    pts = lattice.points
    return np.stack([tf_atoms(w)[pts[:, 0], pts[:, 1], :] for w in bundle.windows], axis=1)


def analysis_matrix(bundle: WindowBundle, lattice: Lattice) -> np.ndarray:
    """Matrix of C: row lambda*n + j is (pi(lambda) phi_j)*."""
    atoms = lattice_atoms(bundle, lattice)
    return np.conj(atoms.reshape(-1, bundle.n))


def analysis(bundle: WindowBundle, lattice: Lattice, f: Signal) -> Coefficients:
    """C f(lambda, j) = <f, pi(lambda) phi_j>."""
    _check(bundle, lattice, f)
    values = analysis_matrix(bundle, lattice) @ f.values
    return Coefficients(lattice, values.reshape(lattice.size, bundle.count))


def synthesis(bundle: WindowBundle, lattice: Lattice, c: Coefficients) -> Signal:
    """D c = sum_lambda sum_j c[lambda, j] pi(lambda) phi_j, the exact adjoint of C."""
    _check(bundle, lattice)
    if c.lattice != lattice or c.n_windows != bundle.count:
        raise DimensionError(
            f"coefficients of shape {c.values.shape} do not match |L|={lattice.size}, n={bundle.count}")
    return Signal(analysis_matrix(bundle, lattice).conj().T @ c.values.reshape(-1))


def frame_type_operator(phi: WindowBundle, psi: WindowBundle, lattice: Lattice) -> np.ndarray:
    """D_phi C_psi: f -> sum_lambda sum_j <f, pi(lambda) psi_j> pi(lambda) phi_j."""
    if phi.count != psi.count:
        raise DimensionError(f"window counts differ: {phi.count} vs {psi.count}")
    _check(phi, lattice, psi)
    return analysis_matrix(phi, lattice).conj().T @ analysis_matrix(psi, lattice)


def frame_operator(bundle: WindowBundle, lattice: Lattice) -> np.ndarray:
    """S = D C = sum_j sum_lambda <., pi(lambda) phi_j> pi(lambda) phi_j."""
    return frame_type_operator(bundle, bundle, lattice)


def _hermitian_residual(S: np.ndarray) -> float:
    scale = max(1.0, float(np.linalg.norm(S)))
    return float(np.linalg.norm(S - S.conj().T)) / scale


def frame_bounds(S: np.ndarray, tol_rel: Optional[float] = None) -> FrameReport:
    """
    Optimal frame bounds of a frame operator: A = min eig, B = max eig.
    Negative rounding noise is clipped to 0; is_frame <=> A > tol_rel * B.
    """
    S = np.asarray(S)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionError(f"frame operator must be square, got {S.shape}")
    residual = _hermitian_residual(S)
    if residual > config.TOL_HERMITIAN:
        raise NotHermitianError(f"operator is not hermitian (relative residual {residual:.3g})")

    tol_rel = config.TOL_FRAME_REL if tol_rel is None else tol_rel
    eigs = np.clip(scipy.linalg.eigvalsh(S), 0.0, None)
    A, B = float(eigs[0]), float(eigs[-1])
    is_frame = A > tol_rel * B
    condition = B / A if is_frame else math.inf
    return FrameReport(A, B, bool(is_frame), tuple(float(e) for e in eigs), condition)


def dual_windows(bundle: WindowBundle, lattice: Lattice) -> WindowBundle:
    """Canonical dual windows gamma_j = S^{-1} phi_j."""
    S = frame_operator(bundle, lattice)
    report = frame_bounds(S)
    if not report.is_frame:
        raise NotAFrameError(f"not a frame (A={report.lower_bound:.3g}, B={report.upper_bound:.3g})")
    gammas = scipy.linalg.solve(S, bundle.as_array().T, assume_a="her")
    return WindowBundle(tuple(Window(gammas[:, j]) for j in range(bundle.count)))


def reconstruct(bundle: WindowBundle, lattice: Lattice, f: Signal) -> Signal:
    """f = D_gamma C_phi f with the canonical dual windows."""
    gamma = dual_windows(bundle, lattice)
    return synthesis(gamma, lattice, analysis(bundle, lattice, f))


def coset_bundle(window: Signal, fine: Lattice, coarse: Lattice) -> WindowBundle:
    """
    Windows pi(mu) g over coset representatives mu of fine / coarse. The
    multi-window system over `coarse` has the same frame operator as the
    single-window system G(g, fine).
    """
    reps = coset_representatives(fine, coarse)
    return WindowBundle(tuple(tf_shift(mu, window) for mu in reps))


# --- DUALITY ON THE ADJOINT LATTICE ---

def janssen_constant(lattice: Lattice) -> float:
    """kappa = |L| / N = N / s(L), the scale of the finite Janssen expansion."""
    return lattice.size / lattice.n


@dataclass(frozen=True, eq=False)
class JanssenReport:
    adjoint: Lattice
    coefficients: np.ndarray          # c_mu, ordered like adjoint.elements
    operator: np.ndarray
    residual: float
    constant: float

    def to_dict(self) -> dict:
        return {
            "constant": self.constant,
            "residual": self.residual,
            "coefficients": [
                {"mu": list(mu), "re": float(c.real), "im": float(c.imag)}
                for mu, c in zip(self.adjoint.elements, self.coefficients)
            ],
        }


def janssen_coefficients(phi: WindowBundle, psi: WindowBundle, adjoint: Lattice) -> np.ndarray:
    """c_mu = sum_j <phi_j, pi(mu) psi_j> for mu in the adjoint lattice."""
    if phi.count != psi.count:
        raise DimensionError(f"window counts differ: {phi.count} vs {psi.count}")
    shifted = lattice_atoms(psi, adjoint)                  # [mu, j, t] = pi(mu) psi_j
    return np.einsum("jt,mjt->m", phi.as_array(), shifted.conj())


def _expansion(coefficients: np.ndarray, adjoint: Lattice) -> np.ndarray:
    n = adjoint.n
    op = np.zeros((n, n), dtype=complex)
    for mu, c in zip(adjoint.elements, coefficients):
        op += c * tf_shift_matrix(mu, n)
    return op


def janssen_representation(phi: WindowBundle, psi: WindowBundle, lattice: Lattice) -> JanssenReport:
    """
    D_phi C_psi = kappa * sum_{mu in L°} c_mu pi(mu); the residual is the
    Frobenius distance to the directly assembled operator.
    """
    adjoint = adjoint_lattice(lattice)
    coefficients = janssen_coefficients(phi, psi, adjoint)
    kappa = janssen_constant(lattice)
    operator = kappa * _expansion(coefficients, adjoint)
    direct = frame_type_operator(phi, psi, lattice)
    residual = float(np.linalg.norm(operator - direct))
    if residual > config.TOL_JANSSEN * max(1.0, float(np.linalg.norm(direct))):
        logger.warning(f"Janssen expansion residual {residual:.3g} exceeds tolerance")
    return JanssenReport(adjoint, coefficients, operator, residual, kappa)


def calibrate_janssen_constant(phi: WindowBundle, psi: WindowBundle, lattice: Lattice) -> float:
    """
    Least-squares scalar kappa making kappa * sum_mu c_mu pi(mu) match the
    directly assembled D_phi C_psi.
    """
    adjoint = adjoint_lattice(lattice)
    expansion = _expansion(janssen_coefficients(phi, psi, adjoint), adjoint)
    direct = frame_type_operator(phi, psi, lattice)
    denom = np.vdot(expansion, expansion).real
    if denom == 0:
        raise ZeroWindowError("calibration needs a non-zero expansion")
    return float(np.vdot(expansion, direct).real / denom)


@dataclass(frozen=True)
class WexlerRazReport:
    passes: bool
    residuals: Dict[PhasePoint, float] = field(compare=False)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def to_dict(self) -> dict:
        return {
            "passes": self.passes,
            "max_residual": self.max_residual,
            "residuals": [{"mu": list(mu), "residual": r} for mu, r in self.residuals.items()],
        }


def wexler_raz_check(phi: WindowBundle, gamma: WindowBundle, lattice: Lattice) -> WexlerRazReport:
    """kappa * sum_j <phi_j, pi(mu) gamma_j> == delta_{mu,0} on the adjoint lattice."""
    adjoint = adjoint_lattice(lattice)
    kappa = janssen_constant(lattice)
    coefficients = janssen_coefficients(phi, gamma, adjoint)
    residuals = {}
    for mu, c in zip(adjoint.elements, coefficients):
        target = 1.0 if mu == (0, 0) else 0.0
        residuals[mu] = float(abs(kappa * c - target))
    passes = max(residuals.values()) < config.TOL_WEXLER_RAZ
    return WexlerRazReport(bool(passes), residuals)


def wexler_raz_solvable(bundle: WindowBundle, lattice: Lattice) -> Tuple[bool, float]:
    """
    Whether some gamma satisfies the Wexler-Raz relations. Conjugating the
    relations gives the linear system kappa * sum_j phi_j* pi(mu) gamma_j = delta.
    Returns (solvable, least-squares residual).
    """
    adjoint = adjoint_lattice(lattice)
    kappa = janssen_constant(lattice)
    n = lattice.n
    phis = bundle.as_array()
    rows = np.stack([
        np.concatenate([phis[j].conj() @ tf_shift_matrix(mu, n) for j in range(bundle.count)])
        for mu in adjoint.elements
    ])
    rhs = np.array([1.0 / kappa if mu == (0, 0) else 0.0 for mu in adjoint.elements], dtype=complex)
    gamma, *_ = scipy.linalg.lstsq(rows, rhs)
    residual = float(kappa * np.linalg.norm(rows @ gamma - rhs))
    return residual < config.TOL_WEXLER_RAZ, residual


def gramian(bundle: WindowBundle, adjoint: Lattice) -> np.ndarray:
    """G[mu, mu'] = sum_j <pi(mu') phi_j, pi(mu) phi_j> over the adjoint lattice."""
    atoms = lattice_atoms(bundle, adjoint).reshape(adjoint.size, -1)    # row mu = pi(mu) phi (stacked)
    return atoms.conj() @ atoms.T


def riesz_bounds(G: np.ndarray) -> Tuple[float, float]:
    """(A', B') = extreme eigenvalues of the Gramian, negative noise clipped."""
    residual = _hermitian_residual(G)
    if residual > config.TOL_HERMITIAN:
        raise NotHermitianError(f"Gramian is not hermitian (relative residual {residual:.3g})")
    eigs = np.clip(scipy.linalg.eigvalsh(G), 0.0, None)
    return float(eigs[0]), float(eigs[-1])


# --- EQUIVALENT FRAME CONDITIONS ---

COLLAPSED_CONDITIONS = {
    "viii": "dense range of D from l1: equals surjectivity of D in finite dimension",
    "x": "injectivity of the adjoint-lattice synthesis on l-infinity: equals Gramian injectivity",
    "xi": "dense range of the adjoint-lattice analysis: equals its surjectivity",
    "xii": "surjectivity of the adjoint-lattice analysis: equals Gramian invertibility",
}


@dataclass(frozen=True)
class CriteriaReport:
    is_frame: bool
    agree: bool
    conditions: Dict[str, dict]
    collapsed: Dict[str, str]

    def to_dict(self) -> dict:
        return {
            "is_frame": self.is_frame,
            "agree": self.agree,
            "conditions": self.conditions,
            "collapsed": self.collapsed,
        }


def _rank(matrix: np.ndarray, rel: float) -> int:
    if matrix.size == 0:
        return 0
    sv = scipy.linalg.svdvals(matrix)
    return int(np.sum(sv > rel * sv[0])) if sv[0] > 0 else 0


def frame_criteria_report(bundle: WindowBundle, lattice: Lattice) -> CriteriaReport:
    """
    Evaluates every equivalent frame condition that has finite-dimensional
    content. Injectivity on M-infinity collapses to injectivity on C^N.
    Singular-value thresholds use sqrt(TOL_RANK_REL) since sv(C)^2 = eig(S).
    """
    n = lattice.n
    sv_rel = math.sqrt(config.TOL_RANK_REL)
    C = analysis_matrix(bundle, lattice)
    S = C.conj().T @ C
    report = frame_bounds(S)
    adjoint = adjoint_lattice(lattice)
    G = gramian(bundle, adjoint)
    riesz_low, riesz_high = riesz_bounds(G)
    wr_ok, wr_residual = wexler_raz_solvable(bundle, lattice)
    rank_S = _rank(S, config.TOL_RANK_REL)
    rank_C = _rank(C, sv_rel)
    rank_G = _rank(G, config.TOL_RANK_REL)
    # rank(D) == rank(C*), computed separately as evidence
    rank_D = _rank(C.conj().T, sv_rel)

    conditions = {
        "i_frame": {"holds": report.is_frame, "A": report.lower_bound, "B": report.upper_bound},
        "ii_wexler_raz": {"holds": wr_ok, "residual": wr_residual},
        "iii_ron_shen": {"holds": riesz_low > config.TOL_FRAME_REL * riesz_high,
                         "A_riesz": riesz_low, "B_riesz": riesz_high},
        "iv_v_vi_S_invertible": {"holds": rank_S == n, "rank": rank_S},
        "vii_C_injective": {"holds": rank_C == n, "rank": rank_C},
        "ix_D_surjective": {"holds": rank_D == n, "rank": rank_D},
        "xiii_xv_gramian_invertible": {"holds": rank_G == adjoint.size, "rank": rank_G,
                                       "size": adjoint.size},
    }
    verdicts = {c["holds"] for c in conditions.values()}
    agree = len(verdicts) == 1
    if not agree:
        logger.warning(f"Frame criteria disagree for {lattice}: "
                       f"{ {k: v['holds'] for k, v in conditions.items()} }")
    return CriteriaReport(report.is_frame, agree, conditions, dict(COLLAPSED_CONDITIONS))
