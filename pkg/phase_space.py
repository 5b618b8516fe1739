"""
Finite phase space Z_N x Z_N: signals, time-frequency shifts, the STFT and
its adjoint, and window generators.

Conventions (pinned by the commutation tests):
    (pi(k, l) f)(t) = exp(2j*pi*l*t/N) * f((t - k) mod N)
    V_phi f(k, l)   = <f, pi(k, l) phi> = sum_t f(t) conj(phi(t - k)) exp(-2j*pi*l*t/N)
    V* V            = N * ||phi||^2 * I   (no 1/N in the STFT)
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

import config
from errors import DimensionError, ZeroWindowError


class PhasePoint(NamedTuple):
    """A point z = (k, l) of Z_N^2; k is the time shift, l the frequency shift."""
    k: int
    l: int

    def canonical(self, n: int) -> "PhasePoint":
        return PhasePoint(self.k % n, self.l % n)


def _frozen_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != ndim:
        raise DimensionError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Signal:
    """A vector of C^N, the finite model of f in L^2(R)."""
    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values, 1)
        if arr.shape[0] < 1:
            raise DimensionError("a signal needs at least one sample")
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def norm2(self) -> float:
        return float(np.linalg.norm(self.values))

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def __eq__(self, other):
        return isinstance(other, Signal) and np.array_equal(self.values, other.values)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Window(Signal):
    """A Signal used as an analysis window; 'unit' windows have norm 1."""
    normalization: str = "raw"

    def __post_init__(self):
        super().__post_init__()
        if self.normalization not in ("unit", "raw"):
            raise ValueError(f"unknown normalization tag '{self.normalization}'")
        if self.normalization == "unit" and abs(self.norm2() - 1.0) > config.TOL_UNIT_WINDOW:
            raise ValueError(f"window tagged unit has norm {self.norm2():.17g}")


@dataclass(frozen=True, eq=False)
class TFMatrix:
    """An N x N complex array over phase space, indexed (k, l)."""
    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values, 2)
        if arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"phase-space arrays must be square, got {arr.shape}")
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    __hash__ = None


def check_dimension(n: int, *objs) -> None:
    """Raises DimensionError unless every object lives in dimension n."""
    for obj in objs:
        if obj.n != n:
            raise DimensionError(f"dimension mismatch: expected N={n}, got N={obj.n}")


def make_window(values, normalize: bool = True) -> Window:
    arr = np.asarray(values, dtype=complex)
    norm = np.linalg.norm(arr)
    if norm == 0:
        raise ZeroWindowError("a window must be non-zero")
    if normalize:
        return Window(arr / norm, normalization="unit")
    return Window(arr, normalization="raw")


def random_signal(n: int, rng: np.random.Generator) -> Signal:
    """Complex white gaussian noise of length n."""
    return Signal(rng.standard_normal(n) + 1j * rng.standard_normal(n))


# --- TIME-FREQUENCY SHIFTS ---

def _modulation(l: int, n: int) -> np.ndarray:
    return np.exp(2j * np.pi * l * np.arange(n) / n)


def tf_shift(z, f: Signal) -> Signal:
    """pi(z) f: translate by k, then modulate by l."""
    k, l = PhasePoint(*z).canonical(f.n)
    return Signal(_modulation(l, f.n) * np.roll(f.values, k))


def tf_shift_matrix(z, n: int) -> np.ndarray:
    """The N x N unitary matrix of pi(z)."""
    k, l = PhasePoint(*z).canonical(n)
    # Column s of the translation is the unit vector at (s + k) mod N
    return _modulation(l, n)[:, None] * np.roll(np.eye(n), k, axis=0)


def commutation_phase(z1, z2, n: int) -> complex:
    """
    The scalar c with pi(z1) pi(z2) = c * pi(z2) pi(z1),
    c = exp(2j*pi*(l1*k2 - l2*k1)/N).
    """
    k1, l1 = PhasePoint(*z1).canonical(n)
    k2, l2 = PhasePoint(*z2).canonical(n)
    return complex(np.exp(2j * np.pi * ((l1 * k2 - l2 * k1) % n) / n))


def composition_phase(z1, z2, n: int) -> complex:
    """The scalar c with pi(z1) pi(z2) = c * pi(z1 + z2), c = exp(-2j*pi*l2*k1/N)."""
    k1, _ = PhasePoint(*z1).canonical(n)
    _, l2 = PhasePoint(*z2).canonical(n)
    return complex(np.exp(-2j * np.pi * ((l2 * k1) % n) / n))


# --- STFT ---

def tf_atoms(phi: Signal) -> np.ndarray:
    """
    All time-frequency shifts of phi as an (N, N, N) array:
    atoms[k, l, :] = pi(k, l) phi.
    """
    n = phi.n
    t = np.arange(n)
    shifted = np.stack([np.roll(phi.values, k) for k in range(n)])       # [k, t]
    modulations = np.exp(2j * np.pi * np.outer(t, t) / n)               # [l, t]
    return shifted[:, None, :] * modulations[None, :, :]


def stft_matrix(phi: Signal) -> np.ndarray:
    """The N^2 x N analysis matrix of V_phi; row k*N + l is (pi(k, l) phi)*."""
    n = phi.n
    return np.conj(tf_atoms(phi)).reshape(n * n, n)


def stft(phi: Signal, f: Signal) -> TFMatrix:
    """V_phi f(k, l) = <f, pi(k, l) phi>."""
    check_dimension(phi.n, f)
    if phi.is_zero():
        raise ZeroWindowError("the STFT window must be non-zero")
    return TFMatrix((stft_matrix(phi) @ f.values).reshape(phi.n, phi.n))


def stft_adjoint(phi: Signal, F: TFMatrix) -> Signal:
    """V*_phi F = sum_{k,l} F(k, l) pi(k, l) phi."""
    check_dimension(phi.n, F)
    n = phi.n
    return Signal(tf_atoms(phi).reshape(n * n, n).T @ F.values.reshape(n * n))


def phase_space_inner(F: TFMatrix, G: TFMatrix) -> complex:
    """<F, G> = sum_z F(z) conj(G(z))."""
    check_dimension(F.n, G)
    return complex(np.vdot(G.values, F.values))


def signal_inner(f: Signal, g: Signal) -> complex:
    """<f, g> = sum_t f(t) conj(g(t))."""
    check_dimension(f.n, g)
    return complex(np.vdot(g.values, f.values))


# --- WINDOWS ---

def gaussian_window(n: int) -> Window:
    """
    Periodized Gaussian phi(t) = sum_j exp(-pi*N*(t/N + j)^2), l2-normalized.

    The index range j = -J-1 .. J is symmetric under j -> -1-j, which keeps
    phi(t) == phi(N - t) exact; J is the smallest count whose dropped terms
    fall below GAUSSIAN_TAIL.
    """
    if n < 2:
        raise DimensionError("gaussian_window needs N >= 2")
    J = 1 + math.ceil(math.sqrt(-math.log(config.GAUSSIAN_TAIL) / (math.pi * n)))
    t = np.arange(n) / n
    js = np.arange(-J - 1, J + 1)
    values = np.exp(-np.pi * n * (t[:, None] + js[None, :]) ** 2).sum(axis=1)
    return make_window(values)


def box_window(n: int, width: int) -> Window:
    """Indicator of `width` samples centered at t = 0 (wrapping), l2-normalized."""
    if n < 2:
        raise DimensionError("box_window needs N >= 2")
    if not 1 <= width <= n:
        raise DimensionError(f"box width must lie in [1, {n}], got {width}")
    values = np.zeros(n)
    right = (width + 1) // 2
    values[:right] = 1.0
    if width - right:
        values[n - (width - right):] = 1.0
    return make_window(values)


def delta_window(n: int) -> Window:
    """The impulse at t = 0."""
    values = np.zeros(n)
    values[0] = 1.0
    return make_window(values)
