import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import DimensionError, ZeroWindowError
from phase_space import (PhasePoint, Signal, TFMatrix, Window, box_window, commutation_phase, composition_phase,
                         delta_window, gaussian_window, make_window, phase_space_inner, random_signal,
                         signal_inner, stft, stft_adjoint, stft_matrix, tf_shift, tf_shift_matrix)
from tests.conftest import assert_signal_close, random_window


def _point(n, rng):
    return PhasePoint(int(rng.integers(n)), int(rng.integers(n)))


# --- TIME-FREQUENCY SHIFTS ---

def test_zero_shift_is_identity(rng):
    f = random_signal(8, rng)
    assert tf_shift((0, 0), f) == f


def test_pure_translation_is_cyclic_shift(rng):
    f = random_signal(8, rng)
    assert_signal_close(tf_shift((3, 0), f), np.roll(f.values, 3), atol=0)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_tf_shift_matrix_is_unitary_and_matches_tf_shift(n, rng):
    for _ in range(100):
        z = _point(n, rng)
        P = tf_shift_matrix(z, n)
        assert np.linalg.norm(P @ P.conj().T - np.eye(n)) < 1e-11
        f = random_signal(n, rng)
        assert_signal_close(P @ f.values, tf_shift(z, f), atol=1e-12)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_composition_law(n, rng):
    for _ in range(100):
        z1, z2 = _point(n, rng), _point(n, rng)
        f = random_signal(n, rng)
        lhs = tf_shift(z1, tf_shift(z2, f))
        rhs = composition_phase(z1, z2, n) * tf_shift((z1.k + z2.k, z1.l + z2.l), f).values
        assert_signal_close(lhs, rhs, atol=1e-11)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_commutation_law(n, rng):
    for _ in range(100):
        z1, z2 = _point(n, rng), _point(n, rng)
        P1, P2 = tf_shift_matrix(z1, n), tf_shift_matrix(z2, n)
        c = commutation_phase(z1, z2, n)
        assert np.linalg.norm(P1 @ P2 - c * P2 @ P1) < 1e-11


def test_commutation_phase_examples():
    assert commutation_phase((1, 0), (2, 0), 4) == pytest.approx(1)
    assert commutation_phase((0, 0), (3, 1), 4) == pytest.approx(1)
    # pi(1,0) pi(0,1) pi(0,1)^-1 pi(1,0)^-1 read off as a 4 x 4 matrix
    P1, P2 = tf_shift_matrix((1, 0), 4), tf_shift_matrix((0, 1), 4)
    group_commutator = P1 @ P2 @ P1.conj().T @ P2.conj().T
    c = commutation_phase((1, 0), (0, 1), 4)
    assert c == pytest.approx(-1j)
    assert np.allclose(group_commutator, c * np.eye(4))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 12), k1=st.integers(-20, 20), l1=st.integers(-20, 20),
       k2=st.integers(-20, 20), l2=st.integers(-20, 20))
def test_commutation_phase_is_ratio_of_composition_phases(n, k1, l1, k2, l2):
    z1, z2 = (k1, l1), (k2, l2)
    c = commutation_phase(z1, z2, n)
    assert abs(abs(c) - 1) < 1e-12
    assert c == pytest.approx(composition_phase(z1, z2, n) / composition_phase(z2, z1, n))


# --- STFT ---

def test_stft_with_delta_window_matches_closed_form(rng):
    n = 8
    f = random_signal(n, rng)
    V = stft(delta_window(n), f).values
    k, l = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    expected = f.values[k] * np.exp(-2j * np.pi * l * k / n)
    assert np.allclose(V, expected, atol=1e-12)


def test_stft_of_window_with_itself_at_origin():
    phi = gaussian_window(8)
    assert stft(phi, phi).values[0, 0] == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_moyal_identity(n, rng):
    for _ in range(100):
        f, phi = random_signal(n, rng), random_signal(n, rng)
        total = np.sum(np.abs(stft(phi, f).values) ** 2)
        assert total / (n * f.norm2() ** 2 * phi.norm2() ** 2) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_stft_covariance(n, rng):
    k_w, l_w = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    for _ in range(100):
        z = _point(n, rng)
        phi, f = random_window(n, rng), random_signal(n, rng)
        shifted = stft(phi, tf_shift(z, f)).values
        moved = stft(phi, f).values[(k_w - z.k) % n, (l_w - z.l) % n]
        assert np.allclose(np.abs(shifted), np.abs(moved), atol=1e-12)
        # phase picked up by moving the shift onto the window
        phase = np.exp(-2j * np.pi * z.k * (l_w - z.l) / n)
        assert np.allclose(shifted, phase * moved, atol=1e-12)


def test_stft_matrix_rows_follow_row_major_order(rng):
    phi, f = random_window(6, rng), random_signal(6, rng)
    assert np.allclose(stft_matrix(phi) @ f.values, stft(phi, f).values.reshape(-1))


@pytest.mark.parametrize("n", [4, 6, 8])
def test_stft_adjointness(n, rng):
    for _ in range(100):
        phi, g = random_window(n, rng), random_signal(n, rng)
        F = TFMatrix(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        lhs = signal_inner(stft_adjoint(phi, F), g)
        rhs = phase_space_inner(F, stft(phi, g))
        assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs))


def test_resolution_of_identity(rng):
    n = 8
    phi, f = gaussian_window(n), random_signal(n, rng)
    back = stft_adjoint(phi, stft(phi, f))
    assert_signal_close(back.values / n, f, atol=1e-10)


def test_zero_inputs():
    n = 6
    phi = gaussian_window(n)
    assert not np.any(stft(phi, Signal(np.zeros(n))).values)
    assert stft_adjoint(phi, TFMatrix(np.zeros((n, n)))).is_zero()


def test_stft_rejects_zero_window_and_mismatched_dimension(rng):
    with pytest.raises(ZeroWindowError):
        stft(Window(np.zeros(4)), random_signal(4, rng))
    with pytest.raises(DimensionError):
        stft(gaussian_window(4), random_signal(6, rng))


# --- WINDOWS ---

@pytest.mark.parametrize("n", [4, 5, 8, 16, 64])
def test_gaussian_window_is_unit_and_even(n):
    phi = gaussian_window(n)
    assert phi.normalization == "unit"
    assert phi.norm2() == pytest.approx(1, abs=1e-12)
    t = np.arange(1, n)
    assert np.allclose(phi.values[t], phi.values[n - t], rtol=1e-14, atol=0)


@pytest.mark.parametrize("n", [4, 8, 16])
def test_gaussian_window_is_fixed_by_unitary_dft(n):
    phi = gaussian_window(n).values
    assert np.allclose(np.fft.fft(phi) / np.sqrt(n), phi, atol=1e-12)


def test_box_window_support():
    phi = box_window(8, 3)
    assert np.flatnonzero(phi.values).tolist() == [0, 1, 7]
    assert phi.norm2() == pytest.approx(1)
    with pytest.raises(DimensionError):
        box_window(8, 9)


def test_make_window_and_unit_tag():
    with pytest.raises(ZeroWindowError):
        make_window(np.zeros(4))
    raw = make_window([3.0, 4.0], normalize=False)
    assert raw.normalization == "raw" and raw.norm2() == pytest.approx(5)
    with pytest.raises(ValueError):
        Window(np.array([1.0, 1.0]), normalization="unit")


def test_signals_are_read_only(rng):
    f = random_signal(4, rng)
    with pytest.raises(ValueError):
        f.values[0] = 1.0
