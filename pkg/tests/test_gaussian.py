from math import factorial

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from ngent import gaussian as G
from ngent.errors import ValidationError

angles = st.floats(-2 * np.pi, 2 * np.pi)
squeezes = st.floats(-1.5, 1.5)
dims = st.integers(2, 7)


def test_annihilation_matrix():
    a = G.annihilation(4)
    np.testing.assert_allclose(np.diag(a, 1), np.sqrt([1, 2, 3]))
    assert np.count_nonzero(a) == 3
    with pytest.raises(ValidationError):
        G.annihilation(1)


@given(dims, angles, squeezes, st.complex_numbers(max_magnitude=1.0), angles, st.complex_numbers(max_magnitude=1.0))
def test_all_gates_unitary(D, th, r, alpha, bs, xi):
    for U in (
        G.rotation(th, D),
        G.squeeze_single(r, D),
        G.displacement(alpha, D),
        G.beam_splitter(bs, D),
        G.two_mode_squeeze(xi, D),
    ):
        assert G.is_unitary(U, 1e-10)


@given(st.integers(2, 5), st.floats(-1, 1), st.complex_numbers(max_magnitude=0.8))
def test_expm_matches_scipy(D, r, xi):
    a, b = G.mode_operators(D)
    gen = xi * a.T @ b.T - np.conj(xi) * a @ b
    np.testing.assert_allclose(G.two_mode_squeeze(xi, D), expm(gen), atol=1e-10)
    a1 = G.annihilation(D)
    np.testing.assert_allclose(G.squeeze_single(r, D), expm(0.5 * r * (a1 @ a1 - a1.T @ a1.T)), atol=1e-10)


def test_expm_rejects_non_antihermitian():
    with pytest.raises(ValidationError):
        G.expm_antihermitian(np.eye(3))


def test_rotation_is_diagonal_phase():
    np.testing.assert_allclose(np.diag(G.rotation(0.3, 5)), np.exp(-0.3j * np.arange(5)))


def test_coherent_amplitudes():
    alpha, D = 0.7 + 0.2j, 40
    col = G.displacement(alpha, D)[:, 0]
    n = np.arange(12)
    ref = np.exp(-abs(alpha) ** 2 / 2) * alpha**n / np.sqrt([float(factorial(k)) for k in n])
    np.testing.assert_allclose(col[:12], ref, atol=1e-10)


def test_squeezed_vacuum_amplitudes():
    r, D = 0.4, 60
    col = G.squeeze_single(r, D)[:, 0]
    for k in range(6):
        ref = (-np.tanh(r)) ** k * np.sqrt(float(factorial(2 * k))) / (2**k * factorial(k)) / np.sqrt(np.cosh(r))
        assert col[2 * k] == pytest.approx(ref, abs=1e-10)
        assert abs(col[2 * k + 1]) < 1e-12


def test_tmsv_amplitudes():
    r, D = 0.5, 40
    C = G.two_mode_squeeze(r, D)[:, 0].reshape(D, D)
    n = np.arange(10)
    np.testing.assert_allclose(np.diag(C)[:10], np.tanh(r) ** n / np.cosh(r), atol=1e-10)


def test_beam_splitter_on_single_photon():
    D, th = 4, 0.37
    U = G.beam_splitter(th, D)
    v = U[:, 1 * D + 0]  # |1,0>; U a^dag U^dag = cos(th) a^dag - sin(th) b^dag
    assert v[1 * D + 0] == pytest.approx(np.cos(th), abs=1e-12)
    assert v[0 * D + 1] == pytest.approx(-np.sin(th), abs=1e-12)


def test_params_roundtrip_and_validation():
    p = G.GaussianParams7(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7)
    assert G.GaussianParams7.from_array(p.to_array()) == p
    assert G.GaussianParams7.names()[-1] == "r"
    with pytest.raises(ValidationError):
        G.GaussianParams7.from_array(np.zeros(6))
    with pytest.raises(ValidationError):
        G.GaussianParams7(r=3.0).check(2.0)
    with pytest.raises(ValidationError):
        G.GaussianParams7(r=np.nan)


@given(st.lists(st.floats(-7, 7), min_size=7, max_size=7), st.integers(2, 6))
def test_block_family_matches_dense(x, D):
    x[6] = float(np.clip(x[6], -1.5, 1.5))
    p = G.GaussianParams7.from_array(x)
    dense = G.build_effective_unitary(p, D)
    np.testing.assert_allclose(G.effective_family(D).unitary(p), dense, atol=1e-12)
    assert G.is_unitary(dense)


def test_wrapping_rotation_angles_keeps_unitary(rng):
    D = 6
    x = rng.uniform(-3, 3, 7)
    shifted = x + 2 * np.pi * np.array([1, 0, -2, 3, 1, 0, 0])
    p = G.GaussianParams7.from_array(shifted)
    np.testing.assert_allclose(
        G.build_effective_unitary(p, D), G.build_effective_unitary(p.wrapped(), D), atol=1e-12
    )
    w = p.wrapped().to_array()
    assert np.all((w[G.ROTATION_SLOTS] >= 0) & (w[G.ROTATION_SLOTS] < 2 * np.pi))


def test_entangling_unitary_composition():
    D = 4
    U = G.entangling_unitary(0.3, -0.2, 0.25, D)
    ref = G.beam_splitter(0.3, D) @ G.two_mode_squeeze(0.25, D) @ G.beam_splitter(-0.2, D).conj().T
    np.testing.assert_allclose(U, ref, atol=1e-14)
