import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ngent import states as S
from ngent.dynamics import (
    IntegratorConfig,
    KerrParams,
    LossParams,
    PurePropagator,
    evolve_pure,
    kerr_hamiltonian,
    lindblad_evolve,
    lindblad_trajectory,
)
from ngent.errors import NumericalError, ValidationError
from ngent.fock import MixedState, TruncationPolicy, to_density
from ngent.gaussian import mode_operators
from ngent.witnesses import OptimizerConfig, witness_E, witness_ENG

from conftest import random_density

T8 = TruncationPolicy(8)


def test_hamiltonian_special_cases():
    assert not np.any(kerr_hamiltonian(KerrParams(), T8))
    H = kerr_hamiltonian(KerrParams(delta_a=1.0), T8)
    np.testing.assert_allclose(H, np.diag(np.repeat(np.arange(8.0), 8)))


def test_hamiltonian_pair_creation_elements():
    D = 8
    H = kerr_hamiltonian(KerrParams(0.0, 1.0, 1.0), TruncationPolicy(D))
    np.testing.assert_allclose(H, H.conj().T, atol=1e-12)
    for na in range(D - 1):
        for nb in range(D - 1):
            elem = H[(na + 1) * D + nb + 1, na * D + nb]
            assert elem == pytest.approx(np.sqrt((na + 1) * (nb + 1)), abs=1e-12)


def test_kerr_term_is_diagonal():
    D = 6
    H = kerr_hamiltonian(KerrParams(kappa_a=1.0), TruncationPolicy(D))
    n = np.repeat(np.arange(D), D)
    np.testing.assert_allclose(np.diag(H), -n * (n - 1))


def test_param_validation():
    with pytest.raises(ValidationError):
        KerrParams(chi=np.nan)
    with pytest.raises(ValidationError):
        LossParams(-0.1, 0.0)
    with pytest.raises(ValidationError):
        IntegratorConfig(dt=0)


def test_pure_evolution_basics():
    T = TruncationPolicy(20)
    H = kerr_hamiltonian(KerrParams(0.0, 1.0, 1.0), T)
    psi0 = S.vacuum(T)
    np.testing.assert_allclose(evolve_pure(H, 0.0, psi0).vector, psi0.vector, atol=1e-14)
    prop = PurePropagator(H)
    energy0 = np.vdot(psi0.vector, H @ psi0.vector).real
    for t in (0.5, 1.0, 2.0):
        v = prop.evolve(t, psi0).vector
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-10)
        assert np.vdot(v, H @ v).real == pytest.approx(energy0, abs=1e-8)


def test_non_hermitian_hamiltonian_rejected():
    with pytest.raises(ValidationError):
        PurePropagator(np.array([[0, 1], [0, 0]], dtype=complex))


def test_gaussian_limit_without_kerr():
    T = TruncationPolicy(16)
    psi = evolve_pure(kerr_hamiltonian(KerrParams(0.0, 0.5, 0.0), T), 1.0, S.vacuum(T))
    assert witness_E(psi) > 1.5
    assert witness_ENG(psi, OptimizerConfig(n_starts=4, seed=0)).value <= 1 + 1e-3


def test_kerr_state_is_non_gaussian_entangled():
    T = TruncationPolicy(16)
    psi = evolve_pure(kerr_hamiltonian(KerrParams(0.0, 1.0, 1.0), T), 1.0, S.vacuum(T))
    assert witness_E(psi) > 1
    assert witness_ENG(psi, OptimizerConfig(n_starts=4, seed=0)).value > 1


def test_lossless_lindblad_matches_closed_evolution():
    T = TruncationPolicy(10)
    H = kerr_hamiltonian(KerrParams(0.0, 1.0, 1.0), T)
    psi0 = S.vacuum(T)
    rho = lindblad_evolve(H, LossParams(), to_density(psi0), 1.0)
    v = evolve_pure(H, 1.0, psi0).vector
    np.testing.assert_allclose(rho.rho, np.outer(v, v.conj()), atol=1e-6)


def test_amplitude_damping_of_single_photon():
    T = TruncationPolicy(4)
    a, b = mode_operators(4)
    times = [0.0, 0.5, 1.0, 2.0]
    traj = lindblad_trajectory(np.zeros((16, 16)), LossParams(0.5, 0.0), to_density(S.fock_product(1, 0, T)), times)
    for t, rho in zip(times, traj):
        assert np.trace(a.T @ a @ rho.rho).real == pytest.approx(np.exp(-0.5 * t), abs=1e-6)


def test_trajectory_rejects_decreasing_times():
    T = TruncationPolicy(3)
    with pytest.raises(ValidationError):
        lindblad_trajectory(np.zeros((9, 9)), LossParams(), to_density(S.vacuum(T)), [1.0, 0.5])
    with pytest.raises(ValidationError):
        lindblad_evolve(np.zeros((9, 9)), LossParams(), to_density(S.vacuum(T)), -1.0)


def test_trace_drift_is_reported():
    # a huge step makes explicit RK4 diverge
    T = TruncationPolicy(6)
    H = kerr_hamiltonian(KerrParams(0.0, 1.0, 1.0), T)
    with pytest.raises(NumericalError):
        lindblad_evolve(H, LossParams.equal(5.0), to_density(S.vacuum(T)), 2.0, IntegratorConfig(dt=1.0))


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.5))
def test_lindblad_preserves_trace_hermiticity_positivity(seed, ga, gb, t):
    rng = np.random.default_rng(seed)
    D = 4
    T = TruncationPolicy(D, leak_tol=1.0)
    H = kerr_hamiltonian(KerrParams(rng.normal(), complex(rng.normal(), rng.normal()), rng.normal()), T)
    rho0 = MixedState(random_density(rng, D, 3), T)
    # rank-deficient start: keep ||H|| dt small so RK4 error stays below the PSD tolerance
    dt = 0.01 / max(1.0, np.linalg.norm(H, 2))
    rho = lindblad_evolve(H, LossParams(ga, gb), rho0, t, IntegratorConfig(dt=dt))
    assert np.trace(rho.rho).real == pytest.approx(1.0, abs=1e-8)
    np.testing.assert_array_equal(rho.rho, rho.rho.conj().T)
    assert np.linalg.eigvalsh(rho.rho)[0] >= -1e-6


def test_rk4_fourth_order_convergence():
    T = TruncationPolicy(8)
    H = kerr_hamiltonian(KerrParams(0.0, 1.0, 1.0), T)
    rho0 = to_density(S.vacuum(T))
    loss = LossParams.equal(0.3)

    def run(dt):
        return lindblad_evolve(H, loss, rho0, 1.0, IntegratorConfig(dt=dt)).rho

    ref = run(0.0025)
    h = 0.04
    e1 = np.abs(run(h) - ref).max()
    e2 = np.abs(run(h / 2) - ref).max()
    # fit e = C dt^4 on the finer step; halving must match the model within 16x
    C = e2 / (h / 2) ** 4
    assert np.abs(run(h) - run(h / 2)).max() <= 16 * C * (h / 2) ** 4 * 16
    assert 8 <= e1 / e2 <= 32
