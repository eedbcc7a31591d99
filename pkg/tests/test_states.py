import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ngent import states as S
from ngent.errors import LeakageError, ValidationError
from ngent.fock import MixedState, PureState, TruncationPolicy, leakage

T = TruncationPolicy(20)


@pytest.mark.parametrize(
    "make",
    [
        lambda: S.vacuum(T),
        lambda: S.noon(3, T),
        lambda: S.tmsv(0.5, T),
        lambda: S.stmsv(0.5, T),
        lambda: S.three_spdc(0.1, T),
        lambda: S.two_mode_cat(1.0, T),
        lambda: S.tmsv_mixture(0.5, 0.4, -0.4, T),
        lambda: S.photon_subtracted(1, S.GateProgram((S.Gate("two_mode_squeeze", 0.5),)), T),
        lambda: S.hom_state(T),
    ],
)
def test_generators_return_valid_states(make):
    s = make()
    assert isinstance(s, (PureState, MixedState))
    assert leakage(s) <= T.leak_tol


def test_noon_coefficients_and_range():
    C = S.noon(4, T).coeffs
    assert C[4, 0] == C[0, 4] == pytest.approx(1 / np.sqrt(2))
    with pytest.raises(ValidationError):
        S.noon(20, T)
    with pytest.raises(ValidationError):
        S.noon(0, T)


def test_cat_normalization_matches_closed_form():
    alpha = 0.8
    psi = S.two_mode_cat(alpha, TruncationPolicy(30))
    # <0,0| c (|a,a> + |-a,-a>) = 2c exp(-alpha^2), c = 1/sqrt(2 (1 + exp(-4 alpha^2)))
    c = 1 / np.sqrt(2 * (1 + np.exp(-4 * alpha**2)))
    assert psi.coeffs[0, 0].real == pytest.approx(2 * c * np.exp(-(alpha**2)), abs=1e-10)


def test_hom_state_is_two_photon_noon():
    C = S.hom_state(T).coeffs
    assert abs(C[1, 1]) < 1e-12
    assert abs(C[2, 0]) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert abs(C[0, 2]) == pytest.approx(1 / np.sqrt(2), abs=1e-12)


def test_stmsv_keeps_even_pairs():
    C = S.stmsv(0.5, T).coeffs
    assert np.allclose(np.diag(C)[1::2], 0, atol=1e-12)
    assert abs(C[2, 2]) > 0.05


def test_three_spdc_photon_pattern():
    C = S.three_spdc(0.1, T).coeffs
    # generator creates one A photon per two B photons
    na, nb = np.nonzero(np.abs(C) > 1e-12)
    assert np.all(nb == 2 * na)


def test_tmsv_mixture_weight_checked():
    with pytest.raises(ValidationError):
        S.tmsv_mixture(1.5, 0.1, 0.2, T)


def test_leakage_errors_raised():
    with pytest.raises(LeakageError):
        S.tmsv(2.0, TruncationPolicy(10))
    with pytest.raises(LeakageError):
        S.two_mode_cat(3.0, TruncationPolicy(10))
    prog = S.GateProgram((S.Gate("squeeze", 2.0, "A"),))
    with pytest.raises(LeakageError):
        S.photon_subtracted(1, prog, TruncationPolicy(10))


def test_photon_subtraction_of_vacuum_fails():
    with pytest.raises(ValidationError):
        S.photon_subtracted(1, S.GateProgram(()), T)


def test_photon_subtracted_tmsv_closed_form():
    r, D = 0.5, 30
    psi = S.photon_subtracted(1, S.GateProgram((S.Gate("two_mode_squeeze", r),)), TruncationPolicy(D))
    lam = np.tanh(r)
    n = np.arange(1, 8)
    # a TMSV ~ sum lam^n sqrt(n) |n-1, n>
    ref = lam**n * np.sqrt(n)
    got = np.array([psi.coeffs[k - 1, k] for k in n])
    np.testing.assert_allclose(np.abs(got) / np.abs(got[0]), ref / ref[0], rtol=1e-8)


@given(
    st.lists(
        st.tuples(
            st.sampled_from(["rotation", "squeeze", "displacement", "beam_splitter", "two_mode_squeeze"]),
            st.floats(-0.3, 0.3),
            st.sampled_from(["A", "B"]),
        ),
        max_size=4,
    )
)
def test_gate_program_json_roundtrip(items):
    prog = S.GateProgram(tuple(S.Gate(n, p, m) for n, p, m in items))
    back = S.GateProgram.from_list(prog.to_list())
    np.testing.assert_allclose(back.unitary(5), prog.unitary(5), atol=1e-14)


def test_gate_validation():
    with pytest.raises(ValidationError):
        S.Gate("kerr", 0.1)
    with pytest.raises(ValidationError):
        S.Gate("rotation", 0.1, "C")
    with pytest.raises(ValidationError):
        S.Gate("rotation", np.inf)


def test_program_order_first_gate_acts_first():
    D = 5
    g1, g2 = S.Gate("displacement", 0.2, "A"), S.Gate("squeeze", 0.3, "A")
    U = S.GateProgram((g1, g2)).unitary(D)
    np.testing.assert_allclose(U, g2.matrix(D) @ g1.matrix(D), atol=1e-14)
