import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from photonsub.beamsplitter import (
    FIFTY_FIFTY,
    BeamSplitterParams,
    apply_50_50,
    apply_general,
    block_unitary,
    conditional_probability,
    conditional_probability_beta,
    split_coefficients,
    su2_coherent,
)
from photonsub.errors import DomainError
from photonsub.fock import FockAmplitudes, TwoModeState, fock_state, schmidt, tensor

S2 = math.sqrt(2)


def kron_unitary(xi: complex, dim: int) -> np.ndarray:
    """Oracle: exp(xi a†b - xi* a b†) on the full (dim x dim) two-mode space."""
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    eye = np.eye(dim)
    A, B = np.kron(a, eye), np.kron(eye, a)
    gen = xi * A.conj().T @ B - np.conj(xi) * A @ B.conj().T
    return expm(gen)


def oracle_apply(xi, state: TwoModeState) -> np.ndarray:
    # pad so that every total-photon block fits inside the box
    n = state.na + state.nb
    box = np.zeros((n + 1, n + 1), dtype=complex)
    box[: state.na + 1, : state.nb + 1] = state.amps
    return (kron_unitary(xi, n + 1) @ box.ravel()).reshape(n + 1, n + 1)


def two_mode(n, k, dim=None):
    dim = dim or max(n, k)
    m = np.zeros((dim + 1, dim + 1), dtype=complex)
    m[n, k] = 1
    return TwoModeState(m)


def test_params_phase_wrap_and_rates():
    p = BeamSplitterParams(math.pi / 4, 3 * math.pi)
    assert -math.pi <= p.phase < math.pi
    assert p.transmission ** 2 + p.reflection ** 2 == pytest.approx(1.0)
    assert FIFTY_FIFTY.xi == pytest.approx(1j * math.pi / 4)
    assert BeamSplitterParams.from_complex(0.3j).xi == pytest.approx(0.3j)
    with pytest.raises(DomainError):
        BeamSplitterParams(-0.1)


def test_su2_low_orders():
    np.testing.assert_array_equal(su2_coherent(0).amps, [[1]])
    s1 = su2_coherent(1).amps
    np.testing.assert_allclose(s1, [[0, 1 / S2], [1j / S2, 0]], atol=1e-15)
    s2 = su2_coherent(2).amps
    expected = np.zeros((3, 3), dtype=complex)
    expected[0, 2], expected[1, 1], expected[2, 0] = 0.5, 1j * S2 / 2, -0.5
    np.testing.assert_allclose(s2, expected, atol=1e-15)


def test_su2_orthonormal():
    N = 20
    vecs = np.array([su2_coherent(n, N).amps.ravel() for n in range(N + 1)])
    np.testing.assert_allclose(vecs.conj() @ vecs.T, np.eye(N + 1), atol=1e-12)


@pytest.mark.parametrize("n", range(1, 9))
def test_su2_not_factorizable(n):
    assert schmidt(su2_coherent(n)).rank(1e-8) >= 2


def test_su2_domain():
    with pytest.raises(DomainError):
        su2_coherent(-1)
    with pytest.raises(DomainError):
        su2_coherent(3, trunc=2)


def test_split_coefficients_triangle():
    c = split_coefficients(5)
    assert c[3, 3] == 0
    assert c[2, 1] == pytest.approx(1j ** 2 * math.sqrt(3) / 2 ** 1.5)


def test_apply_50_50_vacuum():
    out = apply_50_50(fock_state(0))
    np.testing.assert_array_equal(out.amps, [[1]])


def test_apply_50_50_fock_gives_su2_rows():
    for n in range(6):
        out = apply_50_50(fock_state(n, 8))
        np.testing.assert_allclose(out.amps, su2_coherent(n, 8).amps, atol=1e-15)


def test_block_unitary_2x2_oracle():
    # single photon: the block is a rotation by |xi| with phases from arg(xi)
    xi = 0.4 * np.exp(0.7j)
    U = block_unitary(BeamSplitterParams.from_complex(xi), 1)
    r, phi = abs(xi), np.angle(xi)
    expected = np.array([[math.cos(r), -np.exp(-1j * phi) * math.sin(r)],
                         [np.exp(1j * phi) * math.sin(r), math.cos(r)]])
    np.testing.assert_allclose(U, expected, atol=1e-14)


def test_apply_general_identity():
    rng = np.random.default_rng(0)
    s = TwoModeState(rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3)))
    out = apply_general(BeamSplitterParams(0.0), s)
    np.testing.assert_allclose(out.amps[:4, :3], s.amps, atol=1e-15)
    assert np.all(out.amps[4:, :] == 0) and np.all(out.amps[:, 3:] == 0)


def test_apply_general_full_swap():
    out = apply_general(BeamSplitterParams(math.pi / 2, math.pi / 2), two_mode(1, 0)).cropped(1, 1)
    np.testing.assert_allclose(out.amps, [[0, 1j], [0, 0]], atol=1e-15)


@pytest.mark.parametrize("n", range(0, 7))
def test_quarter_turn_is_su2_with_modes_swapped(n):
    # the tabulated basis is the literal operator on |0,n>, i.e. on |n,0> with output labels exchanged
    via_b = apply_general(FIFTY_FIFTY, two_mode(0, n)).cropped(n, n)
    np.testing.assert_allclose(via_b.amps, su2_coherent(n).amps, atol=1e-13)
    via_a = apply_general(FIFTY_FIFTY, two_mode(n, 0)).cropped(n, n)
    np.testing.assert_allclose(via_a.swapped().amps, su2_coherent(n).amps, atol=1e-13)


def test_quarter_turn_on_first_port_differs_by_label_exchange():
    literal = apply_general(FIFTY_FIFTY, two_mode(1, 0)).cropped(1, 1).amps
    np.testing.assert_allclose(literal, [[0, 1j / S2], [1 / S2, 0]], atol=1e-15)
    assert not np.allclose(literal, su2_coherent(1).amps)


@given(st.integers(0, 2 ** 31 - 1), st.integers(0, 10))
@settings(max_examples=25, deadline=None)
def test_apply_50_50_matches_general(seed, N):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
    s = FockAmplitudes(v / np.linalg.norm(v))
    vac = fock_state(0, N)
    direct = apply_50_50(s).amps
    np.testing.assert_allclose(apply_general(FIFTY_FIFTY, tensor(vac, s)).amps[: N + 1, : N + 1],
                               direct, atol=1e-10)
    np.testing.assert_allclose(apply_general(FIFTY_FIFTY, tensor(s, vac)).swapped().amps[: N + 1, : N + 1],
                               direct, atol=1e-10)


@given(st.integers(0, 2 ** 31 - 1), st.floats(0, 3), st.floats(-math.pi, math.pi),
       st.integers(0, 4), st.integers(0, 4))
@settings(max_examples=25, deadline=None)
def test_apply_general_against_expm_and_unitary(seed, r, phi, na, nb):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=(na + 1, nb + 1)) + 1j * rng.normal(size=(na + 1, nb + 1))
    s = TwoModeState(amps / np.linalg.norm(amps))
    params = BeamSplitterParams(r, phi)
    out = apply_general(params, s)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(out.amps, oracle_apply(params.xi, s), atol=1e-11)


def test_conditional_probability_examples():
    assert conditional_probability(0, 0) == 1.0
    assert conditional_probability(1, 1) == 0.5
    assert conditional_probability(2, 3) == pytest.approx(10 / 32, rel=1e-15)
    assert conditional_probability_beta(2, 3) == pytest.approx(10 / 32, rel=1e-12)
    with pytest.raises(DomainError):
        conditional_probability(-1, 2)


@pytest.mark.parametrize("n", range(0, 41))
def test_conditional_rows_and_forms(n):
    row = [conditional_probability(m, n - m) for m in range(n + 1)]
    assert math.fsum(row) == pytest.approx(1.0, abs=1e-14)
    for m in range(n + 1):
        assert conditional_probability_beta(m, n - m) == pytest.approx(row[m], rel=1e-12)


def test_conditional_matches_su2_weights():
    for n in range(8):
        p = np.abs(su2_coherent(n).amps) ** 2
        for m in range(n + 1):
            assert p[m, n - m] == pytest.approx(conditional_probability(m, n - m), abs=1e-15)
