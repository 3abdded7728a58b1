import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from photonsub.errors import DomainError, VanishingStateError
from photonsub.fock import FockAmplitudes, fidelity, fock_state, mean_photon_number, normalize, photon_distribution
from photonsub.named_states import (
    CoherentParam,
    SqueezingParam,
    cat_even,
    cat_odd,
    coherent,
    lambda_odd,
    lambda_odd_input,
    lambda_vac,
    named_state,
    odd_squeezed,
    squeezed_vacuum,
    subtracted_odd_squeezed,
    subtracted_squeezed_vacuum,
    subtraction_probability,
)
from photonsub.subtraction import decompose_output, subtracted_state

GRID_XI = [0.1, 0.3, 0.5, 0.7, 0.9]
GRID_N = range(0, 6)

mpmath.mp.dps = 40


def brute_lambda_vac(x, n):
    """sqrt(sum |<k| a^n sum_m sqrt((2m)!)/m! (x/2)^m |2m>|^2) at 40 digits."""
    x = mpmath.mpf(x)

    def term(m):
        m = int(m)
        if 2 * m < n:
            return mpmath.mpf(0)
        return (mpmath.factorial(2 * m) / mpmath.factorial(m)) ** 2 / mpmath.factorial(2 * m - n) * (x / 2) ** (2 * m)

    return float(mpmath.sqrt(mpmath.nsum(term, [0, mpmath.inf])))


def brute_lambda_odd(x, n):
    """Same for the raw odd series sum_m m!/sqrt((2m+1)!) (2x)^m |2m+1>."""
    x = mpmath.mpf(x)

    def term(m):
        m = int(m)
        if 2 * m + 1 < n:
            return mpmath.mpf(0)
        return mpmath.factorial(m) ** 2 / mpmath.factorial(2 * m + 1 - n) * (2 * x) ** (2 * m)

    return float(mpmath.sqrt(mpmath.nsum(term, [0, mpmath.inf])))


# -- parameters --------------------------------------------------------------

def test_param_types():
    assert SqueezingParam(0.5, math.pi / 2).value == pytest.approx(0.5j)
    assert CoherentParam(2.0).value == 2.0
    with pytest.raises(DomainError):
        SqueezingParam(1.0)
    with pytest.raises(DomainError):
        CoherentParam(-1.0)
    with pytest.raises(DomainError):
        squeezed_vacuum(1.2)
    with pytest.raises(DomainError):
        odd_squeezed(0.999j * 1.01)


# -- coherent and cats ---------------------------------------------------------

def test_coherent_examples():
    np.testing.assert_array_equal(coherent(0).amps, [1])
    assert mean_photon_number(coherent(1.0)) == pytest.approx(1.0, abs=1e-10)
    assert coherent(2.0, trunc=40).norm() == pytest.approx(1.0, abs=1e-12)


def test_cat_examples():
    np.testing.assert_array_equal(cat_even(0).amps, [1])
    e, o = cat_even(1.0, trunc=40), cat_odd(1.0, trunc=40)
    mixed = FockAmplitudes((math.sqrt(math.cosh(1)) * e.amps + math.sqrt(math.sinh(1)) * o.amps) / math.exp(0.5))
    assert fidelity(mixed, coherent(1.0, trunc=40)) == pytest.approx(1.0, abs=1e-12)
    assert np.all(photon_distribution(cat_even(1.0))[1::2] == 0)
    assert np.all(photon_distribution(cat_odd(1.0))[0::2] == 0)
    with pytest.raises(DomainError):
        cat_odd(0)


@given(st.floats(0.05, 4.0), st.floats(-math.pi, math.pi))
@settings(max_examples=30, deadline=None)
def test_cats_are_normalized_projections(r, phi):
    z = cmath.rect(r, phi)
    c = coherent(z, trunc=80)
    for make, parity in ((cat_even, 0), (cat_odd, 1)):
        cat = make(z, trunc=80)
        assert cat.norm() == pytest.approx(1.0, abs=1e-10)
        proj = np.zeros(81, dtype=complex)
        proj[parity::2] = c.amps[parity::2]
        assert fidelity(cat, normalize(FockAmplitudes(proj))[0]) == pytest.approx(1.0, abs=1e-12)


# -- squeezed vacuum family ----------------------------------------------------

def test_squeezed_vacuum_examples():
    np.testing.assert_array_equal(squeezed_vacuum(0).amps, [1])
    assert squeezed_vacuum(0.5, trunc=80).norm() == pytest.approx(1.0, abs=1e-10)


def test_squeezed_vacuum_small_xi():
    xi = 0.05
    # the series gives the |2> amplitude -xi/sqrt(2); see the decisions log for the sign
    approx = normalize(FockAmplitudes([1, 0, -xi / math.sqrt(2)]))[0].padded(squeezed_vacuum(xi).truncation)
    assert fidelity(squeezed_vacuum(xi), approx) >= 1 - 10 * xi ** 4


def test_squeezed_vacuum_matches_squeeze_operator():
    # independent oracle: S(zeta)|0> with S = exp((conj(zeta) a^2 - zeta a†^2)/2) on a
    # large box, zeta = r e^(i arg xi) and tanh r = |xi|
    from scipy.linalg import expm

    xi = 0.4 * cmath.exp(0.9j)
    r = math.atanh(abs(xi))
    M = 120
    a = np.diag(np.sqrt(np.arange(1, M)), 1)
    zeta = r * xi / abs(xi)
    S = expm(0.5 * (np.conj(zeta) * a @ a - zeta * a.T @ a.T))
    vac = np.zeros(M, dtype=complex)
    vac[0] = 1
    ref = FockAmplitudes((S @ vac)[:40])
    s = squeezed_vacuum(xi, trunc=39)
    np.testing.assert_allclose(s.amps, ref.amps, atol=1e-12)


def test_subtracted_vacuum_zero_is_parent():
    np.testing.assert_allclose(subtracted_squeezed_vacuum(0.4, 0).amps, squeezed_vacuum(0.4).amps, atol=1e-15)


def test_subtracted_vacuum_one_at_small_xi():
    p = photon_distribution(subtracted_squeezed_vacuum(0.1, 1))
    assert np.argmax(p) == 1 and p[1] > 0.98
    with pytest.raises(VanishingStateError):
        subtracted_squeezed_vacuum(0.0, 1)


@pytest.mark.parametrize("x", GRID_XI)
@pytest.mark.parametrize("n", GRID_N)
def test_lambda_vac_brute_force(x, n):
    assert lambda_vac(x, n) == pytest.approx(brute_lambda_vac(x, n), rel=1e-8)


def test_lambda_vac_limit():
    assert lambda_vac(0.0, 0) == 1.0
    assert lambda_vac(1e-9, 0) == pytest.approx(1.0, abs=1e-15)


# -- odd family ----------------------------------------------------------------

def test_odd_squeezed_examples():
    np.testing.assert_array_equal(odd_squeezed(0).amps, [0, 1])
    assert odd_squeezed(0.5, trunc=81).norm() == pytest.approx(1.0, abs=1e-10)


def test_odd_squeezed_small_xi():
    xi = 0.1
    s = odd_squeezed(xi)
    approx = normalize(FockAmplitudes([0, 1, 0, -math.sqrt(2 / 3) * xi]))[0].padded(s.truncation)
    assert fidelity(s, approx) >= 1 - 10 * xi ** 4


def test_subtracted_odd_examples():
    np.testing.assert_allclose(subtracted_odd_squeezed(0.4, 0).amps, odd_squeezed(0.4).amps, atol=1e-15)
    s = subtracted_odd_squeezed(0.1, 1)
    p = photon_distribution(s)
    assert np.all(p[1::2] == 0)
    assert p[0] + p[2] > 0.999
    # leading ratio of |2> to |0> is -sqrt(2) xi
    assert (s.amps[2] / s.amps[0]).real == pytest.approx(-math.sqrt(2) * 0.1, rel=1e-12)
    with pytest.raises(VanishingStateError):
        subtracted_odd_squeezed(0.0, 2)


@pytest.mark.parametrize("x", GRID_XI)
@pytest.mark.parametrize("n", GRID_N)
def test_lambda_odd_brute_force(x, n):
    assert lambda_odd(x, n) == pytest.approx(brute_lambda_odd(x, n), rel=1e-8)


@pytest.mark.parametrize("x", [0.0, 0.2, 0.6, 0.95])
def test_lambda_odd_input_matches_n0(x):
    assert lambda_odd(x, 0) == pytest.approx(lambda_odd_input(x), rel=1e-12)


# -- closed forms against the generic engine -----------------------------------

@pytest.mark.parametrize("family,parent,closed", [
    ("vac", squeezed_vacuum, subtracted_squeezed_vacuum),
    ("odd", odd_squeezed, subtracted_odd_squeezed),
])
@pytest.mark.parametrize("x", [0.1, 0.3, 0.5, 0.7])
@pytest.mark.parametrize("n", range(0, 7))
def test_closed_form_matches_engine(family, parent, closed, x, n):
    xi = x * cmath.exp(0.4j)
    ref = closed(xi, n)
    N = ref.truncation + n
    generic, _ = subtracted_state(parent(xi, trunc=N), n)
    assert fidelity(generic, ref) >= 1 - 1e-10
    # same phases, not just the same ray
    np.testing.assert_allclose(generic.amps, ref.amps, atol=1e-10)


@pytest.mark.parametrize("n", range(0, 8))
def test_table_parity_supports(n):
    vac = subtracted_squeezed_vacuum(0.5, n).amps
    odd = subtracted_odd_squeezed(0.5, n).amps
    assert np.all(vac[(n + 1) % 2::2] == 0)      # vac_n lives on parity n
    assert np.all(odd[n % 2::2] == 0)            # odd_n lives on parity n+1


# -- detection probabilities ---------------------------------------------------

@pytest.mark.parametrize("kind,parent", [("vac", squeezed_vacuum), ("odd", odd_squeezed)])
@pytest.mark.parametrize("x", [0.05, 0.4, 0.8])
def test_subtraction_probability_matches_decomposition(kind, parent, x):
    # the engine sees a truncated parent, so compare at the truncation's tail scale
    s = parent(x)
    probs = decompose_output(s).probabilities
    for n in range(6):
        assert subtraction_probability(kind, x, n) == pytest.approx(probs[n], rel=1e-9, abs=1e-11)


def test_subtraction_probability_limits():
    assert subtraction_probability("vac", 0.0, 0) == 1.0
    assert subtraction_probability("odd", 0.0, 0) == pytest.approx(0.5)
    assert subtraction_probability("odd", 0.0, 1) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        subtraction_probability("thermal", 0.3, 0)


def test_conditional_state_is_family_at_half_xi():
    xi = 0.6 * cmath.exp(1.1j)
    for parent, closed in ((squeezed_vacuum, subtracted_squeezed_vacuum),
                           (odd_squeezed, subtracted_odd_squeezed)):
        dec = decompose_output(parent(xi))
        for n in range(4):
            st_ = dec[n].state
            ref = closed(xi / 2, n, trunc=st_.truncation)
            assert fidelity(st_, ref) == pytest.approx(1.0, abs=1e-12)


def test_named_state_lookup():
    assert fidelity(named_state("squeezed-vacuum", 0.3, 2), subtracted_squeezed_vacuum(0.3, 2)) == pytest.approx(1.0)
    assert fidelity(named_state("vac", 0.3, 1), subtracted_squeezed_vacuum(0.3, 1)) == pytest.approx(1.0)
    c = named_state("coherent", 1.0, 2)
    assert fidelity(c, normalize(coherent(1.0, trunc=c.truncation))[0]) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        named_state("thermal", 0.3)
    with pytest.raises(DomainError):
        named_state("cat-even", 1.0, -1)
