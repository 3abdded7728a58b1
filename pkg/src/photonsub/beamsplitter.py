"""Lossless beam splitters acting on two-mode photon-number states.

Two conventions live side by side here and it is worth being explicit:

* ``apply_general`` is the operator ``exp(xi a†b - xi* a b†)`` applied
  literally, with row index = mode ``a`` photons.
* ``su2_coherent`` / ``apply_50_50`` use the tabulated SU(2) basis
  ``|n,0>_B = sum_k 2^(-n/2) C(n,k)^(1/2) i^k |k, n-k>``.

The tabulated basis equals ``exp(i pi/4 (a†b + a b†))`` applied to
``|0, n>`` (input in the second port), i.e. the literal operator applied to
``|n, 0>`` followed by a swap of the output labels. ``apply_50_50`` keeps the
tabulated phases because every downstream formula (idler phases ``i^n``,
``|iz/√2>_a (x) |z/√2>_b``) is written in them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fock import FockAmplitudes, TwoModeState
from .special_functions import binomial, euler_beta, ln_gamma

__all__ = [
    "BeamSplitterParams",
    "FIFTY_FIFTY",
    "su2_coherent",
    "split_coefficients",
    "apply_50_50",
    "block_unitary",
    "apply_general",
    "conditional_probability",
    "conditional_probability_beta",
]


@dataclass(frozen=True)
class BeamSplitterParams:
    """Rotation ``xi = magnitude * exp(i phase)`` of a lossless splitter."""

    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0:
            raise DomainError(f"magnitude must be non-negative, got {self.magnitude}")
        # wrap into [-pi, pi)
        wrapped = (self.phase + math.pi) % (2 * math.pi) - math.pi
        object.__setattr__(self, "phase", wrapped)

    @classmethod
    def from_complex(cls, xi: complex) -> "BeamSplitterParams":
        return cls(abs(xi), math.atan2(xi.imag, xi.real) if xi != 0 else 0.0)

    @property
    def xi(self) -> complex:
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))

    @property
    def transmission(self) -> float:
        return math.cos(self.magnitude)

    @property
    def reflection(self) -> float:
        return math.sin(self.magnitude)


FIFTY_FIFTY = BeamSplitterParams(math.pi / 4, math.pi / 2)


def split_coefficients(truncation: int) -> np.ndarray:
    """Matrix ``c[n, k] = 2^-(n+k)/2 C(n+k, n)^(1/2) i^n``, zero for n+k > N."""
    n = np.arange(truncation + 1)
    nn, kk = np.meshgrid(n, n, indexing="ij")
    total = nn + kk
    lg = np.vectorize(math.lgamma)
    log_mag = 0.5 * (lg(total + 1.0) - lg(nn + 1.0) - lg(kk + 1.0)) - 0.5 * total * math.log(2.0)
    coeff = np.exp(log_mag) * (1j ** (nn % 4))
    coeff[total > truncation] = 0.0
    return coeff


def su2_coherent(n: int, trunc: int | None = None) -> TwoModeState:
    """Two-mode SU(2) coherent state ``|n, 0>_B`` on an ``(N+1) x (N+1)`` grid."""
    if n < 0:
        raise DomainError(f"photon number must be non-negative, got {n}")
    trunc = n if trunc is None else trunc
    if trunc < n:
        raise DomainError(f"truncation {trunc} is smaller than n={n}")
    amps = np.zeros((trunc + 1, trunc + 1), dtype=complex)
    for k in range(n + 1):
        mag = math.sqrt(binomial(n, k)) * 2.0 ** (-n / 2)
        amps[k, n - k] = mag * 1j ** (k % 4)
    return TwoModeState(amps)


def apply_50_50(state: FockAmplitudes) -> TwoModeState:
    """Inject ``state`` into the idealized 50/50 splitter with vacuum in the other port.

    Entry ``(n, k)`` of the output is ``alpha_{n+k} c[n, k]``. Photon number
    is conserved, so the output truncation equals the input truncation.
    """
    N = state.truncation
    idx = np.add.outer(np.arange(N + 1), np.arange(N + 1))
    alphas = np.concatenate([state.amps, np.zeros(N + 1, dtype=complex)])
    return TwoModeState(alphas[idx] * split_coefficients(N))


def block_unitary(params: BeamSplitterParams, total: int) -> np.ndarray:
    """Matrix of ``exp(xi a†b - xi* a b†)`` on the block with ``total`` photons.

    Basis vector ``j`` is ``|j, total-j>``. The generator is anti-Hermitian and
    tridiagonal; it is exponentiated through the eigendecomposition of the
    Hermitian matrix ``-i G``.
    """
    xi = params.xi
    dim = total + 1
    gen = np.zeros((dim, dim), dtype=complex)
    for j in range(total):
        amp = math.sqrt((j + 1) * (total - j))
        gen[j + 1, j] = xi * amp  # a†b
        gen[j, j + 1] = -np.conj(xi) * amp  # a b†
    evals, evecs = np.linalg.eigh(-1j * gen)
    return (evecs * np.exp(1j * evals)) @ evecs.conj().T


def apply_general(params: BeamSplitterParams, state: TwoModeState,
                  trunc: int | None = None) -> TwoModeState:
    """Apply ``U(xi)`` block by block in total photon number.

    The output lives on a square grid of side ``trunc + 1``; the default
    ``trunc = na + nb`` keeps every block whole, so the map is exactly unitary.
    """
    na, nb = state.na, state.nb
    out_n = na + nb if trunc is None else trunc
    out = np.zeros((out_n + 1, out_n + 1), dtype=complex)
    src = state.amps
    for total in range(na + nb + 1):
        j = np.arange(total + 1)
        vec = np.zeros(total + 1, dtype=complex)
        ok = (j <= na) & (total - j <= nb)
        vec[ok] = src[j[ok], total - j[ok]]
        if not vec.any():
            continue
        res = block_unitary(params, total) @ vec
        keep = (j <= out_n) & (total - j <= out_n)
        out[j[keep], total - j[keep]] = res[keep]
    return TwoModeState(out)


def conditional_probability(m: int, r: int) -> float:
    """Probability of ``m`` photons in mode a and ``r`` in b for ``|m+r, 0>_B``."""
    if m < 0 or r < 0:
        raise DomainError(f"photon counts must be non-negative, got ({m}, {r})")
    n = m + r
    return math.exp(math.log(binomial(n, m)) - n * math.log(2.0))


def conditional_probability_beta(m: int, r: int) -> float:
    """Same probability through the Γ/beta-function expression."""
    if m < 0 or r < 0:
        raise DomainError(f"photon counts must be non-negative, got ({m}, {r})")
    log_ratio = (ln_gamma(r + 0.5) + ln_gamma(m + 0.5)
                 - ln_gamma(r + 1.0) - ln_gamma(m + 1.0))
    return math.exp(log_ratio) / (2.0 ** (r + m) * euler_beta(r + 0.5, m + 0.5))
