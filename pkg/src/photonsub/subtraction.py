"""Photon subtraction by conditioning on the idler photon count.

Feeding ``sum_m alpha_m |m>`` into the 50/50 splitter gives

    sum_n  i^n / sqrt(n!) * lambda_n(beta) |n>_idler (x) |psi_n(beta)>_signal

with reduced amplitudes ``beta_m = alpha_m / 2^(m/2)`` and the n-subtracted
state ``|psi_n(a)> ∝ sum_k sqrt((k+n)!/k!) a_{k+n} |k>``. All weights are
handled as logarithms so large photon numbers do not overflow factorials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
from scipy.special import gammaln
from scipy.stats import binom

from .errors import DomainError, ParityError, VanishingStateError
from .fock import FockAmplitudes, TwoModeState, state_from_json, state_to_json

__all__ = [
    "SubtractionEntry",
    "SubtractionDecomposition",
    "reduced_amplitudes",
    "subtracted_state",
    "decompose_output",
    "decompose_two_mode",
    "separability_rank",
    "even_output",
    "odd_output",
    "probabilities_by_binomial",
]

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class SubtractionEntry:
    n: int
    probability: float
    lambda_n: float
    state: Optional[FockAmplitudes]


@dataclass(frozen=True)
class SubtractionDecomposition:
    """Idler-count outcomes, in order ``n = 0, 1, ..., N``."""

    entries: tuple

    def __iter__(self) -> Iterator[SubtractionEntry]:
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, n: int) -> SubtractionEntry:
        return self.entries[n]

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([e.probability for e in self.entries])

    def to_json(self) -> list:
        return [
            {
                "n": e.n,
                "p": e.probability,
                "lambda": e.lambda_n,
                "state": None if e.state is None else state_to_json(e.state),
            }
            for e in self.entries
        ]

    @classmethod
    def from_json(cls, obj: list) -> "SubtractionDecomposition":
        entries = []
        for item in obj:
            state = None if item["state"] is None else state_from_json(item["state"])
            entries.append(SubtractionEntry(int(item["n"]), float(item["p"]),
                                            float(item["lambda"]), state))
        return cls(tuple(entries))


def _as_array(alphas) -> np.ndarray:
    if isinstance(alphas, FockAmplitudes):
        return np.asarray(alphas.amps)
    arr = np.asarray(alphas, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("amplitudes must be a non-empty one-dimensional sequence")
    return arr


def reduced_amplitudes(alphas) -> np.ndarray:
    """``beta_m = alpha_m / 2^(m/2)``."""
    a = _as_array(alphas)
    return a * np.exp(-0.5 * _LOG2 * np.arange(a.size))


def _log_abs(a: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(a))


def _log_sqrt_falling(n: int, k: np.ndarray) -> np.ndarray:
    """``log sqrt((k+n)!/k!)`` elementwise in ``k``."""
    return 0.5 * (gammaln(k + n + 1.0) - gammaln(k + 1.0))


def _logsumexp2(logs: np.ndarray) -> float:
    """``log sqrt(sum exp(2*logs))`` i.e. log of a Euclidean norm."""
    finite = logs[np.isfinite(logs)]
    if finite.size == 0:
        return -math.inf
    top = finite.max()
    return float(top + 0.5 * math.log(np.sum(np.exp(2.0 * (finite - top)))))


def _subtract_logs(a: np.ndarray, n: int, trunc: int):
    """Log-magnitudes and phases of the unnormalized n-subtracted series."""
    k = np.arange(trunc + 1)
    src = np.zeros(trunc + 1, dtype=complex)
    avail = max(0, min(trunc + 1, a.size - n))
    src[:avail] = a[n:n + avail]
    logs = _log_abs(src) + _log_sqrt_falling(n, k)
    phases = np.where(src != 0, src / np.where(src != 0, np.abs(src), 1.0), 0.0)
    return logs, phases


def subtracted_state(alphas, n: int, trunc: int | None = None) -> tuple[FockAmplitudes, float]:
    """Normalized ``a^n |psi(alpha)>`` and the norm ``lambda_n`` of the raw series.

    The default truncation ``len(alphas) - 1 - n`` keeps every amplitude the
    input can reach.
    """
    a = _as_array(alphas)
    if n < 0:
        raise DomainError(f"subtraction count must be non-negative, got {n}")
    if trunc is None:
        trunc = a.size - 1 - n
    if trunc < 0:
        raise VanishingStateError(f"cannot subtract {n} photons from truncation {a.size - 1}")
    logs, phases = _subtract_logs(a, n, trunc)
    log_lam = _logsumexp2(logs)
    if log_lam == -math.inf:
        raise VanishingStateError(f"all amplitudes above index {n} vanish")
    with np.errstate(under="ignore"):
        amps = np.exp(logs - log_lam) * phases
    return FockAmplitudes(amps), math.exp(log_lam)


def _input_log_norm(a: np.ndarray) -> float:
    return _logsumexp2(_log_abs(a))


def _entry(betas: np.ndarray, n: int, trunc: int, log_norm_in: float) -> SubtractionEntry:
    logs, phases = _subtract_logs(betas, n, trunc)
    log_lam = _logsumexp2(logs)
    if log_lam == -math.inf:
        return SubtractionEntry(n, 0.0, 0.0, None)
    log_p = 2.0 * (log_lam - log_norm_in) - math.lgamma(n + 1.0)
    with np.errstate(under="ignore"):
        amps = np.exp(logs - log_lam) * phases
    lam = math.exp(log_lam)
    return SubtractionEntry(n, math.exp(log_p), lam, FockAmplitudes(amps))


def decompose_output(alphas, trunc: int | None = None) -> SubtractionDecomposition:
    """Detection probabilities and conditional signal states for every idler count.

    ``P_n = |lambda_n(beta) / lambda(alpha)|^2 / n!`` and the state heralded by
    ``n`` idler photons is the n-subtracted state of ``beta``, truncated at
    ``N - n``. Idler counts whose state vanishes are kept with ``P_n = 0``.
    The idler phase ``i^n`` is not folded into the conditional state.
    """
    a = _as_array(alphas)
    N = a.size - 1 if trunc is None else trunc
    a = np.concatenate([a, np.zeros(max(0, N + 1 - a.size), dtype=complex)])[: N + 1]
    log_norm_in = _input_log_norm(a)
    if log_norm_in == -math.inf:
        raise VanishingStateError("input state is identically zero")
    betas = reduced_amplitudes(a)
    return SubtractionDecomposition(
        tuple(_entry(betas, n, N - n, log_norm_in) for n in range(N + 1))
    )


def decompose_two_mode(state: TwoModeState, condition_on: str = "a") -> SubtractionDecomposition:
    """Read a decomposition straight off an output amplitude matrix.

    Conditioning on mode ``a`` uses the rows (probability = squared row norm,
    state = normalized row with the idler phase ``i^n`` removed); mode ``b``
    uses columns and removes ``i^-k``. ``lambda_n`` is reported as
    ``sqrt(n! P_n)``, which matches the series norm for a normalized input.
    """
    if condition_on not in ("a", "b"):
        raise DomainError("condition_on must be 'a' or 'b'")
    mat = state.amps if condition_on == "a" else state.amps.T
    sign = 1 if condition_on == "a" else -1
    entries = []
    for n, row in enumerate(mat):
        norm = float(np.linalg.norm(row))
        p = norm ** 2
        if norm == 0.0:
            entries.append(SubtractionEntry(n, 0.0, 0.0, None))
            continue
        phase = (1j ** (n % 4)) if sign == 1 else (1j ** (-n % 4))
        amps = row / (norm * phase)
        lam = math.sqrt(p) * math.exp(0.5 * math.lgamma(n + 1.0))
        trimmed = amps[: mat.shape[1] - n] if mat.shape[1] - n > 0 else amps[:1]
        entries.append(SubtractionEntry(n, p, lam, FockAmplitudes(trimmed)))
    return SubtractionDecomposition(tuple(entries))


def separability_rank(alphas, trunc: int | None = None,
                      threshold: float = 1e-8) -> tuple[int, float]:
    """Numerical rank of ``M[k, n] = alpha_{k+n} sqrt((k+n)!)`` for ``0 <= k, n <= trunc``.

    A rank-1 matrix means the amplitudes factor as ``delta_k gamma_n /
    sqrt((k+n)!)``. Amplitudes past the end of ``alphas`` count as zero, so for
    a truncated infinite series keep ``2*trunc`` within its support (the
    default ``trunc = N // 2`` does). The witness is the second singular value
    relative to the first, since the entries grow factorially.
    """
    a = _as_array(alphas)
    N = a.size - 1
    trunc = N // 2 if trunc is None else trunc
    idx = np.add.outer(np.arange(trunc + 1), np.arange(trunc + 1))
    padded = np.zeros(2 * trunc + 1, dtype=complex)
    padded[: min(a.size, padded.size)] = a[: padded.size]

    # scale every antidiagonal in log space, then normalize by the largest entry
    logs = _log_abs(padded) + 0.5 * gammaln(np.arange(padded.size) + 1.0)
    finite = logs[np.isfinite(logs)]
    if finite.size == 0:
        return 0, 0.0
    phases = np.where(padded != 0, padded / np.where(padded != 0, np.abs(padded), 1.0), 0)
    with np.errstate(under="ignore"):
        vals = np.exp(logs - finite.max()) * phases
    sv = np.linalg.svd(vals[idx], compute_uv=False)
    sv = sv / sv[0]
    rank = int(np.count_nonzero(sv > threshold))
    return rank, float(sv[1]) if sv.size > 1 else 0.0


def _check_parity(a: np.ndarray, parity: int, atol: float = 0.0):
    wrong = a[(1 - parity)::2]
    if np.any(np.abs(wrong) > atol):
        kind = "even" if parity == 0 else "odd"
        raise ParityError(f"{kind}-support input has amplitude on the other parity")


def _parity_entry(betas: np.ndarray, idler: int, out_parity: int, trunc: int,
                  log_norm_in: float) -> SubtractionEntry:
    """Conditional state built only on the output parity sublattice.

    Signal index ``j = 2k + out_parity`` pulls from input index ``j + idler``;
    the weight is ``sqrt((j+idler)!/j!)``.
    """

    j = np.arange(out_parity, trunc + 1, 2)
    src_idx = j + idler
    src = np.where(src_idx < betas.size, betas[np.minimum(src_idx, betas.size - 1)], 0)
    logs = _log_abs(src) + 0.5 * (gammaln(src_idx + 1.0) - gammaln(j + 1.0))
    log_lam = _logsumexp2(logs)
    if log_lam == -math.inf:
        return SubtractionEntry(idler, 0.0, 0.0, None)
    amps = np.zeros(trunc + 1, dtype=complex)
    phases = np.where(src != 0, src / np.where(src != 0, np.abs(src), 1.0), 0)
    with np.errstate(under="ignore"):
        amps[j] = np.exp(logs - log_lam) * phases
    log_p = 2.0 * (log_lam - log_norm_in) - math.lgamma(idler + 1.0)
    return SubtractionEntry(idler, math.exp(log_p), math.exp(log_lam), FockAmplitudes(amps))


def _parity_output(alphas, trunc, parity: int) -> SubtractionDecomposition:
    a = _as_array(alphas)
    N = a.size - 1 if trunc is None else trunc
    a = np.concatenate([a, np.zeros(max(0, N + 1 - a.size), dtype=complex)])[: N + 1]
    _check_parity(a, parity)
    log_norm_in = _input_log_norm(a)
    if log_norm_in == -math.inf:
        raise VanishingStateError("input state is identically zero")
    betas = reduced_amplitudes(a)
    entries = []
    for idler in range(N + 1):
        # output parity = input parity XOR idler parity
        out_parity = (parity + idler) % 2
        entries.append(_parity_entry(betas, idler, out_parity, N - idler, log_norm_in))
    return SubtractionDecomposition(tuple(entries))


def even_output(alphas_even, trunc: int | None = None) -> SubtractionDecomposition:
    """Decomposition for an input supported on even photon numbers only.

    Idler ``2n`` heralds an even-support state, idler ``2n+1`` an odd one.
    """
    return _parity_output(alphas_even, trunc, 0)


def odd_output(alphas_odd, trunc: int | None = None) -> SubtractionDecomposition:
    """Decomposition for an input supported on odd photon numbers only.

    Idler ``2n`` heralds an odd-support state, idler ``2n+1`` an even one.
    """
    return _parity_output(alphas_odd, trunc, 1)


def probabilities_by_binomial(alphas) -> np.ndarray:
    """``P_n = sum_m |alpha_m|^2 C(m, n) / 2^m``: each photon exits either port with 1/2."""
    a = _as_array(alphas)
    w = np.abs(a) ** 2 / np.sum(np.abs(a) ** 2)
    N = a.size - 1
    m = np.arange(N + 1)
    return np.array([np.sum(w * binom.pmf(n, m, 0.5)) for n in range(N + 1)])
