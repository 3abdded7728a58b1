"""Single-mode and two-mode pure states in a truncated photon-number basis."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError, ShapeMismatchError, VanishingStateError

__all__ = [
    "FockAmplitudes",
    "TwoModeState",
    "SchmidtSpectrum",
    "SEPARABILITY_THRESHOLD",
    "fock_state",
    "normalize",
    "tensor",
    "schmidt",
    "photon_distribution",
    "mean_photon_number",
    "fidelity",
    "auto_truncation",
    "state_to_json",
    "state_from_json",
]

#: second Schmidt coefficient below this value counts as separable
SEPARABILITY_THRESHOLD = 1e-8


def _frozen_complex(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FockAmplitudes:
    """Amplitudes of ``|0>, ..., |N>``.

    ``tail_mass_bound`` is the probability that the truncation discards, so
    ``sum(|amps|**2) == 1 - tail_mass_bound`` for the named-state
    constructors. ``normalize`` folds that mass back in and resets it to 0.
    """

    amps: np.ndarray
    tail_mass_bound: float = 0.0

    def __post_init__(self):
        amps = _frozen_complex(self.amps)
        if amps.ndim != 1 or amps.size == 0:
            raise DomainError("amps must be a non-empty one-dimensional sequence")
        if self.tail_mass_bound < 0:
            raise DomainError("tail_mass_bound must be non-negative")
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "tail_mass_bound", float(self.tail_mass_bound))

    @property
    def truncation(self) -> int:
        return self.amps.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def padded(self, truncation: int) -> "FockAmplitudes":
        """Zero-extend to a larger truncation (never shrinks)."""
        if truncation < self.truncation:
            raise ShapeMismatchError(
                f"cannot pad truncation {self.truncation} down to {truncation}"
            )
        amps = np.zeros(truncation + 1, dtype=complex)
        amps[: self.amps.size] = self.amps
        return FockAmplitudes(amps, self.tail_mass_bound)

    def __len__(self):
        return self.amps.size


@dataclass(frozen=True)
class TwoModeState:
    """Amplitude matrix; entry ``(n, m)`` multiplies ``|n>_a (x) |m>_b``."""

    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen_complex(self.amps)
        if amps.ndim != 2 or 0 in amps.shape:
            raise DomainError("two-mode amps must be a non-empty matrix")
        object.__setattr__(self, "amps", amps)

    @property
    def na(self) -> int:
        return self.amps.shape[0] - 1

    @property
    def nb(self) -> int:
        return self.amps.shape[1] - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def swapped(self) -> "TwoModeState":
        """Exchange the roles of the two modes."""
        return TwoModeState(self.amps.T)

    def cropped(self, na: int, nb: int, atol: float = 1e-12) -> "TwoModeState":
        """Drop rows/columns above ``(na, nb)``; they must carry no amplitude."""
        dropped = self.amps.copy()
        dropped[: na + 1, : nb + 1] = 0
        if np.max(np.abs(dropped), initial=0.0) > atol:
            raise ShapeMismatchError("cropping would discard nonzero amplitude")
        return TwoModeState(self.amps[: na + 1, : nb + 1])

    def marginal_a(self) -> np.ndarray:
        return np.sum(np.abs(self.amps) ** 2, axis=1)

    def marginal_b(self) -> np.ndarray:
        return np.sum(np.abs(self.amps) ** 2, axis=0)


@dataclass(frozen=True)
class SchmidtSpectrum:
    coefficients: np.ndarray
    entanglement_entropy: float

    def rank(self, threshold: float = SEPARABILITY_THRESHOLD) -> int:
        return int(np.count_nonzero(self.coefficients > threshold))

    @property
    def witness(self) -> float:
        """Second Schmidt coefficient (0 for a product state)."""
        return float(self.coefficients[1]) if self.coefficients.size > 1 else 0.0

    def is_separable(self, threshold: float = SEPARABILITY_THRESHOLD) -> bool:
        return self.witness < threshold


def fock_state(n: int, truncation: int | None = None) -> FockAmplitudes:
    """Number state ``|n>``."""
    if n < 0:
        raise DomainError(f"photon number must be non-negative, got {n}")
    truncation = n if truncation is None else truncation
    if truncation < n:
        raise DomainError(f"truncation {truncation} cannot hold |{n}>")
    amps = np.zeros(truncation + 1, dtype=complex)
    amps[n] = 1.0
    return FockAmplitudes(amps)


def normalize(state: FockAmplitudes) -> tuple[FockAmplitudes, float]:
    """Rescale to unit norm; returns the new state and the old norm."""
    norm = state.norm()
    if norm == 0.0:
        raise VanishingStateError("cannot normalize the zero vector")
    return FockAmplitudes(state.amps / norm), norm


def tensor(a: FockAmplitudes, b: FockAmplitudes) -> TwoModeState:
    return TwoModeState(np.outer(a.amps, b.amps))


def schmidt(state: TwoModeState) -> SchmidtSpectrum:
    coeffs = np.linalg.svd(state.amps, compute_uv=False)
    coeffs = np.sort(coeffs)[::-1]
    probs = coeffs ** 2
    probs = probs[probs > 0]
    entropy = float(-np.sum(probs * np.log(probs)))
    return SchmidtSpectrum(coeffs, max(entropy, 0.0))


def photon_distribution(state: FockAmplitudes) -> np.ndarray:
    return np.abs(state.amps) ** 2


def mean_photon_number(state: FockAmplitudes) -> float:
    p = photon_distribution(state)
    return float(np.dot(np.arange(p.size), p) / p.sum())


StateLike = Union[FockAmplitudes, TwoModeState]


def fidelity(a: StateLike, b: StateLike) -> float:
    """Squared overlap ``|<a|b>|**2`` of two pure states of the same kind."""
    if type(a) is not type(b):
        raise ShapeMismatchError(f"cannot compare {type(a).__name__} with {type(b).__name__}")
    if a.amps.shape != b.amps.shape:
        raise ShapeMismatchError(f"truncation mismatch: {a.amps.shape} vs {b.amps.shape}")
    overlap = np.vdot(a.amps.ravel(), b.amps.ravel())
    return float(min(abs(overlap) ** 2, 1.0))


def auto_truncation(log_weight: Callable[[int], float], step: int = 1, offset: int = 0,
                    ratio_limit: float = 0.0, tol: float = 1e-12,
                    max_index: int = 4096) -> int:
    """Smallest truncation whose discarded probability is below ``tol``.

    ``log_weight(j)`` is the log of the (unnormalized) probability carried by
    the j-th supported photon number ``offset + step*j``. The ratio of
    consecutive weights must approach ``ratio_limit`` monotonically; the tail
    is then bounded geometrically by ``w r / (1 - r)`` with
    ``r = max(current ratio, ratio_limit)``.
    """
    logs = [log_weight(0)]
    j = 0
    while offset + step * j < max_index:
        j += 1
        logs.append(log_weight(j))
        if logs[-1] == -math.inf and ratio_limit == 0.0 and logs[-2] != -math.inf:
            # the ratio has already reached its limit 0: nothing further survives
            return offset + step * (j - 1)
        if logs[-2] == -math.inf:
            continue
        r = max(math.exp(logs[-1] - logs[-2]), ratio_limit)
        if r < 1.0:
            top = max(logs)
            total = sum(math.exp(v - top) for v in logs)
            tail = math.exp(logs[-1] - top) * r / (1.0 - r)
            if tail < tol * total:
                return offset + step * j
    raise DomainError(f"state needs more than {max_index} photons to reach tail {tol}")


def _pairs(values: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in values]


def state_to_json(state: StateLike) -> dict:
    """JSON-ready dict: ``{"truncation", "amps"}`` or ``{"na", "nb", "amps"}``."""
    if isinstance(state, FockAmplitudes):
        return {"truncation": state.truncation, "amps": _pairs(state.amps)}
    return {"na": state.na, "nb": state.nb, "amps": _pairs(state.amps.ravel())}


def state_from_json(obj) -> StateLike:
    if isinstance(obj, str):
        obj = json.loads(obj)
    amps = np.array([complex(re, im) for re, im in obj["amps"]], dtype=complex)
    if "truncation" in obj:
        if amps.size != obj["truncation"] + 1:
            raise DomainError("amps length does not match truncation")
        return FockAmplitudes(amps)
    na, nb = obj["na"], obj["nb"]
    if amps.size != (na + 1) * (nb + 1):
        raise DomainError("amps length does not match (na+1)*(nb+1)")
    return TwoModeState(amps.reshape(na + 1, nb + 1))
