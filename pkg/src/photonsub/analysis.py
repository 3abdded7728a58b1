"""Derived quantities: Bell-state fidelities for cat inputs, parity statistics,
detection-probability sweeps and equal-probability crossings."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .beamsplitter import apply_50_50
from .errors import DegeneratePairError, DomainError, NoCrossingError
from .fock import TwoModeState, fidelity, tensor
from .special_functions import DEFAULT_CONTROL, SeriesControl
from .named_states import (
    CoherentParam,
    _z,
    cat_even,
    cat_odd,
    named_state,
    subtraction_probability,
)

__all__ = [
    "BellReport",
    "bell_check",
    "bell_target",
    "parity_joint_distribution",
    "probability_sweep",
    "sweep_to_csv",
    "target_probability",
    "match_crossing",
]


def parity_joint_distribution(state: TwoModeState) -> np.ndarray:
    """``P[pa, pb]``: probability that mode a has parity ``pa`` and mode b ``pb``."""
    p = np.abs(state.amps) ** 2
    out = np.empty((2, 2))
    for pa in (0, 1):
        for pb in (0, 1):
            out[pa, pb] = p[pa::2, pb::2].sum()
    return out


@dataclass(frozen=True)
class BellReport:
    """Outcome of :func:`bell_check`.

    ``fidelity`` compares the splitter output with the equal-weight cat
    target. ``fidelity_weighted`` uses the target with the exact weights
    ``cosh(|z|^2/2)`` and ``sinh(|z|^2/2)`` on the two branches of the even
    case; for the odd case both targets coincide.
    """

    which: str
    fidelity: float
    fidelity_weighted: float
    parity_agreement: float
    parity: np.ndarray

    @property
    def fidelity_even(self) -> float | None:
        return self.fidelity if self.which == "even" else None

    @property
    def fidelity_odd(self) -> float | None:
        return self.fidelity if self.which == "odd" else None

    def to_json(self) -> dict:
        return {
            "which": self.which,
            "fidelity": self.fidelity,
            "fidelity_weighted": self.fidelity_weighted,
            "parity_agreement": self.parity_agreement,
            "parity": self.parity.tolist(),
        }


def _cat_product(za: complex, zb: complex, parity_a: int, parity_b: int, trunc: int) -> np.ndarray:
    a = (cat_even if parity_a == 0 else cat_odd)(za, trunc)
    b = (cat_even if parity_b == 0 else cat_odd)(zb, trunc)
    return tensor(a, b).amps


def bell_target(z, which: str, trunc: int, weighted: bool = False) -> TwoModeState:
    """Two-mode cat target for the even or odd cat sent through the 50/50 splitter.

    even: ``w0 |E(iz/√2)>|E(z/√2)> + w1 |O(iz/√2)>|O(z/√2)>``
    odd:  ``(|E(iz/√2)>|O(z/√2)> + |O(iz/√2)>|E(z/√2)>)/√2``

    with ``w0 = w1 = 1/√2`` unless ``weighted``, in which case
    ``w0 ∝ cosh(|z|^2/2)`` and ``w1 ∝ sinh(|z|^2/2)``.
    """
    z = _z(z)
    za, zb = 1j * z / math.sqrt(2), z / math.sqrt(2)
    if which == "even":
        if z == 0:
            return tensor(cat_even(0, trunc), cat_even(0, trunc))
        s = abs(z) ** 2 / 2
        if weighted:
            w0, w1 = 1.0, math.tanh(s)
            scale = 1.0 / math.hypot(w0, w1)
            w0, w1 = w0 * scale, w1 * scale
        else:
            w0 = w1 = 1 / math.sqrt(2)
        amps = w0 * _cat_product(za, zb, 0, 0, trunc) + w1 * _cat_product(za, zb, 1, 1, trunc)
    elif which == "odd":
        if z == 0:
            raise DomainError("the odd cat state does not exist at z = 0")
        amps = (_cat_product(za, zb, 0, 1, trunc) + _cat_product(za, zb, 1, 0, trunc)) / math.sqrt(2)
    else:
        raise DomainError(f"which must be 'even' or 'odd', got {which!r}")
    return TwoModeState(amps)


def bell_check(z, which: str = "even", trunc: int | None = None) -> BellReport:
    """Send a cat state through the 50/50 splitter and compare with the Bell-type target."""
    if isinstance(z, CoherentParam):
        z = z.value
    if which not in ("even", "odd"):
        raise DomainError(f"which must be 'even' or 'odd', got {which!r}")
    cat = (cat_even if which == "even" else cat_odd)(z, trunc)
    out = apply_50_50(cat)
    N = cat.truncation
    literal = fidelity(out, bell_target(z, which, N))
    weighted = fidelity(out, bell_target(z, which, N, weighted=True))
    parity = parity_joint_distribution(out)
    agree = parity[0, 0] + parity[1, 1] if which == "even" else parity[0, 1] + parity[1, 0]
    return BellReport(which, literal, weighted, float(min(1.0, agree)), parity)


# -- detection-probability curves -------------------------------------------

def probability_sweep(kind: str, n: int, xi_samples: Iterable[float],
                      ctrl: SeriesControl = DEFAULT_CONTROL) -> list[tuple[float, float]]:
    """``(|xi|, P_n(|xi|))`` for each sample; ``kind`` is the squeezed input family."""
    rows = []
    for x in xi_samples:
        x = float(x)
        if not 0.0 <= x < 1.0:
            raise DomainError(f"|xi| samples must lie in [0, 1), got {x}")
        rows.append((x, subtraction_probability(kind, x, n, ctrl)))
    return rows


def sweep_to_csv(rows: Sequence[tuple[float, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["xi", "p"])
    for x, p in rows:
        writer.writerow([repr(float(x)), repr(float(p))])
    return buf.getvalue()


# -- equal-probability crossings --------------------------------------------

def target_probability(spec: tuple[str, int], xi: float, target: int,
                       trunc: int | None = None, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """``|<target|psi>|^2`` for the named subtracted state ``spec = (kind, n)`` at ``|xi|``."""
    kind, n = spec
    state = named_state(kind, xi, n, trunc, ctrl)
    if target > state.truncation:
        return 0.0
    return float(abs(state.amps[target]) ** 2)


def match_crossing(target: int, pair: tuple[tuple[str, int], tuple[str, int]],
                   bracket: tuple[float, float] = (0.05, 0.95), tol: float = 1e-4,
                   trunc: int | None = None, samples: int = 91,
                   ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """``|xi|`` where the two states of ``pair`` give ``target`` the same probability.

    The bracket is scanned on ``samples`` points for a sign change; the first
    one found is refined to ``tol``.
    """
    spec_a, spec_b = (tuple(s) for s in pair)
    if spec_a == spec_b:
        raise DegeneratePairError(f"identical states {spec_a}: every |xi| is a crossing")
    lo, hi = bracket
    if not 0.0 <= lo < hi < 1.0:
        raise DomainError(f"bracket must satisfy 0 <= lo < hi < 1, got {bracket}")

    def diff(x: float) -> float:
        return (target_probability(spec_a, x, target, trunc, ctrl)
                - target_probability(spec_b, x, target, trunc, ctrl))

    xs = np.linspace(lo, hi, samples)
    vals = [diff(x) for x in xs]
    for i in range(len(xs) - 1):
        if vals[i] == 0.0:
            return float(xs[i])
        if vals[i] * vals[i + 1] < 0:
            return float(brentq(diff, xs[i], xs[i + 1], xtol=tol / 10))
    if vals[-1] == 0.0:
        return float(xs[-1])
    raise NoCrossingError(
        f"P({target}) of {spec_a} and {spec_b} do not cross in [{lo}, {hi}]"
    )
