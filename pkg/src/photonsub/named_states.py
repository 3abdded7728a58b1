"""Closed-form constructors for the named input states and their subtracted versions.

Families and supports (``n`` = number of subtracted photons, ``n = 2p`` or
``2p + 1``)::

    squeezed vacuum   |2m>   ∝ sqrt((2m)!)/m! (-xi/2)^m
      n = 2p          |2k>   ∝ (2k+2p)!/((k+p)! sqrt((2k)!))   (-xi/2)^(k+p)
      n = 2p+1        |2k+1> ∝ (2k+2p+2)!/((k+p+1)! sqrt((2k+1)!)) (-xi/2)^(k+p+1)

    odd squeezed      |2m+1> ∝ m!/sqrt((2m+1)!) (-2 xi)^m
      n = 2p          |2k+1> ∝ (k+p)!/sqrt((2k+1)!) (-2 xi)^(k+p)
      n = 2p+1        |2k>   ∝ (k+p)!/sqrt((2k)!)   (-2 xi)^(k+p)

States are divided by their closed-form norms (never renormalized
numerically), so a wrong normalization shows up as a norm different from 1.
Magnitudes are built in log space; only ``|xi|`` enters the normalizations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError, VanishingStateError
from .fock import FockAmplitudes, auto_truncation
from .special_functions import DEFAULT_CONTROL, SeriesControl, gauss_2f1

__all__ = [
    "SqueezingParam",
    "CoherentParam",
    "coherent",
    "squeezed_vacuum",
    "subtracted_squeezed_vacuum",
    "lambda_vac",
    "odd_squeezed",
    "lambda_odd_input",
    "subtracted_odd_squeezed",
    "lambda_odd",
    "cat_even",
    "cat_odd",
    "subtraction_probability",
    "named_state",
    "STATE_KINDS",
]

TAIL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SqueezingParam:
    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.magnitude < 1.0:
            raise DomainError(f"squeezing magnitude must lie in [0, 1), got {self.magnitude}")

    @property
    def value(self) -> complex:
        return cmath.rect(self.magnitude, self.phase)


@dataclass(frozen=True)
class CoherentParam:
    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not (self.magnitude >= 0 and math.isfinite(self.magnitude)):
            raise DomainError(f"coherent amplitude must be finite and >= 0, got {self.magnitude}")

    @property
    def value(self) -> complex:
        return cmath.rect(self.magnitude, self.phase)


Param = Union[complex, float, SqueezingParam, CoherentParam]


def _xi(xi: Param) -> complex:
    value = xi.value if isinstance(xi, (SqueezingParam, CoherentParam)) else complex(xi)
    if not abs(value) < 1.0:
        raise DomainError(f"squeezing requires |xi| < 1, got |xi| = {abs(value)}")
    return value


def _z(z: Param) -> complex:
    value = z.value if isinstance(z, (SqueezingParam, CoherentParam)) else complex(z)
    if not cmath.isfinite(value):
        raise DomainError("coherent amplitude must be finite")
    return value


def _unit(value: complex) -> complex:
    return value / abs(value) if value != 0 else 1.0


def _build(log_coef: Callable[[int], float], phase: Callable[[int], complex],
           offset: int, log_norm: float, trunc: int | None,
           ratio_limit: float = 0.0) -> FockAmplitudes:
    """Assemble ``sum_k exp(log_coef(k) - log_norm) phase(k) |offset + 2k>``.

    With ``trunc=None`` the truncation is the smallest one whose geometric
    tail bound (probability ratio tending to ``ratio_limit``) is below 1e-12.
    """
    if trunc is None:
        trunc = auto_truncation(lambda k: 2.0 * log_coef(k), step=2, offset=offset,
                                ratio_limit=ratio_limit, tol=TAIL_TOLERANCE)
    if trunc < 0:
        raise DomainError("truncation must be non-negative")
    amps = np.zeros(trunc + 1, dtype=complex)
    for k, idx in enumerate(range(offset, trunc + 1, 2)):
        lc = log_coef(k)
        if lc == -math.inf:
            continue
        amps[idx] = math.exp(lc - log_norm) * phase(k)
    mass = float(np.sum(np.abs(amps) ** 2))
    return FockAmplitudes(amps, tail_mass_bound=max(0.0, 1.0 - mass))


def _xlog(count: float, base: float) -> float:
    """``count * log(base)`` with the convention 0*log(0) = 0."""
    if count == 0:
        return 0.0
    return count * math.log(base) if base > 0 else -math.inf


# -- coherent and cat states ------------------------------------------------

def _poisson_trunc(r2: float, step: int, offset: int) -> int:
    if r2 == 0:
        return offset
    return auto_truncation(lambda j: (offset + step * j) * math.log(r2)
                           - math.lgamma(offset + step * j + 1.0),
                           step=step, offset=offset, tol=TAIL_TOLERANCE)


def coherent(z: Param, trunc: int | None = None) -> FockAmplitudes:
    """Glauber state ``e^(-|z|^2/2) sum z^n/sqrt(n!) |n>``."""
    z = _z(z)
    r = abs(z)
    if trunc is None:
        trunc = _poisson_trunc(r * r, 1, 0)
    n = np.arange(trunc + 1)
    logs = np.array([_xlog(k, r) - 0.5 * math.lgamma(k + 1.0) for k in n]) - 0.5 * r * r
    amps = np.exp(logs) * np.power(_unit(z), n)
    mass = float(np.sum(np.abs(amps) ** 2))
    return FockAmplitudes(amps, tail_mass_bound=max(0.0, 1.0 - mass))


def cat_even(z: Param, trunc: int | None = None) -> FockAmplitudes:
    """Even cat ``∝ |z> + |-z>``: amplitudes ``z^(2n)/sqrt((2n)!)/sqrt(cosh|z|^2)``."""
    z = _z(z)
    r = abs(z)
    if trunc is None:
        trunc = _poisson_trunc(r * r, 2, 0)
    u = _unit(z)
    log_norm = 0.5 * math.log(math.cosh(r * r)) if r * r < 700 else 0.5 * (r * r - math.log(2))
    return _build(lambda k: _xlog(2 * k, r) - 0.5 * math.lgamma(2 * k + 1.0),
                  lambda k: u ** (2 * k), 0, log_norm, trunc)


def cat_odd(z: Param, trunc: int | None = None) -> FockAmplitudes:
    """Odd cat ``∝ |z> - |-z>``: amplitudes ``z^(2n+1)/sqrt((2n+1)!)/sqrt(sinh|z|^2)``."""
    z = _z(z)
    r = abs(z)
    if r == 0:
        raise DomainError("the odd cat state does not exist at z = 0 (sinh 0 = 0)")
    if trunc is None:
        trunc = _poisson_trunc(r * r, 2, 1)
    u = _unit(z)
    log_norm = 0.5 * math.log(math.sinh(r * r)) if r * r < 700 else 0.5 * (r * r - math.log(2))
    return _build(lambda k: _xlog(2 * k + 1, r) - 0.5 * math.lgamma(2 * k + 2.0),
                  lambda k: u ** (2 * k + 1), 1, log_norm, trunc)


# -- squeezed vacuum family -------------------------------------------------

def _vac_series(n: int, x: float):
    """(offset, log|coef|(k), power(k)) for the n-subtracted squeezed vacuum."""
    p, odd = divmod(n, 2)
    if not odd:
        return 0, (lambda k: math.lgamma(2 * k + 2 * p + 1.0) - math.lgamma(k + p + 1.0)
                   - 0.5 * math.lgamma(2 * k + 1.0) + _xlog(k + p, x / 2)), (lambda k: k + p)
    return 1, (lambda k: math.lgamma(2 * k + 2 * p + 3.0) - math.lgamma(k + p + 2.0)
               - 0.5 * math.lgamma(2 * k + 2.0) + _xlog(k + p + 1, x / 2)), (lambda k: k + p + 1)


def lambda_vac(xi: Param, n: int, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Norm of the raw n-subtracted squeezed-vacuum series.

    ``n = 2p``:   ``(|xi|/2)^(2p)   [(2p)!/p!]^2     2F1(p+1/2, p+1/2; 1/2; |xi|^2)``
    ``n = 2p+1``: ``(|xi|/2)^(2p+2) [(2p+2)!/(p+1)!]^2 2F1(p+3/2, p+3/2; 3/2; |xi|^2)``

    (squared). The odd prefactor power is ``2p+2``, the square of the leading
    ``k = 0`` coefficient.
    """
    return math.exp(_log_lambda_vac(abs(_xi(xi)), n, ctrl))


def _log_lambda_vac(x: float, n: int, ctrl: SeriesControl) -> float:
    if n < 0:
        raise DomainError(f"subtraction count must be non-negative, got {n}")
    p, odd = divmod(n, 2)
    if not odd:
        log_sq = (_xlog(2 * p, x / 2) + 2.0 * (math.lgamma(2 * p + 1.0) - math.lgamma(p + 1.0))
                  + math.log(gauss_2f1(p + 0.5, p + 0.5, 0.5, x * x, ctrl)))
    else:
        log_sq = (_xlog(2 * p + 2, x / 2) + 2.0 * (math.lgamma(2 * p + 3.0) - math.lgamma(p + 2.0))
                  + math.log(gauss_2f1(p + 1.5, p + 1.5, 1.5, x * x, ctrl)))
    return 0.5 * log_sq


def squeezed_vacuum(xi: Param, trunc: int | None = None) -> FockAmplitudes:
    """``(1-|xi|^2)^(1/4) sum_m sqrt((2m)!)/m! (-xi/2)^m |2m>``."""
    xi = _xi(xi)
    x = abs(xi)
    u = -_unit(xi)
    offset, log_coef, power = _vac_series(0, x)
    log_norm = -0.25 * math.log1p(-x * x)
    return _build(log_coef, lambda k: u ** power(k), offset, log_norm, trunc, x * x)


def subtracted_squeezed_vacuum(xi: Param, n: int, trunc: int | None = None,
                               ctrl: SeriesControl = DEFAULT_CONTROL) -> FockAmplitudes:
    """Squeezed vacuum with ``n`` photons removed, normalized by :func:`lambda_vac`."""
    xi = _xi(xi)
    x = abs(xi)
    if n > 0 and x == 0:
        raise VanishingStateError("cannot subtract photons from the vacuum")
    u = -_unit(xi)
    offset, log_coef, power = _vac_series(n, x)
    return _build(log_coef, lambda k: u ** power(k), offset, _log_lambda_vac(x, n, ctrl),
                  trunc, x * x)


# -- odd-photon squeezed family ---------------------------------------------

def _odd_series(n: int, x: float):
    p, odd = divmod(n, 2)
    if not odd:
        return 1, (lambda k: math.lgamma(k + p + 1.0) - 0.5 * math.lgamma(2 * k + 2.0)
                   + _xlog(k + p, 2 * x)), (lambda k: k + p)
    return 0, (lambda k: math.lgamma(k + p + 1.0) - 0.5 * math.lgamma(2 * k + 1.0)
               + _xlog(k + p, 2 * x)), (lambda k: k + p)


def lambda_odd_input(xi: Param) -> float:
    """Norm of the raw odd-squeezed series: ``[|xi|/asin|xi|]^(-1/2) (1-|xi|^2)^(-1/4)``."""
    x = abs(_xi(xi))
    ratio = 1.0 if x == 0 else x / math.asin(x)
    return ratio ** -0.5 * (1.0 - x * x) ** -0.25


def lambda_odd(xi: Param, n: int, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Norm of the raw n-subtracted odd-squeezed series.

    ``n = 2p``:   ``(2|xi|)^(2p) (p!)^2 2F1(p+1, p+1; 3/2; |xi|^2)``
    ``n = 2p+1``: ``(2|xi|)^(2p) (p!)^2 2F1(p+1, p+1; 1/2; |xi|^2)``

    (squared). ``n = 0`` reproduces :func:`lambda_odd_input`.
    """
    return math.exp(_log_lambda_odd(abs(_xi(xi)), n, ctrl))


def _log_lambda_odd(x: float, n: int, ctrl: SeriesControl) -> float:
    if n < 0:
        raise DomainError(f"subtraction count must be non-negative, got {n}")
    p, odd = divmod(n, 2)
    c = 0.5 if odd else 1.5
    log_sq = (_xlog(2 * p, 2 * x) + 2.0 * math.lgamma(p + 1.0)
              + math.log(gauss_2f1(p + 1.0, p + 1.0, c, x * x, ctrl)))
    return 0.5 * log_sq


def odd_squeezed(xi: Param, trunc: int | None = None) -> FockAmplitudes:
    """Odd-photon squeezed state ``sum_m m!/sqrt((2m+1)!) (-2 xi)^m |2m+1> / lambda``."""
    xi = _xi(xi)
    x = abs(xi)
    u = -_unit(xi)
    offset, log_coef, power = _odd_series(0, x)
    return _build(log_coef, lambda k: u ** power(k), offset,
                  math.log(lambda_odd_input(xi)), trunc, x * x)


def subtracted_odd_squeezed(xi: Param, n: int, trunc: int | None = None,
                            ctrl: SeriesControl = DEFAULT_CONTROL) -> FockAmplitudes:
    """Odd-squeezed state with ``n`` photons removed, normalized by :func:`lambda_odd`."""
    xi = _xi(xi)
    x = abs(xi)
    if n > 1 and x == 0:
        raise VanishingStateError(f"|1> has no photons left after subtracting {n}")
    u = -_unit(xi)
    offset, log_coef, power = _odd_series(n, x)
    return _build(log_coef, lambda k: u ** power(k), offset, _log_lambda_odd(x, n, ctrl),
                  trunc, x * x)


# -- detection probabilities ------------------------------------------------

def subtraction_probability(kind: str, xi: Param, n: int,
                            ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Probability of ``n`` idler photons when ``kind`` is sent into the 50/50 splitter.

    Halving each photon's amplitude maps the reduced amplitudes of either
    family onto the same family at ``xi/2``, so ``P_n`` follows from the
    closed-form norms without building any state:

    * squeezed vacuum: ``P_n = sqrt(1-|xi|^2) lambda_vac(xi/2, n)^2 / n!``
    * odd squeezed:    ``P_n = lambda_odd(xi/2, n)^2 / (2 n! lambda_odd_input(xi)^2)``
    """
    x = abs(_xi(xi))
    if kind in ("vac", "squeezed-vacuum", "squeezed_vacuum"):
        log_p = 0.5 * math.log1p(-x * x) + 2.0 * _log_lambda_vac(x / 2, n, ctrl)
    elif kind in ("odd", "odd-squeezed", "odd_squeezed"):
        log_p = (2.0 * _log_lambda_odd(x / 2, n, ctrl) - math.log(2.0)
                 - 2.0 * math.log(lambda_odd_input(x)))
    else:
        raise DomainError(f"unknown input family {kind!r}")
    return math.exp(log_p - math.lgamma(n + 1.0))


_CONSTRUCTORS = {
    "coherent": lambda p, n, t, c: coherent(p, t) if n == 0 else _subtracted_generic(coherent(p, t), n),
    "squeezed-vacuum": lambda p, n, t, c: subtracted_squeezed_vacuum(p, n, t, c),
    "odd-squeezed": lambda p, n, t, c: subtracted_odd_squeezed(p, n, t, c),
    "cat-even": lambda p, n, t, c: cat_even(p, t) if n == 0 else _subtracted_generic(cat_even(p, t), n),
    "cat-odd": lambda p, n, t, c: cat_odd(p, t) if n == 0 else _subtracted_generic(cat_odd(p, t), n),
}

STATE_KINDS = tuple(_CONSTRUCTORS)
_ALIASES = {"vac": "squeezed-vacuum", "odd": "odd-squeezed"}


def _subtracted_generic(state: FockAmplitudes, n: int) -> FockAmplitudes:
    from .subtraction import subtracted_state

    return subtracted_state(state, n)[0]


def named_state(kind: str, param: Param, n: int = 0, trunc: int | None = None,
                ctrl: SeriesControl = DEFAULT_CONTROL) -> FockAmplitudes:
    """Look up a named state by its CLI name, optionally ``n``-subtracted."""
    kind = _ALIASES.get(kind, kind.replace("_", "-"))
    try:
        build = _CONSTRUCTORS[kind]
    except KeyError:
        raise DomainError(f"unknown state {kind!r}; choose from {sorted(_CONSTRUCTORS)}") from None
    if n < 0:
        raise DomainError(f"subtraction count must be non-negative, got {n}")
    return build(param, n, trunc, ctrl)
