"""Real special functions used by the closed-form normalizations.

Everything here works on plain Python floats. The Gauss hypergeometric
function is summed directly as a power series; the callers only ever need
arguments in ``[0, 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

__all__ = [
    "SeriesControl",
    "ln_gamma",
    "euler_beta",
    "gauss_2f1",
    "binomial",
]


@dataclass(frozen=True)
class SeriesControl:
    """Stopping rule for power series.

    A series stops once the estimated remaining tail is below
    ``rel_tolerance`` times the running sum.
    """

    rel_tolerance: float = 1e-14
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.rel_tolerance > 0:
            raise DomainError(f"rel_tolerance must be positive, got {self.rel_tolerance}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be at least 1, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def euler_beta(x: float, y: float) -> float:
    """Euler beta function ``B(x, y) = Γ(x)Γ(y)/Γ(x+y)``."""
    if not (x > 0 and y > 0):
        raise DomainError(f"euler_beta requires positive arguments, got ({x}, {y})")
    return math.exp(ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y))


def _is_nonpositive_int(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def gauss_2f1(a: float, b: float, c: float, x: float,
              ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; x) for ``0 <= x < 1``.

    Terms follow the ratio ``(a+k)(b+k) x / ((c+k)(k+1))``, which tends to
    ``x`` monotonically once ``k`` exceeds the parameters. With
    ``r = max(next ratio, x)`` the remaining tail is bounded by the geometric
    series ``|t_k| r / (1 - r)``; summation stops when that bound drops below
    the relative tolerance.
    """
    if _is_nonpositive_int(c):
        raise DomainError(f"c must not be a non-positive integer, got {c}")
    if not 0.0 <= x < 1.0:
        raise DomainError(f"gauss_2f1 requires 0 <= x < 1, got {x}")
    if x == 0.0:
        return 1.0

    terms = [1.0]
    term = 1.0
    running = 1.0
    for k in range(ctrl.max_terms):
        term *= (a + k) * (b + k) * x / ((c + k) * (k + 1))
        if term == 0.0:
            # terminating series (a or b a non-positive integer)
            return math.fsum(terms)
        terms.append(term)
        running += term
        # the term ratio tends to x monotonically, so max(ratio, x) bounds it
        r = max(abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2))) * x, x)
        if r < 1.0:
            tail = abs(term) * r / (1.0 - r)
            if tail <= ctrl.rel_tolerance * abs(running):
                return math.fsum(terms)
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {x}) did not converge in {ctrl.max_terms} terms"
    )


def binomial(n: int, k: int) -> float:
    """Binomial coefficient C(n, k) as a float; zero outside ``0 <= k <= n``."""
    if n < 0 or k < 0 or k > n:
        return 0.0
    return float(math.comb(n, k))
