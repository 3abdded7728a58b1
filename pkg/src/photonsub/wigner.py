"""Wigner quasi-probability of single-mode pure states in the Fock basis.

Convention: ``W(z) = (2/pi) Tr[D(z) Pi D(z)^† rho]`` with the parity operator
``Pi``, so the vacuum is ``(2/pi) exp(-2|z|^2)`` and ``∫ W d^2z = 1``.
In the Fock basis,

    W(z) = (2/pi) sum_{m,n} c_m conj(c_n) w_nm(z),
    w_nm = (-1)^n sqrt(n!/m!) (2 conj(z))^(m-n) e^(-2|z|^2) L_n^(m-n)(4|z|^2),  m >= n,

and ``w_mn = conj(w_nm)``. The Laguerre factors are carried as normalized
Laguerre functions ``h_n^d(x) = sqrt(n!/(n+d)!) x^(d/2) e^(-x/2) L_n^d(x)``
through their three-term recurrence in ``n``, which never forms a factorial.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fock import FockAmplitudes

__all__ = [
    "PhaseSpaceGrid",
    "WignerField",
    "laguerre",
    "wigner_point",
    "wigner_values",
    "wigner_field",
    "parity_at_origin",
    "field_to_csv",
]

INTEGRAL_TOLERANCE = 1e-3


def laguerre(n: int, alpha: float, x) -> np.ndarray:
    """Associated Laguerre polynomial ``L_n^alpha(x)`` by upward recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


@dataclass(frozen=True)
class PhaseSpaceGrid:
    re_min: float = -4.0
    re_max: float = 4.0
    im_min: float = -4.0
    im_max: float = 4.0
    n_re: int = 161
    n_im: int = 161

    def __post_init__(self):
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise DomainError("grid bounds must satisfy max > min on both axes")
        if self.n_re < 2 or self.n_im < 2:
            raise DomainError("grid needs at least two points per axis")

    @classmethod
    def parse(cls, spec: str) -> "PhaseSpaceGrid":
        """``"remin:remax:nre,immin:immax:nim"``."""
        try:
            re_part, im_part = spec.split(",")
            r0, r1, nr = re_part.split(":")
            i0, i1, ni = im_part.split(":")
            return cls(float(r0), float(r1), float(i0), float(i1), int(nr), int(ni))
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"bad grid spec {spec!r}; expected remin:remax:nre,immin:immax:nim") from None

    @property
    def re_axis(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.n_re)

    @property
    def im_axis(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.n_im)

    def points(self) -> np.ndarray:
        """Complex grid of shape ``(n_re, n_im)``."""
        re, im = np.meshgrid(self.re_axis, self.im_axis, indexing="ij")
        return re + 1j * im


@dataclass(frozen=True)
class WignerField:
    grid: PhaseSpaceGrid
    values: np.ndarray  # (n_re, n_im)
    min_value: float
    integral_estimate: float

    @property
    def adequate(self) -> bool:
        """Whether the grid captured the full normalization."""
        return abs(self.integral_estimate - 1.0) <= INTEGRAL_TOLERANCE


def wigner_values(state: FockAmplitudes, z) -> np.ndarray:
    """Vectorized Wigner function at the complex points ``z`` (any shape)."""
    c = np.asarray(state.amps, dtype=complex)
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    N = c.size - 1
    x = 4.0 * np.abs(z) ** 2
    phase = np.exp(-1j * np.angle(z))  # conj(z)/|z|
    sign = (-1.0) ** np.arange(N + 1)
    total = np.zeros(z.size)
    with np.errstate(divide="ignore"):
        log_x = np.log(x)
    for d in range(N + 1):
        coeff = c[d:] * np.conj(c[: N + 1 - d]) * sign[: N + 1 - d]
        if not coeff.any():
            continue
        # h_0^d = x^(d/2) e^(-x/2) / sqrt(d!)
        if d == 0:
            h_cur = np.exp(-x / 2)
        else:
            with np.errstate(under="ignore"):
                h_cur = np.exp(0.5 * d * log_x - x / 2 - 0.5 * math.lgamma(d + 1.0))
        h_prev = np.zeros_like(h_cur)
        acc = coeff[0] * h_cur
        for n in range(N - d):
            h_prev, h_cur = h_cur, (
                (2 * n + 1 + d - x) * h_cur - math.sqrt(n * (n + d)) * h_prev
            ) / math.sqrt((n + 1) * (n + 1 + d))
            acc = acc + coeff[n + 1] * h_cur
        if d == 0:
            total += acc.real
        else:
            total += 2.0 * (acc * phase ** d).real
    return (2.0 / math.pi * total).reshape(shape)


def wigner_point(state: FockAmplitudes, z: complex) -> float:
    return float(wigner_values(state, np.array([z]))[0])


def parity_at_origin(state: FockAmplitudes) -> float:
    """``W(0) = (2/pi) sum_n (-1)^n |c_n|^2``."""
    p = np.abs(state.amps) ** 2
    return float(2.0 / math.pi * np.sum(p * (-1.0) ** np.arange(p.size)))


def wigner_field(state: FockAmplitudes, grid: PhaseSpaceGrid | None = None) -> WignerField:
    """Wigner function on a rectangular grid plus trapezoid-rule normalization.

    A ``RuntimeWarning`` is issued when the integral misses 1 by more than
    ``INTEGRAL_TOLERANCE``; the grid is then too small for the state.
    """
    grid = grid or PhaseSpaceGrid()
    values = wigner_values(state, grid.points())
    integral = float(np.trapezoid(np.trapezoid(values, grid.im_axis, axis=1), grid.re_axis))
    field = WignerField(grid, values, float(values.min()), integral)
    if not field.adequate:
        warnings.warn(
            f"Wigner integral {integral:.6g} deviates from 1; enlarge the grid", RuntimeWarning,
            stacklevel=2,
        )
    return field


def field_to_csv(field: WignerField) -> str:
    """CSV with header ``re,im,w``; outer loop over im, inner over re."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["re", "im", "w"])
    re_axis, im_axis = field.grid.re_axis, field.grid.im_axis
    for j, im in enumerate(im_axis):
        for i, re in enumerate(re_axis):
            writer.writerow([repr(float(re)), repr(float(im)), repr(float(field.values[i, j]))])
    return buf.getvalue()
