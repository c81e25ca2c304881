"""Pentadiagonal linear systems by banded LU elimination without pivoting.

Row ``i`` of the system reads::

    alpha[i] x[i-2] + beta[i] x[i-1] + gamma[i] x[i] + delta[i] x[i+1] + zeta[i] x[i+2] = rhs[i]

All five bands have length ``M``; entries that would reach outside the
matrix (``alpha[:2]``, ``beta[0]``, ``delta[-1]``, ``zeta[-2:]``) are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

#: Relative size below which an eliminated pivot counts as zero.
PIVOT_GUARD = 1e-14


class PivotError(ArithmeticError):
    """Elimination produced a (near) zero pivot."""

    def __init__(self, row: int, pivot: float, scale: float):
        self.row = row
        self.pivot = pivot
        super().__init__(
            f"near-zero pivot {pivot:.3e} in row {row} (diagonal scale {scale:.3e}); "
            "the system is singular to working precision -- reduce the time step"
        )


@njit(cache=True)
def _factor(alpha, beta, gamma, delta, zeta, guard):
    m = gamma.size
    l1 = np.zeros(m)
    l2 = np.zeros(m)
    u0 = np.empty(m)
    u1 = np.zeros(m)
    u2 = np.zeros(m)
    for i in range(m):
        b = beta[i] if i >= 1 else 0.0
        g = gamma[i]
        if i >= 2:
            l2[i] = alpha[i] / u0[i - 2]
            b -= l2[i] * u1[i - 2]
            g -= l2[i] * u2[i - 2]
        if i >= 1:
            l1[i] = b / u0[i - 1]
            g -= l1[i] * u1[i - 1]
        u0[i] = g
        if abs(g) <= guard or not np.isfinite(g):
            return l1, l2, u0, u1, u2, i
        if i + 1 < m:
            u1[i] = delta[i] - (l1[i] * u2[i - 1] if i >= 1 else 0.0)
        if i + 2 < m:
            u2[i] = zeta[i]
    return l1, l2, u0, u1, u2, -1


@njit(cache=True)
def _substitute(l1, l2, inv_u0, u1, u2, rhs):
    # reciprocal pivots keep divisions off the recurrence's critical path
    m = inv_u0.size
    y = np.empty(m)
    y[0] = rhs[0]
    y[1] = rhs[1] - l1[1] * y[0]
    for i in range(2, m):
        y[i] = rhs[i] - l1[i] * y[i - 1] - l2[i] * y[i - 2]
    x = np.empty(m)
    x[m - 1] = y[m - 1] * inv_u0[m - 1]
    x[m - 2] = (y[m - 2] - u1[m - 2] * x[m - 1]) * inv_u0[m - 2]
    for i in range(m - 3, -1, -1):
        x[i] = (y[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) * inv_u0[i]
    return x


def _as_bands(alpha, beta, gamma, delta, zeta):
    bands = [np.ascontiguousarray(b, dtype=float) for b in (alpha, beta, gamma, delta, zeta)]
    m = bands[2].size
    if any(b.shape != (m,) for b in bands):
        raise ValueError("all five bands must be 1D with the same length")
    if m < 5:
        raise ValueError(f"need at least 5 unknowns, got {m}")
    if not all(np.all(np.isfinite(b)) for b in bands):
        raise ValueError("bands must be finite")
    return bands


@dataclass(frozen=True)
class PentaSystem:
    """Five bands and a right-hand side."""

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    zeta: np.ndarray
    rhs: np.ndarray

    @property
    def bands(self):
        return self.alpha, self.beta, self.gamma, self.delta, self.zeta


@dataclass(frozen=True)
class PentaFactor:
    """LU factors of a pentadiagonal matrix, reusable for many right-hand sides."""

    l1: np.ndarray
    l2: np.ndarray
    u0: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    size: int = field(init=False)
    inv_u0: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "size", self.u0.size)
        object.__setattr__(self, "inv_u0", 1.0 / self.u0)

    def solve(self, rhs) -> np.ndarray:
        rhs = np.ascontiguousarray(rhs, dtype=float)
        if rhs.shape != (self.size,):
            raise ValueError(f"rhs must have shape ({self.size},), got {rhs.shape}")
        return _substitute(self.l1, self.l2, self.inv_u0, self.u1, self.u2, rhs)


def factor_penta(alpha, beta, gamma, delta, zeta) -> PentaFactor:
    """LU-factorise the band matrix; raises :class:`PivotError` on a zero pivot."""
    bands = _as_bands(alpha, beta, gamma, delta, zeta)
    scale = float(np.max(np.abs(bands[2])))
    guard = PIVOT_GUARD * scale
    l1, l2, u0, u1, u2, bad = _factor(*bands, guard)
    if bad >= 0:
        raise PivotError(int(bad), float(u0[bad]), scale)
    return PentaFactor(l1, l2, u0, u1, u2)


def solve_penta(system: PentaSystem) -> np.ndarray:
    """Solve one pentadiagonal system (factor and substitute)."""
    return factor_penta(*system.bands).solve(system.rhs)


def band_matvec(alpha, beta, gamma, delta, zeta, x) -> np.ndarray:
    """Product of the band matrix with ``x``."""
    x = np.asarray(x, dtype=float)
    y = gamma * x
    y[1:] += beta[1:] * x[:-1]
    y[2:] += alpha[2:] * x[:-2]
    y[:-1] += delta[:-1] * x[1:]
    y[:-2] += zeta[:-2] * x[2:]
    return y


def band_to_dense(alpha, beta, gamma, delta, zeta) -> np.ndarray:
    """Dense copy of the band matrix (for checks on small systems)."""
    m = len(gamma)
    a = np.diag(np.asarray(gamma, dtype=float))
    a += np.diag(np.asarray(beta, dtype=float)[1:], -1)
    a += np.diag(np.asarray(alpha, dtype=float)[2:], -2)
    a += np.diag(np.asarray(delta, dtype=float)[:-1], 1)
    a += np.diag(np.asarray(zeta, dtype=float)[:-2], 2)
    assert a.shape == (m, m)
    return a
