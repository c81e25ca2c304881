"""Uniform 1D meshes spanning a box with impenetrable walls.

The wavefunction is pinned to zero on the two wall points ``x[0] = a`` and
``x[-1] = b``; the unknowns of every solver are the interior points.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

#: Smallest mesh that still leaves interior points for the five-point stencil.
MIN_POINTS = 9


@dataclass(frozen=True)
class BoxDomain:
    """Closed interval ``[a, b]`` bounded by infinitely high walls."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError(f"box walls must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise ValueError(f"left wall must lie left of right wall, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def is_symmetric(self) -> bool:
        return self.a == -self.b


@dataclass(frozen=True)
class Grid:
    """``n_points`` equally spaced points from ``domain.a`` to ``domain.b``."""

    domain: BoxDomain
    n_points: int

    def __post_init__(self):
        if int(self.n_points) != self.n_points:
            raise ValueError(f"n_points must be an integer, got {self.n_points!r}")
        if self.n_points < MIN_POINTS:
            raise ValueError(
                f"need at least {MIN_POINTS} grid points for the five-point stencil, "
                f"got {self.n_points}"
            )

    @property
    def h(self) -> float:
        return (self.domain.b - self.domain.a) / (self.n_points - 1)

    @cached_property
    def x(self) -> np.ndarray:
        # index arithmetic, never cumulative sums
        x = self.domain.a + np.arange(self.n_points) * self.h
        if self.domain.is_symmetric:
            # exact mirror image, so even potentials sample as palindromes
            half = self.n_points // 2
            x[self.n_points - half:] = -x[half - 1::-1]
            if self.n_points % 2:
                x[half] = 0.0
        x.flags.writeable = False
        return x

    @property
    def interior(self) -> slice:
        return slice(1, self.n_points - 1)

    @property
    def n_interior(self) -> int:
        return self.n_points - 2


def make_symmetric_grid(R: float, N: int) -> Grid:
    """Grid on ``[-R, R]`` with ``N`` points including both walls."""
    if not R > 0:
        raise ValueError(f"box half-width R must be positive, got {R}")
    return Grid(BoxDomain(-R, R), N)


def make_asymmetric_grid(L: float, d: float, N: int) -> Grid:
    """Grid on ``[-L/2 + d, L/2 + d]``.

    With a potential centred at the origin, ``d`` is the offset of the
    potential minimum from the box centre.
    """
    if not L > 0:
        raise ValueError(f"box width L must be positive, got {L}")
    return Grid(BoxDomain(-L / 2 + d, L / 2 + d), N)
