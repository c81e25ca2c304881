"""Interior potentials of the confined oscillators.

The infinite wall term is not represented here: it is imposed structurally
by pinning the wavefunction to zero on the wall points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid


@dataclass(frozen=True)
class Harmonic:
    """``sign * x**2 / 2``; ``sign=-1`` is the inverted (repulsive) oscillator."""

    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.sign * 0.5 * x * x

    @property
    def name(self) -> str:
        return "harmonic" if self.sign > 0 else "inverted"

    @property
    def is_even(self) -> bool:
        return True


@dataclass(frozen=True)
class Quartic:
    """``x**4 / 2``."""

    def __call__(self, x):
        x2 = np.square(np.asarray(x, dtype=float))
        # vectorised x**4 can round x and -x differently
        return 0.5 * x2 * x2

    name = "quartic"
    is_even = True


@dataclass(frozen=True)
class ShiftedHarmonic:
    """``(x - d)**2 / 2``, a harmonic well with its minimum at ``x = d``."""

    d: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.d):
            raise ValueError(f"offset d must be finite, got {self.d}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float) - self.d
        return 0.5 * x * x

    name = "shifted-harmonic"

    @property
    def is_even(self) -> bool:
        return self.d == 0


@dataclass(frozen=True)
class Zero:
    """Free particle between the walls."""

    def __call__(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    name = "zero"
    is_even = True


PotentialSpec = Harmonic | Quartic | ShiftedHarmonic | Zero

POTENTIAL_NAMES = ("harmonic", "inverted", "quartic", "shifted-harmonic", "zero")


def eval_potential(spec: PotentialSpec, x):
    """Potential energy at position(s) ``x``."""
    return spec(x)


def sample_potential(spec: PotentialSpec, grid: Grid) -> np.ndarray:
    """Potential at every grid point, walls included."""
    return np.asarray(spec(grid.x), dtype=float)


def potential_from_name(name: str, *, sign: int | None = None, d: float = 0.0) -> PotentialSpec:
    """Build a potential from its command-line name.

    ``harmonic`` accepts an explicit ``sign``; ``inverted`` is shorthand for
    ``harmonic`` with ``sign=-1``.
    """
    if name == "harmonic":
        return Harmonic(1 if sign is None else sign)
    if name == "inverted":
        if sign not in (None, -1):
            raise ValueError("the inverted oscillator has sign -1")
        return Harmonic(-1)
    if name == "quartic":
        return Quartic()
    if name == "shifted-harmonic":
        return ShiftedHarmonic(d)
    if name == "zero":
        return Zero()
    raise ValueError(f"unknown potential {name!r}; choose from {', '.join(POTENTIAL_NAMES)}")
