"""Imaginary-time propagation for one-dimensional confined oscillators.

Stationary states of ``-1/2 d^2/dx^2 + v(x)`` between impenetrable walls are
obtained by propagating a trial function in imaginary time with an implicit
five-point finite-difference scheme, removing the lower states by
Gram-Schmidt deflation.  A direct band eigensolver is included as an
independent reference.
"""

from .engine import (
    ItpConfig,
    SolveResult,
    SpectrumError,
    default_dtau,
    deflate,
    propagate_step,
    solve_spectrum,
    solve_state,
    trial_function,
)
from .grid import BoxDomain, Grid, make_asymmetric_grid, make_symmetric_grid
from .oracle import DiscreteHamiltonian, OracleError, build_hamiltonian, lowest_eigenpairs, lowest_eigenvalues
from .pentasolve import PentaSystem, PivotError, factor_penta, solve_penta
from .potential import Harmonic, Quartic, ShiftedHarmonic, Zero, potential_from_name, sample_potential
from .quadrature import (
    CollapseError,
    WaveFunction,
    energy_expectation,
    integrate,
    norm,
    normalize,
    overlap,
    position_moments,
)

__version__ = "0.1.0"

__all__ = [
    "BoxDomain",
    "CollapseError",
    "DiscreteHamiltonian",
    "Grid",
    "Harmonic",
    "ItpConfig",
    "OracleError",
    "PentaSystem",
    "PivotError",
    "Quartic",
    "ShiftedHarmonic",
    "SolveResult",
    "SpectrumError",
    "WaveFunction",
    "Zero",
    "build_hamiltonian",
    "default_dtau",
    "deflate",
    "energy_expectation",
    "factor_penta",
    "integrate",
    "lowest_eigenpairs",
    "lowest_eigenvalues",
    "make_asymmetric_grid",
    "make_symmetric_grid",
    "norm",
    "normalize",
    "overlap",
    "position_moments",
    "potential_from_name",
    "propagate_step",
    "sample_potential",
    "solve_penta",
    "solve_spectrum",
    "solve_state",
    "trial_function",
]
