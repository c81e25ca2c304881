"""Imaginary-time propagation with Gram-Schmidt deflation.

Each iteration propagates the current state by one implicit step, projects
out the already converged lower states, renormalises and evaluates the
energy.  The loop stops once the energy change stays below the tolerance
for ``sustain`` consecutive iterations.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .grid import Grid
from numba import njit

from .pentasolve import PentaFactor, PivotError, factor_penta
from .potential import PotentialSpec, sample_potential
from .quadrature import (
    CollapseError,
    WaveFunction,
    energy_expectation,
    inner,
    normalize,
    position_moments,
)
from .stencil import (
    PropagatorCoefficients,
    apply_hamiltonian,
    assemble_coefficients,
    assemble_rhs,
)

log = logging.getLogger(__name__)

TRIALS = ("even-gaussian", "odd-gaussian", "gaussian-at-center")

#: Deflated states with a smaller squared norm are treated as annihilated.
DEFLATION_COLLAPSE = 1e-150 ** 2

#: Number of time-step halvings attempted after a zero pivot.
MAX_RESTARTS = 5

#: Window (in steps) of the geometric tail estimate used by the stopping test.
TAIL_LAG = 64


@dataclass(frozen=True)
class ItpConfig:
    """Iteration controls.

    ``dtau=None`` picks a step from the grid and potential with
    :func:`default_dtau`.  Convergence requires both the last energy change
    and an estimate of the remaining geometric tail to stay below
    ``tol * max(1, |E|)`` on ``sustain`` consecutive steps.  The energy is
    quadratic in the error of the state, so ``state_tol`` additionally
    bounds the estimated remaining change of the state itself (L2 norm);
    ``None`` drops that test.
    ``trial=None`` alternates even and odd Gaussians with the state index.
    """

    dtau: float | None = None
    tol: float = 1e-13
    state_tol: float | None = 1e-10
    max_iter: int = 1_000_000
    sustain: int = 3
    trial: str | None = None
    trial_width: float = 1.0

    def __post_init__(self):
        if self.dtau is not None and not (self.dtau > 0 and math.isfinite(self.dtau)):
            raise ValueError(f"dtau must be positive, got {self.dtau}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.state_tol is not None and not self.state_tol > 0:
            raise ValueError(f"state_tol must be positive, got {self.state_tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.sustain < 1:
            raise ValueError(f"sustain must be at least 1, got {self.sustain}")
        if self.trial is not None and self.trial not in TRIALS:
            raise ValueError(f"unknown trial {self.trial!r}; choose from {', '.join(TRIALS)}")
        if not self.trial_width > 0:
            raise ValueError("trial_width must be positive")


@dataclass
class SolveResult:
    state_index: int
    energy: float
    psi: WaveFunction
    iterations: int
    energy_history: np.ndarray = field(repr=False)
    moments: tuple[float, float]
    converged: bool
    dtau: float


def trial_function(selector: str, grid: Grid, width: float = 1.0) -> WaveFunction:
    """Normalized Gaussian trial state centred on the box midpoint.

    ``even-gaussian`` and ``gaussian-at-center`` sample ``exp(-(x-c)^2)``;
    ``odd-gaussian`` samples ``(x-c) exp(-(x-c)^2)``.  ``width`` rescales
    ``x - c``.
    """
    if selector not in TRIALS:
        raise ValueError(f"unknown trial {selector!r}; choose from {', '.join(TRIALS)}")
    c = grid.domain.midpoint
    if grid.domain.is_symmetric:
        s = grid.x / width
        # mirror so that the samples are exactly (anti)symmetric
        s = 0.5 * (s - s[::-1])
    else:
        s = (grid.x - c) / width
    values = np.exp(-s * s)
    if selector == "odd-gaussian":
        values = s * values
    values[0] = values[-1] = 0.0
    return normalize(WaveFunction(values, grid))


def default_trial(state_index: int) -> str:
    return "even-gaussian" if state_index % 2 == 0 else "odd-gaussian"


def default_dtau(spec: PotentialSpec, grid: Grid, state_index: int = 0) -> float:
    """Time step balancing the decay of low- and high-lying components.

    A component with energy ``e`` is multiplied by
    ``g(e) = (1 - dtau e/2) / (1 + dtau e/2)`` per step.  The stiffest grid
    mode (``e_max ~ 8/(3h^2)``) decays by about ``4/(dtau e_max)`` per step,
    the next state above the target by about ``dtau * gap``; the two rates
    balance at ``dtau = 2 / sqrt(e_max * e_s)``.  ``e_s`` is an upper bound
    for the target's energy scale: the box level two states up plus the
    spread of the potential.
    """
    v = sample_potential(spec, grid)[grid.interior]
    vmin, vmax = float(v.min()), float(v.max())
    e_max = 8.0 / (3.0 * grid.h ** 2) + max(vmax, 0.0)
    box = (state_index + 3) ** 2 * math.pi ** 2 / (2.0 * grid.domain.width ** 2)
    e_s = box + (vmax - vmin)
    dtau = 2.0 / math.sqrt(e_max * e_s)
    if vmin < 0:
        # keeps 1 - dtau*E/2 > 0 for states below zero
        dtau = min(dtau, 1.0 / abs(vmin))
    return dtau


@dataclass(frozen=True)
class Propagator:
    """Band coefficients and their LU factors for a fixed time step."""

    coeffs: PropagatorCoefficients
    factor: PentaFactor

    @classmethod
    def build(cls, spec: PotentialSpec, grid: Grid, dtau: float) -> "Propagator":
        coeffs = assemble_coefficients(spec, grid, dtau)
        return cls(coeffs, factor_penta(*coeffs.lhs_bands()))

    @property
    def dtau(self) -> float:
        return self.coeffs.dtau


def propagate_step(psi: WaveFunction, propagator: Propagator) -> WaveFunction:
    """One implicit imaginary-time step; the result is not normalized."""
    rhs = assemble_rhs(propagator.coeffs, psi.values)
    return WaveFunction.from_interior(propagator.factor.solve(rhs), psi.grid)


def deflate(psi: WaveFunction, lower_states) -> WaveFunction:
    """Remove the components of ``psi`` along each of ``lower_states``.

    Projections are subtracted one state at a time (modified Gram-Schmidt).
    Raises :class:`CollapseError` when nothing is left.
    """
    lower_states = list(lower_states)
    if not lower_states:
        return psi
    values = psi.values.copy()
    grid = psi.grid
    for phi in lower_states:
        if phi.grid != grid:
            raise ValueError("deflation against a state on a different grid")
        values -= inner(values, phi.values, grid) * phi.values
    if not inner(values, values, grid) > DEFLATION_COLLAPSE:
        raise CollapseError(
            "trial state lies in the span of the lower states; use a different trial function"
        )
    return WaveFunction(values, psi.grid)


@njit(cache=True)
def _hamiltonian_into(f, v, inv12h2, out):
    """``(-1/2 D2 + v) f`` at the interior points; ``f[0] = f[-1] = 0``.

    Same nested differences and reflected ghosts as
    :func:`stencil.apply_laplacian_5pt`.
    """
    n = f.size
    for j in range(1, n - 1):
        fm2 = f[j - 2] if j >= 2 else -f[1]
        fp2 = f[j + 2] if j + 2 <= n - 1 else -f[n - 2]
        narrow = (f[j + 1] - f[j]) - (f[j] - f[j - 1])
        wide = (fp2 - f[j]) - (f[j] - fm2)
        out[j - 1] = -0.5 * (16.0 * narrow - wide) * inv12h2 + v[j - 1] * f[j]


@njit(cache=True)
def _geometric_tail(seq, n, lag):
    """Estimated ``sum_{j>n} |seq[j+1] - seq[j]|`` given the history ``seq[:n+1]``.

    The contraction factor comes from two windows of ``k`` steps (Aitken's
    estimate with lag ``k``), which resolves a slow contraction that single
    steps, close to rounding noise, cannot.  Without a clear contraction
    the last window itself is returned.
    """
    k = min(lag, n // 2)
    if k < 1:
        return 0.0
    w2 = seq[n - k] - seq[n]
    w1 = seq[n - 2 * k] - seq[n - k]
    if w1 != 0.0:
        q = w2 / w1
        if 0.0 < q < 1.0:
            return abs(w2) * q / (1.0 - q)
    return abs(w2)


@njit(cache=True)
def _within_tol(hist, walk, n, tol, state_tol, lag):
    """Energy ``hist[n]`` and the state have both settled.

    ``walk[n]`` is the accumulated length of the state's path,
    ``sum ||psi_j - psi_{j-1}||``; its tail bounds the distance still to go.
    """
    e = hist[n]
    bound = tol * max(1.0, abs(e))
    if abs(hist[n - 1] - e) > bound or _geometric_tail(hist, n, lag) > bound:
        return False
    return walk[n] - walk[n - 1] + _geometric_tail(walk, n, lag) <= state_tol


@njit(cache=True)
def _run(f, hf, v, h, half, l1, l2, inv_u0, u1, u2, lower, hist, walk, n, n_stop,
         tol, state_tol, sustain, below, lag, collapse):
    """Iterate from ``hist[n]`` up to ``n_stop``; ``f`` and ``hf`` are updated in place.

    One step is the implicit solve with the factors of ``I + dtau/2 H``,
    deflation, normalization and the energy.  The cheap independent work
    (right-hand side, norms, projections) rides along with the two
    substitution sweeps, whose recurrences are latency bound.

    Returns ``(n, below, status)`` with status 1 converged, 0 still
    running, -1 collapsed.
    """
    m = inv_u0.size
    inv12h2 = 1.0 / (12.0 * h * h)
    n_low = lower.shape[0]
    y = np.empty(m)
    x = np.zeros(m + 2)  # full-length, walls stay zero
    proj = np.empty(n_low)
    while n < n_stop:
        n += 1
        # forward sweep on (I - dtau/2 H) f
        y[0] = f[1] - half * hf[0]
        y[1] = (f[2] - half * hf[1]) - l1[1] * y[0]
        for i in range(2, m):
            y[i] = (f[i + 1] - half * hf[i]) - l1[i] * y[i - 1] - l2[i] * y[i - 2]
        # back sweep, accumulating projections on the lower states
        proj[:] = 0.0
        x[m] = y[m - 1] * inv_u0[m - 1]
        x[m - 1] = (y[m - 2] - u1[m - 2] * x[m]) * inv_u0[m - 2]
        for i in range(m - 3, -1, -1):
            x[i + 1] = (y[i] - u1[i] * x[i + 2] - u2[i] * x[i + 3]) * inv_u0[i]
        for k in range(n_low):
            proj[k] = h * np.dot(x, lower[k])
        for k in range(n_low):
            c = proj[k]
            for i in range(m + 2):
                x[i] -= c * lower[k, i]
        n2 = h * np.dot(x, x)
        if not n2 > collapse:
            return n, below, -1
        s = 1.0 / math.sqrt(n2)
        step2 = 0.0
        for i in range(1, m + 1):
            xi = x[i] * s
            step2 += (xi - f[i]) ** 2
            f[i] = xi
        walk[n] = walk[n - 1] + math.sqrt(h * step2)
        _hamiltonian_into(f, v, inv12h2, hf)
        hist[n] = h * np.dot(f[1:-1], hf)
        if _within_tol(hist, walk, n, tol, state_tol, lag):
            below += 1
            if below >= sustain:
                return n, below, 1
        else:
            below = 0
    return n, below, 0


def _iterate(spec, grid, config, lower, psi, dtau):
    propagator = Propagator.build(spec, grid, dtau)
    fac = propagator.factor
    h, v = grid.h, propagator.coeffs.potential
    lower_values = np.array([phi.values for phi in lower]).reshape(len(lower), grid.n_points)
    f = psi.values.copy()
    hf = np.empty(grid.n_interior)
    _hamiltonian_into(f, v, 1.0 / (12.0 * h * h), hf)
    size = min(config.max_iter, 4096) + 1
    hist, walk = np.empty(size), np.empty(size)
    hist[0] = h * (f[1:-1] @ hf)
    walk[0] = 0.0
    state_tol = math.inf if config.state_tol is None else config.state_tol
    n, below, status = 0, 0, 0
    while status == 0 and n < config.max_iter:
        if n + 1 >= hist.size:
            grow = min(hist.size, config.max_iter + 1 - hist.size)
            hist = np.concatenate([hist, np.empty(grow)])
            walk = np.concatenate([walk, np.empty(grow)])
        n, below, status = _run(f, hf, v, h, 0.5 * dtau, fac.l1, fac.l2, fac.inv_u0, fac.u1, fac.u2,
                                lower_values, hist, walk, n, hist.size - 1, config.tol, state_tol,
                                config.sustain, below, TAIL_LAG, DEFLATION_COLLAPSE)
    if status < 0:
        raise CollapseError(f"state collapsed after {n} iterations")
    return WaveFunction(f, grid, normalized=True), hist[: n + 1].copy(), n, status == 1


def solve_state(spec: PotentialSpec, grid: Grid, config: ItpConfig = ItpConfig(),
                lower_states=(), state_index: int | None = None) -> SolveResult:
    """Converge the lowest state orthogonal to ``lower_states``.

    ``state_index`` defaults to ``len(lower_states)``; it selects the
    default trial parity and time step.
    """
    lower = list(lower_states)
    n = len(lower) if state_index is None else state_index
    trial = trial_function(config.trial or default_trial(n), grid, config.trial_width)
    psi = normalize(deflate(trial, lower))
    dtau = config.dtau if config.dtau is not None else default_dtau(spec, grid, n)

    for attempt in range(MAX_RESTARTS + 1):
        try:
            psi_n, history, iterations, converged = _iterate(spec, grid, config, lower, psi, dtau)
            break
        except PivotError:
            if attempt == MAX_RESTARTS:
                raise
            log.warning("zero pivot at dtau=%g for state %d; halving the step", dtau, n)
            dtau *= 0.5
    if not converged:
        log.warning("state %d not converged after %d iterations (last change %.3e)",
                    n, iterations, history[-1] - history[-2] if history.size > 1 else float("nan"))
    return SolveResult(
        state_index=n,
        energy=float(history[-1]),
        psi=psi_n,
        iterations=iterations,
        energy_history=history,
        moments=position_moments(psi_n),
        converged=converged,
        dtau=dtau,
    )


class SpectrumError(RuntimeError):
    """A state of a ladder failed; carries the index and the results so far."""

    def __init__(self, state_index: int, cause: Exception, results):
        self.state_index = state_index
        self.results = results
        super().__init__(f"state {state_index}: {cause}")


def solve_spectrum(spec: PotentialSpec, grid: Grid, config: ItpConfig = ItpConfig(),
                   n_states: int = 1) -> list[SolveResult]:
    """Lowest ``n_states`` states, each deflated against all states below it."""
    if n_states < 1:
        raise ValueError(f"n_states must be at least 1, got {n_states}")
    results: list[SolveResult] = []
    for n in range(n_states):
        try:
            res = solve_state(spec, grid, config, [r.psi for r in results], state_index=n)
        except (CollapseError, PivotError) as exc:
            raise SpectrumError(n, exc, results) from exc
        results.append(res)
    return results


def with_dtau(config: ItpConfig, dtau: float | None) -> ItpConfig:
    return replace(config, dtau=dtau)
