"""Reference eigensolver for the discretized Hamiltonian.

The Hamiltonian ``-1/2 D2 + v`` on the interior points of a grid with
Dirichlet walls is a symmetric band matrix: tridiagonal for the three-point
second derivative, pentadiagonal for the five-point one (with the same
reflected wall closure the propagator uses).

Eigenvalues are located first and then polished:

* three-point: bisection on Sturm sequence counts, independent of every
  other module in the package;
* five-point: LAPACK's banded symmetric solver gives starting values.

Each value is then refined by shifted inverse iteration (a tridiagonal
banded solve, or :mod:`pentasolve` for the five-point form) and reported
as a Rayleigh quotient written as sums of squared differences.  Dense or
banded eigensolvers carry an absolute error near ``eps * ||H||``, which on
fine grids (``||H|| ~ 1/h**2``) swamps the low-lying levels; the
difference form is accurate to a few ulp of the eigenvalue itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.linalg import eigvals_banded, solve_banded

from .grid import Grid
from .pentasolve import PivotError, band_matvec, factor_penta
from .potential import PotentialSpec, sample_potential
from .quadrature import WaveFunction

#: Iteration cap for inverse iteration on a single eigenvector.
MAX_INVERSE_STEPS = 60

#: Residual bound from the contract; loosened by ``RESIDUAL_ULPS * eps * ||H||``.
RESIDUAL_BOUND = 1e-9
RESIDUAL_ULPS = 100.0


class OracleError(RuntimeError):
    """The reference eigen-iteration failed its residual check."""


@dataclass(frozen=True, eq=False)
class DiscreteHamiltonian:
    """Band form of ``-1/2 D2 + v`` over the interior points.

    ``diag`` has one entry per interior point, ``off[0]`` is the first
    off-diagonal and, for the five-point form, ``off[1]`` the second.
    ``potential`` keeps ``v`` at the interior points separately, since it
    cannot be recovered from ``diag`` to full precision on fine grids.
    """

    diag: np.ndarray
    off: tuple
    potential: np.ndarray
    grid: Grid
    spec: PotentialSpec
    stencil_order: int
    _scale: float = field(init=False, repr=False)

    def __post_init__(self):
        for a in (self.diag, self.potential, *self.off):
            a.setflags(write=False)
        scale = np.max(np.abs(self.diag)) + 2.0 * sum(np.max(np.abs(o)) for o in self.off)
        object.__setattr__(self, "_scale", float(scale))

    @property
    def size(self) -> int:
        return self.diag.size

    @property
    def norm_bound(self) -> float:
        """Gershgorin bound on ``||H||``."""
        return self._scale

    def _penta_bands(self, shift: float = 0.0):
        m = self.size
        e1 = np.zeros(m)
        e2 = np.zeros(m)
        e1[: m - 1] = self.off[0]
        if self.stencil_order == 5:
            e2[: m - 2] = self.off[1]
        # row i: alpha = H[i, i-2], beta = H[i, i-1]
        alpha = np.roll(e2, 2)
        beta = np.roll(e1, 1)
        return alpha, beta, self.diag - shift, e1, e2

    def matvec(self, x) -> np.ndarray:
        return band_matvec(*self._penta_bands(), np.asarray(x, dtype=float))

    def to_dense(self) -> np.ndarray:
        m = self.size
        out = np.diag(np.asarray(self.diag, dtype=float))
        for k, o in enumerate(self.off, start=1):
            out += np.diag(o, k) + np.diag(o, -k)
        return out[:m, :m]

    def rayleigh_quotient(self, x) -> float:
        """``x.H x / x.x`` with the kinetic part as squared differences."""
        x = np.asarray(x, dtype=float)
        h = self.grid.h
        u = np.zeros(x.size + 2)
        u[1:-1] = x
        d1 = np.diff(u)
        kin = d1 @ d1
        if self.stencil_order == 5:
            d2 = u[2:] - u[:-2]
            # the wide differences reaching one point past a wall are +-x[0],
            # +-x[-1]; the reflected ghosts subtract them once more
            kin = (16.0 * kin - d2 @ d2 - 2.0 * (x[0] ** 2 + x[-1] ** 2)) / 12.0
        return (0.5 * kin / (h * h) + (self.potential * x) @ x) / (x @ x)


def build_hamiltonian(spec: PotentialSpec, grid: Grid, stencil_order: int = 5) -> DiscreteHamiltonian:
    """Band matrix of ``-1/2 D2 + v`` on the interior points of ``grid``."""
    if stencil_order not in (3, 5):
        raise ValueError(f"stencil_order must be 3 or 5, got {stencil_order}")
    m = grid.n_interior
    h2 = grid.h ** 2
    v = sample_potential(spec, grid)[grid.interior]
    if stencil_order == 3:
        diag = 1.0 / h2 + v
        off = (np.full(m - 1, -0.5 / h2),)
    else:
        diag = 30.0 / (24.0 * h2) + v
        # reflected ghost beyond each wall
        diag[0] -= 1.0 / (24.0 * h2)
        diag[-1] -= 1.0 / (24.0 * h2)
        off = (np.full(m - 1, -16.0 / (24.0 * h2)), np.full(m - 2, 1.0 / (24.0 * h2)))
    return DiscreteHamiltonian(diag, off, v, grid, spec, stencil_order)


@njit(cache=True)
def _sturm_count(d, e2, x):
    """Number of eigenvalues of the tridiagonal matrix below ``x``."""
    count = 0
    q = d[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, d.size):
        if q == 0.0:
            q = 1e-300
        q = d[i] - x - e2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect(d, e2, k, lo, hi):
    """``k``-th smallest eigenvalue (0-based) by bisection on ``[lo, hi]``."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _sturm_count(d, e2, mid) > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _sturm_eigenvalues(H: DiscreteHamiltonian, k: int) -> np.ndarray:
    d = np.asarray(H.diag, dtype=float)
    e = np.asarray(H.off[0], dtype=float)
    r = np.zeros(d.size)
    r[:-1] += np.abs(e)
    r[1:] += np.abs(e)
    lo, hi = float(np.min(d - r)), float(np.max(d + r))
    e2 = e * e
    return np.array([_bisect(d, e2, j, lo, hi) for j in range(k)])


def _initial_eigenvalues(H: DiscreteHamiltonian, k: int) -> np.ndarray:
    if H.stencil_order == 3:
        return _sturm_eigenvalues(H, k)
    bands = np.zeros((3, H.size))
    bands[0] = H.diag
    bands[1, :-1] = H.off[0]
    bands[2, :-2] = H.off[1]
    return eigvals_banded(bands, lower=True, select="i", select_range=(0, k - 1))


def _shifted_solver(H: DiscreteHamiltonian, shift: float):
    if H.stencil_order == 5:
        return factor_penta(*H._penta_bands(shift)).solve
    ab = np.zeros((3, H.size))
    ab[0, 1:] = H.off[0]
    ab[1] = H.diag - shift
    ab[2, :-1] = H.off[0]
    return lambda rhs: solve_banded((1, 1), ab, rhs, check_finite=False)


def _orthogonalize(x, basis):
    for _ in range(2):
        for b in basis:
            x = x - (b @ x) * b
    return x


def _inverse_iteration(H, estimate, basis, rng):
    scale = max(1.0, abs(estimate))
    for offset in (1e-10, 1e-8, 1e-6):
        try:
            solve = _shifted_solver(H, estimate - offset * scale)
            break
        except PivotError:
            continue
    else:
        raise OracleError(f"no usable shift near {estimate!r}")
    x = _orthogonalize(rng.standard_normal(H.size), basis)
    x /= np.linalg.norm(x)
    for _ in range(MAX_INVERSE_STEPS):
        y = _orthogonalize(solve(x), basis)
        y /= np.linalg.norm(y)
        change = min(np.linalg.norm(y - x), np.linalg.norm(y + x))
        x = y
        if change < 1e-13:
            break
    # inside a (near) degenerate cluster x may keep turning within the
    # eigenspace; the caller's residual check decides acceptance
    return x


def _residual_bound(H: DiscreteHamiltonian) -> float:
    return RESIDUAL_BOUND + RESIDUAL_ULPS * np.finfo(float).eps * H.norm_bound


def lowest_eigenpairs(H: DiscreteHamiltonian, k: int, seed: int = 0):
    """The ``k`` lowest eigenvalues with normalized eigenfunctions.

    Returns
    -------
    energies : ndarray, shape (k,)
        Ascending eigenvalues.
    states : list of WaveFunction
        Eigenvectors with zero wall values, normalized to ``h * sum(psi**2) = 1``.
        Degenerate levels get an arbitrary orthonormal basis of their span.
    """
    if not 1 <= k <= H.size:
        raise ValueError(f"need 1 <= k <= {H.size}, got {k}")
    rng = np.random.default_rng(seed)
    basis = []
    energies = []
    bound = _residual_bound(H)
    for est in _initial_eigenvalues(H, k):
        x = _inverse_iteration(H, float(est), basis, rng)
        lam = H.rayleigh_quotient(x)
        res = np.linalg.norm(H.matvec(x) - lam * x)
        if not res <= bound:
            raise OracleError(f"residual {res:.3e} exceeds {bound:.3e} near eigenvalue {lam!r}")
        basis.append(x)
        energies.append(lam)
    order = np.argsort(energies, kind="stable")
    h = H.grid.h
    states = []
    for j in order:
        x = basis[j]
        # sign convention: first sizeable lobe positive
        pivot = x[np.argmax(np.abs(x) > 1e-3 * np.abs(x).max())]
        x = x * (math.copysign(1.0, pivot) / math.sqrt(h))
        states.append(WaveFunction.from_interior(x, H.grid, normalized=True))
    return np.asarray(energies)[order], states


def lowest_eigenvalues(H: DiscreteHamiltonian, k: int) -> list[float]:
    """The ``k`` smallest eigenvalues of ``H`` in ascending order."""
    energies, _ = lowest_eigenpairs(H, k)
    return [float(e) for e in energies]
