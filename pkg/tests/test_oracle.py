import math

import numpy as np
import pytest

from itp_confine.engine import solve_spectrum
from itp_confine.grid import make_asymmetric_grid, make_symmetric_grid
from itp_confine.oracle import OracleError, build_hamiltonian, lowest_eigenpairs, lowest_eigenvalues
from itp_confine.potential import Harmonic, Quartic, ShiftedHarmonic, Zero, sample_potential
from itp_confine.quadrature import norm, overlap


def test_three_point_box_spectrum_exact():
    g = make_symmetric_grid(1.0, 201)
    m = g.n_interior
    H = build_hamiltonian(Zero(), g, stencil_order=3)
    k = np.arange(1, 7)
    exact = (1 - np.cos(k * np.pi / (m + 1))) / g.h**2
    assert np.allclose(lowest_eigenvalues(H, 6), exact, rtol=1e-13, atol=0)


@pytest.mark.parametrize("order", [3, 5])
def test_persymmetric(order):
    H = build_hamiltonian(Harmonic(-1), make_symmetric_grid(2.0, 31), order)
    A = H.to_dense()
    assert np.array_equal(A, A.T) and np.array_equal(A, A[::-1, ::-1])


@pytest.mark.parametrize("order", [3, 5])
def test_deep_row_sums_are_potential(order):
    g = make_asymmetric_grid(2.0, 0.3, 41)
    spec = ShiftedHarmonic(0.1)
    A = build_hamiltonian(spec, g, order).to_dense()
    v = sample_potential(spec, g)[1:-1]
    assert np.allclose(A.sum(axis=1)[3:-3], v[3:-3], rtol=0, atol=1e-9)


def test_rejects_bad_arguments():
    g = make_symmetric_grid(1.0, 21)
    with pytest.raises(ValueError):
        build_hamiltonian(Zero(), g, 4)
    H = build_hamiltonian(Zero(), g)
    with pytest.raises(ValueError):
        lowest_eigenvalues(H, 0)
    with pytest.raises(ValueError):
        lowest_eigenvalues(H, 20)


@pytest.mark.parametrize("order, p", [(3, 2.0), (5, 4.0)])
def test_box_levels_converge_at_stencil_order(order, p):
    errs = []
    for n in (101, 201, 401):
        H = build_hamiltonian(Zero(), make_symmetric_grid(1.0, n), order)
        exact = (np.arange(1, 5) ** 2) * math.pi**2 / 8
        errs.append(np.abs(np.array(lowest_eigenvalues(H, 4)) - exact))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.abs(orders - p) < 0.1)


def test_wide_box_oscillator():
    H = build_hamiltonian(Harmonic(1), make_symmetric_grid(5.0, 4001))
    expected = [0.5000000000768, 1.5000000036719, 2.5000000840188]
    assert np.allclose(lowest_eigenvalues(H, 3), expected, rtol=0, atol=1e-8)


def test_matches_itp_ladder():
    g = make_symmetric_grid(2.0, 801)
    ladder = solve_spectrum(Quartic(), g, n_states=4)
    ref = lowest_eigenvalues(build_hamiltonian(Quartic(), g), 4)
    assert np.allclose([r.energy for r in ladder], ref, rtol=0, atol=1e-9)


def test_rayleigh_quotient_matches_dense():
    g = make_symmetric_grid(1.5, 25)
    rng = np.random.default_rng(3)
    for order in (3, 5):
        H = build_hamiltonian(Harmonic(1), g, order)
        x = rng.standard_normal(H.size)
        A = H.to_dense()
        assert H.rayleigh_quotient(x) == pytest.approx(x @ A @ x / (x @ x), rel=1e-12)
        assert np.allclose(H.matvec(x), A @ x, rtol=1e-13, atol=1e-10)


@pytest.mark.parametrize("order", [3, 5])
def test_eigenpairs_orthonormal_with_small_residual(order):
    g = make_asymmetric_grid(2.0, 0.7, 301)
    spec = Harmonic(1)
    H = build_hamiltonian(spec, g, order)
    energies, states = lowest_eigenpairs(H, 5)
    assert np.all(np.diff(energies) > 0)
    for i, (e, s) in enumerate(zip(energies, states)):
        assert abs(norm(s) - 1.0) <= 1e-13
        x = s.values[1:-1]
        assert np.linalg.norm(H.matvec(x) - e * x) <= 1e-9 * np.linalg.norm(x)
        for t in states[:i]:
            assert abs(overlap(s, t)) <= 1e-12


def test_degenerate_pair_resolved():
    H = build_hamiltonian(Harmonic(-1), make_symmetric_grid(10.0, 8001))
    e0, e1 = lowest_eigenvalues(H, 2)
    assert abs(e0 - e1) <= 1e-9
    assert e0 == pytest.approx(-41.589187578860, abs=1e-8)


@pytest.mark.parametrize("spec", [Harmonic(1), Zero(), Quartic()])
def test_monotone_under_refinement_in_small_box(spec):
    # box-dominated regime: levels approach the continuum from one side
    levels = [lowest_eigenvalues(build_hamiltonian(spec, make_symmetric_grid(0.5, n)), 3)
              for n in (101, 201, 401)]
    steps = np.diff(np.array(levels), axis=0)
    assert np.all(np.sign(steps) == np.sign(steps[0]))


def test_residual_failure_raised(monkeypatch):
    from itp_confine import oracle

    monkeypatch.setattr(oracle, "_residual_bound", lambda H: 0.0)
    with pytest.raises(OracleError):
        lowest_eigenvalues(build_hamiltonian(Zero(), make_symmetric_grid(1.0, 51)), 1)
