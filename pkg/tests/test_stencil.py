import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from itp_confine.grid import make_asymmetric_grid, make_symmetric_grid
from itp_confine.pentasolve import band_matvec
from itp_confine.potential import Harmonic, Quartic, ShiftedHarmonic, Zero, sample_potential
from itp_confine.stencil import (
    apply_hamiltonian,
    apply_laplacian_5pt,
    assemble_coefficients,
    assemble_rhs,
)


def _interior_values(grid, seed):
    rng = np.random.default_rng(seed)
    f = np.zeros(grid.n_points)
    f[1:-1] = rng.standard_normal(grid.n_interior)
    return f


def test_constant_annihilated_away_from_walls():
    g = make_symmetric_grid(1.0, 41)
    f = np.ones(41)
    f[0] = f[-1] = 0.0
    d2 = apply_laplacian_5pt(f, g.h)
    # d2[k] belongs to grid point k + 1
    assert np.all(d2[2:-2] == 0.0)


@pytest.mark.parametrize("power, exact", [(2, lambda x: 2.0 + 0 * x), (4, lambda x: 12 * x**2)])
def test_exact_on_low_polynomials(power, exact):
    g = make_symmetric_grid(1.0, 21)
    x = g.x
    d2 = apply_laplacian_5pt(x**power, g.h)[1:-1]
    assert np.allclose(d2, exact(x[2:-2]), rtol=0, atol=1e-11)


def test_fourth_order_on_wall_compatible_mode():
    # sin vanishes on the walls and is odd about them, like the ghosts
    errs = []
    for n in (41, 81, 161):
        g = make_symmetric_grid(1.0, n)
        f = np.sin(np.pi * (g.x + 1.0))
        f[0] = f[-1] = 0.0
        d2 = apply_laplacian_5pt(f, g.h)
        errs.append(np.max(np.abs(d2 + np.pi**2 * f[1:-1])))
    p = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all(np.abs(p - 4.0) < 0.2)


def test_hand_coefficients():
    g = make_symmetric_grid(4.0, 9)
    assert g.h == 1.0
    spec = Harmonic(1)
    c = assemble_coefficients(spec, g, 0.048)
    v = sample_potential(spec, g)[1:-1]
    assert np.allclose(c.alpha, 0.001, rtol=1e-14) and np.allclose(c.zeta, 0.001, rtol=1e-14)
    assert np.allclose(c.beta, -0.016, rtol=1e-14) and np.allclose(c.delta, -0.016, rtol=1e-14)
    assert np.allclose(c.gamma, 1.03 + 0.024 * v, rtol=1e-14)


def test_identity_limit():
    g = make_symmetric_grid(1.0, 51)
    c = assemble_coefficients(Zero(), g, 1e-300)
    assert np.all(c.gamma == 1.0)
    assert np.max(np.abs(np.concatenate([c.alpha, c.beta, c.delta, c.zeta]))) < 1e-290


@pytest.mark.parametrize("dtau", [0.0, -1e-3, np.inf, np.nan])
def test_rejects_bad_step(dtau):
    with pytest.raises(ValueError):
        assemble_coefficients(Zero(), make_symmetric_grid(1.0, 11), dtau)


def test_rhs_trivial_cases():
    g = make_symmetric_grid(1.0, 31)
    f = _interior_values(g, 1)
    c = assemble_coefficients(Harmonic(1), g, 1e-3)
    assert np.array_equal(assemble_rhs(c, np.zeros(31)), np.zeros(29))
    c0 = assemble_coefficients(Harmonic(1), g, 1e-300)
    assert np.allclose(assemble_rhs(c0, f), f[1:-1], rtol=1e-15, atol=0)


def test_rhs_matches_five_term_sum():
    g = make_asymmetric_grid(2.0, 0.4, 61)
    spec = ShiftedHarmonic(0.4)
    dtau = 3e-4
    c = assemble_coefficients(spec, g, dtau)
    f = _interior_values(g, 2)
    h2 = g.h**2
    v = sample_potential(spec, g)
    # reflected ghosts beyond the walls
    p = np.concatenate([[-f[1]], f, [-f[-2]]])
    j = np.arange(2, g.n_points)  # p index of interior points
    expected = (
        -dtau / (48 * h2) * p[j - 2]
        + dtau / (3 * h2) * p[j - 1]
        + (1 - 5 * dtau / (8 * h2) - 0.5 * dtau * v[j - 1]) * p[j]
        + dtau / (3 * h2) * p[j + 1]
        - dtau / (48 * h2) * p[j + 2]
    )
    assert np.allclose(assemble_rhs(c, f), expected, rtol=0, atol=1e-12 * np.max(np.abs(expected)))


def test_rhs_is_explicit_half_step():
    g = make_symmetric_grid(2.0, 81)
    spec = Quartic()
    c = assemble_coefficients(spec, g, 0.01)
    f = _interior_values(g, 3)
    v = sample_potential(spec, g)[1:-1]
    h_psi = -0.5 * apply_laplacian_5pt(f, g.h) + v * f[1:-1]
    assert np.allclose(assemble_rhs(c, f), f[1:-1] - 0.005 * h_psi, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("spec", [Harmonic(1), Harmonic(-1), Quartic(), Zero(), ShiftedHarmonic(0.2)])
@given(seed=st.integers(0, 2**32 - 1), dtau=st.floats(1e-6, 1e-1), n=st.integers(9, 400))
def test_left_plus_right_is_twice_identity(spec, seed, dtau, n):
    g = make_symmetric_grid(1.5, n)
    c = assemble_coefficients(spec, g, dtau)
    f = _interior_values(g, seed)
    total = band_matvec(*c.lhs_bands(), f[1:-1]) + assemble_rhs(c, f)
    scale = np.max(np.abs(c.gamma)) * np.max(np.abs(f))
    assert np.max(np.abs(total - 2 * f[1:-1])) <= 1e-12 * scale


@pytest.mark.parametrize("spec", [Harmonic(1), Harmonic(-1), Quartic(), Zero()])
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(9, 400))
def test_parity_commutes(spec, seed, n):
    g = make_symmetric_grid(1.0, n)
    c = assemble_coefficients(spec, g, 1e-3)
    assert np.array_equal(c.gamma, c.gamma[::-1])
    f = _interior_values(g, seed)
    f = f + f[::-1]
    for out in (assemble_rhs(c, f), band_matvec(*c.lhs_bands(), f[1:-1]),
                apply_hamiltonian(f, c.potential, g.h)):
        assert np.max(np.abs(out - out[::-1])) <= 1e-13 * max(1.0, np.max(np.abs(out)))
