import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from itp_confine.grid import make_asymmetric_grid, make_symmetric_grid
from itp_confine.potential import Harmonic, Zero
from itp_confine.quadrature import (
    CollapseError,
    WaveFunction,
    energy_expectation,
    integrate,
    norm,
    normalize,
    overlap,
    position_moments,
    quadrature_weights,
)


def box_mode(grid, k=1):
    """Zero-potential eigenfunction ``k`` (1-based) of the box, unit norm."""
    a, L = grid.domain.a, grid.domain.width
    values = np.sin(k * np.pi * (grid.x - a) / L) * np.sqrt(2.0 / L)
    values[0] = values[-1] = 0.0
    return WaveFunction(values, grid, normalized=True)


@pytest.mark.parametrize("N", [101, 102, 103, 104, 9])
def test_integrate_constant(N):
    g = make_symmetric_grid(2.5, N)
    assert integrate(np.ones(N), g) == pytest.approx(5.0, rel=1e-14)


def test_integrate_quadratic_exact():
    g = make_symmetric_grid(1.0, 101)
    assert integrate(g.x**2, g) == pytest.approx(2.0 / 3.0, rel=1e-14)
    g = make_asymmetric_grid(2.0, 0.5, 41)
    assert integrate(g.x**5, g) == pytest.approx((1.5**6 - 0.5**6) / 6.0, rel=1e-13)


def test_integrate_shape_checked():
    with pytest.raises(ValueError):
        integrate(np.ones(10), make_symmetric_grid(1.0, 11))


def test_cos_squared_order():
    R = 1.3
    errs = []
    for n in (41, 81, 161):
        g = make_symmetric_grid(R, n)
        # a non-periodic integrand, so the rule's order is visible
        f = np.cos(np.pi * g.x / (2 * R)) ** 2 * np.exp(g.x)
        exact = (np.exp(R) - np.exp(-R)) * (0.5 - 0.5 / (1 + (np.pi / R) ** 2))
        errs.append(abs(integrate(f, g) - exact))
    orders = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all(orders >= 5.5)
    g = make_symmetric_grid(R, 161)
    assert integrate(np.cos(np.pi * g.x / (2 * R)) ** 2, g) == pytest.approx(R, rel=1e-13)


def test_weights_positive_and_sum_to_width():
    for n in range(9, 30):
        w = quadrature_weights(make_symmetric_grid(1.0, n))
        assert np.all(w >= 0) and w.sum() == pytest.approx(2.0, rel=1e-14)


def test_normalize_examples():
    g = make_symmetric_grid(1.0, 201)
    psi = box_mode(g)
    assert norm(psi) == pytest.approx(1.0, abs=1e-10)
    once = normalize(WaveFunction(psi.values * 3.0, g))
    assert np.allclose(normalize(once).values, once.values, rtol=0, atol=1e-15)
    scaled = normalize(WaveFunction(psi.values * 7.0, g))
    assert np.allclose(scaled.values, once.values, rtol=0, atol=1e-15)
    assert abs(norm(once) - 1.0) <= 1e-12 and once.normalized


def test_collapse():
    g = make_symmetric_grid(1.0, 21)
    with pytest.raises(CollapseError):
        normalize(WaveFunction(np.zeros(21), g))
    tiny = np.zeros(21)
    tiny[5] = 1e-160
    with pytest.raises(CollapseError):
        normalize(WaveFunction(tiny, g))


def test_wavefunction_validation():
    g = make_symmetric_grid(1.0, 21)
    with pytest.raises(ValueError):
        WaveFunction(np.ones(21), g)
    with pytest.raises(ValueError):
        WaveFunction(np.zeros(20), g)
    psi = WaveFunction(np.zeros(21), g)
    with pytest.raises(ValueError):
        psi.values[3] = 1.0


def test_overlap_examples():
    g = make_symmetric_grid(1.0, 401)
    u, v = box_mode(g, 1), box_mode(g, 2)
    assert overlap(u, u) == pytest.approx(norm(u) ** 2, rel=1e-15)
    assert abs(overlap(u, v)) <= 1e-13
    assert abs(overlap(box_mode(g, 3), v)) <= 1e-13
    with pytest.raises(ValueError):
        overlap(u, box_mode(make_symmetric_grid(1.0, 101)))


def test_box_energy_fourth_order():
    errs = []
    for n in (51, 101, 201):
        g = make_symmetric_grid(1.0, n)
        errs.append(abs(energy_expectation(box_mode(g), Zero()) - np.pi**2 / 8))
    orders = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all(np.abs(orders - 4.0) < 0.2)
    g = make_symmetric_grid(1.0, 401)
    psi = box_mode(g)
    assert energy_expectation(psi, Harmonic(1)) == energy_expectation(-psi, Harmonic(1))


def test_expectations_need_normalized_state():
    g = make_symmetric_grid(1.0, 21)
    psi = WaveFunction(box_mode(g).values, g)
    with pytest.raises(ValueError):
        energy_expectation(psi, Zero())
    with pytest.raises(ValueError):
        position_moments(psi)


@pytest.mark.parametrize("R", [0.5, 1.0, 3.0])
def test_box_mode_moments(R):
    g = make_symmetric_grid(R, 2001)
    x2, x4 = position_moments(box_mode(g))
    assert x2 == pytest.approx(R**2 * (1 / 3 - 2 / np.pi**2), rel=1e-12)
    exact4 = R**4 * (1 / 5 - 4 / np.pi**2 + 24 / np.pi**4)
    assert x4 == pytest.approx(exact4, rel=1e-12)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(9, 300), parity=st.sampled_from([1, -1]))
def test_moments_reflection_invariant(seed, n, parity):
    g = make_symmetric_grid(1.7, n)
    f = np.zeros(n)
    f[1:-1] = np.random.default_rng(seed).standard_normal(n - 2)
    f = f + parity * f[::-1]
    if not np.any(f):
        return
    psi = normalize(WaveFunction(f, g))
    mirrored = normalize(WaveFunction(f[::-1], g))
    assert np.allclose(position_moments(psi), position_moments(mirrored), rtol=1e-13)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(9, 300))
def test_inequalities(seed, n):
    g = make_asymmetric_grid(2.0, 0.3, n)
    rng = np.random.default_rng(seed)
    u = np.zeros(n)
    v = np.zeros(n)
    u[1:-1], v[1:-1] = rng.standard_normal((2, n - 2))
    u, v = WaveFunction(u, g), WaveFunction(v, g)
    assert overlap(u, v) ** 2 <= norm(u) ** 2 * norm(v) ** 2 * (1 + 1e-14) + 1e-12
    x2, x4 = position_moments(normalize(WaveFunction(np.abs(u.values), g)))
    assert x4 >= x2 * x2 - 1e-12
