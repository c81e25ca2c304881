import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from itp_confine.grid import BoxDomain, Grid, make_asymmetric_grid, make_symmetric_grid


@pytest.mark.parametrize("R, N, h", [(0.5, 101, 0.01), (5.0, 101, 0.1), (1.0, 2001, 0.001)])
def test_symmetric_spacing(R, N, h):
    g = make_symmetric_grid(R, N)
    assert g.h == pytest.approx(h, rel=1e-15)
    assert g.x[0] == -R and g.x[-1] == pytest.approx(R, abs=4 * np.spacing(R))
    assert g.n_interior == N - 2


def test_asymmetric_walls():
    assert make_asymmetric_grid(2.0, 0.0, 101).domain == BoxDomain(-1.0, 1.0)
    assert make_asymmetric_grid(2.0, 3.0, 101).domain == BoxDomain(2.0, 4.0)
    g = make_asymmetric_grid(2.0, 0.36, 2001)
    assert g.h == pytest.approx(0.001, rel=1e-12)
    assert not g.domain.is_symmetric


@pytest.mark.parametrize("R, N", [(1.0, 3), (1.0, 8), (0.0, 101), (-1.0, 101), (1.0, 10.5)])
def test_rejects_bad_input(R, N):
    with pytest.raises(ValueError):
        make_symmetric_grid(R, N)


def test_rejects_reversed_or_infinite_box():
    with pytest.raises(ValueError):
        BoxDomain(1.0, -1.0)
    with pytest.raises(ValueError):
        BoxDomain(-np.inf, 1.0)
    with pytest.raises(ValueError):
        make_asymmetric_grid(0.0, 1.0, 101)


def test_positions_read_only():
    g = make_symmetric_grid(1.0, 11)
    with pytest.raises(ValueError):
        g.x[3] = 0.0


@given(st.floats(0.01, 100.0), st.integers(9, 50_001))
def test_last_point_reconstructed(R, N):
    g = make_symmetric_grid(R, N)
    assert abs(g.x[-1] - R) <= 4 * np.spacing(R)
    assert np.all(np.diff(g.x) > 0)


@given(st.floats(0.01, 100.0), st.integers(9, 5001))
def test_symmetric_is_centred_asymmetric(R, N):
    assert make_symmetric_grid(R, N) == make_asymmetric_grid(2 * R, 0.0, N)


def test_grid_equality_by_value():
    assert Grid(BoxDomain(-1.0, 1.0), 11) == make_symmetric_grid(1.0, 11)
    assert make_symmetric_grid(1.0, 11) != make_symmetric_grid(1.0, 13)
