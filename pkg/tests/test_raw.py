import numpy as np
import pytest

from oodir import Coordinates, DataGrid, RawDirectivity, raw_new
from oodir.errors import InvalidCoordinatesError, ShapeError

DIRS = [(0, 0), (90, 0)]
FREQS = [100, 200, 400]


def test_construction():
    raw = raw_new("", Coordinates(DIRS, FREQS), np.zeros((2, 3, 1)))
    assert raw.info == ""
    assert tuple(raw.continuity) == (False, False, False)
    assert raw.get_data_coords() == Coordinates(DIRS, FREQS)


def test_transposed_shape_rejected():
    with pytest.raises(ShapeError):
        raw_new("x", Coordinates(DIRS, FREQS), np.zeros((3, 2, 1)))


@pytest.mark.parametrize("coords", [Coordinates([], FREQS), Coordinates(DIRS, [])])
def test_needs_dirs_and_freqs(coords):
    with pytest.raises(InvalidCoordinatesError):
        RawDirectivity("x", coords, np.zeros(coords.shape))


@pytest.fixture
def raw():
    values = np.arange(2 * 3 * 2, dtype=float).reshape(2, 3, 2)
    return RawDirectivity("r", Coordinates(DIRS, FREQS, [1, 2]), values)


def test_identity_query(raw):
    grid, eff = raw.get_data(raw.coords)
    assert grid == raw.grid
    assert eff == raw.coords


def test_frequency_coerced_and_reported(raw):
    grid, eff = raw.get_data(Coordinates(DIRS, [250], [1]))
    np.testing.assert_array_equal(eff.freqs, [200])
    np.testing.assert_array_equal(grid.values[:, 0, 0], raw.grid.values[:, 1, 0])


def test_duplicated_directions(raw):
    grid, _ = raw.get_data(Coordinates([(0, 0), (0, 0), (90, 0)], FREQS, [1, 2]))
    np.testing.assert_array_equal(grid.values[0], grid.values[1])
    np.testing.assert_array_equal(grid.values[2], raw.grid.values[1])


def test_empty_query_dists_mean_one_metre(raw):
    grid, eff = raw.get_data(Coordinates(DIRS, FREQS))
    assert grid.shape == (2, 3, 1)
    np.testing.assert_array_equal(eff.dists, [1.0])


def test_stored_one_metre_reported_for_far_query():
    raw = RawDirectivity("r", Coordinates(DIRS, FREQS), np.zeros((2, 3, 1)))
    _, eff = raw.get_data(Coordinates(DIRS, FREQS, [3.0]))
    np.testing.assert_array_equal(eff.dists, [1.0])


def test_permutation_equivariance(raw):
    rng = np.random.default_rng(0)
    q = np.column_stack([rng.uniform(0, 360, 20), rng.uniform(-90, 90, 20)])
    perm = rng.permutation(20)
    g1, e1 = raw.get_data(Coordinates(q, FREQS))
    g2, e2 = raw.get_data(Coordinates(q[perm], FREQS))
    np.testing.assert_array_equal(g1.values[perm], g2.values)
    np.testing.assert_array_equal(e1.dirs[perm], e2.dirs)


def test_output_coordinates_are_stored_members(raw):
    rng = np.random.default_rng(1)
    q = np.column_stack([rng.uniform(0, 360, 30), rng.uniform(-90, 90, 30)])
    _, eff = raw.get_data(Coordinates(q, [0, 150, 1e4], [0.5, 7]))
    stored = {tuple(d) for d in raw.coords.dirs}
    assert all(tuple(d) in stored for d in eff.dirs)
    assert set(eff.freqs) <= set(raw.coords.freqs)
    assert set(eff.dists) <= set(raw.coords.dists)


def test_immutable(raw):
    with pytest.raises(ValueError):
        raw.grid.values[0, 0, 0] = 1.0
    assert isinstance(raw.grid, DataGrid)
