import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from helpers import fibonacci_directions, hyper_quadrature, make_raw
from oodir import Coordinates, HshIndex, HshModel, hsh_fit
from oodir.errors import DomainError, FrequencyRangeError, ShapeError
from oodir.hsh import (
    freq_to_psi,
    gegenbauer,
    hsh_count,
    hsh_design_matrix,
    hsh_eval_basis,
    hsh_indices,
    hsh_normalization,
)
from oodir.sh import sh_eval_basis

Z000 = 1 / math.sqrt(2 * math.pi ** 2)


def gegenbauer_closed(nu, a, x):
    return [
        1.0,
        2 * a * x,
        2 * a * (a + 1) * x ** 2 - a,
        4 / 3 * a * (a + 1) * (a + 2) * x ** 3 - 2 * a * (a + 1) * x,
        2 / 3 * a * (a + 1) * (a + 2) * (a + 3) * x ** 4
        - 2 * a * (a + 1) * (a + 2) * x ** 2 + a * (a + 1) / 2,
    ][nu]


class TestGegenbauer:
    def test_examples(self):
        assert gegenbauer(0, 3.7, -0.4) == 1
        assert gegenbauer(1, 2, 0.5) == 2
        assert gegenbauer(2, 1, 0.5) == pytest.approx(0, abs=1e-15)

    @pytest.mark.parametrize("alpha", [1, 1.5, 2, 3])
    @pytest.mark.parametrize("nu", range(5))
    def test_closed_forms(self, nu, alpha):
        for x in np.linspace(-1, 1, 101):
            assert abs(gegenbauer(nu, alpha, x) - gegenbauer_closed(nu, alpha, x)) < 1e-10

    def test_against_scipy(self):
        for nu in range(12):
            for alpha in (1, 2.5, 6):
                for x in (-0.7, 0.1, 0.95):
                    ref = special.eval_gegenbauer(nu, alpha, x)
                    assert gegenbauer(nu, alpha, x) == pytest.approx(ref, rel=1e-11, abs=1e-12)

    @pytest.mark.parametrize("args", [(-1, 1, 0), (1, 0, 0), (1, 1, 1.01)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            gegenbauer(*args)


class TestNormalization:
    def test_constant(self):
        assert hsh_normalization(0, 0) / (2 * math.sqrt(math.pi)) == pytest.approx(Z000, rel=1e-15)
        assert round(Z000, 7) == 0.2250791

    @pytest.mark.parametrize("n", range(0, 30, 3))
    def test_positive(self, n):
        v = hsh_normalization(n, n)
        assert math.isfinite(v) and v > 0

    @pytest.mark.parametrize("n, l", [(1, 0), (1, 1), (2, 0), (3, 2), (4, 4)])
    def test_unit_radial_norm(self, n, l):
        # integral over psi in [0, pi] with weight sin^2
        _, _, psi, w = hyper_quadrature(n_colat=2, n_az=1, n_psi=40)
        r = hsh_normalization(n, l) * np.sin(psi) ** l * np.array(
            [gegenbauer(n - l, l + 1, math.cos(p)) for p in psi])
        assert abs(np.sum(w * r * r) - 1) < 1e-5

    def test_domain(self):
        with pytest.raises(DomainError):
            hsh_normalization(1, 2)


class TestFreqToPsi:
    def test_examples(self):
        assert freq_to_psi(0, 20000) == 0
        assert freq_to_psi(20000, 20000) == math.pi
        assert freq_to_psi(10000, 20000) == math.pi / 2

    def test_range(self):
        with pytest.raises(FrequencyRangeError):
            freq_to_psi(20001, 20000)
        with pytest.raises(FrequencyRangeError):
            freq_to_psi(-1, 20000)

    @given(st.floats(0, 1e5), st.floats(0, 1e5))
    def test_monotone(self, a, b):
        if a < b:
            assert freq_to_psi(a, 1e5) < freq_to_psi(b, 1e5)


class TestBasis:
    def test_constant(self):
        for d, psi in [((0, 0), 0.0), ((200, -30), 1.2), ((5, 90), math.pi)]:
            assert hsh_eval_basis(HshIndex(0, 0, 0), d, psi) == pytest.approx(Z000, rel=1e-14)

    def test_reduction_when_n_equals_l(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            l = int(rng.integers(0, 6))
            m = int(rng.integers(-l, l + 1))
            d = (rng.uniform(0, 360), rng.uniform(-90, 90))
            psi = rng.uniform(0, math.pi)
            ref = hsh_normalization(l, l) * math.sin(psi) ** l * sh_eval_basis((l, m), d)
            assert hsh_eval_basis((l, l, m), d, psi) == pytest.approx(ref, rel=1e-13, abs=1e-15)

    def test_vanishes_at_psi_zero(self):
        for idx in hsh_indices(4, 4):
            if idx.l >= 1:
                assert hsh_eval_basis(idx, (30, 20), 0.0) == 0.0

    def test_design_matrix_matches_pointwise(self):
        dirs = fibonacci_directions(5)
        psi = np.array([0.0, 0.7, 2.0, math.pi])
        Z = hsh_design_matrix(dirs, psi, 3, 2)
        for col, idx in enumerate(hsh_indices(3, 2)):
            for i, d in enumerate(dirs):
                for j, p in enumerate(psi):
                    assert Z[i * 4 + j, col] == pytest.approx(
                        hsh_eval_basis(idx, tuple(d), p), rel=1e-12, abs=1e-14)

    def test_invalid_index(self):
        with pytest.raises(DomainError):
            HshIndex(1, 2, 0)
        with pytest.raises(DomainError):
            HshIndex(2, 1, 2)


def test_count_example():
    assert hsh_count(2, 2) == 14 == len(hsh_indices(2, 2))
    assert hsh_count(3, 0) == 10


def test_orthonormality_n4():
    dirs, w_dir, psi, w_psi = hyper_quadrature()
    Z = hsh_design_matrix(dirs, psi, 4, 4)
    w = np.outer(w_dir, w_psi).ravel()
    gram = Z.T @ (w[:, None] * Z)
    assert np.abs(gram - np.eye(Z.shape[1])).max() < 1e-5


class TestFit:
    dirs = fibonacci_directions(60)
    freqs = np.linspace(250, 8000, 32)

    def test_constant(self):
        raw = make_raw(self.dirs, self.freqs, np.ones((60, 32, 1)))
        model = hsh_fit(raw, 3, 3)
        assert model.coeffs[0, 0] == pytest.approx(math.sqrt(2 * math.pi ** 2), abs=1e-9)
        assert round(model.coeffs[0, 0], 4) == 4.4429
        assert np.abs(model.coeffs[1:]).max() < 1e-9
        assert model.max_freq == 8000
        assert tuple(model.continuity) == (True, True, False)

    def test_round_trip(self):
        rng = np.random.default_rng(11)
        c = rng.standard_normal((hsh_count(3, 3), 2))
        Z = hsh_design_matrix(self.dirs, freq_to_psi(self.freqs, 10000), 3, 3)
        values = (Z @ c).reshape(60, 32, 2)
        raw = make_raw(self.dirs, self.freqs, values, dists=[1, 2])
        model = hsh_fit(raw, 3, 3, max_freq=10000)
        assert np.abs(model.coeffs - c).max() < 1e-7
        grid, eff = model.get_data(raw.coords)
        assert np.abs(grid.values - values).max() < 1e-7
        assert eff == raw.coords

    def test_frequency_above_max(self):
        raw = make_raw(self.dirs, self.freqs, np.zeros((60, 32, 1)))
        with pytest.raises(FrequencyRangeError):
            hsh_fit(raw, 2, 2, max_freq=5000)

    def test_nested_monotonicity(self):
        rng = np.random.default_rng(3)
        raw = make_raw(self.dirs, self.freqs, rng.standard_normal((60, 32, 1)))
        res = []
        for nmax in range(5):
            grid, _ = hsh_fit(raw, nmax, nmax).get_data(raw.coords)
            res.append(np.linalg.norm(grid.values - raw.grid.values))
        assert all(b <= a + 1e-12 for a, b in zip(res, res[1:]))

    def test_info_and_min_elev(self):
        raw = make_raw(self.dirs, self.freqs, np.zeros((60, 32, 1)), info="src")
        assert hsh_fit(raw, 1, 1).info == "src"
        assert hsh_fit(raw, 1, 1, min_elev=-40, info="x").min_elev == -40


@pytest.fixture(scope="module")
def model():
    dirs = fibonacci_directions(40)
    freqs = np.linspace(100, 4000, 16)
    rng = np.random.default_rng(0)
    return hsh_fit(make_raw(dirs, freqs, rng.standard_normal((40, 16, 1))), 2, 2,
                   max_freq=5000)


class TestModelQueries:
    def test_between_bins(self, model):
        grid, eff = model.get_data(Coordinates([(10, 10)], [1234.5, 4999]))
        assert np.isfinite(grid.values).all()
        np.testing.assert_array_equal(eff.freqs, [1234.5, 4999])

    def test_out_of_range(self, model):
        with pytest.raises(FrequencyRangeError):
            model.get_data(Coordinates([(0, 0)], [5001]))

    def test_distance_coerced(self, model):
        _, eff = model.get_data(Coordinates([(0, 0)], [100], [3]))
        np.testing.assert_array_equal(eff.dists, [1.0])

    def test_coords(self, model):
        assert model.get_data_coords() == Coordinates()

    def test_constructor_validates(self):
        with pytest.raises(ShapeError):
            HshModel("", 2, 2, 1000, -90, np.zeros((13, 1)))
        with pytest.raises(DomainError):
            HshModel("", 2, 2, 0, -90, np.zeros((14, 1)))
