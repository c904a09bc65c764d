import os
import subprocess
import sys

import numpy as np
import pytest

from oodir import _pykernels, kernels

needs_compiled = pytest.mark.skipif(not kernels.compiled_available(),
                                    reason="compiled kernels not built")


@pytest.fixture(scope="module")
def ck():
    from oodir import _ckernels

    return _ckernels


@pytest.fixture
def points():
    rng = np.random.default_rng(0)
    return rng.uniform(0, 2 * np.pi, 300), rng.uniform(0, np.pi, 300)


@needs_compiled
@pytest.mark.skipif(os.environ.get("OODIR_PURE_PYTHON", "") not in ("", "0"),
                    reason="fallback forced")
def test_default_backend_is_compiled():
    assert kernels.BACKEND == "cython"


@needs_compiled
@pytest.mark.parametrize("lmax, mmax", [(0, 0), (1, 0), (4, 2), (10, 10), (40, 40)])
def test_sh_matrix_parity(ck, points, lmax, mmax):
    az, th = points
    np.testing.assert_allclose(ck.real_sh_matrix(az, th, lmax, mmax),
                               _pykernels.real_sh_matrix(az, th, lmax, mmax),
                               rtol=1e-13, atol=1e-14)


@needs_compiled
@pytest.mark.parametrize("nmax", [0, 1, 5, 15])
def test_radial_parity(ck, nmax):
    psi = np.linspace(0, np.pi, 101)
    c = ck.hsh_radial_table(psi, nmax)
    p = _pykernels.hsh_radial_table(psi, nmax)
    np.testing.assert_allclose(c, p, rtol=1e-12, atol=1e-12 * np.abs(p).max())


@needs_compiled
def test_gegenbauer_parity(ck):
    x = np.linspace(-1, 1, 51).reshape(3, 17)
    for nu in range(8):
        out = ck.gegenbauer(nu, 1.5, x)
        assert out.shape == x.shape
        np.testing.assert_allclose(out, _pykernels.gegenbauer(nu, 1.5, x), rtol=1e-13, atol=1e-14)


@needs_compiled
def test_norm_parity(ck):
    for n in range(20):
        for l in range(n + 1):
            assert ck.hsh_norm(n, l) == pytest.approx(_pykernels.hsh_norm(n, l), rel=1e-13)


def test_high_degree_stays_finite(points):
    az, th = points
    Y = _pykernels.real_sh_matrix(az, th, 120, 120)
    assert np.isfinite(Y).all()
    # each degree's sum of squares equals (2l+1)/(4 pi): addition theorem
    off = _pykernels.sh_offsets(120, 120)
    for l in (0, 7, 60, 120):
        ss = np.sum(Y[:, off[l]:off[l + 1]] ** 2, axis=1)
        np.testing.assert_allclose(ss, (2 * l + 1) / (4 * np.pi), rtol=1e-10)


def test_env_var_forces_python():
    env = dict(os.environ, OODIR_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import oodir.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
