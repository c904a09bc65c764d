import math

import numpy as np

from oodir import Coordinates, RawDirectivity


def fibonacci_directions(n: int) -> np.ndarray:
    """Quasi-uniform (azimuth, elevation) pairs in degrees."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    el = np.rad2deg(np.arcsin(z))
    az = np.mod(np.rad2deg(k * math.pi * (3.0 - math.sqrt(5.0))), 360.0)
    return np.column_stack([az, el])


def sphere_quadrature(n_colat: int, n_az: int):
    """Gauss-Legendre in cos(colatitude) times uniform azimuth.

    Returns directions in degrees and weights summing to 4 pi.
    """
    x, w = np.polynomial.legendre.leggauss(n_colat)
    el = np.rad2deg(np.arcsin(x))
    az = np.arange(n_az) * 360.0 / n_az
    E, A = np.meshgrid(el, az, indexing="ij")
    W = np.repeat(w, n_az) * (2.0 * math.pi / n_az)
    return np.column_stack([A.ravel(), E.ravel()]), W


def hyper_quadrature(n_colat=20, n_az=40, n_psi=30):
    """Directions, psi nodes and weights for the 3-sphere measure."""
    dirs, w_dir = sphere_quadrature(n_colat, n_az)
    t, w_t = np.polynomial.legendre.leggauss(n_psi)
    psi = (t + 1) * math.pi / 2
    w_psi = w_t * math.pi / 2 * np.sin(psi) ** 2
    return dirs, w_dir, psi, w_psi


def make_raw(dirs, freqs, values, dists=(), info="synthetic") -> RawDirectivity:
    return RawDirectivity(info, Coordinates(dirs, freqs, dists), np.asarray(values))


def kemar_like(n_freqs: int = 40, seed: int = 0) -> RawDirectivity:
    """HRTF-style sampling: elevations -40..90 with fewer azimuths near the top."""
    rng = np.random.default_rng(seed)
    dirs = []
    for el, n_az in [(-40, 56), (-30, 60), (-20, 72), (-10, 72), (0, 72), (10, 72),
                     (20, 72), (30, 60), (40, 56), (50, 45), (60, 36), (70, 24),
                     (80, 12), (90, 1)]:
        dirs += [(360.0 * i / n_az, float(el)) for i in range(n_az)]
    dirs = np.array(dirs)
    freqs = np.fft.rfftfreq(512, 1.0 / 44100.0)[1:n_freqs + 1]
    # smooth-ish synthetic magnitudes plus a little noise
    az = np.deg2rad(dirs[:, 0])[:, None]
    el = np.deg2rad(dirs[:, 1])[:, None]
    f = freqs[None, :] / freqs[-1]
    values = 3.0 * np.cos(az) * np.cos(el) * (1 + f) - 2.0 * np.sin(el) * f
    values = values + 0.1 * rng.standard_normal(values.shape)
    return make_raw(dirs, freqs, values[:, :, None], info="KEMAR-like synthetic")


def random_raw(rng: np.random.Generator) -> RawDirectivity:
    """A small valid raw object with awkward float values."""
    n_dirs, n_freqs = int(rng.integers(1, 8)), int(rng.integers(1, 6))
    dirs = np.column_stack([rng.uniform(0, 360, n_dirs), rng.uniform(-90, 90, n_dirs)])
    if rng.random() < 0.3:
        dirs[0] = (0.0, 90.0)
    freqs = np.sort(rng.choice(rng.uniform(0, 24000, 50), n_freqs, replace=False))
    if rng.random() < 0.3:
        freqs[0] = 0.0
    n_dists = int(rng.integers(0, 4))
    dists = np.sort(rng.choice(rng.uniform(0.1, 10, 20), n_dists, replace=False))
    values = rng.standard_normal((n_dirs, n_freqs, max(1, n_dists)))
    values *= 10.0 ** rng.integers(-300, 300, values.shape)
    info = "".join(rng.choice(list("abc \"\\é–\n"), int(rng.integers(0, 10))))
    return make_raw(dirs, freqs, values, dists, info=info)


def assert_raw_equal(a: RawDirectivity, b: RawDirectivity) -> None:
    assert a.info == b.info
    assert a.coords == b.coords
    np.testing.assert_array_equal(a.coords.dists, b.coords.dists)
    assert a.grid.values.tobytes() == b.grid.values.tobytes()
