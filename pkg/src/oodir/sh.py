"""Real spherical harmonics and the least-squares spherical harmonic model.

Basis convention: fully orthonormal real harmonics (unit norm over the
sphere with the uniform measure), no Condon-Shortley phase, so that for
``m > 0``

    Y_l^m  = sqrt(2) * Nlm * P_l^m(cos colat) * cos(m * az)
    Y_l^-m = sqrt(2) * Nlm * P_l^m(cos colat) * sin(m * az)

with ``Nlm = sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!)`` and colatitude
``90 - elevation``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    Continuity,
    Coordinates,
    DataGrid,
    DirectivityModel,
    Direction,
    coerce_axis,
    coerce_distances,
)
from .errors import DomainError, InvalidCoordinatesError, ShapeError
from .linalg import min_norm_lstsq
from .raw import RawDirectivity

SH_CONVENTION = {
    "basis": "real",
    "normalization": "orthonormal",
    "condon_shortley_phase": False,
    "ordering": "degree-major, order -min(l,mmax)..+min(l,mmax)",
}


@dataclass(frozen=True)
class ShIndex:
    l: int
    m: int

    def __post_init__(self):
        if self.l < 0 or abs(self.m) > self.l:
            raise DomainError(f"invalid SH index (l={self.l}, m={self.m})")


def check_truncation(lmax: int, mmax: int) -> None:
    if not (isinstance(lmax, (int, np.integer)) and isinstance(mmax, (int, np.integer))):
        raise DomainError("lmax and mmax must be integers")
    if not 0 <= mmax <= lmax:
        raise DomainError(f"need 0 <= mmax <= lmax, got lmax={lmax}, mmax={mmax}")


def check_min_elev(min_elev: float) -> None:
    if not -90.0 <= min_elev <= 90.0:
        raise DomainError(f"minElev {min_elev} outside [-90, 90]")


def sh_count(lmax: int, mmax: int) -> int:
    """Number of basis functions with ``l <= lmax`` and ``|m| <= min(l, mmax)``."""
    return sum(2 * min(l, mmax) + 1 for l in range(lmax + 1))


def sh_indices(lmax: int, mmax: int) -> list[ShIndex]:
    """Basis indices in design-matrix column order."""
    return [
        ShIndex(l, m)
        for l in range(lmax + 1)
        for m in range(-min(l, mmax), min(l, mmax) + 1)
    ]


def assoc_legendre(l: int, m: int, x: float) -> float:
    """Associated Legendre function P_l^m(x) without the Condon-Shortley phase.

    Upward recurrence in degree starting from ``P_m^m``.
    """
    if not (0 <= m <= l):
        raise DomainError(f"need 0 <= m <= l, got l={l}, m={m}")
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [-1, 1]")
    pmm = 1.0
    root = math.sqrt((1.0 - x) * (1.0 + x))
    for k in range(1, m + 1):
        pmm *= (2 * k - 1) * root
    if l == m:
        return pmm
    p_prev, p = pmm, (2 * m + 1) * x * pmm
    for k in range(m + 2, l + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k + m - 1) * p_prev) / (k - m)
    return p


def _angles(dirs) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(
        [tuple(d) for d in dirs] if not isinstance(dirs, np.ndarray) else dirs,
        dtype=float,
    ).reshape(-1, 2)
    return np.deg2rad(arr[:, 0]), np.deg2rad(90.0 - arr[:, 1])


def sh_design_matrix(dirs, lmax: int, mmax: int) -> np.ndarray:
    """Basis functions evaluated at each direction, shape ``(n_dirs, n_basis)``."""
    check_truncation(lmax, mmax)
    az, colat = _angles(dirs)
    if az.size == 0:
        raise InvalidCoordinatesError("design matrix needs at least one direction")
    return kernels.real_sh_matrix(az, colat, int(lmax), int(mmax))


def sh_eval_basis(idx: ShIndex, direction) -> float:
    """Value of a single real spherical harmonic at ``direction``."""
    if not isinstance(idx, ShIndex):
        idx = ShIndex(*idx)
    if not isinstance(direction, Direction):
        direction = Direction(*direction)
    row = sh_design_matrix([tuple(direction)], idx.l, idx.l)[0]
    return float(row[idx.l * idx.l + idx.l + idx.m])


class ShModel(DirectivityModel):
    """Spherical harmonic fit per frequency and distance slab.

    Continuous over direction; frequency and distance queries are coerced
    onto the frequencies and distances of the source data.

    Parameters
    ----------
    info : str
    lmax, mmax : int
        Truncation degree and order.
    min_elev : float
        Lowest elevation (deg) considered reliable.
    coeffs : array_like
        Shape ``(n_basis, n_freqs, n_dists)``.
    coords : Coordinates
        Frequencies and distances of the slabs; directions must be empty.
    """

    kind = "sh"
    continuity = Continuity(True, False, False)

    def __init__(self, info, lmax, mmax, min_elev, coeffs, coords: Coordinates):
        super().__init__(info)
        check_truncation(lmax, mmax)
        check_min_elev(min_elev)
        if len(coords.dirs):
            raise InvalidCoordinatesError("SH model coordinates carry no directions")
        if len(coords.freqs) == 0:
            raise InvalidCoordinatesError("SH model needs at least one frequency")
        coeffs = np.array(coeffs, dtype=float)
        expected = (sh_count(lmax, mmax),) + coords.shape[1:]
        if coeffs.shape != expected:
            raise ShapeError(f"SH coefficients have shape {coeffs.shape}, expected {expected}")
        if not np.all(np.isfinite(coeffs)):
            raise ShapeError("SH coefficients must be finite")
        coeffs.setflags(write=False)
        self.lmax = int(lmax)
        self.mmax = int(mmax)
        self._min_elev = float(min_elev)
        self.coeffs = coeffs
        self.coords = coords

    @property
    def min_elev(self) -> float:
        return self._min_elev

    def get_data_coords(self) -> Coordinates:
        return self.coords

    def get_data(self, query: Coordinates) -> tuple[DataGrid, Coordinates]:
        if len(query.dirs) == 0 or len(query.freqs) == 0:
            raise InvalidCoordinatesError("query needs directions and frequencies")
        fi = coerce_axis(self.coords.freqs, query.freqs)
        ki, eff_dists = coerce_distances(self.coords, query)
        Y = sh_design_matrix(query.dirs, self.lmax, self.mmax)
        slab = self.coeffs[:, fi][:, :, ki]
        values = np.tensordot(Y, slab, axes=1)
        effective = Coordinates(query.dirs, self.coords.freqs[fi], eff_dists, strict=False)
        return DataGrid(values), effective

    def __repr__(self):
        return f"ShModel(lmax={self.lmax}, mmax={self.mmax}, n_freqs={len(self.coords.freqs)})"


def sh_fit(raw: RawDirectivity, lmax: int, mmax: int, min_elev: float = -90.0,
           info: str | None = None) -> ShModel:
    """Least-squares SH fit of every (frequency, distance) slab of ``raw``.

    All measured directions are used, including those below ``min_elev``;
    ``min_elev`` only marks the reliable range for later rendering.
    """
    check_truncation(lmax, mmax)
    check_min_elev(min_elev)
    n_basis = sh_count(lmax, mmax)
    n_dirs = len(raw.coords.dirs)
    if n_basis > n_dirs:
        warnings.warn(
            f"{n_basis} basis functions but only {n_dirs} directions; "
            "the fit is underdetermined and returns the minimum-norm solution",
            stacklevel=2,
        )
    A = sh_design_matrix(raw.coords.dirs, lmax, mmax)
    _, n_freqs, n_dists = raw.grid.shape
    B = raw.grid.values.reshape(n_dirs, n_freqs * n_dists)
    coeffs = min_norm_lstsq(A, B).reshape(n_basis, n_freqs, n_dists)
    coords = Coordinates((), raw.coords.freqs, raw.coords.dists)
    return ShModel(raw.info if info is None else info, lmax, mmax, min_elev, coeffs, coords)
