"""Hyperspherical harmonics and the HSH directivity model.

A hyperspherical harmonic joins a real spherical harmonic over direction
with a Gegenbauer factor in a third angle ``psi`` that encodes frequency:

    Z_nl^m(az, colat, psi) = N(n, l) sin^l(psi) C_{n-l}^{l+1}(cos psi) Y_l^m(az, colat)

``N(n, l)`` is chosen so the family is orthonormal over the 3-sphere with
measure ``sin(colat) sin^2(psi) d(az) d(colat) d(psi)``. Using the
Gegenbauer norm with ``alpha = l + 1`` this gives

    N(n, l)^2 = 2^(2l+1) (n+1) (l!)^2 (n-l)! / (pi (n+l+1)!)

Frequency maps linearly onto ``psi``: ``psi = pi * f / max_freq``.
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
    coerce_distances,
)
from .errors import DomainError, FrequencyRangeError, InvalidCoordinatesError, ShapeError
from .linalg import min_norm_lstsq
from .raw import RawDirectivity
from .sh import check_min_elev, sh_design_matrix, sh_eval_basis

PSI_MAPPING = "linear"


@dataclass(frozen=True)
class HshIndex:
    n: int
    l: int
    m: int

    def __post_init__(self):
        if not (0 <= self.l <= self.n) or abs(self.m) > self.l:
            raise DomainError(f"invalid HSH index (n={self.n}, l={self.l}, m={self.m})")


def check_hsh_truncation(nmax: int, mmax: int) -> None:
    if not (isinstance(nmax, (int, np.integer)) and isinstance(mmax, (int, np.integer))):
        raise DomainError("nmax and mmax must be integers")
    if nmax < 0 or mmax < 0:
        raise DomainError(f"need nmax >= 0 and mmax >= 0, got nmax={nmax}, mmax={mmax}")


def check_max_freq(max_freq: float) -> None:
    if not (math.isfinite(max_freq) and max_freq > 0):
        raise DomainError(f"maxFreq must be positive, got {max_freq}")


def hsh_indices(nmax: int, mmax: int) -> list[HshIndex]:
    """Basis indices in design-matrix column order (n, then l, then m)."""
    return [
        HshIndex(n, l, m)
        for n in range(nmax + 1)
        for l in range(n + 1)
        for m in range(-min(l, mmax), min(l, mmax) + 1)
    ]


def hsh_count(nmax: int, mmax: int) -> int:
    return sum(2 * min(l, mmax) + 1 for n in range(nmax + 1) for l in range(n + 1))


def gegenbauer(nu: int, alpha: float, x: float) -> float:
    """Gegenbauer polynomial C_nu^alpha(x) by the three-term recurrence."""
    if nu < 0 or not alpha > 0:
        raise DomainError(f"need nu >= 0 and alpha > 0, got nu={nu}, alpha={alpha}")
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [-1, 1]")
    return float(kernels.gegenbauer(int(nu), float(alpha), np.array([x]))[0])


def hsh_normalization(n: int, l: int) -> float:
    """N(n, l) of the orthonormal HSH family."""
    if not 0 <= l <= n:
        raise DomainError(f"need 0 <= l <= n, got n={n}, l={l}")
    return float(kernels.hsh_norm(int(n), int(l)))


def freq_to_psi(f, max_freq: float):
    """Map frequency in Hz linearly onto ``psi`` in ``[0, pi]``."""
    check_max_freq(max_freq)
    f_arr = np.asarray(f, dtype=float)
    if np.any(~((f_arr >= 0) & (f_arr <= max_freq))):
        raise FrequencyRangeError(f"frequency outside [0, {max_freq}] Hz")
    psi = np.pi * (f_arr / max_freq)
    return float(psi) if psi.ndim == 0 else psi


def hsh_eval_basis(idx: HshIndex, direction, psi: float) -> float:
    """Value of one hyperspherical harmonic at ``direction`` and ``psi``."""
    if not isinstance(idx, HshIndex):
        idx = HshIndex(*idx)
    if not 0.0 <= psi <= math.pi:
        raise DomainError(f"psi={psi} outside [0, pi]")
    if not isinstance(direction, Direction):
        direction = Direction(*direction)
    radial = (
        hsh_normalization(idx.n, idx.l)
        * math.sin(psi) ** idx.l
        * gegenbauer(idx.n - idx.l, idx.l + 1.0, math.cos(psi))
    )
    return radial * sh_eval_basis((idx.l, idx.m), direction)


def _columns(nmax: int, mmax: int) -> tuple[np.ndarray, np.ndarray]:
    """Map each HSH column onto its radial-table and SH-matrix columns."""
    sh_off = kernels.sh_offsets(nmax, min(mmax, nmax))
    radial_cols, sh_cols = [], []
    for idx in hsh_indices(nmax, mmax):
        radial_cols.append(idx.n * (idx.n + 1) // 2 + idx.l)
        sh_cols.append(sh_off[idx.l] + min(idx.l, mmax) + idx.m)
    return np.array(radial_cols, dtype=np.intp), np.array(sh_cols, dtype=np.intp)


def hsh_design_matrix(dirs, psi, nmax: int, mmax: int) -> np.ndarray:
    """HSH basis on the product of ``dirs`` and ``psi`` values.

    Row ``i * len(psi) + j`` holds direction ``i`` at angle ``psi[j]``.
    """
    check_hsh_truncation(nmax, mmax)
    psi = np.asarray(psi, dtype=float).reshape(-1)
    Y = sh_design_matrix(dirs, nmax, min(mmax, nmax))
    R = kernels.hsh_radial_table(psi, int(nmax))
    radial_cols, sh_cols = _columns(nmax, mmax)
    Z = Y[:, None, sh_cols] * R[None, :, radial_cols]
    return Z.reshape(Y.shape[0] * psi.size, len(radial_cols))


class HshModel(DirectivityModel):
    """Hyperspherical harmonic fit, one coefficient vector per distance.

    Continuous over direction and over frequency in ``[0, max_freq]``;
    distance queries are coerced.

    Parameters
    ----------
    info : str
    nmax, mmax : int
    max_freq : float
        Upper end of the frequency range in Hz.
    min_elev : float
    coeffs : array_like
        Shape ``(n_basis, n_dists)``.
    dists : array_like
        Distances of the source data; empty means 1 m.
    """

    kind = "hsh"
    continuity = Continuity(True, True, False)
    psi_mapping = PSI_MAPPING

    def __init__(self, info, nmax, mmax, max_freq, min_elev, coeffs, dists=()):
        super().__init__(info)
        check_hsh_truncation(nmax, mmax)
        check_max_freq(max_freq)
        check_min_elev(min_elev)
        self.coords = Coordinates((), (), dists)
        coeffs = np.array(coeffs, dtype=float)
        expected = (hsh_count(nmax, mmax), self.coords.shape[2])
        if coeffs.shape != expected:
            raise ShapeError(f"HSH coefficients have shape {coeffs.shape}, expected {expected}")
        if not np.all(np.isfinite(coeffs)):
            raise ShapeError("HSH coefficients must be finite")
        coeffs.setflags(write=False)
        self.nmax = int(nmax)
        self.mmax = int(mmax)
        self._max_freq = float(max_freq)
        self._min_elev = float(min_elev)
        self.coeffs = coeffs

    @property
    def min_elev(self) -> float:
        return self._min_elev

    @property
    def max_freq(self) -> float:
        return self._max_freq

    @property
    def dists(self) -> np.ndarray:
        return self.coords.dists

    def get_data_coords(self) -> Coordinates:
        return self.coords

    def get_data(self, query: Coordinates) -> tuple[DataGrid, Coordinates]:
        if len(query.dirs) == 0 or len(query.freqs) == 0:
            raise InvalidCoordinatesError("query needs directions and frequencies")
        psi = freq_to_psi(query.freqs, self._max_freq)
        ki, eff_dists = coerce_distances(self.coords, query)
        Z = hsh_design_matrix(query.dirs, psi, self.nmax, self.mmax)
        values = (Z @ self.coeffs[:, ki]).reshape(len(query.dirs), len(query.freqs), len(ki))
        effective = Coordinates(query.dirs, query.freqs, eff_dists, strict=False)
        return DataGrid(values), effective

    def __repr__(self):
        return f"HshModel(nmax={self.nmax}, mmax={self.mmax}, max_freq={self._max_freq})"


def hsh_fit(raw: RawDirectivity, nmax: int, mmax: int, max_freq: float | None = None,
            min_elev: float = -90.0, info: str | None = None) -> HshModel:
    """Joint least-squares fit over all (direction, frequency) samples per distance."""
    check_hsh_truncation(nmax, mmax)
    check_min_elev(min_elev)
    freqs = raw.coords.freqs
    if max_freq is None:
        max_freq = float(freqs[-1])
        if max_freq <= 0:
            raise DomainError("cannot default maxFreq: highest measured frequency is 0 Hz")
    check_max_freq(max_freq)
    if freqs[-1] > max_freq:
        raise FrequencyRangeError(
            f"measured frequency {freqs[-1]} Hz exceeds maxFreq {max_freq} Hz"
        )
    n_basis = hsh_count(nmax, mmax)
    n_dirs, n_freqs, n_dists = raw.grid.shape
    if n_basis > n_dirs * n_freqs:
        warnings.warn(
            f"{n_basis} basis functions but only {n_dirs * n_freqs} samples per distance",
            stacklevel=2,
        )
    Z = hsh_design_matrix(raw.coords.dirs, freq_to_psi(freqs, max_freq), nmax, mmax)
    B = raw.grid.values.reshape(n_dirs * n_freqs, n_dists)
    coeffs = min_norm_lstsq(Z, B)
    return HshModel(
        raw.info if info is None else info, nmax, mmax, max_freq, min_elev,
        coeffs, raw.coords.dists,
    )
