"""Shared data model: directions, coordinates, data grids and the model contract.

All angles are in degrees. Azimuth runs counterclockwise from the front
(+x) and is normalised into ``[0, 360)``; elevation is measured from the
horizontal plane, ``+90`` being the top pole. Frequencies are in Hz and
distances in metres. An empty distance list stands for the single far-field
distance of 1 m.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    DimensionNotApplicableError,
    InvalidCoordinatesError,
    ShapeError,
)

DEFAULT_DISTANCE = 1.0

# Angular separations closer than this (radians) count as ties.
DIRECTION_TIE_TOL = 1e-12


def normalize_azimuth(az):
    """Wrap azimuth(s) in degrees into ``[0, 360)``."""
    wrapped = np.mod(np.asarray(az, dtype=float), 360.0)
    # fmod of tiny negatives rounds up to exactly 360
    wrapped = np.where(wrapped >= 360.0, 0.0, wrapped)
    # drop negative zero so serialisation stays canonical
    wrapped = wrapped + 0.0
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


@dataclass(frozen=True)
class Direction:
    """A single direction on the unit sphere, in degrees."""

    azimuth_deg: float
    elevation_deg: float

    def __post_init__(self):
        el = float(self.elevation_deg)
        az = float(self.azimuth_deg)
        if not (math.isfinite(az) and math.isfinite(el)):
            raise InvalidCoordinatesError("direction angles must be finite")
        if not -90.0 <= el <= 90.0:
            raise InvalidCoordinatesError(
                f"elevation {el} deg outside [-90, 90]"
            )
        object.__setattr__(self, "azimuth_deg", normalize_azimuth(az))
        object.__setattr__(self, "elevation_deg", el + 0.0)

    def __iter__(self):
        yield self.azimuth_deg
        yield self.elevation_deg


class Continuity(NamedTuple):
    """Whether a representation is continuous along each dimension."""

    direction: bool
    frequency: bool
    distance: bool

    def __str__(self):
        return " ".join(str(int(flag)) for flag in self)


def _as_dirs_array(dirs) -> np.ndarray:
    if isinstance(dirs, np.ndarray):
        arr = np.array(dirs, dtype=float)
    else:
        rows = [tuple(d) for d in dirs]
        arr = np.array(rows, dtype=float)
    if arr.size == 0:
        return np.empty((0, 2))
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidCoordinatesError(
            "directions must be (azimuth, elevation) pairs"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidCoordinatesError("direction angles must be finite")
    el = arr[:, 1]
    if np.any((el < -90.0) | (el > 90.0)):
        bad = int(np.flatnonzero((el < -90.0) | (el > 90.0))[0])
        raise InvalidCoordinatesError(
            f"elevation {el[bad]} deg of direction {bad} outside [-90, 90]"
        )
    arr[:, 0] = normalize_azimuth(arr[:, 0])
    arr[:, 1] += 0.0
    return arr


def _as_axis(values, name: str, strict: bool, positive: bool) -> np.ndarray:
    arr = np.array(list(values) if not isinstance(values, np.ndarray) else values,
                   dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise InvalidCoordinatesError(f"{name} must be finite")
    if positive and np.any(arr <= 0):
        raise InvalidCoordinatesError(f"{name} must be > 0")
    if not positive and np.any(arr < 0):
        raise InvalidCoordinatesError(f"{name} must be >= 0")
    steps = np.diff(arr)
    if strict and np.any(steps <= 0):
        raise InvalidCoordinatesError(f"{name} must be strictly increasing")
    if not strict and np.any(steps < 0):
        raise InvalidCoordinatesError(f"{name} must be non-decreasing")
    return arr + 0.0


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class Coordinates:
    """Sampling lattice of directions, frequencies and distances.

    Parameters
    ----------
    dirs : sequence of Direction or (N, 2) array_like, optional
        ``(azimuth, elevation)`` pairs in degrees.
    freqs : array_like, optional
        Frequencies in Hz, strictly increasing and non-negative.
    dists : array_like, optional
        Distances in m, strictly increasing and positive. Empty means 1 m.
    strict : bool, default True
        With ``False`` the frequency and distance lists only need to be
        non-decreasing. Used for the effective coordinates reported after
        coercion, where several queries may snap onto the same sample.
    """

    __slots__ = ("_dirs", "_freqs", "_dists")

    def __init__(self, dirs=(), freqs=(), dists=(), *, strict: bool = True):
        self._dirs = _frozen(_as_dirs_array(dirs))
        self._freqs = _frozen(_as_axis(freqs, "frequencies", strict, positive=False))
        self._dists = _frozen(_as_axis(dists, "distances", strict, positive=True))

    @property
    def dirs(self) -> np.ndarray:
        """(N, 2) read-only array of ``[azimuth, elevation]`` in degrees."""
        return self._dirs

    @property
    def freqs(self) -> np.ndarray:
        return self._freqs

    @property
    def dists(self) -> np.ndarray:
        return self._dists

    @property
    def directions(self) -> tuple[Direction, ...]:
        return tuple(Direction(az, el) for az, el in self._dirs)

    @property
    def effective_dists(self) -> np.ndarray:
        """Distances with the 1 m far-field default filled in."""
        if self._dists.size == 0:
            return np.array([DEFAULT_DISTANCE])
        return self._dists

    @property
    def shape(self) -> tuple[int, int, int]:
        """Grid shape implied by these coordinates; empty dists count as 1."""
        return (len(self._dirs), len(self._freqs), max(1, len(self._dists)))

    def __eq__(self, other):
        if not isinstance(other, Coordinates):
            return NotImplemented
        return (
            np.array_equal(self._dirs, other._dirs)
            and np.array_equal(self._freqs, other._freqs)
            and np.array_equal(self._dists, other._dists)
        )

    def __hash__(self):
        return hash((self._dirs.tobytes(), self._freqs.tobytes(), self._dists.tobytes()))

    def __repr__(self):
        return (
            f"Coordinates(n_dirs={len(self._dirs)}, n_freqs={len(self._freqs)}, "
            f"n_dists={len(self._dists)})"
        )


class DataGrid:
    """Magnitudes in dB indexed ``[direction][frequency][distance]``."""

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.array(values, dtype=float)
        if arr.ndim != 3:
            raise ShapeError(f"data grid must be 3-D, got {arr.ndim}-D")
        if not np.all(np.isfinite(arr)):
            raise ShapeError("data grid contains NaN or infinite values")
        self._values = _frozen(arr)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def shape(self) -> tuple[int, int, int]:
        return self._values.shape

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._values
        return self._values.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, DataGrid):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash(self._values.tobytes())

    def __repr__(self):
        return f"DataGrid(shape={self.shape})"

    def check_matches(self, coords: Coordinates) -> None:
        """Raise ShapeError unless the grid shape equals ``coords.shape``."""
        if self.shape != coords.shape:
            raise ShapeError(
                f"data grid shape {self.shape} does not match coordinates {coords.shape}"
            )


# -- coercion --------------------------------------------------------------


def _nearest_index(values: np.ndarray, x: float) -> int:
    d = np.abs(values - x)
    candidates = np.flatnonzero(d == d.min())
    if len(candidates) == 1:
        return int(candidates[0])
    # Float subtraction can round distinct distances together; settle exactly.
    xf = Fraction(float(x))
    exact = [abs(Fraction(float(values[i])) - xf) for i in candidates]
    best = min(exact)
    # values are increasing, so the first exact winner is the lower value
    return int(candidates[exact.index(best)])


def coerce_frequency(coords: Coordinates, f: float) -> tuple[int, float]:
    """Snap a frequency onto the closest available one.

    Ties go to the lower frequency.
    """
    if coords.freqs.size == 0:
        raise DimensionNotApplicableError("no frequencies to coerce onto")
    if not f >= 0:
        raise InvalidCoordinatesError(f"frequency {f} must be >= 0")
    i = _nearest_index(coords.freqs, f)
    return i, float(coords.freqs[i])


def coerce_distance(coords: Coordinates, d: float) -> tuple[int, float]:
    """Snap a distance onto the closest available one; empty means 1 m."""
    if not d > 0:
        raise InvalidCoordinatesError(f"distance {d} must be > 0")
    if coords.dists.size == 0:
        return 0, DEFAULT_DISTANCE
    i = _nearest_index(coords.dists, d)
    return i, float(coords.dists[i])


def unit_vectors(dirs: np.ndarray) -> np.ndarray:
    """Cartesian unit vectors for an (N, 2) array of directions in degrees."""
    az = np.deg2rad(dirs[:, 0])
    el = np.deg2rad(dirs[:, 1])
    cos_el = np.cos(el)
    return np.stack([cos_el * np.cos(az), cos_el * np.sin(az), np.sin(el)], axis=-1)


def great_circle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise great-circle angles in radians between two direction arrays.

    Returns an array of shape ``(len(a), len(b))``. Uses the atan2 form,
    which stays accurate for nearly coincident and nearly antipodal pairs.
    """
    ua = unit_vectors(np.asarray(a, dtype=float).reshape(-1, 2))
    ub = unit_vectors(np.asarray(b, dtype=float).reshape(-1, 2))
    dot = ua @ ub.T
    cross = np.cross(ua[:, None, :], ub[None, :, :])
    return np.arctan2(np.linalg.norm(cross, axis=-1), dot)


def nearest_directions(available: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Index of the closest available direction for each query direction.

    A query whose (azimuth, elevation) pair is stored verbatim maps onto
    the first such entry, even where several listed pairs name the same
    point (e.g. many azimuths at a pole). Otherwise ties (within
    ``DIRECTION_TIE_TOL`` radians) go to the lowest index.
    """
    if len(available) == 0:
        raise DimensionNotApplicableError("no directions to coerce onto")
    queries = np.asarray(queries, dtype=float).reshape(-1, 2)
    angles = great_circle(queries, available)
    best = angles.min(axis=1, keepdims=True)
    idx = np.argmax(angles <= best + DIRECTION_TIE_TOL, axis=1)
    exact: dict[tuple[float, float], int] = {}
    for i, (az, el) in enumerate(available):
        exact.setdefault((float(az), float(el)), i)
    for q, (az, el) in enumerate(queries):
        hit = exact.get((float(az), float(el)))
        if hit is not None:
            idx[q] = hit
    return idx


def coerce_direction(coords: Coordinates, direction) -> tuple[int, Direction]:
    """Snap a direction onto the available one with the smallest great-circle angle."""
    if not isinstance(direction, Direction):
        direction = Direction(*direction)
    q = np.array([[direction.azimuth_deg, direction.elevation_deg]])
    i = int(nearest_directions(coords.dirs, q)[0])
    az, el = coords.dirs[i]
    return i, Direction(az, el)


def coerce_axis(available: np.ndarray, queries: Iterable[float]) -> np.ndarray:
    """Vector form of the nearest-value rule for frequency or distance lists."""
    if available.size == 0:
        raise DimensionNotApplicableError("no samples to coerce onto")
    return np.array([_nearest_index(available, q) for q in queries], dtype=int)


def coerce_distances(stored: Coordinates, query: Coordinates) -> tuple[np.ndarray, np.ndarray]:
    """Distance indices into ``stored`` and the effective distance list.

    The effective list is empty when both sides use the implicit 1 m.
    """
    if stored.dists.size == 0:
        n = max(1, query.dists.size)
        eff = np.full(query.dists.size, DEFAULT_DISTANCE)
        return np.zeros(n, dtype=int), eff
    idx = coerce_axis(stored.dists, query.effective_dists)
    return idx, stored.dists[idx]


# -- error metrics ---------------------------------------------------------


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    va = np.asarray(a.values if isinstance(a, DataGrid) else a, dtype=float)
    vb = np.asarray(b.values if isinstance(b, DataGrid) else b, dtype=float)
    if va.shape != vb.shape:
        raise ShapeError(f"grid shapes differ: {va.shape} vs {vb.shape}")
    return va, vb


def grid_rms_error_db(a, b) -> float:
    """Root-mean-square difference in dB between two equally shaped grids."""
    va, vb = _pair(a, b)
    diff = np.abs(va - vb)
    if diff.size == 0:
        return 0.0
    peak = diff.max()
    if peak == 0.0:
        return 0.0
    # scaled so tiny differences do not underflow to an exact zero
    return float(peak * np.sqrt(np.mean((diff / peak) ** 2)))


def grid_max_abs_error_db(a, b) -> float:
    """Largest absolute difference in dB between two equally shaped grids."""
    va, vb = _pair(a, b)
    if va.size == 0:
        return 0.0
    return float(np.max(np.abs(va - vb)))


# -- model contract --------------------------------------------------------


class DirectivityModel(abc.ABC):
    """Common query interface for every directivity representation.

    Subclasses set ``kind`` and ``continuity`` and implement
    :meth:`get_data` and :meth:`get_data_coords`. Along discrete dimensions
    ``get_data`` coerces the query onto stored samples; along continuous
    ones it evaluates exactly. The returned coordinates say which values
    were actually used.
    """

    kind: str = ""
    continuity: Continuity = Continuity(False, False, False)

    def __init__(self, info: str = ""):
        self._info = str(info)

    @property
    def info(self) -> str:
        return self._info

    @property
    def min_elev(self) -> float:
        """Lowest elevation (deg) at which the model is considered reliable."""
        return -90.0

    @property
    def max_freq(self) -> float | None:
        """Upper end of the frequency range for frequency-continuous models."""
        return None

    @abc.abstractmethod
    def get_data(self, query: Coordinates) -> tuple[DataGrid, Coordinates]:
        """Values at ``query`` and the effective (coerced) coordinates."""

    @abc.abstractmethod
    def get_data_coords(self) -> Coordinates:
        """The discrete coordinates stored in the model."""

