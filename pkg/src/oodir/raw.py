"""Discretely sampled measurement data."""

from __future__ import annotations

import numpy as np

from .core import (
    Continuity,
    Coordinates,
    DataGrid,
    DirectivityModel,
    coerce_axis,
    coerce_distances,
    nearest_directions,
)
from .errors import InvalidCoordinatesError


class RawDirectivity(DirectivityModel):
    """Measured magnitudes (dB) on a direction x frequency x distance lattice.

    Discrete along every dimension: queries are answered with the nearest
    stored sample and the effective coordinates are reported back.

    Parameters
    ----------
    info : str
        Free text description.
    coords : Coordinates
        Sampling lattice. Directions and frequencies must be non-empty.
    grid : DataGrid or array_like
        Values with shape ``coords.shape``.
    """

    kind = "raw"
    continuity = Continuity(False, False, False)

    def __init__(self, info: str, coords: Coordinates, grid):
        super().__init__(info)
        if not isinstance(grid, DataGrid):
            grid = DataGrid(grid)
        if len(coords.dirs) == 0:
            raise InvalidCoordinatesError("raw data needs at least one direction")
        if len(coords.freqs) == 0:
            raise InvalidCoordinatesError("raw data needs at least one frequency")
        grid.check_matches(coords)
        self._coords = coords
        self._grid = grid

    @property
    def coords(self) -> Coordinates:
        return self._coords

    @property
    def grid(self) -> DataGrid:
        return self._grid

    def get_data_coords(self) -> Coordinates:
        return self._coords

    def get_data(self, query: Coordinates) -> tuple[DataGrid, Coordinates]:
        if len(query.dirs) == 0 or len(query.freqs) == 0:
            raise InvalidCoordinatesError("query needs directions and frequencies")
        di = nearest_directions(self._coords.dirs, query.dirs)
        fi = coerce_axis(self._coords.freqs, query.freqs)
        ki, eff_dists = coerce_distances(self._coords, query)
        values = self._grid.values[np.ix_(di, fi, ki)]
        effective = Coordinates(
            self._coords.dirs[di], self._coords.freqs[fi], eff_dists, strict=False
        )
        return DataGrid(values), effective

    def __repr__(self):
        return f"RawDirectivity(info={self.info!r}, shape={self._grid.shape})"


def raw_new(info: str, coords: Coordinates, grid) -> RawDirectivity:
    return RawDirectivity(info, coords, grid)
