"""Uniform query interface over raw, spherical-harmonic and
hyperspherical-harmonic directivity representations."""

from .core import (
    Continuity,
    Coordinates,
    DataGrid,
    Direction,
    DirectivityModel,
    coerce_direction,
    coerce_distance,
    coerce_frequency,
    grid_max_abs_error_db,
    grid_rms_error_db,
)
from .errors import OodirError
from .hsh import HshIndex, HshModel, hsh_fit
from .kernels import BACKEND
from .raw import RawDirectivity, raw_new
from .sh import ShIndex, ShModel, sh_fit

__all__ = [
    "BACKEND",
    "Continuity",
    "Coordinates",
    "DataGrid",
    "Direction",
    "DirectivityModel",
    "HshIndex",
    "HshModel",
    "OodirError",
    "RawDirectivity",
    "ShIndex",
    "ShModel",
    "coerce_direction",
    "coerce_distance",
    "coerce_frequency",
    "grid_max_abs_error_db",
    "grid_rms_error_db",
    "hsh_fit",
    "raw_new",
    "sh_fit",
]

__version__ = "0.1.0"
