"""Text interchange formats.

DIF (directivity interchange format) is a UTF-8 JSON document::

    {"format": "oodir-dif", "version": 1, "info": "...",
     "directions": [[az_deg, el_deg], ...],
     "frequencies": [f_hz, ...],
     "distances": [d_m, ...],            # optional, omitted for 1 m
     "values": [[[mag_db, ...], ...], ...]}  # [direction][frequency][distance]

``values`` is always three levels deep; without ``distances`` the innermost
lists have length one.

Model documents use ``"format": "oodir-model"`` with ``"kind"`` set to
``"sh"`` or ``"hsh"``, a ``"params"`` object, a ``"convention"`` descriptor
of the spherical harmonic basis and the coefficient array
(``[basis][frequency][distance]`` for SH, ``[basis][distance]`` for HSH).

Writers are canonical: fixed key order, compact separators, shortest
round-trip float representation, trailing newline.

CSV input has the header ``az_deg,el_deg,freq_hz,mag_db`` with an optional
``dist_m`` column and one row per sample of a complete grid.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

import numpy as np

from .core import Coordinates, normalize_azimuth
from .errors import (
    AngleRangeError,
    DocumentShapeError,
    DocumentSyntaxError,
    DuplicateCellError,
    FormatError,
    InvalidCoordinatesError,
    NonGridError,
    OrderError,
    SchemaError,
    ShapeError,
    VersionError,
)
from .hsh import PSI_MAPPING, HshModel, hsh_count
from .raw import RawDirectivity
from .sh import SH_CONVENTION, ShModel, sh_count

DIF_FORMAT = "oodir-dif"
MODEL_FORMAT = "oodir-model"
VERSION = 1
CSV_COLUMNS = ("az_deg", "el_deg", "freq_hz", "mag_db")


# -- helpers ---------------------------------------------------------------


def _dumps(doc: dict) -> bytes:
    text = json.dumps(doc, ensure_ascii=False, separators=(",", ":"), allow_nan=False)
    return (text + "\n").encode("utf-8")


def _parse_json(data) -> Any:
    if isinstance(data, (bytes, bytearray)):
        try:
            text = bytes(data).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError("input is not valid UTF-8", f"byte {exc.start}") from None
    else:
        text = data
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None


def _reject_constant(name):
    raise DocumentSyntaxError(f"non-finite number {name} not allowed")


def _header(doc, fmt: str) -> None:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", "$")
    if doc.get("format") != fmt:
        raise SchemaError(f"format tag must be {fmt!r}, got {doc.get('format')!r}", "format")
    version = doc.get("version")
    if type(version) is not int:
        raise SchemaError("version must be an integer", "version")
    if version != VERSION:
        raise VersionError(f"unsupported version {version}", "version")


def _require(doc: dict, key: str, where: str = "") -> Any:
    if key not in doc:
        raise SchemaError(f"missing field {key!r}", where or key)
    return doc[key]


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _numbers(seq, name: str) -> list[float]:
    if not isinstance(seq, list):
        raise SchemaError("expected a list of numbers", name)
    for i, x in enumerate(seq):
        if not _is_number(x):
            raise SchemaError("expected a finite number", f"{name}[{i}]")
    return [float(x) for x in seq]


def _nested(seq, shape: tuple[int, ...], name: str) -> np.ndarray:
    """Validate a nested list of numbers against ``shape`` and convert it."""

    def walk(node, depth, path):
        if depth == len(shape):
            if not _is_number(node):
                raise SchemaError("expected a finite number", path)
            return
        if not isinstance(node, list):
            raise DocumentShapeError(f"expected a list at depth {depth}", path)
        if len(node) != shape[depth]:
            raise DocumentShapeError(
                f"length {len(node)} where {shape[depth]} expected", path
            )
        for i, child in enumerate(node):
            walk(child, depth + 1, f"{path}[{i}]")

    walk(seq, 0, name)
    return np.array(seq, dtype=float).reshape(shape)


def _increasing(values: list[float], name: str, positive: bool) -> None:
    for i, x in enumerate(values):
        if x < 0 or (positive and x == 0):
            bound = "> 0" if positive else ">= 0"
            raise AngleRangeError(f"value must be {bound}", f"{name}[{i}]")
    for i in range(1, len(values)):
        if values[i] <= values[i - 1]:
            raise OrderError("values must be strictly increasing", f"{name}[{i}]")


def _directions(seq) -> list[tuple[float, float]]:
    if not isinstance(seq, list):
        raise SchemaError("expected a list of [azimuth, elevation] pairs", "directions")
    out = []
    for i, pair in enumerate(seq):
        where = f"directions[{i}]"
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError("expected an [azimuth, elevation] pair", where)
        if not all(_is_number(x) for x in pair):
            raise SchemaError("expected finite numbers", where)
        if not -90.0 <= pair[1] <= 90.0:
            raise AngleRangeError(f"elevation {pair[1]} outside [-90, 90]", where)
        out.append((float(pair[0]), float(pair[1])))
    return out


def _canon(values) -> list:
    return np.asarray(values, dtype=float).tolist()


def _dirs_list(dirs: np.ndarray) -> list:
    return [[float(az), float(el)] for az, el in dirs]


# -- DIF -------------------------------------------------------------------


def read_dif(data) -> RawDirectivity:
    """Parse a DIF document (bytes or str) into a RawDirectivity."""
    doc = _parse_json(data)
    _header(doc, DIF_FORMAT)
    info = _require(doc, "info")
    if not isinstance(info, str):
        raise SchemaError("info must be a string", "info")
    dirs = _directions(_require(doc, "directions"))
    freqs = _numbers(_require(doc, "frequencies"), "frequencies")
    dists = _numbers(doc["distances"], "distances") if "distances" in doc else []
    if "distances" in doc and not dists:
        raise SchemaError("distances must be omitted rather than empty", "distances")
    if not dirs:
        raise SchemaError("at least one direction required", "directions")
    if not freqs:
        raise SchemaError("at least one frequency required", "frequencies")
    _increasing(freqs, "frequencies", positive=False)
    _increasing(dists, "distances", positive=True)
    unknown = set(doc) - {"format", "version", "info", "directions", "frequencies",
                          "distances", "values"}
    if unknown:
        raise SchemaError(f"unknown field {sorted(unknown)[0]!r}", sorted(unknown)[0])
    shape = (len(dirs), len(freqs), max(1, len(dists)))
    values = _nested(_require(doc, "values"), shape, "values")
    return RawDirectivity(info, Coordinates(dirs, freqs, dists), values)


def write_dif(raw: RawDirectivity) -> bytes:
    """Canonical DIF serialisation of ``raw``."""
    coords = raw.coords
    doc = {
        "format": DIF_FORMAT,
        "version": VERSION,
        "info": raw.info,
        "directions": _dirs_list(coords.dirs),
        "frequencies": _canon(coords.freqs),
    }
    if coords.dists.size:
        doc["distances"] = _canon(coords.dists)
    doc["values"] = _canon(raw.grid.values)
    return _dumps(doc)


# -- CSV -------------------------------------------------------------------


def read_csv(data, info: str = "") -> RawDirectivity:
    """Assemble a RawDirectivity from one CSV row per grid sample.

    Directions are ordered by azimuth then elevation; frequencies and
    distances ascending. Row order therefore does not matter.
    """
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty CSV input", "line 1") from None
    header = [h.strip() for h in header]
    required = list(CSV_COLUMNS)
    has_dist = "dist_m" in header
    missing = [c for c in required if c not in header]
    extra = [c for c in header if c not in required + ["dist_m"]]
    if missing or extra or len(set(header)) != len(header):
        raise SchemaError(
            "header must hold az_deg,el_deg,freq_hz,mag_db and optionally dist_m", "line 1"
        )
    col = {name: header.index(name) for name in header}

    cells: dict[tuple[float, float, float, float], float] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise SchemaError(f"expected {len(header)} fields, got {len(row)}", f"line {lineno}")
        try:
            nums = {k: float(row[i]) for k, i in col.items()}
        except ValueError:
            raise SchemaError("non-numeric field", f"line {lineno}") from None
        if not all(math.isfinite(v) for v in nums.values()):
            raise SchemaError("non-finite field", f"line {lineno}")
        el = nums["el_deg"]
        if not -90.0 <= el <= 90.0:
            raise AngleRangeError(f"elevation {el} outside [-90, 90]", f"line {lineno}")
        if nums["freq_hz"] < 0:
            raise AngleRangeError("frequency must be >= 0", f"line {lineno}")
        dist = nums["dist_m"] if has_dist else 0.0
        if has_dist and dist <= 0:
            raise AngleRangeError("distance must be > 0", f"line {lineno}")
        key = (normalize_azimuth(nums["az_deg"]), el + 0.0, nums["freq_hz"], dist)
        if key in cells:
            raise DuplicateCellError("sample given twice", f"line {lineno}")
        cells[key] = nums["mag_db"]

    if not cells:
        raise SchemaError("no data rows", "line 2")
    dirs = sorted({(k[0], k[1]) for k in cells})
    freqs = sorted({k[2] for k in cells})
    dists = sorted({k[3] for k in cells})
    expected = len(dirs) * len(freqs) * len(dists)
    if len(cells) != expected:
        raise NonGridError(
            f"{len(cells)} samples do not cover the {len(dirs)} x {len(freqs)} x "
            f"{len(dists)} grid of distinct coordinates"
        )
    d_index = {d: i for i, d in enumerate(dirs)}
    f_index = {f: i for i, f in enumerate(freqs)}
    k_index = {k: i for i, k in enumerate(dists)}
    values = np.empty((len(dirs), len(freqs), len(dists)))
    for (az, el, f, k), v in cells.items():
        values[d_index[(az, el)], f_index[f], k_index[k]] = v
    coords = Coordinates(dirs, freqs, dists if has_dist else ())
    return RawDirectivity(info, coords, values)


# -- models ----------------------------------------------------------------


def write_model(model) -> bytes:
    """Canonical serialisation of an ShModel or HshModel."""
    if isinstance(model, ShModel):
        doc = {
            "format": MODEL_FORMAT,
            "version": VERSION,
            "kind": "sh",
            "info": model.info,
            "convention": dict(SH_CONVENTION),
            "params": {"lmax": model.lmax, "mmax": model.mmax, "min_elev": model.min_elev},
            "frequencies": _canon(model.coords.freqs),
        }
    elif isinstance(model, HshModel):
        doc = {
            "format": MODEL_FORMAT,
            "version": VERSION,
            "kind": "hsh",
            "info": model.info,
            "convention": dict(SH_CONVENTION),
            "params": {
                "nmax": model.nmax,
                "mmax": model.mmax,
                "max_freq": model.max_freq,
                "min_elev": model.min_elev,
                "psi_mapping": model.psi_mapping,
            },
        }
    else:
        raise TypeError(f"cannot serialise {type(model).__name__}")
    if model.coords.dists.size:
        doc["distances"] = _canon(model.coords.dists)
    doc["coefficients"] = _canon(model.coeffs)
    return _dumps(doc)


def _int_param(params: dict, key: str) -> int:
    v = _require(params, key, f"params.{key}")
    if type(v) is not int or v < 0:
        raise SchemaError("expected a non-negative integer", f"params.{key}")
    return v


def _float_param(params: dict, key: str) -> float:
    v = _require(params, key, f"params.{key}")
    if not _is_number(v):
        raise SchemaError("expected a finite number", f"params.{key}")
    return float(v)


def _coeff_shape(coeffs) -> tuple[int, ...]:
    shape = []
    node = coeffs
    while isinstance(node, list):
        shape.append(len(node))
        node = node[0] if node else None
    return tuple(shape)


def read_model(data):
    """Parse a model document into an ShModel or HshModel."""
    doc = _parse_json(data)
    _header(doc, MODEL_FORMAT)
    kind = _require(doc, "kind")
    if kind not in ("sh", "hsh"):
        raise SchemaError(f"unknown model kind {kind!r}", "kind")
    info = _require(doc, "info")
    if not isinstance(info, str):
        raise SchemaError("info must be a string", "info")
    convention = _require(doc, "convention")
    if convention != SH_CONVENTION:
        raise SchemaError("unsupported or incomplete basis convention", "convention")
    params = _require(doc, "params")
    if not isinstance(params, dict):
        raise SchemaError("params must be an object", "params")
    dists = _numbers(doc["distances"], "distances") if "distances" in doc else []
    _increasing(dists, "distances", positive=True)
    coeffs = _require(doc, "coefficients")
    min_elev = _float_param(params, "min_elev")
    if not -90.0 <= min_elev <= 90.0:
        raise AngleRangeError("min_elev outside [-90, 90]", "params.min_elev")
    n_dists = max(1, len(dists))

    try:
        if kind == "sh":
            lmax = _int_param(params, "lmax")
            mmax = _int_param(params, "mmax")
            if mmax > lmax:
                raise SchemaError("mmax exceeds lmax", "params.mmax")
            freqs = _numbers(_require(doc, "frequencies"), "frequencies")
            if not freqs:
                raise SchemaError("at least one frequency required", "frequencies")
            _increasing(freqs, "frequencies", positive=False)
            shape = (sh_count(lmax, mmax), len(freqs), n_dists)
            _check_coeff_shape(coeffs, shape)
            values = _nested(coeffs, shape, "coefficients")
            return ShModel(info, lmax, mmax, min_elev, values, Coordinates((), freqs, dists))

        nmax = _int_param(params, "nmax")
        mmax = _int_param(params, "mmax")
        max_freq = _float_param(params, "max_freq")
        if max_freq <= 0:
            raise AngleRangeError("max_freq must be > 0", "params.max_freq")
        mapping = _require(params, "psi_mapping", "params.psi_mapping")
        if mapping != PSI_MAPPING:
            raise SchemaError(f"unsupported psi mapping {mapping!r}", "params.psi_mapping")
        shape = (hsh_count(nmax, mmax), n_dists)
        _check_coeff_shape(coeffs, shape)
        values = _nested(coeffs, shape, "coefficients")
        return HshModel(info, nmax, mmax, max_freq, min_elev, values, dists)
    except (ShapeError, InvalidCoordinatesError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise DocumentShapeError(str(exc), "coefficients") from None


def _check_coeff_shape(coeffs, shape) -> None:
    found = _coeff_shape(coeffs)
    if found != shape:
        raise DocumentShapeError(
            f"coefficient array has shape {found}, counting rule gives {shape}", "coefficients"
        )


def read_any(data, name: str = ""):
    """Load raw data or a model, choosing the reader from the content.

    Files named ``*.csv`` go through :func:`read_csv`; anything else must
    be a JSON document whose format tag selects DIF or model parsing.
    """
    if name.lower().endswith(".csv"):
        return read_csv(data)
    doc = _parse_json(data)
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if fmt == DIF_FORMAT:
        return read_dif(data)
    if fmt == MODEL_FORMAT:
        return read_model(data)
    raise SchemaError(f"unknown format tag {fmt!r}", "format")
