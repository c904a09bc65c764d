"""Command-line front end.

Exit status: 0 on success, 1 for usage or parameter errors, 2 for data,
format or I/O errors.

Coordinate lists accept a single number, a comma list (``500,1000``) or an
inclusive range ``start:step:stop`` (``0:5:355``). Direction grids are the
Cartesian product of the ``--az`` and ``--el`` lists.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import Coordinates, grid_max_abs_error_db, grid_rms_error_db
from .errors import DomainError, FormatError, OodirError
from .hsh import HshModel, check_hsh_truncation, check_max_freq, hsh_fit
from .interchange import read_any, write_model
from .raw import RawDirectivity
from .render import (
    DEFAULT_RES_DEG,
    DEFAULT_RES_HZ,
    balloon_samples,
    emit_balloon_svg,
    emit_csv,
    emit_spectrum_svg,
    spectrum_samples,
)
from .sh import ShModel, check_min_elev, check_truncation, sh_fit

log = logging.getLogger("oodir")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_values(spec: str) -> np.ndarray:
    """Parse ``x``, ``a,b,c`` or ``start:step:stop`` (inclusive) into floats."""
    try:
        if ":" in spec:
            parts = [float(p) for p in spec.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, step, stop = parts
            if not step > 0 or stop < start:
                raise UsageError(f"bad range {spec!r}: need step > 0 and stop >= start")
            n = math.floor((stop - start) / step + 1e-9)
            return start + step * np.arange(n + 1)
        values = np.array([float(p) for p in spec.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse coordinate list {spec!r}") from None
    if not np.all(np.isfinite(values)):
        raise UsageError(f"non-finite value in {spec!r}")
    return values


def direction_grid(az_spec: str, el_spec: str) -> np.ndarray:
    az = parse_values(az_spec)
    el = parse_values(el_spec)
    if np.any(np.abs(el) > 90):
        raise UsageError("elevations must lie in [-90, 90]")
    e, a = np.meshgrid(el, az, indexing="ij")
    return np.column_stack([a.ravel(), e.ravel()])


def load(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return read_any(data, path)
    except FormatError as exc:
        raise DataError(f"{path}: {exc}") from None
    except OodirError as exc:
        raise DataError(f"{path}: invalid content: {exc}") from None


def load_raw(path: str) -> RawDirectivity:
    obj = load(path)
    if not isinstance(obj, RawDirectivity):
        raise DataError(f"{path}: expected raw data (DIF or CSV), got a {obj.kind} model")
    return obj


def write_bytes(path: str, data: bytes) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc.strerror or exc}") from None
    log.info("wrote %s", path)


def _positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise UsageError(f"{name} must be > 0, got {value}")


def _range_text(values: np.ndarray, unit: str) -> str:
    if len(values) == 0:
        return "none"
    return f"{len(values)} ({values.min():g} .. {values.max():g} {unit})"


# -- subcommands -----------------------------------------------------------


def cmd_info(args) -> str:
    obj = load(args.file)
    coords = obj.get_data_coords()
    lines = [
        f"kind: {obj.kind}",
        f"info: {obj.info}",
        f"continuity: {obj.continuity}",
    ]
    if len(coords.dirs):
        lines.append(
            f"directions: {len(coords.dirs)} "
            f"(azimuth {coords.dirs[:, 0].min():g} .. {coords.dirs[:, 0].max():g} deg, "
            f"elevation {coords.dirs[:, 1].min():g} .. {coords.dirs[:, 1].max():g} deg)"
        )
    else:
        lines.append("directions: continuous")
    if isinstance(obj, HshModel):
        lines.append(f"frequencies: continuous (0 .. {obj.max_freq:g} Hz)")
    else:
        lines.append(f"frequencies: {_range_text(coords.freqs, 'Hz')}")
    dists = _range_text(coords.dists, "m") if len(coords.dists) else "1 m (implicit)"
    lines.append(f"distances: {dists}")
    if isinstance(obj, ShModel):
        lines += [f"lmax: {obj.lmax}", f"mmax: {obj.mmax}", f"min_elev: {obj.min_elev:g}"]
    elif isinstance(obj, HshModel):
        lines += [
            f"nmax: {obj.nmax}",
            f"mmax: {obj.mmax}",
            f"max_freq: {obj.max_freq:g}",
            f"min_elev: {obj.min_elev:g}",
            f"psi_mapping: {obj.psi_mapping}",
        ]
    if isinstance(obj, ShModel):
        lines.append(f"coefficients: {obj.coeffs.shape[0]} per frequency and distance")
    elif isinstance(obj, HshModel):
        lines.append(f"coefficients: {obj.coeffs.shape[0]} per distance")
    return "\n".join(lines) + "\n"


def training_residual(model, raw: RawDirectivity) -> float:
    grid, _ = model.get_data(raw.coords)
    return grid_rms_error_db(grid, raw.grid)


def cmd_fit_sh(args) -> str:
    try:
        check_truncation(args.lmax, args.mmax)
        check_min_elev(args.min_elev)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    raw = load_raw(args.input)
    log.info("fitting SH lmax=%d mmax=%d to %d directions x %d frequencies",
             args.lmax, args.mmax, len(raw.coords.dirs), len(raw.coords.freqs))
    model = sh_fit(raw, args.lmax, args.mmax, args.min_elev, args.info)
    write_bytes(args.output, write_model(model))
    return f"residual_rms_db: {training_residual(model, raw)!r}\n"


def cmd_fit_hsh(args) -> str:
    try:
        check_hsh_truncation(args.nmax, args.mmax)
        check_min_elev(args.min_elev)
        if args.max_freq is not None:
            check_max_freq(args.max_freq)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    raw = load_raw(args.input)
    log.info("fitting HSH nmax=%d mmax=%d", args.nmax, args.mmax)
    model = hsh_fit(raw, args.nmax, args.mmax, args.max_freq, args.min_elev, args.info)
    write_bytes(args.output, write_model(model))
    return f"residual_rms_db: {training_residual(model, raw)!r}\n"


def _query(model, args, fallback=None) -> Coordinates:
    """Query coordinates from the command-line specs, defaulting to stored ones."""
    sources = [model] + ([fallback] if fallback is not None else [])
    if (args.az is None) != (args.el is None):
        raise UsageError("--az and --el must be given together")
    if args.az is not None:
        dirs = direction_grid(args.az, args.el)
    else:
        dirs = next((s.get_data_coords().dirs for s in sources
                     if len(s.get_data_coords().dirs)), None)
        if dirs is None:
            raise UsageError("directions required: give --az and --el")
    if args.freq is not None:
        freqs = parse_values(args.freq)
    else:
        freqs = next((s.get_data_coords().freqs for s in sources
                      if len(s.get_data_coords().freqs)), None)
        if freqs is None:
            raise UsageError("frequencies required: give --freq")
    if args.dist is not None:
        dists = parse_values(args.dist)
    else:
        dists = next((s.get_data_coords().dists for s in sources
                      if len(s.get_data_coords().dists)), np.empty(0))
    try:
        return Coordinates(dirs, freqs, dists)
    except OodirError as exc:
        raise UsageError(f"invalid query coordinates: {exc}") from None


def _report_coercion(label: str, query: Coordinates, effective: Coordinates) -> None:
    if not np.array_equal(query.dirs, effective.dirs):
        n = int(np.sum(np.any(query.dirs != effective.dirs, axis=1)))
        log.warning("%s: %d direction(s) coerced to stored directions", label, n)
    for q, e in zip(query.freqs, effective.freqs):
        if q != e:
            log.warning("%s: frequency %g Hz coerced to %g Hz", label, q, e)
    for q, e in zip(query.effective_dists, effective.effective_dists):
        if q != e:
            log.warning("%s: distance %g m coerced to %g m", label, q, e)


def cmd_sample(args) -> bytes:
    model = load(args.model)
    query = _query(model, args)
    grid, eff = model.get_data(query)
    _report_coercion(args.model, query, eff)
    dists = eff.effective_dists if len(eff.dists) else np.full(grid.shape[2], 1.0)
    lines = ["az_deg,el_deg,freq_hz,dist_m,mag_db"]
    values = grid.values
    for j, f in enumerate(eff.freqs):
        for i, (az, el) in enumerate(eff.dirs):
            for k, d in enumerate(dists):
                lines.append(",".join(repr(float(v)) for v in (az, el, f, d, values[i, j, k])))
    return ("\n".join(lines) + "\n").encode("utf-8")


def cmd_balloon(args) -> str:
    _positive("--res-deg", args.res_deg)
    _positive("--dist", args.dist)
    if args.svg is None and args.csv is None:
        raise UsageError("no output requested: give --svg and/or --csv")
    model = load(args.model)
    grid = balloon_samples(model, args.freq, args.dist, args.res_deg)
    if grid.coerced:
        log.warning("frequency %g Hz coerced to %g Hz", grid.requested_freq, grid.freq)
    if args.svg:
        write_bytes(args.svg, emit_balloon_svg(grid))
    if args.csv:
        write_bytes(args.csv, emit_csv(grid))
    n = grid.values.size
    return f"frequency_hz: {grid.freq!r}\ndistance_m: {grid.dist!r}\nsamples: {n}\n"


def cmd_spectrum(args) -> str:
    _positive("--res-hz", args.res_hz)
    _positive("--dist", args.dist)
    if not -90 <= args.el <= 90:
        raise UsageError("--el must lie in [-90, 90]")
    if args.svg is None and args.csv is None:
        raise UsageError("no output requested: give --svg and/or --csv")
    model = load(args.model)
    series = spectrum_samples(model, (args.az, args.el), args.dist, args.res_hz)
    if series.coerced:
        log.warning("direction (%g, %g) coerced to (%g, %g)",
                    *series.requested_direction, *series.direction)
    if args.svg:
        write_bytes(args.svg, emit_spectrum_svg(series))
    if args.csv:
        write_bytes(args.csv, emit_csv(series))
    az, el = series.direction
    return f"direction_deg: {az!r} {el!r}\npoints: {len(series.freqs)}\n"


def cmd_compare(args) -> str:
    a = load(args.file_a)
    b = load(args.file_b)
    query = _query(a, args, fallback=b)
    grid_a, eff_a = a.get_data(query)
    grid_b, eff_b = b.get_data(query)
    _report_coercion(args.file_a, query, eff_a)
    _report_coercion(args.file_b, query, eff_b)
    shape = grid_a.shape
    lines = [
        f"a: {args.file_a} ({a.kind})",
        f"b: {args.file_b} ({b.kind})",
        f"grid: {shape[0]} directions x {shape[1]} frequencies x {shape[2]} distances",
        f"rms_db: {grid_rms_error_db(grid_a, grid_b)!r}",
        f"max_abs_db: {grid_max_abs_error_db(grid_a, grid_b)!r}",
        "per_frequency:",
        "freq_hz,rms_db,max_abs_db",
    ]
    va, vb = grid_a.values, grid_b.values
    for j, f in enumerate(query.freqs):
        lines.append(
            f"{float(f)!r},{grid_rms_error_db(va[:, j], vb[:, j])!r},"
            f"{grid_max_abs_error_db(va[:, j], vb[:, j])!r}"
        )
    return "\n".join(lines) + "\n"


# -- wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="oodir",
        description="Fit, sample, render and compare directivity representations.",
        epilog="Coordinate lists: a number, a comma list, or start:step:stop (inclusive).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true",
                        help="progress messages on stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("info", help="describe a DIF, CSV or model file")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("fit-sh", help="fit a spherical harmonic model")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--mmax", type=int)
    p.add_argument("--min-elev", type=float, default=-90.0)
    p.add_argument("--info")
    p.set_defaults(func=cmd_fit_sh)

    p = sub.add_parser("fit-hsh", help="fit a hyperspherical harmonic model")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--mmax", type=int)
    p.add_argument("--max-freq", type=float,
                   help="upper frequency in Hz (default: highest measured frequency)")
    p.add_argument("--min-elev", type=float, default=-90.0)
    p.add_argument("--info")
    p.set_defaults(func=cmd_fit_hsh)

    def grid_options(p):
        p.add_argument("--az", help="azimuths in deg, e.g. 0:5:355")
        p.add_argument("--el", help="elevations in deg, e.g. -90:5:90")
        p.add_argument("--freq", help="frequencies in Hz (default: stored frequencies)")
        p.add_argument("--dist", help="distances in m (default: stored distances or 1 m)")

    p = sub.add_parser("sample", help="evaluate a file on a coordinate grid, as CSV")
    p.add_argument("model")
    grid_options(p)
    p.add_argument("-o", "--output", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("balloon", help="directivity balloon at one frequency")
    p.add_argument("model")
    p.add_argument("--freq", type=float, required=True)
    p.add_argument("--res-deg", type=float, default=DEFAULT_RES_DEG)
    p.add_argument("--dist", type=float, default=1.0)
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_balloon)

    p = sub.add_parser("spectrum", help="magnitude spectrum at one direction")
    p.add_argument("model")
    p.add_argument("--az", type=float, required=True)
    p.add_argument("--el", type=float, required=True)
    p.add_argument("--res-hz", type=float, default=DEFAULT_RES_HZ)
    p.add_argument("--dist", type=float, default=1.0)
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("compare", help="RMS and maximum dB difference of two files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    grid_options(p)
    p.add_argument("-o", "--output", help="report path (default: stdout)")
    p.set_defaults(func=cmd_compare)
    return parser


_VALUE_OPTIONS = ("--az", "--el", "--freq", "--dist", "--min-elev")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--el -90:5:90`` into ``--el=-90:5:90`` so argparse keeps the value."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok in _VALUE_OPTIONS and len(nxt) > 1 and nxt[0] == "-" and (
            nxt[1].isdigit() or nxt[1] == "."
        ):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="oodir: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    if getattr(args, "mmax", None) is None and hasattr(args, "mmax"):
        args.mmax = args.lmax if args.command == "fit-sh" else args.nmax
    try:
        out = args.func(args)
        if isinstance(out, str):
            out = out.encode("utf-8")
        target = getattr(args, "output", None)
        if args.command in ("sample", "compare") and target:
            write_bytes(target, out)
        else:
            sys.stdout.buffer.write(out)
            sys.stdout.flush()
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"oodir: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"oodir: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OodirError as exc:
        print(f"oodir: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
