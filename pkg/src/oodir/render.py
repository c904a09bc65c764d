"""Balloon and spectrum sampling, and their SVG and CSV renderings.

Continuous-direction models are sampled on a regular azimuth/elevation grid
restricted to elevations at or above the model's ``min_elev``; discrete ones
contribute exactly their stored directions. Frequency-continuous models are
sampled from 0 Hz to ``max_freq`` at a fixed step; frequency-discrete ones
at their stored frequencies.

SVG output uses only ``rect``, ``path`` and ``text`` elements. Colours come
from :data:`COLOR_STOPS`, interpolated linearly in RGB between the dB
minimum (first stop) and maximum (last stop) of the plotted data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .core import Coordinates, Direction, DirectivityModel
from .errors import DomainError, NothingToRenderError

DEFAULT_RES_DEG = 2.5
DEFAULT_RES_HZ = 10.0

# (position in [0, 1], (r, g, b)); dark blue -> teal -> green -> yellow
COLOR_STOPS = (
    (0.00, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.50, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.00, (253, 231, 37)),
)

CSV_HEADER = "az_deg,el_deg,freq_hz,dist_m,mag_db"

_EPS = 1e-9


@dataclass(frozen=True)
class BalloonGrid:
    """Magnitudes over direction at one frequency and distance.

    For continuous models ``values`` has shape ``(len(elevations),
    len(azimuths))``. For discrete models ``points`` lists the stored
    directions and ``values`` is one-dimensional.
    """

    kind: str
    continuous: bool
    requested_freq: float
    freq: float
    dist: float
    az_step: float | None
    el_step: float | None
    min_elev: float
    azimuths: np.ndarray | None
    elevations: np.ndarray | None
    points: np.ndarray | None
    values: np.ndarray

    @property
    def coerced(self) -> bool:
        return self.freq != self.requested_freq

    def samples(self) -> np.ndarray:
        """``(N, 3)`` rows of azimuth, elevation and value."""
        if self.continuous:
            el, az = np.meshgrid(self.elevations, self.azimuths, indexing="ij")
            return np.column_stack([az.ravel(), el.ravel(), self.values.ravel()])
        return np.column_stack([self.points, self.values])


@dataclass(frozen=True)
class SpectrumSeries:
    """Magnitude over frequency at one direction and distance."""

    kind: str
    requested_direction: Direction
    direction: Direction
    dist: float
    freqs: np.ndarray
    values: np.ndarray

    @property
    def coerced(self) -> bool:
        return self.direction != self.requested_direction


def elevation_rows(min_elev: float, res_deg: float) -> np.ndarray:
    """Elevations from ``min_elev`` upwards in ``res_deg`` steps, ending at 90."""
    k = math.floor((90.0 - min_elev) / res_deg + _EPS)
    rows = min_elev + res_deg * np.arange(k + 1)
    rows = np.minimum(rows, 90.0)
    if 90.0 - rows[-1] > _EPS:
        rows = np.append(rows, 90.0)
    return rows


def azimuth_columns(res_deg: float) -> np.ndarray:
    """Azimuths from 0 up to (excluding) 360 in ``res_deg`` steps."""
    n = math.ceil(360.0 / res_deg - _EPS)
    cols = res_deg * np.arange(n)
    return cols[cols < 360.0]


def frequency_steps(max_freq: float, res_hz: float) -> np.ndarray:
    """Frequencies from 0 to ``max_freq`` in ``res_hz`` steps, ending at ``max_freq``."""
    k = math.floor(max_freq / res_hz + _EPS)
    freqs = np.minimum(res_hz * np.arange(k + 1), max_freq)
    if max_freq - freqs[-1] > _EPS * max(1.0, max_freq):
        freqs = np.append(freqs, max_freq)
    return freqs


def _used_dist(effective: Coordinates) -> float:
    return float(effective.effective_dists[0])


def balloon_samples(model: DirectivityModel, freq: float, dist: float = 1.0,
                    res_deg: float = DEFAULT_RES_DEG) -> BalloonGrid:
    """Sample ``model`` over direction at one frequency and distance."""
    if not res_deg > 0:
        raise DomainError(f"angular resolution must be > 0, got {res_deg}")
    if model.continuity.direction:
        min_elev = model.min_elev
        rows = elevation_rows(min_elev, res_deg)
        cols = azimuth_columns(res_deg)
        el, az = np.meshgrid(rows, cols, indexing="ij")
        dirs = np.column_stack([az.ravel(), el.ravel()])
        grid, eff = model.get_data(Coordinates(dirs, [freq], [dist]))
        values = grid.values[:, 0, 0].reshape(len(rows), len(cols))
        return BalloonGrid(
            model.kind, True, float(freq), float(eff.freqs[0]), _used_dist(eff),
            float(res_deg), float(res_deg), float(min_elev), cols, rows, None, values,
        )
    points = np.array(model.get_data_coords().dirs)
    if len(points) == 0:
        raise NothingToRenderError("model has no directions to plot")
    grid, eff = model.get_data(Coordinates(points, [freq], [dist]))
    return BalloonGrid(
        model.kind, False, float(freq), float(eff.freqs[0]), _used_dist(eff),
        None, None, -90.0, None, None, np.array(eff.dirs), grid.values[:, 0, 0].copy(),
    )


def spectrum_samples(model: DirectivityModel, direction, dist: float = 1.0,
                     res_hz: float = DEFAULT_RES_HZ) -> SpectrumSeries:
    """Sample ``model`` over frequency at one direction and distance."""
    if not res_hz > 0:
        raise DomainError(f"frequency resolution must be > 0, got {res_hz}")
    if not isinstance(direction, Direction):
        direction = Direction(*direction)
    if model.continuity.frequency:
        freqs = frequency_steps(model.max_freq, res_hz)
    else:
        freqs = np.array(model.get_data_coords().freqs)
    if len(freqs) == 0:
        raise NothingToRenderError("model has no frequencies to plot")
    query = Coordinates([tuple(direction)], freqs, [dist])
    grid, eff = model.get_data(query)
    used = Direction(*eff.dirs[0])
    return SpectrumSeries(
        model.kind, direction, used, _used_dist(eff), np.array(eff.freqs),
        grid.values[0, :, 0].copy(),
    )


# -- CSV -------------------------------------------------------------------


def _row(*values: float) -> str:
    return ",".join(repr(float(v)) for v in values)


def emit_csv(data) -> bytes:
    """CSV table with header ``az_deg,el_deg,freq_hz,dist_m,mag_db``.

    Values are written with shortest round-trip formatting, so parsing
    them back gives the sampled floats exactly.
    """
    lines = [CSV_HEADER]
    if isinstance(data, BalloonGrid):
        rows = data.samples()
        if len(rows) == 0:
            raise NothingToRenderError("nothing to render")
        for az, el, v in rows:
            lines.append(_row(az, el, data.freq, data.dist, v))
    elif isinstance(data, SpectrumSeries):
        if len(data.freqs) == 0:
            raise NothingToRenderError("nothing to render")
        az, el = data.direction
        for f, v in zip(data.freqs, data.values):
            lines.append(_row(az, el, f, data.dist, v))
    else:
        raise TypeError(f"cannot emit {type(data).__name__} as CSV")
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- SVG -------------------------------------------------------------------


def color_for(value: float, vmin: float, vmax: float) -> str:
    """Hex colour of ``value`` on the :data:`COLOR_STOPS` scale."""
    t = 0.0 if vmax == vmin else (value - vmin) / (vmax - vmin)
    t = min(1.0, max(0.0, t))
    for (p0, c0), (p1, c1) in zip(COLOR_STOPS, COLOR_STOPS[1:]):
        if t <= p1:
            w = (t - p0) / (p1 - p0)
            rgb = [round(a + w * (b - a)) for a, b in zip(c0, c1)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*COLOR_STOPS[-1][1])


def value_range(values: np.ndarray) -> tuple[float, float]:
    """Colour range of ``values``; a flat range is widened by 1 dB each way."""
    vmin = float(np.min(values))
    vmax = float(np.max(values))
    if vmax == vmin:
        return vmin - 1.0, vmax + 1.0
    return vmin, vmax


def _f(x: float) -> str:
    return f"{x:.2f}"


def _text(x, y, content, size=12, anchor="start") -> str:
    return (
        f'<text x="{_f(x)}" y="{_f(y)}" font-family="sans-serif" font-size="{size}" '
        f'text-anchor="{anchor}">{escape(content)}</text>'
    )


def _rect(x, y, w, h, fill) -> str:
    return f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" fill="{fill}"/>'


def _document(width: int, height: int, body: list[str]) -> bytes:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    )
    return (head + "\n" + "\n".join(body) + "\n</svg>\n").encode("utf-8")


_PLOT_X, _PLOT_Y, _PLOT_W, _PLOT_H = 70.0, 50.0, 720.0, 360.0


def _az_x(az: float) -> float:
    return _PLOT_X + az / 360.0 * _PLOT_W


def _el_y(el: float) -> float:
    return _PLOT_Y + (90.0 - el) / 180.0 * _PLOT_H


def _legend(vmin: float, vmax: float, x: float, y: float, h: float) -> list[str]:
    out = []
    steps = 50
    for i in range(steps):
        v = vmax - (i + 0.5) / steps * (vmax - vmin)
        out.append(_rect(x, y + i * h / steps, 20.0, h / steps + 0.01, color_for(v, vmin, vmax)))
    out.append(_text(x + 26, y + 4, f"{vmax:.2f} dB", size=11))
    out.append(_text(x + 26, y + h + 4, f"{vmin:.2f} dB", size=11))
    return out


def emit_balloon_svg(grid: BalloonGrid) -> bytes:
    """Equirectangular heatmap: azimuth on x, elevation on y (top = +90)."""
    values = np.asarray(grid.values)
    if values.size == 0:
        raise NothingToRenderError("nothing to render")
    vmin, vmax = value_range(values)
    body = [_rect(0, 0, 900, 460, "#ffffff")]
    title = f"{grid.kind} balloon at {grid.freq:g} Hz, {grid.dist:g} m"
    if grid.coerced:
        title += f" (requested {grid.requested_freq:g} Hz, coerced)"
    body.append(_text(_PLOT_X, 30, title, size=14))

    if grid.continuous:
        half_az = grid.az_step / 2.0
        half_el = grid.el_step / 2.0
        for i, el in enumerate(grid.elevations):
            top = min(90.0, el + half_el)
            bottom = max(-90.0, el - half_el)
            for j, az in enumerate(grid.azimuths):
                left = az - half_az
                right = az + half_az
                color = color_for(values[i, j], vmin, vmax)
                # cells centred on 0 deg wrap to the right edge
                for lo, hi in ((left, right), (left + 360.0, right + 360.0)):
                    lo_c, hi_c = max(lo, 0.0), min(hi, 360.0)
                    if hi_c > lo_c:
                        body.append(_rect(_az_x(lo_c), _el_y(top),
                                          _az_x(hi_c) - _az_x(lo_c), _el_y(bottom) - _el_y(top),
                                          color))
    else:
        for (az, el), v in zip(grid.points, values):
            body.append(_rect(_az_x(az) - 3, _el_y(el) - 3, 6, 6, color_for(v, vmin, vmax)))

    frame = (
        f"M {_f(_PLOT_X)} {_f(_PLOT_Y)} H {_f(_PLOT_X + _PLOT_W)} "
        f"V {_f(_PLOT_Y + _PLOT_H)} H {_f(_PLOT_X)} Z"
    )
    body.append(f'<path d="{frame}" fill="none" stroke="#000000" stroke-width="1"/>')
    for az in range(0, 361, 90):
        body.append(_text(_az_x(az), _PLOT_Y + _PLOT_H + 16, f"{az}", size=11, anchor="middle"))
    for el in range(-90, 91, 45):
        body.append(_text(_PLOT_X - 6, _el_y(el) + 4, f"{el}", size=11, anchor="end"))
    body.append(_text(_PLOT_X + _PLOT_W / 2, _PLOT_Y + _PLOT_H + 34,
                      "Azimuth (deg)", anchor="middle"))
    body.append(_text(16, _PLOT_Y - 10, "Elevation (deg)", size=11))
    body.extend(_legend(vmin, vmax, _PLOT_X + _PLOT_W + 20, _PLOT_Y, _PLOT_H))
    return _document(900, 460, body)


def emit_spectrum_svg(series: SpectrumSeries) -> bytes:
    """Line chart of magnitude (dB) against frequency (Hz)."""
    freqs = np.asarray(series.freqs)
    values = np.asarray(series.values)
    if freqs.size == 0:
        raise NothingToRenderError("nothing to render")
    vmin, vmax = value_range(values)
    fmin, fmax = float(freqs[0]), float(freqs[-1])
    if fmax == fmin:
        fmin, fmax = fmin - 1.0, fmax + 1.0

    def fx(f):
        return _PLOT_X + (f - fmin) / (fmax - fmin) * _PLOT_W

    def vy(v):
        return _PLOT_Y + (vmax - v) / (vmax - vmin) * _PLOT_H

    body = [_rect(0, 0, 900, 460, "#ffffff")]
    az, el = series.direction
    title = f"{series.kind} spectrum at az {az:g} deg, el {el:g} deg, {series.dist:g} m"
    if series.coerced:
        ra, re_ = series.requested_direction
        title += f" (requested az {ra:g}, el {re_:g}, coerced)"
    body.append(_text(_PLOT_X, 30, title, size=14))

    axes = (
        f"M {_f(_PLOT_X)} {_f(_PLOT_Y)} V {_f(_PLOT_Y + _PLOT_H)} "
        f"H {_f(_PLOT_X + _PLOT_W)}"
    )
    body.append(f'<path d="{axes}" fill="none" stroke="#000000" stroke-width="1"/>')
    for k in range(5):
        f = fmin + k * (fmax - fmin) / 4
        body.append(_text(fx(f), _PLOT_Y + _PLOT_H + 16, f"{f:g}", size=11, anchor="middle"))
        v = vmin + k * (vmax - vmin) / 4
        body.append(_text(_PLOT_X - 6, vy(v) + 4, f"{v:.2f}", size=11, anchor="end"))
    body.append(_text(_PLOT_X + _PLOT_W / 2, _PLOT_Y + _PLOT_H + 34,
                      "Frequency (Hz)", anchor="middle"))
    body.append(_text(16, _PLOT_Y - 10, "Magnitude (dB)", size=11))

    cmds = [f"{'M' if i == 0 else 'L'} {_f(fx(f))} {_f(vy(v))}"
            for i, (f, v) in enumerate(zip(freqs, values))]
    body.append(f'<path d="{" ".join(cmds)}" fill="none" stroke="#1f4e9e" stroke-width="1.5"/>')
    return _document(900, 460, body)
