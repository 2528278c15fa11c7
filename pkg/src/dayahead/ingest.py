"""Data model, CSV parsing/validation and synthetic data generation.

The CSV schema is shared by history and forecast files::

    date,hour,load_mw,temp_c
    2004-05-01,1,4200.5,11.2

Dates are ISO-8601, hours run 1..24, the decimal separator is ``.`` and the
line terminator is ``\\n``.  A forecast file carries ``load_mw`` as an empty
field.  Calendar days are opaque labels with exactly 24 hours each; there is
no timezone or DST handling.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

import numpy as np

from .errors import ValidationError

LOAD_KIND = "load_mw"
TEMP_KIND = "temp_c"

HOURS = tuple(range(1, 25))
HISTORY_DAYS = 9

CSV_HEADER = "date,hour,load_mw,temp_c"


class Record(NamedTuple):
    """One CSV row.  ``load_mw`` is None for forecast rows."""

    date: dt.date
    hour: int
    load_mw: Optional[float]
    temp_c: float


@dataclass(frozen=True)
class DayProfile:
    """24 hourly values for one calendar day.

    ``kind`` is either ``load_mw`` or ``temp_c``.  Load values must be
    strictly positive because logarithms of load peaks are taken downstream.
    """

    date: dt.date
    values: tuple
    kind: str

    def __post_init__(self):
        if self.kind not in (LOAD_KIND, TEMP_KIND):
            raise ValidationError(f"unknown profile kind {self.kind!r}")
        vals = tuple(float(v) for v in self.values)
        if len(vals) != 24:
            raise ValidationError(
                f"profile for {self.date} has {len(vals)} values, expected 24"
            )
        for h, v in zip(HOURS, vals):
            if not math.isfinite(v):
                raise ValidationError(f"non-finite value at ({self.date}, hour {h})")
            if self.kind == LOAD_KIND and v <= 0.0:
                raise ValidationError(f"non-positive load at ({self.date}, hour {h})")
        object.__setattr__(self, "values", vals)

    def value_at(self, hour: int) -> float:
        if hour < 1 or hour > 24:
            raise ValidationError(f"hour {hour} out of range 1..24")
        return self.values[hour - 1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class SeriesWindow:
    """Nine consecutive history days of load and temperature plus the target
    day's hourly temperature forecast."""

    target_date: dt.date
    load_history: tuple
    temp_history: tuple
    temp_forecast: DayProfile

    def __post_init__(self):
        loads = tuple(self.load_history)
        temps = tuple(self.temp_history)
        if len(loads) != HISTORY_DAYS or len(temps) != HISTORY_DAYS:
            raise ValidationError("window requires exactly 9 history days")
        expected = [self.target_date - dt.timedelta(days=k) for k in range(9, 0, -1)]
        for seq, kind in ((loads, LOAD_KIND), (temps, TEMP_KIND)):
            for prof, day in zip(seq, expected):
                if prof.kind != kind:
                    raise ValidationError(
                        f"profile for {prof.date} has kind {prof.kind}, expected {kind}"
                    )
                if prof.date != day:
                    raise ValidationError(
                        f"history dates must be consecutive and end the day before "
                        f"{self.target_date}: found {prof.date}, expected {day}"
                    )
        if self.temp_forecast.kind != TEMP_KIND:
            raise ValidationError("temp_forecast must have kind temp_c")
        if self.temp_forecast.date != self.target_date:
            raise ValidationError("temp_forecast date must equal target_date")
        object.__setattr__(self, "load_history", loads)
        object.__setattr__(self, "temp_history", temps)

    def _history_index(self, day: dt.date) -> int:
        offset = (self.target_date - day).days
        if not 1 <= offset <= HISTORY_DAYS:
            raise ValidationError(
                f"day {day} is outside the window ending {self.target_date}"
            )
        return HISTORY_DAYS - offset

    def load_on(self, day: dt.date) -> DayProfile:
        return self.load_history[self._history_index(day)]

    def temp_on(self, day: dt.date) -> DayProfile:
        """Temperature profile for a day; the target day resolves to the
        forecast, history days to observed temperatures."""
        if day == self.target_date:
            return self.temp_forecast
        return self.temp_history[self._history_index(day)]

    def has_day(self, day: dt.date) -> bool:
        return 1 <= (self.target_date - day).days <= HISTORY_DAYS


def parse_csv(text: str) -> list[Record]:
    """Parse CSV text into records, preserving file order.

    Raises :class:`ValidationError` for a malformed row (reported with its
    line number), a duplicate (date, hour) key or an hour outside 1..24.
    """
    lines = text.split("\n")
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ValidationError(f"expected header {CSV_HEADER!r}")
    records: list[Record] = []
    seen: set[tuple[dt.date, int]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if line.strip() == "":
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValidationError(f"line {lineno}: expected 4 fields, got {len(parts)}")
        raw_date, raw_hour, raw_load, raw_temp = (p.strip() for p in parts)
        try:
            date = dt.date.fromisoformat(raw_date)
        except ValueError:
            raise ValidationError(f"line {lineno}: bad date {raw_date!r}") from None
        try:
            hour = int(raw_hour)
        except ValueError:
            raise ValidationError(f"line {lineno}: bad hour {raw_hour!r}") from None
        if hour < 1 or hour > 24:
            raise ValidationError(f"line {lineno}: hour {hour} out of range 1..24")
        load: Optional[float] = None
        if raw_load != "":
            try:
                load = float(raw_load)
            except ValueError:
                raise ValidationError(
                    f"line {lineno}: bad load_mw {raw_load!r}"
                ) from None
            if not math.isfinite(load):
                raise ValidationError(f"line {lineno}: non-finite load_mw")
        try:
            temp = float(raw_temp)
        except ValueError:
            raise ValidationError(f"line {lineno}: bad temp_c {raw_temp!r}") from None
        if not math.isfinite(temp):
            raise ValidationError(f"line {lineno}: non-finite temp_c")
        key = (date, hour)
        if key in seen:
            raise ValidationError(f"line {lineno}: duplicate key ({date}, hour {hour})")
        seen.add(key)
        records.append(Record(date, hour, load, temp))
    return records


def serialize_csv(records: Iterable[Record]) -> str:
    """Render records back to CSV text; parse(serialize(r)) == r."""
    out = [CSV_HEADER]
    for rec in records:
        load = "" if rec.load_mw is None else repr(float(rec.load_mw))
        out.append(f"{rec.date.isoformat()},{rec.hour},{load},{repr(float(rec.temp_c))}")
    return "\n".join(out) + "\n"


def assemble_window(records: Iterable[Record], target_date: dt.date) -> SeriesWindow:
    """Build a validated window ending the day before ``target_date``.

    Requires full 24-hour load and temperature coverage for each of the nine
    preceding days plus 24 forecast-temperature hours for the target day.
    The first gap found in (day, hour) order is reported; the outcome does
    not depend on record order.  Rows for the target day may carry a load
    value (e.g. in a backtest dataset); it is ignored here.
    """
    by_key: dict[tuple[dt.date, int], Record] = {}
    for rec in records:
        key = (rec.date, rec.hour)
        if key in by_key:
            raise ValidationError(f"duplicate key ({rec.date}, hour {rec.hour})")
        by_key[key] = rec

    loads = []
    temps = []
    for k in range(9, 0, -1):
        day = target_date - dt.timedelta(days=k)
        load_vals = []
        temp_vals = []
        for hour in HOURS:
            rec = by_key.get((day, hour))
            if rec is None:
                raise ValidationError(f"missing data for ({day}, hour {hour})")
            if rec.load_mw is None:
                raise ValidationError(f"missing load_mw for ({day}, hour {hour})")
            if rec.load_mw <= 0.0:
                raise ValidationError(f"non-positive load at ({day}, hour {hour})")
            load_vals.append(rec.load_mw)
            temp_vals.append(rec.temp_c)
        loads.append(DayProfile(day, tuple(load_vals), LOAD_KIND))
        temps.append(DayProfile(day, tuple(temp_vals), TEMP_KIND))

    forecast_vals = []
    for hour in HOURS:
        rec = by_key.get((target_date, hour))
        if rec is None:
            raise ValidationError(
                f"missing forecast temperature for ({target_date}, hour {hour})"
            )
        forecast_vals.append(rec.temp_c)
    forecast = DayProfile(target_date, tuple(forecast_vals), TEMP_KIND)

    return SeriesWindow(target_date, tuple(loads), tuple(temps), forecast)


@dataclass(frozen=True)
class SynthParams:
    """Parameters of the deterministic synthetic dataset generator.

    The defaults produce a plausible double-peaked daily load shape with
    peaks near hours 9-11 and 19-21.  ``temp_sensitivity_pct_per_2c`` scales
    the linear temperature response so that a uniform 2 degC rise in
    temperature shifts the mean load by that percentage of ``base_mw``.
    All randomness comes from ``seed``; no system entropy is used.
    """

    days: int = 40
    base_mw: float = 4200.0
    peak_amp_mw: float = 600.0
    temp_sensitivity_pct_per_2c: float = 4.6
    ar_rho: float = 0.6
    noise_sd_mw: float = 40.0
    seed: int = 1
    start_date: dt.date = dt.date(2004, 1, 1)
    temp_base_c: float = 10.0
    temp_amp_c: float = 6.0
    temp_offset_c: float = 0.0

    def __post_init__(self):
        if self.days < 1:
            raise ValidationError("days must be a positive integer")
        if self.base_mw <= 0:
            raise ValidationError("base_mw must be positive")
        if not -1.0 < self.ar_rho < 1.0:
            raise ValidationError("ar_rho must lie in (-1, 1)")
        if self.noise_sd_mw < 0:
            raise ValidationError("noise_sd_mw must be nonnegative")


# Gaussian bump centers/width for the two daily load peaks (hours).
PEAK_CENTERS = (10.0, 20.0)
PEAK_WIDTH_H = 1.8
EVENING_PEAK_RATIO = 0.9


def _synth_temp(params: SynthParams, day_index: int, hour: int) -> float:
    diurnal = math.sin(2.0 * math.pi * (hour - 9) / 24.0)
    drift = 0.5 * math.sin(2.0 * math.pi * day_index / 11.0)
    return (
        params.temp_base_c
        + params.temp_amp_c * (diurnal + drift)
        + params.temp_offset_c
    )


def _peak_shape(hour: int) -> float:
    morning = math.exp(-((hour - PEAK_CENTERS[0]) ** 2) / (2.0 * PEAK_WIDTH_H**2))
    evening = math.exp(-((hour - PEAK_CENTERS[1]) ** 2) / (2.0 * PEAK_WIDTH_H**2))
    return morning + EVENING_PEAK_RATIO * evening


def synth_dataset(params: SynthParams) -> tuple[list[Record], dict]:
    """Generate ``params.days`` days of hourly load and temperature records.

    load(d, h) = base + peak_amp * bumps(h)
               + slope * (temp(d, h) - temp_base_c) + AR(1) noise

    where slope = (temp_sensitivity_pct_per_2c / 100) * base_mw / 2 per degC,
    so a uniform +2 degC offset shifts every load value by exactly
    temp_sensitivity_pct_per_2c percent of base_mw.  The AR(1) noise chain is
    stationary with marginal standard deviation ``noise_sd_mw`` and runs
    hour by hour across day boundaries.  Returns the records plus a ground
    truth description of the generating coefficients.
    """
    rng = np.random.default_rng(params.seed)
    slope = params.temp_sensitivity_pct_per_2c / 100.0 * params.base_mw / 2.0
    innov_sd = params.noise_sd_mw * math.sqrt(1.0 - params.ar_rho**2)

    records: list[Record] = []
    noise = rng.normal(0.0, params.noise_sd_mw) if params.noise_sd_mw > 0 else 0.0
    for d in range(params.days):
        day = params.start_date + dt.timedelta(days=d)
        for hour in HOURS:
            temp = _synth_temp(params, d, hour)
            load = (
                params.base_mw
                + params.peak_amp_mw * _peak_shape(hour)
                + slope * (temp - params.temp_base_c)
                + noise
            )
            if load <= 0.0:
                raise ValidationError(
                    f"generator produced non-positive load at ({day}, hour {hour}); "
                    "adjust parameters"
                )
            records.append(Record(day, hour, float(load), float(temp)))
            if params.noise_sd_mw > 0:
                noise = params.ar_rho * noise + rng.normal(0.0, innov_sd)

    truth = {
        "base_mw": params.base_mw,
        "peak_amp_mw": params.peak_amp_mw,
        "peak_centers_h": PEAK_CENTERS,
        "peak_width_h": PEAK_WIDTH_H,
        "evening_peak_ratio": EVENING_PEAK_RATIO,
        "slope_mw_per_c": slope,
        "temp_base_c": params.temp_base_c,
        "temp_amp_c": params.temp_amp_c,
        "temp_offset_c": params.temp_offset_c,
        "ar_rho": params.ar_rho,
        "noise_sd_mw": params.noise_sd_mw,
        "innovation_sd_mw": innov_sd,
        "seed": params.seed,
    }
    return records, truth


def synth_window(params: SynthParams) -> tuple[SeriesWindow, dict]:
    """Generate a dataset and assemble the window targeting its last day.

    Needs at least 10 generated days (9 history plus the target).  The
    target day's generated temperatures serve as the forecast; its loads are
    the ground-truth actuals and are not part of the window.
    """
    if params.days < 10:
        raise ValidationError("synth_window requires days >= 10")
    records, truth = synth_dataset(params)
    target = params.start_date + dt.timedelta(days=params.days - 1)
    return assemble_window(records, target), truth
