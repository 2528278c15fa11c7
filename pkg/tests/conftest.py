import datetime as dt
import math

import pytest

from dayahead.ingest import (
    LOAD_KIND,
    TEMP_KIND,
    DayProfile,
    Record,
    SeriesWindow,
)
from dayahead.verdict import CriticalValues

TARGET = dt.date(2004, 5, 10)


def day(offset: int) -> dt.date:
    """Calendar day `offset` days before the default target."""
    return TARGET - dt.timedelta(days=offset)


def profile(date, values, kind=LOAD_KIND) -> DayProfile:
    return DayProfile(date, tuple(float(v) for v in values), kind)


def make_window(load_by_offset=None, temp_by_offset=None, forecast=None,
                target=TARGET) -> SeriesWindow:
    """Window with per-offset overrides; defaults are a mild double-peaked
    load shape and a diurnal temperature curve."""
    load_by_offset = load_by_offset or {}
    temp_by_offset = temp_by_offset or {}
    loads = []
    temps = []
    for k in range(9, 0, -1):
        d = target - dt.timedelta(days=k)
        lv = load_by_offset.get(k, default_load(k))
        tv = temp_by_offset.get(k, default_temp(k))
        loads.append(profile(d, lv, LOAD_KIND))
        temps.append(profile(d, tv, TEMP_KIND))
    fc = forecast if forecast is not None else default_temp(0)
    return SeriesWindow(
        target, tuple(loads), tuple(temps),
        profile(target, fc, TEMP_KIND),
    )


def default_load(offset: int):
    return [
        4000.0
        + 500.0 * math.exp(-((h - 10) ** 2) / 6.0)
        + 450.0 * math.exp(-((h - 20) ** 2) / 6.0)
        + 35.0 * math.sin(2.0 * math.pi * (h + 3 * offset) / 24.0)
        + 20.0 * offset
        for h in range(1, 25)
    ]


def default_temp(offset: int):
    return [
        10.0
        + 5.0 * math.sin(2.0 * math.pi * (h - 9) / 24.0)
        + 1.5 * math.sin(2.0 * math.pi * offset / 7.0)
        for h in range(1, 25)
    ]


def records_for_window(window: SeriesWindow, target_loads=None):
    """Flatten a window back into CSV records (plus optional target loads)."""
    recs = []
    for lp, tp in zip(window.load_history, window.temp_history):
        for h in range(1, 25):
            recs.append(Record(lp.date, h, lp.value_at(h), tp.value_at(h)))
    for h in range(1, 25):
        load = None if target_loads is None else float(target_loads[h - 1])
        recs.append(Record(window.target_date, h, load,
                           window.temp_forecast.value_at(h)))
    return recs


@pytest.fixture
def stub_criticals() -> CriticalValues:
    # Synthetic stub for exercising the branch logic; NOT calibrated values.
    return CriticalValues(
        lvl1_5pct=5.5, lvl1_10pct=4.8, lvl2_5pct=12.0,
        lvl2_10pct=10.5, lvl3_5pct=18.0,
    )


@pytest.fixture
def permissive_criticals() -> CriticalValues:
    # Dominance sentinel: every statistic passes.
    return CriticalValues(-1e18, -1e18, -1e18, -1e18, -1e18)


def assert_close(a, b, tol):
    assert abs(a - b) <= tol, f"|{a} - {b}| = {abs(a - b)} > {tol}"
