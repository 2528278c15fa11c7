"""Daily outputs: expected price, error reduction, MMRE and the report.

The expected day-ahead electricity price index is c = 10 beta sigma_1
(Eq. 14), where sigma_1 reflects sigma around 1 from below.  The engine
reports it as a dimensionless index; no currency is attached.  The error
reduction delta = 10 (W1 mu / 1.78617 - delta_S) (Eq. 15) is reported in
percent alongside the ensemble forecast, together with its equivalent in
degrees Celsius of average daily temperature (2 degC corresponds to a 4.6%
load change).
"""

from __future__ import annotations

import datetime as dt
import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional

from . import __version__
from .errors import ValidationError
from .ingest import LOAD_KIND, DayProfile
from .thermo import ThermoState, WORK_OFFSET, entropies, induced_chi, peak_bounds
from .verdict import ReserveTestResult, TimeTestResult

# Normalization constant of the error-reduction formula (Eq. 15).
MU_NORMALIZATION = 1.78617

# Consumer-belief reliability constants carried verbatim in report metadata.
P_V = 0.8803
P_R = 0.96806

# Temperature equivalence: a 2 degC average-temperature change corresponds
# to a 4.6% load change.
TEMP_EQUIV_DEGC = 2.0
TEMP_EQUIV_PCT = 4.6


@dataclass(frozen=True)
class DispatchReport:
    """Everything the engine reports for one target day.

    ``forecasts`` maps model ids "a"/"b"/"c" to 24-hour prediction profiles;
    the full fit diagnostics stay with the pipeline result and are not part
    of the report schema.
    """

    target_date: dt.date
    forecasts: dict
    ensemble: DayProfile
    thermo: ThermoState
    time_test: TimeTestResult
    reserve_test: ReserveTestResult
    price_c: float
    delta_pct: float
    temp_equiv_c: float
    meta: dict


def price(beta: float, sigma: float) -> float:
    """Expected day-ahead price index c = 10 beta sigma_1 (Eq. 14).

    sigma_1 = sigma for sigma >= 1 and 2 - sigma for sigma < 1; the two
    branches agree at sigma = 1, so the price is continuous there.
    """
    if sigma <= 0.0:
        raise ValidationError(f"sigma must be positive, got {sigma}")
    sigma1 = sigma if sigma >= 1.0 else 2.0 - sigma
    return 10.0 * beta * sigma1


def error_reduction(w1: float, mu: float, delta_s: float) -> float:
    """Forecast-error reduction in percent (Eq. 15)."""
    for name, value in (("w1", w1), ("mu", mu), ("delta_s", delta_s)):
        if not math.isfinite(value):
            raise ValidationError(f"{name} must be finite")
    return 10.0 * (w1 * mu / MU_NORMALIZATION - delta_s)


def temp_equivalence(delta_pct: float) -> float:
    """Average-temperature change equivalent to an error reduction."""
    if not math.isfinite(delta_pct):
        raise ValidationError("delta_pct must be finite")
    return delta_pct * TEMP_EQUIV_DEGC / TEMP_EQUIV_PCT


def daily_relative_error(actual: DayProfile, forecast: DayProfile) -> float:
    """Mean absolute hourly error relative to the day's actual peak, in %."""
    if actual.date != forecast.date:
        raise ValidationError(
            f"misaligned dates: actual {actual.date}, forecast {forecast.date}"
        )
    peak = max(actual.values)
    err = sum(
        abs(f - a) for f, a in zip(forecast.values, actual.values)
    ) / 24.0
    return err / peak * 100.0


def mmre(actuals: Iterable[DayProfile], forecasts: Iterable[DayProfile]) -> float:
    """Mean over days of the daily relative error (percent)."""
    actuals = list(actuals)
    forecasts = list(forecasts)
    if not actuals:
        raise ValidationError("mmre requires at least one day")
    if len(actuals) != len(forecasts):
        raise ValidationError("actuals and forecasts must have equal length")
    errors = [daily_relative_error(a, f) for a, f in zip(actuals, forecasts)]
    return sum(errors) / len(errors)


def monthly_mmre(daily: Iterable[tuple[dt.date, float]]) -> dict:
    """Group daily errors by calendar month; arithmetic mean per month."""
    groups: dict[tuple[int, int], list[float]] = {}
    for day, err in daily:
        groups.setdefault((day.year, day.month), []).append(err)
    return {key: sum(vals) / len(vals) for key, vals in sorted(groups.items())}


def build_report(
    target_date: dt.date,
    forecasts: dict,
    thermo: ThermoState,
    time_test: TimeTestResult,
    reserve_test: ReserveTestResult,
    ensemble: DayProfile,
    config: Optional[dict] = None,
) -> DispatchReport:
    """Assemble the report; all profile components must share the target date."""
    for model_id, prof in forecasts.items():
        if prof.date != target_date:
            raise ValidationError(
                f"forecast {model_id} dated {prof.date}, expected {target_date}"
            )
    if ensemble.date != target_date:
        raise ValidationError("ensemble date mismatch")
    delta_pct = error_reduction(thermo.w1, thermo.mu, thermo.delta_s)
    meta = {"p_v": P_V, "p_r": P_R, "engine_version": __version__}
    if config is not None:
        meta["config"] = dict(config)
    return DispatchReport(
        target_date=target_date,
        forecasts=dict(forecasts),
        ensemble=ensemble,
        thermo=thermo,
        time_test=time_test,
        reserve_test=reserve_test,
        price_c=price(thermo.beta, thermo.sigma),
        delta_pct=delta_pct,
        temp_equiv_c=temp_equivalence(delta_pct),
        meta=meta,
    )


def _num(x: float) -> str:
    """Render a float with 17 significant digits (lossless round-trip)."""
    if not math.isfinite(x):
        raise ValidationError("refusing to serialize a non-finite number")
    return format(float(x), ".17g")


def _json_value(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dt.date):
        return json.dumps(obj.isoformat())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in obj) + "]"
    if isinstance(obj, dict):
        parts = (f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in obj.items())
        return "{" + ", ".join(parts) + "}"
    raise ValidationError(f"cannot serialize {type(obj).__name__}")


def serialize_report(report: DispatchReport) -> str:
    """Deterministic JSON rendering of the report schema."""
    t = report.time_test
    payload = {
        "target_date": report.target_date,
        "forecasts": {m: list(report.forecasts[m].values) for m in ("a", "b", "c")},
        "ensemble": list(report.ensemble.values),
        "thermo": {
            "theta1": report.thermo.theta1,
            "theta2": report.thermo.theta2,
            "beta": report.thermo.beta,
            "w1": report.thermo.w1,
            "w2": report.thermo.w2,
            "mu": report.thermo.mu,
            "sigma": report.thermo.sigma,
            "delta_s": report.thermo.delta_s,
            "delta_sp": report.thermo.delta_sp,
        },
        "time_test": {
            "t6_1": t.t6_1,
            "t6_2": t.t6_2,
            "t16": t.t16,
            "t24": t.t24,
            "exponents": {"i": t.i, "k": t.k, "m": t.m, "n": t.n},
            "verdicts": {
                "t6": t.pass_t6,
                "t16": t.pass_t16,
                "t24": t.pass_t24,
                "t16_branch": t.branch_t16,
                "t24_branch": t.branch_t24,
            },
        },
        "reserve_test": {
            "r1": report.reserve_test.r1,
            "r2": report.reserve_test.r2,
            "pass": report.reserve_test.passed,
        },
        "price_c": report.price_c,
        "delta_pct": report.delta_pct,
        "temp_equiv_c": report.temp_equiv_c,
        "meta": report.meta,
    }
    return _json_value(payload) + "\n"


def parse_report(text: str) -> DispatchReport:
    """Rebuild a DispatchReport from its JSON rendering.

    Fields not carried by the schema (induced chi values, per-angle
    entropies, peak bounds, work offsets) are deterministic functions of the
    serialized quantities and are recomputed, so parse(serialize(r)) == r.
    """
    obj = json.loads(text)
    target = dt.date.fromisoformat(obj["target_date"])
    forecasts = {
        m: DayProfile(target, tuple(obj["forecasts"][m]), LOAD_KIND)
        for m in ("a", "b", "c")
    }
    ensemble = DayProfile(target, tuple(obj["ensemble"]), LOAD_KIND)
    th = obj["thermo"]
    s1, sp1 = entropies(th["theta1"])
    s2, sp2 = entropies(th["theta2"])
    p1_am, p2_am, p1_pm, p2_pm = peak_bounds(
        forecasts["a"], forecasts["b"], forecasts["c"]
    )
    thermo = ThermoState(
        theta1=th["theta1"],
        theta2=th["theta2"],
        chi1=induced_chi(th["theta1"]),
        chi2=induced_chi(th["theta2"]),
        s_theta1=s1,
        s_theta2=s2,
        sp_theta1=sp1,
        sp_theta2=sp2,
        delta_s=th["delta_s"],
        delta_sp=th["delta_sp"],
        beta=th["beta"],
        p1_am=p1_am,
        p2_am=p2_am,
        p1_pm=p1_pm,
        p2_pm=p2_pm,
        w1=th["w1"],
        w2=th["w2"],
        mu=th["mu"],
        sigma=th["sigma"],
    )
    tt = obj["time_test"]
    time_test = TimeTestResult(
        t6_1=tt["t6_1"],
        t6_2=tt["t6_2"],
        t16=tt["t16"],
        t24=tt["t24"],
        i=tt["exponents"]["i"],
        k=tt["exponents"]["k"],
        m=tt["exponents"]["m"],
        n=tt["exponents"]["n"],
        pass_t6=tt["verdicts"]["t6"],
        pass_t16=tt["verdicts"]["t16"],
        pass_t24=tt["verdicts"]["t24"],
        branch_t16=tt["verdicts"]["t16_branch"],
        branch_t24=tt["verdicts"]["t24_branch"],
    )
    rt = obj["reserve_test"]
    reserve_test = ReserveTestResult(
        w0_1=th["w1"] - WORK_OFFSET,
        w0_2=th["w2"] - WORK_OFFSET,
        r1=rt["r1"],
        r2=rt["r2"],
        passed=rt["pass"],
    )
    return DispatchReport(
        target_date=target,
        forecasts=forecasts,
        ensemble=ensemble,
        thermo=thermo,
        time_test=time_test,
        reserve_test=reserve_test,
        price_c=obj["price_c"],
        delta_pct=obj["delta_pct"],
        temp_equiv_c=obj["temp_equiv_c"],
        meta=obj["meta"],
    )
