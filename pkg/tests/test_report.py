import datetime as dt
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dayahead.errors import ValidationError
from dayahead.ingest import SynthParams, synth_window
from dayahead.pipeline import run_day
from dayahead.report import (
    MU_NORMALIZATION,
    P_R,
    P_V,
    build_report,
    daily_relative_error,
    error_reduction,
    mmre,
    monthly_mmre,
    parse_report,
    price,
    serialize_report,
    temp_equivalence,
)
from dayahead.thermo import WORK_OFFSET

from conftest import TARGET, profile, stub_criticals


def test_price_arithmetic():
    assert price(0.5, 1.4) == pytest.approx(7.0, abs=1e-12)
    assert price(0.5, 0.6) == pytest.approx(7.0, abs=1e-12)  # 2 - 0.6 = 1.4
    assert price(0.7, 1.0) == pytest.approx(7.0, abs=1e-12)


def test_price_continuous_at_one():
    eps = 1e-9
    below = price(0.8, 1.0 - eps)
    above = price(0.8, 1.0 + eps)
    assert abs(below - above) < 1e-7


def test_price_rejects_nonpositive_sigma():
    with pytest.raises(ValidationError):
        price(0.5, 0.0)


@given(st.floats(min_value=1e-6, max_value=2.0), st.floats(min_value=0.0, max_value=5.0))
@settings(max_examples=60, deadline=None)
def test_price_dominates_ten_beta(sigma, beta):
    assert price(beta, sigma) >= 10.0 * beta * (1.0 - 1e-15)


def test_error_reduction_normalization_point():
    assert error_reduction(1.0, MU_NORMALIZATION, 0.0) == pytest.approx(10.0, abs=1e-12)


def test_error_reduction_frozen_case():
    # theta1 = 0 so mu = 1/sqrt(W1): delta = 10 (sqrt(11.608)/1.78617 - 0.1).
    mu = 1.0 / math.sqrt(WORK_OFFSET)
    delta = error_reduction(WORK_OFFSET, mu, 0.1)
    expected = 10.0 * (math.sqrt(WORK_OFFSET) / MU_NORMALIZATION - 0.1)
    assert delta == pytest.approx(expected, abs=1e-12)
    assert delta == pytest.approx(18.07, abs=0.01)


def test_error_reduction_cancellation():
    w1, mu = 9.5, 0.21
    assert error_reduction(w1, mu, w1 * mu / MU_NORMALIZATION) == pytest.approx(
        0.0, abs=1e-12
    )


def test_temp_equivalence():
    assert temp_equivalence(0.0) == 0.0
    assert temp_equivalence(4.6) == pytest.approx(2.0, abs=1e-12)
    value = temp_equivalence(1.5)
    assert value == pytest.approx(0.652, abs=5e-4)
    assert abs(value - 0.7) < 0.05


def test_daily_relative_error_hand_case():
    actual_values = [100.0] * 24
    actual_values[11] = 200.0
    actual = profile(TARGET, actual_values)
    forecast = profile(TARGET, [v + 2.0 for v in actual_values])
    assert daily_relative_error(actual, forecast) == pytest.approx(1.0, abs=1e-12)


def test_mmre_perfect_forecast_and_errors():
    days = [TARGET + dt.timedelta(days=i) for i in range(3)]
    actuals = [profile(d, [100.0 + i] * 24) for i, d in enumerate(days)]
    assert mmre(actuals, actuals) == 0.0
    with pytest.raises(ValidationError, match="at least one"):
        mmre([], [])
    shifted = [profile(days[(i + 1) % 3], a.values) for i, a in enumerate(actuals)]
    with pytest.raises(ValidationError, match="misaligned"):
        mmre(actuals, shifted)


@given(st.floats(min_value=0.01, max_value=100.0))
@settings(max_examples=40, deadline=None)
def test_mmre_scale_invariant(c):
    rng = np.random.default_rng(17)
    actuals = [profile(TARGET, rng.uniform(50, 150, 24))]
    forecasts = [profile(TARGET, rng.uniform(50, 150, 24))]
    scaled_a = [profile(TARGET, [c * v for v in actuals[0].values])]
    scaled_f = [profile(TARGET, [c * v for v in forecasts[0].values])]
    assert mmre(scaled_a, scaled_f) == pytest.approx(
        mmre(actuals, forecasts), rel=1e-9
    )


def test_monthly_mmre_groups_by_calendar_month():
    daily = [
        (dt.date(2004, 4, 29), 2.0),
        (dt.date(2004, 4, 30), 4.0),
        (dt.date(2004, 5, 1), 6.0),
    ]
    summary = monthly_mmre(daily)
    assert summary[(2004, 4)] == pytest.approx(3.0)
    assert summary[(2004, 5)] == pytest.approx(6.0)


def _sample_report(stub):
    window, _ = synth_window(SynthParams(days=12, seed=3))
    dispatch, _ = run_day(window, stub, config={"method": "exact-ml"})
    return dispatch


def test_report_meta_constants(stub_criticals):
    dispatch = _sample_report(stub_criticals)
    assert dispatch.meta["p_v"] == P_V == 0.8803
    assert dispatch.meta["p_r"] == P_R == 0.96806
    assert dispatch.meta["engine_version"]
    assert dispatch.meta["config"] == {"method": "exact-ml"}


def test_report_schema_keys(stub_criticals):
    dispatch = _sample_report(stub_criticals)
    obj = json.loads(serialize_report(dispatch))
    assert list(obj.keys()) == [
        "target_date", "forecasts", "ensemble", "thermo", "time_test",
        "reserve_test", "price_c", "delta_pct", "temp_equiv_c", "meta",
    ]
    assert list(obj["forecasts"].keys()) == ["a", "b", "c"]
    assert all(len(obj["forecasts"][m]) == 24 for m in "abc")
    assert len(obj["ensemble"]) == 24
    assert list(obj["thermo"].keys()) == [
        "theta1", "theta2", "beta", "w1", "w2", "mu", "sigma",
        "delta_s", "delta_sp",
    ]
    assert list(obj["time_test"].keys()) == [
        "t6_1", "t6_2", "t16", "t24", "exponents", "verdicts",
    ]
    assert list(obj["reserve_test"].keys()) == ["r1", "r2", "pass"]
    assert obj["meta"]["p_v"] == 0.8803
    assert obj["meta"]["p_r"] == 0.96806


def test_report_round_trip(stub_criticals):
    dispatch = _sample_report(stub_criticals)
    text = serialize_report(dispatch)
    rebuilt = parse_report(text)
    assert rebuilt == dispatch
    assert serialize_report(rebuilt) == text


def test_report_numbers_have_seventeen_significant_digits(stub_criticals):
    dispatch = _sample_report(stub_criticals)
    text = serialize_report(dispatch)
    rendered = format(dispatch.thermo.theta1, ".17g")
    assert rendered in text


def test_build_report_rejects_date_mismatch(stub_criticals):
    dispatch = _sample_report(stub_criticals)
    wrong = {
        m: profile(TARGET + dt.timedelta(days=9), p.values)
        for m, p in dispatch.forecasts.items()
    }
    with pytest.raises(ValidationError, match="expected"):
        build_report(
            target_date=TARGET,
            forecasts=wrong,
            thermo=dispatch.thermo,
            time_test=dispatch.time_test,
            reserve_test=dispatch.reserve_test,
            ensemble=dispatch.ensemble,
        )
