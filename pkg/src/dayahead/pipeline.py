"""End-to-end orchestration for a single target day.

Window -> three model fits -> target-day forecasts -> verification layer ->
time and energy tests -> assembled report.  Numerical degeneracies raised
anywhere in the chain propagate as :class:`DegeneracyError` with the
failing formula named.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import regress, report, thermo, verdict
from .features import MODEL_IDS
from .ingest import SeriesWindow
from .verdict import CriticalValues


@dataclass(frozen=True)
class EngineSettings:
    method: str = "exact_ml_ar1"
    lambda_policy: str = "grid"
    lam: Optional[float] = None
    temp_mode: str = "hour"


def run_day(
    window: SeriesWindow,
    critical_values: CriticalValues,
    settings: EngineSettings = EngineSettings(),
    config: Optional[dict] = None,
):
    """Run the full chain for one window; returns (DispatchReport, forecasts)."""
    fits = {
        model_id: regress.fit_model(
            window,
            model_id,
            method=settings.method,
            lambda_policy=settings.lambda_policy,
            lam=settings.lam,
            temp_mode=settings.temp_mode,
        )
        for model_id in MODEL_IDS
    }
    forecasts = regress.forecast_day(window, fits)
    ensemble = regress.ensemble_mean(forecasts)

    state = thermo.compute_state(
        forecasts["a"].prediction,
        forecasts["b"].prediction,
        forecasts["c"].prediction,
    )
    time_test = verdict.time_tests(
        state.theta1, state.theta2, state.w1, state.w2, critical_values
    )
    reserve_test = verdict.energy_test(state.w1, state.w2, state.beta)

    dispatch = report.build_report(
        target_date=window.target_date,
        forecasts={m: forecasts[m].prediction for m in MODEL_IDS},
        thermo=state,
        time_test=time_test,
        reserve_test=reserve_test,
        ensemble=ensemble,
        config=config,
    )
    return dispatch, forecasts
