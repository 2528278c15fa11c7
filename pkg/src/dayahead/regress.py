"""Estimation of the three regressions and the 24-hour target-day forecasts.

The default estimator maximizes the exact Gaussian likelihood of a linear
model with stationary AR(1) disturbances, retaining the first observation:
the disturbance chain runs along rows ordered day-major then hour, treating
the day boundary as a continuous chain.  Ordinary least squares is kept as
the fast baseline and as the rho=0 oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ValidationError
from .features import (
    LAMBDA_GRID,
    MODEL_IDS,
    design_matrix,
    legal_training_days,
    target_regressors,
)
from .ingest import LOAD_KIND, DayProfile, SeriesWindow

RHO_BOUND = 0.999
RHO_TOL = 1e-6
MAX_GOLDEN_ITER = 200

# Predictions below this floor are clamped so downstream logarithms stay
# defined.
CLAMP_FLOOR_MW = 1.0

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FitResult:
    model_id: str
    coefficients: dict
    residuals: np.ndarray
    ssr: float
    rho: float
    lam: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    def coef_vector(self) -> np.ndarray:
        return np.array(list(self.coefficients.values()))


@dataclass(frozen=True)
class ModelForecast:
    model_id: str
    fit: Optional[FitResult]
    prediction: DayProfile
    clamped_hours: tuple = ()


def _lstsq(matrix: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, int]:
    coef, _, rank, _ = np.linalg.lstsq(matrix, y, rcond=None)
    return coef, int(rank)


def ols_fit(design) -> FitResult:
    """Least squares via orthogonal (SVD) decomposition.

    When the numerical rank falls below the column count the minimum-norm
    solution is returned and the condition is reported in diagnostics; the
    fitted values still minimize the sum of squared residuals exactly.
    """
    n, k = design.matrix.shape
    if n < k:
        raise ValidationError(f"need at least {k} rows, got {n}")
    coef, rank = _lstsq(design.matrix, design.response)
    residuals = design.response - design.matrix @ coef
    diagnostics = {}
    if rank < k:
        diagnostics["rank_deficient"] = True
        diagnostics["rank"] = rank
    return FitResult(
        model_id=design.model_id,
        coefficients=dict(zip(design.names, (float(c) for c in coef))),
        residuals=residuals,
        ssr=float(residuals @ residuals),
        rho=0.0,
        lam=0.0,
        method="ols",
        diagnostics=diagnostics,
    )


def _ar1_whiten(matrix: np.ndarray, y: np.ndarray, rho: float):
    """Stationary AR(1) whitening transform that keeps the first row."""
    xs = matrix.copy()
    ys = y.copy()
    scale = math.sqrt(1.0 - rho * rho)
    xs[0] *= scale
    ys[0] *= scale
    xs[1:] -= rho * matrix[:-1]
    ys[1:] -= rho * y[:-1]
    return xs, ys


def _gls_at_rho(matrix: np.ndarray, y: np.ndarray, rho: float):
    xs, ys = _ar1_whiten(matrix, y, rho)
    coef, rank = _lstsq(xs, ys)
    resid = ys - xs @ coef
    return coef, float(resid @ resid), rank


def _concentrated_loglik(ssr_white: float, rho: float, n: int) -> float:
    if ssr_white <= 0.0:
        return math.inf
    return (
        -0.5 * n * (math.log(2.0 * math.pi) + 1.0)
        - 0.5 * n * math.log(ssr_white / n)
        + 0.5 * math.log(1.0 - rho * rho)
    )


def exact_ml_ar1_fit(design) -> FitResult:
    """Exact maximum likelihood for a linear model with AR(1) disturbances.

    The likelihood concentrated over the disturbance autocorrelation rho is
    maximized by golden-section search on (-0.999, 0.999) to |delta rho| <
    1e-6; coefficients are the generalized-least-squares solution at the
    optimum.  When the residuals vanish rho is unidentified and the tie is
    broken at rho = 0.  The returned rho never has lower exact likelihood
    than rho = 0 with the OLS coefficients.
    """
    n, k = design.matrix.shape
    if n < k + 1:
        raise ValidationError(f"need at least {k + 1} rows, got {n}")
    matrix, y = design.matrix, design.response

    _, ssr0, _ = _gls_at_rho(matrix, y, 0.0)
    scale = float(y @ y) + 1.0
    if ssr0 <= 1e-16 * scale:
        base = ols_fit(design)
        diagnostics = dict(base.diagnostics)
        diagnostics["rho_tie_break"] = True
        return FitResult(
            model_id=base.model_id,
            coefficients=base.coefficients,
            residuals=base.residuals,
            ssr=base.ssr,
            rho=0.0,
            lam=0.0,
            method="exact_ml_ar1",
            diagnostics=diagnostics,
        )

    def objective(rho: float) -> float:
        _, ssr, _ = _gls_at_rho(matrix, y, rho)
        return _concentrated_loglik(ssr, rho, n)

    lo, hi = -RHO_BOUND, RHO_BOUND
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = objective(c), objective(d)
    iterations = 0
    while hi - lo > RHO_TOL:
        iterations += 1
        if iterations > MAX_GOLDEN_ITER:
            raise ValidationError("rho search failed to converge in 200 iterations")
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = objective(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = objective(d)
    rho_hat = 0.5 * (lo + hi)

    # Keep whichever of {rho_hat, 0} has the better exact likelihood; this
    # guarantees monotone improvement over the OLS baseline.
    if objective(rho_hat) < objective(0.0):
        rho_hat = 0.0
    coef, ssr_white, rank = _gls_at_rho(matrix, y, rho_hat)
    residuals = y - matrix @ coef
    diagnostics = {
        "loglik": _concentrated_loglik(ssr_white, rho_hat, n),
        "iterations": iterations,
    }
    if rank < k:
        diagnostics["rank_deficient"] = True
        diagnostics["rank"] = rank
    return FitResult(
        model_id=design.model_id,
        coefficients=dict(zip(design.names, (float(v) for v in coef))),
        residuals=residuals,
        ssr=float(residuals @ residuals),
        rho=float(rho_hat),
        lam=0.0,
        method="exact_ml_ar1",
        diagnostics=diagnostics,
    )


def _fit_at(design, method: str) -> FitResult:
    if method == "ols":
        return ols_fit(design)
    if method == "exact_ml_ar1":
        return exact_ml_ar1_fit(design)
    raise ValidationError(f"unknown estimation method {method!r}")


def _with_context(fit: FitResult, lam: float, temp_mode: str) -> FitResult:
    diagnostics = dict(fit.diagnostics)
    diagnostics["temp_mode"] = temp_mode
    return FitResult(
        model_id=fit.model_id,
        coefficients=fit.coefficients,
        residuals=fit.residuals,
        ssr=fit.ssr,
        rho=fit.rho,
        lam=lam,
        method=fit.method,
        diagnostics=diagnostics,
    )


def fit_model(
    window: SeriesWindow,
    model_id: str,
    method: str = "exact_ml_ar1",
    lambda_policy: str = "grid",
    lam: Optional[float] = None,
    temp_mode: str = "hour",
) -> FitResult:
    """Fit one model over the legal training days.

    lambda_policy "grid" fits at each decay value in {0.0, ..., 0.9} and
    keeps the minimal-SSR fit (ties break toward the smaller value);
    "fixed" uses ``lam``; "off" is equivalent to fixed 0.
    """
    days = legal_training_days(window, model_id, temp_mode)
    if not days:
        raise ValidationError(f"no legal training days for model {model_id}")

    if lambda_policy == "off":
        candidates = [0.0]
    elif lambda_policy == "fixed":
        if lam is None:
            raise ValidationError("lambda_policy 'fixed' requires lam")
        candidates = [float(lam)]
    elif lambda_policy == "grid":
        candidates = list(LAMBDA_GRID)
    else:
        raise ValidationError(f"unknown lambda policy {lambda_policy!r}")

    best: Optional[FitResult] = None
    for cand in candidates:
        design = design_matrix(window, model_id, days, cand, temp_mode)
        fit = _with_context(_fit_at(design, method), cand, temp_mode)
        if best is None or fit.ssr < best.ssr:
            best = fit
    return best


def forecast_day(window: SeriesWindow, fits: dict) -> dict:
    """Apply the three fits to the target day's regressors.

    Temperature terms are drawn from the forecast.  Predictions below 1 MW
    are clamped to 1 MW and the affected hours are flagged.
    """
    for model_id in MODEL_IDS:
        if model_id not in fits:
            raise ValidationError(f"missing fit for model {model_id}")
    out = {}
    for model_id in MODEL_IDS:
        fit = fits[model_id]
        temp_mode = fit.diagnostics.get("temp_mode", "hour")
        block = target_regressors(window, model_id, fit.lam, temp_mode)
        raw = block @ fit.coef_vector()
        clamped = tuple(h for h in range(1, 25) if raw[h - 1] < CLAMP_FLOOR_MW)
        values = tuple(
            CLAMP_FLOOR_MW if h in clamped else float(raw[h - 1]) for h in range(1, 25)
        )
        prediction = DayProfile(window.target_date, values, LOAD_KIND)
        out[model_id] = ModelForecast(model_id, fit, prediction, clamped)
    return out


def ensemble_mean(forecasts: dict) -> DayProfile:
    """Hourwise arithmetic mean of the three model predictions.

    Each hour's mean is evaluated as min + ((mid - min) + (max - min)) / 3
    over the sorted triple, which keeps the result independent of model
    order and exact when predictions coincide.
    """
    for model_id in MODEL_IDS:
        if model_id not in forecasts:
            raise ValidationError(f"missing forecast for model {model_id}")
    profiles = [forecasts[m].prediction for m in MODEL_IDS]
    values = []
    for h in range(24):
        lo, mid, hi = sorted(p.values[h] for p in profiles)
        values.append(lo + ((mid - lo) + (hi - lo)) / 3.0)
    target = profiles[0].date
    return DayProfile(target, tuple(values), LOAD_KIND)
