"""Day-ahead power system load and price forecasting engine.

The engine ingests nine days of hourly load and temperature plus a
temperature forecast for the target day, fits an ensemble of three dynamic
regressions, derives a verification layer (alignment angles, entropies,
inverse temperature, daily work, time and energy tests) and reports the
ensemble load forecast together with an expected day-ahead electricity price
index and a forecast-error-reduction figure.
"""

__version__ = "0.1.0"

from .errors import DayAheadError, DegeneracyError, ValidationError

__all__ = ["DayAheadError", "DegeneracyError", "ValidationError", "__version__"]
