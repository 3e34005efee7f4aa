"""Synthetic station and ensemble data with a known bias relation.

The station follows a seasonal cycle, a diurnal cycle and an hourly AR(1)
anomaly. The model world sees a linearly distorted, diurnally biased copy of
it, so the twelve-parameter bias model is exact up to noise. Forecast errors
grow with lead time and share a heavy-tailed component the ensemble spread does
not represent. That under-dispersion is absent at lead zero and relaxes to
``underdispersion`` (spread over total error) with increasing lead.
"""
from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from .series import EnsembleForecast, StationSeries, epoch_hours, hour_of_day


@dataclass(frozen=True)
class SyntheticScenario:
    start: str = "2005-01-01"
    days: int = 183
    members: int = 10
    max_lead_hours: float = 264.0
    lead_step_hours: float = 6.0
    launch_hour: int = 0
    seasonal_mean: float = 9.0
    seasonal_amplitude: float = 6.0
    diurnal_amplitude: float = 3.5
    anomaly_std: float = 3.0
    anomaly_efold_hours: float = 60.0
    obs_noise: float = 0.3
    model_gain: float = 0.92
    model_offset: float = 1.2
    model_diurnal_bias: float = 0.8
    error_base: float = 0.3
    error_growth_per_day: float = 0.45
    underdispersion: float = 0.5
    underdispersion_efold_hours: float = 96.0
    tail_df: float = 4.0
    error_efold_hours: float = 36.0

    def __post_init__(self):
        if self.days < 1 or self.members < 2:
            raise InputError("scenario needs at least one day and two members")
        if not 0.0 < self.underdispersion <= 1.0:
            raise InputError("underdispersion must lie in (0, 1]")
        if self.tail_df <= 2.0:
            raise InputError("tail_df must exceed 2 for a finite error variance")


@dataclass(frozen=True)
class SyntheticData:
    station: StationSeries
    forecasts: list
    scenario: SyntheticScenario


def _climate(sc, hours):
    doy = (hours / 24.0) % 365.25
    season = sc.seasonal_mean - sc.seasonal_amplitude * np.cos(2.0 * np.pi * (doy - 20.0) / 365.25)
    hod = hours % 24.0
    return season + sc.diurnal_amplitude * np.cos(2.0 * np.pi * (hod - 15.0) / 24.0)


def _ar1(gen, n, phi, std, innovations=None):
    eps = gen.standard_normal(n) if innovations is None else innovations
    out = np.empty(n)
    out[0] = std * eps[0]
    scale = std * np.sqrt(1.0 - phi * phi)
    for i in range(1, n):
        out[i] = phi * out[i - 1] + scale * eps[i]
    return out


def model_from_truth(sc, truth, hours):
    """Model-world temperature for a station-world temperature."""
    h = hours % 24.0
    return sc.model_offset + sc.model_gain * truth - sc.model_diurnal_bias * np.cos(2.0 * np.pi * h / 24.0)


def generate(sc, rng):
    """Hourly station series and one ensemble per day at ``launch_hour`` UTC."""
    gen = rng.generator()
    t0 = np.datetime64(sc.start, "h") + np.timedelta64(sc.launch_hour, "h")
    total_hours = 24 * sc.days + int(np.ceil(sc.max_lead_hours)) + 1
    times = (t0 + np.arange(total_hours).astype("timedelta64[h]")).astype("datetime64[s]")
    hours = epoch_hours(times)
    anomaly = _ar1(gen, total_hours, np.exp(-1.0 / sc.anomaly_efold_hours), sc.anomaly_std)
    truth = _climate(sc, hours) + anomaly
    station = StationSeries(times, truth + sc.obs_noise * gen.standard_normal(total_hours))
    model_truth = model_from_truth(sc, truth, hours)

    lead = np.arange(0.0, sc.max_lead_hours + 0.5 * sc.lead_step_hours, sc.lead_step_hours)
    err_sd = sc.model_gain * (sc.error_base + sc.error_growth_per_day * lead / 24.0)
    # spread fraction starts at one and relaxes to the under-dispersed value
    r_inf = sc.underdispersion
    r = r_inf + (1.0 - r_inf) * np.exp(-((lead / sc.underdispersion_efold_hours) ** 2))
    phi = np.exp(-sc.lead_step_hours / sc.error_efold_hours)
    t_scale = np.sqrt((sc.tail_df - 2.0) / sc.tail_df)
    forecasts = []
    for d in range(sc.days):
        idx = 24 * d + lead.astype(int)
        base = model_truth[idx]
        tails = gen.standard_t(sc.tail_df, lead.size) * t_scale
        common = _ar1(gen, lead.size, phi, 1.0, tails) * err_sd * np.sqrt(1.0 - r * r)
        spread = np.array([_ar1(gen, lead.size, phi, 1.0) for _ in range(sc.members + 1)]) * err_sd * r
        runs = base + common + spread
        forecasts.append(
            EnsembleForecast(
                times[24 * d], lead, runs[1:], runs[0], tuple(str(i + 1) for i in range(sc.members))
            )
        )
    return SyntheticData(station, forecasts, sc)


def true_bias_coefficients(sc):
    """Coefficients of the exact station-from-model relation (noise aside)."""
    c = np.zeros(12)
    c[0] = -sc.model_offset / sc.model_gain
    c[1] = 1.0 / sc.model_gain
    c[4] = sc.model_diurnal_bias / sc.model_gain
    return c


__all__ = ["SyntheticData", "SyntheticScenario", "generate", "hour_of_day", "true_bias_coefficients"]
