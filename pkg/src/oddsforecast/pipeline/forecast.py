"""Threshold events on ensemble forecasts, the four forecasters and the challenge client."""
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import InputError
from ..numerics import normal_cdf
from ..odds import (
    BernoulliPosterior,
    GaussianPosterior,
    SigmaPrior,
    Utility,
    freq_odds,
    gaussian_odds,
    probabilistic_odds,
)
from .series import hour_of_day

DEFAULT_OFFSET = -3.0
DEFAULT_CAP = 0.1
WINDOW_START_UTC = 18.0
FORECASTER_KINDS = ("frequency", "gaussian", "probabilistic", "capped")


class Aggregation(str, Enum):
    INSTANTANEOUS = "instantaneous"
    DAILY_MIN_FROM_18UTC = "daily_min_from_18utc"


@dataclass(frozen=True)
class ForecastEvent:
    """Event ``E``: the (aggregated) temperature falls below the adjusted control at
    issue time plus ``threshold_offset``.

    For daily-minimum events ``lead_time`` is the end of the 24 h window in lead
    hours; :meth:`daily_min` builds it from a lead in days.
    """

    threshold_offset: float = DEFAULT_OFFSET
    lead_time: float = 42.0
    aggregation: Aggregation = Aggregation.DAILY_MIN_FROM_18UTC

    def __post_init__(self):
        if not self.lead_time > 0:
            raise InputError("lead_time must be positive")
        object.__setattr__(self, "aggregation", Aggregation(self.aggregation))

    @classmethod
    def daily_min(cls, lead_days, launch_hour=0.0, threshold_offset=DEFAULT_OFFSET):
        """Minimum over the 24 h from the ``lead_days``-th 18 UTC after launch (18 UTC launches start at once)."""
        if int(lead_days) != lead_days or lead_days < 1:
            raise InputError("lead_days must be a positive integer")
        first = (WINDOW_START_UTC - launch_hour) % 24.0
        return cls(threshold_offset, first + 24.0 * lead_days, Aggregation.DAILY_MIN_FROM_18UTC)

    def window_hours(self):
        if self.aggregation is Aggregation.INSTANTANEOUS:
            return np.array([float(self.lead_time)])
        return np.arange(self.lead_time - 24.0, self.lead_time + 0.5, 1.0)

    def aggregate(self, values):
        v = np.asarray(values, dtype=np.float64)
        return v[..., -1] if self.aggregation is Aggregation.INSTANTANEOUS else v.min(axis=-1)


def _adjust(bias, ens, curve, lead_hours):
    h = hour_of_day(ens.valid_times(lead_hours))
    return bias.apply(curve(lead_hours), h)


def issue_threshold(ens, bias, event):
    """Adjusted control at issue time (lead 0) plus the event offset."""
    return float(_adjust(bias, ens, ens.control_spline, np.array([0.0]))[0]) + event.threshold_offset


def adjusted_members(ens, bias, event):
    """Aggregated adjusted temperature of each member over the event window."""
    hours = event.window_hours()
    x = ens.members_spline(hours)
    h = np.broadcast_to(hour_of_day(ens.valid_times(hours)), x.shape)
    return event.aggregate(bias.apply(x, h))


def adjusted_control(ens, bias, event):
    return float(event.aggregate(_adjust(bias, ens, ens.control_spline, event.window_hours())))


def member_probability(values, threshold):
    """Gaussian-CDF probability of falling below ``threshold`` from member mean and population std."""
    v = np.asarray(values, dtype=np.float64)
    mu, sd = float(v.mean()), float(v.std())
    if sd == 0.0:
        return 0.5 if threshold == mu else float(threshold > mu)
    return normal_cdf((threshold - mu) / sd)


def forecaster_odds(
    ens, bias, event, kind, utility, prior=None, cap=DEFAULT_CAP, table=None, threshold=None, values=None
):
    """Odds ``(q on E, q' on E')`` posted by one forecaster.

    ``table`` is an optional :class:`GaussianOddsTable` for the member count and
    utility, used instead of fresh quadrature. ``threshold`` and ``values``
    may be passed in when already computed.
    """
    if kind not in FORECASTER_KINDS:
        raise InputError(f"forecaster kind must be one of {FORECASTER_KINDS}, got {kind!r}")
    utility = Utility.parse(utility)
    if threshold is None:
        threshold = issue_threshold(ens, bias, event)
    if values is None:
        values = adjusted_members(ens, bias, event)
    n = values.size
    if kind == "frequency":
        return freq_odds(BernoulliPosterior(int(np.sum(values < threshold)), n), utility)
    if kind == "gaussian":
        if n < 2:
            raise InputError("gaussian forecaster needs at least 2 members")
        mu, sd = float(values.mean()), float(values.std())
        z = (threshold - mu) / sd if sd > 0 else math.copysign(math.inf, threshold - mu)
        if table is not None:
            if table.n != n or table.utility is not utility:
                raise InputError("odds table was built for a different member count or utility")
            return table.odds(z)
        if not math.isfinite(z):
            raise InputError("members are identical; use a tabulated forecaster to clamp")
        post = GaussianPosterior(mu, sd, n, prior or SigmaPrior())
        return gaussian_odds(post, z, utility)
    p = member_probability(values, threshold)
    floor = cap if kind == "capped" else 0.0
    return probabilistic_odds((p, 1.0 - p), floor=floor, utility=utility)


def challenge_client(bias, control_at_lead, threshold):
    """Challenger's probability of ``E``: ``Phi((threshold - control) / residual_std)``."""
    sd = bias.residual_std if hasattr(bias, "residual_std") else float(bias)
    d = threshold - control_at_lead
    if sd == 0.0:
        return 0.5 if d == 0 else float(d > 0)
    return normal_cdf(d / sd)
