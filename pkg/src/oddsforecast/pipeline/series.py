"""Station and ensemble time series, and their spline interpolants."""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from ..errors import DomainError, IngestionError, InputError

SECONDS_PER_HOUR = 3600.0


def to_datetime64(value):
    """Coerce a timestamp (string, datetime, datetime64) to ``datetime64[s]``."""
    if isinstance(value, str):
        value = value.strip()
        if value.endswith("Z"):
            value = value[:-1]
    try:
        return np.datetime64(value, "s")
    except (ValueError, TypeError) as exc:
        raise IngestionError(f"unparseable timestamp {value!r}") from exc


def epoch_hours(times):
    """Hours since 1970-01-01T00:00Z."""
    t = np.asarray(times, dtype="datetime64[s]")
    return t.astype(np.int64) / SECONDS_PER_HOUR


def hour_of_day(times):
    t = np.asarray(times, dtype="datetime64[s]")
    return (t.astype(np.int64) % 86400) / SECONDS_PER_HOUR


class Spline:
    """Natural cubic spline through ``(t, y)`` that refuses to extrapolate.

    ``y`` may stack several series along leading axes.
    """

    def __init__(self, t, y):
        t = np.asarray(t, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if t.ndim != 1 or y.ndim < 1 or y.shape[-1] != t.size:
            raise InputError("spline values must have the knots along their last axis")
        if t.size < 4:
            raise InputError(f"a cubic spline needs at least 4 knots, got {t.size}")
        if not np.all(np.diff(t) > 0):
            raise InputError("spline knots must be strictly increasing")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(y))):
            raise InputError("spline knots and values must be finite")
        self.t = t
        self.y = y
        self._cs = CubicSpline(t, y, axis=-1, bc_type="natural", extrapolate=False)

    @property
    def domain(self):
        return float(self.t[0]), float(self.t[-1])

    def __call__(self, x):
        xa = np.asarray(x, dtype=np.float64)
        lo, hi = self.domain
        if np.any(xa < lo) or np.any(xa > hi) or np.any(np.isnan(xa)):
            bad = xa[(xa < lo) | (xa > hi) | np.isnan(xa)]
            raise DomainError(f"spline query {bad.ravel()[0]!r} outside knot range [{lo}, {hi}]")
        out = self._cs(xa)
        return float(out) if out.ndim == 0 else out


def fit_spline(series, values=None):
    """Natural cubic spline of a member series.

    ``series`` is either a :class:`StationSeries` (knots in epoch hours) or a
    sequence of knot positions with ``values`` alongside.
    """
    if isinstance(series, StationSeries):
        return Spline(series.hours, series.temperatures)
    if values is None:
        pairs = np.asarray(series, dtype=np.float64)
        return Spline(pairs[:, 0], pairs[:, 1])
    return Spline(series, values)


@dataclass(frozen=True)
class StationSeries:
    """Observed station temperature at strictly increasing UTC timestamps."""

    times: np.ndarray
    temperatures: np.ndarray

    def __post_init__(self):
        t = np.asarray([to_datetime64(v) for v in self.times] if not isinstance(self.times, np.ndarray)
                       else self.times, dtype="datetime64[s]")
        y = np.asarray(self.temperatures, dtype=np.float64)
        if t.shape != y.shape or t.ndim != 1:
            raise InputError("station times and temperatures must be 1-D of equal length")
        if t.size and not np.all(np.diff(t.astype(np.int64)) > 0):
            i = int(np.argmin(np.diff(t.astype(np.int64)) > 0))
            raise IngestionError(f"station timestamps not strictly increasing at {t[i]} -> {t[i + 1]}")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "temperatures", y)

    def __len__(self):
        return self.times.size

    @property
    def hours(self):
        return epoch_hours(self.times)

    @property
    def hour_of_day(self):
        return hour_of_day(self.times)

    def window(self, start, end):
        t = self.times
        mask = (t >= np.datetime64(start, "s")) & (t <= np.datetime64(end, "s"))
        return StationSeries(t[mask], self.temperatures[mask])


@dataclass(frozen=True)
class EnsembleForecast:
    """One ensemble launch: member and control temperatures on a shared lead-hour grid."""

    launch_time: np.datetime64
    lead_hours: np.ndarray
    members: np.ndarray
    control: np.ndarray
    member_ids: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "launch_time", to_datetime64(self.launch_time))
        lead = np.asarray(self.lead_hours, dtype=np.float64)
        mem = np.atleast_2d(np.asarray(self.members, dtype=np.float64))
        ctrl = np.asarray(self.control, dtype=np.float64)
        if lead.ndim != 1 or not np.all(np.diff(lead) > 0):
            raise InputError("lead hours must be strictly increasing")
        if mem.shape[1] != lead.size or ctrl.shape != lead.shape:
            raise IngestionError(
                f"ensemble launched {self.launch_time}: members do not share the lead-time grid"
            )
        if mem.shape[0] < 2:
            raise InputError("an ensemble needs at least 2 members")
        ids = tuple(self.member_ids) or tuple(str(i) for i in range(mem.shape[0]))
        if len(ids) != mem.shape[0]:
            raise InputError("member_ids length does not match members")
        object.__setattr__(self, "lead_hours", lead)
        object.__setattr__(self, "members", mem)
        object.__setattr__(self, "control", ctrl)
        object.__setattr__(self, "member_ids", ids)

    @property
    def n_members(self):
        return self.members.shape[0]

    def valid_times(self, lead_hours=None):
        lead = self.lead_hours if lead_hours is None else np.asarray(lead_hours, dtype=np.float64)
        return self.launch_time + np.round(lead * SECONDS_PER_HOUR).astype("timedelta64[s]")

    @cached_property
    def members_spline(self):
        """All members splined together; evaluates to shape ``(n_members, len(x))``."""
        return Spline(self.lead_hours, self.members)

    def member_spline(self, i):
        return Spline(self.lead_hours, self.members[i])

    @cached_property
    def control_spline(self):
        return Spline(self.lead_hours, self.control)
