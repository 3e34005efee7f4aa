"""Betting campaign of forecasters against the ultimate-challenge client."""
import configparser
import csv
import io as _io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from ..errors import IngestionError, InputError
from ..odds import GaussianOddsTable, SigmaPrior, Utility
from .bias import fit_bias_model
from .forecast import (
    DEFAULT_CAP,
    FORECASTER_KINDS,
    ForecastEvent,
    adjusted_control,
    adjusted_members,
    challenge_client,
    forecaster_odds,
    issue_threshold,
)
from .io import format_timestamp, read_ensemble_csv, read_station_csv
from .series import Spline, epoch_hours, hour_of_day
from .synthetic import SyntheticScenario, generate

LOG_BET_FLOOR = 1e-12
ANALYSIS_LEAD_HOURS = 24.0


@dataclass(frozen=True)
class CampaignConfig:
    """Campaign settings; every field is a key in the ``[campaign]`` section of a config file.

    ``station_csv`` and ``ensemble_csv`` select user data; otherwise the
    synthetic generator runs with the ``scenario`` settings (keys of the
    ``[scenario]`` section).
    """

    lead_days: tuple = tuple(range(1, 11))
    forecasters: tuple = ("frequency", "gaussian", "capped")
    utilities: tuple = ("linear", "log")
    threshold_offset: float = -3.0
    cap: float = DEFAULT_CAP
    prior: str = "chi2"
    prior_scale: float = 1.0
    seed: int = 2005
    threads: int = 1
    station_csv: str | None = None
    ensemble_csv: str | None = None
    scenario: SyntheticScenario = field(default_factory=SyntheticScenario)

    def __post_init__(self):
        for k in self.forecasters:
            if k not in FORECASTER_KINDS:
                raise InputError(f"unknown forecaster {k!r}")
        object.__setattr__(self, "utilities", tuple(Utility.parse(u) for u in self.utilities))
        if not self.lead_days or min(self.lead_days) < 1:
            raise InputError("lead_days must be positive integers")
        if (self.station_csv is None) != (self.ensemble_csv is None):
            raise InputError("station_csv and ensemble_csv must be given together")
        if self.threads < 1:
            raise InputError("threads must be at least 1")

    def sigma_prior(self):
        return SigmaPrior(self.prior, scale=self.prior_scale)

    @classmethod
    def from_file(cls, path):
        cp = configparser.ConfigParser()
        if not cp.read(path, encoding="utf-8"):
            raise InputError(f"cannot read config {path}")
        return cls.from_parser(cp)

    @classmethod
    def from_string(cls, text):
        cp = configparser.ConfigParser()
        cp.read_string(text)
        return cls.from_parser(cp)

    @classmethod
    def from_parser(cls, cp):
        kw = {}
        if cp.has_section("campaign"):
            sec = cp["campaign"]
            known = {f.name for f in fields(cls)} - {"scenario"}
            for key in sec:
                if key not in known:
                    raise InputError(f"unknown campaign key {key!r}")
            for name in ("forecasters", "utilities"):
                if name in sec:
                    kw[name] = tuple(v.strip() for v in sec[name].split(",") if v.strip())
            if "lead_days" in sec:
                kw["lead_days"] = _parse_ints(sec["lead_days"])
            for name in ("threshold_offset", "cap", "prior_scale"):
                if name in sec:
                    kw[name] = sec.getfloat(name)
            for name in ("seed", "threads"):
                if name in sec:
                    kw[name] = sec.getint(name)
            for name in ("prior", "station_csv", "ensemble_csv"):
                if name in sec:
                    kw[name] = sec[name].strip()
        if cp.has_section("scenario"):
            types = {f.name: f.type for f in fields(SyntheticScenario)}
            skw = {}
            for key, raw in cp["scenario"].items():
                if key not in types:
                    raise InputError(f"unknown scenario key {key!r}")
                conv = {"int": int, "float": float, "str": str}[types[key] if isinstance(types[key], str) else types[key].__name__]
                skw[key] = conv(raw.strip())
            kw["scenario"] = SyntheticScenario(**skw)
        return cls(**kw)


def _parse_ints(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return tuple(out)


@dataclass(frozen=True)
class Bet:
    launch: np.datetime64
    lead_days: int
    utility: Utility
    forecaster: str
    threshold: float
    q: tuple
    challenger_p: float
    stakes: tuple
    occurred: bool
    client_payout: float
    forecaster_payout: float
    log10_growth: float


def payout_plot_transform(v):
    """Identity below one, ``1 + log10`` above; continuous at one."""
    a = np.asarray(v, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(a < 1.0, a, 1.0 + np.log10(np.maximum(a, 1.0)))
    return float(out) if out.ndim == 0 else out


def place_bet(q, p_c, occurred, utility):
    """Challenger's stakes ``(on E, on E')`` and the amount returned to them.

    Linear: a unit stake on the event with the larger ``p/q`` (``E`` on ties),
    so the client bets on ``E`` exactly when ``q/q' < p/(1-p)``. Logarithmic:
    the unit is split in proportion to the challenger's probabilities.
    """
    p = (p_c, 1.0 - p_c)
    if utility is Utility.LINEAR:
        ratio = [math.inf if qi == 0 else pi / qi for pi, qi in zip(p, q)]
        i = 0 if ratio[0] >= ratio[1] else 1
        stakes = (1.0, 0.0) if i == 0 else (0.0, 1.0)
    else:
        f = np.maximum(np.array(p), LOG_BET_FLOOR)
        f = f / f.sum()
        stakes = (float(f[0]), float(f[1]))
    o = 0 if occurred else 1
    if stakes[o] == 0:
        returned = 0.0
    elif q[o] == 0:
        returned = math.inf
    else:
        returned = stakes[o] / q[o]
    return stakes, returned


@dataclass
class CampaignResult:
    config: CampaignConfig
    bias: object
    bets: list

    def _select(self, utility, forecaster, lead=None):
        return [
            b for b in self.bets
            if b.utility is utility and b.forecaster == forecaster and (lead is None or b.lead_days == lead)
        ]

    def total(self, utility, forecaster, lead):
        """Client's total: payout for linear utility, log10 wealth growth for logarithmic."""
        utility = Utility.parse(utility)
        bets = self._select(utility, forecaster, lead)
        if utility is Utility.LINEAR:
            return math.fsum(b.client_payout for b in bets)
        return math.fsum(b.log10_growth for b in bets)

    def mean_payout(self, utility, forecaster, lead):
        bets = self._select(Utility.parse(utility), forecaster, lead)
        return math.fsum(b.client_payout for b in bets) / len(bets)

    def zero_sum(self):
        """Per forecaster and utility: client total plus forecaster total (exactly zero)."""
        out = {}
        for u in self.config.utilities:
            for k in self.config.forecasters:
                bets = self._select(u, k)
                out[(u.value, k)] = math.fsum(b.client_payout for b in bets) + math.fsum(
                    b.forecaster_payout for b in bets
                )
        return out

    def columns(self):
        return [f"{u.value}_{k}" for u in self.config.utilities for k in self.config.forecasters]

    def table(self):
        rows = []
        for lead in self.config.lead_days:
            rows.append(
                [lead] + [self.total(u, k, lead) for u in self.config.utilities for k in self.config.forecasters]
            )
        return rows

    def table_csv(self):
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lead_days"] + self.columns())
        for row in self.table():
            w.writerow([row[0]] + [repr(float(v)) for v in row[1:]])
        return buf.getvalue()

    def payout_series_csv(self, utility="linear", lead=None):
        """Per-bet client payouts with the plot transform, one row per launch."""
        utility = Utility.parse(utility)
        lead = self.config.lead_days[0] if lead is None else lead
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        ks = self.config.forecasters
        w.writerow(["launch"] + [f"{k}_payout" for k in ks] + [f"{k}_plot" for k in ks])
        series = {k: self._select(utility, k, lead) for k in ks}
        for i, b in enumerate(series[ks[0]]):
            vals = [series[k][i].client_payout for k in ks]
            w.writerow(
                [format_timestamp(b.launch)]
                + [repr(v) for v in vals]
                + [repr(float(payout_plot_transform(v))) for v in vals]
            )
        return buf.getvalue()


def analysis_spline(forecasts):
    """Spline of control temperatures over the first day of each launch, in epoch hours."""
    t, y = [], []
    for ens in forecasts:
        m = ens.lead_hours < ANALYSIS_LEAD_HOURS
        t.append(epoch_hours(ens.valid_times(ens.lead_hours[m])))
        y.append(ens.control[m])
    t = np.concatenate(t)
    y = np.concatenate(y)
    order = np.argsort(t, kind="stable")
    t, y = t[order], y[order]
    keep = np.concatenate([[True], np.diff(t) > 0])
    return Spline(t[keep], y[keep])


def _station_min(station_spline, station_hours, ens, event):
    hours = epoch_hours(ens.valid_times(event.window_hours()))
    lo, hi = station_spline.domain
    if hours[0] < lo or hours[-1] > hi:
        raise IngestionError(
            "station series does not cover event window "
            f"{format_timestamp(ens.valid_times(event.window_hours()[:1])[0])} to "
            f"{format_timestamp(ens.valid_times(event.window_hours()[-1:])[0])}"
        )
    return float(event.aggregate(station_spline(hours)))


def load_data(config, rng):
    if config.station_csv is not None:
        return read_station_csv(config.station_csv), read_ensemble_csv(config.ensemble_csv)
    data = generate(config.scenario, rng.substream(0))
    return data.station, data.forecasts


def run_campaign(config, rng, station=None, forecasts=None, tables=None):
    """Play every launch and lead time against the challenger and collect the bets.

    The bias model is fitted once on all launches before any bet is placed.
    Launches are then independent and run on ``config.threads`` threads.
    """
    if station is None or forecasts is None:
        station, forecasts = load_data(config, rng)
    if not forecasts:
        raise IngestionError("no ensemble launches")
    bias = fit_bias_model(analysis_spline(forecasts), station)
    st_spline = Spline(station.hours, station.temperatures)
    n_members = {ens.n_members for ens in forecasts}
    if tables is None:
        tables = {}
    if "gaussian" in config.forecasters:
        for u in config.utilities:
            for n in n_members:
                if (n, u) not in tables:
                    tables[(n, u)] = GaussianOddsTable.build(n, config.sigma_prior(), u)

    def one_launch(ens):
        launch_hour = float(hour_of_day(np.array([ens.launch_time]))[0])
        out = []
        for d in config.lead_days:
            event = ForecastEvent.daily_min(d, launch_hour, config.threshold_offset)
            if event.lead_time > ens.lead_hours[-1]:
                raise IngestionError(
                    f"launch {format_timestamp(ens.launch_time)} ends at lead {ens.lead_hours[-1]} h, "
                    f"lead day {d} needs {event.lead_time} h"
                )
            thr = issue_threshold(ens, bias, event)
            values = adjusted_members(ens, bias, event)
            p_c = challenge_client(bias, adjusted_control(ens, bias, event), thr)
            occurred = _station_min(st_spline, None, ens, event) < thr
            for u in config.utilities:
                for k in config.forecasters:
                    odds = forecaster_odds(
                        ens, bias, event, k, u, cap=config.cap,
                        table=tables.get((ens.n_members, u)), threshold=thr, values=values,
                    )
                    stakes, returned = place_bet(odds.q, p_c, occurred, u)
                    staked = math.fsum(stakes)
                    growth = math.log10(returned) if returned > 0 else -math.inf
                    out.append(
                        Bet(ens.launch_time, d, u, k, thr, odds.q, p_c, stakes, occurred,
                            returned - staked, staked - returned, growth)
                    )
        return out

    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            chunks = list(pool.map(one_launch, forecasts))
    else:
        chunks = [one_launch(ens) for ens in forecasts]
    return CampaignResult(config, bias, [b for c in chunks for b in c])


__all__ = [
    "Bet",
    "CampaignConfig",
    "CampaignResult",
    "analysis_spline",
    "payout_plot_transform",
    "place_bet",
    "run_campaign",
]
