"""The Forecaster-Client-Nature betting game.

Odds are fixed before any bet or outcome is drawn; nothing in this module
feeds the client's bets back to the forecaster.
"""
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import special as _sp

from . import _kernels
from .errors import InputError
from .numerics import RngStream
from .odds.types import OddsAssignment, Utility, check_simplex, event_prob_sampler

LOG_BET_FLOOR = 1e-12
MIN_REPLICATES = 10_000
STRATEGIES = ("minimax", "informed_linear", "kelly", "custom")


def _odds_array(q):
    if isinstance(q, OddsAssignment):
        return q.as_array()
    arr = np.asarray(q, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2 or np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise InputError(f"invalid odds {q!r}")
    return arr


class GameMatrix:
    """Payout to the client of a unit bet on event ``i`` when event ``j`` occurs:
    ``G[i, j] = delta_ij / q_i - 1``."""

    def __init__(self, q):
        self.q = _odds_array(q)

    @property
    def m(self):
        return self.q.size

    def payout(self, bet, outcome):
        if bet != outcome:
            return -1.0
        return math.inf if self.q[bet] == 0 else 1.0 / self.q[bet] - 1.0

    @property
    def matrix(self):
        with np.errstate(divide="ignore"):
            return np.diag(1.0 / self.q) - 1.0

    def expected_payout(self, p_bets, pi_nature):
        """Average payout ``sum_i pi_i p_i / q_i - 1`` of a client choosing ``i`` w.p. ``p_i``."""
        p = np.asarray(p_bets, dtype=np.float64)
        pi = np.asarray(pi_nature, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p * pi > 0, p * pi / self.q, 0.0)
        return float(terms.sum()) - 1.0


def minimax_strategy(q):
    """Client's minimax mix ``p*_i = q_i / sum(q)`` and guaranteed average ``1/sum(q) - 1``."""
    arr = _odds_array(q)
    if np.any(arr <= 0):
        raise InputError("minimax strategy needs strictly positive odds")
    total = math.fsum(arr)
    return arr / total, 1.0 / total - 1.0


def informed_linear_bet(q, pi_true):
    """Event maximizing ``pi_i / q_i`` (lowest index on ties)."""
    arr = _odds_array(q)
    pi = check_simplex(pi_true)
    if pi.size != arr.size:
        raise InputError("odds and probabilities have different lengths")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(pi > 0, pi / arr, 0.0)
    return int(np.argmax(ratio))


def informed_expected_payout(q, pi_true):
    """``max_i pi_i / q_i - 1``: the informed client's average payout per unit bet."""
    arr = _odds_array(q)
    pi = check_simplex(pi_true)
    i = informed_linear_bet(arr, pi)
    if arr[i] == 0:
        return math.inf
    return float(pi[i] / arr[i]) - 1.0


def kelly_growth(q, p_bets, pi_true):
    """Expected log-growth ``sum_i pi_i ln(p_i / q_i)`` of staking all wealth in proportions ``p``.

    Returns ``-inf`` when a positive-probability event receives no stake.
    """
    arr = _odds_array(q)
    p = check_simplex(p_bets)
    pi = check_simplex(pi_true)
    total = 0.0
    for pi_i, p_i, q_i in zip(pi, p, arr):
        if pi_i == 0:
            continue
        if p_i == 0:
            return -math.inf
        if q_i == 0:
            return math.inf
        total += pi_i * math.log(p_i / q_i)
    return total


@dataclass(frozen=True)
class ClientStrategy:
    kind: str = "informed_linear"
    pi_true: tuple | None = None
    p_bets: tuple | None = None

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise InputError(f"strategy must be one of {STRATEGIES}, got {self.kind!r}")
        if self.kind in ("informed_linear", "kelly"):
            if self.pi_true is None:
                raise InputError(f"{self.kind} strategy needs pi_true")
            check_simplex(self.pi_true)
        if self.kind == "custom":
            if self.p_bets is None:
                raise InputError("custom strategy needs p_bets")
            check_simplex(self.p_bets)


@dataclass
class WealthTrajectory:
    """Client wealth ``W_0 .. W_n``; for logarithmic play ``log_w`` carries the exact log path."""

    w: np.ndarray
    utility: Utility
    outcomes: np.ndarray = field(repr=False)
    log_w: np.ndarray | None = field(default=None, repr=False)

    @property
    def rounds(self):
        return self.outcomes.size

    def increments(self):
        if self.utility is Utility.LOGARITHMIC:
            return np.diff(self.log_w)
        return np.diff(self.w)


def _floored(p):
    p = np.maximum(np.asarray(p, dtype=np.float64), LOG_BET_FLOOR)
    return p / p.sum()


def simulate_wealth(q, strat, pi_nature, rounds, rng, utility=None, w0=None):
    """Play ``rounds`` independent rounds against Nature drawing from ``pi_nature``.

    Linear utility: the client stakes one unit per round (minimax picks an event at
    random from ``p*``, the informed client picks ``argmax pi/q``, a custom client
    splits the unit by ``p_bets``); wealth moves by the game-matrix payout.
    Logarithmic utility: the entire wealth is staked in proportions (``p*``,
    ``pi_true`` or ``p_bets``, floored at 1e-12 and renormalized) and multiplies
    by ``p_o / q_o`` when event ``o`` occurs. The Kelly strategy always plays
    logarithmically.
    """
    arr = _odds_array(q)
    pi = check_simplex(pi_nature)
    m = arr.size
    if pi.size != m:
        raise InputError("odds and Nature's probabilities have different lengths")
    rounds = int(rounds)
    if rounds < 1:
        raise InputError("rounds must be at least 1")
    if np.any(arr <= 0):
        raise InputError("simulation needs strictly positive odds")
    if utility is None:
        utility = q.utility if isinstance(q, OddsAssignment) else Utility.LINEAR
    utility = Utility.parse(utility)
    if strat.kind == "kelly":
        utility = Utility.LOGARITHMIC

    gen = rng.generator()
    cum = np.cumsum(pi)
    cum[-1] = 1.0
    outcomes = np.searchsorted(cum, gen.random(rounds), side="right").astype(np.int64)
    outcomes = np.minimum(outcomes, m - 1)

    if utility is Utility.LINEAR:
        if strat.kind == "minimax":
            p_star, _ = minimax_strategy(arr)
            pc = np.cumsum(p_star)
            pc[-1] = 1.0
            picks = np.minimum(np.searchsorted(pc, gen.random(rounds), side="right"), m - 1)
            bets = np.zeros((rounds, m))
            bets[np.arange(rounds), picks] = 1.0
        elif strat.kind in ("informed_linear", "kelly"):
            bets = np.zeros((rounds, m))
            bets[:, informed_linear_bet(arr, strat.pi_true)] = 1.0
        else:
            bets = np.tile(np.asarray(strat.p_bets, dtype=np.float64), (rounds, 1))
        start = 0.0 if w0 is None else float(w0)
        w = _kernels.wealth_path(outcomes, bets, 1.0 / arr, start, False)
        return WealthTrajectory(w, utility, outcomes)

    if strat.kind == "minimax":
        frac = minimax_strategy(arr)[0]
    elif strat.kind in ("informed_linear", "kelly"):
        frac = _floored(strat.pi_true)
    else:
        frac = _floored(strat.p_bets)
    start = 1.0 if w0 is None else float(w0)
    if not start > 0:
        raise InputError("logarithmic play needs positive initial wealth")
    bets = np.broadcast_to(frac, (rounds, m))
    log_w = _kernels.wealth_path(outcomes, np.ascontiguousarray(bets), 1.0 / arr, start, True)
    with np.errstate(over="ignore", under="ignore"):
        w = np.exp(log_w)
    return WealthTrajectory(w, utility, outcomes, log_w)


class MartingaleResult(NamedTuple):
    mean_client_gain: float
    std_error: float

    @property
    def z_score(self):
        if math.isinf(self.mean_client_gain):
            return math.copysign(math.inf, self.mean_client_gain)
        if self.std_error == 0:
            return 0.0 if self.mean_client_gain == 0 else math.copysign(math.inf, self.mean_client_gain)
        return self.mean_client_gain / self.std_error

    def is_fair(self, k=3.0):
        return abs(self.mean_client_gain) <= k * self.std_error

    def favours_client(self, k=3.0):
        return self.z_score >= k


def client_gains(draws, q, utility):
    """Per-draw expected gain of a fully informed client: ``V(pi, q)`` or ``G(pi, q)``."""
    arr = _odds_array(q)
    draws = np.asarray(draws, dtype=np.float64)
    utility = Utility.parse(utility)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(draws > 0, draws / arr, 0.0)
    if utility is Utility.LINEAR:
        return ratio.max(axis=1) - 1.0
    with np.errstate(divide="ignore"):
        return np.where(draws > 0, draws * np.log(ratio), 0.0).sum(axis=1)


def martingale_check(post, q, utility, replicates, rng, z=None):
    """Posterior-averaged gain of a client who knows Nature's probabilities.

    Draws ``pi`` from the posterior and averages ``V(pi, q) = max_i pi_i/q_i - 1``
    (linear) or ``G(pi, q) = sum_i pi_i ln(pi_i/q_i)`` (logarithmic). Odds built
    for this posterior make the client's (log-)wealth a martingale, so the mean
    should be zero within sampling error. ``z`` is the standardized threshold
    needed for a Gaussian posterior.
    """
    replicates = int(replicates)
    if replicates < MIN_REPLICATES:
        raise InputError(f"replicates must be at least {MIN_REPLICATES}")
    draws = event_prob_sampler(post, z)(replicates, rng)
    arr = _odds_array(q)
    if draws.shape[1] != arr.size:
        raise InputError("odds and posterior have different numbers of events")
    gains = client_gains(draws, arr, utility)
    if not np.all(np.isfinite(gains)):
        return MartingaleResult(math.inf, math.nan)
    mean = math.fsum(gains) / replicates
    se = float(np.std(gains, ddof=1)) / math.sqrt(replicates)
    return MartingaleResult(mean, se)


__all__ = [
    "ClientStrategy",
    "GameMatrix",
    "MartingaleResult",
    "RngStream",
    "WealthTrajectory",
    "client_gains",
    "informed_expected_payout",
    "informed_linear_bet",
    "kelly_growth",
    "martingale_check",
    "minimax_strategy",
    "simulate_wealth",
]
