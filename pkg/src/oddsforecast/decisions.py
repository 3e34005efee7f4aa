"""Hedging and loss mitigation with two-event odds.

The invested client uses ``q`` and ``q'`` as posted; nothing here normalizes
them into probabilities.
"""
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InputError
from .odds.types import OddsAssignment


def _two_odds(odds):
    if isinstance(odds, OddsAssignment):
        q = odds.q
    else:
        q = tuple(float(v) for v in odds)
    if len(q) != 2:
        raise InputError("decision problems need odds on exactly two events")
    if not (q[0] > 0 and q[1] > 0):
        raise InputError(f"odds must be positive, got {q}")
    return q


@dataclass(frozen=True)
class InvestmentProblem:
    """Investment returning ``r_on_event`` if E occurs and ``r_on_complement`` otherwise."""

    r_on_event: float
    r_on_complement: float
    odds: object

    def __post_init__(self):
        object.__setattr__(self, "odds", _two_odds(self.odds))


@dataclass(frozen=True)
class MitigationProblem:
    """Loss ``loss`` on E; an action costing ``action_cost`` on E' limits the loss on E to ``mitigated_loss``."""

    loss: float
    action_cost: float
    mitigated_loss: float
    odds: object

    def __post_init__(self):
        object.__setattr__(self, "odds", _two_odds(self.odds))
        if not (self.loss > 0 and self.action_cost > 0 and self.mitigated_loss > 0):
            raise InputError("loss, action cost and mitigated loss must all be positive")
        if self.loss <= self.mitigated_loss:
            raise InputError("mitigated loss must be smaller than the unmitigated loss")


class Hedge(NamedTuple):
    lam: float
    lam_prime: float
    guaranteed_return: float


class Mitigation(NamedTuple):
    take_action: bool
    bets: tuple
    fixed_loss: float


def hedge_investment(prob):
    """Bets ``(lambda on E, lambda' on E')`` that make the return outcome independent."""
    q, qc = prob.odds
    R, Rc = prob.r_on_event, prob.r_on_complement
    if R > Rc:
        return Hedge(0.0, qc * (R - Rc), (1.0 - qc) * R + qc * Rc)
    if R < Rc:
        return Hedge(q * (Rc - R), 0.0, q * R + (1.0 - q) * Rc)
    return Hedge(0.0, 0.0, R)


def realized_value(stake_base, bets, odds, on_event):
    """Realized value of a position with base outcome ``stake_base[0 or 1]`` plus bets."""
    q, qc = odds
    lam, lam_c = bets
    if on_event:
        return stake_base[0] + lam * (1.0 / q - 1.0) - lam_c
    return stake_base[1] - lam + lam_c * (1.0 / qc - 1.0)


def action_threshold(prob):
    """Closed-form rule: act when ``q > C/(L+C-M)`` (C < M) or ``qL - (C-M) q' > M`` (M < C)."""
    q, qc = prob.odds
    L, C, M = prob.loss, prob.action_cost, prob.mitigated_loss
    if C <= M:
        return q > C / (L + C - M)
    return q * L - (C - M) * qc > M


def mitigate(prob):
    """Cheapest fixed loss among: no action with a bet on E, or action hedged by a bet.

    Returns ``(take_action, bets, fixed_loss)`` where ``fixed_loss`` is negative
    (the realized value on either outcome) and ``bets`` are the stakes on
    ``(E, E')`` with the chosen course. ``C == M`` is handled as the ``C < M``
    branch with a zero hedge.
    """
    q, qc = prob.odds
    L, C, M = prob.loss, prob.action_cost, prob.mitigated_loss
    idle = Mitigation(False, (q * L, 0.0), -q * L)
    if C <= M:
        act = Mitigation(True, (q * (M - C), 0.0), -q * M - (1.0 - q) * C)
    else:
        act = Mitigation(True, (0.0, qc * (C - M)), -(1.0 - qc) * M - qc * C)
    return act if act.fixed_loss > idle.fixed_loss else idle


def mitigation_outcomes(prob, decision):
    """Realized values ``(on E, on E')`` of a mitigation decision including its bets."""
    base = (-prob.mitigated_loss, -prob.action_cost) if decision.take_action else (-prob.loss, 0.0)
    return (
        realized_value(base, decision.bets, prob.odds, True),
        realized_value(base, decision.bets, prob.odds, False),
    )


def hedge_outcomes(prob, hedge):
    base = (prob.r_on_event, prob.r_on_complement)
    bets = (hedge.lam, hedge.lam_prime)
    return realized_value(base, bets, prob.odds, True), realized_value(base, bets, prob.odds, False)
