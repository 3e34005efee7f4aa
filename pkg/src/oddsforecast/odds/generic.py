"""Odds for m events from any posterior that can be sampled on the simplex.

Both routes reuse one fixed set of posterior draws, so the objective is a
deterministic function of the odds.
"""
import itertools
import math

import numpy as np
from scipy import special as _sp

from .. import _kernels
from ..errors import InputError, NumericError
from ..numerics import minimize_scalar
from .types import GenericPosterior, OddsAssignment, Provenance, Utility

MIN_SAMPLES = 1000
ENDPOINT_EPS = 1e-9


def _draw(post, mc_samples, rng):
    if mc_samples < MIN_SAMPLES:
        raise InputError(f"mc_samples must be at least {MIN_SAMPLES}, got {mc_samples}")
    if not isinstance(post, GenericPosterior):
        raise InputError("expected a GenericPosterior")
    return post.sample(int(mc_samples), rng)


def generic_log_odds(post, mc_samples, rng):
    """Monte Carlo estimate of ``q_i = pi_bar_i * exp(alpha)``.

    ``pi_bar`` is the posterior mean, ``alpha = H_bar - sum(pi_bar ln pi_bar)`` with
    ``H_bar`` the posterior mean of ``sum(pi ln pi)``. Standard errors for
    ``alpha`` and each ``q_i`` come from the delta method and are stored in
    ``diagnostics``.
    """
    draws = _draw(post, mc_samples, rng)
    N, m = draws.shape
    pi_bar = draws.mean(axis=0)
    h = _sp.xlogy(draws, draws).sum(axis=1)
    h_bar = math.fsum(h) / N
    with np.errstate(divide="ignore"):
        log_pb = np.where(pi_bar > 0, np.log(pi_bar), 0.0)
    alpha = h_bar - float(np.sum(_sp.xlogy(pi_bar, pi_bar)))
    if np.all(draws == draws[0]) or -1e-12 < alpha < 0.0:
        # no posterior spread: the odds are the probabilities themselves
        alpha = 0.0
    growth = math.exp(alpha)
    q = pi_bar * growth

    # per-draw influence functions for the delta method
    infl_alpha = (h - h_bar) - (draws - pi_bar) @ (log_pb + 1.0)
    infl_q = growth * ((draws - pi_bar) + pi_bar[None, :] * infl_alpha[:, None])
    alpha_se = float(np.std(infl_alpha, ddof=1) / math.sqrt(N))
    q_se = tuple(float(v) for v in np.std(infl_q, axis=0, ddof=1) / math.sqrt(N))
    diag = {
        "pi_bar": tuple(float(v) for v in pi_bar),
        "h_bar": h_bar,
        "alpha": alpha,
        "alpha_se": alpha_se,
        "q_se": q_se,
        "total": growth,
        "mc_samples": N,
    }
    return OddsAssignment(tuple(float(v) for v in q), Utility.LOGARITHMIC, Provenance.GENERIC, diag)


def generic_linear_odds(post, mc_samples, rng, tol=1e-8, max_sweeps=200):
    """Smallest-total odds with zero expected gain for a unit-stake informed client.

    Writing ``q = s p`` with ``p`` on the simplex, the client bets on
    ``argmax_i pi_i / p_i`` and the zero-gain constraint fixes the scale exactly:
    ``s(p) = E[max_i pi_i / p_i]``. That expectation is convex in ``p``. It is
    minimized by Brent's method for two events and by cyclic pairwise transfers
    (each a Brent line search) for more, starting from the posterior mean.
    """
    draws = _draw(post, mc_samples, rng)
    N, m = draws.shape

    def objective(p):
        return _kernels.mean_max_ratio(draws, 1.0 / p)[0]

    if m == 2:
        t, s = minimize_scalar(
            lambda v: objective(np.array([v, 1.0 - v])), ENDPOINT_EPS, 1.0 - ENDPOINT_EPS, tol
        )
        p = np.array([t, 1.0 - t])
        sweeps = 1
    else:
        p = np.clip(draws.mean(axis=0), 1e-6, None)
        p /= p.sum()
        s = objective(p)
        for sweeps in range(1, max_sweeps + 1):
            start = s
            moved = 0.0
            for i, j in itertools.combinations(range(m), 2):
                pair = p[i] + p[j]

                def along(f, i=i, j=j, pair=pair):
                    trial = p.copy()
                    trial[i], trial[j] = f * pair, (1.0 - f) * pair
                    return objective(trial)

                f, val = minimize_scalar(along, ENDPOINT_EPS, 1.0 - ENDPOINT_EPS, tol)
                if val < s:
                    new_i = f * pair
                    moved = max(moved, abs(new_i - p[i]))
                    p[i], p[j] = new_i, pair - new_i
                    s = val
            if moved < tol or start - s < tol * 1e-3:
                break
        else:
            raise NumericError("pairwise search did not converge", sweeps=max_sweeps, p=p.tolist())
    mean, sd = _kernels.mean_max_ratio(draws, 1.0 / p)
    regions = np.bincount(_kernels.argmax_ratio(draws, 1.0 / p), minlength=m) / N
    diag = {
        "p": tuple(float(v) for v in p),
        "total": mean,
        "total_se": sd / math.sqrt(N),
        "constraint_se": sd / math.sqrt(N) / mean,
        "region_mass": tuple(float(v) for v in regions),
        "sweeps": sweeps,
        "mc_samples": N,
    }
    return OddsAssignment(tuple(p * mean), Utility.LINEAR, Provenance.GENERIC, diag)


def generic_odds(post, utility, mc_samples, rng, tol=1e-8):
    if Utility.parse(utility) is Utility.LINEAR:
        return generic_linear_odds(post, mc_samples, rng, tol)
    return generic_log_odds(post, mc_samples, rng)
