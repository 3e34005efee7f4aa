"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line with its measured
quantities and runtime, then asserts the criterion at its stated tolerance.
"""
import math
import time

import numpy as np
import pytest

from oddsforecast.decisions import (
    InvestmentProblem,
    MitigationProblem,
    action_threshold,
    hedge_investment,
    hedge_outcomes,
    mitigate,
    mitigation_outcomes,
)
from oddsforecast.game import martingale_check
from oddsforecast.numerics import RngStream
from oddsforecast.odds import (
    BernoulliPosterior,
    GaussianPosterior,
    GenericPosterior,
    SigmaPrior,
    freq_linear_odds,
    freq_log_odds,
    gaussian_linear_odds,
    gaussian_log_odds,
    generic_log_odds,
)
from oddsforecast.pipeline import CampaignConfig, run_campaign

# Reference tables: x/n -> (q, q + q').
LINEAR_TABLE = {
    "0/1": (0.556, 1.411), "1/1": (0.855, 1.411),
    "0/2": (0.448, 1.347), "1/2": (0.687, 1.375), "2/2": (0.900, 1.347),
    "0/3": (0.378, 1.302), "1/3": (0.578, 1.336), "2/3": (0.758, 1.336), "3/3": (0.924, 1.302),
    "0/4": (0.329, 1.268), "1/4": (0.501, 1.303), "2/4": (0.656, 1.313), "3/4": (0.803, 1.303),
    "4/4": (0.939, 1.268),
}
LOG_TABLE = {
    "0/1": (0.382, 1.146), "1/1": (0.764, 1.146),
    "0/2": (0.277, 1.11), "1/2": (0.558, 1.116), "2/2": (0.832, 1.11),
    "0/3": (0.217, 1.087), "1/3": (0.438, 1.094), "2/3": (0.656, 1.094), "3/3": (0.87, 1.087),
    "0/4": (0.179, 1.073), "1/4": (0.359, 1.078), "2/4": (0.54, 1.079), "3/4": (0.719, 1.078),
    "4/4": (0.894, 1.073),
}
MARTINGALE_NS = (1, 2, 4, 8, 16)
RATE_NS = (16, 64, 256, 1024, 4096)
Z_GRID = np.round(np.arange(-4.0, 4.0 + 1e-9, 0.1), 10)

_gauss_cache = {}


def sub(rng, *path):
    for i in path:
        rng = rng.substream(i)
    return rng


def report(capsys, name, ok, detail, elapsed, limit=None):
    timing = f"{elapsed:.2f}s" + (f" (limit {limit:g}s)" if limit is not None else "")
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}; {timing}")


def table_errors(table, odds_fn):
    worst = 0.0
    for key, (q, s) in table.items():
        x, n = map(int, key.split("/"))
        o = odds_fn(BernoulliPosterior(x, n))
        worst = max(worst, abs(o.q[0] - q), abs(o.total - s))
    return worst


def gaussian_curve():
    """Linear and log Gaussian odds on Z_GRID, n_obs = 10, prior sigma exp(-sigma^2/2)."""
    if not _gauss_cache:
        t0 = time.perf_counter()
        post = GaussianPosterior(0.0, 1.0, 10, SigmaPrior("chi2"))
        _gauss_cache["linear"] = [gaussian_linear_odds(post, float(z)) for z in Z_GRID]
        _gauss_cache["log"] = [gaussian_log_odds(post, float(z)) for z in Z_GRID]
        _gauss_cache["elapsed"] = time.perf_counter() - t0
    return _gauss_cache


def test_linear_frequency_table(capsys):
    t0 = time.perf_counter()
    worst = table_errors(LINEAR_TABLE, freq_linear_odds)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-3 and elapsed < 5.0
    report(capsys, "Frequency odds table, linear (14 cells)", ok, f"max |error| = {worst:.2e} (tol 1e-3)",
           elapsed, 5)
    assert ok


def test_log_frequency_table_and_mc(capsys):
    t0 = time.perf_counter()
    worst = table_errors(LOG_TABLE, freq_log_odds)
    rng = RngStream(3)
    worst_z = 0.0
    for key in LOG_TABLE:
        x, n = map(int, key.split("/"))
        closed = freq_log_odds(BernoulliPosterior(x, n))
        mc = generic_log_odds(GenericPosterior.from_bernoulli(BernoulliPosterior(x, n)), 100_000,
                              sub(rng, n, x))
        for qi, ci, se in zip(mc.q, closed.q, mc.diagnostics["q_se"]):
            worst_z = max(worst_z, abs(qi - ci) / se)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-3 and worst_z <= 3.0
    report(capsys, "Frequency odds table, log (14 cells) + Monte Carlo path", ok,
           f"max |error| = {worst:.2e} (tol 1e-3), max MC deviation = {worst_z:.2f} SE (tol 3)", elapsed)
    assert ok


def test_martingale_suite(capsys):
    t0 = time.perf_counter()
    rng = RngStream(99)
    worst_z, cells, naive_cells, naive_pos = 0.0, 0, 0, 0
    for n in MARTINGALE_NS:
        for x in range(n + 1):
            post = BernoulliPosterior(x, n)
            for u, fn in (("linear", freq_linear_odds), ("log", freq_log_odds)):
                r = martingale_check(post, fn(post), u, 100_000, sub(rng, n, x, cells))
                worst_z = max(worst_z, abs(r.z_score))
                cells += 1
                for naive in (((x + 1) / (n + 2), (n - x + 1) / (n + 2)), (x / n, (n - x) / n)):
                    rn = martingale_check(post, naive, u, 100_000, sub(rng, n, x, cells, naive_cells))
                    naive_cells += 1
                    naive_pos += rn.favours_client(3)
    elapsed = time.perf_counter() - t0
    frac = naive_pos / naive_cells
    ok = worst_z <= 3.0 and frac >= 0.8 and elapsed < 120
    report(capsys, "Martingale suite", ok,
           f"{cells} engine cells, max |mean|/SE = {worst_z:.2f} (tol 3); naive odds favour client in "
           f"{naive_pos}/{naive_cells} = {frac:.0%} (need 80%)", elapsed, 120)
    assert ok


def test_asymptotic_rates(capsys):
    t0 = time.perf_counter()
    lin = np.array([(freq_linear_odds(BernoulliPosterior(n // 4, n)).total - 1) * math.sqrt(n) for n in RATE_NS])
    log = np.array([(freq_log_odds(BernoulliPosterior(n // 4, n)).total - 1) * n for n in RATE_NS])
    elapsed = time.perf_counter() - t0

    def variation(v):
        return (v.max() - v.min()) / v.mean()

    ok = variation(lin) < 0.25 and variation(log) < 0.25 and elapsed < 60
    report(capsys, "Asymptotic rates at x/n = 1/4", ok,
           f"(s-1)sqrt(n) varies {variation(lin):.1%}, (s-1)n varies {variation(log):.1%} (tol 25%)", elapsed, 60)
    assert ok


def test_gaussian_shape(capsys):
    g = gaussian_curve()
    q = np.array([o.q[0] for o in g["linear"]])
    s = np.array([o.total for o in g["linear"]])
    i0 = int(np.argmin(np.abs(Z_GRID)))
    dq = np.diff(q)
    monotone = bool(np.all(dq >= -1e-12))
    i_peak = int(np.argmax(q))
    half = abs(q[i0] - s[i0] / 2)
    window = (Z_GRID > 0.5) & (Z_GRID < 2.5)
    above = bool(np.any(q[window] > 1.0))
    converged = all(o.diagnostics["converged"] for o in g["linear"])
    ok = monotone and half <= 1e-3 and above and converged and g["elapsed"] < 300
    first = Z_GRID[window][np.argmax(q[window] > 1.0)] if above else float("nan")
    report(capsys, "Gaussian odds shape (n_obs = 10)", ok,
           f"nondecreasing={monotone} (max q = {q[i_peak]:.5f} at z = {Z_GRID[i_peak]:g}, "
           f"largest step down {max(0.0, -dq.min()):.1e}), |q - s/2| at 0 = {half:.1e}, q > 1 first at z = {first:g} in (0.5, 2.5), "
           f"quadrature converged={converged}", g["elapsed"], 300)
    assert ok


def test_log_excess_below_linear(capsys):
    t0 = time.perf_counter()
    worst, count = -math.inf, 0
    for n in range(1, 33):
        for x in range(n + 1):
            post = BernoulliPosterior(x, n)
            worst = max(worst, freq_log_odds(post).total - freq_linear_odds(post).total)
            count += 1
    g = gaussian_curve()
    gworst = max(lg.total - ln.total for lg, ln in zip(g["log"], g["linear"]))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and gworst <= 1e-6
    report(capsys, "Log excess <= linear excess", ok,
           f"{count} frequency cells max(s_log - s_lin) = {worst:.3f}; {Z_GRID.size} Gaussian points "
           f"max = {gworst:.3f} (tol 1e-6)", elapsed)
    assert ok


def test_decision_exactness(capsys):
    t0 = time.perf_counter()
    gen = RngStream(7).generator()
    worst_hedge, worst_mit, mismatches = 0.0, 0.0, 0
    for _ in range(1000):
        q = tuple(gen.uniform(0.05, 1.5, 2))
        r, rc = gen.uniform(-100, 100, 2)
        prob = InvestmentProblem(float(r), float(rc), q)
        a, b = hedge_outcomes(prob, hedge_investment(prob))
        worst_hedge = max(worst_hedge, abs(a - b) / max(1.0, abs(a)))

        L = float(gen.uniform(1, 1000))
        C, M = (float(v) for v in gen.uniform(0.01, 1.0, 2) * L)
        if M >= L:
            M = 0.5 * L
        mp = MitigationProblem(L, C, M, q)
        d = mitigate(mp)
        a, b = mitigation_outcomes(mp, d)
        worst_mit = max(worst_mit, abs(a - b) / max(1.0, abs(a)))
        # closed-form inequalities, written out independently of the library
        if C <= M:
            closed = q[0] > C / (L + C - M)
        else:
            closed = q[0] * L - (C - M) * q[1] > M
        mismatches += (d.take_action != closed) + (action_threshold(mp) != closed)
    elapsed = time.perf_counter() - t0
    ok = worst_hedge <= 1e-12 and worst_mit <= 1e-12 and mismatches == 0
    report(capsys, "Decision exactness (1000 instances each)", ok,
           f"hedge spread {worst_hedge:.1e}, mitigation spread {worst_mit:.1e} (tol 1e-12), "
           f"threshold mismatches {mismatches}", elapsed)
    assert ok


def test_campaign(capsys):
    t0 = time.perf_counter()
    cfg = CampaignConfig()
    res = run_campaign(cfg, RngStream(cfg.seed))
    elapsed = time.perf_counter() - t0
    zero = all(v == 0.0 for v in res.zero_sum().values())
    late = [d for d in cfg.lead_days if d >= 3]
    wins = sum(
        res.total("linear", "capped", d) >= max(res.total("linear", "frequency", d), res.total("linear", "gaussian", d))
        for d in late
    )
    lead1 = {k: res.mean_payout("linear", k, 1) for k in ("frequency", "gaussian")}
    in_band = all(-0.2 <= v <= 0.5 for v in lead1.values())
    log_wins = sum(
        res.total("log", "capped", d) >= max(res.total("log", "frequency", d), res.total("log", "gaussian", d))
        for d in late
    )
    ok = zero and wins > len(late) / 2 and in_band and elapsed < 600
    report(capsys, "Synthetic campaign (183 days, leads 1-10)", ok,
           f"zero-sum exact={zero}; linear capped total highest at {wins}/{len(late)} leads >= 3; "
           f"lead-1 mean payout frequency {lead1['frequency']:+.3f}, gaussian {lead1['gaussian']:+.3f} "
           f"(band [-0.2, 0.5]); info: log capped highest at {log_wins}/{len(late)}", elapsed, 600)
    assert ok
