"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 numeric non-convergence.
"""
import argparse
import csv
import io
import sys
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

import numpy as np

from . import decisions, game
from .errors import InputError, NumericError
from .numerics import RngStream, normal_cdf
from .odds import (
    BernoulliPosterior,
    GaussianPosterior,
    GenericPosterior,
    SigmaPrior,
    Utility,
    freq_odds,
    gaussian_odds,
    generic_odds,
)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


def round3(v):
    """Three decimals, half away from zero, after discarding float noise below 1e-9."""
    return str(Decimal(repr(round(float(v), 9))).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def emit(header, rows, fmt, out, table_fmt=None):
    """Write rows as an aligned table or as lossless CSV/TSV (floats via ``repr``)."""
    if fmt in ("csv", "tsv"):
        w = csv.writer(out, delimiter="," if fmt == "csv" else "\t", lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
        return
    fmt_cell = table_fmt or (lambda v: f"{v:.6g}" if isinstance(v, (float, np.floating)) else str(v))
    cells = [list(header)] + [[fmt_cell(v) for v in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    for c in cells:
        out.write("  ".join(s.rjust(wd) for s, wd in zip(c, widths)).rstrip() + "\n")


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from exc


def _prior(args):
    return SigmaPrior(args.prior, scale=args.prior_scale)


def fig_rows(which, n_max):
    if n_max < 1:
        raise InputError("n_max must be at least 1")
    utility = Utility.LINEAR if which == "fig1" else Utility.LOGARITHMIC
    rows = []
    for n in range(1, n_max + 1):
        for x in range(n + 1):
            o = freq_odds(BernoulliPosterior(x, n), utility)
            rows.append((f"{x}/{n}", o.q[0], o.total))
    return rows


def table_fig(which, n_max, fmt="table", out=None):
    out = out or sys.stdout
    rows = fig_rows(which, n_max)
    emit(("x/n", "q", "q+q'"), rows, fmt, out, table_fmt=lambda v: v if isinstance(v, str) else round3(v))


def curve_rows(utility, n_obs, prior, z_grid):
    post = GaussianPosterior(0.0, 1.0, n_obs, prior)
    rows = []
    for z in z_grid:
        o = gaussian_odds(post, float(z), utility)
        rows.append((float(z), o.q[0], o.total, normal_cdf(float(z))))
    return rows


def _cmd_odds_freq(args, out):
    o = freq_odds(BernoulliPosterior(args.x, args.n), args.utility, tol=args.tol)
    emit(("q", "q_prime", "total"), [(o.q[0], o.q[1], o.total)], args.format, out)


def _cmd_odds_gaussian(args, out):
    post = GaussianPosterior(0.0, 1.0, args.n_obs, _prior(args))
    o = gaussian_odds(post, args.z, args.utility, tol=args.tol)
    emit(
        ("z", "q", "q_prime", "total", "converged"),
        [(args.z, o.q[0], o.q[1], o.total, str(o.diagnostics.get("converged", True)).lower())],
        args.format,
        out,
    )


def _cmd_odds_generic(args, out):
    if args.dirichlet is not None:
        post = GenericPosterior.dirichlet(_floats(args.dirichlet))
    elif args.x is not None and args.n is not None:
        post = GenericPosterior.from_bernoulli(BernoulliPosterior(args.x, args.n))
    else:
        raise InputError("odds-generic needs --dirichlet or both --x and --n")
    o = generic_odds(post, args.utility, args.mc_samples, RngStream(args.seed), tol=args.tol)
    rows = [(i, qi) for i, qi in enumerate(o.q)]
    emit(("event", "q"), rows, args.format, out)
    if args.format == "table":
        out.write(f"total  {o.total:.6g}\n")


def _cmd_table(which):
    def run(args, out):
        table_fig(which, args.n_max, args.format, out)
    return run


def _cmd_curve(args, out):
    if args.z_step <= 0 or args.z_max < args.z_min:
        raise InputError("need z_step > 0 and z_max >= z_min")
    k = int(round((args.z_max - args.z_min) / args.z_step))
    grid = np.round(args.z_min + args.z_step * np.arange(k + 1), 10)
    rows = curve_rows(args.utility, args.n_obs, _prior(args), grid)
    fmt = "csv" if args.format == "table" else args.format
    emit(("z", "q", "s", "normal_cdf"), rows, fmt, out)


def _cmd_simulate(args, out):
    q = _floats(args.q)
    pi = _floats(args.pi)
    kind = args.strategy
    strat = game.ClientStrategy(
        kind,
        pi_true=pi if kind in ("informed_linear", "kelly") else None,
        p_bets=_floats(args.bets) if kind == "custom" else None,
    )
    traj = game.simulate_wealth(q, strat, pi, args.rounds, RngStream(args.seed), utility=args.utility)
    inc = traj.increments()
    final = traj.log_w[-1] if traj.log_w is not None else traj.w[-1]
    emit(
        ("strategy", "utility", "rounds", "final", "mean_increment"),
        [(kind, traj.utility.value, traj.rounds, float(final), float(inc.mean()))],
        args.format,
        out,
    )


def _cmd_hedge(args, out):
    prob = decisions.InvestmentProblem(args.r_event, args.r_complement, (args.q, args.q_prime))
    h = decisions.hedge_investment(prob)
    emit(("bet_on_E", "bet_on_E_prime", "guaranteed_return"), [tuple(h)], args.format, out)


def _cmd_mitigate(args, out):
    prob = decisions.MitigationProblem(args.loss, args.cost, args.mitigated_loss, (args.q, args.q_prime))
    d = decisions.mitigate(prob)
    emit(
        ("take_action", "bet_on_E", "bet_on_E_prime", "fixed_loss"),
        [(str(d.take_action).lower(), d.bets[0], d.bets[1], d.fixed_loss)],
        args.format,
        out,
    )


def _cmd_campaign(args, out):
    from .pipeline import CampaignConfig, run_campaign

    cfg = CampaignConfig.from_file(args.config) if args.config else CampaignConfig()
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.threads is not None:
        over["threads"] = args.threads
    if args.cap is not None:
        over["cap"] = args.cap
    if over:
        from dataclasses import replace
        cfg = replace(cfg, **over)
    res = run_campaign(cfg, RngStream(cfg.seed))
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "payout_table.csv").write_text(res.table_csv(), encoding="utf-8")
        for u in cfg.utilities:
            for lead in cfg.lead_days:
                (d / f"payout_series_{u.value}_lead{lead}.csv").write_text(
                    res.payout_series_csv(u, lead), encoding="utf-8"
                )
    emit(["lead_days"] + res.columns(), res.table(), args.format, out,
         table_fmt=lambda v: f"{v:.3g}" if isinstance(v, float) else str(v))


def build_parser():
    p = argparse.ArgumentParser(prog="oddsforecast", description="Non-probabilistic odds forecasts.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, utility=True):
        sp.add_argument("--format", choices=("table", "csv", "tsv"), default="table")
        sp.add_argument("--threads", type=int, default=None, help="worker threads where supported")
        if utility:
            sp.add_argument("--utility", type=Utility.parse, default=Utility.LINEAR,
                            help="linear or log")
        return sp

    def gaussian_flags(sp):
        sp.add_argument("--n-obs", type=int, default=10)
        sp.add_argument("--prior", choices=("chi2", "halfnormal"), default="chi2")
        sp.add_argument("--prior-scale", type=float, default=1.0)
        sp.add_argument("--tol", type=float, default=1e-8)

    sp = common(sub.add_parser("odds-freq", help="odds from a frequency x of n"))
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.set_defaults(func=_cmd_odds_freq)

    sp = common(sub.add_parser("odds-gaussian", help="odds on Z <= z for a Gaussian sample"))
    sp.add_argument("--z", type=float, required=True)
    gaussian_flags(sp)
    sp.set_defaults(func=_cmd_odds_gaussian)

    sp = common(sub.add_parser("odds-generic", help="Monte Carlo odds for a sampled posterior"))
    sp.add_argument("--dirichlet", help="comma-separated Dirichlet concentrations")
    sp.add_argument("--x", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--mc-samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=_cmd_odds_generic)

    for name, which in (("table-fig1", "fig1"), ("table-fig3", "fig3")):
        sp = common(sub.add_parser(name, help=f"frequency odds table ({which})"), utility=False)
        sp.add_argument("--n-max", type=int, default=4)
        sp.set_defaults(func=_cmd_table(which))

    sp = common(sub.add_parser("curve-gaussian", help="Gaussian odds curve as CSV (z, q, s, normal_cdf)"))
    gaussian_flags(sp)
    sp.add_argument("--z-min", type=float, default=-4.0)
    sp.add_argument("--z-max", type=float, default=4.0)
    sp.add_argument("--z-step", type=float, default=0.25)
    sp.set_defaults(func=_cmd_curve)

    sp = common(sub.add_parser("simulate", help="simulate client wealth against posted odds"))
    sp.add_argument("--q", required=True, help="comma-separated odds")
    sp.add_argument("--pi", required=True, help="Nature's probabilities")
    sp.add_argument("--strategy", choices=game.STRATEGIES, default="informed_linear")
    sp.add_argument("--bets", help="custom strategy proportions")
    sp.add_argument("--rounds", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=_cmd_simulate)

    sp = common(sub.add_parser("hedge", help="hedge a two-outcome investment"), utility=False)
    sp.add_argument("--r-event", type=float, required=True)
    sp.add_argument("--r-complement", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--q-prime", type=float, required=True)
    sp.set_defaults(func=_cmd_hedge)

    sp = common(sub.add_parser("mitigate", help="loss mitigation decision"), utility=False)
    sp.add_argument("--loss", type=float, required=True)
    sp.add_argument("--cost", type=float, required=True)
    sp.add_argument("--mitigated-loss", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--q-prime", type=float, required=True)
    sp.set_defaults(func=_cmd_mitigate)

    sp = common(sub.add_parser("campaign", help="forecaster campaign against the challenge client"),
                utility=False)
    sp.add_argument("--config", help="key-value campaign config file")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--cap", type=float)
    sp.add_argument("--out-dir", help="directory for the payout table and payout series CSVs")
    sp.set_defaults(func=_cmd_campaign)
    return p


def main(argv=None, out=None):
    """Entry point; returns the exit code."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def run(argv=None):
    """Run and capture stdout; returns ``(exit_code, text)``."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
