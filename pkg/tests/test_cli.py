import csv
import io

import numpy as np
import pytest

from oddsforecast import cli
from oddsforecast.errors import NumericError



def parse(text, delimiter=","):
    return list(csv.reader(io.StringIO(text), delimiter=delimiter))


def test_linear_table():
    code, text = cli.run(["table-fig1", "--n-max", "4"])
    assert code == 0
    rows = [line.split() for line in text.strip().splitlines()]
    assert rows[0] == ["x/n", "q", "q+q'"]
    body = {r[0]: (float(r[1]), float(r[2])) for r in rows[1:]}
    assert len(body) == 2 + 3 + 4 + 5
    assert body["2/4"] == (0.656, 1.313)
    assert body["1/2"] == (0.688, 1.375)
    assert body["0/1"] == (0.556, 1.411)


def test_log_table():
    code, text = cli.run(["table-fig3", "--n-max", "1", "--format", "csv"])
    assert code == 0
    rows = parse(text)
    np.testing.assert_allclose([float(v) for v in rows[1][1:]], [0.382, 1.146], atol=1e-3)
    np.testing.assert_allclose([float(v) for v in rows[2][1:]], [0.764, 1.146], atol=1e-3)


@pytest.mark.parametrize("fmt,delim", [("csv", ","), ("tsv", "\t")])
def test_lossless_formats(fmt, delim):
    code, text = cli.run(["odds-freq", "--x", "1", "--n", "3", "--format", fmt])
    assert code == 0
    rows = parse(text, delim)
    from oddsforecast.odds import BernoulliPosterior, freq_linear_odds

    o = freq_linear_odds(BernoulliPosterior(1, 3))
    assert rows[0] == ["q", "q_prime", "total"]
    assert [float(v) for v in rows[1]] == [o.q[0], o.q[1], o.total]


def test_odds_gaussian_and_log():
    code, text = cli.run(["odds-gaussian", "--z", "0", "--utility", "log", "--format", "csv"])
    assert code == 0
    row = parse(text)[1]
    np.testing.assert_allclose(float(row[1]), float(row[2]), rtol=1e-12)
    assert row[4] == "true"


def test_curve_gaussian():
    code, text = cli.run(["curve-gaussian", "--z-min", "-1", "--z-max", "1", "--z-step", "0.5"])
    assert code == 0
    rows = parse(text)
    assert rows[0] == ["z", "q", "s", "normal_cdf"]
    vals = np.array([[float(v) for v in r] for r in rows[1:]])
    np.testing.assert_allclose(vals[:, 0], [-1, -0.5, 0, 0.5, 1])
    assert np.all(np.diff(vals[:, 1]) >= 0)
    np.testing.assert_allclose(vals[2, 1], vals[2, 2] / 2, atol=1e-9)
    np.testing.assert_allclose(vals[2, 3], 0.5)


def test_generic_seeded_rerun():
    argv = ["odds-generic", "--dirichlet", "2,1,1", "--mc-samples", "20000", "--seed", "5", "--format", "csv"]
    a, b = cli.run(argv), cli.run(argv)
    assert a[0] == 0 and a == b
    c = cli.run(argv[:-4] + ["--seed", "6", "--format", "csv"])
    assert c[1] != a[1]


def test_simulate_rerun():
    argv = ["simulate", "--q", "0.5,0.7", "--pi", "0.4,0.6", "--strategy", "minimax", "--rounds", "500",
            "--seed", "3", "--format", "csv"]
    a, b = cli.run(argv), cli.run(argv)
    assert a[0] == 0 and a == b
    row = parse(a[1])[1]
    assert row[0] == "minimax" and row[2] == "500"


def test_hedge_and_mitigate():
    code, text = cli.run(["hedge", "--r-event", "0", "--r-complement", "10", "--q", "0.556", "--q-prime",
                          "0.855", "--format", "csv"])
    assert code == 0
    np.testing.assert_allclose([float(v) for v in parse(text)[1]], [5.56, 0.0, 4.44], rtol=1e-12)
    code, text = cli.run(["mitigate", "--loss", "100", "--cost", "10", "--mitigated-loss", "20", "--q", "0.2",
                          "--q-prime", "0.9", "--format", "csv"])
    assert code == 0
    row = parse(text)[1]
    assert row[0] == "true" and float(row[3]) == -12.0


@pytest.mark.parametrize(
    "argv",
    [
        ["odds-freq", "--x", "5", "--n", "3"],
        ["odds-freq", "--x", "-1", "--n", "3"],
        ["odds-generic", "--mc-samples", "100"],
        ["simulate", "--q", "0.5,abc", "--pi", "0.5,0.5"],
        ["hedge", "--r-event", "1", "--r-complement", "0", "--q", "0", "--q-prime", "1"],
        ["mitigate", "--loss", "10", "--cost", "1", "--mitigated-loss", "20", "--q", "0.5", "--q-prime", "0.5"],
        ["curve-gaussian", "--z-step", "0"],
    ],
)
def test_input_errors(argv):
    assert cli.run(argv)[0] == cli.EXIT_INPUT


def test_usage_errors():
    assert cli.run(["no-such-command"])[0] == 2
    assert cli.run(["odds-freq", "--x", "1"])[0] == 2


def test_numeric_error_code(monkeypatch):
    def boom(*a, **k):
        raise NumericError("did not converge")

    monkeypatch.setattr(cli, "freq_odds", boom)
    assert cli.run(["odds-freq", "--x", "1", "--n", "2"])[0] == cli.EXIT_NUMERIC


def test_campaign_small(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[campaign]\nlead_days = 1-2\nforecasters = frequency, capped\n[scenario]\ndays = 20\n"
                   "members = 4\nmax_lead_hours = 72\n")
    out = tmp_path / "out"
    argv = ["campaign", "--config", str(cfg), "--seed", "4", "--format", "csv", "--out-dir", str(out)]
    a = cli.run(argv)
    assert a[0] == 0
    rows = parse(a[1])
    assert rows[0] == ["lead_days", "linear_frequency", "linear_capped", "logarithmic_frequency",
                       "logarithmic_capped"]
    assert len(rows) == 3
    assert (out / "payout_table.csv").exists()
    assert (out / "payout_series_linear_lead1.csv").read_text().count("\n") == 21
    assert cli.run(argv) == a
    assert cli.run(["campaign", "--config", str(tmp_path / "missing.ini")])[0] == cli.EXIT_INPUT


def test_round_half_up():
    assert cli.round3(0.6875) == "0.688"
    assert cli.round3(1.3125) == "1.313"
    assert cli.round3(0.0005) == "0.001"
