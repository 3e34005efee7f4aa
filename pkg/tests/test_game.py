import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddsforecast.errors import InputError
from oddsforecast.game import (
    ClientStrategy,
    GameMatrix,
    informed_expected_payout,
    informed_linear_bet,
    kelly_growth,
    martingale_check,
    minimax_strategy,
    simulate_wealth,
)
from oddsforecast.numerics import RngStream
from oddsforecast.odds import (
    BernoulliPosterior,
    GaussianPosterior,
    GenericPosterior,
    OddsAssignment,
    Utility,
    freq_linear_odds,
    freq_log_odds,
    gaussian_linear_odds,
    gaussian_log_odds,
)

simplex2 = st.floats(0.01, 0.99).map(lambda a: (a, 1.0 - a))
odds2 = st.tuples(st.floats(0.05, 1.5), st.floats(0.05, 1.5))


class TestGameMatrix:
    def test_entries(self):
        G = GameMatrix((0.5, 0.8)).matrix
        np.testing.assert_allclose(G, [[1.0, -1.0], [-1.0, 0.25]])
        assert GameMatrix((0.5, 0.8)).payout(1, 0) == -1.0

    @given(odds2)
    def test_diagonal_bounds(self, q):
        G = GameMatrix(q).matrix
        assert np.all(np.diag(G) >= -1)
        assert np.all(G[~np.eye(2, dtype=bool)] == -1)

    def test_expected_payout(self):
        g = GameMatrix((0.5, 0.5))
        np.testing.assert_allclose(g.expected_payout((1.0, 0.0), (0.7, 0.3)), 0.4)


class TestMinimax:
    def test_probabilistic(self):
        p, v = minimax_strategy((0.5, 0.5))
        np.testing.assert_allclose(p, (0.5, 0.5))
        assert v == 0.0

    def test_arithmetic(self):
        p, v = minimax_strategy((0.5, 0.7))
        np.testing.assert_allclose(p, (5 / 12, 7 / 12), rtol=1e-15)
        np.testing.assert_allclose(v, -1 / 6, rtol=1e-14)

    def test_table_odds(self):
        _, v = minimax_strategy((0.556, 0.855))
        assert abs(v - (-0.291)) < 1e-3

    def test_engine_odds_negative_floor(self):
        o = freq_linear_odds(BernoulliPosterior(1, 3))
        _, v = minimax_strategy(o)
        np.testing.assert_allclose(v, 1 / o.total - 1, rtol=1e-14)
        assert v < 0

    def test_zero_component(self):
        with pytest.raises(InputError):
            minimax_strategy((0.0, 1.0))


class TestInformed:
    def test_examples(self):
        assert informed_linear_bet((0.5, 0.5), (0.7, 0.3)) == 0
        np.testing.assert_allclose(informed_expected_payout((0.5, 0.5), (0.7, 0.3)), 0.4)
        assert informed_expected_payout((0.3, 0.7), (0.3, 0.7)) == pytest.approx(0.0, abs=1e-15)

    def test_table_row(self):
        assert informed_linear_bet((0.656, 0.657), (0.5, 0.5)) == 0
        assert abs(informed_expected_payout((0.656, 0.657), (0.5, 0.5)) - (-0.238)) < 1e-3

    def test_ties_lowest_index(self):
        assert informed_linear_bet((0.4, 0.4, 0.2), (0.4, 0.4, 0.2)) == 0

    @given(odds2, simplex2, st.floats(0.01, 100.0))
    def test_scale_invariance(self, q, pi, c):
        assert informed_linear_bet(q, pi) == informed_linear_bet(tuple(c * v for v in q), pi)


class TestKelly:
    def test_examples(self):
        assert kelly_growth((0.3, 0.7), (0.3, 0.7), (0.3, 0.7)) == 0.0
        want = 0.7 * math.log(1.4) + 0.3 * math.log(0.6)
        np.testing.assert_allclose(kelly_growth((0.5, 0.5), (0.7, 0.3), (0.7, 0.3)), want, rtol=1e-14)
        assert abs(want - 0.0823) < 1e-4

    def test_zero_bet_sentinel(self):
        assert kelly_growth((0.5, 0.5), (1.0, 0.0), (0.7, 0.3)) == -math.inf
        assert kelly_growth((0.5, 0.5), (1.0, 0.0), (1.0, 0.0)) == math.log(2.0)

    def test_maximized_at_pi(self):
        q, pi = (0.45, 0.3, 0.4), (0.5, 0.2, 0.3)
        best = kelly_growth(q, pi, pi)
        grid = np.linspace(0.02, 0.96, 48)
        for a in grid:
            for b in grid:
                if a + b < 0.99:
                    assert kelly_growth(q, (a, b, 1 - a - b), pi) <= best + 1e-15


class TestSimulate:
    def test_probabilistic_informed_fair(self):
        pi = (0.3, 0.7)
        tr = simulate_wealth(pi, ClientStrategy("informed_linear", pi_true=pi), pi, 100_000, RngStream(1))
        inc = tr.increments()
        assert abs(inc.mean()) <= 3 * inc.std(ddof=1) / math.sqrt(inc.size)

    def test_subunity_odds_profit(self):
        pi = (0.5, 0.5)
        tr = simulate_wealth((0.4, 0.4), ClientStrategy("informed_linear", pi_true=pi), pi, 100_000,
                             RngStream(2))
        inc = tr.increments()
        assert inc.mean() > 0
        assert abs(inc.mean() - 0.25) <= 3 * inc.std(ddof=1) / math.sqrt(inc.size)

    def test_kelly_driftless(self):
        pi = (0.25, 0.75)
        tr = simulate_wealth(pi, ClientStrategy("kelly", pi_true=pi), pi, 100_000, RngStream(3))
        assert tr.utility is Utility.LOGARITHMIC
        np.testing.assert_allclose(tr.log_w, 0.0, atol=1e-12)

    def test_kelly_drift_matches_growth(self):
        q, pi = (0.5, 0.6), (0.3, 0.7)
        tr = simulate_wealth(q, ClientStrategy("kelly", pi_true=pi), pi, 100_000, RngStream(4))
        inc = tr.increments()
        g = kelly_growth(q, pi, pi)
        assert abs(inc.mean() - g) <= 3 * inc.std(ddof=1) / math.sqrt(inc.size)

    def test_log_wealth_positive(self):
        q, pi = (0.6, 0.6), (0.5, 0.5)
        tr = simulate_wealth(q, ClientStrategy("custom", p_bets=(0.9, 0.1)), pi, 2000, RngStream(5),
                             utility="log")
        assert np.all(tr.w > 0) or np.all(np.isfinite(tr.log_w))

    def test_minimax_guaranteed_floor(self):
        q = (0.5, 0.7)
        tr = simulate_wealth(q, ClientStrategy("minimax"), (0.9, 0.1), 50_000, RngStream(6))
        inc = tr.increments()
        assert abs(inc.mean() - (-1 / 6)) <= 4 * inc.std(ddof=1) / math.sqrt(inc.size)

    def test_reproducible(self):
        args = ((0.5, 0.7), ClientStrategy("minimax"), (0.4, 0.6), 1000)
        a = simulate_wealth(*args, RngStream(9))
        b = simulate_wealth(*args, RngStream(9))
        np.testing.assert_array_equal(a.w, b.w)
        np.testing.assert_array_equal(a.outcomes, b.outcomes)

    def test_validation(self):
        with pytest.raises(InputError):
            ClientStrategy("informed_linear")
        with pytest.raises(InputError):
            ClientStrategy("kelly", pi_true=(0.2, 0.2))
        with pytest.raises(InputError):
            simulate_wealth((0.5, 0.5), ClientStrategy("minimax"), (0.5, 0.5), 0, RngStream(0))


class TestMartingale:
    def test_freq_linear(self, rng):
        post = BernoulliPosterior(2, 4)
        r = martingale_check(post, freq_linear_odds(post), "linear", 100_000, rng)
        assert r.is_fair()

    def test_naive_odds_lose(self, rng):
        r = martingale_check(BernoulliPosterior(2, 4), (0.5, 0.5), "linear", 100_000, rng)
        assert r.favours_client()

    def test_freq_log(self, rng):
        post = BernoulliPosterior(1, 1)
        r = martingale_check(post, freq_log_odds(post), "log", 100_000, rng)
        assert r.is_fair()

    @pytest.mark.parametrize("z", [0.0, 1.3])
    def test_gaussian(self, z):
        post = GaussianPosterior(0.0, 1.0, 10)
        for odds, u in ((gaussian_linear_odds(post, z), "linear"), (gaussian_log_odds(post, z), "log")):
            r = martingale_check(post, odds, u, 100_000, RngStream(11), z=z)
            assert r.is_fair(), (u, r)

    def test_generic_dirichlet(self, rng):
        from oddsforecast.odds import generic_log_odds

        post = GenericPosterior.dirichlet((2.0, 1.0, 1.0))
        o = generic_log_odds(post, 200_000, RngStream(12))
        r = martingale_check(post, o, "log", 100_000, RngStream(13))
        assert r.is_fair()

    def test_zero_odds_infinite_gain(self, rng):
        r = martingale_check(BernoulliPosterior(2, 4), (0.0, 1.0), "linear", 10_000, rng)
        assert r.mean_client_gain == math.inf and r.favours_client()

    def test_replicates_floor(self, rng):
        with pytest.raises(InputError):
            martingale_check(BernoulliPosterior(2, 4), (0.5, 0.5), "linear", 9_999, rng)

    def test_gaussian_needs_z(self, rng):
        with pytest.raises(InputError):
            martingale_check(GaussianPosterior(0.0, 1.0, 10), (0.5, 0.5), "linear", 10_000, rng)
