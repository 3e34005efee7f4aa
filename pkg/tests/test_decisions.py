import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddsforecast.decisions import (
    InvestmentProblem,
    MitigationProblem,
    action_threshold,
    hedge_investment,
    hedge_outcomes,
    mitigate,
    mitigation_outcomes,
)
from oddsforecast.errors import InputError

pos_odds = st.floats(0.02, 1.5)
money = st.floats(-1e4, 1e4)


class TestHedge:
    def test_examples(self):
        h = hedge_investment(InvestmentProblem(10.0, 0.0, (0.5, 0.6)))
        assert h.lam == 0.0
        np.testing.assert_allclose((h.lam_prime, h.guaranteed_return), (6.0, 4.0), rtol=1e-15)
        assert tuple(hedge_investment(InvestmentProblem(5.0, 5.0, (0.5, 0.6)))) == (0.0, 0.0, 5.0)

    def test_table_odds(self):
        prob = InvestmentProblem(0.0, 10.0, (0.556, 0.855))
        h = hedge_investment(prob)
        np.testing.assert_allclose((h.lam, h.lam_prime, h.guaranteed_return), (5.56, 0.0, 4.44), rtol=1e-12)
        on_e, on_ec = hedge_outcomes(prob, h)
        np.testing.assert_allclose((on_e, on_ec), (4.44, 4.44), rtol=1e-12)

    @given(money, money, pos_odds, pos_odds)
    @settings(max_examples=300)
    def test_outcome_independent(self, r, rc, q, qc):
        prob = InvestmentProblem(r, rc, (q, qc))
        h = hedge_investment(prob)
        a, b = hedge_outcomes(prob, h)
        scale = max(1.0, abs(r), abs(rc)) / min(q, qc)
        assert abs(a - b) <= 1e-12 * scale
        np.testing.assert_allclose(a, h.guaranteed_return, rtol=1e-12, atol=1e-12 * scale)

    @given(money, money, st.floats(0.05, 0.95), st.floats(1.0, 1.5))
    def test_premium_at_normalized_odds(self, r, rc, p, s):
        q, qc = p * s, (1 - p) * s
        g = hedge_investment(InvestmentProblem(r, rc, (q, qc))).guaranteed_return
        expected = p * r + (1 - p) * rc
        assert g <= expected + 1e-9 * max(1.0, abs(r), abs(rc))
        if s == 1.0:
            np.testing.assert_allclose(g, expected, rtol=1e-12, atol=1e-9)

    def test_rejects_bad_odds(self):
        with pytest.raises(InputError):
            InvestmentProblem(1.0, 0.0, (0.0, 0.5))
        with pytest.raises(InputError):
            InvestmentProblem(1.0, 0.0, (0.2, 0.3, 0.5))


class TestMitigate:
    def test_act_case_b(self):
        prob = MitigationProblem(100.0, 10.0, 20.0, (0.2, 0.9))
        assert action_threshold(prob)
        d = mitigate(prob)
        assert d.take_action
        np.testing.assert_allclose(d.fixed_loss, -12.0, rtol=1e-15)

    def test_no_action(self):
        d = mitigate(MitigationProblem(100.0, 10.0, 20.0, (0.05, 0.99)))
        assert not d.take_action
        np.testing.assert_allclose(d.fixed_loss, -5.0, rtol=1e-15)

    def test_act_case_c(self):
        prob = MitigationProblem(100.0, 10.0, 5.0, (0.2, 0.9))
        d = mitigate(prob)
        assert d.take_action and action_threshold(prob)
        np.testing.assert_allclose(d.fixed_loss, -9.5, rtol=1e-14)
        np.testing.assert_allclose(d.bets, (0.0, 4.5), rtol=1e-14)

    def test_equal_cost_and_mitigated_loss(self):
        d = mitigate(MitigationProblem(100.0, 10.0, 10.0, (0.5, 0.6)))
        assert d.take_action and d.bets == (0.0, 0.0)
        assert d.fixed_loss == -10.0

    @pytest.mark.parametrize("args", [(10.0, 5.0, 10.0), (10.0, 5.0, 20.0), (0.0, 1.0, 1.0), (5.0, -1.0, 1.0)])
    def test_rejects(self, args):
        with pytest.raises(InputError):
            MitigationProblem(*args, (0.5, 0.6))

    @given(st.floats(1.0, 1e4), st.floats(0.01, 1.0), st.floats(0.01, 1.0), pos_odds, pos_odds)
    @settings(max_examples=300)
    def test_outcome_independent_and_threshold(self, L, c_frac, m_frac, q, qc):
        C, M = c_frac * L, m_frac * L
        if M >= L:
            return
        prob = MitigationProblem(L, C, M, (q, qc))
        d = mitigate(prob)
        a, b = mitigation_outcomes(prob, d)
        assert abs(a - b) <= 1e-12 * L / min(q, qc)
        np.testing.assert_allclose(a, d.fixed_loss, rtol=1e-12, atol=1e-12 * L)
        idle = -q * L
        act = -q * M - (1 - q) * C if C <= M else -(1 - qc) * M - qc * C
        if abs(act - idle) > 1e-12 * L * max(1.0, q, qc):
            assert d.take_action == action_threshold(prob)

    @given(st.floats(0.05, 0.6), st.floats(0.05, 0.6), st.floats(1.01, 3.0))
    def test_scaling_odds_monotone(self, q, qc, c):
        prob = MitigationProblem(100.0, 10.0, 20.0, (q, qc))
        scaled = MitigationProblem(100.0, 10.0, 20.0, (c * q, c * qc))
        assert mitigate(scaled).fixed_loss <= mitigate(prob).fixed_loss
