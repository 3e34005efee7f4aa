"""Compiled and pure-Python kernels must agree."""
import numpy as np
import pytest

from oddsforecast import _kernels
from oddsforecast._kernels import _pykernels

BACKENDS = _kernels.available_backends()


@pytest.fixture(params=BACKENDS)
def kern(request):
    return _kernels.get_backend(request.param)


def test_backend_selected_at_import():
    assert _kernels.BACKEND in BACKENDS
    with pytest.raises(ValueError):
        _kernels.get_backend("fortran")


@pytest.mark.parametrize("a,b,x", [(2.0, 3.0, 0.3), (0.5, 0.5, 0.2), (50.0, 70.0, 0.4), (1.0, 1.0, 0.5)])
def test_beta_cf_parity(kern, a, b, x):
    np.testing.assert_allclose(kern.beta_cf(a, b, x), _pykernels.beta_cf(a, b, x), rtol=1e-14)


def test_beta_cf_nonconvergence(kern):
    with pytest.raises(ArithmeticError):
        kern.beta_cf(2000.0, 2000.0, 0.5, 1e-15, 3)


def test_mean_max_ratio_parity(kern):
    g = np.random.default_rng(1)
    s = g.dirichlet([1.0, 2.0, 3.0], size=5000)
    inv = 1.0 / np.array([0.4, 0.5, 0.6])
    m, sd = kern.mean_max_ratio(s, inv)
    ratios = (s * inv).max(axis=1)
    np.testing.assert_allclose(m, ratios.mean(), rtol=1e-13)
    np.testing.assert_allclose(sd, ratios.std(ddof=1), rtol=1e-10)


def test_argmax_ratio_ties_lowest_index(kern):
    s = np.array([[0.5, 0.5], [0.2, 0.8], [0.9, 0.1]])
    out = kern.argmax_ratio(s, np.array([1.0, 1.0]))
    assert out.tolist() == [0, 1, 0]


@pytest.mark.parametrize("log_mode", [False, True])
def test_wealth_path_parity(kern, log_mode):
    g = np.random.default_rng(2)
    outcomes = g.integers(0, 3, size=400).astype(np.int64)
    bets = g.dirichlet([1, 1, 1], size=400)
    inv_q = 1.0 / np.array([0.3, 0.4, 0.5])
    w0 = 1.0
    got = kern.wealth_path(outcomes, bets, inv_q, w0, log_mode)
    want = _pykernels.wealth_path(outcomes, bets, inv_q, w0, log_mode)
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)
    gain = bets[np.arange(400), outcomes] * inv_q[outcomes]
    if log_mode:
        np.testing.assert_allclose(got[-1], np.log(gain).sum(), rtol=1e-11)
    else:
        np.testing.assert_allclose(got[-1], w0 + (gain - bets.sum(axis=1)).sum(), rtol=1e-11)
    assert got.shape == (401,)
