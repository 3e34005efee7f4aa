"""Pure Python implementations of the hot loops.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
The two must agree to rounding; ``tests/test_kernels.py`` checks this.
"""
import math

import numpy as np

_TINY = 1e-300


def beta_cf(a, b, x, eps=1e-15, max_iter=20000):
    """Continued fraction for the incomplete beta function (modified Lentz).

    Returns the value ``cf`` such that ``I_x(a, b) = x**a (1-x)**b cf / (a B(a, b))``.
    Converges quickly for ``x < (a + 1) / (a + b + 2)``.
    """
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )


def mean_max_ratio(samples, inv_p):
    """Mean and standard deviation over rows of ``max_i samples[k, i] * inv_p[i]``."""
    vals = (np.asarray(samples, dtype=np.float64) * np.asarray(inv_p, dtype=np.float64)).max(axis=1)
    n = vals.shape[0]
    mean = math.fsum(vals) / n
    if n < 2:
        return mean, 0.0
    dev = vals - mean
    var = math.fsum(dev * dev) / (n - 1)
    return mean, math.sqrt(var)


def argmax_ratio(samples, inv_p):
    """Row-wise index of the largest ``samples[k, i] * inv_p[i]``; lowest index on ties."""
    scaled = np.asarray(samples, dtype=np.float64) * np.asarray(inv_p, dtype=np.float64)
    return np.argmax(scaled, axis=1).astype(np.int64)


def wealth_path(outcomes, bets, inv_q, w0, log_mode):
    """Accumulate client wealth round by round.

    ``bets[t]`` holds the fractions staked on each event in round ``t`` (rows sum
    to one). With ``log_mode`` false the stake is one unit and the returned path
    is wealth; otherwise the entire wealth is staked and the returned path is log
    wealth starting at ``log(w0)``. Sums are Neumaier-compensated.
    """
    outcomes = np.asarray(outcomes, dtype=np.int64)
    bets = np.asarray(bets, dtype=np.float64)
    inv_q = np.asarray(inv_q, dtype=np.float64)
    rounds = outcomes.shape[0]
    out = np.empty(rounds + 1, dtype=np.float64)
    total = math.log(w0) if log_mode else float(w0)
    comp = 0.0
    out[0] = total
    for t in range(rounds):
        o = outcomes[t]
        ret = bets[t, o] * inv_q[o]
        if log_mode:
            inc = math.log(ret) if ret > 0.0 else -math.inf
        else:
            inc = ret - 1.0
        s = total + inc
        if abs(total) >= abs(inc):
            comp += (total - s) + inc
        else:
            comp += (inc - s) + total
        total = s
        out[t + 1] = total + comp
    return out
