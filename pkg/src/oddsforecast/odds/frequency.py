"""Odds for a binary event from observed frequency x out of n (uniform prior)."""
import math

from ..numerics import harmonic, minimize_scalar, regularized_incomplete_beta
from .types import BernoulliPosterior, OddsAssignment, Provenance, Utility

ENDPOINT_EPS = 1e-9


def frequency_linear_total(p, x, n):
    """Total odds ``s(p)`` for which a client betting on the larger of
    ``pi/(p s)`` and ``(1-pi)/((1-p) s)`` has zero expected gain under the
    Beta(x+1, n-x+1) posterior.

    Written with regularized incomplete betas; the complete-beta ratios reduce
    to ``(n-x+1)/(n+2)`` and ``(x+1)/(n+2)`` so nothing underflows at large n.
    """
    below = (n - x + 1) / (n + 2) * regularized_incomplete_beta(p, x + 1, n - x + 2) / (1.0 - p)
    above = (x + 1) / (n + 2) * regularized_incomplete_beta(1.0 - p, n - x + 1, x + 2) / p
    return below + above


def freq_linear_odds(post, tol=1e-10):
    """Smallest-total odds keeping a fully informed unit-stake client's expected gain at zero.

    The optimum is found by Brent's method over the split ``p = q / (q + q')``.
    For ``x > n - x`` the mirrored problem is solved and the odds swapped, and
    ``x = n/2`` uses ``p = 1/2``, so ``q(x, n) == q'(n - x, n)`` holds exactly.
    """
    if not isinstance(post, BernoulliPosterior):
        post = BernoulliPosterior(*post)
    x, n = post.x, post.n
    mirrored = x > n - x
    xs = n - x if mirrored else x
    p, s = minimize_scalar(
        lambda t: frequency_linear_total(t, xs, n), ENDPOINT_EPS, 1.0 - ENDPOINT_EPS, tol
    )
    if 2 * x == n:
        # s(p) = s(1 - p) here, so the convex minimum sits exactly at one half
        p = 0.5
        s = frequency_linear_total(p, xs, n)
    q, qc = p * s, (1.0 - p) * s
    residual = frequency_linear_total(p, xs, n) / s - 1.0
    if mirrored:
        q, qc, p = qc, q, 1.0 - p
    return OddsAssignment(
        (q, qc),
        Utility.LINEAR,
        Provenance.FREQUENCY,
        {"p": p, "total": s, "constraint_residual": residual, "x": x, "n": n},
    )


def freq_log_odds(post):
    """Closed-form odds keeping a Kelly client's expected log-wealth growth at zero.

    With ``a = x + 1``, ``b = n - x + 1`` and harmonic numbers ``H_k``::

        psi = (a H_a + b H_b) / (n + 2) - H_{n+2}
        q   = (a / b) ** (b / (n + 2)) * exp(psi)
        q'  = (b / a) ** (a / (n + 2)) * exp(psi)
    """
    if not isinstance(post, BernoulliPosterior):
        post = BernoulliPosterior(*post)
    x, n = post.x, post.n
    a, b, t = x + 1, n - x + 1, n + 2
    psi = (a * harmonic(a) + b * harmonic(b)) / t - harmonic(t)
    q = math.exp(b / t * math.log(a / b) + psi)
    qc = math.exp(a / t * math.log(b / a) + psi)
    pi_bar = a / t
    alpha = psi - pi_bar * math.log(pi_bar) - (1.0 - pi_bar) * math.log(1.0 - pi_bar)
    return OddsAssignment(
        (q, qc),
        Utility.LOGARITHMIC,
        Provenance.FREQUENCY,
        {"psi": psi, "alpha": alpha, "pi_bar": pi_bar, "x": x, "n": n},
    )


def freq_odds(post, utility, tol=1e-10):
    if Utility.parse(utility) is Utility.LINEAR:
        return freq_linear_odds(post, tol)
    return freq_log_odds(post)
