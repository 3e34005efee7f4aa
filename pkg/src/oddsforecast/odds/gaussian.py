"""Odds for ``Z <= z`` when observations are Gaussian with unknown mean and scale.

All work happens in standardized units (sample mean 0, sample standard
deviation 1). The posterior over ``(mu, sigma)`` with a flat prior in ``mu`` is
re-expressed in ``(u, sigma)`` with ``u = (z - mu) / sigma``, so the event
probability is ``Phi(u)``. Given sigma, ``u`` is normal with mean ``z/sigma`` and
variance ``1/n``, and the region where an informed client switches sides
(``Phi(u) = p``) is the line ``u = Phi^{-1}(p)``. Integrals split at that
line stay smooth on each side.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp
from scipy.interpolate import PchipInterpolator

from ..errors import InputError, NumericError
from ..numerics import Quadrature2DSpec, integrate_2d, minimize_scalar, normal_cdf, normal_quantile
from .types import GaussianPosterior, OddsAssignment, Provenance, Utility

DEFAULT_QUAD = Quadrature2DSpec(
    sigma_truncation=8.0, mu_halfwidth=8.0, rel_tolerance=1e-9, max_evaluations=4_000_000
)
ENDPOINT_EPS = 1e-9
_LOG_CUT = 46.0  # drop posterior regions below exp(-46) of the peak
_U_SPREAD = 10.0  # half-width of u around z/sigma, in posterior standard deviations
_STRIP_WIDTH = 2.0  # max drift of the ridge u = z/sigma across one sigma strip


def _log_sigma_marginal(post, sigma):
    n = post.n
    with np.errstate(divide="ignore"):
        return -(n - 1) * np.log(sigma) - n / (2.0 * sigma**2) + post.prior.log_density(sigma)


def sigma_support(post, sigma_max=8.0, points=6000):
    """Interval of standardized sigma holding all but a negligible part of the posterior."""
    lo_hint, hi_hint = post.prior.support_hint()
    hi = min(sigma_max, hi_hint) if post.prior.kind != "tabulated" else min(sigma_max, hi_hint)
    lo = max(lo_hint, 1e-3)
    if not hi > lo:
        raise InputError("prior support does not overlap the sigma truncation range")
    grid = np.geomspace(lo, hi, points)
    lg = _log_sigma_marginal(post, grid)
    if not np.any(np.isfinite(lg)):
        raise InputError("posterior has no mass on the sigma truncation range")
    peak = np.max(lg)
    keep = np.nonzero(lg >= peak - _LOG_CUT)[0]
    i0 = max(keep[0] - 1, 0)
    i1 = min(keep[-1] + 1, points - 1)
    return float(grid[i0]), float(grid[i1]), float(peak)


class _Integrands:
    """Unnormalized posterior weight in (u, sigma) for one posterior and threshold."""

    def __init__(self, post, z, quad):
        self.post = post
        self.z = float(z)
        self.quad = quad
        self.s_lo, self.s_hi, self.offset = sigma_support(post, quad.sigma_truncation)
        spread = _U_SPREAD / math.sqrt(post.n)
        ends = (self.z / self.s_lo, self.z / self.s_hi)
        self.u_lo = min(ends) - spread
        self.u_hi = max(ends) + spread
        self.unconverged = 0
        self.evaluations = 0

    def weight(self, u, sigma):
        n = self.post.n
        dev = u - self.z / sigma
        lw = (
            -(n - 1) * np.log(sigma)
            - n / (2.0 * sigma**2)
            - 0.5 * n * dev * dev
            + self.post.prior.log_density(sigma)
            - self.offset
        )
        return np.exp(lw)

    def _strips(self):
        """Sigma strips, equal in 1/sigma, over which the ridge ``u = z/sigma`` moves by at most ``_STRIP_WIDTH``."""
        a, b = 1.0 / self.s_hi, 1.0 / self.s_lo
        k = max(1, math.ceil(abs(self.z) * (b - a) / _STRIP_WIDTH))
        inv = np.linspace(b, a, k + 1)
        inv[0], inv[-1] = b, a
        sig = 1.0 / inv
        sig[0], sig[-1] = self.s_lo, self.s_hi
        return list(zip(sig[:-1], sig[1:]))

    def integrate(self, f, u_lo=None, u_hi=None):
        """Integral over the posterior band, strip by strip, so each rectangle hugs the ridge."""
        u_lo = self.u_lo if u_lo is None else max(u_lo, self.u_lo)
        u_hi = self.u_hi if u_hi is None else min(u_hi, self.u_hi)
        if u_hi <= u_lo:
            return 0.0
        spread = _U_SPREAD / math.sqrt(self.post.n)
        total = 0.0
        for s0, s1 in self._strips():
            ends = (self.z / s0, self.z / s1)
            lo = max(u_lo, min(ends) - spread)
            hi = min(u_hi, max(ends) + spread)
            if hi <= lo:
                continue
            res = integrate_2d(f, self.quad, (lo, hi), (s0, s1))
            self.evaluations += res.evaluations
            if not res.converged:
                self.unconverged += 1
            total += res.value
        return total


def _point_odds(post, z, utility):
    pi = normal_cdf((z - post.prior.mu0) / post.prior.sigma0)
    diag = {"p": pi, "pi_bar": pi, "alpha": 0.0, "total": 1.0, "converged": True, "z": z}
    return OddsAssignment((pi, 1.0 - pi), utility, Provenance.GAUSSIAN, diag)


def gaussian_linear_odds(post, z, quad=DEFAULT_QUAD, tol=1e-8):
    """Smallest-total odds on ``Z <= z`` that leave a unit-stake client who knows
    ``(mu, sigma)`` with zero expected gain.

    Minimizes ``s(p) = (A / (1 - p) + B / p) / C`` where ``A`` integrates
    ``1 - Phi(u)`` over ``Phi(u) < p``, ``B`` integrates ``Phi(u)`` over
    ``Phi(u) > p`` and ``C`` is the posterior normalizer. The odds are
    ``(p s, (1 - p) s)``. Quadrature that misses its tolerance is reported through
    ``diagnostics['converged']``.
    """
    if not isinstance(post, GaussianPosterior):
        raise InputError("gaussian_linear_odds needs a GaussianPosterior")
    if post.prior.is_point:
        return _point_odds(post, z, Utility.LINEAR)
    ig = _Integrands(post, z, quad)
    w = ig.weight
    C = ig.integrate(w)
    if not C > 0:
        raise NumericError("posterior normalizer vanished", z=z, n=post.n)

    def lower(u, s):
        return _sp.ndtr(-u) * w(u, s)

    def upper(u, s):
        return _sp.ndtr(u) * w(u, s)

    def total(p):
        c = normal_quantile(p)
        A = ig.integrate(lower, u_hi=c)
        B = ig.integrate(upper, u_lo=c)
        return (A / (1.0 - p) + B / p) / C

    p, s = minimize_scalar(total, ENDPOINT_EPS, 1.0 - ENDPOINT_EPS, tol)
    diag = {
        "p": p,
        "total": s,
        "z": float(z),
        "converged": ig.unconverged == 0,
        "unconverged_integrals": ig.unconverged,
        "evaluations": ig.evaluations,
        "sigma_range": (ig.s_lo, ig.s_hi),
    }
    return OddsAssignment((p * s, (1.0 - p) * s), Utility.LINEAR, Provenance.GAUSSIAN, diag)


def gaussian_log_odds(post, z, quad=DEFAULT_QUAD):
    """Odds ``(pi_bar e^alpha, (1 - pi_bar) e^alpha)`` keeping a Kelly client's
    expected log-growth at zero.

    ``pi_bar`` is the posterior mean of ``Phi(u)``; ``alpha`` is the posterior
    mean of ``Phi ln Phi + (1 - Phi) ln(1 - Phi)`` minus the same expression
    evaluated at ``pi_bar``. Jensen's inequality makes ``alpha >= 0``.
    """
    if not isinstance(post, GaussianPosterior):
        raise InputError("gaussian_log_odds needs a GaussianPosterior")
    if post.prior.is_point:
        return _point_odds(post, z, Utility.LOGARITHMIC)
    ig = _Integrands(post, z, quad)
    w = ig.weight
    C = ig.integrate(w)
    if not C > 0:
        raise NumericError("posterior normalizer vanished", z=z, n=post.n)

    def prob(u, s):
        return _sp.ndtr(u) * w(u, s)

    def neg_entropy(u, s):
        ent = _sp.ndtr(u) * _sp.log_ndtr(u) + _sp.ndtr(-u) * _sp.log_ndtr(-u)
        return ent * w(u, s)

    pi_bar = ig.integrate(prob) / C
    h_bar = ig.integrate(neg_entropy) / C
    pi_bar = min(max(pi_bar, 0.0), 1.0)
    alpha = h_bar - _xlogx(pi_bar) - _xlogx(1.0 - pi_bar)
    if -1e-10 < alpha < 0.0:
        alpha = 0.0
    growth = math.exp(alpha)
    diag = {
        "pi_bar": pi_bar,
        "h_bar": h_bar,
        "alpha": alpha,
        "total": growth,
        "z": float(z),
        "converged": ig.unconverged == 0,
        "unconverged_integrals": ig.unconverged,
        "evaluations": ig.evaluations,
    }
    return OddsAssignment(
        (pi_bar * growth, (1.0 - pi_bar) * growth), Utility.LOGARITHMIC, Provenance.GAUSSIAN, diag
    )


def _xlogx(v):
    return v * math.log(v) if v > 0 else 0.0


def gaussian_odds(post, z, utility, quad=DEFAULT_QUAD, tol=1e-8):
    if Utility.parse(utility) is Utility.LINEAR:
        return gaussian_linear_odds(post, z, quad, tol)
    return gaussian_log_odds(post, z, quad)


def sample_mu_sigma(post, size, gen, grid_points=1 << 15):
    """Draw standardized ``(mu, sigma)`` from the posterior.

    Sigma comes from inverting the marginal CDF tabulated on a fine grid; given
    sigma, mu is normal with standard deviation ``sigma / sqrt(n)``. This path
    shares nothing with the cubature and serves as its cross-check.
    """
    if post.prior.is_point:
        return np.full(size, post.prior.mu0), np.full(size, post.prior.sigma0)
    lo, hi, _ = sigma_support(post)
    grid = np.linspace(lo, hi, grid_points)
    lg = _log_sigma_marginal(post, grid)
    dens = np.exp(lg - np.max(lg))
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    cdf /= cdf[-1]
    u = gen.random(size)
    sigma = _invert_piecewise_linear_density(u, grid, dens, cdf)
    mu = gen.standard_normal(size) * sigma / math.sqrt(post.n)
    return mu, sigma


def _invert_piecewise_linear_density(u, grid, dens, cdf):
    # density is linear on each cell, so the CDF is quadratic there; solve exactly
    idx = np.clip(np.searchsorted(cdf, u, side="right") - 1, 0, len(grid) - 2)
    x0 = grid[idx]
    h = grid[idx + 1] - x0
    d0 = dens[idx]
    d1 = dens[idx + 1]
    total = cdf[-1]
    # undo normalization: cell mass in raw units
    raw_scale = 1.0 / total
    target = (u - cdf[idx]) / raw_scale
    slope = (d1 - d0) / h
    lin = np.abs(slope) < 1e-300
    with np.errstate(invalid="ignore", divide="ignore"):
        disc = np.sqrt(np.maximum(d0 * d0 + 2.0 * slope * target, 0.0))
        t_quad = (disc - d0) / slope
        t_lin = target / np.where(d0 > 0, d0, np.inf)
    t = np.where(lin, t_lin, t_quad)
    return x0 + np.clip(np.nan_to_num(t, nan=0.0), 0.0, h)


@dataclass
class GaussianOddsTable:
    """Gaussian odds tabulated on a z grid and interpolated monotonically.

    Standardized Gaussian odds depend only on ``z``, ``n`` and the prior, so a
    campaign that needs thousands of them computes each grid point once.
    Thresholds outside the grid are clamped to its ends.
    """

    n: int
    prior: object
    utility: Utility
    z_grid: np.ndarray
    q: np.ndarray
    qc: np.ndarray

    @classmethod
    def build(cls, n, prior, utility, z_grid=None, quad=DEFAULT_QUAD, tol=1e-8):
        utility = Utility.parse(utility)
        if z_grid is None:
            z_grid = np.round(np.arange(-6.0, 6.0001, 0.125), 6)
        z_grid = np.asarray(z_grid, dtype=np.float64)
        post = GaussianPosterior(0.0, 1.0, n, prior)
        q = np.empty_like(z_grid)
        qc = np.empty_like(z_grid)
        for i, z in enumerate(z_grid):
            o = gaussian_odds(post, float(z), utility, quad, tol)
            q[i], qc[i] = o.q
        return cls(n, prior, utility, z_grid, q, qc)

    def __post_init__(self):
        self._fq = PchipInterpolator(self.z_grid, self.q, extrapolate=False)
        self._fqc = PchipInterpolator(self.z_grid, self.qc, extrapolate=False)

    def odds(self, z):
        zc = float(np.clip(z, self.z_grid[0], self.z_grid[-1]))
        q = float(self._fq(zc))
        qc = float(self._fqc(zc))
        return OddsAssignment(
            (q, qc), self.utility, Provenance.GAUSSIAN, {"z": float(z), "interpolated": True}
        )
