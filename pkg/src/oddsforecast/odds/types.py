"""Odds assignments and posterior models."""
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import InputError
from ..numerics import RngStream, normal_cdf

SIMPLEX_TOL = 1e-9


class Utility(str, Enum):
    LINEAR = "linear"
    LOGARITHMIC = "logarithmic"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {"linear": cls.LINEAR, "lin": cls.LINEAR, "log": cls.LOGARITHMIC,
                   "logarithmic": cls.LOGARITHMIC}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise InputError(f"unknown utility {value!r}") from None


class Provenance(str, Enum):
    FREQUENCY = "frequency"
    GAUSSIAN = "gaussian"
    PROBABILISTIC = "probabilistic"
    CAPPED_PROBABILISTIC = "capped_probabilistic"
    GENERIC = "generic"


@dataclass(frozen=True)
class OddsAssignment:
    """Odds ``q_i >= 0`` over ``m`` mutually exclusive events.

    A unit bet on event ``i`` pays ``1/q_i - 1`` if it occurs and loses the
    stake otherwise. ``total`` is ``sum(q)``; it equals one for probabilistic
    odds and exceeds one when the forecaster prices in model uncertainty.
    """

    q: tuple
    utility: Utility = Utility.LINEAR
    provenance: Provenance = Provenance.GENERIC
    diagnostics: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        q = tuple(float(v) for v in self.q)
        if len(q) < 2:
            raise InputError("odds need at least two events")
        if any(not (v >= 0.0) or math.isinf(v) for v in q):
            raise InputError(f"odds must be finite and non-negative, got {q}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "utility", Utility.parse(self.utility))
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    @property
    def m(self):
        return len(self.q)

    @property
    def total(self):
        return math.fsum(self.q)

    @property
    def excess(self):
        """Amount by which the odds sum exceeds one."""
        return self.total - 1.0

    @property
    def payouts(self):
        return tuple(math.inf if v == 0.0 else 1.0 / v - 1.0 for v in self.q)

    def as_array(self):
        return np.array(self.q, dtype=np.float64)

    def scaled(self, c):
        return OddsAssignment(tuple(c * v for v in self.q), self.utility, self.provenance)


@dataclass(frozen=True)
class BernoulliPosterior:
    """Event seen ``x`` times in ``n`` trials, uniform prior on its probability."""

    x: int
    n: int

    def __post_init__(self):
        if int(self.x) != self.x or int(self.n) != self.n:
            raise InputError("x and n must be integers")
        if not 0 <= self.x <= self.n or self.n < 1:
            raise InputError(f"need 0 <= x <= n and n >= 1, got x={self.x}, n={self.n}")

    @property
    def beta_params(self):
        return self.x + 1, self.n - self.x + 1

    def sample_event_probs(self, size, rng):
        a, b = self.beta_params
        pi = rng.generator().beta(a, b, size=size)
        return np.column_stack([pi, 1.0 - pi])


@dataclass(frozen=True)
class SigmaPrior:
    """Prior density on the standardized scale ``sigma / sigma_hat`` (flat in mean).

    kinds
        ``chi2``: ``sigma * exp(-sigma**2 / (2 scale**2))``, a chi distribution with
        two degrees of freedom; ``halfnormal``: ``exp(-sigma**2 / (2 scale**2))``;
        ``tabulated``: linear interpolation of ``density`` on ``grid`` (zero
        outside); ``point``: all mass at standardized ``(mu0, sigma0)``.
    """

    kind: str = "chi2"
    scale: float = 1.0
    grid: tuple = ()
    density: tuple = ()
    mu0: float = 0.0
    sigma0: float = 1.0

    def __post_init__(self):
        kinds = {"chi2", "halfnormal", "tabulated", "point"}
        if self.kind not in kinds:
            raise InputError(f"sigma prior kind must be one of {sorted(kinds)}, got {self.kind!r}")
        if not self.scale > 0:
            raise InputError("prior scale must be positive")
        if self.kind == "tabulated":
            g = np.asarray(self.grid, dtype=float)
            d = np.asarray(self.density, dtype=float)
            if g.ndim != 1 or g.shape != d.shape or g.size < 2:
                raise InputError("tabulated prior needs matching grid and density of length >= 2")
            if np.any(np.diff(g) <= 0) or g[0] < 0 or np.any(d < 0) or not np.any(d > 0):
                raise InputError("tabulated prior needs increasing grid >= 0 and non-negative density")
        if self.kind == "point" and not self.sigma0 > 0:
            raise InputError("point prior needs sigma0 > 0")

    @classmethod
    def caption_variant(cls):
        """``sigma * exp(-sigma**2)``, an alternative scale prior."""
        return cls("chi2", scale=1.0 / math.sqrt(2.0))

    @property
    def is_point(self):
        return self.kind == "point"

    def log_density(self, sigma):
        sigma = np.asarray(sigma, dtype=np.float64)
        if self.kind == "chi2":
            with np.errstate(divide="ignore"):
                return np.log(sigma) - sigma**2 / (2.0 * self.scale**2)
        if self.kind == "halfnormal":
            return -(sigma**2) / (2.0 * self.scale**2)
        if self.kind == "tabulated":
            vals = np.interp(sigma, self.grid, self.density, left=0.0, right=0.0)
            with np.errstate(divide="ignore"):
                return np.log(vals)
        raise InputError("a point prior has no density")

    def support_hint(self):
        if self.kind == "tabulated":
            return float(self.grid[0]), float(self.grid[-1])
        return 0.0, 12.0 * self.scale


@dataclass(frozen=True)
class GaussianPosterior:
    """Posterior over ``(mu, sigma)`` for ``n`` Gaussian observations.

    ``mu_hat`` and ``sigma_hat`` are the sample mean and the standard deviation
    with divisor ``n``. Computations run in standardized units where the sample
    has mean 0 and standard deviation 1; the prior is stated in those units.
    """

    mu_hat: float
    sigma_hat: float
    n: int
    prior: SigmaPrior = SigmaPrior()

    def __post_init__(self):
        if not self.sigma_hat > 0 or not math.isfinite(self.sigma_hat):
            raise InputError(f"sigma_hat must be positive, got {self.sigma_hat}")
        if int(self.n) != self.n or self.n < 1:
            raise InputError(f"n must be a positive integer, got {self.n}")
        if not math.isfinite(self.mu_hat):
            raise InputError("mu_hat must be finite")

    @classmethod
    def from_samples(cls, values, prior=SigmaPrior()):
        v = np.asarray(values, dtype=np.float64)
        if v.size < 2:
            raise InputError("need at least two observations")
        return cls(float(v.mean()), float(v.std()), int(v.size), prior)

    def standardize(self, x):
        return (x - self.mu_hat) / self.sigma_hat


@dataclass(frozen=True)
class GenericPosterior:
    """Posterior over event probabilities on the simplex, known through a sampler.

    ``sampler(generator, size)`` returns an array of shape ``(size, m)``.
    """

    sampler: object
    m: int
    name: str = "custom"

    def __post_init__(self):
        if int(self.m) < 2:
            raise InputError("generic posterior needs m >= 2 events")

    def sample(self, size, rng):
        draws = np.asarray(self.sampler(rng.generator(), int(size)), dtype=np.float64)
        if draws.shape != (size, self.m):
            raise InputError(f"sampler returned shape {draws.shape}, expected {(size, self.m)}")
        if np.any(draws < -SIMPLEX_TOL) or np.any(np.abs(draws.sum(axis=1) - 1.0) > SIMPLEX_TOL):
            raise InputError("sampler produced points off the probability simplex")
        return np.clip(draws, 0.0, None)

    sample_event_probs = sample

    @classmethod
    def dirichlet(cls, alpha):
        alpha = np.asarray(alpha, dtype=np.float64)
        if alpha.ndim != 1 or np.any(alpha <= 0):
            raise InputError("Dirichlet parameters must be positive")
        return cls(lambda g, k: g.dirichlet(alpha, size=k), len(alpha), f"dirichlet{tuple(alpha)}")

    @classmethod
    def beta(cls, a, b):
        def draw(g, k):
            pi = g.beta(a, b, size=k)
            return np.column_stack([pi, 1.0 - pi])

        return cls(draw, 2, f"beta({a}, {b})")

    @classmethod
    def from_bernoulli(cls, post):
        return cls.beta(*post.beta_params)

    @classmethod
    def point_mass(cls, pi):
        pi = np.asarray(pi, dtype=np.float64)
        check_simplex(pi)
        return cls(lambda g, k: np.tile(pi, (k, 1)), len(pi), f"point{tuple(pi)}")

    @classmethod
    def from_gaussian(cls, post, z):
        """Two-event posterior of ``P(Z <= z)`` implied by a Gaussian posterior."""
        from .gaussian import sample_mu_sigma

        def draw(g, k):
            mu, sigma = sample_mu_sigma(post, k, g)
            pi = normal_cdf((z - mu) / sigma)
            return np.column_stack([pi, 1.0 - pi])

        return cls(draw, 2, f"gaussian(n={post.n}, z={z})")


def check_simplex(p, tol=SIMPLEX_TOL):
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size < 2:
        raise InputError("a probability vector needs at least two components")
    if np.any(p < 0) or not np.all(np.isfinite(p)) or abs(math.fsum(p) - 1.0) > tol:
        raise InputError(f"not a probability vector: {p.tolist()}")
    return p


def event_prob_sampler(post, z=None):
    """Return ``draw(size, rng) -> (size, m)`` event probabilities for any posterior type."""
    if isinstance(post, GaussianPosterior):
        if z is None:
            raise InputError("a Gaussian posterior needs the standardized threshold z")
        return GenericPosterior.from_gaussian(post, z).sample
    if isinstance(post, (BernoulliPosterior, GenericPosterior)):
        return post.sample_event_probs
    raise InputError(f"unsupported posterior type {type(post).__name__}")


__all__ = [
    "BernoulliPosterior",
    "GaussianPosterior",
    "GenericPosterior",
    "OddsAssignment",
    "Provenance",
    "RngStream",
    "SigmaPrior",
    "Utility",
    "check_simplex",
    "event_prob_sampler",
]
