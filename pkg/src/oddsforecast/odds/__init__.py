"""Odds engine: frequency, Gaussian and sampled posteriors under linear or log utility."""
from .frequency import freq_linear_odds, freq_log_odds, freq_odds, frequency_linear_total
from .gaussian import (
    DEFAULT_QUAD,
    GaussianOddsTable,
    gaussian_linear_odds,
    gaussian_log_odds,
    gaussian_odds,
    sample_mu_sigma,
)
from .generic import generic_linear_odds, generic_log_odds, generic_odds
from .probabilistic import probabilistic_odds
from .types import (
    BernoulliPosterior,
    GaussianPosterior,
    GenericPosterior,
    OddsAssignment,
    Provenance,
    SigmaPrior,
    Utility,
    check_simplex,
    event_prob_sampler,
)

__all__ = [
    "DEFAULT_QUAD",
    "BernoulliPosterior",
    "GaussianOddsTable",
    "GaussianPosterior",
    "GenericPosterior",
    "OddsAssignment",
    "Provenance",
    "SigmaPrior",
    "Utility",
    "check_simplex",
    "event_prob_sampler",
    "freq_linear_odds",
    "freq_log_odds",
    "freq_odds",
    "frequency_linear_total",
    "gaussian_linear_odds",
    "gaussian_log_odds",
    "gaussian_odds",
    "generic_linear_odds",
    "generic_log_odds",
    "generic_odds",
    "probabilistic_odds",
    "sample_mu_sigma",
]
