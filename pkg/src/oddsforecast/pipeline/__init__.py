"""Ensemble-forecast odds workflow: ingestion, bias correction, forecasters and campaigns."""
from .bias import BiasModel, ResidualStats, basis_names, design_matrix, fit_bias_model, fit_bias_pairs
from .campaign import (
    Bet,
    CampaignConfig,
    CampaignResult,
    analysis_spline,
    payout_plot_transform,
    place_bet,
    run_campaign,
)
from .forecast import (
    Aggregation,
    ForecastEvent,
    adjusted_control,
    adjusted_members,
    challenge_client,
    forecaster_odds,
    issue_threshold,
    member_probability,
)
from .io import (
    read_ensemble_csv,
    read_station_csv,
    write_ensemble_csv,
    write_station_csv,
)
from .series import EnsembleForecast, Spline, StationSeries, fit_spline
from .synthetic import SyntheticData, SyntheticScenario, generate, true_bias_coefficients

__all__ = [
    "Aggregation",
    "Bet",
    "BiasModel",
    "CampaignConfig",
    "CampaignResult",
    "EnsembleForecast",
    "ForecastEvent",
    "ResidualStats",
    "Spline",
    "StationSeries",
    "SyntheticData",
    "SyntheticScenario",
    "adjusted_control",
    "adjusted_members",
    "analysis_spline",
    "basis_names",
    "challenge_client",
    "design_matrix",
    "fit_bias_model",
    "fit_bias_pairs",
    "fit_spline",
    "forecaster_odds",
    "generate",
    "issue_threshold",
    "member_probability",
    "payout_plot_transform",
    "place_bet",
    "read_ensemble_csv",
    "read_station_csv",
    "run_campaign",
    "true_bias_coefficients",
    "write_ensemble_csv",
    "write_station_csv",
]
