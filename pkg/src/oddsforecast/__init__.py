"""Non-probabilistic odds forecasting."""
