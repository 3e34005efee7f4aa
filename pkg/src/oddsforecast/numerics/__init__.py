"""Numerical substrate: special functions, Brent minimization, 2D quadrature, random streams."""
from .optimize import minimize_scalar
from .quadrature import Integral, Quadrature2DSpec, integrate_2d
from .random import RngStream
from .special import (
    harmonic,
    incomplete_beta,
    ln_beta,
    normal_cdf,
    normal_quantile,
    regularized_incomplete_beta,
)

__all__ = [
    "Integral",
    "Quadrature2DSpec",
    "RngStream",
    "harmonic",
    "incomplete_beta",
    "integrate_2d",
    "ln_beta",
    "minimize_scalar",
    "normal_cdf",
    "normal_quantile",
    "regularized_incomplete_beta",
]
