"""Twelve-parameter diurnal bias model mapping model temperature to station temperature.

``y = p0(x) + p1(x) cos(2 pi h/24) + p2(x) sin(2 pi h/24)`` with cubic ``p_j``.
Coefficient ``4*j + k`` multiplies ``x**k`` in ``p_j``.
"""
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..errors import InputError, NumericError
from .series import Spline, StationSeries

N_COEF = 12
MIN_PAIRS = 50
_HARMONICS = ("1", "cos", "sin")
_POWERS = ("", "x", "x^2", "x^3")


def basis_names():
    return tuple(
        (f"{_POWERS[k]}*{_HARMONICS[j]}" if k and j else (_POWERS[k] or _HARMONICS[j]))
        for j in range(3) for k in range(4)
    )


def design_matrix(x, h):
    x = np.asarray(x, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    w = 2.0 * np.pi * h / 24.0
    harm = (np.ones_like(x), np.cos(w), np.sin(w))
    cols = [x**k * harm[j] for j in range(3) for k in range(4)]
    return np.column_stack(cols)


def _selection_order():
    # degree-major: 1, cos, sin, x, x cos, x sin, ...
    return [4 * j + k for k in range(4) for j in range(3)]


@dataclass(frozen=True)
class ResidualStats:
    mean: float
    std: float
    skewness: float
    kurtosis: float

    @classmethod
    def of(cls, r):
        r = np.asarray(r, dtype=np.float64)
        std = float(np.std(r))
        scale = max(float(np.max(np.abs(r))) if r.size else 0.0, 1.0)
        if std <= 1e-13 * scale:
            return cls(float(np.mean(r)), std, 0.0, 0.0)
        return cls(
            float(np.mean(r)), std, float(stats.skew(r)), float(stats.kurtosis(r, fisher=True))
        )


@dataclass(frozen=True)
class BiasModel:
    coefficients: tuple
    residual_std: float
    residuals: ResidualStats = None
    deficient: tuple = ()

    def __post_init__(self):
        c = tuple(float(v) for v in self.coefficients)
        if len(c) != N_COEF:
            raise InputError(f"bias model needs exactly {N_COEF} coefficients, got {len(c)}")
        if not self.residual_std >= 0:
            raise InputError("residual_std must be non-negative")
        object.__setattr__(self, "coefficients", c)
        if self.residuals is None:
            object.__setattr__(self, "residuals", ResidualStats(0.0, float(self.residual_std), 0.0, 0.0))

    def polynomials(self):
        c = np.asarray(self.coefficients)
        return c[0:4], c[4:8], c[8:12]

    def apply(self, x, h):
        """Adjusted (station-equivalent) temperature for model temperature ``x`` at hour ``h``."""
        xa = np.asarray(x, dtype=np.float64)
        ha = np.broadcast_to(np.asarray(h, dtype=np.float64), xa.shape)
        out = design_matrix(xa.ravel(), ha.ravel()) @ np.asarray(self.coefficients)
        return float(out[0]) if xa.ndim == 0 else out.reshape(xa.shape)

    def residual_stats(self, x, h, y):
        return ResidualStats.of(np.asarray(y, dtype=np.float64) - self.apply(np.asarray(x), np.asarray(h)))


def fit_bias_pairs(x, h, y, strict=False):
    """Least-squares fit on paired model temperature, hour of day and station temperature.

    Basis directions that are linearly dependent on earlier ones (degree-major
    order) get a zero coefficient and are listed in ``deficient``; with
    ``strict=True`` they raise :class:`NumericError` instead.
    """
    x = np.asarray(x, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if not (x.shape == h.shape == y.shape) or x.ndim != 1:
        raise InputError("x, h and y must be 1-D of equal length")
    if x.size < MIN_PAIRS:
        raise InputError(f"bias fit needs at least {MIN_PAIRS} pairs, got {x.size}")
    hh = np.sort(np.mod(h, 24.0))
    gaps = np.diff(np.concatenate([hh, hh[:1] + 24.0]))
    if gaps.max() > 12.0:
        raise InputError("bias fit samples must span a full diurnal cycle")
    A = design_matrix(x, h)
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    An = A / norms
    names = basis_names()
    keep, dropped = [], []
    for col in _selection_order():
        trial = keep + [col]
        sv = np.linalg.svd(An[:, trial], compute_uv=False)
        if sv[-1] > 1e-9 * sv[0]:
            keep = trial
        else:
            dropped.append(col)
    if dropped and strict:
        raise NumericError(
            "rank-deficient bias design: " + ", ".join(names[c] for c in dropped),
            deficient=tuple(names[c] for c in dropped),
        )
    sol, *_ = np.linalg.lstsq(An[:, keep], y, rcond=None)
    coef = np.zeros(N_COEF)
    coef[keep] = sol / norms[keep]
    model = BiasModel(tuple(coef), 0.0, deficient=tuple(names[c] for c in sorted(dropped)))
    res = model.residual_stats(x, h, y)
    return BiasModel(model.coefficients, res.std, res, model.deficient)


def paired_samples(model_curve, station):
    """``(x, h, y)`` at station times inside the model curve's domain; ``model_curve`` takes epoch hours."""
    t = station.hours
    lo, hi = model_curve.domain
    mask = (t >= lo) & (t <= hi)
    return model_curve(t[mask]), station.hour_of_day[mask], station.temperatures[mask]


def fit_bias_model(model_series, station, strict=False):
    """Fit the bias model of a splined model series (epoch-hour knots) against a station series."""
    if not isinstance(model_series, Spline):
        raise InputError("model_series must be a fitted Spline")
    if not isinstance(station, StationSeries):
        raise InputError("station must be a StationSeries")
    return fit_bias_pairs(*paired_samples(model_series, station), strict=strict)
