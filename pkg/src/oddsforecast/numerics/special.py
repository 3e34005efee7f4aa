"""Special functions: log beta, incomplete beta, normal CDF/quantile, harmonic numbers."""
import math
from functools import lru_cache
from statistics import NormalDist

import numpy as np
from scipy import special as _sp

from .. import _kernels
from ..errors import DomainError

_STD_NORMAL = NormalDist()


def ln_beta(a, b):
    """Natural log of the complete beta function B(a, b) for a, b > 0."""
    if not (a > 0 and b > 0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"ln_beta requires positive finite arguments, got a={a}, b={b}")
    return float(_sp.betaln(a, b))


def _check_beta_args(x, a, b):
    if not (a > 0 and b > 0):
        raise DomainError(f"incomplete beta requires a, b > 0, got a={a}, b={b}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"incomplete beta requires 0 <= x <= 1, got x={x}")


def _log_front(x, a, b):
    return a * math.log(x) + b * math.log1p(-x)


def regularized_incomplete_beta(x, a, b):
    """Regularized lower incomplete beta I_x(a, b) = B_x(a, b) / B(a, b).

    Continued fraction evaluated on whichever of ``x`` and ``1 - x`` converges
    faster; the other side follows from ``I_x(a, b) = 1 - I_{1-x}(b, a)``.
    """
    _check_beta_args(x, a, b)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    lb = ln_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(_log_front(x, a, b) - lb) * _kernels.beta_cf(a, b, x) / a
    y = 1.0 - x
    return 1.0 - math.exp(_log_front(y, b, a) - lb) * _kernels.beta_cf(b, a, y) / b


def incomplete_beta(x, a, b):
    """Unregularized lower incomplete beta, the integral of t^(a-1) (1-t)^(b-1) over [0, x].

    ``incomplete_beta(1, a, b)`` is the complete beta function. For large ``a`` and
    ``b`` the result underflows; use :func:`regularized_incomplete_beta` there.
    """
    _check_beta_args(x, a, b)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return math.exp(ln_beta(a, b))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(_log_front(x, a, b)) * _kernels.beta_cf(a, b, x) / a
    y = 1.0 - x
    full = math.exp(ln_beta(a, b))
    return full - math.exp(_log_front(y, b, a)) * _kernels.beta_cf(b, a, y) / b


def normal_cdf(z):
    """Standard normal CDF; accepts scalars or arrays."""
    if np.ndim(z) == 0:
        return 0.5 * math.erfc(-float(z) / math.sqrt(2.0))
    return _sp.ndtr(np.asarray(z, dtype=np.float64))


def normal_quantile(p):
    """Inverse of :func:`normal_cdf` on the open interval (0, 1)."""
    if np.ndim(p) == 0:
        p = float(p)
        if not (0.0 < p < 1.0):
            raise DomainError(f"normal_quantile requires 0 < p < 1, got {p}")
        return _STD_NORMAL.inv_cdf(p)
    arr = np.asarray(p, dtype=np.float64)
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise DomainError("normal_quantile requires 0 < p < 1")
    return _sp.ndtri(arr)


@lru_cache(maxsize=8192)
def harmonic(k):
    """Harmonic number H_k = 1 + 1/2 + ... + 1/k, with H_0 = 0.

    Terms are summed with :func:`math.fsum`, so the only error is the rounding of
    each reciprocal.
    """
    k = int(k)
    if k < 0:
        raise DomainError(f"harmonic requires k >= 0, got {k}")
    return math.fsum(1.0 / i for i in range(1, k + 1))
