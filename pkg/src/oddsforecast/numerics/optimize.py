"""Bounded scalar minimization by Brent's method."""
import math

from ..errors import InputError, NumericError

_GOLDEN = 0.5 * (3.0 - math.sqrt(5.0))
_SQRT_EPS = math.sqrt(2.2e-16)


def minimize_scalar(f, lo, hi, tol=1e-10, max_iter=500):
    """Minimize ``f`` on ``[lo, hi]`` with golden-section steps and parabolic interpolation.

    Parameters
    ----------
    f : callable
        Scalar function. Non-finite values are treated as ``+inf`` so that
        singular endpoints do not derail the search.
    lo, hi : float
        Search interval, ``lo < hi``. ``f`` is only evaluated strictly inside it.
    tol : float
        Absolute tolerance on the abscissa.

    Returns
    -------
    (argmin, min) : tuple of float
        A local minimizer within about ``tol`` (plus a relative term of order
        ``sqrt(eps) * |argmin|``); global when ``f`` is unimodal on the interval.
    """
    if not lo < hi:
        raise InputError(f"minimize_scalar requires lo < hi, got [{lo}, {hi}]")
    if not tol > 0:
        raise InputError("tol must be positive")

    seen_finite = False

    def fval(x):
        nonlocal seen_finite
        v = f(x)
        try:
            v = float(v)
        except (TypeError, ValueError):
            v = math.nan
        if math.isfinite(v):
            seen_finite = True
            return v
        return math.inf

    a, b = lo, hi
    x = w = v = a + _GOLDEN * (b - a)
    fx = fw = fv = fval(x)
    d = e = 0.0
    for _ in range(max_iter):
        xm = 0.5 * (a + b)
        tol1 = _SQRT_EPS * abs(x) + tol / 3.0
        tol2 = 2.0 * tol1
        if abs(x - xm) <= tol2 - 0.5 * (b - a):
            break
        golden = True
        if abs(e) > tol1 and math.isfinite(fx) and math.isfinite(fw) and math.isfinite(fv):
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            etemp = e
            e = d
            if abs(p) < abs(0.5 * q * etemp) and p > q * (a - x) and p < q * (b - x):
                d = p / q
                u = x + d
                if u - a < tol2 or b - u < tol2:
                    d = tol1 if xm >= x else -tol1
                golden = False
        if golden:
            e = (b - x) if x < xm else (a - x)
            d = _GOLDEN * e
        u = x + d if abs(d) >= tol1 else x + (tol1 if d > 0 else -tol1)
        fu = fval(u)
        if fu <= fx:
            if u >= x:
                a = x
            else:
                b = x
            v, w, x = w, x, u
            fv, fw, fx = fw, fx, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, w = w, u
                fv, fw = fw, fu
            elif fu <= fv or v == x or v == w:
                v = u
                fv = fu
    else:
        raise NumericError(
            "Brent minimization did not converge", iterations=max_iter, bracket=(a, b), x=x
        )
    if not seen_finite:
        raise NumericError("objective was non-finite at every probe", bracket=(lo, hi))
    return x, fx
