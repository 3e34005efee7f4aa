"""Two-dimensional integration over (location, scale) rectangles.

The adaptive method applies a tensor-product 15-point Gauss-Kronrod rule to
each rectangle and uses the embedded 7-point Gauss rule for the error
estimate. The rectangle with the largest error is bisected along the axis
whose one-dimensional error indicator dominates. The Monte Carlo method draws
uniform points from the rectangle with a seeded stream.
"""
import heapq
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..errors import InputError
from .random import RngStream

# 15-point Kronrod abscissae (positive half) and weights, with the 7-point Gauss
# weights for the embedded nodes (every second Kronrod node).
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG_FULL = np.zeros(15)
_WG_FULL[1::2] = np.array([_WG[0], _WG[1], _WG[2], _WG[3], _WG[2], _WG[1], _WG[0]])


@dataclass(frozen=True)
class Quadrature2DSpec:
    """Integration domain and stopping rule for :func:`integrate_2d`.

    The default domain is ``mu in [mu_center - mu_halfwidth, mu_center + mu_halfwidth]``
    and ``sigma in (sigma_floor, sigma_truncation]``.
    """

    sigma_truncation: float = 8.0
    mu_halfwidth: float = 8.0
    rel_tolerance: float = 1e-8
    max_evaluations: int = 2_000_000
    method: str = "adaptive"
    seed: int | None = None
    mu_center: float = 0.0
    sigma_floor: float = 0.0
    abs_tolerance: float = 0.0

    def __post_init__(self):
        if not self.rel_tolerance > 0:
            raise InputError("rel_tolerance must be positive")
        if not self.sigma_truncation > self.sigma_floor >= 0:
            raise InputError("need sigma_truncation > sigma_floor >= 0")
        if not self.mu_halfwidth > 0:
            raise InputError("mu_halfwidth must be positive")
        if self.max_evaluations < 225:
            raise InputError("max_evaluations must allow at least one cubature rule (225 points)")
        if self.method not in ("adaptive", "monte_carlo"):
            raise InputError(f"unknown quadrature method {self.method!r}")
        if self.method == "monte_carlo" and self.seed is None:
            raise InputError("monte_carlo quadrature requires a seed")


class Integral(NamedTuple):
    value: float
    error: float
    converged: bool
    evaluations: int


def _rule(f, boxes):
    """Apply the tensor rule to an array of boxes ``(k, 4)`` = (x0, x1, s0, s1)."""
    x0, x1, s0, s1 = boxes.T
    xc, xh = 0.5 * (x0 + x1), 0.5 * (x1 - x0)
    sc, sh = 0.5 * (s0 + s1), 0.5 * (s1 - s0)
    xs = xc[:, None] + xh[:, None] * _NODES[None, :]
    ss = sc[:, None] + sh[:, None] * _NODES[None, :]
    X = np.broadcast_to(xs[:, :, None], (len(boxes), 15, 15))
    S = np.broadcast_to(ss[:, None, :], (len(boxes), 15, 15))
    vals = np.asarray(f(X, S), dtype=np.float64)
    vals = np.broadcast_to(vals, X.shape)
    if not np.all(np.isfinite(vals)):
        raise InputError("integrand is not finite on the integration domain")
    area = xh * sh
    kk = np.einsum("bij,i,j->b", vals, _WK, _WK) * area
    gk = np.einsum("bij,i,j->b", vals, _WG_FULL, _WK) * area
    kg = np.einsum("bij,i,j->b", vals, _WK, _WG_FULL) * area
    gg = np.einsum("bij,i,j->b", vals, _WG_FULL, _WG_FULL) * area
    err = np.abs(kk - gg)
    return kk, err, np.abs(kk - gk), np.abs(kk - kg)


def _adaptive(f, x_range, s_range, spec):
    boxes = np.array([[x_range[0], x_range[1], s_range[0], s_range[1]]], dtype=np.float64)
    vals, errs, ex, es = _rule(f, boxes)
    evals = 225
    heap = []
    counter = 0
    for i in range(len(boxes)):
        heap.append((-errs[i], counter, boxes[i], vals[i], errs[i], ex[i] >= es[i]))
        counter += 1
    heapq.heapify(heap)
    total = float(vals.sum())
    total_err = float(errs.sum())
    batch = 8
    while True:
        target = max(spec.rel_tolerance * abs(total), spec.abs_tolerance)
        if total_err <= target:
            converged = True
            break
        if evals + 2 * 225 * batch > spec.max_evaluations:
            converged = False
            break
        popped = [heapq.heappop(heap) for _ in range(min(batch, len(heap)))]
        children = []
        for _, _, box, v, e, split_x in popped:
            total -= v
            total_err -= e
            x0, x1, s0, s1 = box
            if split_x:
                xm = 0.5 * (x0 + x1)
                children.append((x0, xm, s0, s1))
                children.append((xm, x1, s0, s1))
            else:
                sm = 0.5 * (s0 + s1)
                children.append((x0, x1, s0, sm))
                children.append((x0, x1, sm, s1))
        cboxes = np.array(children, dtype=np.float64)
        cv, ce, cx, cs = _rule(f, cboxes)
        evals += 225 * len(cboxes)
        for i in range(len(cboxes)):
            heapq.heappush(heap, (-ce[i], counter, cboxes[i], cv[i], ce[i], cx[i] >= cs[i]))
            counter += 1
        total += float(cv.sum())
        total_err += float(ce.sum())
        # re-sum occasionally to stop drift from repeated add/subtract
        if counter % 512 < 2 * batch:
            total = math.fsum(item[3] for item in heap)
            total_err = math.fsum(item[4] for item in heap)
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(item[4] for item in heap)
    return Integral(total, total_err, converged, evals)


def _monte_carlo(f, x_range, s_range, spec):
    gen = RngStream(spec.seed).generator()
    n = spec.max_evaluations
    chunk = 1_000_000
    area = (x_range[1] - x_range[0]) * (s_range[1] - s_range[0])
    s1 = s2 = 0.0
    done = 0
    while done < n:
        k = min(chunk, n - done)
        xs = gen.uniform(x_range[0], x_range[1], size=k)
        ss = gen.uniform(s_range[0], s_range[1], size=k)
        # uniform() can return the lower bound; keep sigma strictly inside
        ss = np.where(ss <= s_range[0], 0.5 * (s_range[0] + s_range[1]), ss)
        v = np.asarray(f(xs, ss), dtype=np.float64)
        s1 += math.fsum(v)
        s2 += math.fsum(v * v)
        done += k
    mean = s1 / n
    var = max(s2 / n - mean * mean, 0.0) * n / max(n - 1, 1)
    value = area * mean
    err = area * math.sqrt(var / n)
    converged = err <= max(spec.rel_tolerance * abs(value), spec.abs_tolerance)
    return Integral(value, err, converged, n)


def integrate_2d(f, spec=Quadrature2DSpec(), x_range=None, sigma_range=None):
    """Integrate ``f(mu, sigma)`` over a rectangle.

    Parameters
    ----------
    f : callable
        Vectorized integrand; receives broadcastable arrays ``(mu, sigma)``.
    spec : Quadrature2DSpec
        Default domain, tolerance, evaluation budget and method.
    x_range, sigma_range : (float, float), optional
        Override the default domain for the first and second coordinate.

    Returns
    -------
    Integral
        ``(value, error, converged, evaluations)``. When the budget runs out
        before the tolerance is met the best estimate is returned with
        ``converged=False``.
    """
    if x_range is None:
        x_range = (spec.mu_center - spec.mu_halfwidth, spec.mu_center + spec.mu_halfwidth)
    if sigma_range is None:
        sigma_range = (spec.sigma_floor, spec.sigma_truncation)
    x_range = (float(x_range[0]), float(x_range[1]))
    sigma_range = (float(sigma_range[0]), float(sigma_range[1]))
    if x_range[1] <= x_range[0] or sigma_range[1] <= sigma_range[0]:
        return Integral(0.0, 0.0, True, 0)
    if spec.method == "monte_carlo":
        return _monte_carlo(f, x_range, sigma_range, spec)
    return _adaptive(f, x_range, sigma_range, spec)
