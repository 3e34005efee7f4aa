# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, log, sqrt, INFINITY

cnp.import_array()

cdef double _TINY = 1e-300


def beta_cf(double a, double b, double x, double eps=1e-15, long max_iter=20000):
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef long m, m2
    if fabs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if fabs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if fabs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )


cdef inline void _neumaier(double *total, double *comp, double inc) nogil:
    cdef double s = total[0] + inc
    if fabs(total[0]) >= fabs(inc):
        comp[0] += (total[0] - s) + inc
    else:
        comp[0] += (inc - s) + total[0]
    total[0] = s


def mean_max_ratio(samples, inv_p):
    cdef const double[:, ::1] sv = np.ascontiguousarray(samples, dtype=np.float64)
    cdef const double[::1] ip = np.ascontiguousarray(inv_p, dtype=np.float64)
    cdef Py_ssize_t n = sv.shape[0], m = sv.shape[1], k, i
    cdef double best, v, total = 0.0, comp = 0.0, mean, dev, vtot = 0.0, vcomp = 0.0
    cdef double[::1] vals = np.empty(n, dtype=np.float64)
    with nogil:
        for k in range(n):
            best = sv[k, 0] * ip[0]
            for i in range(1, m):
                v = sv[k, i] * ip[i]
                if v > best:
                    best = v
            vals[k] = best
            _neumaier(&total, &comp, best)
        mean = (total + comp) / n
        for k in range(n):
            dev = vals[k] - mean
            _neumaier(&vtot, &vcomp, dev * dev)
    if n < 2:
        return mean, 0.0
    return mean, sqrt((vtot + vcomp) / (n - 1))


def argmax_ratio(samples, inv_p):
    cdef const double[:, ::1] sv = np.ascontiguousarray(samples, dtype=np.float64)
    cdef const double[::1] ip = np.ascontiguousarray(inv_p, dtype=np.float64)
    cdef Py_ssize_t n = sv.shape[0], m = sv.shape[1], k, i
    cdef cnp.int64_t[::1] out = np.empty(n, dtype=np.int64)
    cdef double best, v
    cdef cnp.int64_t arg
    with nogil:
        for k in range(n):
            best = sv[k, 0] * ip[0]
            arg = 0
            for i in range(1, m):
                v = sv[k, i] * ip[i]
                if v > best:
                    best = v
                    arg = i
            out[k] = arg
    return np.asarray(out)


def wealth_path(outcomes, bets, inv_q, double w0, bint log_mode):
    cdef const cnp.int64_t[::1] oc = np.ascontiguousarray(outcomes, dtype=np.int64)
    cdef const double[:, ::1] bt = np.ascontiguousarray(bets, dtype=np.float64)
    cdef const double[::1] iq = np.ascontiguousarray(inv_q, dtype=np.float64)
    cdef Py_ssize_t rounds = oc.shape[0], t
    cdef cnp.int64_t o
    cdef double ret, inc
    cdef double total = log(w0) if log_mode else w0
    cdef double comp = 0.0
    out_arr = np.empty(rounds + 1, dtype=np.float64)
    cdef double[::1] out = out_arr
    out[0] = total
    with nogil:
        for t in range(rounds):
            o = oc[t]
            ret = bt[t, o] * iq[o]
            if log_mode:
                inc = log(ret) if ret > 0.0 else -INFINITY
            else:
                inc = ret - 1.0
            _neumaier(&total, &comp, inc)
            out[t + 1] = total + comp
    return out_arr
