# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the self-normalized statistics.

Same arithmetic, in the same order, as ``_pykernels``; see that module for
the derivation. Window ranks are maintained incrementally while the window
slides, so one window costs O(l) instead of O(l^2).
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

cdef double DEGENERATE_TOL = 2e-12  # same as _pykernels.DEGENERATE_TOL


cdef inline void _bridge_sums(const double* P, Py_ssize_t n, double* out) noexcept nogil:
    cdef double C = 1.0, beta = P[0], rss = 0.0
    cdef double x, y, e, Cn, d
    cdef Py_ssize_t t
    out[0] = 0.0
    for t in range(2, n + 1):
        x = <double>t
        y = P[t - 1]
        e = y - beta * x
        Cn = C + x * x
        rss = rss + e * e * (C / Cn)
        beta = beta + (x * e) / Cn
        C = Cn
        d = y / x - beta
        out[t - 1] = rss + C * d * d


cdef double _sn_core(const double* v, Py_ssize_t n, double* work,
                     double* values, unsigned char* degenerate) noexcept nogil:
    """Trajectory into ``values``/``degenerate`` (may be NULL); returns max |T_k|.

    ``work`` must hold ``5 * n`` doubles.
    """
    cdef double* W = work
    cdef double* P = work + n
    cdef double* Q = work + 2 * n
    cdef double* left = work + 3 * n
    cdef double* right = work + 4 * n
    cdef double total = 0.0, mean, s = 0.0, a, num, den, val, best = 0.0
    cdef Py_ssize_t i, k
    for i in range(n):
        total = total + v[i]
    mean = total / n
    for i in range(n):
        W[i] = v[i] - mean
        a = fabs(W[i])
        if a > s:
            s = a
    if s == 0.0:
        for i in range(n):
            W[i] = 0.0
    else:
        for i in range(n):
            W[i] = W[i] / s
    P[0] = W[0]
    Q[0] = W[n - 1]
    for i in range(1, n):
        P[i] = P[i - 1] + W[i]
        Q[i] = Q[i - 1] + W[n - 1 - i]
    _bridge_sums(P, n, left)
    _bridge_sums(Q, n, right)
    for k in range(1, n):
        num = P[k - 1] - ((<double>k) / n) * P[n - 1]
        den = sqrt((left[k - 1] + right[n - k - 1]) / n)
        if den < DEGENERATE_TOL:
            val = 0.0
            if degenerate != NULL:
                degenerate[k - 1] = 1
        else:
            val = num / den
            if degenerate != NULL:
                degenerate[k - 1] = 0
        if values != NULL:
            values[k - 1] = val
        if fabs(val) > best:
            best = fabs(val)
    return best


def sn_values(v):
    """Self-normalized trajectory of ``v``; returns ``(values, degenerate)``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] arr = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] values = np.empty(n - 1)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] deg = np.empty(n - 1, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = np.empty(5 * n)
    with nogil:
        _sn_core(&arr[0], n, &work[0], &values[0], &deg[0])
    return values, deg.view(np.bool_)


def sn_rows(V):
    """Row-wise :func:`sn_values` for a 2-d array."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] arr = np.ascontiguousarray(np.atleast_2d(V), dtype=np.float64)
    cdef Py_ssize_t m = arr.shape[0], n = arr.shape[1], i
    cdef cnp.ndarray[cnp.float64_t, ndim=2] values = np.empty((m, n - 1))
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] deg = np.empty((m, n - 1), dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = np.empty(5 * n)
    with nogil:
        for i in range(m):
            _sn_core(&arr[i, 0], n, &work[0], &values[i, 0], &deg[i, 0])
    return values, deg.view(np.bool_)


def window_sn_max(x, Py_ssize_t l, scores=None, Py_ssize_t start=0, stop=None):
    """``max_k |T_{k,l}|`` on windows ``x[j:j+l]`` for ``start <= j < stop``.

    With ``scores`` (length ``l``) each window is replaced by the scores of
    its maximal ranks; otherwise the raw window is used.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t m_total = xs.shape[0] - l + 1
    cdef Py_ssize_t stp = m_total if stop is None else stop
    if stp <= start:
        return np.empty(0)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(stp - start)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = np.empty(5 * l)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf = np.empty(l)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ranks = np.empty(l, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sc
    cdef double* xp = &xs[0]
    cdef double* scp = NULL
    cdef long long* rk = <long long*>&ranks[0]
    cdef Py_ssize_t j, a, b, pos
    cdef double x_old, x_new, xv
    cdef long long cnt
    if scores is not None:
        sc = np.ascontiguousarray(scores, dtype=np.float64)
        if sc.shape[0] != l:
            raise ValueError("scores must have length l")
        scp = &sc[0]
    with nogil:
        if scp == NULL:
            for j in range(start, stp):
                out[j - start] = _sn_core(xp + j, l, &work[0], NULL, NULL)
        else:
            # ranks[(j + a) % l] is the maximal rank of x[j + a] within window j
            for a in range(l):
                cnt = 0
                xv = xp[start + a]
                for b in range(l):
                    if xp[start + b] <= xv:
                        cnt += 1
                rk[(start + a) % l] = cnt
            for j in range(start, stp):
                if j > start:
                    x_old = xp[j - 1]
                    x_new = xp[j + l - 1]
                    cnt = 1
                    for a in range(l - 1):
                        pos = (j + a) % l
                        xv = xp[j + a]
                        if x_old <= xv:
                            rk[pos] -= 1
                        if x_new <= xv:
                            rk[pos] += 1
                        if xv <= x_new:
                            cnt += 1
                    rk[(j + l - 1) % l] = cnt
                for a in range(l):
                    buf[a] = scp[rk[(j + a) % l] - 1]
                out[j - start] = _sn_core(&buf[0], l, &work[0], NULL, NULL)
    return out
