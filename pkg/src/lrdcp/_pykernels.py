"""Pure numpy implementation of the hot kernels.

Mirrors ``_kernels.pyx`` operation for operation (same summation order, same
association of products) so that both backends return identical floats.

Self-normalized trajectory of a vector ``v`` of length ``n``:

* centre ``v`` by its mean and divide by ``max|v - mean|``; the statistic is
  invariant under positive affine maps, so this only improves conditioning;
* ``P_t`` forward partial sums, ``Q_s`` partial sums of the reversed vector;
* ``L_k = sum_{t<=k} (P_t - t P_k / k)^2`` is updated in one pass as the
  residual sum of squares of a regression of ``P_t`` on ``t`` through the
  origin plus the squared offset of the slope ``P_k / k`` from the least
  squares slope; every update adds nonnegative terms;
* the right-segment sum for split ``k`` equals the left sum of the reversed
  vector at ``n - k``.
"""
from __future__ import annotations

import numpy as np

DEGENERATE_TOL = 2e-12  # on the normalised scale, 1e-12 * (max|w|^2 + 1)
_CHUNK_ELEMS = 4_000_000


def _bridge_sums(P: np.ndarray) -> np.ndarray:
    m, n = P.shape
    out = np.empty((m, n))
    out[:, 0] = 0.0
    C = 1.0
    beta = P[:, 0].copy()
    rss = np.zeros(m)
    for t in range(2, n + 1):
        x = float(t)
        y = P[:, t - 1]
        e = y - beta * x
        Cn = C + x * x
        rss = rss + e * e * (C / Cn)
        beta = beta + (x * e) / Cn
        C = Cn
        d = y / x - beta
        out[:, t - 1] = rss + C * d * d
    return out


def sn_rows(V):
    """Self-normalized trajectories of each row of ``V``.

    Returns ``(values, degenerate)``, both of shape ``(m, n - 1)``.
    """
    V = np.array(V, dtype=float, ndmin=2)
    m, n = V.shape
    total = np.cumsum(V, axis=1)[:, -1]
    mean = total / n
    W = V - mean[:, None]
    s = np.max(np.abs(W), axis=1)
    flat = s == 0
    s[flat] = 1.0
    W = W / s[:, None]
    W[flat] = 0.0
    P = np.cumsum(W, axis=1)
    Q = np.cumsum(W[:, ::-1], axis=1)
    left = _bridge_sums(P)
    right = _bridge_sums(Q)
    k = np.arange(1, n)
    num = P[:, : n - 1] - (k / n) * P[:, n - 1 : n]
    den = np.sqrt((left[:, : n - 1] + right[:, n - 2 :: -1]) / n)
    degenerate = den < DEGENERATE_TOL
    values = np.where(degenerate, 0.0, num / np.where(degenerate, 1.0, den))
    return values, degenerate


def sn_values(v):
    values, degenerate = sn_rows(np.asarray(v, dtype=float)[None, :])
    return values[0], degenerate[0]


def _max_rank_rows(W: np.ndarray) -> np.ndarray:
    # R[i, a] = #{b : W[i, b] <= W[i, a]}
    out = np.empty(W.shape, dtype=np.int64)
    m, l = W.shape
    step = max(1, _CHUNK_ELEMS // (l * l))
    for lo in range(0, m, step):
        blk = W[lo : lo + step]
        out[lo : lo + step] = (blk[:, None, :] <= blk[:, :, None]).sum(axis=2)
    return out


def window_sn_max(x, l: int, scores=None, start: int = 0, stop: int | None = None):
    """``max_k |T_{k,l}|`` on windows ``x[j:j+l]`` for ``start <= j < stop``.

    With ``scores`` (length ``l``) each window is replaced by the scores of
    its maximal ranks; otherwise the raw window is used.
    """
    x = np.ascontiguousarray(x, dtype=float)
    m_total = x.size - l + 1
    stop = m_total if stop is None else stop
    if stop <= start:
        return np.empty(0)
    W = np.lib.stride_tricks.sliding_window_view(x, l)[start:stop]
    if scores is not None:
        scores = np.asarray(scores, dtype=float)
        W = scores[_max_rank_rows(W) - 1]
    out = np.empty(stop - start)
    step = max(1, _CHUNK_ELEMS // (8 * l))
    for lo in range(0, out.size, step):
        vals, _ = sn_rows(W[lo : lo + step])
        out[lo : lo + step] = np.max(np.abs(vals), axis=1)
    return out
