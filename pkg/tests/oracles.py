"""Slow, obviously-correct reference implementations used as test oracles."""
import math

import numpy as np


def brute_ranks(x):
    x = np.asarray(x, dtype=float)
    return np.array([int(np.sum(x <= xi)) for xi in x])


def brute_segment_sums(v, j, k):
    seg = [float(t) for t in v[j - 1 : k]]
    mean = math.fsum(seg) / len(seg)
    out, acc = [], 0.0
    for t in seg:
        acc += t - mean
        out.append(acc)
    return out


def brute_sn(v):
    """Direct O(n^2) evaluation of T_{k,n} for k = 1..n-1."""
    v = np.asarray(v, dtype=float)
    n = v.size
    mean = math.fsum(v) / n
    out = []
    for k in range(1, n):
        num = math.fsum(v[:k]) - k * mean
        left = brute_segment_sums(v, 1, k)
        right = brute_segment_sums(v, k + 1, n)
        den = math.sqrt((math.fsum(s * s for s in left) + math.fsum(s * s for s in right)) / n)
        out.append(0.0 if den < 1e-12 * (np.max(np.abs(v)) ** 2 + 1) else num / den)
    return np.array(out)


def wilcoxon_double_sum(x):
    """sum_{i<=k} sum_{j>k} (1{X_j <= X_i} - 1/2) / (n + 1) for k = 1..n-1."""
    x = np.asarray(x, dtype=float)
    n = x.size
    out = []
    for k in range(1, n):
        s = 0.0
        for i in range(k):
            for j in range(k, n):
                s += (1.0 if x[j] <= x[i] else 0.0) - 0.5
        out.append(s / (n + 1))
    return np.array(out)


def double_sum_variance(n, r, acvf):
    """r! * sum_{i,j=1..n} gamma(|i - j|)^r over the full n x n lag matrix."""
    lags = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    table = np.array([acvf(k) for k in range(n)], dtype=float)
    return math.factorial(r) * math.fsum((table[lags] ** r).ravel())
