"""Self-normalized change-point trajectories ``T_{k,n}`` for rank scores and
for raw observations.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .cp_stats import ScoreLike, _checked, rank_scores
from .errors import DomainError
from .lrd_sim import as_values
from .scores import ScoreSpec, make_scores


@dataclass(frozen=True)
class SNTrajectory:
    """``values[k-1] = T_{k,n}``; entries with a vanishing denominator are 0 and listed in ``degenerate_ks``."""

    values: np.ndarray
    max_abs: float
    argmax_k: int
    degenerate_ks: list = field(default_factory=list)


def segment_partial_sums(v, j: int, k: int) -> np.ndarray:
    """``S_{t;j,k} = sum_{h=j}^{t} (v_h - mean(v_j..v_k))`` for ``t = j..k`` (1-based, inclusive)."""
    v = as_values(v)
    if not 1 <= j <= k <= v.size:
        raise DomainError(f"need 1 <= j <= k <= {v.size}, got j={j}, k={k}")
    seg = v[j - 1 : k]
    centred = seg - seg.mean()
    out = np.cumsum(centred)
    out[-1] = 0.0  # exact by construction
    return out


def sn_trajectory(v) -> SNTrajectory:
    """Self-normalized trajectory of a real vector.

    ``T_{k,n} = S_{k;1,n} / sqrt((1/n)(sum_{t<=k} S_{t;1,k}^2 + sum_{t>k} S_{t;k+1,n}^2))``
    for ``k = 1..n-1``, computed in O(n) by the active kernel backend.
    """
    v = as_values(v)
    if v.size < 3:
        raise DomainError(f"self-normalized statistics need n >= 3, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise DomainError("self-normalized statistics need finite input")
    values, degenerate = _backend.sn_values(v)
    values = np.asarray(values)
    absval = np.abs(values)
    i = int(np.argmax(absval))
    return SNTrajectory(values, float(absval[i]), i + 1,
                        [int(k) + 1 for k in np.nonzero(degenerate)[0]])


def sn_rank_stat(series, spec: ScoreLike) -> SNTrajectory:
    """Self-normalized rank statistic: :func:`sn_trajectory` of ``a(R_1..R_n)``; ``max_abs`` is ``T_n(a)``."""
    x = _checked(series)
    if x.size < 3:
        raise DomainError(f"self-normalized statistics need n >= 3, got {x.size}")
    return sn_trajectory(rank_scores(x, spec))


def sn_cusum_stat(series) -> SNTrajectory:
    """Self-normalized CuSum: :func:`sn_trajectory` of the raw observations."""
    return sn_trajectory(_checked(series))


class SNRankStatistic:
    """Callable ``series -> T_n(a)`` for a fixed score specification.

    ``window_values`` evaluates the statistic on every length-``l`` window at
    once through the kernel backend; it gives the same numbers as calling the
    object on each window.
    """

    def __init__(self, spec: ScoreSpec):
        self.spec = spec
        self.name = spec.name

    def __call__(self, series) -> float:
        return sn_rank_stat(series, self.spec).max_abs

    def trajectory(self, series) -> SNTrajectory:
        return sn_rank_stat(series, self.spec)

    def window_values(self, x: np.ndarray, l: int, start: int = 0, stop=None) -> np.ndarray:
        return _backend.window_sn_max(x, l, make_scores(self.spec, l), start, stop)


class SNCusumStatistic:
    """Callable ``series -> max_k |T_{k,n}|`` on the raw observations."""

    name = "cusum"

    def __call__(self, series) -> float:
        return sn_cusum_stat(series).max_abs

    def trajectory(self, series) -> SNTrajectory:
        return sn_cusum_stat(series)

    def window_values(self, x: np.ndarray, l: int, start: int = 0, stop=None) -> np.ndarray:
        return _backend.window_sn_max(x, l, None, start, stop)
