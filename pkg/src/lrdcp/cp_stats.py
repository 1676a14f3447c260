"""Ranks, rank-based CuSum trajectories and the plain CuSum trajectory."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .lrd_sim import as_values
from .scores import ScoreSpec, make_scores

ScoreLike = Union[ScoreSpec, np.ndarray]


class TiesWarning(UserWarning):
    """Emitted when observations tie; tied values share their maximal rank."""


@dataclass(frozen=True)
class StatTrajectory:
    """Values for ``k = 1..n-1`` (``values[k-1]``) with the location of the maximum."""

    values: np.ndarray
    max_abs: float
    argmax_k: int

    @classmethod
    def from_values(cls, values: np.ndarray) -> "StatTrajectory":
        values = np.asarray(values, dtype=float)
        absval = np.abs(values)
        i = int(np.argmax(absval))  # first occurrence = smallest k
        return cls(values, float(absval[i]), i + 1)


def _checked(series) -> np.ndarray:
    x = as_values(series)
    if np.any(np.isnan(x)):
        raise DomainError("series contains NaN")
    return x


def ranks(series, warn_ties: bool = True) -> np.ndarray:
    """Maximal ranks ``R_i = #{j : X_j <= X_i}``."""
    x = _checked(series)
    if x.size < 1:
        raise DomainError("ranks of an empty series")
    srt = np.sort(x)
    r = np.searchsorted(srt, x, side="right")
    if warn_ties and x.size > 1 and np.any(srt[1:] == srt[:-1]):
        warnings.warn("tied observations: ties receive their maximal rank", TiesWarning, stacklevel=2)
    return r.astype(np.int64)


def resolve_scores(spec: ScoreLike, n: int) -> np.ndarray:
    if isinstance(spec, ScoreSpec):
        return make_scores(spec, n)
    a = np.asarray(spec, dtype=float)
    if a.shape != (n,):
        raise DomainError(f"score vector has shape {a.shape}, expected ({n},)")
    return a


def rank_scores(series, spec: ScoreLike, warn_ties: bool = True) -> np.ndarray:
    """The sequence ``a(R_1), ..., a(R_n)``."""
    x = _checked(series)
    a = resolve_scores(spec, x.size)
    return a[ranks(x, warn_ties) - 1]


def _cusum(v: np.ndarray) -> np.ndarray:
    n = v.size
    csum = np.cumsum(v)
    k = np.arange(1, n)
    return csum[:-1] - (k / n) * csum[-1]


def rank_cusum_trajectory(series, spec: ScoreLike) -> StatTrajectory:
    """``S_{k,n}(a) = sum_{i<=k} a(R_i) - (k/n) sum_{i<=n} a(R_i)``, ``k = 1..n-1``.

    ``spec`` is a :class:`ScoreSpec` or an explicit score vector ``a(1..n)``.
    """
    x = _checked(series)
    if x.size < 2:
        raise DomainError("a trajectory needs n >= 2")
    return StatTrajectory.from_values(_cusum(rank_scores(x, spec)))


def cusum_trajectory(series) -> StatTrajectory:
    """``sum_{i<=k} X_i - (k/n) sum_{i<=n} X_i``, ``k = 1..n-1``."""
    x = _checked(series)
    if x.size < 2:
        raise DomainError("a trajectory needs n >= 2")
    return StatTrajectory.from_values(_cusum(x))


def rank_edf(series, k: int, x: float) -> int:
    """``#{i <= k : R_i / (n + 1) <= x}``."""
    values = _checked(series)
    n = values.size
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, {n}], got {k}")
    r = ranks(values, warn_ties=False)[:k]
    # compare R_i <= x (n + 1) on integers where possible
    return int(np.count_nonzero(r / (n + 1.0) <= x))
