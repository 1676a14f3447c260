"""Sampling-window (subsampling) null distributions and the composed test.

For a series of length ``n`` and block length ``l`` the statistic is
evaluated on every window of ``l`` consecutive observations; the ``n - l + 1``
values estimate the null distribution of the full-sample statistic.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Union

import numpy as np

from .cp_stats import _checked
from .errors import DomainError
from .scores import ScoreSpec
from .self_norm import SNCusumStatistic, SNRankStatistic

TEST_NAMES = ("wilcoxon", "vdw", "median", "cusum")


@dataclass(frozen=True)
class NullDistribution:
    """Sorted window statistics ``T_{l,1}, ..., T_{l,m}`` for block length ``l``."""

    sorted_values: np.ndarray
    block_length: int

    def __post_init__(self):
        if self.sorted_values.size < 1:
            raise DomainError("a null distribution needs at least one window")

    @property
    def m(self) -> int:
        return int(self.sorted_values.size)

    def cdf(self, t: float) -> float:
        return np.searchsorted(self.sorted_values, t, side="right") / self.m


@dataclass(frozen=True)
class TestReport:
    statistic_name: str
    observed: float
    p_value: float
    critical_value: float
    level: float
    reject: bool
    argmax_k: int
    block_length: int

    __test__ = False  # keep pytest from collecting this class

    FIELDS = ("statistic_name", "observed", "p_value", "critical_value", "level",
              "reject", "argmax_k", "block_length")

    def as_dict(self) -> dict:
        return asdict(self)

    def _fmt(self, key) -> str:
        value = getattr(self, key)
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return repr(value)
        return str(value)

    def to_text(self) -> str:
        """Flat ``key=value`` block, one field per line."""
        return "".join(f"{k}={self._fmt(k)}\n" for k in self.FIELDS)

    @classmethod
    def csv_header(cls) -> str:
        return ",".join(cls.FIELDS)

    def to_csv_row(self) -> str:
        return ",".join(self._fmt(k) for k in self.FIELDS)


def _split(m: int, parts: int) -> list[tuple[int, int]]:
    edges = np.linspace(0, m, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def subsample_distribution(series, l: int, stat: Callable, workers: int = 1) -> NullDistribution:
    """Evaluate ``stat`` on all windows ``X_k..X_{k+l-1}``, ``k = 1..n-l+1``.

    Statistics exposing ``window_values(x, l, start, stop)`` (the
    self-normalized statistics of this package) take a vectorised path.
    Any other callable is applied window by window. ``workers > 1`` splits
    the windows over threads; the result does not depend on ``workers``.
    """
    x = _checked(series)
    n = x.size
    if l >= n:
        raise DomainError(f"block length {l} must be smaller than n = {n}")
    if l < 2:
        raise DomainError(f"block length must be at least 2, got {l}")
    m = n - l + 1

    fast = getattr(stat, "window_values", None)
    if fast is not None:
        def run(lo, hi):
            return np.asarray(fast(x, l, lo, hi), dtype=float)
    else:
        def run(lo, hi):
            return np.array([float(stat(x[j:j + l])) for j in range(lo, hi)], dtype=float)

    chunks = _split(m, max(1, int(workers)))
    if len(chunks) == 1:
        values = run(0, m)
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            values = np.concatenate(list(pool.map(lambda c: run(*c), chunks)))
    return NullDistribution(np.sort(values, kind="stable"), int(l))


def quantile_and_pvalue(dist: NullDistribution, level: float, observed: float) -> tuple[float, float]:
    """Critical value ``inf{t : F(t) >= 1 - level}`` and p-value ``#{T_k >= observed} / m``."""
    if not 0 < level < 1:
        raise DomainError(f"level must lie in (0, 1), got {level}")
    vals = dist.sorted_values
    m = vals.size
    if m == 0:
        raise DomainError("empty null distribution")
    # smallest index i (0-based) with (i + 1) / m >= 1 - level
    i = max(0, math.ceil(m * (1.0 - level) - 1e-9) - 1)
    critical = float(vals[min(i, m - 1)])
    p_value = (m - int(np.searchsorted(vals, observed, side="left"))) / m
    return critical, float(p_value)


class BlockRule:
    """Block length given explicitly (``"22"``) or as ``l = floor(n ** gamma)`` (``"gamma:0.5"``)."""

    def __init__(self, length: int | None = None, gamma: float | None = None):
        if (length is None) == (gamma is None):
            raise DomainError("give exactly one of an explicit length or gamma")
        if gamma is not None and not 0 < gamma < 1:
            raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
        self.length = length
        self.gamma = gamma

    @classmethod
    def parse(cls, text: Union[str, int, "BlockRule"]) -> "BlockRule":
        if isinstance(text, BlockRule):
            return text
        if isinstance(text, (int, np.integer)):
            return cls(length=int(text))
        s = str(text).strip()
        try:
            if s.lower().startswith("gamma:"):
                return cls(gamma=float(s.split(":", 1)[1]))
            return cls(length=int(s))
        except ValueError:
            raise DomainError(f"cannot parse block rule {text!r}; use N or gamma:F") from None

    def resolve(self, n: int) -> int:
        if self.length is not None:
            l = self.length
        else:
            # guard against n ** gamma landing just below an integer
            l = int(math.floor(n ** self.gamma + 1e-9))
        if l < 3:
            raise DomainError(f"block length resolves to {l}; at least 3 is required")
        return l

    def __str__(self):
        return str(self.length) if self.length is not None else f"gamma:{self.gamma:g}"


def make_statistic(test: Union[str, ScoreSpec]):
    """Statistic functor for a test name (``wilcoxon``, ``vdw``, ``median``,
    ``cusum``, ``custom:<file>``) or a :class:`ScoreSpec`."""
    if isinstance(test, ScoreSpec):
        return SNRankStatistic(test)
    name = str(test).strip()
    if name.lower() in ("cusum", "c"):
        return SNCusumStatistic()
    return SNRankStatistic(ScoreSpec.parse(name))


def run_test(series, test, block, level: float = 0.05, workers: int = 1) -> TestReport:
    """Self-normalized change-point test with a subsampling critical value."""
    x = _checked(series)
    if x.size < 10:
        raise DomainError(f"a test needs at least 10 observations, got {x.size}")
    l = BlockRule.parse(block).resolve(x.size)
    stat = make_statistic(test)
    traj = stat.trajectory(x)
    dist = subsample_distribution(x, l, stat, workers=workers)
    critical, p_value = quantile_and_pvalue(dist, level, traj.max_abs)
    return TestReport(
        statistic_name=stat.name,
        observed=traj.max_abs,
        p_value=p_value,
        critical_value=critical,
        level=float(level),
        reject=bool(traj.max_abs > critical),
        argmax_k=traj.argmax_k,
        block_length=l,
    )
