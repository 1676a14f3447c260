"""Fractional Gaussian noise, subordination to target marginals and level-shift
injection.

Random streams come from numpy's counter-based Philox generator keyed by a
:class:`numpy.random.SeedSequence`; replication ``i`` of a Monte Carlo run
uses ``SeedSequence(master, spawn_key=(i,))`` so results do not depend on the
order in which replications are executed.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError, EmbeddingError
from .gaussian_core import normal_cdf

SeedLike = Union[int, np.random.SeedSequence]

_EIG_TOL = 1e-8


@dataclass
class TimeSeries:
    """Observations ``X_1..X_n`` with optional time labels."""

    values: np.ndarray
    labels: Optional[Sequence] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise DomainError("time series values must be one-dimensional")
        if self.labels is not None and len(self.labels) != len(self.values):
            raise DomainError(
                f"labels have length {len(self.labels)}, values have length {len(self.values)}"
            )

    def __len__(self):
        return len(self.values)

    def label(self, k: int):
        """Label of observation ``k`` (1-based); ``k`` itself when unlabeled."""
        return k if self.labels is None else self.labels[k - 1]


def as_values(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    arr = np.asarray(series, dtype=float)
    if arr.ndim != 1:
        raise DomainError("time series values must be one-dimensional")
    return arr


@dataclass(frozen=True)
class MarginalSpec:
    """Marginal law of ``G(xi)``; ``kind`` is one of normal, pareto, cauchy, chisq1.

    ``hermite_rank`` is the rank of the indicator class
    ``1{G(xi) <= x} - F(x)``, stored for ``d_{n,r}`` diagnostics.
    """

    kind: str = "normal"
    alpha: float = 3.0
    k_scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("normal", "pareto", "cauchy", "chisq1"):
            raise DomainError(f"unknown marginal kind {self.kind!r}")
        if self.kind == "pareto":
            if not self.alpha > 2:
                raise DomainError(f"pareto margins need alpha > 2, got {self.alpha}")
            if not self.k_scale > 0:
                raise DomainError(f"pareto margins need k > 0, got {self.k_scale}")

    @classmethod
    def parse(cls, name: str) -> "MarginalSpec":
        """``normal``, ``pareto`` / ``pareto:ALPHA[:K]``, ``cauchy``, ``chisq``/``chisq1``."""
        head, _, rest = name.strip().lower().partition(":")
        if head == "pareto":
            if rest:
                parts = rest.split(":")
                alpha = float(parts[0])
                k = float(parts[1]) if len(parts) > 1 else 1.0
                return cls("pareto", alpha, k)
            return cls("pareto")
        if head in ("chisq", "chisq1", "chi2"):
            return cls("chisq1")
        if head in ("normal", "gaussian"):
            return cls("normal")
        return cls(head)

    @property
    def hermite_rank(self) -> int:
        return 2 if self.kind == "chisq1" else 1

    @property
    def monotone(self) -> Optional[str]:
        return {"normal": "increasing", "cauchy": "increasing",
                "pareto": "decreasing", "chisq1": None}[self.kind]

    def transform(self, t):
        """Apply ``G`` elementwise."""
        t = np.asarray(t, dtype=float)
        if self.kind == "normal":
            return t.copy()
        if self.kind == "pareto":
            a, k = self.alpha, self.k_scale
            norm = (a * k * k / ((a - 1.0) ** 2 * (a - 2.0))) ** -0.5
            return norm * (k * normal_cdf(t) ** (-1.0 / a) - a * k / (a - 1.0))
        if self.kind == "cauchy":
            return np.tan(np.pi * (normal_cdf(t) - 0.5))
        return 0.5 * (t * t - 1.0)


@dataclass(frozen=True)
class ShiftSpec:
    tau: float
    height: float

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise DomainError(f"change fraction tau must lie in (0, 1), got {self.tau}")


def fgn_acvf(H: float, k):
    """Autocovariance of unit-variance fractional Gaussian noise at lag ``k``."""
    if not 0.0 < H < 1.0:
        raise DomainError(f"Hurst parameter must lie in (0, 1), got {H}")
    k = np.abs(np.asarray(k, dtype=float))
    h2 = 2.0 * H
    out = 0.5 * (np.abs(k + 1.0) ** h2 - 2.0 * k ** h2 + np.abs(k - 1.0) ** h2)
    return out if out.ndim else float(out)


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(seed))


def replication_seed(master: int, index: int) -> np.random.SeedSequence:
    """Seed of replication ``index`` under master seed ``master``."""
    return np.random.SeedSequence(int(master), spawn_key=(int(index),))


@functools.lru_cache(maxsize=32)
def circulant_eigenvalues(n: int, H: float) -> np.ndarray:
    """Eigenvalues of the ``(2n-2)``-periodic circulant embedding of the fGn covariance.

    Cached per ``(n, H)``; the returned array is read-only.
    """
    gamma = fgn_acvf(H, np.arange(n))
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(row).real
    lam.setflags(write=False)
    return lam


def simulate_fgn(n: int, H: float, seed: SeedLike) -> TimeSeries:
    """Sample a length-``n`` fGn path by circulant embedding.

    Deterministic given ``(n, H, seed)``.
    """
    if n < 2:
        raise DomainError(f"fGn length must be >= 2, got {n}")
    lam = circulant_eigenvalues(n, H)
    m = lam.size
    lo = lam.min()
    if lo < -_EIG_TOL * lam.max():
        raise EmbeddingError(f"circulant embedding eigenvalue {lo:.3e} is negative (n={n}, H={H})")
    lam = np.clip(lam, 0.0, None)
    rng = make_rng(seed)
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    path = np.fft.fft(np.sqrt(lam) * z).real[:n] / math.sqrt(m)
    return TimeSeries(path)


def subordinate(base, marginal: MarginalSpec) -> TimeSeries:
    """Map standard Gaussian observations through ``G`` of ``marginal``."""
    values = as_values(base)
    if not np.all(np.isfinite(values)):
        raise DomainError("base series must be finite")
    labels = base.labels if isinstance(base, TimeSeries) else None
    return TimeSeries(marginal.transform(values), labels)


def inject_shift(series, shift: ShiftSpec) -> TimeSeries:
    """Add ``shift.height`` to every observation with 1-based index ``> floor(n * tau)``."""
    values = as_values(series)
    if values.size == 0:
        raise DomainError("cannot inject a shift into an empty series")
    if not 0.0 < shift.tau < 1.0:
        raise DomainError(f"change fraction tau must lie in (0, 1), got {shift.tau}")
    k = math.floor(values.size * shift.tau)
    out = values.copy()
    if shift.height != 0:
        out[k:] += shift.height
    labels = series.labels if isinstance(series, TimeSeries) else None
    return TimeSeries(out, labels)
