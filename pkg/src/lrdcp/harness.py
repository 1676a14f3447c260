"""Monte Carlo rejection rates, CSV ingestion, data analysis and the local
Whittle estimate of the Hurst index.

These are the workhorses behind the ``lrdcp`` command line; each one is
usable from Python as well.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from scipy import optimize

from .errors import DomainError, IngestionError
from .lrd_sim import (
    MarginalSpec,
    ShiftSpec,
    TimeSeries,
    as_values,
    inject_shift,
    replication_seed,
    simulate_fgn,
    subordinate,
)
from .subsampling import BlockRule, TestReport, make_statistic, quantile_and_pvalue, run_test, subsample_distribution

DEFAULT_TESTS = ("wilcoxon", "vdw", "cusum")


def parse_tests(text: Union[str, Sequence[str]]) -> list[str]:
    """Split ``"wilcoxon,vdw,cusum"`` into names; single letters W, V, M, C are accepted."""
    items = text.split(",") if isinstance(text, str) else list(text)
    names = [t.strip() for t in items if t.strip()]
    if not names:
        raise DomainError("no tests selected")
    for name in names:
        make_statistic(name)  # validates
    return names


# ---------------------------------------------------------------- simulation

@dataclass(frozen=True)
class SimConfig:
    """One cell of a simulation table."""

    marginal: MarginalSpec
    hurst: float
    n: int
    tau: float = 0.5
    shift: float = 0.0
    reps: int = 500
    block: BlockRule = field(default_factory=lambda: BlockRule(gamma=0.5))
    tests: tuple = DEFAULT_TESTS
    level: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.reps < 1:
            raise DomainError(f"reps must be >= 1, got {self.reps}")
        if not 0 < self.level < 1:
            raise DomainError(f"level must lie in (0, 1), got {self.level}")
        if self.n < 20:
            raise DomainError(f"n must be >= 20, got {self.n}")
        if not 0 < self.hurst < 1:
            raise DomainError(f"Hurst index must lie in (0, 1), got {self.hurst}")
        if not 0 < self.tau < 1:
            raise DomainError(f"tau must lie in (0, 1), got {self.tau}")
        object.__setattr__(self, "block", BlockRule.parse(self.block))
        object.__setattr__(self, "tests", tuple(parse_tests(self.tests)))

    @property
    def block_length(self) -> int:
        return self.block.resolve(self.n)


@dataclass(frozen=True)
class RejectionRow:
    hurst: float
    n: int
    block_length: int
    test: str
    tau: float
    shift: float
    marginal: str
    rejections: int
    reps: int
    seed: int

    @property
    def rate(self) -> float:
        return self.rejections / self.reps


@dataclass
class RejectionTable:
    rows: list = field(default_factory=list)

    HEADER = ("hurst", "n", "block_length", "test", "tau", "shift", "marginal",
              "rejections", "reps", "rate", "seed")

    def rate(self, test: str) -> float:
        for row in self.rows:
            if row.test == test:
                return row.rate
        raise KeyError(test)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.HEADER)
        for r in self.rows:
            writer.writerow([repr(r.hurst), r.n, r.block_length, r.test, repr(r.tau), repr(r.shift),
                             r.marginal, r.rejections, r.reps, f"{r.rate:.6f}", r.seed])
        return buf.getvalue()

    def write(self, path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8", newline="\n")


def simulate_series(config: SimConfig, index: int) -> np.ndarray:
    """Replication ``index``: fGn, transformed to the target marginal, with the level shift added."""
    base = simulate_fgn(config.n, config.hurst, replication_seed(config.seed, index))
    y = subordinate(base, config.marginal)
    return inject_shift(y, ShiftSpec(config.tau, config.shift)).values


def _replicate(config: SimConfig, stats, l: int, index: int) -> list[bool]:
    x = simulate_series(config, index)
    out = []
    for stat in stats:
        observed = stat.trajectory(x).max_abs
        dist = subsample_distribution(x, l, stat)
        critical, _ = quantile_and_pvalue(dist, config.level, observed)
        out.append(observed > critical)
    return out


def cmd_simulate(config: SimConfig, workers: int = 1) -> RejectionTable:
    """Rejection rates of the selected tests over ``config.reps`` replications.

    Replication ``i`` draws from its own seed derived from ``(config.seed, i)``,
    so the table is the same for any number of ``workers``.
    """
    l = config.block_length
    if l >= config.n:
        raise DomainError(f"block length {l} must be smaller than n = {config.n}")
    stats = [make_statistic(t) for t in config.tests]
    counts = np.zeros(len(stats), dtype=np.int64)
    indices = range(config.reps)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for res in pool.map(lambda i: _replicate(config, stats, l, i), indices):
                counts += np.asarray(res, dtype=np.int64)
    else:
        for i in indices:
            counts += np.asarray(_replicate(config, stats, l, i), dtype=np.int64)
    rows = [
        RejectionRow(float(config.hurst), int(config.n), l, name, float(config.tau), float(config.shift),
                     config.marginal.kind, int(c), int(config.reps), int(config.seed))
        for name, c in zip(config.tests, counts)
    ]
    return RejectionTable(rows)


# ----------------------------------------------------------------- ingestion

def _column_index(header: list[str], column) -> int:
    if column is None:
        return len(header) - 1
    if isinstance(column, int):
        idx = column
    else:
        name = str(column).strip()
        if name in header:
            return header.index(name)
        try:
            idx = int(name)
        except ValueError:
            raise IngestionError(f"column {name!r} not found; available: {', '.join(header)}") from None
    if not -len(header) <= idx < len(header):
        raise IngestionError(f"column index {idx} out of range for {len(header)} columns")
    return idx % len(header)


def read_series(path, column=None) -> TimeSeries:
    """Read one numeric column of a CSV file with a header row.

    ``column`` is a header name or a 0-based index (default: last column).
    When the file has more than one column, the first column supplies the
    time labels. Empty or non-numeric cells raise :class:`IngestionError`
    with the line number.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise IngestionError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    idx = _column_index(header, column)
    use_labels = len(header) > 1 and idx != 0
    values, labels = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) <= idx:
            raise IngestionError(f"{path}:{lineno}: missing value in column {header[idx]!r}")
        cell = row[idx].strip()
        try:
            value = float(cell)
        except ValueError:
            raise IngestionError(f"{path}:{lineno}: cannot parse {cell!r} as a number") from None
        if not math.isfinite(value):
            raise IngestionError(f"{path}:{lineno}: missing or non-finite value {cell!r}")
        values.append(value)
        if use_labels:
            labels.append(row[0].strip())
    return TimeSeries(np.array(values), labels if use_labels else None)


def preprocess(series: TimeSeries, log_returns: bool = False, absolute: bool = False) -> TimeSeries:
    """Optional log-returns ``log(P_t / P_{t-1})`` (length ``n - 1``), then absolute values."""
    values, labels = series.values, series.labels
    if log_returns:
        if np.any(values <= 0):
            raise DomainError("log-returns need strictly positive prices")
        values = np.diff(np.log(values))
        labels = None if labels is None else list(labels[1:])
    if absolute:
        values = np.abs(values)
    return TimeSeries(values, labels)


# ------------------------------------------------------------------ analysis

@dataclass
class Analysis:
    series: TimeSeries
    reports: list
    trajectories: dict

    def argmax_label(self, test: str):
        rep = next(r for r in self.reports if r.statistic_name == make_statistic(test).name)
        return self.series.label(rep.argmax_k)


def trajectories(series: TimeSeries, tests: Sequence[str]) -> dict:
    """Full ``T_{k,n}`` trajectory of every selected statistic, keyed by statistic name."""
    out = {}
    for name in tests:
        stat = make_statistic(name)
        out[stat.name] = stat.trajectory(series.values)
    return out


def trajectory_csv(series: TimeSeries, trajs: dict) -> str:
    """CSV with columns ``k, label`` and one ``T_k`` column per statistic."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = list(trajs)
    writer.writerow(["k", "label", *names])
    n = len(series)
    for k in range(1, n):
        writer.writerow([k, series.label(k), *(repr(float(trajs[s].values[k - 1])) for s in names)])
    return buf.getvalue()


def reports_csv(reports: Sequence[TestReport]) -> str:
    return TestReport.csv_header() + "\n" + "".join(r.to_csv_row() + "\n" for r in reports)


def cmd_analyze(series: TimeSeries, tests: Sequence[str] = DEFAULT_TESTS, block="gamma:0.5",
                level: float = 0.05) -> Analysis:
    """Run every selected test on ``series`` and collect reports and trajectories."""
    if len(series) < 10:
        raise DomainError(f"analysis needs at least 10 observations, got {len(series)}")
    reports = [run_test(series.values, t, block, level) for t in tests]
    return Analysis(series, reports, trajectories(series, tests))


# ------------------------------------------------------------- Hurst index

def periodogram(x: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Fourier frequencies ``2 pi j / n`` and ``I(lambda_j) = |sum x_t e^{-i t lambda_j}|^2 / (2 pi n)``, ``j = 1..m``."""
    n = x.size
    dft = np.fft.fft(x)[1 : m + 1]
    freqs = 2.0 * np.pi * np.arange(1, m + 1) / n
    return freqs, (dft.real ** 2 + dft.imag ** 2) / (2.0 * np.pi * n)


def local_whittle_H(series, bandwidth: Optional[int] = None) -> float:
    """Local Whittle estimate of the Hurst index.

    Minimises ``R(H) = log(mean(lambda_j^{2H-1} I_j)) - (2H - 1) mean(log lambda_j)``
    over ``H`` in [0.01, 0.99], with ``m = floor(n^(2/3))`` frequencies by default.
    """
    x = as_values(series)
    n = x.size
    if n < 64:
        raise DomainError(f"local Whittle estimation needs n >= 64, got {n}")
    m = int(math.floor(n ** (2.0 / 3.0) + 1e-9)) if bandwidth is None else int(bandwidth)
    if not 1 <= m <= n // 2:
        raise DomainError(f"bandwidth must lie in [1, {n // 2}], got {m}")
    freqs, I = periodogram(x, m)
    if not np.any(I > 0):
        raise DomainError("periodogram vanishes; the series is constant")
    logf = np.log(freqs)
    centred = logf - logf.mean()
    logI = np.log(np.where(I > 0, I, np.finfo(float).tiny))

    def slope(H):
        # dR/dH / 2: weighted mean of centred log-frequencies, weights lambda^(2H-1) I;
        # R is convex in H so this is increasing and its root is the minimiser
        a = (2.0 * H - 1.0) * logf + logI
        w = np.exp(a - a.max())
        return float(np.dot(w, centred) / w.sum())

    lo, hi = 0.01, 0.99
    if slope(lo) >= 0.0:
        return lo
    if slope(hi) <= 0.0:
        return hi
    return float(optimize.brentq(slope, lo, hi, xtol=1e-13, rtol=1e-15))
