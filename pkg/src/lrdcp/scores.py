"""Score functions for rank statistics and the integrability diagnostic for
their generating function ``h``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, IngestionError, UnsupportedInputError
from .gaussian_core import normal_quantile

KINDS = ("wilcoxon", "vanderwaerden", "median", "custom")

_ALIASES = {
    "wilcoxon": "wilcoxon",
    "w": "wilcoxon",
    "vdw": "vanderwaerden",
    "v": "vanderwaerden",
    "vanderwaerden": "vanderwaerden",
    "median": "median",
    "m": "median",
}


@dataclass(frozen=True)
class ScoreSpec:
    """A score generating function ``h`` on (0, 1), with ``a(i) = h(i / (n + 1))``.

    ``scale`` and ``shift`` apply a positive affine map on top of the base
    kind. For ``custom`` scores ``h`` is user supplied; ``breakpoints`` lists
    the points splitting ``h`` into monotone pieces (needed for total
    variation when ``h`` is not monotone). ``knots`` holds the (x, h(x))
    table when the custom score was read from a file.
    """

    kind: str
    name: str = ""
    h_fn: Optional[Callable] = field(default=None, compare=False)
    breakpoints: Optional[tuple] = None
    knots: Optional[tuple] = None
    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown score kind {self.kind!r}")
        if self.kind == "custom" and self.h_fn is None:
            raise DomainError("custom scores need a generating function")
        if not self.scale > 0:
            raise DomainError(f"score scale must be positive, got {self.scale}")
        if not self.name:
            object.__setattr__(self, "name", self.kind)

    @classmethod
    def wilcoxon(cls) -> "ScoreSpec":
        return cls("wilcoxon")

    @classmethod
    def vdw(cls) -> "ScoreSpec":
        return cls("vanderwaerden", "vdw")

    @classmethod
    def median(cls) -> "ScoreSpec":
        return cls("median")

    @classmethod
    def custom(cls, h: Callable, breakpoints: Optional[Sequence[float]] = None,
               name: str = "custom") -> "ScoreSpec":
        bp = None if breakpoints is None else tuple(sorted(float(b) for b in breakpoints))
        return cls("custom", name, h, bp)

    @classmethod
    def from_table(cls, xs: Sequence[float], hs: Sequence[float], name: str = "custom") -> "ScoreSpec":
        """Piecewise-linear ``h`` through the points ``(xs, hs)``, constant beyond the end knots."""
        xs = np.asarray(xs, dtype=float)
        hs = np.asarray(hs, dtype=float)
        if xs.ndim != 1 or xs.shape != hs.shape or xs.size < 2:
            raise DomainError("a score table needs at least two (x, h) pairs")
        if np.any(xs <= 0) or np.any(xs >= 1):
            raise DomainError("score table x values must lie in (0, 1)")
        if np.any(np.diff(xs) <= 0):
            raise DomainError("score table x values must be strictly increasing")
        if not np.all(np.isfinite(hs)):
            raise DomainError("score table h values must be finite")

        def h(x, _xs=xs, _hs=hs):
            return np.interp(x, _xs, _hs)

        return cls("custom", name, h, tuple(xs), (tuple(xs), tuple(hs)))

    @classmethod
    def from_file(cls, path) -> "ScoreSpec":
        """Read ``x, h(x)`` pairs (comma or whitespace separated, ``#`` comments)."""
        xs, hs = [], []
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise IngestionError(f"cannot read score file {path}: {exc}") from exc
        for lineno, line in enumerate(lines, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            try:
                x, hx = float(parts[0]), float(parts[1])
            except (IndexError, ValueError):
                if not xs:
                    continue  # header row
                raise IngestionError(f"{path}:{lineno}: expected 'x, h(x)', got {line!r}")
            xs.append(x)
            hs.append(hx)
        return cls.from_table(xs, hs, name=f"custom:{path.name}")

    @classmethod
    def parse(cls, name: str) -> "ScoreSpec":
        """Parse ``wilcoxon | vdw | median | custom:<file>``."""
        key = name.strip()
        if key.lower().startswith("custom:"):
            return cls.from_file(key.split(":", 1)[1])
        try:
            kind = _ALIASES[key.lower()]
        except KeyError:
            raise DomainError(f"unknown score {name!r}; expected wilcoxon, vdw, median or custom:<file>")
        return {"wilcoxon": cls.wilcoxon, "vanderwaerden": cls.vdw, "median": cls.median}[kind]()

    def affine(self, alpha: float, beta: float) -> "ScoreSpec":
        """The score ``alpha * h + beta`` (``alpha > 0``)."""
        return ScoreSpec(self.kind, self.name, self.h_fn, self.breakpoints, self.knots,
                         self.scale * alpha, self.shift * alpha + beta)

    def base_h(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "wilcoxon":
            return x.copy()
        if self.kind == "vanderwaerden":
            return normal_quantile(x)
        if self.kind == "median":
            return np.sign(x - 0.5)
        return np.asarray(self.h_fn(x), dtype=float)

    def h(self, x):
        """Generating function evaluated at ``x`` in (0, 1)."""
        return self.scale * self.base_h(x) + self.shift

    @property
    def is_monotone(self) -> bool:
        return self.kind != "custom"


def make_scores(spec: ScoreSpec, n: int) -> np.ndarray:
    """Score vector ``a(1..n)``.

    Wilcoxon scores are ``i / (n + 1)``. Median scores are
    ``sign(i - (n + 1) / 2)``, zero at the midpoint of odd ``n``.
    """
    if n < 2:
        raise DomainError(f"scores need n >= 2, got {n}")
    i = np.arange(1, n + 1)
    if spec.kind == "median":
        # exact integer comparison avoids rounding at the midpoint
        base = np.sign(2 * i - (n + 1)).astype(float)
        return spec.scale * base + spec.shift
    grid = i / (n + 1.0)
    a = spec.h(grid)
    bad = np.nonzero(~np.isfinite(a))[0]
    if bad.size:
        raise DomainError(f"score function is not finite at x = {grid[bad[0]]!r}")
    return a


@dataclass(frozen=True)
class HBarIntegral:
    """Value of ``int_0^1 min(x, 1-x)^lambda d hbar(x)``; ``value`` is ``inf`` when divergent."""

    lam: float
    value: float
    grid_size: int
    converged: bool
    last_estimate: float = math.nan


def _half_grid(grid_size: int) -> np.ndarray:
    """Points in (0, 1/2]: uniform cells plus geometric refinement toward 0."""
    half = max(grid_size // 2, 8)
    depth = min(grid_size / 16.0, 1000.0)  # octaves below 1/2; stays above the subnormals
    geo = 0.5 * np.exp2(-np.linspace(0.0, depth, half))
    uni = np.linspace(0.0, 0.5, half + 1)[1:]
    return np.union1d(geo, uni)


def _h_upper(spec: ScoreSpec, y) -> np.ndarray:
    """``h(1 - y)`` evaluated without forming ``1 - y`` where the kind allows it."""
    y = np.asarray(y, dtype=float)
    if spec.kind == "wilcoxon":
        return 1.0 - y
    if spec.kind == "vanderwaerden":
        return -normal_quantile(y)
    if spec.kind == "median":
        return np.where(y < 0.5, 1.0, 0.0)
    return np.asarray(spec.h_fn(1.0 - y), dtype=float)


def _weighted_variation(spec: ScoreSpec, lam: float, grid_size: int) -> float:
    base = _half_grid(grid_size)
    bps = spec.breakpoints or ()
    # lower half in x, upper half in y = 1 - x; both end at 1/2
    left = np.union1d(base, [b for b in bps if 0 < b <= 0.5])
    right = np.union1d(base, [1.0 - b for b in bps if 0.5 < b < 1])
    if spec.kind == "custom":
        # a user callable only sees 1 - y, which rounds to 1 below machine epsilon
        right = right[right >= np.finfo(float).eps]
    total = 0.0
    for pts, hv in ((left, spec.base_h(left)), (right, _h_upper(spec, right))):
        # min(x, 1-x)^lambda is monotone on each half, so the midpoint weight
        # of a cell converges to its exact weight as cells shrink
        mids = 0.5 * (pts[1:] + pts[:-1])
        total += math.fsum(mids ** lam * np.abs(np.diff(hv)))
    return spec.scale * total


def _check_monotone_pieces(spec: ScoreSpec, grid_size: int) -> None:
    if spec.kind != "custom" or spec.knots is not None or spec.breakpoints is not None:
        return
    pts = _half_grid(grid_size)
    pts = np.union1d(pts, 1.0 - pts)
    d = np.diff(spec.base_h(pts))
    if np.any(d > 0) and np.any(d < 0):
        raise UnsupportedInputError(
            "custom score function is not monotone; supply its monotone-piece breakpoints"
        )


def check_score_assumption(spec: ScoreSpec, lam: float, grid_size: int = 4096) -> HBarIntegral:
    """Numerically evaluate ``int_0^1 min(x, 1-x)^lambda d hbar(x)``.

    ``hbar`` accumulates the total variation of ``h`` outward from 1/2, so
    ``d hbar`` is the total-variation measure of ``h``. The integral is a
    Riemann-Stieltjes sum over a grid refined geometrically toward both
    endpoints; the grid is doubled once and the result is declared
    converged when the two values differ by less than 1%.
    """
    if not 0.0 < lam < 1.0 / 3.0:
        raise DomainError(f"lambda must lie in (0, 1/3), got {lam}")
    if grid_size < 1000:
        raise DomainError(f"grid_size must be >= 1000, got {grid_size}")
    _check_monotone_pieces(spec, grid_size)
    coarse = _weighted_variation(spec, lam, grid_size)
    fine = _weighted_variation(spec, lam, 2 * grid_size)
    if not (math.isfinite(coarse) and math.isfinite(fine)):
        return HBarIntegral(lam, math.inf, grid_size, False, fine)
    if fine == 0.0 and coarse == 0.0:
        return HBarIntegral(lam, 0.0, grid_size, True, 0.0)
    if abs(fine - coarse) < 0.01 * abs(fine):
        return HBarIntegral(lam, fine, grid_size, True, fine)
    return HBarIntegral(lam, math.inf, grid_size, False, fine)
