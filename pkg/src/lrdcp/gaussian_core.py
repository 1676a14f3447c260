"""Standard normal functions, Hermite polynomials and coefficients, and the
long-memory scaling sequence ``d_{n,r}``.

Hermite polynomials are the probabilists' ones, ``H_0 = 1``, ``H_1 = x``,
``H_{r+1}(x) = x H_r(x) - r H_{r-1}(x)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from numpy.polynomial.legendre import leggauss
from scipy import optimize, special

from .errors import DomainError, NumericalError

AcvfFn = Callable[[np.ndarray], np.ndarray]
"""Autocovariance of a unit-variance Gaussian sequence, ``lag -> gamma(lag)``."""

# |x| beyond which phi(x) * |H_r(x)| is negligible for r <= 20
_TAIL = 14.0
_NODE_SCHEDULE = (64, 128, 256)
_REL_TOL = 1e-8
_ABS_FLOOR = 1e-12  # scaled by sqrt(r!), the L2 size of H_r
_VARIANCE_CLAMP = 1e-9


@dataclass(frozen=True)
class HermiteSpec:
    rank: int
    coefficient_fn: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.rank < 1:
            raise DomainError(f"Hermite rank must be >= 1, got {self.rank}")


def normal_cdf(x):
    """Standard normal distribution function (scipy's ``ndtr``, abs. error ~1e-16)."""
    return special.ndtr(x)


def normal_pdf(x):
    return np.exp(-0.5 * np.square(x)) / math.sqrt(2.0 * math.pi)


def normal_quantile(p):
    """Inverse of :func:`normal_cdf`.

    Raises
    ------
    DomainError
        If any ``p`` lies outside the open interval (0, 1).
    """
    arr = np.asarray(p, dtype=float)
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        raise DomainError(f"normal_quantile requires 0 < p < 1, got {p!r}")
    return special.ndtri(p)


def hermite_poly(r: int, x):
    """Evaluate ``H_r(x)`` by the three-term recurrence."""
    if r < 0:
        raise DomainError(f"Hermite order must be >= 0, got {r}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if r == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for k in range(1, r):
        prev, cur = cur, x * cur - k * prev
    return cur if cur.ndim else float(cur)


def normal_expectation(f: Callable[[np.ndarray], np.ndarray], nodes: int = 64) -> float:
    """``E f(xi)`` for standard normal ``xi`` by Gauss-Hermite quadrature.

    Exact for polynomials of degree < ``2 * nodes``.
    """
    x, w = hermegauss(nodes)
    return float(np.dot(w, f(x)) / math.sqrt(2.0 * math.pi))


def _legendre(f, a: float, b: float, nodes: int) -> float:
    if b <= a:
        return 0.0
    t, w = leggauss(nodes)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(np.dot(w, f(mid + half * t)))


def _indicator_intervals(G, x: float, monotone: Optional[str]) -> list[tuple[float, float]]:
    """Intervals of the truncated real line on which ``G(u) <= x``."""
    lo, hi = -_TAIL, _TAIL

    def excess(u):
        return float(G(u)) - x

    if monotone in ("increasing", "decreasing"):
        inc = monotone == "increasing"
        f_lo, f_hi = excess(lo), excess(hi)
        if inc:
            if f_hi <= 0:
                return [(lo, hi)]
            if f_lo > 0:
                return []
            c = optimize.brentq(excess, lo, hi, xtol=1e-14, rtol=1e-15)
            return [(lo, c)]
        if f_lo <= 0:
            return [(lo, hi)]
        if f_hi > 0:
            return []
        c = optimize.brentq(excess, lo, hi, xtol=1e-14, rtol=1e-15)
        return [(c, hi)]
    if monotone is not None:
        raise DomainError(f"monotone must be 'increasing', 'decreasing' or None, got {monotone!r}")

    # general measurable G: bracket sign changes on a fine grid, refine each root
    grid = np.linspace(lo, hi, 4001)
    vals = np.asarray(G(grid), dtype=float) - x
    inside = vals <= 0
    cuts = [lo]
    for i in np.nonzero(inside[1:] != inside[:-1])[0]:
        cuts.append(optimize.brentq(excess, grid[i], grid[i + 1], xtol=1e-14, rtol=1e-15))
    cuts.append(hi)
    out = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b > a and excess(0.5 * (a + b)) <= 0:
            out.append((a, b))
    return out


def hermite_coefficient(G: Callable, r: int, x: float, nodes: int = 64,
                        monotone: Optional[str] = None) -> float:
    """``J_r(G; x) = E[1{G(xi) <= x} H_r(xi)]`` for standard normal ``xi``.

    The set ``{G <= x}`` is located first (by inverting ``G`` when it is
    monotone, by bracketing sign changes otherwise), then ``H_r * phi`` is
    integrated over it with Gauss-Legendre rules of doubling size until two
    successive values agree to a relative 1e-8.

    Parameters
    ----------
    G : callable
        Vectorised transform of the Gaussian variable.
    r : int
        Order, ``r >= 1``.
    x : float
        Threshold; ``+inf``/``-inf`` are allowed.
    nodes : int
        Starting quadrature size per interval.
    monotone : {"increasing", "decreasing", None}
        Shape hint for ``G``.

    Raises
    ------
    NumericalError
        If the quadrature has not settled after three doublings.
    """
    if r < 1:
        raise DomainError(f"Hermite coefficient order must be >= 1, got {r}")
    if math.isnan(x):
        raise DomainError("threshold x is NaN")
    if x == math.inf:
        return 0.0
    if x == -math.inf:
        return 0.0
    intervals = _indicator_intervals(G, x, monotone)

    def integrand(u):
        return hermite_poly(r, u) * normal_pdf(u)

    schedule = [n for n in _NODE_SCHEDULE if n >= nodes] or [nodes]
    if schedule[0] != nodes:
        schedule.insert(0, nodes)
    prev = None
    for n_nodes in schedule:
        val = sum(_legendre(integrand, a, b, n_nodes) for a, b in intervals)
        if prev is not None and abs(val - prev) <= max(_REL_TOL * abs(val), _ABS_FLOOR * math.sqrt(math.factorial(r))):
            return val
        prev = val
    raise NumericalError(
        f"Hermite coefficient quadrature did not converge (r={r}, x={x}, "
        f"last two values {prev!r} after {schedule[-1]} nodes)"
    )


def _acvf_values(acvf: AcvfFn, n: int) -> np.ndarray:
    lags = np.arange(n)
    try:
        vals = np.asarray(acvf(lags), dtype=float)
    except Exception:
        vals = None
    if vals is None or vals.shape != lags.shape:
        vals = np.array([acvf(int(k)) for k in lags], dtype=float)
    return vals


def scaling_dnr(n: int, r: int, acvf: AcvfFn) -> float:
    """Exact standard deviation of ``sum_{i<=n} H_r(xi_i)``.

    Uses ``Cov(H_r(xi_i), H_r(xi_j)) = r! gamma(i-j)^r``, so
    ``d^2 = r! * sum_{|k|<n} (n-|k|) gamma(k)^r``.
    """
    if n < 1 or r < 1:
        raise DomainError(f"scaling_dnr requires n >= 1 and r >= 1, got n={n}, r={r}")
    gamma = _acvf_values(acvf, n)
    weights = n - np.arange(n, dtype=float)
    powered = gamma ** r
    var = math.factorial(r) * (weights[0] * powered[0] + 2.0 * math.fsum(weights[1:] * powered[1:]))
    if var < 0:
        if var < -_VARIANCE_CLAMP:
            raise NumericalError(f"negative variance {var!r}: autocovariance is not positive definite")
        var = 0.0
    return math.sqrt(var)
