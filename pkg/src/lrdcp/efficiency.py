"""Score integrals ``int g dh``, asymptotic relative efficiency of two score
functions, and the drift function of local level-shift alternatives.

Two rank tests with generating functions ``h1`` and ``h2`` detect the same
shrinking shift with equal power when the shift heights stand in the ratio

    (int J_r(F^-(x)) dh1 / int J_r(F^-(x)) dh2) * (int f(F^-(x)) dh2 / int f(F^-(x)) dh1)

which :func:`are_ratio` evaluates.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .errors import DivergenceError, DomainError, NumericalError
from .gaussian_core import hermite_coefficient, hermite_poly, normal_cdf, normal_pdf, normal_quantile
from .lrd_sim import MarginalSpec
from .scores import ScoreSpec, _half_grid

_REL_TOL = 1e-8
_ACCEPT_TOL = 1e-7

# truncation ladders used to watch the integral approach its improper limit
_EPS_LADDER = (1e-3, 1e-6, 1e-9, 1e-12, 1e-15)
_U_LADDER = (6.0, 12.0, 24.0, 37.5)


def _quad(f, a, b, points=None) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, epsabs=1e-13, epsrel=_REL_TOL, limit=400, points=points)
    return float(val), float(err)


def _ladder(values: list[float], errors: list[float], what: str) -> tuple[float, float]:
    """Settle an improper integral from its values on shrinking truncations."""
    if not all(math.isfinite(v) for v in values):
        raise DivergenceError(f"{what}: integrand is not integrable (non-finite partial integral)")
    last = values[-1]
    d_last = abs(values[-1] - values[-2])
    d_prev = abs(values[-2] - values[-3])
    tol = max(_ACCEPT_TOL * abs(last), 1e-12)
    if d_last > tol and d_last >= 0.1 * d_prev:
        raise DivergenceError(
            f"{what}: partial integrals keep growing under refinement ({values[-3]!r}, {values[-2]!r}, {last!r})"
        )
    return last, d_last + errors[-1]


def _integral_dx(g, what: str) -> tuple[float, float]:
    # each truncation adds only the two new end slices to the previous value
    core, err = _quad(g, _EPS_LADDER[0], 1.0 - _EPS_LADDER[0], points=[0.5])
    vals, errs = [core], [err]
    for prev, eps in zip(_EPS_LADDER[:-1], _EPS_LADDER[1:]):
        lo, e_lo = _quad(g, eps, prev)
        hi, e_hi = _quad(g, 1.0 - prev, 1.0 - eps)
        vals.append(vals[-1] + lo + hi)
        errs.append(errs[-1] + e_lo + e_hi)
    return _ladder(vals, errs, what)


def _x_of_u(u: float) -> float:
    # keep x strictly inside (0, 1) where Phi(u) rounds to an endpoint
    x = float(normal_cdf(u))
    return min(max(x, 5e-324), 1.0 - 2.0 ** -53)


def _integral_du(g, what: str) -> tuple[float, float]:
    def integrand(u):
        return g(_x_of_u(u))

    core, err = _quad(integrand, -_U_LADDER[0], _U_LADDER[0], points=[0.0])
    vals, errs = [core], [err]
    for prev, L in zip(_U_LADDER[:-1], _U_LADDER[1:]):
        lo, e_lo = _quad(integrand, -L, -prev)
        hi, e_hi = _quad(integrand, prev, L)
        vals.append(vals[-1] + lo + hi)
        errs.append(errs[-1] + e_lo + e_hi)
    return _ladder(vals, errs, what)


def _integral_table(g, knots, what: str) -> tuple[float, float]:
    xs, hs = (np.asarray(k, dtype=float) for k in knots)
    slopes = np.diff(hs) / np.diff(xs)
    total, err = 0.0, 0.0
    for a, b, s in zip(xs[:-1], xs[1:], slopes):
        if s == 0.0:
            continue
        v, e = _quad(g, float(a), float(b))
        total += s * v
        err += abs(s) * e
    if not math.isfinite(total):
        raise DivergenceError(f"{what}: non-finite integral")
    return total, err


def _stieltjes(g, spec: ScoreSpec, grid_size: int) -> float:
    half = _half_grid(grid_size)
    x = np.concatenate([half, 1.0 - half[::-1][1:]])
    x = np.unique(x)
    hx = spec.base_h(x)
    mid = 0.5 * (x[1:] + x[:-1])
    gm = np.array([g(float(t)) for t in mid])
    return float(np.sum(gm * np.diff(hx)))


def _integral_stieltjes(g, spec: ScoreSpec, what: str) -> tuple[float, float]:
    sizes = (1024, 2048, 4096, 8192, 16384)
    vals = []
    for size in sizes:
        vals.append(_stieltjes(g, spec, size))
        if len(vals) >= 2 and abs(vals[-1] - vals[-2]) <= max(_REL_TOL * abs(vals[-1]), 1e-14):
            return vals[-1], abs(vals[-1] - vals[-2])
    return _ladder(vals, [0.0] * len(vals), what)


def _dh_integral(g: Callable[[float], float], spec: ScoreSpec, what: str = "integral") -> tuple[float, float]:
    if spec.kind == "wilcoxon":
        val, err = _integral_dx(g, what)
    elif spec.kind == "vanderwaerden":
        val, err = _integral_du(g, what)
    elif spec.kind == "median":
        # dh is a point mass of size 2 at x = 1/2
        val, err = 2.0 * float(g(0.5)), 0.0
    elif spec.knots is not None:
        val, err = _integral_table(g, spec.knots, what)
    else:
        val, err = _integral_stieltjes(g, spec, what)
    return spec.scale * val, spec.scale * err


def dh_integral(g: Callable[[float], float], spec: ScoreSpec) -> float:
    """``int_0^1 g(x) dh(x)`` for the generating function ``h`` of ``spec``.

    Wilcoxon scores integrate ``g`` directly, Van der Waerden scores use the
    substitution ``x = Phi(u)``, median scores reduce to ``2 g(1/2)``, and
    custom scores use their piecewise-linear table or a Stieltjes sum.

    Raises
    ------
    DivergenceError
        If the partial integrals keep growing as the truncation shrinks.
    """
    return _dh_integral(g, spec)[0]


class GaussianMarginal:
    """Identity transform of a standard normal variable."""

    name = "gaussian"

    def quantile(self, x: float) -> float:
        return float(normal_quantile(x))

    def density_at_quantile(self, x: float) -> float:
        return float(normal_pdf(normal_quantile(x)))

    def j_at_quantile(self, r: int, x: float) -> float:
        # E[1{xi <= t} H_r(xi)] = -H_{r-1}(t) phi(t)
        t = normal_quantile(x)
        return float(-hermite_poly(r - 1, t) * normal_pdf(t))


class SubordinatedMarginal:
    """Law of ``G(xi)`` for one of the simulation marginals; ``J_r`` by quadrature."""

    def __init__(self, spec: MarginalSpec):
        self.spec = spec
        self.name = spec.kind

    def quantile(self, x: float) -> float:
        kind = self.spec.kind
        if kind == "chisq1":
            # upper (1 + x) / 2 quantile, reflected to stay accurate as x -> 1
            t = -normal_quantile(0.5 * (1.0 - x))
            return float(0.5 * (t * t - 1.0))
        u = normal_quantile(1.0 - x) if self.spec.monotone == "decreasing" else normal_quantile(x)
        return float(self.spec.transform(u))

    def density_at_quantile(self, x: float) -> float:
        kind = self.spec.kind
        if kind == "normal":
            return float(normal_pdf(normal_quantile(x)))
        if kind == "cauchy":
            return math.cos(math.pi * (x - 0.5)) ** 2 / math.pi
        if kind == "pareto":
            a, k = self.spec.alpha, self.spec.k_scale
            c = (a * k * k / ((a - 1.0) ** 2 * (a - 2.0))) ** -0.5
            return a * (1.0 - x) ** (1.0 + 1.0 / a) / (c * k)
        t = -normal_quantile(0.5 * (1.0 - x))
        return float(2.0 * normal_pdf(t) / t)

    def j_at_quantile(self, r: int, x: float) -> float:
        return hermite_coefficient(self.spec.transform, r, self.quantile(x),
                                   monotone=self.spec.monotone)


def marginal_model(name: str):
    """``gaussian`` (closed-form coefficients) or any simulation marginal name."""
    if name.strip().lower() in ("gaussian", "normal"):
        return GaussianMarginal()
    return SubordinatedMarginal(MarginalSpec.parse(name))


@dataclass(frozen=True)
class AREResult:
    integral_J_1: float
    integral_J_2: float
    integral_f_1: float
    integral_f_2: float
    ratio: float
    quadrature_error: float


def are_ratio(spec1: ScoreSpec, spec2: ScoreSpec, marginal=None, r: Optional[int] = None) -> AREResult:
    """Ratio ``Delta_1 / Delta_2`` of detectable shift heights for two score functions.

    Parameters
    ----------
    spec1, spec2 : ScoreSpec
    marginal : object, optional
        Provides ``j_at_quantile(r, x)`` and ``density_at_quantile(x)``;
        defaults to :class:`GaussianMarginal`.
    r : int, optional
        Hermite rank; defaults to 1, or the marginal's rank when it has one.
    """
    marginal = GaussianMarginal() if marginal is None else marginal
    if r is None:
        r = getattr(getattr(marginal, "spec", None), "hermite_rank", 1)
    if r < 1:
        raise DomainError(f"Hermite rank must be >= 1, got {r}")

    def J(x):
        return marginal.j_at_quantile(r, x)

    f = marginal.density_at_quantile
    j1, ej1 = _dh_integral(J, spec1, "integral_J_1")
    j2, ej2 = _dh_integral(J, spec2, "integral_J_2")
    f1, ef1 = _dh_integral(f, spec1, "integral_f_1")
    f2, ef2 = _dh_integral(f, spec2, "integral_f_2")
    for label, value, err in (("integral_J_2", j2, ej2), ("integral_f_1", f1, ef1)):
        # zero up to its own quadrature error, e.g. J_1 of a rank-2 marginal
        if abs(value) <= max(4.0 * err, 1e-12):
            raise NumericalError(f"{label} = {value!r} is zero within quadrature error {err!r}; "
                                 "the efficiency ratio is undefined")
    ratio = (j1 / j2) * (f2 / f1)
    rel = sum(e / abs(v) for e, v in ((ej1, j1), (ej2, j2), (ef1, f1), (ef2, f2)) if v != 0.0)
    return AREResult(j1, j2, f1, f2, ratio, abs(ratio) * rel)


def drift_curve(tau: float, grid) -> np.ndarray:
    """``delta_tau(t) = t (1 - tau)`` for ``t <= tau`` and ``tau (1 - t)`` otherwise."""
    if not 0 < tau < 1:
        raise DomainError(f"tau must lie in (0, 1), got {tau}")
    t = np.asarray(grid, dtype=float)
    return np.where(t <= tau, t * (1.0 - tau), tau * (1.0 - t))
