"""Mixed L_p norms, Grand Lebesgue norms, tensorization and dilation."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.special import logsumexp

from anisonorm.exceptions import ConfigurationError, EmptyGrid, NonFiniteResult, UnboundedFamily
from anisonorm.models.grid import GridFunction
from anisonorm.models.profiles import LineFunction, PowerTail
from anisonorm.models.psi import PGrid, PsiFunction, PsiKind
from anisonorm.models.test_function import TestFunction
from anisonorm.schemas.family import Domain
from anisonorm.services.quadrature import build_plan_over

logger = logging.getLogger(__name__)

Exponents = tuple[float, ...]
_INVERSE_DOMAIN = {
    Domain.FULL: Domain.FULL,
    Domain.INTERIOR: Domain.EXTERIOR,
    Domain.EXTERIOR: Domain.INTERIOR,
}


def trapezoid_weights(axis: np.ndarray) -> np.ndarray:
    h = np.diff(axis)
    w = np.zeros_like(axis, dtype=float)
    w[:-1] += 0.5 * h
    w[1:] += 0.5 * h
    return w


def _reduce_axis(values: np.ndarray, weights: np.ndarray, p: float) -> np.ndarray:
    """Norm along axis 0 of nonnegative values already scaled to at most 1."""
    if math.isinf(p):
        return values.max(axis=0)
    shape = (-1,) + (1,) * (values.ndim - 1)
    total = np.sum(weights.reshape(shape) * values**p, axis=0)
    return total ** (1.0 / p)


def mixed_norm(f: GridFunction, p: Sequence[float]) -> float:
    """Iterated norm |f|_p, innermost axis (x_1) first."""
    if len(p) != f.l:
        raise ConfigurationError(f"expected {f.l} exponents, got {len(p)}")
    values = np.abs(f.values)
    peak = float(values.max())
    if peak == 0.0:
        return 0.0
    values = values / peak
    for axis, pj in zip(f.axes, p, strict=True):
        if pj < 1:
            raise ConfigurationError(f"exponent {pj} below 1")
        values = _reduce_axis(values, trapezoid_weights(axis), pj)
    result = peak * float(values)
    if not math.isfinite(result):
        raise NonFiniteResult(f"mixed norm overflow at p={tuple(p)}")
    return result


def lp_norm(f: GridFunction, p: float) -> float:
    """Single-exponent L_p norm with the tensor trapezoid weights, no iteration."""
    weights = np.ones(())
    for axis in f.axes:
        weights = np.multiply.outer(weights, trapezoid_weights(axis))
    values = np.abs(f.values)
    peak = float(values.max())
    if peak == 0.0:
        return 0.0
    if math.isinf(p):
        return peak
    return peak * float(np.sum(weights * (values / peak) ** p)) ** (1.0 / p)


def _norm_of(f: GridFunction | TestFunction, p: Exponents) -> float:
    if isinstance(f, TestFunction):
        return factorized_norm(f, p)
    return mixed_norm(f, p)


def gls_from_norms(norms: dict[Exponents, float], psi: PsiFunction) -> float:
    """sup over tabulated points of |f|_p / psi(p) (C/inf = 0)."""
    if not norms:
        raise EmptyGrid("no exponent points")
    best = 0.0
    for p, value in norms.items():
        weight = psi(p)
        if math.isinf(weight):
            continue
        best = max(best, value / weight)
    return best


def gls_norm(f: GridFunction | TestFunction, psi: PsiFunction, grid: PGrid | None = None) -> float:
    """Anisotropic Grand Lebesgue norm ||f||AG(psi) as a max over the grid."""
    if psi.kind is PsiKind.SPIKE:
        assert psi.spike is not None
        return _norm_of(f, psi.spike) / psi.height
    if grid is None or grid.size == 0:
        raise EmptyGrid("Grand Lebesgue norm needs a non-empty exponent grid")
    return gls_from_norms({p: _norm_of(f, p) for p in grid.points()}, psi)


def natural_psi(family: Sequence[GridFunction | TestFunction], grid: PGrid) -> PsiFunction:
    """psi_F(p) = sup over the family of |f|_p, log-linear between grid points."""
    if not family:
        raise ConfigurationError("natural psi needs a non-empty family")
    if grid.size == 0:
        raise EmptyGrid("natural psi needs a non-empty grid")
    shape = tuple(axis.size for axis in grid.axes)
    table = np.empty(shape)
    for index, p in zip(np.ndindex(shape), grid.points(), strict=True):
        values = [_norm_of(member, p) for member in family]
        best = max(values)
        if not math.isfinite(best) or best <= 0:
            raise UnboundedFamily(f"family norm {best} at p={p}")
        table[index] = best
    log_table = np.log(table)
    lower = tuple(float(axis[0]) for axis in grid.axes)
    upper = tuple(float(axis[-1]) for axis in grid.axes)

    if all(axis.size >= 2 for axis in grid.axes):
        interpolator = RegularGridInterpolator(grid.axes, log_table, method="linear")

        def evaluate(p: Exponents) -> float:
            return float(np.exp(interpolator(np.asarray(p))[0]))
    else:
        lookup = {p: float(v) for p, v in zip(grid.points(), table.ravel(), strict=True)}

        def evaluate(p: Exponents) -> float:
            return lookup.get(tuple(p), math.inf)

    return PsiFunction(PsiKind.NATURAL, lower, upper, evaluate, closed=True)


def tensor_product(factors: Sequence[GridFunction]) -> GridFunction:
    if not factors:
        raise ConfigurationError("tensor product of no factors")
    values = np.ones(())
    axes: list[np.ndarray] = []
    radii: list[float] = []
    for factor in factors:
        if factor.l != 1:
            raise ConfigurationError("tensor factors must be one-dimensional")
        values = np.multiply.outer(values, factor.values)
        axes.append(factor.axes[0])
        radii.append(factor.truncation_radii[0])
    return GridFunction(tuple(axes), values, tuple(radii))


def dilate(f: GridFunction, lam: Sequence[float]) -> GridFunction:
    """T_lam f, sampled exactly by rescaling the axes."""
    if len(lam) != f.l:
        raise ConfigurationError(f"expected {f.l} dilation factors")
    if any(not x > 0 for x in lam):
        raise ConfigurationError("dilation factors must be positive")
    axes = tuple(axis / x for axis, x in zip(f.axes, lam, strict=True))
    radii = tuple(r / x for r, x in zip(f.truncation_radii, lam, strict=True))
    return GridFunction(axes, f.values, radii)


def domain_intervals(
    lo: float, hi: float, domain: Domain = Domain.FULL, radius: float | None = None
) -> list[tuple[float, float]]:
    """Parts of [lo, hi] inside the full line, {|y| < r} or {|y| > r}."""
    if domain is Domain.FULL or radius is None:
        parts = [(lo, hi)]
    elif domain is Domain.INTERIOR:
        parts = [(max(lo, -radius), min(hi, radius))]
    else:
        parts = [(lo, min(hi, -radius)), (max(lo, radius), hi)]
    return [(a, b) for a, b in parts if b > a]


def log_line_integral(
    profile: LineFunction,
    p: float,
    domain: Domain = Domain.FULL,
    radius: float | None = None,
) -> float:
    """log of int |g|^p over the domain, by graded quadrature on the declared structure."""
    lo, hi = profile.support
    intervals = domain_intervals(lo, hi, domain, radius)
    if not intervals:
        return -math.inf
    cuts = list(profile.cuts)
    if radius is not None and domain is not Domain.FULL:
        cuts += [-radius, radius]
    singular = [(s, e * p) for s, e in profile.singularities]
    plan = build_plan_over(intervals, singular, cuts, max_panel=profile.scale)
    values = np.abs(profile(plan.nodes))
    with np.errstate(divide="ignore"):
        logs = p * np.log(values) + np.log(plan.weights)
    return float(logsumexp(logs))


def line_norm(
    profile: LineFunction,
    p: float,
    domain: Domain = Domain.FULL,
    radius: float | None = None,
) -> float:
    """Accurate |g|_p of a line profile (restricted to a domain when given)."""
    if isinstance(profile, PowerTail):
        # y -> 1/y keeps |g|_p and folds the tail onto a bounded interval
        u = 1.0 / p if math.isfinite(p) else 0.0
        inverse = 1.0 / radius if radius else radius
        return line_norm(profile.inverted(u), p, _INVERSE_DOMAIN[domain], inverse)
    if math.isinf(p):
        if any(e < 0 for _, e in profile.singularities):
            return math.inf
        lo, hi = profile.support
        plan = build_plan_over(domain_intervals(lo, hi, domain, radius), (), profile.cuts)
        return float(np.max(np.abs(profile(plan.nodes)), initial=0.0))
    log_total = log_line_integral(profile, p, domain, radius)
    return math.exp(log_total / p) if math.isfinite(log_total) else 0.0


def factorized_norm(
    f: TestFunction,
    p: Sequence[float],
    domains: Sequence[tuple[Domain, float | None]] | None = None,
) -> float:
    """|f|_p of a factorized function: the product of its factor norms."""
    if len(p) != f.l:
        raise ConfigurationError(f"expected {f.l} exponents, got {len(p)}")
    domains = domains or [(Domain.FULL, None)] * f.l
    result = 1.0
    for factor, pj, (domain, radius) in zip(f.factors, p, domains, strict=True):
        result *= line_norm(factor, pj, domain, radius)
    return result

