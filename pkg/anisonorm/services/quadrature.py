"""Composite Gauss quadrature split at cuts and graded toward singular points.

Toward a point ``s`` where the integrand behaves like ``|y - s|**e`` the interval is
cut into geometric panels ``[s + L*r**(k+1), s + L*r**k]``; the innermost panel uses
Gauss-Jacobi with the exact exponent, every other panel Gauss-Legendre.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import pairwise

import numpy as np
from scipy.special import logsumexp, roots_jacobi, roots_legendre

from anisonorm.config import get_settings
from anisonorm.exceptions import DivergentIntegral

logger = logging.getLogger(__name__)

MAX_LEVELS = 200
# innermost graded panel, relative to |s|; smaller panels round their nodes onto s
RELATIVE_FLOOR = 1e6 * float(np.finfo(float).eps)
Singularity = tuple[float, float]


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=1024)
def gauss_jacobi(order: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Rule for the weight ``(1-t)**alpha * (1+t)**beta`` on [-1, 1]."""
    nodes, weights = roots_jacobi(order, alpha, beta)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class QuadraturePlan:
    nodes: np.ndarray
    weights: np.ndarray
    grading_ratio: float = 0.2
    tolerance: float = 1e-7
    panels: int = field(default=0, compare=False)

    @classmethod
    def empty(cls) -> QuadraturePlan:
        return cls(np.empty(0), np.empty(0))

    @classmethod
    def concat(cls, plans: Iterable[QuadraturePlan]) -> QuadraturePlan:
        plans = [plan for plan in plans if plan.nodes.size]
        if not plans:
            return cls.empty()
        return cls(
            np.concatenate([plan.nodes for plan in plans]),
            np.concatenate([plan.weights for plan in plans]),
            plans[0].grading_ratio,
            plans[0].tolerance,
            sum(plan.panels for plan in plans),
        )

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def integrate(self, values: np.ndarray) -> float | complex:
        return self.weights @ values


def _legendre_panels(lo: np.ndarray, hi: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = gauss_legendre(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return (mid[:, None] + half[:, None] * t).ravel(), (half[:, None] * w).ravel()


def _jacobi_panel(s: float, h: float, direction: int, exponent: float, order: int):
    """Panel of length h next to s (on the side ``direction``) with weight |y-s|**exponent."""
    if direction > 0:
        t, w = gauss_jacobi(order, 0.0, exponent)
        nodes = s + 0.5 * h * (1.0 + t)
    else:
        t, w = gauss_jacobi(order, exponent, 0.0)
        nodes = s - 0.5 * h * (1.0 - t)
    dist = np.abs(nodes - s)
    keep = dist > 0
    if not keep.all():
        logger.debug("Dropped %d Jacobi nodes that round onto %g", int((~keep).sum()), s)
    weights = (0.5 * h) ** (1.0 + exponent) * w[keep] / dist[keep] ** exponent
    return nodes[keep], weights


def _split_long(lo: np.ndarray, hi: np.ndarray, max_panel: float) -> tuple[np.ndarray, np.ndarray]:
    if not math.isfinite(max_panel):
        return lo, hi
    counts = np.maximum(np.ceil((hi - lo) / max_panel).astype(int), 1)
    if np.all(counts == 1):
        return lo, hi
    starts, ends = [], []
    for a, b, n in zip(lo, hi, counts, strict=True):
        edges = np.linspace(a, b, n + 1)
        starts.append(edges[:-1])
        ends.append(edges[1:])
    return np.concatenate(starts), np.concatenate(ends)


@dataclass
class _Builder:
    order: int
    levels: int
    ratio: float
    max_panel: float
    lo: list[np.ndarray] = field(default_factory=list)
    hi: list[np.ndarray] = field(default_factory=list)
    extra_nodes: list[np.ndarray] = field(default_factory=list)
    extra_weights: list[np.ndarray] = field(default_factory=list)

    def plain(self, a: float, b: float) -> None:
        self.lo.append(np.array([a]))
        self.hi.append(np.array([b]))

    def graded(self, s: float, end: float, exponent: float, scale: float) -> None:
        """Grade [s, end] (or [end, s]) toward s; panels shrink below ``scale``."""
        length = abs(end - s)
        direction = 1 if end > s else -1
        levels = self.levels
        if scale < length:
            levels += math.ceil(math.log(length / scale) / math.log(1.0 / self.ratio))
        floor = RELATIVE_FLOOR * abs(s)
        if 0 < floor < length:
            levels = min(levels, int(math.log(length / floor) / math.log(1.0 / self.ratio)))
        levels = max(min(levels, MAX_LEVELS), 1)
        radii = length * self.ratio ** np.arange(levels + 1)
        inner, outer = radii[1:], radii[:-1]
        if direction > 0:
            self.lo.append(s + inner)
            self.hi.append(s + outer)
        else:
            self.lo.append(s - outer)
            self.hi.append(s - inner)
        h = float(radii[-1])
        if exponent == 0.0:
            self.plain(*sorted((s, s + direction * h)))
            return
        nodes, weights = _jacobi_panel(s, h, direction, exponent, self.order)
        self.extra_nodes.append(nodes)
        self.extra_weights.append(weights)

    def finish(self, tolerance: float) -> QuadraturePlan:
        nodes: list[np.ndarray] = list(self.extra_nodes)
        weights: list[np.ndarray] = list(self.extra_weights)
        panels = len(self.extra_nodes)
        if self.lo:
            lo, hi = _split_long(np.concatenate(self.lo), np.concatenate(self.hi), self.max_panel)
            keep = hi > lo
            n, w = _legendre_panels(lo[keep], hi[keep], self.order)
            nodes.append(n)
            weights.append(w)
            panels += int(keep.sum())
        if not nodes:
            return QuadraturePlan.empty()
        return QuadraturePlan(
            np.concatenate(nodes), np.concatenate(weights), self.ratio, tolerance, panels
        )


def build_plan(
    a: float,
    b: float,
    singular: Sequence[Singularity] = (),
    cuts: Sequence[float] = (),
    *,
    order: int | None = None,
    levels: int | None = None,
    ratio: float | None = None,
    max_panel: float = math.inf,
    tolerance: float | None = None,
) -> QuadraturePlan:
    """Plan for ``int_a^b phi(y) dy``.

    ``singular`` lists ``(s, e)`` with ``phi ~ |y - s|**e`` near s; exponents at a
    shared point add up; points just outside [a, b] grade the nearest end instead.
    Grading toward s reaches panels smaller than the distance from s to its nearest
    breakpoint, but never below ``RELATIVE_FLOOR * |s|``.
    """
    settings = get_settings()
    builder = _Builder(
        order=order or settings.quadrature_order,
        levels=levels or settings.quadrature_levels,
        ratio=ratio or settings.grading_ratio,
        max_panel=max_panel,
    )
    tolerance = tolerance or settings.tolerance
    if not b > a:
        return QuadraturePlan.empty()

    exponents: dict[float, float] = {}
    for s, e in singular:
        if a <= s <= b:
            exponents[s] = exponents.get(s, 0.0) + e
    for s, e in exponents.items():
        if e <= -1.0:
            raise DivergentIntegral(f"integrand ~ |y - {s:g}|^{e:g} is not integrable")

    # breakpoints that sit close to a singular point elsewhere grade down to that distance
    poles = np.asarray(sorted({s for s, e in singular if e}), dtype=float)

    points = sorted({a, b, *exponents, *(c for c in cuts if a < c < b)})
    grid = np.asarray(points)

    def scale_of(s: float) -> float:
        others = np.abs(grid[grid != s] - s)
        return float(others.min()) if others.size else b - a

    def gap_of(s: float) -> float:
        others = np.abs(poles[poles != s] - s)
        return float(others.min()) if others.size else math.inf

    def target(s: float, length: float) -> tuple[float, float] | None:
        if s in exponents:
            return exponents[s], scale_of(s)
        gap = gap_of(s)
        if gap < length:
            return 0.0, min(gap, scale_of(s))
        return None

    for lo, hi in pairwise(points):
        left, right = target(lo, hi - lo), target(hi, hi - lo)
        if left and right:
            mid = 0.5 * (lo + hi)
            builder.graded(lo, mid, *left)
            builder.graded(hi, mid, *right)
        elif left:
            builder.graded(lo, hi, *left)
        elif right:
            builder.graded(hi, lo, *right)
        else:
            builder.plain(lo, hi)
    return builder.finish(tolerance)


def build_plan_over(
    intervals: Iterable[tuple[float, float]],
    singular: Sequence[Singularity] = (),
    cuts: Sequence[float] = (),
    **kwargs,
) -> QuadraturePlan:
    """Union of plans over disjoint intervals."""
    return QuadraturePlan.concat(
        build_plan(lo, hi, singular, cuts, **kwargs) for lo, hi in intervals
    )


def geometric_plan(
    a: float, b: float, factor: float = 4.0, order: int | None = None
) -> QuadraturePlan:
    """Panels ``[z, factor*z]`` covering [a, b] with 0 < a < b.

    Suited to integrands with a power-type singularity at 0 or a power decay at
    infinity, both outside the interval.
    """
    if not 0 < a < b:
        return QuadraturePlan.empty()
    order = order or get_settings().quadrature_order
    count = max(1, math.ceil(math.log(b / a) / math.log(factor)))
    edges = np.geomspace(a, b, count + 1)
    nodes, weights = _legendre_panels(edges[:-1], edges[1:], order)
    return QuadraturePlan(nodes, weights, panels=count)


def _log_expm1_ratio(z: np.ndarray) -> np.ndarray:
    """log(expm1(z)/z), stable for every real z (value 0 at z = 0)."""
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    pos = z > 1e-12
    neg = z < -1e-12
    small = ~(pos | neg)
    zp = z[pos]
    out[pos] = zp + np.log(-np.expm1(-zp)) - np.log(zp)
    zn = z[neg]
    out[neg] = np.log(-np.expm1(zn)) - np.log(-zn)
    out[small] = 0.5 * z[small]
    return out


def log_cumulative_exponential(t: np.ndarray, rate: float, log_weight: np.ndarray) -> np.ndarray:
    """log of ``int_0^t exp(rate*tau) * w(tau) dtau`` on an increasing grid from 0.

    ``w`` is taken piecewise constant (midpoint value) and the exponential is
    integrated exactly on each cell, so large ``rate*t`` never overflows.
    """
    h = np.diff(t)
    mid_log_w = 0.5 * (log_weight[:-1] + log_weight[1:])
    cell = rate * t[:-1] + np.log(h) + _log_expm1_ratio(rate * h) + mid_log_w
    out = np.empty_like(t)
    out[0] = -np.inf
    out[1:] = np.logaddexp.accumulate(cell)
    return out


def log_trapezoid(log_values: np.ndarray, t: np.ndarray) -> float:
    """log of the trapezoid integral of ``exp(log_values)`` over the grid t."""
    h = np.diff(t)
    w = np.zeros_like(t)
    w[:-1] += 0.5 * h
    w[1:] += 0.5 * h
    return float(logsumexp(log_values + np.log(w)))
