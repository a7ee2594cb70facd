"""Block operators on the line and their tensor application.

Two evaluation paths share the same kernels:

* the grid path turns each block into a dense matrix acting on samples (hat
  interpolation of the samples, graded Gauss quadrature per output node) and
  applies the blocks axis by axis;
* the profile path evaluates a block on an analytic line profile and tabulates
  its output so that every q-norm of it is cheap (``OutputSamples``).

Near x = 0 and toward infinity the profile path replaces the output by its
asymptotic form and integrates that in logarithmic variables, which keeps norms
accurate when q is large and the mass sits at extreme scales.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from anisonorm.config import get_settings
from anisonorm.exceptions import (
    BlockDimensionError,
    DivergentIntegral,
    FrequencyOutOfBand,
    NonFiniteResult,
    SingularOutputPoint,
    TruncationWarning,
    UnsupportedFamily,
    ZeroDenominator,
)
from anisonorm.models.grid import GridFunction
from anisonorm.models.profiles import LineFunction, PowerCutoff, PowerTail, SampledLine
from anisonorm.schemas.family import BlockKind, BlockParams, Domain, FamilyKind, OperatorFamily
from anisonorm.services import slow_vary
from anisonorm.services.norms import domain_intervals, line_norm
from anisonorm.services.quadrature import (
    QuadraturePlan,
    build_plan,
    build_plan_over,
    geometric_plan,
    log_cumulative_exponential,
    log_trapezoid,
)

logger = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)
GRID_ORDER = 8
OUTPUT_ORDER = 12
OUTPUT_LEVELS = 8
FOURIER_PHASE = 6.0
DEEP_FRACTION = 1e-6
DEEP_SPAN = 1e-2
FAR_FACTOR = 1e4
TRUNCATION_LEVEL = 1e-6
LOG_TAIL_DROP = 50.0

_NUMERIC_FAMILIES = {
    FamilyKind.RIESZ_FULL,
    FamilyKind.RIESZ_INTERIOR,
    FamilyKind.RIESZ_EXTERIOR,
    FamilyKind.LOG_RIESZ,
    FamilyKind.FOURIER_WEIGHTED,
    FamilyKind.COMPOSED,
}


@dataclass(frozen=True)
class BlockOperatorSpec:
    """One m = 1 block: kernel kind, weights, integration domain, output axis."""

    kind: BlockKind
    params: BlockParams
    domain: Domain = Domain.FULL
    radius: float | None = None
    output_axis: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind is BlockKind.MIXTURE:
            raise UnsupportedFamily("mixture blocks have no numeric evaluation")
        if self.params.m != 1:
            raise BlockDimensionError(f"numeric blocks need m = 1, got m = {self.params.m}")
        if self.domain is not Domain.FULL and not (self.radius and self.radius > 0):
            raise UnsupportedFamily("truncated domains need a positive radius")

    @classmethod
    def from_family(
        cls, family: OperatorFamily, index: int, output_axis: np.ndarray | None = None
    ) -> BlockOperatorSpec:
        if family.kind not in _NUMERIC_FAMILIES:
            raise UnsupportedFamily(f"{family.kind} has no numeric evaluation route")
        return cls(
            family.block_kind(index),
            family.blocks[index],
            family.domain,
            family.domain_radius,
            output_axis,
        )

    @property
    def gamma(self) -> float:
        return self.params.gamma or 0.0

    @property
    def output_weight(self) -> float:
        """e in the output factor |x|**-e."""
        if self.kind is BlockKind.RIESZ:
            return self.params.beta
        if self.kind is BlockKind.FOURIER:
            return self.params.alpha
        return 0.0

    @property
    def domain_cuts(self) -> tuple[float, ...]:
        if self.domain is Domain.FULL or self.radius is None:
            return ()
        return -self.radius, self.radius

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.abs(np.asarray(x, dtype=float))
        if self.domain is Domain.INTERIOR:
            return x < self.radius
        if self.domain is Domain.EXTERIOR:
            return x > self.radius
        return np.ones_like(x, dtype=bool)


def _slow_factor(params: BlockParams) -> Callable[[np.ndarray], np.ndarray]:
    return slow_vary.registry.get(params.slow_vary_id)


def _log_weight(params: BlockParams, distance: np.ndarray) -> np.ndarray:
    """|log r|**delta * S(|log r|) for r = distance."""
    ell = np.abs(np.log(distance))
    delta = params.delta or 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = ell**delta * _slow_factor(params)(ell)
    return np.where(ell > 0, out, 0.0)


def _kernel(spec: BlockOperatorSpec, x: float, y: np.ndarray) -> np.ndarray:
    """Source kernel of a Riesz-type block, source weight included."""
    params = spec.params
    distance = np.abs(x - y)
    if spec.kind is BlockKind.RIESZ:
        return np.abs(y) ** -params.alpha * distance**-spec.gamma
    return distance ** (params.alpha - 1.0) * _log_weight(params, distance)


def _kernel_singularities(spec: BlockOperatorSpec, x: float) -> list[tuple[float, float]]:
    params = spec.params
    if spec.kind is BlockKind.RIESZ:
        singular = [(x, -spec.gamma)]
        if params.alpha:
            singular.append((0.0, -params.alpha))
        return singular
    delta = params.delta or 0.0
    return [(x, params.alpha - 1.0), (x - 1.0, delta), (x + 1.0, delta)]


def _check_output_point(spec: BlockOperatorSpec, x: float) -> None:
    if x == 0.0 and spec.output_weight > 0:
        raise SingularOutputPoint(
            f"{spec.kind} output weight |x|^-{spec.output_weight:g} is singular at x = 0"
        )


def _warn_truncation(values: np.ndarray, where: str) -> None:
    peak = float(np.max(np.abs(values), initial=0.0))
    if peak == 0.0:
        return
    edge = max(float(np.max(np.abs(values[0]))), float(np.max(np.abs(values[-1]))))
    if edge > TRUNCATION_LEVEL * peak:
        message = f"{where}: samples at the truncation radius are {edge / peak:.2e} of the peak"
        logger.warning(message)
        warnings.warn(message, TruncationWarning, stacklevel=3)


def _as_profile(f_line: LineFunction | tuple[np.ndarray, np.ndarray]) -> LineFunction:
    if isinstance(f_line, LineFunction):
        return f_line
    axis, values = f_line
    _warn_truncation(np.asarray(values), "line samples")
    return SampledLine(np.asarray(axis, dtype=float), np.asarray(values, dtype=float))


def _source_integral(spec: BlockOperatorSpec, g: LineFunction, x: float) -> float:
    """int_D g(y) K(x, y) dy without the output weight."""
    lo, hi = g.support
    intervals = domain_intervals(lo, hi, spec.domain, spec.radius)
    if not intervals:
        return 0.0
    singular = [*g.singularities, *_kernel_singularities(spec, x)]
    plan = build_plan_over(intervals, singular, (*g.cuts, *spec.domain_cuts), max_panel=g.scale)
    y = plan.nodes
    return float(plan.weights @ (g(y) * _kernel(spec, x, y)))


def _riesz_like(spec: BlockOperatorSpec, f_line, x: float | np.ndarray):
    g = _as_profile(f_line)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(xs.shape)
    for i, xi in enumerate(xs):
        _check_output_point(spec, xi)
        out[i] = _source_integral(spec, g, float(xi))
        if spec.output_weight:
            out[i] *= abs(xi) ** -spec.output_weight
    return float(out[0]) if np.ndim(x) == 0 else out


def apply_riesz_block(spec: BlockOperatorSpec, f_line, x: float | np.ndarray):
    """|x|^-beta int_D f(y) |y|^-alpha |x - y|^-gamma dy at one point or an array of points."""
    if spec.kind is not BlockKind.RIESZ:
        raise UnsupportedFamily(f"expected a Riesz block, got {spec.kind}")
    return _riesz_like(spec, f_line, x)


def apply_log_riesz_block(spec: BlockOperatorSpec | BlockParams, f_line, x: float | np.ndarray):
    """int f(y) |x-y|^(alpha-1) |log|x-y||^delta S(|log|x-y||) dy."""
    if isinstance(spec, BlockParams):
        spec = BlockOperatorSpec(BlockKind.LOG_RIESZ, spec)
    if spec.kind is not BlockKind.LOG_RIESZ:
        raise UnsupportedFamily(f"expected a log-Riesz block, got {spec.kind}")
    return _riesz_like(spec, f_line, x)


def _fourier_plan(g: LineFunction, params: BlockParams, xmax: float) -> QuadraturePlan:
    lo, hi = g.support
    max_panel = g.scale
    if xmax > 0:
        max_panel = min(max_panel, FOURIER_PHASE / xmax)
    singular = list(g.singularities)
    if params.beta:
        singular.append((0.0, -params.beta))
    return build_plan(lo, hi, singular, g.cuts, max_panel=max_panel)


def apply_fourier_block(spec: BlockOperatorSpec, f_line, x: float | np.ndarray):
    """(2 pi)^-1/2 |x|^-alpha int |y|^-beta f(y) e^{ixy} dy by direct summation."""
    if spec.kind is not BlockKind.FOURIER:
        raise UnsupportedFamily(f"expected a Fourier block, got {spec.kind}")
    g = _as_profile(f_line)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    for xi in xs:
        _check_output_point(spec, float(xi))
    xmax = float(np.max(np.abs(xs), initial=0.0))
    if isinstance(g, SampledLine):
        band = math.pi / float(np.max(np.diff(g.axis)))
        if xmax > band:
            raise FrequencyOutOfBand(f"|x| = {xmax:g} exceeds the sample band {band:g}")
    plan = _fourier_plan(g, spec.params, xmax)
    y = plan.nodes
    source = plan.weights * g(y) * np.abs(y) ** -spec.params.beta
    values = np.exp(1j * np.outer(xs, y)) @ source / SQRT_2PI
    if spec.params.alpha:
        values = values * np.abs(xs) ** -spec.params.alpha
    return complex(values[0]) if np.ndim(x) == 0 else values


# -- grid path -------------------------------------------------------------------


def _hat_rows(axis: np.ndarray, nodes: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Fold quadrature coefficients onto the hat functions of ``axis``."""
    n = axis.size
    idx = np.clip(np.searchsorted(axis, nodes, side="right") - 1, 0, n - 2)
    t = (nodes - axis[idx]) / (axis[idx + 1] - axis[idx])
    return np.bincount(idx, coeffs * (1.0 - t), minlength=n) + np.bincount(
        idx + 1, coeffs * t, minlength=n
    )


def _hat_matrix(axis: np.ndarray, nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    n = axis.size
    idx = np.clip(np.searchsorted(axis, nodes, side="right") - 1, 0, n - 2)
    t = (nodes - axis[idx]) / (axis[idx + 1] - axis[idx])
    rows = np.arange(nodes.size)
    matrix = np.zeros((nodes.size, n))
    matrix[rows, idx] = weights * (1.0 - t)
    matrix[rows, idx + 1] += weights * t
    return matrix


def block_matrix(
    spec: BlockOperatorSpec, source_axis: np.ndarray, output_axis: np.ndarray
) -> np.ndarray:
    """Dense (n_out, n_in) matrix of one block acting on hat-interpolated samples."""
    axis = np.asarray(source_axis, dtype=float)
    out = np.asarray(output_axis, dtype=float)
    for x in out:
        _check_output_point(spec, float(x))
    if spec.kind is BlockKind.FOURIER:
        return _fourier_matrix(spec, axis, out)
    intervals = domain_intervals(float(axis[0]), float(axis[-1]), spec.domain, spec.radius)
    cuts = (*axis.tolist(), *spec.domain_cuts)
    matrix = np.zeros((out.size, axis.size))
    for i, x in enumerate(out):
        plan = build_plan_over(
            intervals, _kernel_singularities(spec, float(x)), cuts, order=GRID_ORDER
        )
        coeffs = plan.weights * _kernel(spec, float(x), plan.nodes)
        matrix[i] = _hat_rows(axis, plan.nodes, coeffs)
    if spec.output_weight:
        matrix *= (np.abs(out) ** -spec.output_weight)[:, None]
    return matrix


def _fourier_matrix(spec: BlockOperatorSpec, axis: np.ndarray, out: np.ndarray) -> np.ndarray:
    band = math.pi / float(np.max(np.diff(axis)))
    xmax = float(np.max(np.abs(out), initial=0.0))
    if xmax > band:
        raise FrequencyOutOfBand(f"|x| = {xmax:g} exceeds the sample band {band:g}")
    singular = [(0.0, -spec.params.beta)] if spec.params.beta else []
    plan = build_plan(
        float(axis[0]),
        float(axis[-1]),
        singular,
        axis.tolist(),
        order=GRID_ORDER,
        max_panel=FOURIER_PHASE / xmax if xmax > 0 else math.inf,
    )
    weights = plan.weights * np.abs(plan.nodes) ** -spec.params.beta
    matrix = np.exp(1j * np.outer(out, plan.nodes)) @ _hat_matrix(axis, plan.nodes, weights)
    matrix /= SQRT_2PI
    if spec.params.alpha:
        matrix *= (np.abs(out) ** -spec.params.alpha)[:, None]
    return matrix


def default_output_axis(spec: BlockOperatorSpec, axis: np.ndarray) -> np.ndarray:
    """Input axis restricted to the domain, punctured at 0 when the output weight is singular."""
    axis = np.asarray(axis, dtype=float)
    out = axis[spec.contains(axis)]
    if spec.output_weight > 0 and out.size:
        near = np.argsort(np.abs(axis))[:2]
        cell = float(np.abs(axis[near[0]] - axis[near[1]]))
        out = out[np.abs(out) >= 0.5 * cell]
    return out


def _check_supported(family: OperatorFamily) -> None:
    if family.kind not in _NUMERIC_FAMILIES:
        raise UnsupportedFamily(f"{family.kind} has no numeric evaluation route")
    for j, block in enumerate(family.blocks):
        if block.m != 1:
            raise BlockDimensionError(f"block {j + 1} has m = {block.m}; grids need m = 1")


def apply_tensor_operator(
    family: OperatorFamily,
    f: GridFunction,
    output_axes: Sequence[np.ndarray] | None = None,
) -> GridFunction:
    """Apply every block along its axis; the x_l block is applied first."""
    _check_supported(family)
    if f.l != family.l:
        raise BlockDimensionError(f"function has {f.l} axes, family has {family.l} blocks")
    values = f.values
    axes = list(f.axes)
    for j in reversed(range(f.l)):
        _warn_truncation(np.moveaxis(values, j, 0), f"axis {j + 1}")
        spec = BlockOperatorSpec.from_family(family, j)
        out_axis = (
            np.asarray(output_axes[j], dtype=float)
            if output_axes is not None
            else default_output_axis(spec, axes[j])
        )
        matrix = block_matrix(spec, axes[j], out_axis)
        values = np.moveaxis(np.tensordot(matrix, values, axes=([1], [j])), 0, j)
        axes[j] = out_axis
        logger.debug("Applied %s block %d on %d output nodes", spec.kind, j + 1, out_axis.size)
    if not np.all(np.isfinite(values)):
        raise NonFiniteResult("operator output is not finite")
    radii = tuple(float(np.max(np.abs(a))) for a in axes)
    return GridFunction(tuple(axes), values, radii)


# -- profile path: tabulated outputs ---------------------------------------------


def _log_abs_sum(c0: float, c1: float, log_factor: np.ndarray) -> np.ndarray:
    """log|c0 + c1 * exp(log_factor)| without overflow."""
    with np.errstate(divide="ignore"):
        a = (math.log(abs(c1)) if c1 else -math.inf) + log_factor
        b = np.full_like(log_factor, math.log(abs(c0)) if c0 else -math.inf)
    if c0 == 0 or c1 == 0 or (c0 > 0) == (c1 > 0):
        return np.logaddexp(a, b)
    top = np.maximum(a, b)
    gap = np.abs(a - b)
    with np.errstate(divide="ignore"):
        return top + np.log(-np.expm1(-gap))


@dataclass(frozen=True)
class LogScaleModel:
    """Asymptotic output on x = anchor * exp(direction * t), t >= 0.

    ``log_abs(t)`` is log|Tg| there; ``decay(q)`` the exponential rate of the
    q-integrand in t, which must be positive for the integral to converge.
    """

    anchor: float
    direction: int
    log_abs: Callable[[np.ndarray], np.ndarray]
    decay: Callable[[float], float]

    def log_integral(self, q: float) -> float:
        rate = self.decay(q)
        if not rate > 0:
            raise DivergentIntegral(f"output is not in L_{q:g} (rate {rate:.3g})")
        span = 64.0 / rate + 64.0
        for _ in range(40):
            t = np.union1d(np.linspace(0.0, min(span, 64.0), 2049), np.linspace(0.0, span, 4097))
            values = math.log(abs(self.anchor)) + self.direction * t + q * self.log_abs(t)
            top = float(np.max(values))
            if math.isnan(top) or top == math.inf:
                raise NonFiniteResult(f"asymptotic output model is {top} at q={q:g}")
            if top == -math.inf:
                return -math.inf
            if values[-1] < top - LOG_TAIL_DROP:
                break
            span *= 2.0
        return log_trapezoid(values, t)


@dataclass(frozen=True)
class OutputSamples:
    """|Tg| at Gauss nodes plus asymptotic models; any q-norm is then cheap."""

    log_abs: np.ndarray
    log_weights: np.ndarray
    models: tuple[LogScaleModel, ...]
    local_exponent: float
    multiplicity: int = 1

    def log_integral(self, q: float) -> float:
        parts = [float(logsumexp(q * self.log_abs + self.log_weights))] if self.log_abs.size else []
        parts += [model.log_integral(q) for model in self.models]
        total = float(logsumexp(parts)) if parts else -math.inf
        return total + math.log(self.multiplicity)

    def norm(self, q: float) -> float:
        if np.isnan(self.log_abs).any():
            raise NonFiniteResult("tabulated output has NaN samples")
        if math.isinf(q):
            if self.local_exponent < 0:
                return math.inf
            return float(np.exp(np.max(self.log_abs, initial=-np.inf)))
        total = self.log_integral(q)
        if math.isnan(total) or total == math.inf:
            raise NonFiniteResult(f"output q-integral is {total} at q={q:g}")
        return math.exp(total / q) if math.isfinite(total) else 0.0


def _deep_model(spec: BlockOperatorSpec, g: LineFunction, side: int, x1: float) -> LogScaleModel:
    """Two-term model Phi(x) = c0 + c1 * int_x^x1 y^(e-1) w(y) dy below x1."""
    params = spec.params
    log_kind = spec.kind is BlockKind.LOG_RIESZ
    e = g.exponent_at(0.0) + (
        params.alpha if log_kind else 1.0 - params.alpha - spec.gamma
    )
    w = spec.output_weight
    x2 = x1 * DEEP_SPAN
    phi1 = _source_integral(spec, g, side * x1)
    phi2 = _source_integral(spec, g, side * x2)
    t2 = math.log(1.0 / DEEP_SPAN)
    log_x1 = math.log(x1)

    def log_omega(tau: np.ndarray) -> np.ndarray:
        if not log_kind:
            return np.zeros_like(tau)
        with np.errstate(divide="ignore"):
            return np.log(_log_weight(params, np.exp(log_x1 - tau)))

    fine = np.linspace(0.0, t2, 257)
    log_c2 = float(log_cumulative_exponential(fine, -e, log_omega(fine))[-1])

    def log_abs(t: np.ndarray) -> np.ndarray:
        log_c = log_cumulative_exponential(t, -e, log_omega(t))
        return -w * (log_x1 - t) + _log_abs_sum(phi1, phi2 - phi1, log_c - log_c2)

    s = min(e, 0.0) - w
    return LogScaleModel(x1, -1, log_abs, lambda q: 1.0 + q * s)


def _far_model(spec: BlockOperatorSpec, g: LineFunction, side: int, xf: float) -> LogScaleModel:
    params = spec.params
    log_kind = spec.kind is BlockKind.LOG_RIESZ
    value = _source_integral(spec, g, side * xf) * xf**-spec.output_weight
    tau = (1.0 - params.alpha) if log_kind else params.beta + spec.gamma
    log_value = math.log(abs(value)) if value else -math.inf
    log_xf = math.log(xf)

    def log_abs(t: np.ndarray) -> np.ndarray:
        out = log_value - tau * t
        if log_kind:
            with np.errstate(divide="ignore"):
                out = out + np.log(_log_weight(params, np.exp(log_xf + t)))
                out = out - math.log(float(_log_weight(params, np.array([xf]))[0]))
        return out

    return LogScaleModel(xf, 1, log_abs, lambda q: tau * q - 1.0)


def _riesz_like_samples(spec: BlockOperatorSpec, g: LineFunction) -> OutputSamples:
    params = spec.params
    log_kind = spec.kind is BlockKind.LOG_RIESZ
    scale = min(g.scale, g.extent)
    e_local = g.exponent_at(0.0) + (params.alpha if log_kind else 1.0 - params.alpha - spec.gamma)
    local = min(e_local, 0.0) - spec.output_weight
    sides = (1,) if g.is_even else (1, -1)
    landmarks = (*g.cuts, *(s for s, _ in g.singularities))

    nodes: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    models: list[LogScaleModel] = []
    for side in sides:
        breaks = sorted({side * c for c in landmarks if side * c > 0})
        lower, upper = 0.0, math.inf
        if spec.domain is Domain.INTERIOR:
            upper = spec.radius
        elif spec.domain is Domain.EXTERIOR:
            lower = spec.radius
        breaks = [b for b in breaks if lower < b < upper]
        plans: list[QuadraturePlan] = []
        if lower == 0.0:
            knee = 0.5 * min([*breaks, scale, upper])
            x1 = DEEP_FRACTION * min(scale, 2.0 * knee)
            plans.append(geometric_plan(x1, knee, order=OUTPUT_ORDER))
            models.append(_deep_model(spec, g, side, x1))
            start = knee
        else:
            start = lower
        outer = upper if math.isfinite(upper) else max(2.0 * g.extent, 2.0 * start)
        graded = [(b, 0.0) for b in breaks]
        for edge in (lower, upper):
            if 0 < edge < math.inf:
                graded.append((edge, 0.0))
        plans.append(
            build_plan(
                start,
                outer,
                graded,
                breaks,
                order=OUTPUT_ORDER,
                levels=OUTPUT_LEVELS,
                max_panel=scale,
            )
        )
        if math.isinf(upper):
            xf = FAR_FACTOR * outer
            plans.append(geometric_plan(outer, xf, order=OUTPUT_ORDER))
            models.append(_far_model(spec, g, side, xf))
        plan = QuadraturePlan.concat(plans)
        values = np.abs(_riesz_like(spec, g, side * plan.nodes))
        with np.errstate(divide="ignore"):
            nodes.append(np.log(values))
        weights.append(np.log(plan.weights))
    return OutputSamples(
        np.concatenate(nodes),
        np.concatenate(weights),
        tuple(models),
        local if spec.domain is not Domain.EXTERIOR else 0.0,
        multiplicity=2 if len(sides) == 1 else 1,
    )


def _fourier_samples(spec: BlockOperatorSpec, g: LineFunction) -> OutputSamples:
    """|Fg| on (0, band/scale]; |Fg| is even for real g and the band tail is dropped."""
    alpha = spec.params.alpha
    extent = g.extent
    band = max(get_settings().fourier_band / g.scale, 4.0 / extent)
    x1 = DEEP_FRACTION / extent
    knee = 1.0 / extent
    plan = QuadraturePlan.concat(
        [
            geometric_plan(x1, knee, order=OUTPUT_ORDER),
            build_plan(knee, band, order=OUTPUT_ORDER, max_panel=FOURIER_PHASE / extent),
        ]
    )
    values = np.abs(apply_fourier_block(spec, g, plan.nodes))
    phi1 = abs(apply_fourier_block(spec, g, x1)) * x1**alpha
    log_phi1 = math.log(phi1) if phi1 else -math.inf
    log_x1 = math.log(x1)

    def log_abs(t: np.ndarray) -> np.ndarray:
        return -alpha * (log_x1 - t) + log_phi1

    deep = LogScaleModel(x1, -1, log_abs, lambda q: 1.0 - alpha * q)
    with np.errstate(divide="ignore"):
        log_values = np.log(values)
    return OutputSamples(log_values, np.log(plan.weights), (deep,), -alpha, multiplicity=2)


@lru_cache(maxsize=512)
def _cached_samples(
    kind: BlockKind, params: BlockParams, domain: Domain, radius: float | None, g: LineFunction
) -> OutputSamples:
    spec = BlockOperatorSpec(kind, params, domain, radius)
    if kind is BlockKind.FOURIER:
        return _fourier_samples(spec, g)
    return _riesz_like_samples(spec, g)


def block_output_samples(spec: BlockOperatorSpec, g: LineFunction) -> OutputSamples:
    if math.isinf(g.extent):
        raise UnsupportedFamily("unbounded profiles are evaluated through block_ratio")
    return _cached_samples(spec.kind, spec.params, spec.domain, spec.radius, g)


def block_output_norm(spec: BlockOperatorSpec, g: LineFunction, q: float) -> float:
    """|T g|_q over the output domain (full line, interior or exterior)."""
    return block_output_samples(spec, g).norm(q)


def inverted_block(
    spec: BlockOperatorSpec, g: PowerTail, p: float, q: float
) -> tuple[BlockOperatorSpec, PowerCutoff]:
    """Block and profile seen through y -> 1/y, keeping |g|_p and |Tg|_q.

    A Riesz block (alpha, beta, gamma) acting on a power tail becomes the block
    (2 - alpha - gamma - 2/p, 2/q - beta - gamma, gamma) acting on a power cutoff.
    The new weights may be negative, so they bypass validation.
    """
    if spec.kind is not BlockKind.RIESZ or spec.domain is not Domain.FULL:
        raise UnsupportedFamily("power tails need a full-space Riesz block")
    u = 1.0 / p if math.isfinite(p) else 0.0
    v = 1.0 / q if math.isfinite(q) else 0.0
    gamma = spec.gamma
    params = spec.params.model_copy(
        update={
            "alpha": 2.0 - spec.params.alpha - gamma - 2.0 * u,
            "beta": 2.0 * v - spec.params.beta - gamma,
        }
    )
    return BlockOperatorSpec(BlockKind.RIESZ, params), g.inverted(u)


def block_ratio(spec: BlockOperatorSpec, g: LineFunction, p: float, q: float) -> float:
    if isinstance(g, PowerTail):
        spec, g = inverted_block(spec, g, p, q)
    denominator = line_norm(g, p, spec.domain, spec.radius)
    if denominator == 0.0:
        raise ZeroDenominator(f"profile {g.params} vanishes on the {spec.domain} domain")
    numerator = block_output_norm(spec, g, q)
    ratio = numerator / denominator
    if not math.isfinite(ratio):
        raise NonFiniteResult(f"block ratio {ratio} for {g.params} at p={p:g}, q={q:g}")
    return ratio


def clear_output_cache() -> None:
    _cached_samples.cache_clear()
