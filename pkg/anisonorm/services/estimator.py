"""Empirical operator-norm lower bounds and the checks built on them.

The lower bound at an exponent vector p is the best ratio |Tf|_q / |f|_p found over a
family of factorized test functions. For such functions both norms factor over
the blocks, so every evaluation is a product of one-dimensional block ratios that
the profile path of ``operators`` computes accurately.
"""

from __future__ import annotations

import asyncio
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from anisonorm.config import get_settings
from anisonorm.exceptions import (
    ConfigurationError,
    InsufficientSamples,
    NumericalError,
    ZeroDenominator,
)
from anisonorm.models.grid import GridFunction
from anisonorm.models.profiles import (
    Bump,
    DilatedGaussian,
    LineFunction,
    PowerCutoff,
    PowerTail,
    power_ceiling,
    power_floor,
)
from anisonorm.models.psi import PGrid, PsiFunction, PsiKind
from anisonorm.models.test_function import TestFunction
from anisonorm.schemas.estimates import BlowupFit, KEstimate, TransferReport
from anisonorm.schemas.family import BlockKind, FamilyKind, OperatorFamily
from anisonorm.schemas.test_family import ParamRange, TestFamilyKind, TestFamilySpec
from anisonorm.services.exponent_algebra import (
    block_range,
    envelope,
    expected_blowup,
    require_admissible,
)
from anisonorm.services.norms import factorized_norm, mixed_norm
from anisonorm.services.operators import (
    BlockOperatorSpec,
    apply_tensor_operator,
    block_output_norm,
    block_ratio,
)

logger = logging.getLogger(__name__)

Exponents = tuple[float, ...]
PHI_RATIO = 2.0 / (1.0 + math.sqrt(5.0))
DEGENERATE_SPREAD = 1e-6
LADDER_BASE = 2.0
# log-Riesz PowerCutoff margins, in units of 1/q
LOG_MARGIN = ParamRange(low=0.05, high=4.0)


# -- ratios ------------------------------------------------------------------------


def _domains(family: OperatorFamily) -> list:
    return [(family.domain, family.domain_radius)] * family.l


def _restricted(family: OperatorFamily, f: GridFunction) -> GridFunction:
    """Samples outside the family's domain set to zero."""
    values = np.array(f.values)
    for j, axis in enumerate(f.axes):
        spec = BlockOperatorSpec.from_family(family, j)
        mask = spec.contains(axis)
        shape = [1] * f.l
        shape[j] = axis.size
        values = values * mask.reshape(shape)
    return f.with_values(values)


def _resolve_q(family: OperatorFamily, p: Sequence[float], q: Sequence[float] | None) -> Exponents:
    report = require_admissible(family, p)
    if q is not None:
        if len(q) != family.l:
            raise ConfigurationError(f"expected {family.l} output exponents, got {len(q)}")
        return tuple(float(x) for x in q)
    assert report.q is not None
    return report.q


def output_norm(family: OperatorFamily, f: TestFunction, q: Sequence[float]) -> float:
    """|Tf|_q of a factorized function, one block at a time."""
    result = 1.0
    for j, (g, qj) in enumerate(zip(f.factors, q, strict=True)):
        result *= block_output_norm(BlockOperatorSpec.from_family(family, j), g, qj)
    return result


def operator_ratio(
    family: OperatorFamily,
    f: GridFunction | TestFunction,
    p: Sequence[float],
    q: Sequence[float] | None = None,
) -> float:
    """|Tf|_q / |f|_p with q = q_of_p(p) unless an explicit q is given.

    Grid functions go through the dense grid path; factorized test functions use
    the product of one-dimensional block ratios.
    """
    q = _resolve_q(family, p, q)
    if isinstance(f, TestFunction):
        if f.l != family.l:
            raise ConfigurationError(f"test function has {f.l} factors, family has {family.l}")
        ratio = 1.0
        for j, (g, pj, qj) in enumerate(zip(f.factors, p, q, strict=True)):
            ratio *= block_ratio(BlockOperatorSpec.from_family(family, j), g, pj, qj)
        return ratio
    source = _restricted(family, f)
    denominator = mixed_norm(source, p)
    if denominator == 0.0:
        raise ZeroDenominator("input function has zero norm on the operator domain")
    return mixed_norm(apply_tensor_operator(family, source), q) / denominator


# -- test families -----------------------------------------------------------------


def source_weight(kind: BlockKind, family: OperatorFamily, index: int) -> float:
    """Exponent w of the source weight |y|**-w of a block."""
    block = family.blocks[index]
    if kind is BlockKind.RIESZ:
        return block.alpha
    if kind is BlockKind.FOURIER:
        return block.beta
    return 0.0


def kernel_order(kind: BlockKind, family: OperatorFamily, index: int) -> float:
    """Exponent of the difference kernel |x - y|**-order of a Riesz block."""
    if kind is BlockKind.RIESZ:
        return family.blocks[index].gamma or 0.0
    return 0.0


def margin_unit(family: OperatorFamily, index: int, q: float) -> float:
    """Log-Riesz outputs blow up on the scale 1/q, so their margins are counted in it."""
    if family.block_kind(index) is BlockKind.LOG_RIESZ and math.isfinite(q):
        return 1.0 / q
    return 1.0


def search_box(spec: TestFamilySpec, family: OperatorFamily, index: int) -> dict[str, ParamRange]:
    box = spec.box(index)
    explicit = index < len(spec.blocks) and "margin" in spec.blocks[index]
    log_kind = family.block_kind(index) is BlockKind.LOG_RIESZ
    if spec.kind is TestFamilyKind.POWER_CUTOFF and log_kind and not explicit:
        box["margin"] = LOG_MARGIN
    return box


def make_profile(
    kind: TestFamilyKind,
    params: dict[str, float],
    p: float,
    weight: float = 0.0,
    unit: float = 1.0,
    order: float = 0.0,
) -> LineFunction:
    """One factor of a test function.

    PowerCutoff exponents sit ``margin * unit`` above the integrability floor at 0,
    PowerTail exponents ``margin`` below the ceiling at infinity.
    """
    if kind is TestFamilyKind.POWER_CUTOFF:
        a = power_floor(p, weight) + params["margin"] * unit
        return PowerCutoff(a, params.get("radius", 1.0), taper=params.get("taper", 0.0))
    if kind is TestFamilyKind.POWER_TAIL:
        a = power_ceiling(p, weight, order) - params["margin"]
        return PowerTail(a, params.get("radius", 1.0))
    if kind is TestFamilyKind.DILATED_GAUSSIAN:
        return DilatedGaussian(params["dilation"])
    return Bump(params["shape"], params.get("radius", 1.0))


def block_profile(
    family: OperatorFamily,
    index: int,
    kind: TestFamilyKind,
    params: dict[str, float],
    p: float,
    q: float,
) -> LineFunction:
    """Factor ``index`` of a test function, shaped by that block's weights."""
    block_kind = family.block_kind(index)
    return make_profile(
        kind,
        params,
        p,
        source_weight(block_kind, family, index),
        margin_unit(family, index, q),
        kernel_order(block_kind, family, index),
    )


def make_test_function(
    family: OperatorFamily,
    kind: TestFamilyKind,
    params: Sequence[dict[str, float]],
    p: Sequence[float],
    q: Sequence[float],
) -> TestFunction:
    factors = tuple(block_profile(family, j, kind, params[j], p[j], q[j]) for j in range(family.l))
    return TestFunction(factors, kind)


# -- search ------------------------------------------------------------------------


def golden_section_max(
    fn: Callable[[float], float], lower: float, upper: float, evaluations: int = 24
) -> tuple[float, float, int]:
    """Best point seen while golden-section searching for a maximum on [lower, upper].

    Both ends are evaluated as well, so a maximum sitting on the boundary is found.
    Returns (argmax, max, evaluations used).
    """
    if not upper > lower:
        return lower, fn(lower), 1
    x1 = upper - PHI_RATIO * (upper - lower)
    x2 = lower + PHI_RATIO * (upper - lower)
    seen = [(fn(lower), lower), (fn(upper), upper)]
    f1, f2 = fn(x1), fn(x2)
    seen += [(f1, x1), (f2, x2)]
    used = 4
    while used < evaluations:
        if f2 >= f1:
            lower, x1, f1 = x1, x2, f2
            x2 = lower + PHI_RATIO * (upper - lower)
            f2 = fn(x2)
            seen.append((f2, x2))
        else:
            upper, x2, f2 = x2, x1, f1
            x1 = upper - PHI_RATIO * (upper - lower)
            f1 = fn(x1)
            seen.append((f1, x1))
        used += 1
    best_value, best_x = max(seen, key=lambda item: item[0])
    return best_x, best_value, used


@dataclass
class _Search:
    """Coordinate-ascent state for one exponent vector."""

    family: OperatorFamily
    spec: TestFamilySpec
    p: Exponents
    q: Exponents
    memo: dict[tuple, float] = field(default_factory=dict)
    values: list[float] = field(default_factory=list)

    def block_log_ratio(self, j: int, params: dict[str, float]) -> float:
        key = (j, tuple(sorted(params.items())))
        if key not in self.memo:
            try:
                g = block_profile(self.family, j, self.spec.kind, params, self.p[j], self.q[j])
                spec = BlockOperatorSpec.from_family(self.family, j)
                self.memo[key] = math.log(block_ratio(spec, g, self.p[j], self.q[j]))
            except (NumericalError, ValueError) as e:
                logger.debug("Block %d ratio failed for %s: %s", j + 1, params, e)
                self.memo[key] = -math.inf
        return self.memo[key]

    def objective(self, params: list[dict[str, float]]) -> float:
        total = 0.0
        for j, block in enumerate(params):
            total += self.block_log_ratio(j, block)
            if total == -math.inf:
                break
        self.values.append(total)
        return total


def _start(box: dict[str, ParamRange]) -> dict[str, float]:
    return {name: math.sqrt(r.low * r.high) for name, r in box.items()}


def search_lower_bound(
    family: OperatorFamily,
    p: Sequence[float],
    spec: TestFamilySpec | None = None,
    q: Sequence[float] | None = None,
) -> KEstimate:
    """Maximize the ratio over the test-family box by coordinate ascent.

    Each free parameter is searched in log scale by golden section; sweeps stop
    early once a full sweep brings no improvement. The result is deterministic.
    """
    spec = spec or TestFamilySpec()
    p = tuple(float(x) for x in p)
    q = _resolve_q(family, p, q)
    search = _Search(family, spec, p, q)
    boxes = [search_box(spec, family, j) for j in range(family.l)]
    current = [_start(box) for box in boxes]
    coordinates = [
        (j, name) for j, box in enumerate(boxes) for name in sorted(box) if not box[name].fixed
    ]
    best = search.objective(current)

    for sweep in range(spec.sweeps):
        before = best
        for j, name in coordinates:
            rng = boxes[j][name]

            def along(log_x: float, j: int = j, name: str = name) -> float:
                trial = [dict(block) for block in current]
                trial[j][name] = math.exp(log_x)
                return search.objective(trial)

            log_x, value, _ = golden_section_max(
                along, math.log(rng.low), math.log(rng.high), spec.evaluations
            )
            if value > best:
                best = value
                current[j][name] = math.exp(log_x)
        logger.debug("Sweep %d at p=%s: log ratio %.6g", sweep + 1, p, best)
        if not best > before:
            break

    if not math.isfinite(best):
        raise NumericalError(f"no {spec.kind} test function gave a finite ratio at p={p}")
    finite = [v for v in search.values if math.isfinite(v)]
    degenerate = bool(coordinates) and max(finite) - min(finite) <= DEGENERATE_SPREAD
    if degenerate:
        logger.warning("Flat objective at p=%s for %s; returning best seen", p, spec.kind)

    witness_function = make_test_function(family, spec.kind, current, p, q)
    witness = dict(witness_function.params)
    for j, block in enumerate(current):
        witness.update({f"{j + 1}.{name}": value for name, value in block.items()})
    return KEstimate(
        p=p,
        q=q,
        lower_bound=math.exp(best),
        witness=witness,
        kind=spec.kind,
        quadrature_tolerance=get_settings().tolerance,
        degenerate=degenerate,
        evaluations=len(search.values),
    )


def _points(pgrid: PGrid | Sequence[Sequence[float]]) -> list[Exponents]:
    if isinstance(pgrid, PGrid):
        return list(pgrid.points())
    return [tuple(float(x) for x in p) for p in pgrid]


async def scan_k_curve_async(
    family: OperatorFamily,
    pgrid: PGrid | Sequence[Sequence[float]],
    spec: TestFamilySpec | None = None,
    threads: int | None = None,
) -> list[KEstimate]:
    """Search every grid point with at most ``threads`` searches running at once."""
    points = _points(pgrid)
    for p in points:
        require_admissible(family, p)
    semaphore = asyncio.Semaphore(threads or get_settings().threads)

    async def one(p: Exponents) -> KEstimate:
        async with semaphore:
            estimate = await asyncio.to_thread(search_lower_bound, family, p, spec)
        logger.info("K lower bound %.6g at p=%s", estimate.lower_bound, p)
        return estimate

    curve = await asyncio.gather(*(one(p) for p in points))
    return sorted(curve, key=lambda estimate: estimate.p)


def scan_k_curve(
    family: OperatorFamily,
    pgrid: PGrid | Sequence[Sequence[float]],
    spec: TestFamilySpec | None = None,
    threads: int | None = None,
) -> list[KEstimate]:
    """Lower bounds at every grid point, sorted by p."""
    return asyncio.run(scan_k_curve_async(family, pgrid, spec, threads))


# -- blow-up -----------------------------------------------------------------------


def fit_power_law(
    distances: Sequence[float], values: Sequence[float]
) -> tuple[float, float, float]:
    """Least-squares line through (log eps, log value): (slope, intercept, max |residual|)."""
    x = np.log(np.asarray(distances, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    return float(slope), float(intercept), residual


def endpoint_distance(p: float, endpoint: float) -> float:
    """Distance to an endpoint; 1/p when the endpoint is infinite."""
    if math.isinf(endpoint):
        return 1.0 / p
    return abs(endpoint - p)


def fit_blowup(
    curve: Sequence[KEstimate],
    endpoint: float,
    block: int = 1,
    side: str = "plus",
    expected_slope: float | None = None,
) -> BlowupFit:
    """Fit log(lower bound) against log(distance of p_block to the endpoint)."""
    samples = sorted(
        ((endpoint_distance(k.p[block - 1], endpoint), k.lower_bound) for k in curve),
        key=lambda s: -s[0],
    )
    distances = [eps for eps, _ in samples]
    if len(samples) < 5 or len(set(distances)) < len(distances) or min(distances) <= 0:
        raise InsufficientSamples(
            f"blow-up fit needs at least 5 distinct positive distances, got {distances}"
        )
    slope, intercept, residual = fit_power_law(distances, [b for _, b in samples])
    return BlowupFit(
        block=block,
        side=side,
        endpoint=endpoint,
        samples=tuple(samples),
        fitted_slope=slope,
        intercept=intercept,
        residual=residual,
        expected_slope=expected_slope,
    )


def interior_point(family: OperatorFamily, index: int) -> float:
    """A comfortably admissible p for block ``index`` (0-based)."""
    rng = block_range(family, index)
    if math.isinf(rng.p_high):
        return rng.p_low + 1.0
    return 0.5 * (rng.p_low + rng.p_high)


def blowup_ladder(
    family: OperatorFamily,
    block: int = 1,
    endpoint: str = "plus",
    ladder: int = 6,
    start: float = 0.2,
    base: Sequence[float] | None = None,
) -> tuple[float, list[Exponents]]:
    """Endpoint value and points with p_block = endpoint -/+ start*gap*2**-k."""
    index = block - 1
    rng = block_range(family, index)
    if rng.empty:
        raise ConfigurationError(f"block {block} has an empty admissible range")
    target = rng.p_high if endpoint == "plus" else rng.p_low
    if math.isinf(target):
        raise ConfigurationError(f"block {block} endpoint {endpoint} is infinite; no ladder")
    gap = rng.p_high - rng.p_low if math.isfinite(rng.p_high) else rng.p_low
    base = list(base) if base is not None else [interior_point(family, j) for j in range(family.l)]
    sign = -1.0 if endpoint == "plus" else 1.0
    points = []
    for k in range(ladder):
        p = list(base)
        p[index] = target + sign * start * gap * LADDER_BASE**-k
        points.append(tuple(p))
    return target, points


def scan_blowup(
    family: OperatorFamily,
    spec: TestFamilySpec | None = None,
    block: int = 1,
    endpoint: str = "plus",
    ladder: int = 6,
    start: float = 0.2,
    threads: int | None = None,
) -> tuple[list[KEstimate], BlowupFit]:
    """Scan the epsilon ladder toward one block endpoint and fit its blow-up rate."""
    target, points = blowup_ladder(family, block, endpoint, ladder, start)
    curve = scan_k_curve(family, points, spec, threads)
    fit = fit_blowup(
        curve, target, block, endpoint, expected_blowup(family, block - 1, endpoint)
    )
    logger.info(
        "Block %d %s: fitted slope %.4f (expected %.4f)",
        block,
        endpoint,
        fit.fitted_slope,
        fit.expected_slope,
    )
    return curve, fit


def growth_factor(curve: Sequence[KEstimate]) -> float:
    bounds = [k.lower_bound for k in curve]
    if not bounds:
        raise InsufficientSamples("growth factor of an empty curve")
    return max(bounds) / min(bounds)


def endpoint_contrast(
    curve: Sequence[KEstimate], reference: Sequence[KEstimate]
) -> tuple[float, float]:
    """Growth factors (curve, reference) over the same ladder."""
    return growth_factor(curve), growth_factor(reference)


def endpoint_curves(
    family: OperatorFamily,
    spec: TestFamilySpec | None = None,
    block: int = 1,
    endpoint: str = "minus",
    ladder: int = 6,
    start: float = 0.2,
    threads: int | None = None,
) -> tuple[list[KEstimate], list[KEstimate]]:
    """Curves of a truncated Riesz family and of its full-space version on one ladder.

    The ladder runs toward the full-space endpoint. Toward the lower one the
    full-space norm is carried by tails at infinity, so the reference curve is
    searched over PowerTail functions there.
    """
    if family.kind not in (FamilyKind.RIESZ_INTERIOR, FamilyKind.RIESZ_EXTERIOR):
        raise ConfigurationError(f"{family.kind} has no full-space counterpart to contrast")
    spec = spec or TestFamilySpec()
    reference = OperatorFamily(kind=FamilyKind.RIESZ_FULL, blocks=family.blocks)
    _, points = blowup_ladder(reference, block, endpoint, ladder, start)
    reference_spec = spec
    if endpoint == "minus":
        reference_spec = TestFamilySpec(
            kind=TestFamilyKind.POWER_TAIL, sweeps=spec.sweeps, evaluations=spec.evaluations
        )
    inside = scan_k_curve(family, points, spec, threads)
    outside = scan_k_curve(reference, points, reference_spec, threads)
    return inside, outside


# -- envelope and transfer ---------------------------------------------------------


def calibrate_envelope(curve: Sequence[KEstimate], family: OperatorFamily) -> float:
    """Smallest C with lower_bound <= C * upper_shape(p) on every point of the curve."""
    if not curve:
        raise InsufficientSamples("calibration needs a non-empty curve")
    return max(k.lower_bound / envelope(family, k.p).upper_shape for k in curve)


def _fixed_exponents(family: OperatorFamily, points: Sequence[Exponents], margin: float):
    """Per-block PowerCutoff exponents that stay integrable at every grid point."""
    exponents = []
    for j in range(family.l):
        weight = source_weight(family.block_kind(j), family, j)
        exponents.append(max(power_floor(p[j], weight) for p in points) + margin)
    return exponents


def _cutoffs(family: OperatorFamily, points: Sequence[Exponents], margin: float) -> TestFunction:
    factors = tuple(PowerCutoff(a) for a in _fixed_exponents(family, points, margin))
    return TestFunction(factors, TestFamilyKind.POWER_CUTOFF)


def _gaussians(family: OperatorFamily, lam: float) -> TestFunction:
    return TestFunction(
        tuple(DilatedGaussian(lam) for _ in range(family.l)), TestFamilyKind.DILATED_GAUSSIAN
    )


def transfer_sets(
    family: OperatorFamily,
    points: Sequence[Exponents],
    calibration: int = 8,
    holdout: int = 10,
    margins: tuple[float, float] = (0.05, 2.0),
) -> tuple[list[TestFunction], list[TestFunction]]:
    """Disjoint calibration and holdout sets.

    Calibration: power cutoffs at geometric margins above the worst integrability
    floor, plus the unit Gaussian. Holdout: cutoffs at the geometric midpoints of
    those margins and Gaussians at other dilations in [1/4, 4].
    """
    cal_margins = np.geomspace(*margins, max(calibration - 1, 1))
    calibration_set = [_cutoffs(family, points, float(m)) for m in cal_margins]
    calibration_set.append(_gaussians(family, 1.0))

    mids = np.sqrt(cal_margins[:-1] * cal_margins[1:])
    fresh = [_cutoffs(family, points, float(m)) for m in mids[: holdout // 2]]
    count = holdout - len(fresh)
    even = count + count % 2
    exps = np.linspace(-2.0, 2.0, even)[:count]
    holdout_set = fresh + [_gaussians(family, float(2.0**e)) for e in exps]
    return calibration_set, holdout_set


def _input_norm(family: OperatorFamily, f: TestFunction, p: Exponents) -> float:
    return factorized_norm(f, p, _domains(family))


@dataclass
class TransferCheck:
    """Calibrated envelope constant plus the rescaled psi it defines."""

    family: OperatorFamily
    psi: PsiFunction
    constant: float
    points: list[Exponents]

    def nu_at(self, p: Exponents) -> float:
        """nu(q(p)) = psi(p) * C * upper_shape(p)."""
        return self.psi(p) * self.constant * envelope(self.family, p).upper_shape

    def margin(self, f: TestFunction) -> float:
        """||Tf||AG(nu) / ||f||AG(psi) over the tabulated exponent points."""
        numerator = denominator = 0.0
        for p in self.points:
            weight = self.psi(p)
            if math.isinf(weight):
                continue
            q = require_admissible(self.family, p).q
            assert q is not None
            numerator = max(numerator, output_norm(self.family, f, q) / self.nu_at(p))
            denominator = max(denominator, _input_norm(self.family, f, p) / weight)
        if denominator == 0.0:
            raise ZeroDenominator("holdout function has zero Grand Lebesgue norm")
        return numerator / denominator


def _transfer_points(psi: PsiFunction, pgrid: PGrid | None) -> list[Exponents]:
    if psi.kind is PsiKind.SPIKE:
        assert psi.spike is not None
        return [psi.spike]
    if pgrid is None or pgrid.size == 0:
        raise ConfigurationError("a non-spike psi needs an exponent grid")
    points = [p for p in pgrid.points() if psi.contains(p)]
    if not points:
        raise ConfigurationError("no grid point lies inside the psi support")
    return points


def verify_transfer(
    family: OperatorFamily,
    psi: PsiFunction,
    calibration_set: Sequence[TestFunction],
    holdout_set: Sequence[TestFunction],
    pgrid: PGrid | None = None,
    tolerance: float = 0.05,
) -> TransferReport:
    """Calibrate C on one set, then measure transfer margins on the other."""
    if set(calibration_set) & set(holdout_set):
        raise ConfigurationError("calibration and holdout sets must be disjoint")
    points = _transfer_points(psi, pgrid)
    for p in points:
        require_admissible(family, p)

    curve = []
    for f in calibration_set:
        for p in points:
            ratio = operator_ratio(family, f, p)
            curve.append(KEstimate(p=p, q=require_admissible(family, p).q, lower_bound=ratio))
    constant = calibrate_envelope(curve, family)
    logger.info("Calibrated envelope constant %.6g on %d ratios", constant, len(curve))

    check = TransferCheck(family, psi, constant, points)
    margins = tuple(check.margin(f) for f in holdout_set)
    report = TransferReport(
        constant=constant,
        margins=margins,
        holdout=tuple(f.params for f in holdout_set),
        calibration_size=len(calibration_set),
        grid_size=len(points),
        tolerance=tolerance,
    )
    if not report.passed:
        logger.warning("Transfer margin %.4f exceeds 1 + %.2f", report.worst, tolerance)
    return report
