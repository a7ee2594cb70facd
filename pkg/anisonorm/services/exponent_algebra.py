"""Exponent algebra for every operator family.

All relations are linear in reciprocal coordinates u = 1/p, v = 1/q, so p = inf and
q = inf are plain zeros here. Each block obeys ``v = slope * u + offset``:

    Riesz       v = u - 1 + (alpha + beta + gamma)/m
    log-Riesz   v = u - alpha/m
    Fourier     v = 1 - u - (beta - alpha)/m
    mixture     v = 1 - u - (beta + gamma - alpha)/m

Admissibility is the intersection of linear conditions ``coef * u + const > 0``
(or ``>= 0``), which also yields the effective p-interval of each block.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

from anisonorm.config import get_settings
from anisonorm.exceptions import InadmissibleP
from anisonorm.schemas.exponents import AdmissibilityReport, BlockRange, EnvelopeValue
from anisonorm.schemas.family import BlockKind, BlockParams, Domain, FamilyKind, OperatorFamily
from anisonorm.services import slow_vary

logger = logging.getLogger(__name__)

INF = math.inf
EQUALITY_TOL = 1e-12

Interval = tuple[float, float]


def reciprocal(x: float) -> float:
    """1/x with 1/inf = 0 and 1/0 = inf."""
    if math.isinf(x):
        return 0.0
    if x == 0:
        return INF
    return 1.0 / x


@dataclass(frozen=True)
class Relation:
    slope: int
    offset: float

    def v_of_u(self, u: float) -> float:
        return self.slope * u + self.offset


@dataclass(frozen=True)
class Condition:
    """``coef * u + const`` must be positive (strict) or nonnegative."""

    name: str
    coef: float
    const: float
    strict: bool = True

    def value(self, u: float) -> float:
        return self.coef * u + self.const


def relation(kind: BlockKind, block: BlockParams) -> Relation:
    m = block.m
    gamma = block.gamma or 0.0
    if kind is BlockKind.RIESZ:
        return Relation(1, (block.alpha + block.beta + gamma) / m - 1.0)
    if kind is BlockKind.LOG_RIESZ:
        return Relation(1, -block.alpha / m)
    if kind is BlockKind.FOURIER:
        return Relation(-1, 1.0 - (block.beta - block.alpha) / m)
    return Relation(-1, 1.0 - (block.beta + gamma - block.alpha) / m)


def _v_conditions(rel: Relation) -> tuple[Condition, Condition]:
    """q >= 1 and q < inf, rewritten in u."""
    at_least_one = Condition("q_at_least_one", -rel.slope, 1.0 - rel.offset, strict=False)
    finite = Condition("q_finite", rel.slope, rel.offset)
    return at_least_one, finite


def block_conditions(kind: BlockKind, block: BlockParams, domain: Domain) -> list[Condition]:
    m = block.m
    a, b, g = block.alpha, block.beta, block.gamma or 0.0
    rel = relation(kind, block)
    conditions = [Condition("p_above_one", -1.0, 1.0)]
    if kind is BlockKind.RIESZ:
        if domain is not Domain.INTERIOR:
            conditions.append(Condition("p_above_p_minus", -1.0, 1.0 - a / m))
        if domain is not Domain.EXTERIOR:
            conditions.append(Condition("p_below_p_plus", 1.0, (a + g) / m - 1.0))
        conditions.extend(_v_conditions(rel))
    elif kind is BlockKind.LOG_RIESZ:
        conditions.append(Condition("p_below_m_over_alpha", 1.0, -a / m))
        conditions.extend(_v_conditions(rel))
    elif kind is BlockKind.FOURIER:
        conditions.append(Condition("beta_lt_m_over_p_conjugate", -1.0, 1.0 - b / m))
        conditions.extend(_v_conditions(rel))
        conditions.append(Condition("alpha_lt_m_over_q", rel.slope, rel.offset - a / m))
        conditions.append(Condition("p_le_q", 1.0 - rel.slope, -rel.offset, strict=False))
    else:
        conditions.append(Condition("p_above_p_tilde_minus", -1.0, 1.0 - b / m))
        conditions.extend(_v_conditions(rel))
        conditions.append(Condition("q_below_q_tilde_plus", rel.slope, rel.offset - (a - g) / m))
        conditions.append(Condition("p_le_q", 1.0 - rel.slope, -rel.offset, strict=False))
    return conditions


def _nominal(kind: BlockKind, block: BlockParams, domain: Domain) -> tuple[float, ...]:
    """(p_minus, p_plus, q_minus, q_plus, kappa) as displayed by the theory."""
    m = block.m
    a, b, g = block.alpha, block.beta, block.gamma or 0.0
    if kind is BlockKind.RIESZ:
        p_minus = 1.0 if domain is Domain.INTERIOR else m / (m - a)
        p_plus = INF if domain is Domain.EXTERIOR else m / (m - a - g)
        q_minus = m / (b + g) if b + g > 0 else INF
        q_plus = m / b if b > 0 else INF
        return p_minus, p_plus, q_minus, q_plus, (a + b + g) / m
    if kind is BlockKind.LOG_RIESZ:
        delta = block.delta or 0.0
        return 1.0, m / a, m / (m - a), INF, 1.0 + delta - a / m
    if kind is BlockKind.FOURIER:
        return m / (m - b), INF, 1.0, (m / a if a > 0 else INF), (a + b) / m
    return m / (m - b), INF, 1.0, m / (a - g), (a + b - g) / m


def _u_interval(conditions: Sequence[Condition]) -> tuple[float, float]:
    """Closure of the admissible u-set as (low, high); low > high when empty."""
    low, high = 0.0, 1.0
    for cond in conditions:
        if cond.coef > 0:
            low = max(low, -cond.const / cond.coef)
        elif cond.coef < 0:
            high = min(high, -cond.const / cond.coef)
        elif cond.const < 0 or (cond.strict and cond.const == 0):
            return 1.0, 0.0
    return low, high


def block_range(family: OperatorFamily, index: int) -> BlockRange:
    kind = family.block_kind(index)
    block = family.blocks[index]
    rel = relation(kind, block)
    p_minus, p_plus, q_minus, q_plus, kappa = _nominal(kind, block, family.domain)
    u_low, u_high = _u_interval(block_conditions(kind, block, family.domain))
    empty = not u_low < u_high
    if empty:
        u_low = u_high = min(max(u_low, 0.0), 1.0)
    v_ends = sorted((rel.v_of_u(u_low), rel.v_of_u(u_high)))
    return BlockRange(
        p_minus=p_minus,
        p_plus=p_plus,
        q_minus=min(q_minus, q_plus),
        q_plus=q_plus,
        kappa=kappa,
        p_low=reciprocal(u_high),
        p_high=reciprocal(u_low),
        q_low=reciprocal(max(v_ends[1], 0.0)),
        q_high=reciprocal(max(v_ends[0], 0.0)),
        empty=empty,
    )


def endpoints(family: OperatorFamily) -> list[BlockRange]:
    """Per-block endpoint table."""
    return [block_range(family, j) for j in range(family.l)]


def effective_ranges(family: OperatorFamily) -> list[tuple[Interval, Interval]]:
    """((p_low, p_high), (q_low, q_high)) per block after the side conditions."""
    return [((r.p_low, r.p_high), (r.q_low, r.q_high)) for r in endpoints(family)]


def _check_length(family: OperatorFamily, p: Sequence[float]) -> None:
    if len(p) != family.l:
        raise InadmissibleP(
            f"expected {family.l} exponents, got {len(p)}", conditions=["length"]
        )


def _compatibility(family: OperatorFamily) -> tuple[list[str], list[tuple[float, float]]]:
    violations: list[str] = []
    bounds: list[tuple[float, float]] = []
    if family.kind is not FamilyKind.FOURIER_SLOW_VARY:
        return violations, bounds
    for j, block in enumerate(family.blocks):
        pair = slow_vary.registry.get_pair(block.slow_vary_id)
        ratio = slow_vary.pair_ratio_bounds(pair)
        bounds.append(ratio)
        if not slow_vary.pair_compatible(ratio):
            violations.append(f"block {j + 1}: slow_vary_compatibility")
    return violations, bounds


def admissible(
    family: OperatorFamily, p: Sequence[float], margin: float | None = None
) -> AdmissibilityReport:
    """Diagnostic report: pass/fail, violated condition names, computed q."""
    if margin is None:
        margin = get_settings().admissibility_margin
    if len(p) != family.l:
        return AdmissibilityReport(passed=False, violations=("length",))
    violations: list[str] = []
    flags: list[str] = []
    q: list[float] = []
    for j, pj in enumerate(p):
        kind = family.block_kind(j)
        block = family.blocks[j]
        u = reciprocal(pj)
        for cond in block_conditions(kind, block, family.domain):
            value = cond.value(u)
            ok = value > margin if cond.strict else value >= -EQUALITY_TOL
            if not ok:
                violations.append(f"block {j + 1}: {cond.name}")
            elif not cond.strict and abs(value) <= EQUALITY_TOL:
                flags.append(f"block {j + 1}: {cond.name}_equality")
        v = relation(kind, block).v_of_u(u)
        q.append(reciprocal(v) if v >= 0 else -reciprocal(-v))
    compat_violations, bounds = _compatibility(family)
    violations.extend(compat_violations)
    return AdmissibilityReport(
        passed=not violations,
        violations=tuple(violations),
        q=tuple(q),
        equality_flags=tuple(flags),
        compatibility=tuple(bounds),
    )


def require_admissible(family: OperatorFamily, p: Sequence[float]) -> AdmissibilityReport:
    report = admissible(family, p)
    if not report.passed:
        raise InadmissibleP(
            f"p={tuple(p)} is not admissible for {family.kind}: {', '.join(report.violations)}",
            conditions=list(report.violations),
        )
    return report


def q_of_p(family: OperatorFamily, p: Sequence[float]) -> tuple[float, ...]:
    """Unique q solving the blockwise exponent relation."""
    _check_length(family, p)
    report = require_admissible(family, p)
    assert report.q is not None
    return report.q


def p_of_q(family: OperatorFamily, q: Sequence[float]) -> tuple[float, ...]:
    """Inverse of q_of_p; each relation is linear in 1/p, so it inverts in closed form."""
    _check_length(family, q)
    p: list[float] = []
    for j, qj in enumerate(q):
        kind = family.block_kind(j)
        block = family.blocks[j]
        rel = relation(kind, block)
        u_low, u_high = _u_interval(block_conditions(kind, block, family.domain))
        u = (reciprocal(qj) - rel.offset) / rel.slope
        # rounding in the offset must not push p = inf (u = 0) off the range
        if abs(u - u_low) <= EQUALITY_TOL:
            u = u_low
        elif abs(u - u_high) <= EQUALITY_TOL:
            u = u_high
        if not u_low <= u <= u_high:
            raise InadmissibleP(
                f"q_{j + 1}={qj} is outside the image of block {j + 1}",
                conditions=[f"block {j + 1}: q_range"],
            )
        p.append(reciprocal(u))
    return tuple(p)


def _power(base: float, exponent: float) -> float:
    if math.isinf(base):
        return 0.0 if exponent < 0 else (1.0 if exponent == 0 else INF)
    return base**exponent


def _fourier_shape(p: float, p_minus: float, exponent: float) -> tuple[float, float]:
    base = 1.0 if math.isinf(p) else p / (p - p_minus)
    return base**exponent, base ** max(1.0, exponent)


def block_envelope(family: OperatorFamily, index: int, p: float) -> tuple[float, float]:
    kind = family.block_kind(index)
    block = family.blocks[index]
    p_minus, p_plus, _, _, kappa = _nominal(kind, block, family.domain)
    if kind is BlockKind.RIESZ:
        if family.domain is Domain.INTERIOR:
            shape = _power(p_plus - p, -kappa)
        elif family.domain is Domain.EXTERIOR:
            # the shape vanishes as p -> inf; the endpoint itself takes the unit shape
            shape = 1.0 if math.isinf(p) else _power(p - p_minus, -kappa)
        else:
            shape = _power((p_plus - p) * (p - p_minus), -kappa)
        return shape, shape
    if kind is BlockKind.LOG_RIESZ:
        shape = _power((p - 1.0) * (p_plus - p), -kappa)
        return shape, shape
    return _fourier_shape(p, p_minus, kappa)


def envelope(family: OperatorFamily, p: Sequence[float]) -> EnvelopeValue:
    """Product over blocks of the p-dependent shape factors (constants set to 1)."""
    _check_length(family, p)
    require_admissible(family, p)
    lower = upper = 1.0
    for j, pj in enumerate(p):
        lo, hi = block_envelope(family, j, pj)
        lower *= lo
        upper *= hi
    return EnvelopeValue(lower_shape=lower, upper_shape=upper)


def equal_exponent_condition(family: OperatorFamily) -> bool:
    """Whether equal p_j always give equal q_j for a Fourier family."""
    ratios = [(b.beta - b.alpha) / b.m for b in family.blocks]
    return max(ratios) - min(ratios) <= EQUALITY_TOL


def expected_blowup(family: OperatorFamily, index: int, endpoint: str) -> float:
    """Theoretical slope of log K against log(distance to endpoint)."""
    kind = family.block_kind(index)
    block = family.blocks[index]
    kappa = _nominal(kind, block, family.domain)[4]
    if kind is BlockKind.FOURIER or kind is BlockKind.MIXTURE:
        if endpoint == "plus":
            return 0.0
        return -kappa
    if kind is BlockKind.RIESZ:
        if (family.domain is Domain.INTERIOR and endpoint == "minus") or (
            family.domain is Domain.EXTERIOR and endpoint == "plus"
        ):
            return 0.0
    return -kappa
