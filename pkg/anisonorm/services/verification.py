"""Invariant suite behind ``anisonorm verify``.

Every check is deterministic for a given seed label and returns a named result;
a failing check never stops the suite.
"""

from __future__ import annotations

import hashlib
import logging
import math
import time
from collections.abc import Callable

import numpy as np
from pydantic import ValidationError

from anisonorm.config import get_settings
from anisonorm.exceptions import AnisonormError, ConfigurationError
from anisonorm.models.grid import GridFunction, uniform_axis
from anisonorm.models.profiles import DilatedGaussian, Indicator, LineFunction, PowerCutoff
from anisonorm.models.psi import PsiFunction
from anisonorm.models.test_function import TestFunction
from anisonorm.schemas.estimates import CheckResult
from anisonorm.schemas.family import BlockKind, BlockParams, FamilyKind, OperatorFamily, Partition
from anisonorm.services import slow_vary
from anisonorm.services.estimator import operator_ratio
from anisonorm.services.exponent_algebra import (
    admissible,
    endpoints,
    envelope,
    p_of_q,
    q_of_p,
    reciprocal,
)
from anisonorm.services.norms import (
    dilate,
    gls_norm,
    line_norm,
    lp_norm,
    mixed_norm,
    tensor_product,
)
from anisonorm.services.operators import (
    BlockOperatorSpec,
    apply_fourier_block,
    apply_riesz_block,
)

logger = logging.getLogger(__name__)

Check = Callable[[np.random.Generator], tuple[bool, float, str]]

EXACT_TOL = 1e-10
ORACLE_TOL = 1e-6
INVARIANCE_TOL = 1e-3
DRIFT_FACTOR = 1.5
DILATIONS = (0.25, 0.5, 2.0, 4.0)


def rng_for(label: str) -> np.random.Generator:
    seed = int.from_bytes(hashlib.sha256(label.encode()).digest()[:8], "little")
    return np.random.default_rng(seed)


def _relative(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def _random_factor(rng: np.random.Generator) -> GridFunction:
    """Indicator with grid-aligned ends, sampled Gaussian or sampled power cutoff."""
    n = int(rng.integers(33, 129))
    axis = uniform_axis(float(rng.uniform(1.0, 4.0)), n)
    choice = int(rng.integers(3))
    if choice == 0:
        lo, hi = sorted(rng.choice(n, size=2, replace=False))
        profile: LineFunction = Indicator(float(axis[lo]), float(axis[hi]))
    elif choice == 1:
        profile = DilatedGaussian(float(rng.uniform(0.5, 2.0)))
    else:
        profile = PowerCutoff(float(rng.uniform(-0.4, 2.0)), float(rng.uniform(0.5, 1.0)))
    return GridFunction.from_samples((axis,), profile.sample(axis))


def _random_p(rng: np.random.Generator) -> float:
    return math.inf if rng.random() < 0.1 else 1.0 + float(rng.exponential(2.0))


def check_factorization(rng: np.random.Generator, pairs: int = 50, vectors: int = 10):
    worst = 0.0
    for _ in range(pairs):
        g1, g2 = _random_factor(rng), _random_factor(rng)
        joint = tensor_product([g1, g2])
        for _ in range(vectors):
            p1, p2 = _random_p(rng), _random_p(rng)
            expected = mixed_norm(g1, (p1,)) * mixed_norm(g2, (p2,))
            worst = max(worst, _relative(mixed_norm(joint, (p1, p2)), expected))
    return worst <= EXACT_TOL, worst, f"{pairs} pairs x {vectors} exponent vectors"


def check_diagonal(rng: np.random.Generator, pairs: int = 50):
    worst = 0.0
    for _ in range(pairs):
        f = tensor_product([_random_factor(rng), _random_factor(rng)])
        p = _random_p(rng)
        worst = max(worst, _relative(mixed_norm(f, (p, p)), lp_norm(f, p)))
    return worst <= EXACT_TOL, worst, "|f|_(p,p) against the flat L_p norm"


def check_spike(rng: np.random.Generator, pairs: int = 20):
    mismatches = 0
    for _ in range(pairs):
        f = tensor_product([_random_factor(rng), _random_factor(rng)])
        r = (_random_p(rng), _random_p(rng))
        if gls_norm(f, PsiFunction.spike_at(r)) != mixed_norm(f, r):
            mismatches += 1
    return mismatches == 0, float(mismatches), "spike psi against the mixed norm at r"


def check_axis_dilation(rng: np.random.Generator, pairs: int = 20):
    worst = 0.0
    for _ in range(pairs):
        f = tensor_product([_random_factor(rng), _random_factor(rng)])
        p = (_random_p(rng), _random_p(rng))
        lam = tuple(float(x) for x in rng.choice(DILATIONS, size=2))
        factor = math.prod(x ** -reciprocal(pj) for x, pj in zip(lam, p, strict=True))
        worst = max(worst, _relative(mixed_norm(dilate(f, lam), p), factor * mixed_norm(f, p)))
    return worst <= EXACT_TOL, worst, "|T_lam f|_p = prod lam_j^(-1/p_j) |f|_p"


def check_riesz_covariance(rng: np.random.Generator):
    params = BlockParams(alpha=0.25, beta=0.25, gamma=0.25)
    spec = BlockOperatorSpec(BlockKind.RIESZ, params)
    g = DilatedGaussian(1.0)
    x = 0.7
    base = apply_riesz_block(spec, g, x)
    worst = 0.0
    for lam in DILATIONS:
        scaled = apply_riesz_block(spec, g.dilate(lam), x / lam)
        worst = max(worst, _relative(scaled, lam ** (0.75 - 1.0) * base))
    tolerance = 5 * get_settings().tolerance
    return worst <= tolerance, worst, "I[T_lam f](x/lam) = lam^(a+b+g-1) I[f](x)"


def check_fourier_covariance(rng: np.random.Generator):
    params = BlockParams(alpha=0.25, beta=0.25)
    spec = BlockOperatorSpec(BlockKind.FOURIER, params)
    g = DilatedGaussian(1.0)
    x = 0.7
    base = apply_fourier_block(spec, g, x)
    worst = 0.0
    for lam in DILATIONS:
        scaled = apply_fourier_block(spec, g.dilate(lam), lam * x)
        expected = lam ** (-1.0 + params.beta - params.alpha) * base
        worst = max(worst, abs(scaled - expected) / abs(expected))
    tolerance = 5 * get_settings().tolerance
    return worst <= tolerance, worst, "F[T_lam f](lam x) = lam^(b-a-1) F[f](x)"


def _two_block_riesz() -> OperatorFamily:
    return OperatorFamily(
        kind=FamilyKind.RIESZ_FULL,
        blocks=(BlockParams(gamma=0.5), BlockParams(gamma=0.25)),
    )


def check_ratio_dilation(rng: np.random.Generator):
    """Ratios are dilation invariant with the right q and drift with a wrong one."""
    family = _two_block_riesz()
    p = (1.5, 8.0 / 7.0)
    q = q_of_p(family, p)
    wrong = tuple(1.0 / (1.0 / qj + 0.1) for qj in q)
    f = TestFunction((DilatedGaussian(1.0), DilatedGaussian(1.0)))
    base = operator_ratio(family, f, p)
    worst = 0.0
    for lam in DILATIONS:
        dilated = f.dilate((lam, lam))
        worst = max(worst, _relative(operator_ratio(family, dilated, p), base))
    high = operator_ratio(family, f.dilate((4.0, 4.0)), p, wrong)
    low = operator_ratio(family, f.dilate((0.25, 0.25)), p, wrong)
    drift = max(high, low) / min(high, low)
    passed = worst <= INVARIANCE_TOL and drift >= DRIFT_FACTOR
    return passed, worst, f"invariance {worst:.2e}, wrong-q drift {drift:.3f}"


def check_oracles(rng: np.random.Generator):
    riesz = BlockOperatorSpec(BlockKind.RIESZ, BlockParams(gamma=0.5))
    errors = [abs(apply_riesz_block(riesz, Indicator(0.0, 1.0), 2.0) - 2 * (math.sqrt(2) - 1))]
    for p in (1.0, 2.0, 3.5):
        expected = (math.pi / p) ** (1.0 / (2.0 * p))
        errors.append(abs(line_norm(DilatedGaussian(1.0), p) - expected))
    fourier = BlockOperatorSpec(BlockKind.FOURIER, BlockParams())
    value = apply_fourier_block(fourier, DilatedGaussian(1.0 / math.sqrt(2.0)), 1.0)
    errors.append(abs(value - math.exp(-0.5)))
    worst = max(errors)
    return worst <= ORACLE_TOL, worst, "indicator Riesz, Gaussian norms, Gaussian transform"


def _random_block(rng: np.random.Generator) -> BlockParams:
    m = int(rng.integers(1, 4))
    return BlockParams(
        m=m,
        alpha=float(rng.uniform(0.0, m)),
        beta=float(rng.uniform(0.0, m)),
        gamma=float(rng.uniform(0.0, m)),
        delta=float(rng.uniform(0.05, 2.0)),
        slow_vary_id=str(rng.choice(slow_vary.registry.names())),
    )


def _random_family(kind: FamilyKind, rng: np.random.Generator) -> OperatorFamily:
    l = 2 if kind is FamilyKind.COMPOSED else int(rng.integers(1, 4))  # noqa: E741
    partition = Partition(riesz=(1,), fourier=(2,)) if kind is FamilyKind.COMPOSED else None
    return OperatorFamily(
        kind=kind,
        blocks=tuple(_random_block(rng) for _ in range(l)),
        partition=partition,
        domain_radius=float(rng.uniform(0.5, 2.0)),
    )


def _consistent(family: OperatorFamily, p: tuple[float, ...]) -> bool:
    q = q_of_p(family, p)
    back = p_of_q(family, q)
    endpoints(family)
    envelope(family, p)
    return all(
        abs(reciprocal(a) - reciprocal(b)) <= 1e-12 for a, b in zip(p, back, strict=True)
    )


def check_totality(rng: np.random.Generator, draws: int = 1000):
    counts = {"passed": 0, "rejected": 0, "inconsistent": 0}
    for kind in FamilyKind:
        for _ in range(draws):
            try:
                family = _random_family(kind, rng)
            except ValidationError:
                counts["rejected"] += 1
                continue
            p = tuple(_random_p(rng) for _ in range(family.l))
            report = admissible(family, p)
            if not report.passed:
                counts["rejected" if report.violations else "inconsistent"] += 1
                continue
            try:
                consistent = _consistent(family, p)
            except AnisonormError as e:
                logger.debug("Inconsistent draw %s at p=%s: %s", family, p, e)
                consistent = False
            counts["passed" if consistent else "inconsistent"] += 1
    detail = ", ".join(f"{k}={v}" for k, v in counts.items())
    return counts["inconsistent"] == 0, float(counts["inconsistent"]), detail


CHECKS: dict[str, Check] = {
    "factorization": check_factorization,
    "diagonal": check_diagonal,
    "spike": check_spike,
    "axis_dilation": check_axis_dilation,
    "riesz_covariance": check_riesz_covariance,
    "fourier_covariance": check_fourier_covariance,
    "ratio_dilation": check_ratio_dilation,
    "oracles": check_oracles,
    "totality": check_totality,
}


def run_check(name: str, check: Check, seed: str) -> CheckResult:
    start = time.perf_counter()
    try:
        passed, worst, detail = check(rng_for(f"{seed}:{name}"))
    except AnisonormError as e:
        logger.error("Check %s raised %s", name, type(e).__name__, exc_info=True)
        passed, worst, detail = False, math.inf, f"{type(e).__name__}: {e}"
    elapsed = time.perf_counter() - start
    logger.info("Check %s: %s (%s)", name, "pass" if passed else "FAIL", detail)
    return CheckResult(name=name, passed=passed, detail=detail, worst=worst, elapsed=elapsed)


def run_suite(seed: str = "default", only: list[str] | None = None) -> list[CheckResult]:
    """Run the named checks (all by default) in a fixed order."""
    names = only or list(CHECKS)
    unknown = set(names) - set(CHECKS)
    if unknown:
        raise ConfigurationError(f"unknown checks: {sorted(unknown)}")
    return [run_check(name, CHECKS[name], seed) for name in names]
