"""Tests for the exponent algebra."""

import math

import pytest

from anisonorm.exceptions import InadmissibleP
from anisonorm.schemas.family import BlockParams, FamilyKind, OperatorFamily
from anisonorm.services.exponent_algebra import (
    admissible,
    block_range,
    effective_ranges,
    endpoints,
    envelope,
    equal_exponent_condition,
    expected_blowup,
    p_of_q,
    q_of_p,
    reciprocal,
    require_admissible,
)


def _family(kind: FamilyKind, *blocks: BlockParams, **kwargs) -> OperatorFamily:
    return OperatorFamily(kind=kind, blocks=blocks, **kwargs)


def test_reciprocal_handles_infinity():
    assert reciprocal(math.inf) == 0.0
    assert reciprocal(0.0) == math.inf
    assert reciprocal(4.0) == 0.25


def test_riesz_q_of_p(riesz_half):
    assert q_of_p(riesz_half, (4 / 3,)) == pytest.approx((4.0,))


def test_fourier_q_is_conjugate(fourier_plain):
    assert q_of_p(fourier_plain, (1.5,)) == pytest.approx((3.0,))


def test_two_block_riesz_q(riesz_two_block):
    assert q_of_p(riesz_two_block, (4 / 3, 8 / 7)) == pytest.approx((4.0, 8.0))


def test_p_of_q_inverts_q_of_p(riesz_two_block):
    p = (1.25, 1.1)
    assert p_of_q(riesz_two_block, q_of_p(riesz_two_block, p)) == pytest.approx(p, rel=1e-10)


def test_p_of_q_outside_image(riesz_half):
    with pytest.raises(InadmissibleP):
        p_of_q(riesz_half, (1.5,))


def test_p_of_q_reaches_infinite_p_despite_rounding():
    block = BlockParams(m=3, alpha=0.0268, beta=2.111, gamma=1.571)
    family = OperatorFamily(kind=FamilyKind.RIESZ_EXTERIOR, blocks=(block,), domain_radius=1.0)
    assert admissible(family, (math.inf,)).passed
    q = q_of_p(family, (math.inf,))
    assert q[0] == pytest.approx(4.2324, rel=1e-4)
    assert p_of_q(family, q) == (math.inf,)


def test_riesz_endpoints_two_dimensional_block():
    family = _family(FamilyKind.RIESZ_FULL, BlockParams(m=2, alpha=0.5, gamma=0.5))
    r = block_range(family, 0)
    assert r.p_minus == pytest.approx(4 / 3)
    assert r.p_plus == pytest.approx(2.0)
    assert r.q_minus == pytest.approx(4.0)
    assert r.q_plus == math.inf
    assert r.kappa == pytest.approx(0.5)


def test_unweighted_riesz_table_row(riesz_half):
    (r,) = endpoints(riesz_half)
    assert (r.p_minus, r.p_plus, r.kappa) == pytest.approx((1.0, 2.0, 0.5))
    assert (r.p_low, r.p_high) == pytest.approx((1.0, 2.0))
    assert not r.empty


def test_mixture_endpoints():
    family = _family(FamilyKind.MIXTURE, BlockParams(alpha=0.5, beta=0.25, gamma=0.2))
    r = block_range(family, 0)
    assert r.p_minus == pytest.approx(4 / 3)
    assert r.p_plus == math.inf
    assert r.q_minus == pytest.approx(1.0)
    assert r.q_plus == pytest.approx(10 / 3)


def test_fourier_without_weight_starts_at_one(fourier_plain):
    assert block_range(fourier_plain, 0).p_minus == pytest.approx(1.0)


def test_effective_ranges_match_endpoints(riesz_two_block):
    ranges = effective_ranges(riesz_two_block)
    assert ranges[0][0] == pytest.approx((1.0, 2.0))
    assert ranges[1][0] == pytest.approx((1.0, 4 / 3))
    assert ranges[1][1][1] == math.inf


def test_riesz_outside_range_reports_condition(riesz_half):
    report = admissible(riesz_half, (3.0,))
    assert not report.passed
    assert "block 1: p_below_p_plus" in report.violations
    with pytest.raises(InadmissibleP) as excinfo:
        require_admissible(riesz_half, (3.0,))
    assert "block 1: p_below_p_plus" in excinfo.value.conditions


def test_fourier_side_condition_reports_q():
    family = _family(FamilyKind.FOURIER_WEIGHTED, BlockParams(alpha=0.3, beta=0.2))
    report = admissible(family, (2.0,))
    assert not report.passed
    assert report.violations == ("block 1: p_le_q",)
    assert report.q == pytest.approx((1 / 0.6,))


def test_fourier_equality_is_flagged(fourier_plain):
    report = admissible(fourier_plain, (2.0,))
    assert report.passed
    assert "block 1: p_le_q_equality" in report.equality_flags


def test_wrong_length_is_rejected(riesz_half):
    assert admissible(riesz_half, (1.5, 1.5)).violations == ("length",)
    with pytest.raises(InadmissibleP):
        q_of_p(riesz_half, (1.5, 1.5))


def test_slow_vary_pair_is_compatible():
    family = _family(
        FamilyKind.FOURIER_SLOW_VARY, BlockParams(alpha=0.1, slow_vary_id="log_symmetric")
    )
    report = admissible(family, (1.5,))
    assert report.passed
    low, high = report.compatibility[0]
    assert low == pytest.approx(1.0)
    assert high == pytest.approx(1.0)


def test_q_is_monotone_with_family_direction(riesz_half, fourier_plain):
    riesz = [q_of_p(riesz_half, (p,))[0] for p in (1.1, 1.4, 1.8)]
    fourier = [q_of_p(fourier_plain, (p,))[0] for p in (1.1, 1.4, 1.8)]
    assert riesz == sorted(riesz)
    assert fourier == sorted(fourier, reverse=True)


def test_riesz_envelope_value(riesz_half):
    value = envelope(riesz_half, (1.5,))
    assert value.lower_shape == pytest.approx(2.0)
    assert value.upper_shape == pytest.approx(2.0)


def test_fourier_envelope_exponents(fourier_plain):
    value = envelope(fourier_plain, (2.0,))
    assert value.lower_shape == pytest.approx(1.0)
    assert value.upper_shape == pytest.approx(2.0)


def test_interior_envelope_has_only_upper_factor():
    family = _family(FamilyKind.RIESZ_INTERIOR, BlockParams(gamma=0.5), domain_radius=1.0)
    assert envelope(family, (1.9,)).upper_shape == pytest.approx(10**0.5)


def test_riesz_envelope_log_slope(riesz_half):
    eps = [1e-3, 1e-4]
    logs = [math.log(envelope(riesz_half, (2.0 - e,)).upper_shape) for e in eps]
    slope = (logs[1] - logs[0]) / (math.log(eps[1]) - math.log(eps[0]))
    assert slope == pytest.approx(-0.5, abs=1e-3)


def test_envelope_rejects_inadmissible(riesz_half):
    with pytest.raises(InadmissibleP):
        envelope(riesz_half, (2.5,))


def test_equal_exponent_condition():
    same = _family(
        FamilyKind.FOURIER_WEIGHTED,
        BlockParams(alpha=0.1, beta=0.2),
        BlockParams(alpha=0.2, beta=0.3),
    )
    different = _family(
        FamilyKind.FOURIER_WEIGHTED, BlockParams(alpha=0.1, beta=0.2), BlockParams(beta=0.3)
    )
    assert equal_exponent_condition(same)
    assert not equal_exponent_condition(different)


def test_expected_blowup_rates(riesz_half):
    assert expected_blowup(riesz_half, 0, "plus") == pytest.approx(-0.5)
    interior = _family(FamilyKind.RIESZ_INTERIOR, BlockParams(gamma=0.5), domain_radius=1.0)
    assert expected_blowup(interior, 0, "minus") == 0.0


def test_exterior_envelope_is_positive_at_infinite_p():
    block = BlockParams(m=3, alpha=0.0268, beta=2.111, gamma=1.571)
    family = OperatorFamily(kind=FamilyKind.RIESZ_EXTERIOR, blocks=(block,), domain_radius=1.0)
    value = envelope(family, (math.inf,))
    assert value.lower_shape == 1.0
    assert value.upper_shape == 1.0
    expected = (2.0 - 3 / 2.9732) ** -(3.7088 / 3)
    assert envelope(family, (2.0,)).upper_shape == pytest.approx(expected)
