"""Tests for block operators and their tensor application."""

import math

import numpy as np
import pytest

from anisonorm.exceptions import (
    BlockDimensionError,
    FrequencyOutOfBand,
    NonFiniteResult,
    SingularOutputPoint,
    TruncationWarning,
    UnsupportedFamily,
)
from anisonorm.models.grid import GridFunction, uniform_axis
from anisonorm.models.profiles import DilatedGaussian, Indicator, PowerCutoff, PowerTail
from anisonorm.schemas.family import BlockKind, BlockParams, FamilyKind, OperatorFamily, Partition
from anisonorm.services.norms import line_norm, tensor_product
from anisonorm.services.operators import (
    BlockOperatorSpec,
    OutputSamples,
    apply_fourier_block,
    apply_log_riesz_block,
    apply_riesz_block,
    apply_tensor_operator,
    block_output_norm,
    block_output_samples,
    block_ratio,
    default_output_axis,
    inverted_block,
)

RIESZ_HALF = BlockOperatorSpec(BlockKind.RIESZ, BlockParams(gamma=0.5))
FOURIER = BlockOperatorSpec(BlockKind.FOURIER, BlockParams())


def _line(radius: float, length: int, profile) -> GridFunction:
    axis = uniform_axis(radius, length)
    return GridFunction.from_samples([axis], profile(axis))


def test_riesz_indicator_outside_support():
    value = apply_riesz_block(RIESZ_HALF, Indicator(0.0, 1.0), 2.0)
    assert value == pytest.approx(2.0 * (math.sqrt(2.0) - 1.0), rel=1e-10)


def test_riesz_indicator_inside_support():
    value = apply_riesz_block(RIESZ_HALF, Indicator(0.0, 1.0), 0.5)
    assert value == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-9)


def test_riesz_accepts_arrays_and_samples():
    values = apply_riesz_block(RIESZ_HALF, Indicator(0.0, 1.0), np.array([2.0, 3.0]))
    assert values.shape == (2,)
    axis = uniform_axis(1.0, 11)
    zero = apply_riesz_block(RIESZ_HALF, (axis, np.zeros(11)), 0.3)
    assert zero == 0.0


def test_weighted_output_is_singular_at_origin():
    spec = BlockOperatorSpec(BlockKind.RIESZ, BlockParams(beta=0.25, gamma=0.5))
    with pytest.raises(SingularOutputPoint):
        apply_riesz_block(spec, Indicator(0.0, 1.0), 0.0)


def test_gaussian_fourier_self_transform():
    g = DilatedGaussian(1.0 / math.sqrt(2.0))
    value = apply_fourier_block(FOURIER, g, 1.0)
    assert abs(value) == pytest.approx(math.exp(-0.5), rel=1e-10)
    assert abs(value.imag) < 1e-12


def test_fourier_of_indicator_vanishes_at_pi():
    assert abs(apply_fourier_block(FOURIER, Indicator(-1.0, 1.0), math.pi)) < 1e-12


def test_fourier_sample_band():
    axis = uniform_axis(1.0, 11)
    with pytest.raises(FrequencyOutOfBand):
        apply_fourier_block(FOURIER, (axis, 1.0 - axis**2), 100.0)


def test_log_riesz_oracle():
    value = apply_log_riesz_block(BlockParams(alpha=0.5, delta=1.0), Indicator(0.0, 1.0), 2.0)
    exact = 4.0 - 4.0 * math.sqrt(2.0) + 2.0 * math.sqrt(2.0) * math.log(2.0)
    assert value == pytest.approx(exact, rel=1e-9)
    assert value == pytest.approx(0.303662, abs=1e-6)


def test_log_riesz_small_delta_approaches_riesz():
    params = BlockParams(alpha=0.5, delta=1e-9)
    value = apply_log_riesz_block(params, Indicator(0.0, 1.0), 2.0)
    assert value == pytest.approx(2.0 * (math.sqrt(2.0) - 1.0), rel=1e-6)


def test_block_kind_checks():
    with pytest.raises(UnsupportedFamily):
        apply_fourier_block(RIESZ_HALF, Indicator(0.0, 1.0), 1.0)
    with pytest.raises(UnsupportedFamily):
        BlockOperatorSpec(BlockKind.MIXTURE, BlockParams(alpha=0.5, gamma=0.2))
    with pytest.raises(BlockDimensionError):
        BlockOperatorSpec(BlockKind.RIESZ, BlockParams(m=2, gamma=0.5))
    slow = OperatorFamily(kind=FamilyKind.FOURIER_SLOW_VARY, blocks=(BlockParams(),))
    with pytest.raises(UnsupportedFamily):
        BlockOperatorSpec.from_family(slow, 0)


def test_grid_path_matches_profile_path(riesz_half):
    f = _line(5.0, 401, lambda x: np.exp(-(x**2)))
    points = np.array([-1.0, 0.5, 2.0])
    out = apply_tensor_operator(riesz_half, f, [points])
    expected = apply_riesz_block(RIESZ_HALF, DilatedGaussian(1.0), points)
    assert out.values == pytest.approx(expected, rel=2e-3)


def test_tensor_operator_factorizes(riesz_half, riesz_two_block):
    g1 = _line(4.0, 81, lambda x: np.exp(-(x**2)))
    g2 = _line(4.0, 81, lambda x: np.exp(-2.0 * x**2))
    second = OperatorFamily(kind=FamilyKind.RIESZ_FULL, blocks=(BlockParams(gamma=0.25),))
    joint = apply_tensor_operator(riesz_two_block, tensor_product([g1, g2]))
    first_out = apply_tensor_operator(riesz_half, g1)
    second_out = apply_tensor_operator(second, g2)
    expected = np.multiply.outer(first_out.values, second_out.values)
    assert joint.values == pytest.approx(expected, rel=1e-10)


def test_composed_family_applies_each_block(riesz_half, fourier_plain):
    g1 = _line(4.0, 81, lambda x: np.exp(-(x**2)))
    g2 = _line(4.0, 81, lambda x: np.exp(-(x**2)))
    composed = OperatorFamily(
        kind=FamilyKind.COMPOSED,
        blocks=(BlockParams(gamma=0.5), BlockParams()),
        partition=Partition(riesz=(1,), fourier=(2,)),
    )
    joint = apply_tensor_operator(composed, tensor_product([g1, g2]))
    riesz = apply_tensor_operator(riesz_half, g1)
    fourier = apply_tensor_operator(fourier_plain, g2)
    assert joint.is_complex
    assert joint.values == pytest.approx(np.multiply.outer(riesz.values, fourier.values))


def test_tensor_operator_checks_dimensions(riesz_two_block, gaussian_grid):
    with pytest.raises(BlockDimensionError):
        apply_tensor_operator(riesz_two_block, gaussian_grid)
    mixture = OperatorFamily(
        kind=FamilyKind.MIXTURE, blocks=(BlockParams(alpha=0.5, beta=0.25, gamma=0.2),)
    )
    with pytest.raises(UnsupportedFamily):
        apply_tensor_operator(mixture, gaussian_grid)


def test_truncated_samples_warn(riesz_half):
    f = _line(1.0, 21, lambda x: np.ones_like(x))
    with pytest.warns(TruncationWarning):
        apply_tensor_operator(riesz_half, f, [np.array([-0.5, 0.5])])


def test_truncation_check_runs_on_every_axis(riesz_two_block):
    g1 = _line(1.0, 21, lambda x: np.ones_like(x))
    g2 = _line(4.0, 41, lambda x: np.exp(-(x**2)))
    with pytest.warns(TruncationWarning, match="axis 1"):
        out = apply_tensor_operator(riesz_two_block, tensor_product([g1, g2]))
    assert out.values.shape == (21, 41)


def test_default_output_axis_punctures_singular_origin():
    spec = BlockOperatorSpec(BlockKind.RIESZ, BlockParams(beta=0.25, gamma=0.5))
    axis = uniform_axis(1.0, 11)
    out = default_output_axis(spec, axis)
    assert 0.0 not in out
    assert out.size == 10
    assert default_output_axis(RIESZ_HALF, axis).size == 11


def test_plancherel_on_profile_path():
    g = DilatedGaussian(1.0)
    assert block_output_norm(FOURIER, g, 2.0) == pytest.approx(line_norm(g, 2.0), rel=1e-6)
    assert block_ratio(FOURIER, g, 2.0, 2.0) == pytest.approx(1.0, rel=1e-6)


def test_riesz_ratio_is_dilation_invariant():
    narrow = block_ratio(RIESZ_HALF, DilatedGaussian(3.0), 1.5, 6.0)
    wide = block_ratio(RIESZ_HALF, DilatedGaussian(1.0), 1.5, 6.0)
    assert narrow == pytest.approx(wide, rel=1e-3)


def test_output_samples_near_the_cutoff_are_finite():
    g = PowerCutoff(-0.2556)
    samples = block_output_samples(RIESZ_HALF, g)
    assert np.all(np.isfinite(samples.log_abs))
    assert block_output_norm(RIESZ_HALF, g, 6.0) > 0


def test_nan_samples_raise_instead_of_vanishing():
    samples = OutputSamples(np.array([np.nan, 0.0]), np.zeros(2), (), 0.0)
    with pytest.raises(NonFiniteResult):
        samples.norm(2.0)


def test_inverted_block_weights():
    spec = BlockOperatorSpec(BlockKind.RIESZ, BlockParams(alpha=0.25, gamma=0.25))
    inverse, g = inverted_block(spec, PowerTail(-0.8, radius=2.0), 1.4, 1.0 / (1.0 / 1.4 - 0.5))
    assert inverse.params.alpha == pytest.approx(2.0 - 0.5 - 2.0 / 1.4)
    assert inverse.params.beta == pytest.approx(2.0 * (1.0 / 1.4 - 0.5) - 0.25)
    assert inverse.gamma == 0.25
    assert g.a == pytest.approx(0.8 - 2.0 / 1.4)
    assert g.radius == 0.5


def test_power_tail_ratio_is_dilation_invariant():
    spec = BlockOperatorSpec(BlockKind.RIESZ, BlockParams(alpha=0.25, gamma=0.25))
    p, q = 1.4, 1.0 / (1.0 / 1.4 - 0.5)
    base = block_ratio(spec, PowerTail(-0.8), p, q)
    wide = block_ratio(spec, PowerTail(-0.8, radius=3.0), p, q)
    assert math.isfinite(base)
    assert wide == pytest.approx(base, rel=1e-3)


def test_power_tails_need_a_full_space_riesz_block():
    log_spec = BlockOperatorSpec(BlockKind.LOG_RIESZ, BlockParams(alpha=0.5, delta=1.0))
    with pytest.raises(UnsupportedFamily):
        block_ratio(log_spec, PowerTail(-0.8), 1.4, 3.5)
    with pytest.raises(UnsupportedFamily):
        block_output_samples(RIESZ_HALF, PowerTail(-0.8))
