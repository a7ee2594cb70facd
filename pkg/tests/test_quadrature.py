"""Tests for graded quadrature plans."""

import math

import numpy as np
import pytest

from anisonorm.exceptions import DivergentIntegral
from anisonorm.services.quadrature import (
    QuadraturePlan,
    build_plan,
    build_plan_over,
    gauss_jacobi,
    geometric_plan,
    log_cumulative_exponential,
    log_trapezoid,
)


def test_smooth_integral():
    plan = build_plan(0.0, math.pi)
    assert plan.integrate(np.sin(plan.nodes)) == pytest.approx(2.0, rel=1e-12)


def test_endpoint_singularity():
    plan = build_plan(0.0, 1.0, [(0.0, -0.5)])
    assert plan.integrate(plan.nodes**-0.5) == pytest.approx(2.0, rel=1e-10)


def test_interior_singularity_both_sides():
    plan = build_plan(-1.0, 1.0, [(0.0, -0.3)])
    values = np.abs(plan.nodes) ** -0.3
    assert plan.integrate(values) == pytest.approx(2.0 / 0.7, rel=1e-10)


def test_exponents_at_a_shared_point_add_up():
    plan = build_plan(0.0, 1.0, [(0.0, -0.25), (0.0, -0.25)])
    assert plan.integrate(plan.nodes**-0.5) == pytest.approx(2.0, rel=1e-10)


def test_nearby_outside_singularity_grades_the_end():
    gap = 1e-6
    plan = build_plan(0.0, 1.0, [(-gap, -0.5)])
    exact = 2.0 * (math.sqrt(1.0 + gap) - math.sqrt(gap))
    assert plan.integrate((plan.nodes + gap) ** -0.5) == pytest.approx(exact, rel=1e-8)


def test_nodes_inside_and_weights_positive():
    plan = build_plan(-2.0, 3.0, [(0.0, -0.7), (1.0, 0.5)], cuts=[2.5], max_panel=0.5)
    assert plan.size > 0
    assert np.all(plan.weights > 0)
    assert np.all((plan.nodes >= -2.0) & (plan.nodes <= 3.0))
    assert plan.integrate(np.ones(plan.size)) == pytest.approx(5.0, rel=1e-12)


def test_divergent_exponent_rejected():
    with pytest.raises(DivergentIntegral):
        build_plan(0.0, 1.0, [(0.0, -1.0)])


def test_empty_interval():
    assert build_plan(1.0, 1.0).size == 0
    assert QuadraturePlan.empty().size == 0


def test_plan_over_disjoint_intervals():
    plan = build_plan_over([(-3.0, -1.0), (1.0, 3.0)])
    assert plan.integrate(np.ones(plan.size)) == pytest.approx(4.0, rel=1e-12)


def test_geometric_plan_power_decay():
    plan = geometric_plan(1.0, 100.0)
    assert plan.integrate(plan.nodes**-2.0) == pytest.approx(0.99, rel=1e-12)
    assert geometric_plan(0.0, 1.0).size == 0


def test_gauss_jacobi_rules_are_cached_and_read_only():
    nodes, weights = gauss_jacobi(8, 0.0, -0.5)
    assert gauss_jacobi(8, 0.0, -0.5)[0] is nodes
    assert not weights.flags.writeable


def test_log_trapezoid_matches_plain_rule():
    t = np.linspace(0.0, 1.0, 11)
    values = np.exp(t)
    expected = np.trapezoid(values, t)
    assert log_trapezoid(np.log(values), t) == pytest.approx(math.log(expected), rel=1e-12)


def test_log_cumulative_exponential_exact_cells():
    t = np.linspace(0.0, 2.0, 5)
    flat = log_cumulative_exponential(t, 0.0, np.zeros_like(t))
    assert flat[0] == -np.inf
    assert np.exp(flat[1:]) == pytest.approx(t[1:], rel=1e-12)
    grown = log_cumulative_exponential(t, 1.0, np.zeros_like(t))
    assert np.exp(grown[-1]) == pytest.approx(math.expm1(2.0), rel=1e-12)


def test_deep_grading_keeps_nodes_off_the_singular_point():
    s = 0.99999
    plan = build_plan(0.0, 2.0, [(s, -0.5)], cuts=[1.0], levels=40)
    assert np.all(plan.nodes != s)
    values = np.abs(plan.nodes - s) ** -0.5
    assert np.all(np.isfinite(plan.weights * values))
    exact = 2.0 * (math.sqrt(s) + math.sqrt(2.0 - s))
    assert plan.integrate(values) == pytest.approx(exact, rel=1e-8)
