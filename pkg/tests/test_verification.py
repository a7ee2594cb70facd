"""Tests for the invariant suite."""

import pytest

from anisonorm.exceptions import ConfigurationError
from anisonorm.services import verification
from anisonorm.services.verification import CHECKS, rng_for, run_check, run_suite


def test_rng_is_seeded_by_label():
    assert rng_for("default:spike").random() == rng_for("default:spike").random()
    assert rng_for("a").random() != rng_for("b").random()


def test_unknown_check_is_a_configuration_error():
    with pytest.raises(ConfigurationError):
        run_suite("default", ["oracles", "nope"])


@pytest.mark.parametrize("name", ["oracles", "spike", "riesz_covariance", "fourier_covariance"])
def test_cheap_checks_pass(name):
    (result,) = run_suite("default", [name])
    assert result.name == name
    assert result.passed, result.detail
    assert result.elapsed >= 0


def test_exact_checks_pass_with_small_samples():
    rng = rng_for("default:small")
    passed, worst, _ = verification.check_factorization(rng, pairs=5, vectors=3)
    assert passed, worst
    passed, worst, _ = verification.check_diagonal(rng, pairs=5)
    assert passed, worst
    passed, worst, _ = verification.check_axis_dilation(rng, pairs=5)
    assert passed, worst


def test_totality_with_few_draws():
    passed, inconsistent, detail = verification.check_totality(rng_for("default:t"), draws=20)
    assert passed, detail
    assert inconsistent == 0.0


def test_raising_check_is_reported_not_raised():
    def broken(rng):
        raise ConfigurationError("boom")

    result = run_check("broken", broken, "default")
    assert not result.passed
    assert result.detail == "ConfigurationError: boom"


def test_suite_order_is_fixed():
    assert list(CHECKS)[:3] == ["factorization", "diagonal", "spike"]


@pytest.mark.slow
def test_full_suite_passes():
    results = run_suite("default")
    assert [r.name for r in results] == list(CHECKS)
    assert all(r.passed for r in results), [r.detail for r in results if not r.passed]
