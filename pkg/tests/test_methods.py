import itertools

import numpy as np
import pytest

from sumround import oric_round
from sumround.errors import InvalidThreshold, TooManyComponents
from sumround.methods import (
    TRIAL_BLOCK,
    _block_stream,
    exact_distribution,
    feasible_threshold,
    fractional_round,
    monte_carlo_report,
    randomized_round,
    sorted_bias_pattern,
)

PAPER_X = [2.25, 3.4, 4.35]
EXAMPLE_FRACS = [0.4, 0.35, 0.25]


def naive_distribution(fracs, floors, target, optimal):
    """Independent enumeration with itertools.product."""
    feasible = hit = 0.0
    mean = np.zeros(len(fracs))
    for bits in itertools.product((0, 1), repeat=len(fracs)):
        p = np.prod([f if b else 1 - f for f, b in zip(fracs, bits)])
        outcome = np.asarray(floors) + bits
        mean += p * outcome
        if outcome.sum() == target:
            feasible += p
        if list(outcome) == list(optimal):
            hit += p
    return feasible, hit, mean


# -- fractional rounding -----------------------------------------------------

def test_midpoint_rounding_breaks_the_sum():
    out = fractional_round(PAPER_X, 0.5)
    assert out.allocation.tolist() == [2, 3, 4]
    assert out.sum_deviation == -1
    assert out.below_count == 3


def test_threshold_0_35_is_feasible():
    out = fractional_round(PAPER_X, 0.35)
    assert out.allocation.tolist() == [2, 4, 4]
    assert out.sum_deviation == 0
    assert out.allocation.tolist() == oric_round(PAPER_X).tolist()


def test_fractional_integer_input():
    out = fractional_round([3, 4], 0.2)
    assert out.allocation.tolist() == [3, 4] and out.sum_deviation == 0


@pytest.mark.parametrize("t", [-0.1, 1.0, 1.5])
def test_invalid_threshold(t):
    with pytest.raises(InvalidThreshold):
        fractional_round(PAPER_X, t)


def test_feasible_threshold_paper_instance():
    t = feasible_threshold(PAPER_X)
    # 4.35 - 4 is 0.34999999999999964 in binary floating point
    assert 0.35 - 1e-12 <= t < 0.4
    assert fractional_round(PAPER_X, t).sum_deviation == 0


def test_feasible_threshold_none_when_tie_straddles_cut():
    assert feasible_threshold([0.5, 0.5, 1.0]) is None
    # exhaustive scan over every distinct candidate cut confirms it
    candidates = np.linspace(0, 0.999, 1000)
    assert all(fractional_round([0.5, 0.5, 1.0], t).sum_deviation != 0 for t in candidates)


def test_feasible_threshold_integer_input():
    assert feasible_threshold([1, 2, 3]) == 0.0


def test_feasible_threshold_all_up():
    t = feasible_threshold([0.5, 0.5])
    assert t is None
    t = feasible_threshold([0.6, 0.4, 0.7, 0.3])
    assert fractional_round([0.6, 0.4, 0.7, 0.3], t).sum_deviation == 0


def test_feasible_threshold_random():
    rng = np.random.default_rng(11)
    for _ in range(200):
        x = rng.uniform(0, 5, rng.integers(2, 9))
        x[0] += np.ceil(x.sum()) - x.sum()
        t = feasible_threshold(x)
        assert t is not None
        out = fractional_round(x, t)
        assert out.sum_deviation == 0
        assert out.allocation.tolist() == oric_round(x).tolist()


# -- randomized rounding -----------------------------------------------------

def test_randomized_integer_input():
    assert randomized_round([2, 3], 123).tolist() == [2, 3]


def test_randomized_determinism():
    x = [0.4, 0.35, 0.25, 1.0]
    a = randomized_round(x, np.random.default_rng(7))
    b = randomized_round(x, np.random.default_rng(7))
    assert a.tolist() == b.tolist()


def test_randomized_outcome_frequency():
    rng = np.random.default_rng(99)
    draws = np.array([randomized_round(EXAMPLE_FRACS, rng) for _ in range(20000)])
    freq = np.mean((draws == [1, 0, 0]).all(axis=1))
    expected = 0.4 * 0.65 * 0.75
    assert expected == pytest.approx(0.195)
    assert abs(freq - expected) < 4 * np.sqrt(expected * (1 - expected) / 20000)


# -- exact distribution ------------------------------------------------------

def test_exact_distribution_paper_example():
    d = exact_distribution(EXAMPLE_FRACS)
    assert d.optimality_probability == pytest.approx(0.195, abs=1e-12)
    assert d.feasibility_probability == pytest.approx(0.45, abs=1e-12)
    assert d.conditional_non_optimality == pytest.approx(1 - 0.195 / 0.45, abs=1e-12)
    assert d.conditional_non_optimality == pytest.approx(0.5667, abs=1e-4)
    assert d.wrong_roundup_probability == pytest.approx(1 - 0.65 * 0.75, abs=1e-12)
    assert d.expected_wrong_roundups == pytest.approx(0.6, abs=1e-12)


def test_exact_distribution_integer_input():
    d = exact_distribution([1, 2])
    assert d.feasibility_probability == 1.0 and d.optimality_probability == 1.0


def test_exact_distribution_matches_naive_enumeration():
    rng = np.random.default_rng(4)
    for _ in range(30):
        x = rng.uniform(0, 4, rng.integers(2, 8))
        x[0] += np.ceil(x.sum()) - x.sum()
        opt = oric_round(x)
        d = exact_distribution(x, opt)
        floors = np.floor(x).astype(int)
        fracs = x - floors
        feasible, hit, mean = naive_distribution(fracs, floors, opt.target, opt.tolist())
        assert d.feasibility_probability == pytest.approx(feasible, abs=1e-12)
        assert d.optimality_probability == pytest.approx(hit, abs=1e-12)
        np.testing.assert_allclose(d.exact_mean, mean, atol=1e-12)


def test_exact_distribution_limit():
    x = [0.5] * 22
    with pytest.raises(TooManyComponents):
        exact_distribution(x)


# -- Monte Carlo -------------------------------------------------------------

def test_monte_carlo_integer_input():
    r = monte_carlo_report([2, 3, 5], trials=100, seed=1)
    assert r.feasibility_rate == 1.0 and r.optimality_rate == 1.0
    assert r.bias_signs == ["0", "0", "0"]


def test_monte_carlo_seed_determinism():
    a = monte_carlo_report(EXAMPLE_FRACS, trials=10_000, seed=42)
    b = monte_carlo_report(EXAMPLE_FRACS, trials=10_000, seed=42)
    assert a.empirical_mean.tobytes() == b.empirical_mean.tobytes()
    assert (a.feasibility_rate, a.optimality_rate) == (b.feasibility_rate, b.optimality_rate)


def test_monte_carlo_independent_of_workers():
    a = monte_carlo_report(EXAMPLE_FRACS, trials=20_000, seed=5, workers=1)
    b = monte_carlo_report(EXAMPLE_FRACS, trials=20_000, seed=5, workers=4)
    assert a.empirical_mean.tobytes() == b.empirical_mean.tobytes()
    assert a.optimality_rate == b.optimality_rate


def test_trial_draws_depend_only_on_seed_and_index():
    # a short final block is a prefix of the full block's stream
    full = _block_stream(3, 2).random((TRIAL_BLOCK, 4))
    short = _block_stream(3, 2).random((10, 4))
    np.testing.assert_array_equal(full[:10], short)


def test_monte_carlo_rates_bounded():
    r = monte_carlo_report(EXAMPLE_FRACS, trials=5000, seed=0)
    assert 0 <= r.optimality_rate <= r.feasibility_rate <= 1


def test_bias_sign_pattern():
    x = [3.9, 0.7, 1.5, 2.3, 0.6]  # fracs 0.9, 0.7, 0.5, 0.3, 0.6; sum 9
    r = monte_carlo_report(x, trials=100, seed=0)
    np.testing.assert_allclose(r.exact_mean, x)
    assert sorted_bias_pattern(x) == ["-", "-", "-", "+", "+"]
    assert r.bias_signs == ["-", "-", "+", "+", "-"]
