"""Baseline rounding rules and their failure modes.

Fixed-threshold (fractional) rounding ignores the sum constraint, and
randomized rounding satisfies it only by chance. Both are implemented here
together with exact enumeration and seeded Monte Carlo estimates of how
often they hit the optimum and which way they are biased.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    ArrayLike,
    IntegerAllocation,
    RoundingProblem,
    _as_problem,
    _frac_groups,
    decompose,
    oric_order,
    oric_round,
    shortfall,
)
from .errors import InvalidThreshold, RoundingError, TooManyComponents

MAX_ENUMERATED = 20

# Trials are drawn in blocks; block b of a run seeded with s uses its own
# stream keyed by (s, b), so trial t depends only on (s, t).
TRIAL_BLOCK = 4096


@dataclass(frozen=True, eq=False)
class FractionalOutcome:
    allocation: np.ndarray
    sum_deviation: int
    below_count: int


@dataclass(frozen=True, eq=False)
class ExactDistribution:
    feasibility_probability: float
    optimality_probability: float
    conditional_non_optimality: float
    exact_mean: np.ndarray
    # P(at least one component outside the optimal up-set is rounded up)
    wrong_roundup_probability: float
    # expected number of such up-roundings
    expected_wrong_roundups: float


@dataclass(frozen=True, eq=False)
class BiasReport:
    exact_mean: np.ndarray
    optimal: IntegerAllocation
    bias_signs: list[str]
    empirical_mean: np.ndarray
    feasibility_rate: float
    optimality_rate: float
    trials: int
    seed: int


def fractional_round(x: RoundingProblem | ArrayLike, threshold: float = 0.5) -> FractionalOutcome:
    """Round down iff the fractional part is ``<= threshold``."""
    if not 0 <= threshold < 1:
        raise InvalidThreshold(f"threshold must lie in [0, 1), got {threshold!r}")
    problem = _as_problem(x)
    dec = decompose(problem)
    down = dec.fracs <= threshold
    allocation = dec.floors + ~down
    return FractionalOutcome(
        allocation=allocation,
        sum_deviation=int(allocation.sum()) - problem.target,
        below_count=int(np.count_nonzero(down)),
    )


def feasible_threshold(x: RoundingProblem | ArrayLike) -> float | None:
    """A threshold at which fractional rounding meets the sum constraint.

    Returns the ``(I+1)``-th largest fractional part (0 when every
    non-integer component must go up), or ``None`` when the ``I``-th and
    ``(I+1)``-th largest fractional parts are equal and no cut separates
    them.
    """
    problem = _as_problem(x)
    dec = decompose(problem)
    short = shortfall(dec, problem.target)
    if short == 0:
        return 0.0
    if short == len(dec):
        return 0.0
    rank, _, by_frac = _frac_groups(dec.fracs, dec.values)
    last_up, first_down = by_frac[short - 1], by_frac[short]
    if rank[last_up] == rank[first_down]:
        return None
    return float(dec.fracs[first_down])


def randomized_round(x: RoundingProblem | ArrayLike, generator=None) -> np.ndarray:
    """Round each component up independently with probability equal to its
    fractional part. The sum is not preserved in general.

    ``generator`` is a ``numpy.random.Generator`` or anything
    ``numpy.random.default_rng`` accepts (an integer seed, say).
    """
    dec = decompose(_as_problem(x))
    rng = np.random.default_rng(generator)
    return dec.floors + (rng.random(len(dec)) < dec.fracs)


def _optimal_ups(dec, optimal) -> np.ndarray:
    opt = np.asarray(optimal, dtype=np.int64)
    if opt.shape != dec.floors.shape:
        raise RoundingError("optimal allocation has the wrong length")
    ups = opt - dec.floors
    if np.any((ups < 0) | (ups > 1)) or np.any(ups[dec.fracs == 0]):
        raise RoundingError("optimal allocation lies outside the floor/ceil box")
    return ups.astype(bool)


def exact_distribution(
    x: RoundingProblem | ArrayLike, optimal: ArrayLike | None = None
) -> ExactDistribution:
    """Enumerate all ``2^k`` outcomes of randomized rounding.

    ``optimal`` defaults to :func:`oric_round` of ``x``.
    """
    problem = _as_problem(x)
    dec = decompose(problem)
    free = np.flatnonzero(dec.fracs)
    if len(free) > MAX_ENUMERATED:
        raise TooManyComponents(
            f"{len(free)} non-integer components, limit is {MAX_ENUMERATED}"
        )
    short = shortfall(dec, problem.target)
    if optimal is None:
        optimal = oric_round(problem)
    opt_ups = _optimal_ups(dec, optimal)

    # outcome index: bit j set <=> free[j] rounded up
    probs = np.ones(1)
    ups = np.zeros(1, dtype=np.int64)
    wrong = np.zeros(1, dtype=np.int64)
    opt_index = 0
    for j, i in enumerate(free):
        p = dec.fracs[i]
        probs = np.concatenate((probs * (1.0 - p), probs * p))
        ups = np.concatenate((ups, ups + 1))
        if opt_ups[i]:
            wrong = np.concatenate((wrong, wrong))
            opt_index |= 1 << j
        else:
            wrong = np.concatenate((wrong, wrong + 1))

    feasible = float(probs[ups == short].sum())
    optimal_p = float(probs[opt_index])
    return ExactDistribution(
        feasibility_probability=feasible,
        optimality_probability=optimal_p,
        conditional_non_optimality=1.0 - optimal_p / feasible,
        exact_mean=dec.floors + dec.fracs,
        wrong_roundup_probability=float(probs[wrong > 0].sum()),
        expected_wrong_roundups=float((probs * wrong).sum()),
    )


def _block_stream(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, block])
    return np.random.Generator(np.random.Philox(ss))


def _run_block(seed, block, rows, fracs, short, opt_ups):
    draws = _block_stream(seed, block).random((rows, len(fracs)))
    ups = draws < fracs
    n_up = ups.sum(axis=1)
    return (
        ups.sum(axis=0),
        int(np.count_nonzero(n_up == short)),
        int(np.count_nonzero((ups == opt_ups).all(axis=1))),
    )


def monte_carlo_report(
    x: RoundingProblem | ArrayLike,
    trials: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> BiasReport:
    """Simulate randomized rounding and compare it with the optimum.

    Results depend only on ``(x, trials, seed)``; ``workers`` changes the
    wall time, never the numbers.
    """
    if trials < 1:
        raise RoundingError(f"trials must be >= 1, got {trials}")
    problem = _as_problem(x)
    dec = decompose(problem)
    short = shortfall(dec, problem.target)
    optimal = oric_round(problem)
    opt_ups = _optimal_ups(dec, optimal)

    blocks = [
        (b, min(TRIAL_BLOCK, trials - b * TRIAL_BLOCK))
        for b in range(-(-trials // TRIAL_BLOCK))
    ]
    job = lambda blk: _run_block(seed, blk[0], blk[1], dec.fracs, short, opt_ups)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, blocks))
    else:
        parts = [job(blk) for blk in blocks]

    up_counts = sum(p[0] for p in parts)
    feasible = sum(p[1] for p in parts)
    hits = sum(p[2] for p in parts)

    exact_mean = dec.floors + dec.fracs
    signs = np.sign(exact_mean - optimal.values)
    return BiasReport(
        exact_mean=exact_mean,
        optimal=optimal,
        bias_signs=[{-1.0: "-", 0.0: "0", 1.0: "+"}[s] for s in signs.tolist()],
        empirical_mean=dec.floors + up_counts / trials,
        feasibility_rate=feasible / trials,
        optimality_rate=hits / trials,
        trials=int(trials),
        seed=int(seed),
    )


def sorted_bias_pattern(x: RoundingProblem | ArrayLike) -> list[str]:
    """Bias signs listed in rounding order (largest fractional part first)."""
    problem = _as_problem(x)
    dec = decompose(problem)
    optimal = oric_round(problem)
    signs = np.sign(dec.values - optimal.values)[oric_order(dec)]
    return [{-1.0: "-", 0.0: "0", 1.0: "+"}[s] for s in signs.tolist()]
