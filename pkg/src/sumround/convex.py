"""Rounding for separable strictly convex objectives.

For ``f(m) = sum_i phi_i(m_i)`` with every ``phi_i`` strictly convex, any
integer minimizer under ``sum(m) == M`` lies in the floor/ceil box around
the continuous minimizer ``x*``. Inside the box the objective is
``const + sum_{i up} delta_i`` with ``delta_i = phi_i(ceil x*_i) -
phi_i(floor x*_i)``, so picking the ``I`` smallest marginal costs is optimal.

Solving the continuous relaxation itself is left to the caller.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import (
    DEFAULT_SNAP_TOLERANCE,
    ArrayLike,
    ComponentDecomposition,
    IntegerAllocation,
    decompose,
    shortfall,
    snap_and_validate,
)
from .errors import EvaluationFailure, LengthMismatch, NotConvex


class SeparableObjective:
    """Sum of one-dimensional functions, one per component.

    The components are trusted to be strictly convex; pass
    ``check_convexity=True`` to the solver for a cheap spot-check.
    """

    def __init__(self, components: Sequence[Callable[[float], float]]):
        self.components = list(components)

    @classmethod
    def weighted_power(
        cls, center: ArrayLike, weights: ArrayLike | None = None, q: float = 2.0
    ) -> "SeparableObjective":
        """``phi_i(u) = w_i * |u - c_i|^q``."""
        center = [float(c) for c in center]
        if weights is None:
            weights = [1.0] * len(center)
        weights = [float(w) for w in weights]
        if len(weights) != len(center):
            raise LengthMismatch("weights and center differ in length")
        return cls(
            [lambda u, c=c, w=w: w * abs(u - c) ** q for c, w in zip(center, weights)]
        )

    def __len__(self) -> int:
        return len(self.components)

    def component(self, i: int, u: float) -> float:
        try:
            value = float(self.components[i](u))
        except Exception as exc:
            raise EvaluationFailure(f"component {i} failed at {u!r}: {exc}") from exc
        if not math.isfinite(value):
            raise EvaluationFailure(f"component {i} returned {value!r} at {u!r}")
        return value

    def __call__(self, m: ArrayLike) -> float:
        if len(m) != len(self.components):
            raise LengthMismatch(f"expected {len(self.components)} values, got {len(m)}")
        return math.fsum(self.component(i, float(u)) for i, u in enumerate(m))


@dataclass(frozen=True, eq=False)
class RelaxedSolution:
    """Continuous minimizer ``x*`` of the relaxed problem and its sum."""

    values: np.ndarray
    target: int
    snap_tolerance: float = DEFAULT_SNAP_TOLERANCE

    @classmethod
    def from_values(
        cls, values: ArrayLike, snap_tolerance: float = DEFAULT_SNAP_TOLERANCE
    ) -> "RelaxedSolution":
        problem = snap_and_validate(values, snap_tolerance)
        return cls(problem.values, problem.target, snap_tolerance)


def _as_relaxed(relaxed) -> RelaxedSolution:
    if isinstance(relaxed, RelaxedSolution):
        return relaxed
    return RelaxedSolution.from_values(relaxed)


def _spot_check(objective: SeparableObjective, i: int, lo: int) -> None:
    a = objective.component(i, lo)
    b = objective.component(i, lo + 1)
    mid = objective.component(i, lo + 0.5)
    if not mid < 0.5 * (a + b):
        raise NotConvex(f"component {i} is not strictly convex on [{lo}, {lo + 1}]")


def _free_and_costs(
    objective: SeparableObjective,
    relaxed: RelaxedSolution,
    check_convexity: bool,
) -> tuple[ComponentDecomposition, np.ndarray, np.ndarray]:
    if len(objective) != len(relaxed.values):
        raise LengthMismatch(
            f"objective has {len(objective)} components, solution has {len(relaxed.values)}"
        )
    dec = decompose(relaxed)  # duck-types as a RoundingProblem
    free = np.flatnonzero(dec.fracs)
    costs = np.empty(len(free))
    for j, i in enumerate(free):
        lo = int(dec.floors[i])
        if check_convexity:
            _spot_check(objective, i, lo)
        costs[j] = objective.component(i, lo + 1) - objective.component(i, lo)
    return dec, free, costs


def marginal_costs(
    objective: SeparableObjective, relaxed, check_convexity: bool = False
) -> np.ndarray:
    """Cost of rounding up instead of down, for each non-integer component
    in index order."""
    _, _, costs = _free_and_costs(objective, _as_relaxed(relaxed), check_convexity)
    return costs


def round_separable(
    objective: SeparableObjective, relaxed, check_convexity: bool = False
) -> IntegerAllocation:
    """Integer minimizer of a separable convex objective under the sum
    constraint, given the continuous minimizer ``relaxed``."""
    relaxed = _as_relaxed(relaxed)
    dec, free, costs = _free_and_costs(objective, relaxed, check_convexity)
    short = shortfall(dec, relaxed.target)
    result = dec.floors.copy()
    order = np.lexsort((free, costs))
    result[free[order[:short]]] += 1
    return IntegerAllocation(result, relaxed.target)
