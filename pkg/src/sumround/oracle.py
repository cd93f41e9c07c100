"""Exhaustive search over the floor/ceil box.

Ground truth for small instances. Nothing here uses the sorting-based
algorithms; every feasible point of the box is generated and scored.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import numpy as np

from .core import (
    DEFAULT_SNAP_TOLERANCE,
    ArrayLike,
    IntegerAllocation,
    decompose_values,
    snap_and_validate,
)
from .errors import InfeasibleTarget, InvalidExponent, TooManyComponents, ZeroComponent

MAX_COMPONENTS = 20
MAX_SEPARABLE_COMPONENTS = 12
REL_TOL = 1e-12


@dataclass(frozen=True)
class OracleResult:
    min_value: float
    argmins: list[IntegerAllocation]
    evaluated: int


def _box(x: ArrayLike, target: int | None, snap_tolerance: float, limit: int):
    if target is None:
        target = snap_and_validate(x, snap_tolerance).target
    dec = decompose_values(x, snap_tolerance)
    free = np.flatnonzero(dec.fracs)
    if len(free) > limit:
        raise TooManyComponents(f"{len(free)} non-integer components, limit is {limit}")
    need = int(target) - int(dec.floors.sum())
    if not 0 <= need <= len(free):
        raise InfeasibleTarget(f"no point of the box sums to {target}")
    return dec, free, need, int(target)


def _candidates(floors: np.ndarray, free: np.ndarray, need: int) -> np.ndarray:
    combos = list(combinations(range(len(free)), need))
    picks = np.array(combos, dtype=np.intp).reshape(len(combos), need)
    cands = np.tile(floors, (len(picks), 1))
    rows = np.arange(len(picks))[:, None]
    cands[rows, free[picks]] += 1
    return cands


def enumerate_feasible(
    x: ArrayLike,
    target: int | None = None,
    snap_tolerance: float = DEFAULT_SNAP_TOLERANCE,
) -> Iterator[IntegerAllocation]:
    """Yield every box point summing to ``target``: C(k, I) of them."""
    dec, free, need, target = _box(x, target, snap_tolerance, MAX_COMPONENTS)
    for ups in combinations(free.tolist(), need):
        m = dec.floors.copy()
        m[list(ups)] += 1
        yield IntegerAllocation(m, target)


def _minimizers(scores: np.ndarray) -> tuple[float, np.ndarray]:
    best = float(scores.min())
    return best, np.flatnonzero(scores <= best + REL_TOL * abs(best))


def brute_force_optima(
    x: ArrayLike,
    target: int | None = None,
    q: float = 2.0,
    snap_tolerance: float = DEFAULT_SNAP_TOLERANCE,
) -> OracleResult:
    """Minimum L^q error over the feasible box and all its minimizers
    (ties within a relative 1e-12)."""
    if not (np.isfinite(q) and q >= 1):
        raise InvalidExponent(f"q must be a finite real >= 1, got {q!r}")
    dec, free, need, target = _box(x, target, snap_tolerance, MAX_COMPONENTS)
    cands = _candidates(dec.floors, free, need)
    scores = (np.abs(dec.values - cands) ** q).sum(axis=1) ** (1.0 / q)
    best, hits = _minimizers(scores)
    return OracleResult(
        min_value=best,
        argmins=[IntegerAllocation(cands[i], target) for i in hits],
        evaluated=len(cands),
    )


def _tie_key(m: np.ndarray, floors: np.ndarray) -> list[tuple[int, int]]:
    ups = np.flatnonzero(m > floors)
    return sorted((-int(floors[i]), int(i)) for i in ups)


def brute_force_best_relative(
    x: ArrayLike,
    target: int | None = None,
    q: float = 2.0,
    snap_tolerance: float = DEFAULT_SNAP_TOLERANCE,
) -> IntegerAllocation:
    """Among the L^q minimizers, the one with smallest relative error sum.

    Remaining ties prefer rounding up larger integer parts, then lower
    indices.
    """
    dec = decompose_values(x, snap_tolerance)
    if np.any(dec.values <= 0):
        raise ZeroComponent("relative error is undefined when some x_i == 0")
    optima = brute_force_optima(x, target, q, snap_tolerance)
    cands = np.array([m.values for m in optima.argmins])
    rel = ((np.abs(dec.values - cands) / dec.values) ** q).sum(axis=1)
    _, hits = _minimizers(rel)
    best = min(hits, key=lambda i: _tie_key(cands[i], dec.floors))
    return optima.argmins[best]


def brute_force_separable(
    objective,
    relaxed: ArrayLike,
    target: int | None = None,
    snap_tolerance: float = DEFAULT_SNAP_TOLERANCE,
) -> OracleResult:
    """Exhaustive minimum of ``objective(m)`` over the box around ``relaxed``."""
    dec, free, need, target = _box(relaxed, target, snap_tolerance, MAX_SEPARABLE_COMPONENTS)
    cands = _candidates(dec.floors, free, need)
    scores = np.array([objective(m) for m in cands])
    best, hits = _minimizers(scores)
    return OracleResult(
        min_value=best,
        argmins=[IntegerAllocation(cands[i], target) for i in hits],
        evaluated=len(cands),
    )
