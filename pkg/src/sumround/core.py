"""Sum-preserving optimal rounding of non-negative real vectors.

Given ``x`` with an integer sum ``M``, :func:`oric_round` returns the integer
vector ``m`` with ``sum(m) == M`` that minimizes ``||x - m||_q`` for every
``q >= 1`` at once. Every component is rounded either down or up; exactly
``I = M - sum(floor(x))`` components are rounded up, chosen by decreasing
fractional part.

Ties between equal fractional parts are resolved so that the relative error
``sum |x_i - m_i|^q / x_i^q`` is minimal among all optimal roundings. For a
tied fractional part ``f``, moving the up-rounding from component ``j`` to
``i`` changes the relative error by ``((1-f)^q - f^q) * (x_i^-q - x_j^-q)``,
so larger integer parts go first when ``f <= 1/2`` and smaller integer parts
go first when ``f > 1/2``. Remaining ties fall back to the lower index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import (
    EmptyInput,
    InfeasibleTarget,
    InvalidExponent,
    LengthMismatch,
    NegativeEntry,
    RoundingError,
    SumNotInteger,
    ZeroComponent,
)

DEFAULT_SNAP_TOLERANCE = 1e-9

# Fractional parts closer than this many ulps of the underlying value are the
# same real number up to representation error (0.4 vs 2.4 - 2, for instance).
_TIE_ULPS = 4

ArrayLike = Union[Sequence[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class RoundingProblem:
    """Snapped non-negative values together with their integer sum."""

    values: np.ndarray
    target: int
    snap_tolerance: float = DEFAULT_SNAP_TOLERANCE

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class ComponentDecomposition:
    """Integer and fractional parts of a snapped vector, in input order."""

    floors: np.ndarray
    fracs: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.floors)

    @property
    def index(self) -> np.ndarray:
        return np.arange(len(self.floors))

    @property
    def entries(self) -> list[tuple[int, int, float]]:
        """``(index, floor part, fractional part)`` records."""
        return [
            (i, int(f), float(r))
            for i, (f, r) in enumerate(zip(self.floors, self.fracs))
        ]

    @property
    def noninteger_count(self) -> int:
        return int(np.count_nonzero(self.fracs))

    @property
    def ceilings(self) -> np.ndarray:
        return self.floors + (self.fracs > 0)


class IntegerAllocation:
    """Non-negative integer vector whose entries sum exactly to ``target``."""

    __slots__ = ("values", "target")
    __hash__ = None  # mutable array inside

    def __init__(self, values: ArrayLike, target: int | None = None):
        arr = np.asarray(values, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("allocation must be one-dimensional")
        total = int(arr.sum())
        if target is None:
            target = total
        elif total != target:
            raise ValueError(f"allocation sums to {total}, expected {target}")
        arr.setflags(write=False)
        self.values = arr
        self.target = int(target)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return (int(v) for v in self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other) -> bool:
        other_values = other.values if isinstance(other, IntegerAllocation) else other
        try:
            return bool(np.array_equal(self.values, np.asarray(other_values)))
        except (TypeError, ValueError):
            return NotImplemented

    def __repr__(self) -> str:
        return f"IntegerAllocation({self.tolist()}, target={self.target})"

    def tolist(self) -> list[int]:
        return [int(v) for v in self.values]


@dataclass(frozen=True)
class ErrorReport:
    q: float
    lq_error: float
    relative_sum: float | None
    relative_product: float | None


def _snap_values(raw: ArrayLike, snap_tolerance: float) -> np.ndarray:
    if snap_tolerance < 0 or not math.isfinite(snap_tolerance):
        raise RoundingError(f"snap tolerance must be finite and >= 0, got {snap_tolerance}")
    values = np.array(raw, dtype=np.float64)
    if values.ndim != 1:
        values = values.ravel()
    if values.size == 0:
        raise EmptyInput("cannot round an empty vector")
    if not np.all(np.isfinite(values)):
        raise RoundingError("values must be finite")
    if np.any(values < -snap_tolerance):
        i = int(np.argmin(values))
        raise NegativeEntry(f"entry {i} is negative: {values[i]!r}")
    nearest = np.rint(values)
    close = np.abs(values - nearest) <= snap_tolerance
    values[close] = nearest[close]
    # also clears -0.0 left by snapping tiny negatives
    values = np.maximum(values, 0.0)
    values.setflags(write=False)
    return values


def snap_and_validate(
    raw: ArrayLike, snap_tolerance: float = DEFAULT_SNAP_TOLERANCE
) -> RoundingProblem:
    """Snap near-integers and derive the integer target from the sum.

    Raises ``EmptyInput``, ``NegativeEntry`` or ``SumNotInteger``.
    """
    values = _snap_values(raw, snap_tolerance)
    total = float(np.sum(values))
    target = int(round(total))
    if abs(total - target) > len(values) * snap_tolerance:
        raise SumNotInteger(
            f"sum {total!r} is not within {len(values) * snap_tolerance:g} of an integer"
        )
    return RoundingProblem(values=values, target=target, snap_tolerance=snap_tolerance)


def _split(values: np.ndarray) -> ComponentDecomposition:
    floors_f = np.floor(values)
    fracs = values - floors_f
    fracs.setflags(write=False)
    floors = floors_f.astype(np.int64)
    floors.setflags(write=False)
    return ComponentDecomposition(floors=floors, fracs=fracs, values=values)


def decompose(problem: RoundingProblem) -> ComponentDecomposition:
    return _split(problem.values)


def decompose_values(
    values: ArrayLike, snap_tolerance: float = DEFAULT_SNAP_TOLERANCE
) -> ComponentDecomposition:
    """Snap and split values whose sum need not be an integer."""
    return _split(_snap_values(values, snap_tolerance))


def shortfall(decomposition: ComponentDecomposition, target: int) -> int:
    """Number of components that must be rounded up to reach ``target``."""
    short = int(target) - int(decomposition.floors.sum())
    if short < 0:
        raise InfeasibleTarget(
            f"target {target} is below the sum of floors {int(decomposition.floors.sum())}"
        )
    if short > decomposition.noninteger_count:
        raise InfeasibleTarget(
            f"target {target} is above the sum of ceilings "
            f"{int(decomposition.ceilings.sum())}"
        )
    return short


def _frac_groups(
    fracs: np.ndarray, values: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Group fractional parts that are equal up to representation error.

    Returns the dense rank of each component's group (0 = largest fractional
    part), whether that group sits strictly above one half, and a
    permutation listing components by rank.
    """
    n = len(fracs)
    by_frac = np.argsort(-fracs)
    ordered = fracs[by_frac]
    scale = np.maximum(values[by_frac], 1.0)
    tol = _TIE_ULPS * np.spacing(np.maximum(scale[1:], scale[:-1]))
    breaks = (ordered[:-1] - ordered[1:]) > tol
    rank_sorted = np.zeros(n, dtype=np.int64)
    np.cumsum(breaks, out=rank_sorted[1:])
    rank = np.empty(n, dtype=np.int64)
    rank[by_frac] = rank_sorted

    starts = np.flatnonzero(np.concatenate(([True], breaks)))
    leader = ordered[starts]
    leader_tol = _TIE_ULPS * np.spacing(scale[starts])
    group_above = leader - 0.5 > leader_tol
    return rank, group_above[rank], by_frac


def _order_from_keys(
    rank: np.ndarray,
    above_half: np.ndarray,
    floors: np.ndarray,
    by_rank: np.ndarray | None = None,
) -> np.ndarray:
    """Sort by (rank, signed integer part, index).

    ``by_rank`` is any permutation that sorts ``rank``; only the members of
    groups with more than one component get re-sorted.
    """
    if by_rank is None:
        by_rank = np.argsort(rank)
    order = by_rank.copy()
    r = rank[order]
    same = r[1:] == r[:-1]
    shared = np.zeros(len(order), dtype=bool)
    shared[1:] |= same
    shared[:-1] |= same
    slots = np.flatnonzero(shared)
    if slots.size:
        members = order[slots]
        floor_key = np.where(above_half[members], floors[members], -floors[members])
        # groups occupy contiguous slots, so sorting by rank first keeps them in place
        order[slots] = members[np.lexsort((members, floor_key, rank[members]))]
    return order


def oric_order(decomposition: ComponentDecomposition) -> np.ndarray:
    """Permutation listing components in the order they get rounded up.

    Primary key is the fractional part, descending. Within a group of equal
    fractional parts, integer parts are taken in decreasing order (ascending
    when the common fractional part exceeds one half), then by index.
    """
    rank, above, by_rank = _frac_groups(decomposition.fracs, decomposition.values)
    return _order_from_keys(rank, above, decomposition.floors, by_rank)


# Selection fast path: the boundary window is this wide around the cut value.
_SELECT_MARGIN = 1e-9
_SELECT_MIN_SIZE = 2048


def _selected_up(dec: ComponentDecomposition, short: int) -> np.ndarray | None:
    """Indices of the first ``short`` entries of :func:`oric_order` without
    sorting everything, or ``None`` when the shortcut cannot be proven safe."""
    n = len(dec)
    fracs = dec.fracs
    cut = np.partition(fracs, n - short)[n - short]
    max_tol = _TIE_ULPS * np.spacing(max(float(dec.values.max()), 1.0))
    if max_tol * 8 > _SELECT_MARGIN:
        return None
    sure = fracs > cut + _SELECT_MARGIN
    window = np.abs(fracs - cut) <= _SELECT_MARGIN
    below = ~(sure | window)
    # no tie chain may cross the window edges
    if sure.any() and fracs[sure].min() - fracs[window].max() <= max_tol:
        return None
    if below.any() and fracs[window].min() - fracs[below].max() <= max_tol:
        return None
    cand = np.flatnonzero(window)
    sub = ComponentDecomposition(
        floors=dec.floors[cand], fracs=fracs[cand], values=dec.values[cand]
    )
    n_sure = int(np.count_nonzero(sure))
    return np.concatenate((np.flatnonzero(sure), cand[oric_order(sub)[: short - n_sure]]))


def _allocate(decomposition: ComponentDecomposition, target: int) -> IntegerAllocation:
    short = shortfall(decomposition, target)
    result = decomposition.floors.copy()
    if short:
        up = None
        if len(decomposition) >= _SELECT_MIN_SIZE:
            up = _selected_up(decomposition, short)
        if up is None:
            up = oric_order(decomposition)[:short]
        result[up] += 1
    return IntegerAllocation(result, target)


def _as_problem(problem: RoundingProblem | ArrayLike) -> RoundingProblem:
    if isinstance(problem, RoundingProblem):
        return problem
    return snap_and_validate(problem)


def oric_round(problem: RoundingProblem | ArrayLike) -> IntegerAllocation:
    """Optimal sum-preserving rounding.

    Accepts a :class:`RoundingProblem` or a raw sequence (snapped with the
    default tolerance).

    >>> oric_round([2.25, 3.4, 4.35]).tolist()
    [2, 4, 4]
    """
    problem = _as_problem(problem)
    return _allocate(decompose(problem), problem.target)


def oric_round_ceiling_init(problem: RoundingProblem | ArrayLike) -> IntegerAllocation:
    """Mirror of :func:`oric_round`: start from the ceilings and round down
    the components with the smallest fractional parts."""
    problem = _as_problem(problem)
    dec = decompose(problem)
    short = shortfall(dec, problem.target)
    result = dec.ceilings.astype(np.int64)
    n_down = dec.noninteger_count - short
    if n_down:
        rank, above, _ = _frac_groups(dec.fracs, dec.values)
        floor_key = np.where(above, -dec.floors, dec.floors)
        idx = np.arange(len(dec))
        is_integer = dec.fracs == 0
        order = np.lexsort((-idx, floor_key, -rank, is_integer))
        result[order[:n_down]] -= 1
    return IntegerAllocation(result, problem.target)


def round_to_target(
    values: ArrayLike, target: int, snap_tolerance: float = DEFAULT_SNAP_TOLERANCE
) -> IntegerAllocation:
    """Round within the floor/ceil box to an arbitrary feasible ``target``.

    Unlike :func:`oric_round` the sum of ``values`` need not be an integer.
    """
    if int(target) != target:
        raise InfeasibleTarget(f"target must be an integer, got {target!r}")
    return _allocate(decompose_values(values, snap_tolerance), int(target))


def _check_pair(x: ArrayLike, m, q: float) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(x, dtype=np.float64)
    ma = np.asarray(m, dtype=np.float64)
    if xa.shape != ma.shape:
        raise LengthMismatch(f"lengths differ: {xa.shape} vs {ma.shape}")
    if not (math.isfinite(q) and q >= 1):
        raise InvalidExponent(f"q must be a finite real >= 1, got {q!r}")
    return xa, ma


def lq_error(x: ArrayLike, m, q: float = 2.0) -> float:
    """``(sum |x_i - m_i|^q)^(1/q)``."""
    xa, ma = _check_pair(x, m, q)
    return float(np.sum(np.abs(xa - ma) ** q) ** (1.0 / q))


def _relative_terms(x: ArrayLike, m, q: float) -> np.ndarray:
    xa, ma = _check_pair(x, m, q)
    if np.any(xa <= 0):
        raise ZeroComponent("relative error is undefined when some x_i == 0")
    return (np.abs(xa - ma) / xa) ** q


def relative_error_sum(x: ArrayLike, m, q: float = 1.0) -> float:
    return float(np.sum(_relative_terms(x, m, q)))


def relative_error_product(x: ArrayLike, m, q: float = 1.0) -> float:
    return float(np.prod(_relative_terms(x, m, q)))


def error_report(x: ArrayLike, m, q: float = 2.0) -> ErrorReport:
    """All error functionals for one allocation; relative ones are ``None``
    when some ``x_i`` is zero."""
    lq = lq_error(x, m, q)
    try:
        rel_sum = relative_error_sum(x, m, q)
        rel_prod = relative_error_product(x, m, q)
    except ZeroComponent:
        rel_sum = rel_prod = None
    return ErrorReport(q=float(q), lq_error=lq, relative_sum=rel_sum, relative_product=rel_prod)
