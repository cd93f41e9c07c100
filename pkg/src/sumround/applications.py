"""Decimal rounding with a precision bound on the total, and largest
remainder apportionment.

Decimal input given as strings, ``Decimal`` or ``Fraction`` objects is
handled in exact rational arithmetic end to end; floats go through the
snapped floating-point path.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Integral
from typing import Sequence

import numpy as np

from .core import (
    DEFAULT_SNAP_TOLERANCE,
    ArrayLike,
    IntegerAllocation,
    _frac_groups,
    _order_from_keys,
    _snap_values,
    _split,
    round_to_target,
)
from .errors import (
    EmptyInput,
    InvalidExponent,
    NegativeEntry,
    NonPositiveVotes,
    PrecisionOverflow,
    RoundingError,
)

MAX_PRECISION = 12
QUOTA_SNAP_TOLERANCE = 1e-9

_DECIMAL = re.compile(r"(\d*)(?:\.(\d*))?")
_INT_LIMIT = 2**53


def parse_decimal(text: str) -> Fraction:
    """Parse ``digits[.digits]`` exactly. Signs and exponents are rejected."""
    s = text.strip()
    match = _DECIMAL.fullmatch(s)
    if match is None or not any(ch.isdigit() for ch in s):
        if s.startswith("-"):
            raise NegativeEntry(f"negative value {text!r}")
        raise RoundingError(f"not a plain decimal: {text!r}")
    whole, frac = match.group(1), match.group(2) or ""
    return Fraction(int(whole + frac or "0"), 10 ** len(frac))


def _to_fraction(v) -> Fraction:
    if isinstance(v, str):
        return parse_decimal(v)
    if isinstance(v, (Decimal, Fraction, Integral)):
        f = Fraction(v)
        if f < 0:
            raise NegativeEntry(f"negative value {v!r}")
        return f
    raise TypeError(f"unsupported exact value {v!r}")


def _is_exact(values: Sequence) -> bool:
    return all(
        isinstance(v, (str, Decimal, Fraction, Integral)) and not isinstance(v, bool)
        for v in values
    )


@dataclass(frozen=True, eq=False)
class DecimalVector:
    """Values on the ``10^-k`` grid, held as exact integers ``value * 10^k``."""

    scaled: np.ndarray
    precision: int

    def __len__(self) -> int:
        return len(self.scaled)

    @property
    def values(self) -> list[Fraction]:
        return [Fraction(int(v), 10**self.precision) for v in self.scaled]

    @property
    def total(self) -> Fraction:
        return Fraction(int(self.scaled.sum()), 10**self.precision)

    def to_strings(self) -> list[str]:
        return [_format_scaled(int(v), self.precision) for v in self.scaled]

    def __array__(self, dtype=None, copy=None):
        return (self.scaled / 10.0**self.precision).astype(dtype or np.float64)


def _format_scaled(v: int, k: int) -> str:
    if k == 0:
        return str(v)
    whole, rest = divmod(v, 10**k)
    return f"{whole}.{rest:0{k}d}"


def _check_args(k: int, q: float) -> None:
    if not isinstance(k, Integral) or k < 0:
        raise RoundingError(f"precision must be a non-negative integer, got {k!r}")
    if k > MAX_PRECISION:
        raise PrecisionOverflow(f"precision {k} exceeds the supported maximum {MAX_PRECISION}")
    if not (math.isfinite(q) and q >= 1):
        raise InvalidExponent(f"q must be a finite real >= 1, got {q!r}")


def _choose(options, total):
    """Pick the cheaper target; equal costs go to the target nearer the
    scaled sum, then to the lower one."""
    return min(options, key=lambda o: (o[0], abs(o[1] - total), o[1]))


def _exact_path(values: Sequence, k: int, q: float) -> DecimalVector:
    scale = 10**k
    scaled = [_to_fraction(v) * scale for v in values]
    floors = [math.floor(s) for s in scaled]
    if max(floors) >= _INT_LIMIT:
        raise PrecisionOverflow("scaled values exceed the exact integer range")
    fracs = [s - f for s, f in zip(scaled, floors)]
    total = sum(scaled, Fraction(0))

    distinct = sorted(set(fracs), reverse=True)
    rank_of = {f: r for r, f in enumerate(distinct)}
    rank = np.array([rank_of[f] for f in fracs], dtype=np.int64)
    above = np.array([f > Fraction(1, 2) for f in fracs])
    floors_arr = np.array(floors, dtype=np.int64)
    order = _order_from_keys(rank, above, floors_arr)

    exact_power = float(q).is_integer()
    options = []
    for target in sorted({math.floor(total), math.ceil(total)}):
        up = np.zeros(len(values), dtype=bool)
        up[order[: target - sum(floors)]] = True
        if exact_power:
            p = int(q)
            cost = sum((abs(f - u) ** p for f, u in zip(fracs, up.tolist())), Fraction(0))
        else:
            cost = math.fsum(abs(float(f) - u) ** q for f, u in zip(fracs, up.tolist()))
        options.append((cost, target, floors_arr + up))
    _, _, chosen = _choose(options, total)
    return DecimalVector(chosen, k)


def _float_path(values: ArrayLike, k: int, q: float, snap_tolerance: float) -> DecimalVector:
    raw = np.asarray(values, dtype=np.float64)
    scaled = _snap_values(raw * 10.0**k, snap_tolerance)
    if scaled.max() >= _INT_LIMIT:
        raise PrecisionOverflow("scaled values exceed the exact integer range")
    dec = _split(scaled)
    total = math.fsum(scaled.tolist())
    nearest = round(total)
    if abs(total - nearest) <= len(scaled) * snap_tolerance:
        targets = [nearest]
    else:
        targets = [math.floor(total), math.ceil(total)]
    rank, above, by_rank = _frac_groups(dec.fracs, dec.values)
    order = _order_from_keys(rank, above, dec.floors, by_rank)
    base = int(dec.floors.sum())
    options = []
    for target in targets:
        up = np.zeros(len(scaled), dtype=bool)
        up[order[: target - base]] = True
        cost = float(np.sum(np.abs(dec.fracs - up) ** q))
        options.append((cost, target, dec.floors + up))
    # float costs within 1e-12 relative count as equal
    best = min(o[0] for o in options)
    options = [(0 if o[0] <= best * (1 + 1e-12) else 1,) + o[1:] for o in options]
    _, _, chosen = _choose(options, total)
    return DecimalVector(chosen, k)


def decimal_round(
    x: Sequence,
    k: int = 2,
    q: float = 2.0,
    snap_tolerance: float = DEFAULT_SNAP_TOLERANCE,
) -> DecimalVector:
    """Round each value to ``k`` decimals so the rounded total is within
    ``10^-k`` of the true total, minimizing the L^q error.

    >>> decimal_round(["0.333", "0.333", "0.334"], k=1).to_strings()
    ['0.3', '0.3', '0.4']
    """
    _check_args(k, q)
    values = list(x) if not isinstance(x, np.ndarray) else x
    if len(values) == 0:
        raise EmptyInput("cannot round an empty vector")
    if not isinstance(values, np.ndarray) and _is_exact(values):
        return _exact_path(values, k, q)
    return _float_path(values, k, q, snap_tolerance)


@dataclass(frozen=True, eq=False)
class ApportionmentProblem:
    votes: np.ndarray
    seats: int

    def __post_init__(self):
        votes = np.asarray(self.votes, dtype=np.float64)
        if votes.size == 0:
            raise EmptyInput("no parties")
        if not np.all(np.isfinite(votes)) or np.any(votes <= 0):
            raise NonPositiveVotes("every party needs a positive, finite vote count")
        if int(self.seats) != self.seats or self.seats < 1:
            raise RoundingError(f"seats must be a positive integer, got {self.seats!r}")
        object.__setattr__(self, "votes", votes)
        object.__setattr__(self, "seats", int(self.seats))

    def quotas(self) -> np.ndarray:
        return self.votes * self.seats / self.votes.sum()


def apportion(problem: ApportionmentProblem | ArrayLike, seats: int | None = None) -> IntegerAllocation:
    """Largest remainder (Hare-Niemeyer) apportionment.

    Every party gets the floor or the ceiling of its quota; leftover seats
    go to the largest remainders.

    >>> apportion([47000, 16000, 15800, 12000, 6100, 3100], 10).tolist()
    [5, 2, 1, 1, 1, 0]
    """
    if not isinstance(problem, ApportionmentProblem):
        if seats is None:
            raise RoundingError("seats is required when passing raw votes")
        problem = ApportionmentProblem(problem, seats)
    return round_to_target(problem.quotas(), problem.seats, QUOTA_SNAP_TOLERANCE)
