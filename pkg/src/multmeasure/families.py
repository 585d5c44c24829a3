"""Countable disjoint families and log-space Cantor sets with known measures.

Cantor objects live in log coordinates: a stage of the middle-thirds
construction on ``[0, L]`` is a :class:`RealIntervalSet` with rational
bounds, standing for its exponential image inside ``[1, e**L]``. Their
multiplicative measures are therefore exact :class:`ExactExpLog` values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, Union

from .errors import DomainError, ParameterOrder
from .intervals import (
    INF,
    IntervalSet,
    LogPoint,
    PosInterval,
    RealInterval,
    RealIntervalSet,
    exp_image_measure,
    set_length_product,
)
from .mvalue import ONE, ExactExpLog, ExactRational, MValue, mv_pow

PieceSet = Union[IntervalSet, RealIntervalSet]


class Kind(enum.Enum):
    CANTOR_GAPS = "CantorGaps"
    TELESCOPING = "Telescoping"
    GEOMETRIC = "Geometric"
    CUSTOM = "Custom"


BY_CONSTRUCTION = "ByConstruction"


@dataclass(frozen=True)
class CheckedUpTo:
    n: int


def _up(x: float) -> float:
    # Nudge a computed tail bound outward past rounding error.
    return math.nextafter(math.nextafter(x, INF), INF)


def _upper(x: Fraction) -> float:
    return 0.0 if x == 0 else _up(float(x))


def piece_measure(e: PieceSet) -> MValue:
    """Multiplicative measure of a piece; log-space pieces are measured via ``exp``."""
    if isinstance(e, RealIntervalSet):
        return exp_image_measure(e)
    return set_length_product(e)


@dataclass(frozen=True)
class GeneratorFamily:
    """A rule ``j -> E_j`` (``j >= 1``) of pairwise disjoint sets.

    ``size`` is ``None`` for an infinite family; pieces beyond a finite
    ``size`` are empty. The tail rules describe ``prod_{j>N} mu(E_j)`` in
    the same way as :class:`multmeasure.mvalue.FactorFamily`.
    """

    kind: Kind
    piece: Callable[[int], PieceSet]
    disjointness: Any = BY_CONSTRUCTION
    tail_log_bound: Callable[[int], float] | None = None
    tail_lower: Callable[[int], Any] | None = None
    size: int | None = None
    log_space: bool = False
    params: dict = field(default_factory=dict)

    def __call__(self, j: int) -> PieceSet:
        if j < 1:
            raise DomainError("family members are indexed from 1")
        if self.size is not None and j > self.size:
            return RealIntervalSet.empty() if self.log_space else IntervalSet.empty()
        return self.piece(j)

    def pieces(self, n: int) -> list[PieceSet]:
        return [self(j) for j in range(1, n + 1)]

    def measure(self, j: int) -> MValue:
        return piece_measure(self(j))

    def describe(self) -> str:
        args = ", ".join(str(v) for v in self.params.values())
        names = {
            Kind.CANTOR_GAPS: "cantor_gaps",
            Kind.TELESCOPING: "telescoping",
            Kind.GEOMETRIC: "geometric",
            Kind.CUSTOM: "custom",
        }
        return f"{names[self.kind]}({args})"


# -- Cantor construction in log space ---------------------------------------


def _check_length(L: Any) -> Fraction:
    if isinstance(L, bool) or not isinstance(L, (int, Fraction)):
        raise DomainError("L must be an exact rational")
    L = Fraction(L)
    if L <= 0:
        raise DomainError("L must be positive")
    return L


def _check_count(n: Any, name: str) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DomainError(f"{name} must be a nonnegative integer")
    return n


def _ternary_lefts(n: int) -> list[int]:
    # Left endpoints of the stage-n pieces, in units of 3**-n, ascending.
    us = [0]
    for _ in range(n):
        us = [x for u in us for x in (3 * u, 3 * u + 2)]
    return us


def cantor_stage(L: Any, n: int) -> RealIntervalSet:
    """Stage ``n`` of the middle-thirds construction on ``[0, L]`` (log space).

    ``2**n`` closed components of length ``L / 3**n`` each.
    """
    L = _check_length(L)
    n = _check_count(n, "stage")
    den = L.denominator * 3**n
    num = L.numerator
    one = Fraction(1)
    new_point = LogPoint._raw
    new_iv = RealInterval._raw
    comps = []
    for u in _ternary_lefts(n):
        lo = new_point(Fraction(num * u, den), one)
        hi = new_point(Fraction(num * (u + 1), den), one)
        comps.append(new_iv(lo, hi, True, True))
    return RealIntervalSet._trusted(comps)


def cantor_stages(L: Any, n: int) -> Iterator[RealIntervalSet]:
    """Stages ``0..n`` in order; each reuses the outer endpoints of its parent stage."""
    L = _check_length(L)
    n = _check_count(n, "stage")
    num, den = L.numerator, L.denominator
    new_point = LogPoint._raw
    new_iv = RealInterval._raw
    one = Fraction(1)
    us = [0]
    comps = [new_iv(new_point(Fraction(0), one), new_point(L, one), True, True)]
    yield RealIntervalSet._trusted(comps)
    for k in range(1, n + 1):
        den *= 3
        next_us, next_comps = [], []
        for u, c in zip(us, comps):
            a, b = 3 * u, 3 * u + 2
            inner_lo = new_point(Fraction(num * (a + 1), den), one)
            inner_hi = new_point(Fraction(num * b, den), one)
            next_us += (a, b)
            next_comps += (new_iv(c.lo, inner_lo, True, True), new_iv(inner_hi, c.hi, True, True))
        us, comps = next_us, next_comps
        yield RealIntervalSet._trusted(comps)


def gap_depth(k: int) -> int:
    """Depth of the ``k``-th gap in breadth-first order (depth ``d`` holds ``2**(d-1)`` gaps)."""
    return k.bit_length()


def cantor_gap(L: Any, k: int) -> RealIntervalSet:
    """The ``k``-th removed open gap (breadth-first, left to right), ``k >= 1``."""
    L = _check_length(L)
    if k < 1:
        raise DomainError("gaps are indexed from 1")
    d = gap_depth(k)
    p = k - (1 << (d - 1))
    # Left endpoint of component p of stage d-1, in units of 3**-(d-1).
    u = 0
    place = 1
    while p:
        if p & 1:
            u += 2 * place
        p >>= 1
        place *= 3
    den = 3**d
    one = Fraction(1)
    lo = LogPoint._raw(L * Fraction(3 * u + 1, den), one)
    hi = LogPoint._raw(L * Fraction(3 * u + 2, den), one)
    return RealIntervalSet._trusted([RealInterval._raw(lo, hi, False, False)])


def gap_log_sum(L: Any, n: int) -> Fraction:
    """Exact total log-length of the first ``n`` gaps."""
    L = _check_length(L)
    full = (n + 1).bit_length() - 1
    extra = n - (2**full - 1)
    return L * (1 - Fraction(2, 3) ** full) + extra * L / 3 ** (full + 1)


def gap_depth_product(L: Any, depth: int) -> MValue:
    """``prod`` of the gap measures over all depths ``<= depth``, grouped by depth."""
    L = _check_length(L)
    out: MValue = ONE
    for d in range(1, depth + 1):
        out = out * mv_pow(ExactExpLog(L / 3**d), 2 ** (d - 1))
    return out


def cantor_gaps(L: Any, K: int | None = None) -> GeneratorFamily:
    """The first ``K`` removed gaps as a disjoint family (all of them if ``K`` is None).

    Tails are exact: the log-lengths of all gaps sum to ``L``.
    """
    L = _check_length(L)
    if K is not None:
        K = _check_count(K, "K")
    total = L if K is None else gap_log_sum(L, K)

    def rest(n: int) -> Fraction:
        if K is not None and n >= K:
            return Fraction(0)
        return total - gap_log_sum(L, n)

    return GeneratorFamily(
        kind=Kind.CANTOR_GAPS,
        piece=lambda k: cantor_gap(L, k),
        tail_log_bound=lambda n: _upper(rest(n)),
        tail_lower=lambda n: ExactExpLog(rest(n)),
        size=K,
        log_space=True,
        params={"L": _fmt(L), "K": "inf" if K is None else str(K)},
    )


@dataclass(frozen=True)
class LogCantor:
    """The log-space Cantor set on ``[0, L]``: stage ``n``, or the limit if ``stage`` is None."""

    L: Fraction
    stage: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "L", _check_length(self.L))
        if self.stage is not None:
            _check_count(self.stage, "stage")

    def remaining(self) -> RealIntervalSet:
        if self.stage is None:
            raise DomainError("the limit set has no finite interval representation")
        return cantor_stage(self.L, self.stage)

    def lebesgue_measure(self) -> Fraction:
        # (2/3)**n * L decreases to 0, so the limit set is null.
        if self.stage is None:
            return Fraction(0)
        return Fraction(2, 3) ** self.stage * self.L

    def multiplicative_measure(self) -> MValue:
        m = self.lebesgue_measure()
        return ONE if m == 0 else ExactExpLog(m)


# -- simple disjoint families -----------------------------------------------


def telescoping_factor(j: int) -> Fraction:
    return Fraction((j + 1) ** 2, j * (j + 2))


def telescoping_family(exact_tail: bool = True) -> GeneratorFamily:
    """``E_j = [4**j, 4**j * a_j]`` with ``a_j = (j+1)**2 / (j(j+2))``.

    ``a_j <= 4/3 < 4`` keeps the members disjoint; the measures multiply to 2
    with ``prod_{j>N} a_j = (N+2)/(N+1)``.
    """

    def piece(j: int) -> IntervalSet:
        base = Fraction(4) ** j
        return IntervalSet._trusted([PosInterval._raw(base, base * telescoping_factor(j), True, True)])

    return GeneratorFamily(
        kind=Kind.TELESCOPING,
        piece=piece,
        tail_log_bound=lambda n: _up(math.log1p(1 / (n + 1))),
        tail_lower=(lambda n: ExactRational(Fraction(n + 2, n + 1))) if exact_tail else None,
        params={},
    )


def geometric_family(q: Any, r: Any) -> GeneratorFamily:
    """``E_j = [q**j, q**j * r]`` for ``1 < r < q``; every member has measure ``r``."""
    q = Fraction(q)
    r = Fraction(r)
    if r <= 1:
        raise DomainError("geometric family needs r > 1")
    if r >= q:
        raise ParameterOrder("geometric family needs r < q")

    def piece(j: int) -> IntervalSet:
        base = q**j
        return IntervalSet._trusted([PosInterval._raw(base, base * r, True, True)])

    return GeneratorFamily(
        kind=Kind.GEOMETRIC, piece=piece, params={"q": _fmt(q), "r": _fmt(r)}
    )


def custom_family(piece: Callable[[int], PieceSet], checked_up_to: int, **tails: Any) -> GeneratorFamily:
    return GeneratorFamily(
        kind=Kind.CUSTOM, piece=piece, disjointness=CheckedUpTo(checked_up_to), **tails
    )


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
