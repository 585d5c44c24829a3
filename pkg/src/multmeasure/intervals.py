"""Exact interval-set algebra on ``(0, +inf)`` and on its log image.

:class:`IntervalSet` holds finite unions of intervals with rational
endpoints (``0`` and ``inf`` allowed as open sentinels). Its image under the
logarithm is a :class:`RealIntervalSet` whose bounds are :class:`LogPoint`
numbers ``t + log p`` with ``t`` and ``p`` rational, so that ``log`` and
``exp`` round-trip without rounding.

Both set types are immutable and always in canonical form: components
sorted, pairwise disjoint and non-mergeable, so equal sets have identical
component tuples.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Callable, Iterable, Union

from ._exactexp import compare_rational_exp, log_of, to_float
from .errors import DomainError, NonRepresentableBound
from .mvalue import INFINITY, ExactExpLog, ExactRational, LogFloat, MValue, finite_product

INF = math.inf


def _rational(x: Any) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise DomainError(f"endpoint {x!r} is not an exact rational")
    return Fraction(x)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class LogPoint:
    """The real number ``shift + log(arg)`` with rational ``shift`` and ``arg > 0``.

    Pure shifts (``arg == 1``) are the log-coordinates used by the Cantor
    families; pure logs (``shift == 0``) are images of rational endpoints.
    Ordering is decided exactly.
    """

    __slots__ = ("shift", "arg")

    def __init__(self, shift: Any = 0, arg: Any = 1):
        shift = Fraction(shift)
        arg = Fraction(arg)
        if arg <= 0:
            raise DomainError("LogPoint argument must be positive")
        self.shift = shift
        self.arg = arg

    @classmethod
    def log(cls, p: Any) -> LogPoint:
        return cls(0, p)

    @classmethod
    def _raw(cls, shift: Fraction, arg: Fraction) -> LogPoint:
        obj = object.__new__(cls)
        obj.shift = shift
        obj.arg = arg
        return obj

    @property
    def is_zero(self) -> bool:
        return self.shift == 0 and self.arg == 1

    def __add__(self, other: LogPoint) -> LogPoint:
        if not isinstance(other, LogPoint):
            return NotImplemented
        return LogPoint._raw(self.shift + other.shift, self.arg * other.arg)

    def __neg__(self) -> LogPoint:
        return LogPoint._raw(-self.shift, 1 / self.arg)

    def __sub__(self, other: LogPoint) -> LogPoint:
        if not isinstance(other, LogPoint):
            return NotImplemented
        return LogPoint._raw(self.shift - other.shift, self.arg / other.arg)

    def __float__(self) -> float:
        return to_float(self.shift) + log_of(self.arg)

    def _cmp(self, other: Any) -> int:
        if isinstance(other, LogPoint):
            if self.arg == other.arg:
                return (self.shift > other.shift) - (self.shift < other.shift)
            if self.shift == other.shift:
                return (self.arg > other.arg) - (self.arg < other.arg)
            # sign(d + log q) == sign(q - e**(-d))
            return compare_rational_exp(self.arg / other.arg, other.shift - self.shift)
        if isinstance(other, float) and math.isinf(other):
            return -1 if other > 0 else 1
        return NotImplemented

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, LogPoint):
            return self.shift == other.shift and self.arg == other.arg
        if isinstance(other, float) and math.isinf(other):
            return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.shift, self.arg))

    def __lt__(self, other: Any) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other: Any) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other: Any) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other: Any) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __repr__(self) -> str:
        return f"LogPoint({self.shift!r}, {self.arg!r})"

    def __str__(self) -> str:
        if self.arg == 1:
            return format_rational(self.shift)
        log = f"log({format_rational(self.arg)})"
        if self.shift == 0:
            return log
        return f"{format_rational(self.shift)}+{log}"


Scalar = Union[Fraction, float, LogPoint]


def _nonempty(lo: Scalar, hi: Scalar, lc: bool, hc: bool) -> bool:
    return lo < hi or (lo == hi and lc and hc)


class _Interval:
    __slots__ = ("lo", "hi", "lo_closed", "hi_closed")

    @classmethod
    def _raw(cls, lo, hi, lo_closed: bool, hi_closed: bool):
        obj = object.__new__(cls)
        obj.lo = lo
        obj.hi = hi
        obj.lo_closed = lo_closed
        obj.hi_closed = hi_closed
        return obj

    def _key(self) -> tuple:
        return (self.lo, self.hi, self.lo_closed, self.hi_closed)

    def __eq__(self, other: Any) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x: Scalar) -> bool:
        above = self.lo < x or (self.lo_closed and self.lo == x)
        below = x < self.hi or (self.hi_closed and self.hi == x)
        return above and below

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_bound_text(self.lo)},{_bound_text(self.hi)}{right}"


def _bound_text(x: Scalar) -> str:
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, Fraction):
        return format_rational(x)
    return str(x)


class PosInterval(_Interval):
    """A nonempty subinterval of ``(0, +inf)`` with rational endpoints.

    ``lo == 0`` and ``hi == inf`` are allowed only as open bounds. A
    degenerate interval ``[a, a]`` is the singleton ``{a}``.
    """

    __slots__ = ()

    def __init__(self, lo: Any, hi: Any, lo_closed: bool = True, hi_closed: bool = True):
        lo = _rational(lo)
        hi = INF if (isinstance(hi, float) and hi == INF) else _rational(hi)
        if lo < 0:
            raise DomainError(f"lower bound {lo} lies outside (0, inf)")
        if lo == 0 and lo_closed:
            raise DomainError("0 is not in (0, inf); the bound at 0 must be open")
        if hi == INF and hi_closed:
            raise DomainError("the bound at inf must be open")
        if not _nonempty(lo, hi, lo_closed, hi_closed):
            raise DomainError(f"empty interval with bounds {lo}, {hi}")
        if lo == hi == 0:
            raise DomainError("degenerate interval at 0")
        self.lo = lo
        self.hi = hi
        self.lo_closed = bool(lo_closed)
        self.hi_closed = bool(hi_closed)

    @classmethod
    def closed(cls, lo: Any, hi: Any) -> PosInterval:
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo: Any, hi: Any) -> PosInterval:
        return cls(lo, hi, False, False)

    @classmethod
    def point(cls, a: Any) -> PosInterval:
        return cls(a, a, True, True)

    @property
    def is_compact(self) -> bool:
        return self.lo > 0 and self.hi != INF and self.lo_closed and self.hi_closed


class RealInterval(_Interval):
    """A nonempty interval of the real line with :class:`LogPoint` bounds."""

    __slots__ = ()

    def __init__(self, lo: Any, hi: Any, lo_closed: bool = True, hi_closed: bool = True):
        lo = _real_bound(lo)
        hi = _real_bound(hi)
        if lo == INF or hi == -INF:
            raise DomainError("misplaced infinite bound")
        if (lo == -INF and lo_closed) or (hi == INF and hi_closed):
            raise DomainError("infinite bounds must be open")
        if not _nonempty(lo, hi, lo_closed, hi_closed):
            raise DomainError(f"empty interval with bounds {lo}, {hi}")
        self.lo = lo
        self.hi = hi
        self.lo_closed = bool(lo_closed)
        self.hi_closed = bool(hi_closed)


def _real_bound(x: Any) -> Scalar:
    if isinstance(x, LogPoint):
        return x
    if isinstance(x, float) and math.isinf(x):
        return x
    return LogPoint(_rational(x), 1)


# -- generic canonical-form algebra -----------------------------------------


def _normalize(intervals: Iterable[_Interval], make: Callable) -> list:
    items = sorted(intervals, key=lambda iv: (iv.lo, not iv.lo_closed))
    out = []
    cur = None
    for iv in items:
        if cur is None:
            cur = [iv.lo, iv.lo_closed, iv.hi, iv.hi_closed]
            continue
        if iv.lo < cur[2] or (iv.lo == cur[2] and (cur[3] or iv.lo_closed)):
            if iv.hi > cur[2]:
                cur[2], cur[3] = iv.hi, iv.hi_closed
            elif iv.hi == cur[2]:
                cur[3] = cur[3] or iv.hi_closed
        else:
            out.append(make(cur[0], cur[2], cur[1], cur[3]))
            cur = [iv.lo, iv.lo_closed, iv.hi, iv.hi_closed]
    if cur is not None:
        out.append(make(cur[0], cur[2], cur[1], cur[3]))
    return out


def _complement(comps, make, ulo, uhi) -> list:
    out = []
    cursor, cursor_closed = ulo, False
    for c in comps:
        if _nonempty(cursor, c.lo, cursor_closed, not c.lo_closed):
            out.append(make(cursor, c.lo, cursor_closed, not c.lo_closed))
        cursor, cursor_closed = c.hi, not c.hi_closed
    if _nonempty(cursor, uhi, cursor_closed, False):
        out.append(make(cursor, uhi, cursor_closed, False))
    return out


def _intersect(a_comps, b_comps, make) -> list:
    out = []
    i = j = 0
    while i < len(a_comps) and j < len(b_comps):
        a, b = a_comps[i], b_comps[j]
        if a.lo > b.lo:
            lo, lc = a.lo, a.lo_closed
        elif b.lo > a.lo:
            lo, lc = b.lo, b.lo_closed
        else:
            lo, lc = a.lo, a.lo_closed and b.lo_closed
        if a.hi < b.hi:
            hi, hc = a.hi, a.hi_closed
        elif b.hi < a.hi:
            hi, hc = b.hi, b.hi_closed
        else:
            hi, hc = a.hi, a.hi_closed and b.hi_closed
        if _nonempty(lo, hi, lc, hc):
            out.append(make(lo, hi, lc, hc))
        ka, kb = (a.hi, a.hi_closed), (b.hi, b.hi_closed)
        if ka < kb:
            i += 1
        elif kb < ka:
            j += 1
        else:
            i += 1
            j += 1
    return out


class _IntervalSetBase:
    __slots__ = ("components",)
    _component: type = _Interval
    _universe: tuple = (-INF, INF)

    def __init__(self, intervals: Iterable[_Interval] = ()):
        intervals = list(intervals)
        for iv in intervals:
            if not isinstance(iv, self._component):
                raise DomainError(
                    f"{type(self).__name__} components must be {self._component.__name__}"
                )
        self.components = tuple(_normalize(intervals, self._component._raw))

    @classmethod
    def _trusted(cls, comps: Iterable[_Interval]):
        obj = object.__new__(cls)
        obj.components = tuple(comps)
        return obj

    @classmethod
    def empty(cls):
        return cls._trusted(())

    def _make(self):
        return self._component._raw

    def _same(self, other: Any) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def union(self, *others):
        comps = list(self.components)
        for o in others:
            self._same(o)
            comps.extend(o.components)
        return type(self)._trusted(_normalize(comps, self._make()))

    def intersect(self, other):
        self._same(other)
        return type(self)._trusted(_intersect(self.components, other.components, self._make()))

    def complement(self):
        lo, hi = self._universe
        return type(self)._trusted(_complement(self.components, self._make(), lo, hi))

    def difference(self, other):
        self._same(other)
        return self.intersect(other.complement())

    def issubset(self, other) -> bool:
        return not self.difference(other)

    __or__ = union
    __and__ = intersect
    __sub__ = difference
    __invert__ = complement
    __le__ = issubset

    def __contains__(self, x: Scalar) -> bool:
        return any(x in c for c in self.components)

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __bool__(self) -> bool:
        return bool(self.components)

    def __eq__(self, other: Any) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.components))

    def to_text(self, ascii_only: bool = False) -> str:
        if not self.components:
            return "{}" if ascii_only else "∅"
        sep = " U " if ascii_only else " ∪ "
        return sep.join(str(c) for c in self.components)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_text(ascii_only=True)})"


class IntervalSet(_IntervalSetBase):
    """A finite union of :class:`PosInterval`; complements are taken in ``(0, inf)``."""

    __slots__ = ()
    _component = PosInterval
    _universe = (Fraction(0), INF)

    @property
    def is_bounded_away(self) -> bool:
        """True when the closure is a compact subset of ``(0, inf)``."""
        return all(c.lo > 0 and c.hi != INF for c in self.components)


class RealIntervalSet(_IntervalSetBase):
    """A finite union of :class:`RealInterval`, typically a log image."""

    __slots__ = ()
    _component = RealInterval
    _universe = (-INF, INF)


# -- operations -------------------------------------------------------------


def normalize(raw: Iterable[PosInterval]) -> IntervalSet:
    return IntervalSet(raw)


def union(*sets: IntervalSet) -> IntervalSet:
    if not sets:
        return IntervalSet.empty()
    return sets[0].union(*sets[1:])


def intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return a.intersect(b)


def difference(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return a.difference(b)


def complement(a: IntervalSet) -> IntervalSet:
    return a.complement()


def length(i: PosInterval) -> MValue:
    """Multiplicative length ``hi / lo``; infinite when the interval reaches 0 or inf.

    Openness of the endpoints is irrelevant here.
    """
    if i.lo == 0 or i.hi == INF:
        return INFINITY
    return ExactRational(i.hi / i.lo)


def set_length_product(e: IntervalSet) -> MValue:
    return finite_product(length(c) for c in e.components)


def dilate(c: Any, e: IntervalSet) -> IntervalSet:
    """The image ``c * E``; multiplication by ``c > 0`` is order preserving."""
    c = _rational(c)
    if c <= 0:
        raise DomainError("dilation factor must be positive")
    comps = [
        PosInterval._raw(x.lo * c, x.hi if x.hi == INF else x.hi * c, x.lo_closed, x.hi_closed)
        for x in e.components
    ]
    return IntervalSet._trusted(comps)


def _log_bound(x: Scalar) -> Scalar:
    if x == INF:
        return INF
    if x == 0:
        return -INF
    return LogPoint._raw(Fraction(0), x)


def log_transform(e: IntervalSet) -> RealIntervalSet:
    comps = [
        RealInterval._raw(_log_bound(c.lo), _log_bound(c.hi), c.lo_closed, c.hi_closed)
        for c in e.components
    ]
    return RealIntervalSet._trusted(comps)


def _exp_bound(x: Scalar) -> Scalar:
    if isinstance(x, float):
        return INF if x > 0 else Fraction(0)
    if x.shift != 0:
        raise NonRepresentableBound(f"exp({x}) is not rational")
    return x.arg


def exp_transform(r: RealIntervalSet) -> IntervalSet:
    """Inverse of :func:`log_transform`; every finite bound must be a pure ``log p``."""
    comps = [
        PosInterval._raw(_exp_bound(c.lo), _exp_bound(c.hi), c.lo_closed, c.hi_closed)
        for c in r.components
    ]
    return IntervalSet._trusted(comps)


def lebesgue_measure(r: RealIntervalSet) -> LogPoint | float:
    """Exact Lebesgue measure of a log-space set, as ``t + log p`` (or ``inf``)."""
    # Shift numerators are accumulated per denominator to avoid a Fraction
    # operation per component.
    by_den: dict[int, int] = {}
    arg = Fraction(1)
    for c in r.components:
        lo, hi = c.lo, c.hi
        if isinstance(lo, float) or isinstance(hi, float):
            return INF
        a, b = hi.shift, lo.shift
        by_den[a.denominator] = by_den.get(a.denominator, 0) + a.numerator
        by_den[b.denominator] = by_den.get(b.denominator, 0) - b.numerator
        if hi.arg is not lo.arg and hi.arg != lo.arg:
            arg *= hi.arg / lo.arg
    shift = sum((Fraction(v, d) for d, v in by_den.items()), Fraction(0))
    return LogPoint._raw(shift, arg)


def exp_image_measure(r: RealIntervalSet) -> MValue:
    """``mu(exp(r)) = exp(|r|)`` with ``|r|`` the exact Lebesgue measure of ``r``.

    Exact unless the measure mixes rational shifts with logs of rationals.
    """
    m = lebesgue_measure(r)
    if m == INF:
        return INFINITY
    if m.shift == 0:
        return ExactRational(m.arg)
    if m.arg == 1:
        return ExactExpLog(m.shift)
    return LogFloat(float(m))


def distance(a: IntervalSet, b: IntervalSet) -> Fraction | float:
    """``inf {|x - y| : x in a, y in b}``, computed exactly (``inf`` if either is empty)."""
    best: Fraction | float = INF
    for x in a.components:
        for y in b.components:
            if x.hi < y.lo:
                d = y.lo - x.hi
            elif y.hi < x.lo:
                d = x.lo - y.hi
            else:
                d = Fraction(0)
            best = min(best, d)
    return best
