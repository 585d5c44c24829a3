"""Arithmetic on the multiplicative half-line ``[1, +inf]``.

Values are kept exact for as long as the operands allow it:

* :class:`ExactRational` -- a rational ``q >= 1``;
* :class:`ExactExpLog` -- ``e**r`` for a rational ``r >= 0``;
* :class:`LogFloat` -- ``e**x`` for a double ``x >= 0`` (the fallback);
* :data:`INFINITY` -- the absorbing element.

On top of the scalar arithmetic this module evaluates finite products,
single infinite products of factors ``>= 1``, their rearrangements, and
unordered and iterated double products.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from ._exactexp import compare_rational_exp, log_of, to_float
from .errors import EpsilonOutOfRange, FactorBelowOne, InvalidPermutation

# Beyond this many bits an exact running product is demoted to LogFloat.
EXACT_BIT_LIMIT = 1 << 14
DIVERGENCE_LOG = 700.0
HEURISTIC_WINDOW = 16


class MValue:
    """Base class of values in ``[1, +inf]``; compare and multiply freely."""

    __slots__ = ()

    def log(self) -> float:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def is_exact(self) -> bool:
        return False

    def __float__(self) -> float:
        x = self.log()
        return math.exp(x) if x < 709.0 else math.inf

    def __mul__(self, other: Any) -> MValue:
        return mv_mul(self, as_mvalue(other))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MValue:
        return mv_pow(self, n)

    def _cmp(self, other: Any) -> int:
        if not isinstance(other, MValue):
            if isinstance(other, bool) or not isinstance(other, (int, Fraction, float)):
                return NotImplemented
            try:
                other = as_mvalue(other)
            except FactorBelowOne:
                return NotImplemented
        return mv_compare(self, other)

    def __eq__(self, other: Any) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c == 0

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

    def __hash__(self) -> int:
        # Equal values share a float log, so this is consistent with __eq__.
        return hash(self.log())

    def __str__(self) -> str:
        return format_mvalue(self)


@dataclass(frozen=True, eq=False, repr=True)
class ExactRational(MValue):
    q: Fraction

    def __post_init__(self) -> None:
        q = Fraction(self.q)
        if q < 1:
            raise FactorBelowOne(f"rational value {q} is below 1")
        object.__setattr__(self, "q", q)

    def log(self) -> float:
        return log_of(self.q)

    @property
    def is_exact(self) -> bool:
        return True


@dataclass(frozen=True, eq=False, repr=True)
class ExactExpLog(MValue):
    """The value ``e**r``."""

    r: Fraction

    def __post_init__(self) -> None:
        r = Fraction(self.r)
        if r < 0:
            raise FactorBelowOne(f"exponent {r} is negative")
        object.__setattr__(self, "r", r)

    def log(self) -> float:
        return to_float(self.r)

    @property
    def is_exact(self) -> bool:
        return True


@dataclass(frozen=True, eq=False, repr=True)
class LogFloat(MValue):
    """The value ``e**x`` carried by its double-precision log."""

    x: float

    def __post_init__(self) -> None:
        x = float(self.x)
        if not x >= 0.0 or math.isinf(x):
            raise FactorBelowOne(f"log-domain value {x!r} is not a finite number >= 0")
        object.__setattr__(self, "x", x)

    def log(self) -> float:
        return self.x


class _Infinity(MValue):
    __slots__ = ()
    _instance: _Infinity | None = None

    def __new__(cls) -> _Infinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def log(self) -> float:
        return math.inf

    @property
    def is_finite(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()
ONE = ExactRational(Fraction(1))


def _logfloat(x: float) -> MValue:
    return INFINITY if math.isinf(x) else LogFloat(x)


def _is_identity(v: MValue) -> bool:
    return (isinstance(v, ExactRational) and v.q == 1) or (
        isinstance(v, ExactExpLog) and v.r == 0
    )


def as_mvalue(x: Any) -> MValue:
    """Coerce ints, Fractions, floats and canonical strings to an MValue."""
    if isinstance(x, MValue):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a multiplicative value")
    if isinstance(x, (int, Fraction)):
        return ExactRational(Fraction(x))
    if isinstance(x, float):
        if math.isnan(x):
            raise FactorBelowOne("nan is not a multiplicative value")
        if math.isinf(x):
            if x < 0:
                raise FactorBelowOne("-inf is below 1")
            return INFINITY
        if x < 1.0:
            raise FactorBelowOne(f"factor {x!r} is below 1")
        return LogFloat(math.log(x))
    if isinstance(x, str):
        return parse_mvalue(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a multiplicative value")


def mv_mul(a: MValue, b: MValue) -> MValue:
    if a is INFINITY or b is INFINITY:
        return INFINITY
    if _is_identity(a):
        return b
    if _is_identity(b):
        return a
    if isinstance(a, ExactRational) and isinstance(b, ExactRational):
        return ExactRational(a.q * b.q)
    if isinstance(a, ExactExpLog) and isinstance(b, ExactExpLog):
        return ExactExpLog(a.r + b.r)
    return _logfloat(a.log() + b.log())


def mv_pow(v: MValue, n: int) -> MValue:
    """``v**n`` for an integer ``n >= 0``; exact representations stay exact."""
    if n < 0:
        raise FactorBelowOne("negative powers leave [1, inf]")
    if n == 0:
        return ONE
    if v is INFINITY:
        return INFINITY
    if isinstance(v, ExactRational):
        return ExactRational(v.q**n)
    if isinstance(v, ExactExpLog):
        return ExactExpLog(v.r * n)
    return _logfloat(v.log() * n)


def mv_compare(a: MValue, b: MValue) -> int:
    """Three-way comparison (-1, 0, 1) of two multiplicative values."""
    if a is INFINITY or b is INFINITY:
        return (a is INFINITY) - (b is INFINITY)
    if isinstance(a, ExactRational) and isinstance(b, ExactRational):
        return (a.q > b.q) - (a.q < b.q)
    if isinstance(a, ExactExpLog) and isinstance(b, ExactExpLog):
        return (a.r > b.r) - (a.r < b.r)
    if isinstance(a, ExactRational) and isinstance(b, ExactExpLog):
        return compare_rational_exp(a.q, b.r)
    if isinstance(a, ExactExpLog) and isinstance(b, ExactRational):
        return -compare_rational_exp(b.q, a.r)
    x, y = a.log(), b.log()
    return (x > y) - (x < y)


def finite_product(factors: Iterable[Any]) -> MValue:
    """The partial product ``a_1 * ... * a_N`` of factors ``>= 1``.

    Factors are grouped by representation before combining, so the result
    does not depend on the order of the factors, even in the log domain
    (the float logs are summed with :func:`math.fsum`).
    """
    q = Fraction(1)
    r = Fraction(0)
    floats: list[float] = []
    for f in factors:
        v = as_mvalue(f)
        if v is INFINITY:
            return INFINITY
        if isinstance(v, ExactRational):
            q *= v.q
        elif isinstance(v, ExactExpLog):
            r += v.r
        else:
            floats.append(v.x)
    if not floats:
        if r == 0:
            return ExactRational(q)
        if q == 1:
            return ExactExpLog(r)
    if q != 1:
        floats.append(log_of(q))
    if r != 0:
        floats.append(float(r))
    return _logfloat(math.fsum(floats))


def _cap(v: MValue) -> MValue:
    if isinstance(v, ExactRational):
        if v.q.numerator.bit_length() + v.q.denominator.bit_length() > EXACT_BIT_LIMIT:
            return LogFloat(v.log())
    elif isinstance(v, ExactExpLog):
        if v.r.denominator.bit_length() > EXACT_BIT_LIMIT:
            return LogFloat(v.log())
    return v


# -- serialization ----------------------------------------------------------


def format_mvalue(v: MValue, *, as_float: bool = False, log_domain: bool = False) -> str:
    """Canonical wire text: ``"p/q"``, ``"exp(p/q)"``, a decimal, or ``"inf"``."""
    if v is INFINITY:
        return "inf"
    if log_domain:
        if as_float or isinstance(v, LogFloat):
            return repr(v.log())
        if isinstance(v, ExactExpLog):
            return f"{v.r.numerator}/{v.r.denominator}"
        return f"log({v.q.numerator}/{v.q.denominator})"
    if as_float or isinstance(v, LogFloat):
        x = v.log()
        return repr(math.exp(x)) if x < 709.0 else f"exp({x!r})"
    if isinstance(v, ExactRational):
        return f"{v.q.numerator}/{v.q.denominator}"
    return f"exp({v.r.numerator}/{v.r.denominator})"


def parse_mvalue(text: str) -> MValue:
    """Inverse of :func:`format_mvalue` for its default (exact) output."""
    s = text.strip()
    if s == "inf":
        return INFINITY
    if s.startswith("exp(") and s.endswith(")"):
        inner = s[4:-1]
        if "." in inner or "e" in inner.lower():
            return _logfloat(float(inner))
        return ExactExpLog(Fraction(inner))
    if "." in s or "e" in s.lower():
        return as_mvalue(float(s))
    return ExactRational(Fraction(s))


# -- infinite products ------------------------------------------------------


class Status(enum.Enum):
    CONVERGED = "Converged"
    DIVERGES_TO_INFINITY = "DivergesToInfinity"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ProductResult:
    value: MValue
    status: Status
    terms_used: int
    log_error_bound: float | None = None

    def __post_init__(self) -> None:
        if self.status is Status.CONVERGED:
            if not self.value.is_finite or self.log_error_bound is None:
                raise ValueError("a converged result needs a finite value and an error bound")
        if self.status is Status.DIVERGES_TO_INFINITY and self.value is not INFINITY:
            raise ValueError("a divergent result must carry INFINITY")


def _checked(x: Any) -> MValue:
    return as_mvalue(x)


@dataclass(frozen=True)
class FactorFamily:
    """A rule ``j -> a_j >= 1`` (``j >= 1``) with optional tail information.

    ``tail_log_bound(N)`` bounds ``sum_{j>N} log a_j`` from above.
    ``tail_lower(N)``, when given, is a value known to be at most
    ``prod_{j>N} a_j``; it lets the evaluator report ``p_N * tail_lower(N)``
    and shrink the error to the width of the enclosure.
    """

    factor: Callable[[int], Any]
    tail_log_bound: Callable[[int], float] | None = None
    tail_lower: Callable[[int], Any] | None = None

    def __call__(self, j: int) -> MValue:
        return _checked(self.factor(j))


@dataclass(frozen=True)
class DoubleFactorFamily:
    """A rule ``(i, j) -> a_ij >= 1``.

    ``tail_log_bound(N, M)`` bounds the log-sum over all pairs outside the
    rectangle ``{1..N} x {1..M}``; ``None`` for ``N`` or ``M`` means that
    side is unbounded (the whole row or column range).
    """

    factor: Callable[[int, int], Any]
    tail_log_bound: Callable[[int | None, int | None], float] | None = None

    def __call__(self, i: int, j: int) -> MValue:
        return _checked(self.factor(i, j))


def _geometric_tail(logs: Sequence[float]) -> float | None:
    ratios = []
    for x, y in zip(logs, list(logs)[1:]):
        if y == 0.0:
            ratios.append(0.0)
        elif x == 0.0:
            return None
        else:
            ratios.append(y / x)
    r = max(ratios)
    if r >= 1.0:
        return None
    return logs[-1] * r / (1.0 - r)


def _run_product(
    term: Callable[[int], MValue],
    tail_upper: Callable[[int], float | None] | None,
    tail_lower: Callable[[int], MValue | None] | None,
    log_tolerance: float,
    max_terms: int,
    divergence_log: float,
    window: int,
) -> ProductResult:
    if not log_tolerance > 0:
        raise ValueError("log_tolerance must be positive")
    p: MValue = ONE
    recent: deque[float] = deque(maxlen=window)
    for n in range(1, max_terms + 1):
        a = term(n)
        if a is INFINITY:
            return ProductResult(INFINITY, Status.DIVERGES_TO_INFINITY, n)
        p = _cap(mv_mul(p, a))
        if p.log() > divergence_log:
            return ProductResult(INFINITY, Status.DIVERGES_TO_INFINITY, n)
        if tail_upper is not None:
            upper = tail_upper(n)
            if upper is None:
                continue
            lower = tail_lower(n) if tail_lower is not None else None
            width = max(0.0, upper - (lower.log() if lower is not None else 0.0))
            if width < log_tolerance:
                value = p if lower is None else _cap(mv_mul(p, lower))
                return ProductResult(value, Status.CONVERGED, n, width)
        else:
            recent.append(a.log())
            if len(recent) == window:
                bound = _geometric_tail(recent)
                if bound is not None and bound < log_tolerance:
                    return ProductResult(p, Status.CONVERGED, n, bound)
    return ProductResult(p, Status.UNDETERMINED, max_terms)


def partial_products(family: FactorFamily, n: int) -> list[MValue]:
    """``[p_1, ..., p_n]``; nondecreasing because every factor is >= 1."""
    out = []
    p: MValue = ONE
    for j in range(1, n + 1):
        p = mv_mul(p, family(j))
        out.append(p)
    return out


def infinite_product(
    family: FactorFamily,
    log_tolerance: float,
    *,
    max_terms: int = 1_000_000,
    divergence_log: float = DIVERGENCE_LOG,
    window: int = HEURISTIC_WINDOW,
) -> ProductResult:
    """Evaluate ``prod_{j>=1} a_j`` for factors ``a_j >= 1``.

    With a tail bound the result is certified once the tail enclosure is
    narrower than ``log_tolerance``. Without one, a geometric-ratio test on
    the last ``window`` log-factors may report convergence with its
    heuristic bound; otherwise the result is ``Undetermined``.
    """
    lower = None
    if family.tail_lower is not None:
        lower = lambda n: _checked(family.tail_lower(n))  # noqa: E731
    return _run_product(
        family, family.tail_log_bound, lower, log_tolerance, max_terms, divergence_log, window
    )


def _permutation_rule(permutation: Callable[[int], int] | Sequence[int]) -> Callable[[int], int]:
    if callable(permutation):
        return permutation
    perm = [int(k) for k in permutation]
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise InvalidPermutation("finite permutation must rearrange 1..n")
    n = len(perm)
    return lambda k: perm[k - 1] if k <= n else k


class _PrefixTracker:
    """Tracks ``sigma(1..N)``: its max ``M`` and the largest ``m`` with ``1..m`` seen."""

    def __init__(self) -> None:
        self.seen: set[int] = set()
        self.low = 0
        self.high = 0

    def add(self, j: int, k: int) -> None:
        if j < 1 or j in self.seen:
            raise InvalidPermutation(f"rearrangement revisits or leaves the index set at k={k}")
        self.seen.add(j)
        self.high = max(self.high, j)
        while self.low + 1 in self.seen:
            self.low += 1


def rearranged_product(
    family: FactorFamily,
    permutation: Callable[[int], int] | Sequence[int],
    log_tolerance: float,
    *,
    max_terms: int = 1_000_000,
    divergence_log: float = DIVERGENCE_LOG,
    window: int = HEURISTIC_WINDOW,
) -> ProductResult:
    """Evaluate ``prod_k a_{sigma(k)}`` under the same contract as
    :func:`infinite_product`.

    Tails transfer from the original order: after ``N`` terms every index
    ``<= m`` has been used and none above ``M``, so the remaining log-sum
    lies between the family's tails at ``M`` and at ``m``.
    """
    sigma = _permutation_rule(permutation)
    track = _PrefixTracker()

    def term(k: int) -> MValue:
        j = sigma(k)
        track.add(j, k)
        return family(j)

    upper = lower = None
    if family.tail_log_bound is not None:
        upper = lambda n: family.tail_log_bound(track.low) if track.low >= 1 else None  # noqa: E731
        if family.tail_lower is not None:
            lower = lambda n: _checked(family.tail_lower(track.high))  # noqa: E731
    return _run_product(term, upper, lower, log_tolerance, max_terms, divergence_log, window)


# -- double products --------------------------------------------------------


class Order(enum.Enum):
    ROWS_FIRST = "RowsFirst"
    COLUMNS_FIRST = "ColumnsFirst"


def unordered_double_product(
    family: DoubleFactorFamily,
    log_tolerance: float,
    *,
    max_side: int = 1024,
    divergence_log: float = DIVERGENCE_LOG,
    window: int = 4,
) -> ProductResult:
    """Supremum of finite partial products over ``N x N`` squares.

    Squares are probed with doubling side. Every finite index set fits in
    some square, so the squares' supremum is the unordered product. Without
    a tail bound the shell increments are tested: ``window`` geometrically
    shrinking increments give a heuristic bound, ``window`` nondecreasing
    positive ones are reported as divergence.
    """
    if not log_tolerance > 0:
        raise ValueError("log_tolerance must be positive")
    p: MValue = ONE
    prev_side = 0
    prev_log = 0.0
    increments: deque[float] = deque(maxlen=window)
    side = 1
    while side <= max_side:
        shell = [
            family(i, j)
            for i in range(1, side + 1)
            for j in range(1, side + 1)
            if i > prev_side or j > prev_side
        ]
        p = _cap(mv_mul(p, finite_product(shell)))
        lp = p.log()
        if lp > divergence_log:
            return ProductResult(INFINITY, Status.DIVERGES_TO_INFINITY, side * side)
        if family.tail_log_bound is not None:
            upper = family.tail_log_bound(side, side)
            if upper < log_tolerance:
                return ProductResult(p, Status.CONVERGED, side * side, max(0.0, upper))
        else:
            increments.append(lp - prev_log)
            if len(increments) == window:
                inc = list(increments)
                if all(b >= a > 0 for a, b in zip(inc, inc[1:])):
                    return ProductResult(INFINITY, Status.DIVERGES_TO_INFINITY, side * side)
                bound = _geometric_tail(inc)
                if bound is not None and bound < log_tolerance:
                    return ProductResult(p, Status.CONVERGED, side * side, bound)
        prev_side, prev_log = side, lp
        side *= 2
    return ProductResult(p, Status.UNDETERMINED, prev_side * prev_side)


def iterated_double_product(
    family: DoubleFactorFamily,
    order: Order,
    log_tolerance: float,
    *,
    max_terms: int = 1_000_000,
    divergence_log: float = DIVERGENCE_LOG,
) -> ProductResult:
    """``prod_i (prod_j a_ij)`` (rows first) or ``prod_j (prod_i a_ij)``.

    Inner product ``i`` is evaluated with :func:`infinite_product` at
    tolerance ``tol / (4 i**2)`` and the outer one at ``tol / 2``. The inner
    shares sum to ``tol * pi**2 / 24 < tol / 2``, so the reported error
    (outer tail plus the inner errors actually incurred) stays below ``tol``.
    """
    if not log_tolerance > 0:
        raise ValueError("log_tolerance must be positive")
    rows = order is Order.ROWS_FIRST
    tail = family.tail_log_bound

    def line(i: int) -> FactorFamily:
        f = (lambda j: family(i, j)) if rows else (lambda j: family(j, i))
        t = None
        if tail is not None:
            t = (lambda m: tail(None, m)) if rows else (lambda m: tail(m, None))
        return FactorFamily(f, t)

    inner: dict[int, ProductResult] = {}

    class _Undetermined(Exception):
        pass

    def outer_factor(i: int) -> MValue:
        res = infinite_product(
            line(i), log_tolerance / (4 * i * i), max_terms=max_terms, divergence_log=divergence_log
        )
        inner[i] = res
        if res.status is Status.UNDETERMINED:
            raise _Undetermined
        return res.value

    outer_tail = None
    if tail is not None:
        outer_tail = (lambda n: tail(n, None)) if rows else (lambda n: tail(None, n))
    try:
        res = infinite_product(
            FactorFamily(outer_factor, outer_tail),
            log_tolerance / 2,
            max_terms=max_terms,
            divergence_log=divergence_log,
        )
    except _Undetermined:
        n = max(inner)
        partial = finite_product(inner[k].value for k in sorted(inner))
        return ProductResult(partial, Status.UNDETERMINED, n)
    if res.status is Status.CONVERGED:
        err = res.log_error_bound + math.fsum(
            inner[k].log_error_bound or 0.0 for k in inner
        )
        return ProductResult(res.value, Status.CONVERGED, res.terms_used, err)
    return res


def diagonal_pairing(k: int) -> tuple[int, int]:
    """Cantor enumeration of ``N x N``: diagonals ``i + j = s + 1`` in turn."""
    if k < 1:
        raise InvalidPermutation("pairings are defined on k >= 1")
    s = (math.isqrt(8 * k) + 1) // 2
    while s * (s - 1) // 2 >= k:
        s -= 1
    while s * (s + 1) // 2 < k:
        s += 1
    i = k - s * (s - 1) // 2
    return i, s + 1 - i


def shell_snake_pairing(k: int) -> tuple[int, int]:
    """Walk the square shells ``max(i, j) = n`` in alternating direction."""
    if k < 1:
        raise InvalidPermutation("pairings are defined on k >= 1")
    n = math.isqrt(k - 1) + 1
    t = k - (n - 1) ** 2 - 1
    if n % 2 == 0:
        t = 2 * n - 2 - t
    return (t + 1, n) if t < n else (n, 2 * n - 1 - t)


class _SquareTracker:
    def __init__(self, pairing: Callable[[int], tuple[int, int]]):
        self.pairing = pairing
        self.seen: set[tuple[int, int]] = set()
        self.count = 0
        self.side = 0

    def extend_to(self, n: int) -> None:
        while self.count < n:
            self.count += 1
            pair = self.pairing(self.count)
            if pair in self.seen or min(pair) < 1:
                raise InvalidPermutation(f"pairing revisits or leaves N x N at k={self.count}")
            self.seen.add(pair)
            while self._shell_done(self.side + 1):
                self.side += 1

    def _shell_done(self, s: int) -> bool:
        return all((i, s) in self.seen for i in range(1, s + 1)) and all(
            (s, j) in self.seen for j in range(1, s)
        )


def rearrange_double_to_single(
    family: DoubleFactorFamily, pairing: Callable[[int], tuple[int, int]]
) -> FactorFamily:
    """The single family ``b_k = a_{sigma(k)}`` for a bijection ``N -> N x N``.

    If the double family has a tail bound, the single family inherits one:
    once ``sigma(1..N)`` covers the square of side ``m``, the remaining
    factors lie outside that square.
    """
    track = _SquareTracker(pairing)

    def factor(k: int) -> MValue:
        track.extend_to(k)
        return family(*pairing(k))

    tail = None
    if family.tail_log_bound is not None:

        def tail(n: int) -> float:
            track.extend_to(n)
            m = track.side
            return family.tail_log_bound(m, m) if m >= 1 else math.inf

    return FactorFamily(factor, tail)


# -- the epsilon allocation -------------------------------------------------


def _check_epsilon(epsilon: Any) -> Fraction:
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1), got {eps}")
    return eps


def epsilon_factor(epsilon: Any, j: int) -> Fraction:
    """``(1 + eps**j) / (1 + eps**(j+1))``, the slack allotted to index ``j``."""
    eps = _check_epsilon(epsilon)
    return (1 + eps**j) / (1 + eps ** (j + 1))


def telescoping_epsilon_product(epsilon: Any, n: int) -> Fraction:
    """Exact ``prod_{j=1}^{n} (1 + eps**j) / (1 + eps**(j+1))``.

    The product telescopes to ``(1 + eps) / (1 + eps**(n+1))``; this
    function multiplies the factors out rather than using that identity.
    """
    eps = _check_epsilon(epsilon)
    if n < 1:
        raise ValueError("n must be at least 1")
    out = Fraction(1)
    for j in range(1, n + 1):
        out *= (1 + eps**j) / (1 + eps ** (j + 1))
    return out


def telescoping_closed_form(epsilon: Any, n: int) -> Fraction:
    eps = _check_epsilon(epsilon)
    return (1 + eps) / (1 + eps ** (n + 1))
