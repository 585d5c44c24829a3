"""The multiplicative measure on ``(0, +inf)``.

For finite unions of intervals the exterior measure is computed exactly as
the product of the component lengths ``hi / lo``. Covers are kept as a
separate verification surface: any cover bounds the measure from above and
:func:`greedy_cover` gets within a factor ``1 + eps`` of it. Countable
disjoint families are measured along two independent routes (product of the
pieces' measures, and measure of growing exact unions), and
:func:`lambda_quadrature` integrates ``1/x`` numerically as an oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from .errors import DomainError, InfiniteMeasure, NotACover, NotDisjoint, NotSeparated
from .families import GeneratorFamily, LogCantor, piece_measure
from .intervals import (
    INF,
    IntervalSet,
    PosInterval,
    RealIntervalSet,
    _normalize,
    distance,
    length,
    lebesgue_measure,
)
from .mvalue import (
    DIVERGENCE_LOG,
    INFINITY,
    ONE,
    FactorFamily,
    MValue,
    ProductResult,
    Status,
    _check_epsilon,
    as_mvalue,
    epsilon_factor,
    finite_product,
    format_mvalue,
    infinite_product,
    mv_compare,
)
from .quadrature import adaptive_integrate

AnySet = Union[IntervalSet, RealIntervalSet]


class Method(enum.Enum):
    EXACT_COMPONENTS = "ExactComponents"
    COVER_LIMIT = "CoverLimit"
    GENERATOR_LIMIT = "GeneratorLimit"


@dataclass(frozen=True)
class MeasureReport:
    value: MValue
    method: Method
    certificate: dict | None = None

    def to_json(self, *, as_float: bool = False, log_domain: bool = False) -> dict:
        out: dict[str, Any] = {
            "value": format_mvalue(self.value, as_float=as_float, log_domain=log_domain),
            "method": self.method.value,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def mu(e: AnySet) -> MValue:
    """Measure of a finite union of intervals.

    Bounded components away from 0 contribute ``hi / lo``; a component
    reaching 0 or inf makes the measure infinite; the empty set has measure 1.
    A :class:`RealIntervalSet` is read as a log image and measured as
    ``exp`` of its Lebesgue measure.
    """
    return piece_measure(e)


def outer_measure(e: AnySet) -> MValue:
    """Exterior measure of a representable set.

    The infimum over covers is attained in the limit by inflating the
    components themselves, so it coincides with :func:`mu`.
    """
    return mu(e)


def measure_report(e: AnySet) -> MeasureReport:
    return MeasureReport(mu(e), Method.EXACT_COMPONENTS)


# -- covers -----------------------------------------------------------------


@dataclass(frozen=True)
class Cover:
    """A finite list of compact intervals ``[a, b]``, ``0 < a <= b < inf``, meant to cover ``target``."""

    intervals: tuple[PosInterval, ...]
    target: IntervalSet = field(default_factory=IntervalSet.empty)

    def __post_init__(self) -> None:
        ivs = tuple(self.intervals)
        for iv in ivs:
            if not isinstance(iv, PosInterval) or not iv.is_compact:
                raise DomainError(f"cover members must be compact closed intervals, got {iv}")
        object.__setattr__(self, "intervals", ivs)

    def union(self) -> IntervalSet:
        return IntervalSet(self.intervals)

    def covers_target(self) -> bool:
        return self.target.issubset(self.union())

    def to_json(self) -> list[str]:
        return [str(iv) for iv in self.intervals]


def cover_value(s: Cover) -> MValue:
    """``nu(S)``: product of the members' lengths (after checking containment)."""
    if not s.covers_target():
        raise NotACover(f"union of the cover misses part of {s.target}")
    return finite_product(length(iv) for iv in s.intervals)


def _shrink_slack(delta: Fraction) -> Fraction:
    # A short dyadic rational in (1, delta].
    bits = 16
    while True:
        scale = 1 << bits
        cand = 1 + Fraction(((delta - 1) * scale).__floor__(), scale)
        if cand > 1:
            return cand
        bits *= 2


def greedy_cover(e: IntervalSet, epsilon: Any) -> Cover:
    """A cover of ``e`` with ``nu(S) <= (1 + eps) * mu(e)``.

    Component ``j`` (in ascending order) is replaced by ``[a_j / d_j, b_j]``
    where ``1 < d_j <= (1 + eps**j) / (1 + eps**(j+1))``; these slacks
    multiply to less than ``1 + eps``.
    """
    eps = _check_epsilon(epsilon)
    if not e.is_bounded_away:
        raise InfiniteMeasure(f"{e} has infinite measure")
    members = []
    for j, comp in enumerate(e.components, start=1):
        d = _shrink_slack(epsilon_factor(eps, j))
        members.append(PosInterval(comp.lo / d, comp.hi, True, True))
    return Cover(tuple(members), e)


# -- exact criteria ---------------------------------------------------------


def caratheodory_test(e: AnySet, a: AnySet) -> bool:
    """Check ``mu_e(A) == mu_e(A & E) * mu_e(A - E)`` exactly."""
    lhs = outer_measure(a)
    rhs = outer_measure(a & e) * outer_measure(a - e)
    return mv_compare(lhs, rhs) == 0


def separated_multiplicativity_check(e1: IntervalSet, e2: IntervalSet) -> bool:
    """For sets at positive distance, check ``mu_e(E1 | E2) == mu_e(E1) * mu_e(E2)``."""
    if distance(e1, e2) == 0:
        raise NotSeparated("the sets touch or overlap")
    return mv_compare(outer_measure(e1 | e2), outer_measure(e1) * outer_measure(e2)) == 0


# -- countable families -----------------------------------------------------


def check_disjoint(pieces: list[AnySet]) -> None:
    """Raise :class:`NotDisjoint` (1-based indices) unless the pieces are pairwise disjoint."""
    tagged = [(c, k) for k, p in enumerate(pieces, start=1) for c in p.components]
    tagged.sort(key=lambda t: (t[0].lo, not t[0].lo_closed))
    reach = None
    for comp, k in tagged:
        if reach is not None:
            hi, hc, owner = reach
            if comp.lo < hi or (comp.lo == hi and comp.lo_closed and hc):
                raise NotDisjoint(min(owner, k), max(owner, k))
        if reach is None or comp.hi > reach[0] or (comp.hi == reach[0] and comp.hi_closed):
            reach = (comp.hi, comp.hi_closed, k)


def _union_measure(pieces: list[AnySet]) -> MValue:
    comps = [c for p in pieces for c in p.components]
    cls = type(pieces[0]) if pieces else IntervalSet
    if not comps:
        return ONE
    union = cls._trusted(_normalize(comps, type(comps[0])._raw))
    return piece_measure(union)


def _probe_levels(n: int) -> list[int]:
    levels = []
    k = 1
    while k < n:
        levels.append(k)
        k *= 2
    levels.append(n)
    return levels


def _route_json(res: ProductResult) -> dict:
    return {
        "value": format_mvalue(res.value),
        "status": res.status.value,
        "terms_used": res.terms_used,
        "log_error_bound": res.log_error_bound,
    }


def mu_countable(
    family: GeneratorFamily,
    log_tolerance: float,
    *,
    max_terms: int = 100_000,
    divergence_log: float = DIVERGENCE_LOG,
) -> MeasureReport:
    """Measure ``U_j E_j`` for a disjoint family, along two routes.

    The product route evaluates ``prod_j mu(E_j)`` with
    :func:`infinite_product`. The union route measures the exact union of
    the first ``N`` pieces at doubling ``N`` (checking disjointness and the
    finite identity ``mu(U_{j<=N}) == prod_{j<=N} mu(E_j)`` at each level),
    then applies the family's tail information at the final level. The
    certificate records both routes and whether they agree.
    """
    factors = FactorFamily(family.measure, family.tail_log_bound, family.tail_lower)
    product = infinite_product(
        factors, log_tolerance, max_terms=max_terms, divergence_log=divergence_log
    )

    n_final = product.terms_used
    pieces: list[AnySet] = []
    finite_ok = True
    union_res: ProductResult | None = None
    for n in _probe_levels(n_final):
        pieces.extend(family(j) for j in range(len(pieces) + 1, n + 1))
        check_disjoint(pieces)
        m = _union_measure(pieces)
        if mv_compare(m, finite_product(piece_measure(p) for p in pieces)) != 0:
            finite_ok = False
        if m is INFINITY or m.log() > divergence_log:
            union_res = ProductResult(INFINITY, Status.DIVERGES_TO_INFINITY, n)
            break
    if union_res is None:
        union_res = _apply_tail(family, m, n_final, log_tolerance)

    agree = _routes_agree(product, union_res)
    certificate = {
        "tolerance": log_tolerance,
        "truncation": n_final,
        "log_error_bound": product.log_error_bound,
        "disjoint_checked_up_to": len(pieces),
        "finite_stages_multiplicative": finite_ok,
        "product_route": _route_json(product),
        "union_route": _route_json(union_res),
        "routes_agree": agree,
    }
    return MeasureReport(product.value, Method.GENERATOR_LIMIT, certificate)


def _apply_tail(family: GeneratorFamily, m: MValue, n: int, tol: float) -> ProductResult:
    if family.tail_log_bound is None:
        return ProductResult(m, Status.UNDETERMINED, n)
    upper = family.tail_log_bound(n)
    lower = as_mvalue(family.tail_lower(n)) if family.tail_lower else None
    width = max(0.0, upper - (lower.log() if lower is not None else 0.0))
    value = m if lower is None else m * lower
    status = Status.CONVERGED if width < tol else Status.UNDETERMINED
    return ProductResult(value, status, n, width if status is Status.CONVERGED else None)


def _routes_agree(a: ProductResult, b: ProductResult) -> bool:
    if a.status is Status.DIVERGES_TO_INFINITY or b.status is Status.DIVERGES_TO_INFINITY:
        return a.status is b.status
    if mv_compare(a.value, b.value) == 0:
        return True
    slack = (a.log_error_bound or 0.0) + (b.log_error_bound or 0.0)
    return abs(a.value.log() - b.value.log()) <= slack + 4 * math.ulp(max(a.value.log(), 1.0))


# -- the lambda oracle and the null-set bridge ------------------------------


def lambda_quadrature(e: IntervalSet, rel_tolerance: float, *, budget: int = 10**6) -> float:
    """``exp`` of the numerically integrated ``1/x`` over ``e``.

    Each component gets half of ``rel_tolerance / components`` as an
    absolute error target on its integral, which bounds the relative error
    of the exponentiated total. No logarithm identity is used.
    """
    if not rel_tolerance > 0:
        raise ValueError("rel_tolerance must be positive")
    if not e.is_bounded_away:
        raise InfiniteMeasure(f"{e} has infinite measure")
    if not e.components:
        return 1.0
    share = 0.5 * rel_tolerance / len(e.components)
    total = []
    used = 0
    for comp in e.components:
        value, evals = adaptive_integrate(
            lambda x: 1.0 / x, float(comp.lo), float(comp.hi), share, budget - used
        )
        used += evals
        total.append(value)
    return math.exp(math.fsum(total))


def null_equivalence_check(e_log: RealIntervalSet | LogCantor) -> bool:
    """``(Lebesgue measure of e_log is 0)`` iff ``(mu(exp(e_log)) == 1)``."""
    if isinstance(e_log, LogCantor):
        null = e_log.lebesgue_measure() == 0
        unit = mv_compare(e_log.multiplicative_measure(), ONE) == 0
        return null == unit
    m = lebesgue_measure(e_log)
    null = m != INF and m.is_zero
    unit = mv_compare(mu(e_log), ONE) == 0
    return null == unit
