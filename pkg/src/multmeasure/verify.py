"""Seeded property suites with counterexample minimization.

Randomness comes from :func:`numpy.random.default_rng` (PCG64, a 64-bit
generator with a stable stream across platforms). Each property draws from
its own stream, seeded with ``[seed, property index]``, so a property's
trials do not depend on which other properties ran. Trials run in index
order and a failing case is shrunk greedily by dropping set components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator

import numpy as np

from . import families, intervals
from .families import cantor_gap, cantor_gaps, gap_depth_product, geometric_family, telescoping_family
from .intervals import INF, IntervalSet, PosInterval, dilate, length
from .measure import (
    Cover,
    caratheodory_test,
    cover_value,
    greedy_cover,
    lambda_quadrature,
    mu,
    mu_countable,
    outer_measure,
    separated_multiplicativity_check,
)
from .mvalue import (
    INFINITY,
    ONE,
    DoubleFactorFamily,
    ExactExpLog,
    ExactRational,
    FactorFamily,
    LogFloat,
    MValue,
    Order,
    Status,
    diagonal_pairing,
    finite_product,
    infinite_product,
    iterated_double_product,
    mv_compare,
    partial_products,
    rearrange_double_to_single,
    rearranged_product,
    shell_snake_pairing,
    telescoping_closed_form,
    telescoping_epsilon_product,
    unordered_double_product,
)

Rng = np.random.Generator


# -- random objects ---------------------------------------------------------


def rand_rational(rng: Rng, lo: int = 1, hi: int = 60, max_den: int = 8) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, max_den + 1)))


def rand_interval(rng: Rng, *, unbounded: bool = False, degenerate: float = 0.05) -> PosInterval:
    """A random nonempty interval; with ``unbounded`` it may reach 0 or inf."""
    lc, hc = bool(rng.integers(2)), bool(rng.integers(2))
    a = rand_rational(rng)
    if rng.random() < degenerate:
        return PosInterval(a, a)
    b = rand_rational(rng)
    while b == a:
        b = rand_rational(rng)
    a, b = min(a, b), max(a, b)
    if unbounded and rng.random() < 0.1:
        a, lc = Fraction(0), False
    if unbounded and rng.random() < 0.1:
        b, hc = INF, False
    return PosInterval(a, b, lc, hc)


def rand_closed_interval(rng: Rng) -> PosInterval:
    a = rand_rational(rng, 1, 400, 30)
    b = a + rand_rational(rng, 0, 400, 30)
    return PosInterval(a, b)


def rand_set(rng: Rng, max_parts: int = 4, *, unbounded: bool = False) -> IntervalSet:
    k = int(rng.integers(0, max_parts + 1))
    return IntervalSet(rand_interval(rng, unbounded=unbounded) for _ in range(k))


def rand_disjoint_family(rng: Rng, max_members: int = 8) -> list[IntervalSet]:
    """Members built from consecutive slots between sorted cut points."""
    k = int(rng.integers(1, max_members + 1))
    slots = int(rng.integers(k, 3 * k + 1))
    cuts = sorted({rand_rational(rng, 1, 400, 12) for _ in range(2 * slots + 2)})
    members: list[list[PosInterval]] = [[] for _ in range(k)]
    for lo, hi in zip(cuts[::2], cuts[1::2]):
        owner = int(rng.integers(0, k + 1))
        if owner < k:
            members[owner].append(PosInterval(lo, hi, bool(rng.integers(2)), bool(rng.integers(2))))
    return [IntervalSet(m) for m in members]


def rand_mvalue(rng: Rng) -> MValue:
    pick = int(rng.integers(4))
    if pick == 0:
        return ExactRational(1 + rand_rational(rng, 0, 20))
    if pick == 1:
        return ExactExpLog(rand_rational(rng, 0, 20))
    if pick == 2:
        return LogFloat(float(rng.random() * 10))
    return ONE


# -- shrinking --------------------------------------------------------------


def shrink_sets(case: tuple) -> Iterator[tuple]:
    """Cases with one component dropped from one interval-set entry."""
    for i, item in enumerate(case):
        if isinstance(item, IntervalSet):
            comps = item.components
            for k in range(len(comps)):
                smaller = IntervalSet._trusted(comps[:k] + comps[k + 1 :])
                yield case[:i] + (smaller,) + case[i + 1 :]
        elif isinstance(item, (list, tuple)) and item and all(isinstance(x, IntervalSet) for x in item):
            for k in range(len(item)):
                yield case[:i] + (type(item)(item[:k]) + type(item)(item[k + 1 :]),) + case[i + 1 :]


def minimize(case: tuple, holds: Callable[..., bool], shrink: Callable[[tuple], Iterable[tuple]]) -> tuple:
    """Greedily replace ``case`` by smaller cases that still fail."""
    changed = True
    while changed:
        changed = False
        for smaller in shrink(case):
            try:
                ok = holds(*smaller)
            except Exception:
                continue
            if not ok:
                case = smaller
                changed = True
                break
    return case


def _show(x: Any) -> Any:
    if isinstance(x, IntervalSet):
        return x.to_text(ascii_only=True)
    if isinstance(x, (PosInterval, Fraction, MValue)):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_show(y) for y in x]
    return x if isinstance(x, (int, float, str, bool)) or x is None else repr(x)


# -- runner -----------------------------------------------------------------


@dataclass(frozen=True)
class Property:
    name: str
    generate: Callable[[Rng], tuple]
    holds: Callable[..., bool]
    shrink: Callable[[tuple], Iterable[tuple]] = shrink_sets
    max_trials: int | None = None


@dataclass
class PropertyResult:
    name: str
    trials: int
    passed: bool
    counterexample: Any = None
    error: str | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"property": self.name, "trials": self.trials, "passed": self.passed}
        if not self.passed:
            out["counterexample"] = self.counterexample
            if self.error:
                out["error"] = self.error
        return out


@dataclass
class SuiteResult:
    suite: str
    seed: int
    trials: int
    results: list[PropertyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "results": [r.to_json() for r in self.results],
        }


def run_property(prop: Property, trials: int, seed: int, index: int) -> PropertyResult:
    rng = np.random.default_rng([seed, index])
    n = trials if prop.max_trials is None else min(trials, prop.max_trials)
    for t in range(n):
        case = prop.generate(rng)
        try:
            ok = prop.holds(*case)
        except Exception as exc:  # a crash is a failure of the property
            return PropertyResult(prop.name, t + 1, False, _show(case), f"{type(exc).__name__}: {exc}")
        if not ok:
            small = minimize(case, prop.holds, prop.shrink)
            return PropertyResult(prop.name, t + 1, False, _show(small))
    return PropertyResult(prop.name, n, True)


def run_suite(suite: str, trials: int, seed: int) -> SuiteResult:
    names = list(SUITES) if suite == "all" else [suite]
    if any(n not in SUITES for n in names):
        raise KeyError(f"unknown suite {suite!r}")
    out = SuiteResult(suite, seed, trials)
    index = 0
    for name in names:
        for prop in SUITES[name]:
            out.results.append(run_property(prop, trials, seed, index))
            index += 1
    return out


def _eq(a: MValue, b: MValue) -> bool:
    return mv_compare(a, b) == 0


# -- products ---------------------------------------------------------------


def _gen_factor_family(rng: Rng) -> tuple:
    c = rand_rational(rng, 1, 20, 4)
    return (int(rng.integers(3)), c)


def _monotone_partials(kind: int, c: Fraction) -> bool:
    rules = {
        0: lambda j: 1 + c / j**2,
        1: lambda j: ExactExpLog(c / 2**j),
        2: lambda j: LogFloat(float(c) / j),
    }
    ps = partial_products(FactorFamily(rules[kind]), 40)
    return all(mv_compare(a, b) <= 0 for a, b in zip(ps, ps[1:]))


def _gen_factor_list(rng: Rng) -> tuple:
    k = int(rng.integers(0, 13))
    vals = [rand_mvalue(rng) for _ in range(k)]
    return (vals, [int(i) for i in rng.permutation(k)])


def _finite_order_free(vals: list, perm: list) -> bool:
    return repr(finite_product(vals)) == repr(finite_product([vals[i] for i in perm]))


def pair_swap(k: int) -> int:
    return k + 1 if k % 2 else k - 1


def block_reversal(b: int) -> Callable[[int], int]:
    def sigma(k: int) -> int:
        start = (k - 1) // b * b
        return start + b - (k - 1 - start)

    return sigma


def dyadic_reversal(k: int) -> int:
    # Reverse each block [2**m, 2**(m+1) - 1].
    m = k.bit_length() - 1
    return (1 << m) + (1 << (m + 1)) - 1 - k


def rearrangement(choice: int) -> Callable[[int], int]:
    if choice == 0:
        return pair_swap
    if choice == 1:
        return dyadic_reversal
    return block_reversal(choice)


def _gen_rearrangement(rng: Rng) -> tuple:
    return (int(rng.integers(0, 12)), bool(rng.integers(2)))


def _rearranged_agrees(choice: int, exact_tail: bool) -> bool:
    fam_g = telescoping_family(exact_tail=exact_tail)
    fam = FactorFamily(fam_g.measure, fam_g.tail_log_bound, fam_g.tail_lower)
    tol = 1e-10 if exact_tail else 1e-3
    base = infinite_product(fam, tol)
    other = rearranged_product(fam, rearrangement(choice), tol)
    if base.status is not Status.CONVERGED or other.status is not Status.CONVERGED:
        return False
    slack = base.log_error_bound + other.log_error_bound
    return abs(base.value.log() - other.value.log()) <= slack + 1e-15 and abs(other.value.log() - math.log(2)) <= tol


def exp_dyadic_family() -> DoubleFactorFamily:
    """``a_ij = e**(2**-(i+j))``; the logs sum to exactly 1."""

    def side(n: int | None) -> Fraction:
        return Fraction(1) if n is None else 1 - Fraction(1, 2**n)

    def tail(n: int | None, m: int | None) -> float:
        return math.nextafter(float(1 - side(n) * side(m)), INF)

    return DoubleFactorFamily(lambda i, j: ExactExpLog(Fraction(1, 2 ** (i + j))), tail)


def double_product_routes(tol: float) -> dict[str, Any]:
    fam = exp_dyadic_family()
    return {
        "unordered": unordered_double_product(fam, tol),
        "rows_first": iterated_double_product(fam, Order.ROWS_FIRST, tol),
        "columns_first": iterated_double_product(fam, Order.COLUMNS_FIRST, tol),
        "diagonal": infinite_product(rearrange_double_to_single(fam, diagonal_pairing), tol),
        "shell_snake": infinite_product(rearrange_double_to_single(fam, shell_snake_pairing), tol),
    }


def _double_consistent(tol: float) -> bool:
    routes = double_product_routes(tol)
    return all(r.status is Status.CONVERGED and abs(r.value.log() - 1) <= tol for r in routes.values())


def _gen_epsilon(rng: Rng) -> tuple:
    den = int(rng.integers(2, 50))
    return (Fraction(int(rng.integers(1, den)), den), int(rng.integers(1, 60)))


def _epsilon_identity(eps: Fraction, n: int) -> bool:
    return telescoping_epsilon_product(eps, n) == telescoping_closed_form(eps, n)


def _identity_absorption(v: MValue) -> bool:
    if _eq(v, ONE):
        ok = all(_eq(v * one, ONE) for one in (ONE, ExactExpLog(0), 1))
    else:
        ok = all(repr(v * one) == repr(v) for one in (ONE, ExactExpLog(0), 1))
    return ok and v * INFINITY is INFINITY and INFINITY * v is INFINITY


PRODUCTS = [
    Property("partial_products_monotone", _gen_factor_family, _monotone_partials),
    Property("finite_product_order_free", _gen_factor_list, _finite_order_free),
    Property("rearrangement_invariance", _gen_rearrangement, _rearranged_agrees, max_trials=24),
    Property(
        "double_product_consistency",
        lambda rng: (float([1e-6, 1e-9, 1e-12][int(rng.integers(3))]),),
        _double_consistent,
        max_trials=3,
    ),
    Property("epsilon_telescoping_identity", _gen_epsilon, _epsilon_identity),
    Property("identity_and_absorption", lambda rng: (rand_mvalue(rng),), _identity_absorption),
]


# -- interval algebra -------------------------------------------------------


def _gen_raw(rng: Rng) -> tuple:
    k = int(rng.integers(0, 7))
    return ([rand_interval(rng, unbounded=True) for _ in range(k)],)


def _canonical(raw: list) -> bool:
    s = IntervalSet(raw)
    again = IntervalSet(s.components)
    comps = s.components
    ordered = all(
        a.hi < b.lo or (a.hi == b.lo and not (a.hi_closed or b.lo_closed)) for a, b in zip(comps, comps[1:])
    )
    ends = sorted({x for r in raw for x in (r.lo, r.hi) if 0 < x < INF})
    probes = ends + [(a + b) / 2 for a, b in zip(ends, ends[1:])] + [e / 2 for e in ends[:1]] + [e * 2 for e in ends[-1:]]
    same_points = all((p in s) == any(p in r for r in raw) for p in probes)
    return again == s and again.components == s.components and ordered and same_points


def _gen_triple(rng: Rng) -> tuple:
    return tuple(rand_set(rng, unbounded=True) for _ in range(3))


def _boolean_laws(a: IntervalSet, b: IntervalSet, c: IntervalSet) -> bool:
    return (
        a | b == b | a
        and a & b == b & a
        and (a | b) | c == a | (b | c)
        and (a & b) & c == a & (b & c)
        and a & (b | c) == (a & b) | (a & c)
        and a | (b & c) == (a | b) & (a | c)
        and ~(a | b) == ~a & ~b
        and ~(a & b) == ~a | ~b
        and a - b == a & ~b
        and ~~a == a
    )


def _length_at_least_one(iv: PosInterval) -> bool:
    return mv_compare(length(iv), ONE) >= 0


def _gen_cover_pair(rng: Rng) -> tuple:
    j1, j2 = rand_closed_interval(rng), rand_closed_interval(rng)
    comps = IntervalSet([j1, j2]).components
    host = comps[int(rng.integers(len(comps)))]
    x = host.lo + (host.hi - host.lo) * Fraction(int(rng.integers(0, 101)), 100)
    y = host.lo + (host.hi - host.lo) * Fraction(int(rng.integers(0, 101)), 100)
    return (PosInterval(min(x, y), max(x, y)), j1, j2)


def _length_subcover(i: PosInterval, j1: PosInterval, j2: PosInterval) -> bool:
    if not IntervalSet([i]).issubset(IntervalSet([j1, j2])):
        return True
    return mv_compare(length(i), length(j1) * length(j2)) <= 0


def _gen_dilation(rng: Rng) -> tuple:
    return (rand_rational(rng, 1, 50, 50), rand_set(rng, 5, unbounded=True))


def _dilation_componentwise(c: Fraction, e: IntervalSet) -> bool:
    d = dilate(c, e)
    return len(d) == len(e) and all(_eq(length(x), length(y)) for x, y in zip(d.components, e.components))


ALGEBRA = [
    Property("canonical_form", _gen_raw, _canonical),
    Property("boolean_laws", _gen_triple, _boolean_laws),
    Property("length_at_least_one", lambda rng: (rand_interval(rng, unbounded=True),), _length_at_least_one),
    Property("length_subadditive_cover", _gen_cover_pair, _length_subcover),
    Property("dilation_preserves_lengths", _gen_dilation, _dilation_componentwise),
]


# -- measure ----------------------------------------------------------------


def _interval_law(iv: PosInterval) -> bool:
    m = outer_measure(IntervalSet([iv]))
    return isinstance(m, ExactRational) and m.q == iv.hi / iv.lo


def _gen_nested(rng: Rng) -> tuple:
    big = rand_set(rng, unbounded=True)
    return (big & rand_set(rng, unbounded=True), big)


def _monotone(small: IntervalSet, big: IntervalSet) -> bool:
    return mv_compare(outer_measure(small), outer_measure(big)) <= 0


def _gen_overlapping(rng: Rng) -> tuple:
    k = int(rng.integers(1, 9))
    return ([rand_set(rng, 3, unbounded=rng.random() < 0.2) for _ in range(k)],)


def _submultiplicative(sets: list) -> bool:
    union = IntervalSet.empty().union(*sets)
    return mv_compare(mu(union), finite_product(mu(s) for s in sets)) <= 0


def _disjoint_multiplicative(sets: list) -> bool:
    union = IntervalSet.empty().union(*sets)
    return _eq(mu(union), finite_product(mu(s) for s in sets))


def _gen_bounded(rng: Rng) -> IntervalSet:
    return IntervalSet(rand_interval(rng) for _ in range(int(rng.integers(0, 5))))


def _gen_cover(rng: Rng) -> tuple:
    e = _gen_bounded(rng)
    members = []
    for comp in e.components:
        cuts = sorted({comp.lo, comp.hi} | {comp.lo + (comp.hi - comp.lo) * Fraction(int(rng.integers(1, 20)), 20) for _ in range(int(rng.integers(0, 3)))})
        if len(cuts) == 1:
            cuts = cuts * 2
        for a, b in zip(cuts, cuts[1:]):
            shrink = 1 + Fraction(int(rng.integers(0, 5)), 16)
            grow = 1 + Fraction(int(rng.integers(0, 5)), 16)
            members.append(PosInterval(a / shrink, b * grow))
    for _ in range(int(rng.integers(0, 3))):
        members.append(rand_closed_interval(rng))
    order = rng.permutation(len(members))
    return (e, [members[int(i)] for i in order])


def _cover_bounds(e: IntervalSet, members: list) -> bool:
    return mv_compare(cover_value(Cover(tuple(members), e)), outer_measure(e)) >= 0


EPSILONS = (Fraction(1, 2), Fraction(1, 10), Fraction(1, 100))


def _gen_greedy(rng: Rng) -> tuple:
    return (_gen_bounded(rng), EPSILONS[int(rng.integers(3))])


def _greedy_bound(e: IntervalSet, eps: Fraction) -> bool:
    s = greedy_cover(e, eps)
    nu = cover_value(s)
    return mv_compare(nu, ExactRational(1 + eps) * mu(e)) <= 0 and mv_compare(nu, mu(e)) >= 0


def _gen_pair(rng: Rng) -> tuple:
    return (rand_set(rng, unbounded=True), rand_set(rng, unbounded=True))


def _gen_separated(rng: Rng) -> tuple:
    e1 = _gen_bounded(rng) | IntervalSet([rand_interval(rng)])
    top = e1.components[-1].hi
    shift = top + rand_rational(rng, 1, 10, 4)
    e2 = IntervalSet(PosInterval(shift + iv.lo, shift + iv.hi, iv.lo_closed, iv.hi_closed) for iv in _gen_bounded(rng).components)
    return (e1, e2)


def _separated(e1: IntervalSet, e2: IntervalSet) -> bool:
    return separated_multiplicativity_check(e1, e2)


def _dilation_invariant(c: Fraction, e: IntervalSet) -> bool:
    return _eq(mu(dilate(c, e)), mu(e))


MEASURE = [
    Property("interval_length_law", lambda rng: (rand_closed_interval(rng),), _interval_law),
    Property("monotonicity", _gen_nested, _monotone),
    Property("submultiplicativity", _gen_overlapping, _submultiplicative),
    Property("finite_disjoint_multiplicativity", lambda rng: (rand_disjoint_family(rng),), _disjoint_multiplicative),
    Property("cover_lower_bound", _gen_cover, _cover_bounds),
    Property("greedy_cover_bound", _gen_greedy, _greedy_bound),
    Property("caratheodory", _gen_pair, caratheodory_test),
    Property("separated_multiplicativity", _gen_separated, _separated),
    Property("dilation_invariance", _gen_dilation, _dilation_invariant),
]


# -- countable families -----------------------------------------------------


def _telescoping_routes(tol: float) -> bool:
    rep = mu_countable(telescoping_family(), tol)
    cert = rep.certificate
    return (
        cert["routes_agree"]
        and cert["truncation"] <= 10_000
        and cert["product_route"]["status"] == "Converged"
        and cert["union_route"]["status"] == "Converged"
        and abs(rep.value.log() - math.log(2)) <= tol
    )


def _cantor_family(L: Fraction, k: int | None) -> bool:
    rep = mu_countable(cantor_gaps(L, k), 1e-10)
    expected = ExactExpLog(L if k is None else families.gap_log_sum(L, k))
    return rep.certificate["routes_agree"] and _eq(rep.value, expected)


def _gen_cantor(rng: Rng) -> tuple:
    return (rand_rational(rng, 1, 10, 10), None if rng.random() < 0.5 else int(rng.integers(0, 200)))


def _cantor_depths(depth: int) -> bool:
    exact = gap_depth_product(1, depth) == ExactExpLog(1 - Fraction(2, 3) ** depth)
    if depth > 10:
        return exact
    flat = finite_product(mu(cantor_gap(1, k)) for k in range(1, 2**depth))
    return exact and flat == ExactExpLog(1 - Fraction(2, 3) ** depth)


def _geometric_diverges(q: Fraction, r: Fraction, n: int) -> bool:
    fam = geometric_family(q, r)
    rep = mu_countable(fam, 1e-10)
    cert = rep.certificate
    truncated = finite_product(fam.measure(j) for j in range(1, n + 1))
    return (
        rep.value is INFINITY
        and cert["product_route"]["status"] == "DivergesToInfinity"
        and cert["union_route"]["status"] == "DivergesToInfinity"
        and truncated == ExactRational(r**n)
    )


def _gen_geometric(rng: Rng) -> tuple:
    r = 1 + rand_rational(rng, 1, 8, 4)
    return (r + rand_rational(rng, 1, 8, 4), r, int(rng.integers(1, 60)))


COUNTABLE = [
    Property("telescoping_routes", lambda rng: (float([1e-6, 1e-10][int(rng.integers(2))]),), _telescoping_routes, max_trials=2),
    Property("cantor_gap_family", _gen_cantor, _cantor_family, max_trials=20),
    Property("cantor_depth_products", lambda rng: (int(rng.integers(0, 26)),), _cantor_depths, max_trials=30),
    Property("geometric_divergence", _gen_geometric, _geometric_diverges, max_trials=10),
]


# -- lambda -----------------------------------------------------------------


def rand_finite_measure_set(rng: Rng) -> IntervalSet:
    k = int(rng.integers(1, 6))
    return IntervalSet(
        PosInterval(a, b, bool(rng.integers(2)), bool(rng.integers(2)))
        for a, b in (sorted((rand_rational(rng, 1, 2500, 50), rand_rational(rng, 1, 2500, 50))) for _ in range(k))
        if a < b
    )


def _lambda_agrees(e: IntervalSet) -> bool:
    exact = mu(e)
    approx = lambda_quadrature(e, 1e-11)
    return abs(approx / math.exp(exact.log()) - 1) <= 1e-10


LAMBDA = [Property("quadrature_oracle", lambda rng: (rand_finite_measure_set(rng),), _lambda_agrees)]


SUITES: dict[str, list[Property]] = {
    "products": PRODUCTS,
    "algebra": ALGEBRA,
    "measure": MEASURE,
    "countable": COUNTABLE,
    "lambda": LAMBDA,
}
SUITE_NAMES = (*SUITES, "all")

__all__ = ["Property", "PropertyResult", "SuiteResult", "run_property", "run_suite", "SUITES", "SUITE_NAMES"]
