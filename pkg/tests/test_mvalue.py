from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multmeasure._exactexp import compare_rational_exp, exp_enclosure
from multmeasure.errors import EpsilonOutOfRange, FactorBelowOne, InvalidPermutation
from multmeasure.mvalue import (
    INFINITY,
    ONE,
    DoubleFactorFamily,
    ExactExpLog,
    ExactRational,
    FactorFamily,
    LogFloat,
    Order,
    ProductResult,
    Status,
    diagonal_pairing,
    finite_product,
    format_mvalue,
    infinite_product,
    iterated_double_product,
    mv_compare,
    mv_mul,
    mv_pow,
    parse_mvalue,
    partial_products,
    rearrange_double_to_single,
    rearranged_product,
    shell_snake_pairing,
    telescoping_closed_form,
    telescoping_epsilon_product,
    unordered_double_product,
)


def telescoping(j: int) -> Fraction:
    return Fraction((j + 1) ** 2, j * (j + 2))


def telescoping_tail(n: int) -> float:
    # prod_{j>n} a_j = (n+2)/(n+1); the float is nudged up past rounding.
    return math.nextafter(math.log1p(1 / (n + 1)), math.inf)


rationals_ge1 = st.fractions(min_value=1, max_value=50, max_denominator=40)
exponents = st.fractions(min_value=0, max_value=20, max_denominator=40)
mvalues = st.one_of(
    rationals_ge1.map(ExactRational),
    exponents.map(ExactExpLog),
    st.floats(0, 30).map(LogFloat),
    st.just(INFINITY),
)


class TestRepresentations:
    def test_values_below_one_rejected(self):
        with pytest.raises(FactorBelowOne):
            ExactRational(Fraction(1, 2))
        with pytest.raises(FactorBelowOne):
            ExactExpLog(Fraction(-1, 3))
        with pytest.raises(FactorBelowOne):
            LogFloat(-0.5)
        with pytest.raises(FactorBelowOne):
            LogFloat(math.nan)

    def test_identities_compare_equal(self):
        assert ExactRational(1) == ExactExpLog(0) == LogFloat(0.0) == ONE

    def test_infinity_is_a_singleton(self):
        import pickle

        assert pickle.loads(pickle.dumps(INFINITY)) is INFINITY
        assert not INFINITY.is_finite

    def test_float_conversion(self):
        assert float(ExactRational(Fraction(5, 2))) == 2.5
        assert float(INFINITY) == math.inf
        assert float(LogFloat(800.0)) == math.inf


class TestMultiplication:
    def test_rationals_stay_rational(self):
        assert repr(mv_mul(ExactRational(2), ExactRational(3))) == repr(ExactRational(6))

    def test_exponents_add(self):
        half = ExactExpLog(Fraction(1, 2))
        assert repr(half * half) == repr(ExactExpLog(1))

    def test_mixed_exact_degrades_to_logfloat(self):
        v = ExactRational(2) * ExactExpLog(1)
        assert isinstance(v, LogFloat)
        assert v.log() == pytest.approx(math.log(2) + 1, rel=1e-15)

    def test_exact_identity_keeps_other_operand(self):
        assert repr(ExactExpLog(Fraction(1, 3)) * ONE) == repr(ExactExpLog(Fraction(1, 3)))
        assert repr(ExactRational(2) * ExactExpLog(0)) == repr(ExactRational(2))

    @given(mvalues)
    def test_infinity_absorbs(self, v):
        assert v * INFINITY is INFINITY
        assert INFINITY * v is INFINITY

    @given(mvalues, mvalues)
    def test_product_stays_in_domain(self, a, b):
        assert mv_compare(a * b, a) >= 0 and mv_compare(a * b, b) >= 0

    def test_powers(self):
        assert repr(mv_pow(ExactRational(3), 4)) == repr(ExactRational(81))
        assert repr(mv_pow(ExactExpLog(Fraction(1, 3)), 6)) == repr(ExactExpLog(2))
        assert mv_pow(INFINITY, 0) == ONE
        with pytest.raises(FactorBelowOne):
            mv_pow(ExactRational(2), -1)


class TestComparison:
    def test_three_exceeds_e(self):
        assert mv_compare(ExactRational(3), ExactExpLog(1)) == 1
        assert mv_compare(ExactExpLog(1), ExactRational(3)) == -1

    def test_identity_and_infinity(self):
        assert mv_compare(ExactRational(1), LogFloat(0.0)) == 0
        assert mv_compare(ExactExpLog(2), INFINITY) == -1
        assert mv_compare(INFINITY, INFINITY) == 0

    def test_close_rational_bracket_of_e(self):
        # Consecutive continued-fraction convergents of e straddle it.
        assert mv_compare(ExactRational(Fraction(2721, 1001)), ExactExpLog(1)) == -1
        assert mv_compare(ExactRational(Fraction(1457, 536)), ExactExpLog(1)) == 1

    @given(rationals_ge1, exponents)
    @settings(max_examples=200)
    def test_exact_order_matches_float_when_far_apart(self, q, r):
        gap = math.log(q) - float(r)
        if abs(gap) > 1e-9:
            assert compare_rational_exp(q, r) == (1 if gap > 0 else -1)

    @given(st.fractions(min_value=0, max_value=30, max_denominator=100), st.integers(8, 200))
    def test_enclosure_brackets_exp(self, x, bits):
        lo, hi = exp_enclosure(x, bits)
        assert lo <= hi
        # float(x) carries a relative error that exp amplifies by about x.
        slack = 8 * (1 + float(x)) * 2.0**-52
        assert float(lo) <= math.exp(float(x)) * (1 + slack)
        assert float(hi) >= math.exp(float(x)) * (1 - slack)

    def test_rich_comparisons_with_numbers(self):
        assert ExactRational(2) < 3
        assert ExactExpLog(1) > 2
        assert (ExactRational(2) == "2") is False


class TestFiniteProduct:
    def test_empty_is_identity(self):
        assert repr(finite_product([])) == repr(ExactRational(1))

    def test_telescoping_rationals(self):
        assert repr(finite_product([2, Fraction(3, 2), Fraction(4, 3)])) == repr(ExactRational(4))

    def test_exponents(self):
        assert repr(finite_product([ExactExpLog(Fraction(1, 4))] * 4)) == repr(ExactExpLog(1))

    def test_factor_below_one(self):
        with pytest.raises(FactorBelowOne):
            finite_product([2, Fraction(1, 2)])

    @given(st.lists(mvalues.filter(lambda v: v is not INFINITY), max_size=12), st.randoms())
    def test_order_free_bit_identical(self, vals, rnd):
        shuffled = list(vals)
        rnd.shuffle(shuffled)
        assert repr(finite_product(vals)) == repr(finite_product(shuffled))


class TestSerialization:
    @pytest.mark.parametrize(
        "value, text",
        [
            (ExactRational(4), "4/1"),
            (ExactExpLog(Fraction(2, 3)), "exp(2/3)"),
            (INFINITY, "inf"),
        ],
    )
    def test_round_trip(self, value, text):
        assert format_mvalue(value) == text
        assert repr(parse_mvalue(text)) == repr(value)

    def test_float_and_log_domain(self):
        assert format_mvalue(ExactRational(4), as_float=True) == "4.0"
        assert format_mvalue(ExactExpLog(Fraction(1, 3)), log_domain=True) == "1/3"
        assert format_mvalue(ExactRational(2), log_domain=True) == "log(2/1)"


class TestProductResult:
    def test_invariants(self):
        with pytest.raises(ValueError):
            ProductResult(INFINITY, Status.CONVERGED, 1, 0.0)
        with pytest.raises(ValueError):
            ProductResult(ONE, Status.CONVERGED, 1)
        with pytest.raises(ValueError):
            ProductResult(ONE, Status.DIVERGES_TO_INFINITY, 1)


class TestInfiniteProduct:
    def test_telescoping_with_tail_bound(self):
        res = infinite_product(FactorFamily(telescoping, telescoping_tail), 1e-3)
        assert res.status is Status.CONVERGED
        assert res.log_error_bound < 1e-3
        assert abs(res.value.log() - math.log(2)) <= 1e-3
        # The partial product telescopes to 2(N+1)/(N+2).
        n = res.terms_used
        assert repr(res.value) == repr(ExactRational(Fraction(2 * (n + 1), n + 2)))

    def test_tail_lower_enclosure(self):
        fam = FactorFamily(telescoping, telescoping_tail, lambda n: Fraction(n + 2, n + 1))
        res = infinite_product(fam, 1e-10)
        assert res.status is Status.CONVERGED
        assert repr(res.value) == repr(ExactRational(2))

    def test_constant_two_diverges(self):
        res = infinite_product(FactorFamily(lambda j: 2), 1e-10)
        assert res.status is Status.DIVERGES_TO_INFINITY
        assert res.value is INFINITY

    def test_identity_factors_converge(self):
        res = infinite_product(FactorFamily(lambda j: 1), 1e-10)
        assert res.status is Status.CONVERGED
        assert res.value == ONE

    def test_geometric_heuristic(self):
        res = infinite_product(FactorFamily(lambda j: ExactExpLog(Fraction(1, 2**j))), 1e-9)
        assert res.status is Status.CONVERGED
        assert abs(res.value.log() - 1) <= res.log_error_bound

    def test_harmonic_logs_are_undetermined(self):
        # log a_j = 1/j**2 converges, but the ratio test never certifies it.
        res = infinite_product(FactorFamily(lambda j: LogFloat(1 / j**2)), 1e-6, max_terms=2000)
        assert res.status is Status.UNDETERMINED

    def test_factor_below_one_detected(self):
        with pytest.raises(FactorBelowOne):
            infinite_product(FactorFamily(lambda j: Fraction(1, 2) if j == 3 else 2), 1e-3)

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ValueError):
            infinite_product(FactorFamily(lambda j: 1), 0.0)

    @given(st.fractions(min_value=0, max_value=10, max_denominator=10))
    def test_partial_products_monotone(self, c):
        ps = partial_products(FactorFamily(lambda j: 1 + c / j), 30)
        assert all(mv_compare(a, b) <= 0 for a, b in zip(ps, ps[1:]))


class TestRearrangement:
    def test_pair_swap(self):
        fam = FactorFamily(telescoping, telescoping_tail)
        sigma = lambda k: k + 1 if k % 2 else k - 1  # noqa: E731
        res = rearranged_product(fam, sigma, 1e-3)
        assert res.status is Status.CONVERGED
        assert abs(res.value.log() - math.log(2)) <= 1e-3

    def test_identity_matches_plain_evaluation(self):
        fam = FactorFamily(telescoping, telescoping_tail)
        assert rearranged_product(fam, lambda k: k, 1e-3) == infinite_product(fam, 1e-3)

    def test_finite_support_swap(self):
        fam = FactorFamily(lambda j: [2, 3][j - 1] if j <= 2 else 1)
        a = infinite_product(fam, 1e-9)
        b = rearranged_product(fam, [2, 1], 1e-9)
        assert repr(a.value) == repr(b.value) == repr(ExactRational(6))

    def test_non_injective_rule_rejected(self):
        fam = FactorFamily(telescoping, telescoping_tail)
        with pytest.raises(InvalidPermutation):
            rearranged_product(fam, lambda k: 1, 1e-3)

    def test_finite_list_must_be_a_permutation(self):
        with pytest.raises(InvalidPermutation):
            rearranged_product(FactorFamily(lambda j: 1), [1, 1], 1e-3)


def exp_dyadic() -> DoubleFactorFamily:
    def side(n):
        return Fraction(1) if n is None else 1 - Fraction(1, 2**n)

    return DoubleFactorFamily(
        lambda i, j: ExactExpLog(Fraction(1, 2 ** (i + j))),
        lambda n, m: math.nextafter(float(1 - side(n) * side(m)), math.inf),
    )


class TestDoubleProducts:
    def test_unordered_exp_dyadic(self):
        res = unordered_double_product(exp_dyadic(), 1e-12)
        assert res.status is Status.CONVERGED
        assert isinstance(res.value, ExactExpLog)
        assert abs(res.value.log() - 1) <= 1e-12

    def test_unordered_divergent(self):
        res = unordered_double_product(DoubleFactorFamily(lambda i, j: 1 + Fraction(1, i * j)), 1e-6)
        assert res.status is Status.DIVERGES_TO_INFINITY

    def test_unordered_constant_one(self):
        res = unordered_double_product(DoubleFactorFamily(lambda i, j: 1), 1e-6)
        assert res.status is Status.CONVERGED and res.value == ONE

    @pytest.mark.parametrize("order", list(Order))
    def test_iterated_orders(self, order):
        res = iterated_double_product(exp_dyadic(), order, 1e-12)
        assert res.status is Status.CONVERGED
        assert abs(res.value.log() - 1) <= 1e-12

    @pytest.mark.parametrize("order", list(Order))
    def test_iterated_single_row(self, order):
        def tail(n, m):
            # Only row 1 carries mass.
            if n == 0:
                return telescoping_tail(0)
            return 0.0 if m is None else telescoping_tail(m)

        fam = DoubleFactorFamily(lambda i, j: telescoping(j) if i == 1 else 1, tail)
        res = iterated_double_product(fam, order, 1e-3)
        assert res.status is Status.CONVERGED
        assert abs(res.value.log() - math.log(2)) <= 1e-3

    @pytest.mark.parametrize("pairing", [diagonal_pairing, shell_snake_pairing])
    def test_single_rearrangement(self, pairing):
        res = infinite_product(rearrange_double_to_single(exp_dyadic(), pairing), 1e-12)
        assert res.status is Status.CONVERGED
        assert abs(res.value.log() - 1) <= 1e-12

    def test_constant_one_any_pairing(self):
        fam = rearrange_double_to_single(DoubleFactorFamily(lambda i, j: 1), diagonal_pairing)
        assert infinite_product(fam, 1e-6).value == ONE

    @pytest.mark.parametrize("pairing", [diagonal_pairing, shell_snake_pairing])
    def test_pairings_are_bijective_on_prefix(self, pairing):
        pairs = [pairing(k) for k in range(1, 20 * 20 + 1)]
        assert len(set(pairs)) == len(pairs)
        assert all(i >= 1 and j >= 1 for i, j in pairs)
        with pytest.raises(InvalidPermutation):
            pairing(0)

    def test_shell_snake_fills_squares(self):
        for n in range(1, 12):
            assert {shell_snake_pairing(k) for k in range(1, n * n + 1)} == {
                (i, j) for i in range(1, n + 1) for j in range(1, n + 1)
            }


class TestEpsilonTelescoping:
    def test_examples(self):
        assert telescoping_epsilon_product(Fraction(1, 2), 3) == Fraction(24, 17)
        assert telescoping_epsilon_product(Fraction(1, 2), 1) == Fraction(6, 5)

    @given(st.fractions(min_value=0, max_value=1, max_denominator=60).filter(lambda e: 0 < e < 1), st.integers(1, 50))
    def test_closed_form(self, eps, n):
        assert telescoping_epsilon_product(eps, n) == telescoping_closed_form(eps, n)

    def test_limit_is_one_plus_epsilon(self):
        eps = Fraction(1, 3)
        assert abs(float(telescoping_closed_form(eps, 200)) - float(1 + eps)) < 1e-15

    @pytest.mark.parametrize("eps", [0, 1, Fraction(3, 2), -1])
    def test_out_of_range(self, eps):
        with pytest.raises(EpsilonOutOfRange):
            telescoping_epsilon_product(eps, 3)
