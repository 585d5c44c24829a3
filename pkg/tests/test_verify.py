from __future__ import annotations

import numpy as np
import pytest

from multmeasure.intervals import IntervalSet, PosInterval
from multmeasure.measure import mu
from multmeasure.mvalue import ExactRational, mv_compare
from multmeasure.verify import (
    SUITES,
    Property,
    block_reversal,
    double_product_routes,
    dyadic_reversal,
    minimize,
    pair_swap,
    rand_set,
    run_property,
    run_suite,
)


def _is_bijection(sigma, n: int) -> bool:
    return sorted(sigma(k) for k in range(1, n + 1)) == list(range(1, n + 1))


class TestRearrangements:
    @pytest.mark.parametrize(
        "sigma, n", [(pair_swap, 64), (block_reversal(3), 48), (block_reversal(8), 64), (dyadic_reversal, 63)]
    )
    def test_bijection_on_blocks(self, sigma, n):
        assert _is_bijection(sigma, n)


class TestRunner:
    def test_same_seed_same_cases(self):
        a = [rand_set(np.random.default_rng([5, 1])) for _ in range(3)]
        b = [rand_set(np.random.default_rng([5, 1])) for _ in range(3)]
        assert a == b

    def test_failure_is_minimized(self):
        # Claims the measure is at most 2, which fails once a set has a long component.
        def gen(rng):
            return (rand_set(rng, max_parts=4),)

        def holds(e):
            return mv_compare(mu(e), ExactRational(2)) <= 0

        res = run_property(Property("too_small", gen, holds), 200, 1, 0)
        assert not res.passed
        (text,) = res.counterexample
        assert " U " not in text
        assert res.to_json()["counterexample"] == [text]

    def test_crash_is_reported(self):
        def boom(_):
            raise ValueError("bad")

        res = run_property(Property("crash", lambda rng: (1,), boom), 5, 0, 0)
        assert not res.passed and res.error == "ValueError: bad"

    def test_minimize_keeps_failing_case(self):
        e = IntervalSet([PosInterval(1, 2), PosInterval(10, 40)])
        (small,) = minimize((e,), lambda s: len(s) == 0, lambda c: iter(()))
        assert small == e

    def test_unknown_suite(self):
        with pytest.raises(KeyError):
            run_suite("nope", 1, 0)


class TestSuites:
    @pytest.mark.parametrize("suite", list(SUITES))
    def test_suite_passes(self, suite):
        res = run_suite(suite, 10, 11)
        assert res.passed, res.to_json()

    def test_double_product_routes(self):
        routes = double_product_routes(1e-12)
        assert set(routes) == {"unordered", "rows_first", "columns_first", "diagonal", "shell_snake"}
        for r in routes.values():
            assert abs(r.value.log() - 1) <= 1e-12
