from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from exprgen import expression, fuzz_input
from multmeasure import dsl
from multmeasure.dsl import (
    Call,
    EmptyLit,
    ExprDomainError,
    ExprSyntaxError,
    ExprTypeError,
    IntervalLit,
    Num,
    eval_text,
    parse,
    to_source,
    tokenize,
)
from multmeasure.families import GeneratorFamily, Kind
from multmeasure.intervals import INF, IntervalSet, PosInterval, RealIntervalSet
from multmeasure.errors import DomainError

F = Fraction


def S(*ivs) -> IntervalSet:
    return IntervalSet(ivs)


class TestLexer:
    def test_positions(self):
        toks = tokenize("union(\n  [1, 2])")
        assert [(t.kind, t.line, t.column) for t in toks[:4]] == [
            ("NAME", 1, 1),
            ("LPAREN", 1, 6),
            ("LBRACK", 2, 3),
            ("INT", 2, 4),
        ]
        assert toks[-1].kind == "EOF"

    def test_union_sugar(self):
        assert [t.kind for t in tokenize("[1,2]U∪")][-3:-1] == ["UNION", "UNION"]

    def test_bad_character(self):
        with pytest.raises(ExprSyntaxError) as info:
            tokenize("[1,2] & [3,4]")
        assert (info.value.line, info.value.column, info.value.token) == (1, 7, "&")


class TestParse:
    def test_union_of_two_leaves(self):
        tree = parse("union([1,2], (3,4])")
        assert tree == Call("union", (IntervalLit(F(1), F(2), True, True), IntervalLit(F(3), F(4), False, True)))

    def test_infix_union_is_flattened(self):
        assert parse("[1,2] U [3,4] ∪ [5,6]") == parse("union([1,2], [3,4], [5,6])")

    def test_whitespace_insignificant(self):
        assert parse(" dilate ( 3 ,\n[ 1 , 2 ] ) ") == parse("dilate(3,[1,2])")

    def test_literals(self):
        assert parse("{}") == EmptyLit() == parse("∅")
        assert parse("(0, inf)") == IntervalLit(F(0), INF, False, False)
        assert parse("dilate(3/2, [1,2])").args[0] == Num(F(3, 2))

    def test_positions_ignored_in_equality(self):
        assert parse("[1,2]") == parse("   [1,2]")

    @pytest.mark.parametrize(
        "text, line, column",
        [
            ("[1,2", 1, 5),
            ("union([1,2],)", 1, 13),
            ("[1,2] [3,4]", 1, 7),
            ("foo([1,2])", 1, 1),
            ("[1/0,2]", 1, 4),
            ("[1.5, 2]", 1, 3),
            ("", 1, 1),
            ("union(\n[1,2],\n  ]", 3, 3),
        ],
    )
    def test_syntax_errors_carry_location(self, text, line, column):
        with pytest.raises(ExprSyntaxError) as info:
            parse(text)
        assert (info.value.line, info.value.column) == (line, column)
        assert f"line {line}, column {column}" in str(info.value)

    @pytest.mark.parametrize(
        "text",
        [
            "inter(telescoping(), [1,2])",
            "exp([1,2])",
            "log(log([1,2]))",
            "union([1,2], log([1,2]))",
            "dilate([1,2], 3)",
            "complement([1,2], [3,4])",
            "telescoping(1)",
            "union()",
        ],
    )
    def test_type_errors(self, text):
        with pytest.raises(ExprTypeError):
            parse(text)

    @pytest.mark.parametrize(
        "text",
        ["[2,1]", "[0,1]", "(1,inf]", "[-1,2]", "dilate(0, [1,2])", "geometric(2,3)", "cantor_gaps(0,3)",
         "cantor_gaps(1,1/2)", "cantor_stage(1,17)", "(2,2)"],
    )
    def test_domain_errors(self, text):
        with pytest.raises(ExprDomainError) as info:
            parse(text)
        assert isinstance(info.value, DomainError)
        assert info.value.line == 1

    def test_nesting_limit(self):
        deep = "complement(" * 500 + "[1,2]" + ")" * 500
        with pytest.raises(ExprSyntaxError):
            parse(deep)

    def test_overlong_integer(self):
        with pytest.raises(ExprDomainError):
            parse("[1," + "9" * 5000 + "]")


class TestEval:
    def test_examples(self):
        assert eval_text("diff([1,4], (2,3))") == S(PosInterval(1, 2), PosInterval(3, 4))
        assert eval_text("complement((0,1))") == S(PosInterval(1, INF, True, False))
        assert eval_text("dilate(3, [1,2])") == S(PosInterval(3, 6))
        assert eval_text("exp(log([1,4]))") == S(PosInterval(1, 4))

    def test_nary_operations(self):
        assert eval_text("inter([1,10], [2,9], (3,8))") == S(PosInterval(3, 8, False, False))
        assert eval_text("union([1,2], (2,3], {})") == S(PosInterval(1, 3))

    def test_log_results(self):
        r = eval_text("cantor_stage(1, 2)")
        assert isinstance(r, RealIntervalSet) and len(r) == 4

    def test_families(self):
        fam = eval_text("cantor_gaps(1, 10)")
        assert isinstance(fam, GeneratorFamily) and fam.kind is Kind.CANTOR_GAPS and fam.size == 10
        assert eval_text("telescoping()").kind is Kind.TELESCOPING
        assert eval_text("geometric(4, 2)").kind is Kind.GEOMETRIC

    def test_non_representable_exp(self):
        with pytest.raises(ExprDomainError) as info:
            eval_text("union([1,2], exp(cantor_stage(1, 1)))")
        assert info.value.column == 14

    def test_deterministic(self):
        text = "union(dilate(7/3, [1,2] U (5,9)), complement([2,3]))"
        assert repr(eval_text(text)) == repr(eval_text(text))

    def test_describe(self):
        assert dsl.describe(eval_text("[1,2]U[3,4]")) == {"type": "IntervalSet", "value": "[1,2] U [3,4]"}


class TestRoundTrip:
    @pytest.mark.parametrize(
        "text", ["union([1,2], (3,4])", "[1,2] U (0,3) U [5,inf)", "dilate(3/2, complement({}))",
                 "exp(log([1/2,2]))", "cantor_gaps(2/3, 7)", "geometric(9/2, 3)", "telescoping()"]
    )
    def test_examples(self, text):
        tree = parse(text)
        assert parse(to_source(tree)) == tree
        assert to_source(parse(to_source(tree))) == to_source(tree)

    def test_generated(self):
        rng = np.random.default_rng(2024)
        for _ in range(300):
            tree = parse(expression(rng))
            assert parse(to_source(tree)) == tree


class TestFuzz:
    def test_no_crashes(self):
        rng = np.random.default_rng(99)
        seeds = [expression(rng) for _ in range(20)]
        for i in range(3000):
            text = fuzz_input(rng, seeds[i % len(seeds)])
            try:
                dsl.evaluate(parse(text))
            except dsl.DslError as exc:
                assert exc.line >= 1 and exc.column >= 1
