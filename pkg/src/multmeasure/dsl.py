"""Set-expression language: lexer, recursive-descent parser, checker, evaluator.

Grammar::

    expr     := term (("U" | "∪") term)*
    term     := interval | empty | call
    interval := ("[" | "(") bound "," bound ("]" | ")")
    empty    := "{}" | "∅"
    bound    := rational | "inf"
    rational := ["-"] integer ["/" integer]
    call     := name "(" [arg ("," arg)*] ")"
    arg      := rational | expr

Whitespace is insignificant. Expressions evaluate to an
:class:`~multmeasure.intervals.IntervalSet`, a log-space
:class:`~multmeasure.intervals.RealIntervalSet`, or a
:class:`~multmeasure.families.GeneratorFamily`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from . import families, intervals
from .errors import DomainError, MeasureError, NonRepresentableBound
from .intervals import INF, IntervalSet, PosInterval, RealIntervalSet

MAX_DEPTH = 100
MAX_CANTOR_STAGE = 16


class DslError(MeasureError):
    """An error tied to a position in the source text."""

    def __init__(self, message: str, line: int, column: int, token: str = ""):
        super().__init__(f"{message} at line {line}, column {column}" + (f" near {token!r}" if token else ""))
        self.message = message
        self.line = line
        self.column = column
        self.token = token

    def to_json(self) -> dict:
        return {
            "type": type(self).__name__,
            "message": self.message,
            "line": self.line,
            "column": self.column,
            "token": self.token,
        }


class ExprSyntaxError(DslError):
    pass


class ExprTypeError(DslError, TypeError):
    pass


class ExprDomainError(DslError, DomainError):
    pass


# -- lexer ------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_PUNCT = {"[": "LBRACK", "]": "RBRACK", "(": "LPAREN", ")": "RPAREN", ",": "COMMA", "/": "SLASH", "-": "MINUS"}


def tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    line, col = 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line, col = line + 1, 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, line, start_col))
            i += 1
            col += 1
        elif ch == "{" and text[i + 1 : i + 2] == "}":
            tokens.append(Token("EMPTY", "{}", line, start_col))
            i += 2
            col += 2
        elif ch == "∅":
            tokens.append(Token("EMPTY", ch, line, start_col))
            i += 1
            col += 1
        elif ch == "∪":
            tokens.append(Token("UNION", ch, line, start_col))
            i += 1
            col += 1
        elif "0" <= ch <= "9":
            j = i
            while j < n and "0" <= text[j] <= "9":
                j += 1
            tokens.append(Token("INT", text[i:j], line, start_col))
            col += j - i
            i = j
        elif ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(Token("UNION" if word == "U" else "NAME", word, line, start_col))
            col += j - i
            i = j
        else:
            raise ExprSyntaxError("unexpected character", line, start_col, ch)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# -- syntax tree ------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    line: int = field(default=0, compare=False, repr=False, kw_only=True)
    column: int = field(default=0, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Num(Node):
    value: Fraction


@dataclass(frozen=True)
class IntervalLit(Node):
    lo: Union[Fraction, float]
    hi: Union[Fraction, float]
    lo_closed: bool
    hi_closed: bool


@dataclass(frozen=True)
class EmptyLit(Node):
    pass


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple


SetExpr = Union[Num, IntervalLit, EmptyLit, Call]

NAMES = (
    "union",
    "inter",
    "diff",
    "complement",
    "dilate",
    "log",
    "exp",
    "cantor_gaps",
    "cantor_stage",
    "telescoping",
    "geometric",
)


# -- parser -----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str) -> Token:
        t = self.tok
        if t.kind != kind:
            raise ExprSyntaxError(f"expected {what}", t.line, t.column, t.text or "end of input")
        return self.advance()

    def parse(self) -> SetExpr:
        node = self.expr()
        t = self.tok
        if t.kind != "EOF":
            raise ExprSyntaxError("unexpected trailing input", t.line, t.column, t.text)
        return node

    def expr(self) -> SetExpr:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            t = self.tok
            raise ExprSyntaxError("expression nested too deeply", t.line, t.column, t.text)
        first = self.term()
        parts = [first]
        while self.tok.kind == "UNION":
            self.advance()
            parts.append(self.term())
        self.depth -= 1
        if len(parts) == 1:
            return first
        return Call("union", tuple(parts), line=first.line, column=first.column)

    def term(self) -> SetExpr:
        t = self.tok
        if t.kind in ("LBRACK", "LPAREN"):
            return self.interval()
        if t.kind == "EMPTY":
            self.advance()
            return EmptyLit(line=t.line, column=t.column)
        if t.kind == "NAME":
            return self.call()
        raise ExprSyntaxError("expected an interval, '{}' or a function call", t.line, t.column, t.text or "end of input")

    def interval(self) -> IntervalLit:
        open_tok = self.advance()
        lo = self.bound()
        self.expect("COMMA", "','")
        hi = self.bound()
        close = self.tok
        if close.kind not in ("RBRACK", "RPAREN"):
            raise ExprSyntaxError("expected ']' or ')'", close.line, close.column, close.text or "end of input")
        self.advance()
        return IntervalLit(
            lo, hi, open_tok.kind == "LBRACK", close.kind == "RBRACK", line=open_tok.line, column=open_tok.column
        )

    def bound(self) -> Union[Fraction, float]:
        t = self.tok
        if t.kind == "NAME" and t.text == "inf":
            self.advance()
            return INF
        return self.rational().value

    def rational(self) -> Num:
        start = self.tok
        sign = 1
        if start.kind == "MINUS":
            self.advance()
            sign = -1
        num_tok = self.expect("INT", "an integer")
        num = self._int(num_tok)
        den = 1
        if self.tok.kind == "SLASH":
            self.advance()
            den_tok = self.expect("INT", "a positive integer denominator")
            den = self._int(den_tok)
            if den == 0:
                raise ExprSyntaxError("denominator must be a positive integer", den_tok.line, den_tok.column, den_tok.text)
        return Num(Fraction(sign * num, den), line=start.line, column=start.column)

    @staticmethod
    def _int(t: Token) -> int:
        try:
            return int(t.text)
        except ValueError:
            raise ExprDomainError("integer literal too long", t.line, t.column, t.text[:20]) from None

    def call(self) -> Call:
        name_tok = self.advance()
        if name_tok.text not in NAMES:
            raise ExprSyntaxError("unknown function", name_tok.line, name_tok.column, name_tok.text)
        self.expect("LPAREN", "'('")
        args = []
        if self.tok.kind != "RPAREN":
            args.append(self.arg())
            while self.tok.kind == "COMMA":
                self.advance()
                args.append(self.arg())
        self.expect("RPAREN", "')'")
        return Call(name_tok.text, tuple(args), line=name_tok.line, column=name_tok.column)

    def arg(self) -> SetExpr:
        if self.tok.kind in ("INT", "MINUS"):
            return self.rational()
        return self.expr()


def parse(text: str) -> SetExpr:
    """Parse source text to a syntax tree, then type-check it."""
    node = _Parser(text).parse()
    check(node)
    return node


# -- printer ----------------------------------------------------------------


def _num_text(q: Union[Fraction, float]) -> str:
    if isinstance(q, float):
        return "inf"
    return intervals.format_rational(q)


def to_source(node: SetExpr) -> str:
    """Canonical source text; ``parse(to_source(t)) == t``."""
    if isinstance(node, Num):
        return _num_text(node.value)
    if isinstance(node, IntervalLit):
        left = "[" if node.lo_closed else "("
        right = "]" if node.hi_closed else ")"
        return f"{left}{_num_text(node.lo)},{_num_text(node.hi)}{right}"
    if isinstance(node, EmptyLit):
        return "{}"
    return f"{node.name}({', '.join(to_source(a) for a in node.args)})"


# -- type checking ----------------------------------------------------------

SET, LOGSET, FAMILY, NUMBER = "set", "logset", "family", "number"


def _type_error(node: Node, message: str) -> ExprTypeError:
    return ExprTypeError(message, node.line, node.column, getattr(node, "name", ""))


def _domain_error(node: Node, message: str) -> ExprDomainError:
    return ExprDomainError(message, node.line, node.column, getattr(node, "name", ""))


def _arity(node: Call, *counts: int) -> None:
    if len(node.args) not in counts:
        raise _type_error(node, f"{node.name} takes {' or '.join(map(str, counts))} argument(s)")


def _natural(node: Node, value: Fraction, what: str) -> int:
    if value.denominator != 1 or value < 0:
        raise _domain_error(node, f"{what} must be a nonnegative integer")
    return int(value)


def check(node: SetExpr) -> str:
    """Return the kind of value ``node`` evaluates to, or raise on misuse."""
    if isinstance(node, Num):
        return NUMBER
    if isinstance(node, EmptyLit):
        return SET
    if isinstance(node, IntervalLit):
        try:
            PosInterval(node.lo, node.hi, node.lo_closed, node.hi_closed)
        except DomainError as exc:
            raise ExprDomainError(str(exc), node.line, node.column, to_source(node)) from None
        return SET

    kinds = [check(a) for a in node.args]
    name = node.name
    if name in ("union", "inter"):
        if not kinds:
            raise _type_error(node, f"{name} needs at least one argument")
        if kinds[0] not in (SET, LOGSET) or any(k != kinds[0] for k in kinds):
            raise _type_error(node, f"{name} needs arguments that are all sets or all log-space sets")
        return kinds[0]
    if name == "diff":
        _arity(node, 2)
        if kinds[0] not in (SET, LOGSET) or kinds[1] != kinds[0]:
            raise _type_error(node, "diff needs two sets of the same kind")
        return kinds[0]
    if name == "complement":
        _arity(node, 1)
        if kinds[0] not in (SET, LOGSET):
            raise _type_error(node, "complement needs a set")
        return kinds[0]
    if name == "dilate":
        _arity(node, 2)
        if kinds != [NUMBER, SET]:
            raise _type_error(node, "dilate needs a rational factor and a set")
        if node.args[0].value <= 0:
            raise _domain_error(node, "dilation factor must be positive")
        return SET
    if name == "log":
        _arity(node, 1)
        if kinds != [SET]:
            raise _type_error(node, "log needs a set in (0, inf)")
        return LOGSET
    if name == "exp":
        _arity(node, 1)
        if kinds != [LOGSET]:
            raise _type_error(node, "exp needs a log-space set")
        return SET
    if name in ("cantor_gaps", "cantor_stage"):
        _arity(node, 2)
        if kinds != [NUMBER, NUMBER]:
            raise _type_error(node, f"{name} needs two rational arguments")
        if node.args[0].value <= 0:
            raise _domain_error(node, "L must be positive")
        n = _natural(node, node.args[1].value, "second argument")
        if name == "cantor_stage":
            if n > MAX_CANTOR_STAGE:
                raise _domain_error(node, f"stage is limited to {MAX_CANTOR_STAGE}")
            return LOGSET
        return FAMILY
    if name == "telescoping":
        _arity(node, 0)
        return FAMILY
    if name == "geometric":
        _arity(node, 2)
        if kinds != [NUMBER, NUMBER]:
            raise _type_error(node, "geometric needs two rational arguments")
        q, r = node.args[0].value, node.args[1].value
        if not 1 < r < q:
            raise _domain_error(node, "geometric(q, r) needs 1 < r < q")
        return FAMILY
    raise _type_error(node, "unknown function")


# -- evaluation -------------------------------------------------------------


def evaluate(node: SetExpr) -> Any:
    """Evaluate a checked tree exactly; results are normalized."""
    try:
        return _eval(node)
    except DslError:
        raise
    except (DomainError, NonRepresentableBound) as exc:
        raise ExprDomainError(str(exc), node.line, node.column, getattr(node, "name", "")) from None


def _eval(node: SetExpr) -> Any:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, EmptyLit):
        return IntervalSet.empty()
    if isinstance(node, IntervalLit):
        return IntervalSet([PosInterval(node.lo, node.hi, node.lo_closed, node.hi_closed)])
    try:
        args = [_eval(a) for a in node.args]
        return _apply(node.name, args)
    except DslError:
        raise
    except (DomainError, NonRepresentableBound) as exc:
        raise ExprDomainError(str(exc), node.line, node.column, node.name) from None


def _apply(name: str, args: list) -> Any:
    if name == "union":
        return args[0].union(*args[1:])
    if name == "inter":
        out = args[0]
        for a in args[1:]:
            out = out.intersect(a)
        return out
    if name == "diff":
        return args[0].difference(args[1])
    if name == "complement":
        return args[0].complement()
    if name == "dilate":
        return intervals.dilate(args[0], args[1])
    if name == "log":
        return intervals.log_transform(args[0])
    if name == "exp":
        return intervals.exp_transform(args[0])
    if name == "cantor_gaps":
        return families.cantor_gaps(args[0], int(args[1]))
    if name == "cantor_stage":
        return families.cantor_stage(args[0], int(args[1]))
    if name == "telescoping":
        return families.telescoping_family()
    if name == "geometric":
        return families.geometric_family(args[0], args[1])
    raise AssertionError(name)


def eval_text(text: str) -> Any:
    return evaluate(parse(text))


def describe(value: Any) -> dict:
    """JSON-ready description of an evaluation result."""
    if isinstance(value, RealIntervalSet):
        return {"type": "RealIntervalSet", "value": value.to_text(ascii_only=True)}
    if isinstance(value, IntervalSet):
        return {"type": "IntervalSet", "value": value.to_text(ascii_only=True)}
    return {"type": "GeneratorFamily", "kind": value.kind.value, "value": value.describe()}
