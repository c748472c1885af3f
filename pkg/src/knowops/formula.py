"""A small language for events built with ``K``, complement and set operations.

Grammar, loosest binding first::

    assertion := "empty" "(" expr ")" | "nonempty" "(" expr ")"
               | "disjoint" "(" expr "," expr ")"
               | expr ( "<=" | "!<=" | "==" | "<" ) expr
    expr      := conj ( "|" conj )*
    conj      := diff ( "&" diff )*
    diff      := unary ( "\\" unary )*
    unary     := ( "K" | "K0" ... "K9" | "~" ) unary | atom
    atom      := NAME | "Omega" | "Empty" | "{" [ label ( "," label )* ] "}"
               | "(" expr ")"

Complement and ``K`` bind tightest and nest to the right, so ``K ~K E`` is
``K(~(K E))`` and ``K E | ~F \\ E`` is ``(K E) | ((~F) \\ E)``. Binary
operators associate to the left. Unicode ``¬ ∪ ∩ ⊆ Ω ∅`` are accepted as
aliases.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Union

from .errors import LexError, ParseError, SpaceMismatch, UnboundName, UnknownStage
from .events import Event, StateSpace, Verdict, event_from_names, relate
from .operator import KnowledgeOperator

# -- AST -------------------------------------------------------------------------


@dataclass(frozen=True)
class EventName:
    name: str


@dataclass(frozen=True)
class OmegaLit:
    pass


@dataclass(frozen=True)
class EmptyLit:
    pass


@dataclass(frozen=True)
class EventLit:
    labels: tuple[str, ...]


@dataclass(frozen=True)
class Know:
    child: Expr
    stage: int | None = None


@dataclass(frozen=True)
class Not:
    child: Expr


@dataclass(frozen=True)
class Diff:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class And:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Or:
    left: Expr
    right: Expr


Expr = Union[EventName, OmegaLit, EmptyLit, EventLit, Know, Not, Diff, And, Or]


class Rel(str, Enum):
    SUBSETEQ = "subseteq"
    NOT_SUBSETEQ = "not_subseteq"
    EQUALS = "equals"
    PROPER_SUBSET = "proper_subset"
    DISJOINT = "disjoint"
    EMPTY = "empty"
    NONEMPTY = "nonempty"

    @property
    def arity(self) -> int:
        return 1 if self in (Rel.EMPTY, Rel.NONEMPTY) else 2


@dataclass(frozen=True)
class Assertion:
    relation: Rel
    operands: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.operands) != self.relation.arity:
            raise ValueError(
                f"{self.relation.value} takes {self.relation.arity} operand(s), "
                f"got {len(self.operands)}"
            )


# -- lexer -----------------------------------------------------------------------


class Token(NamedTuple):
    kind: str
    value: object
    pos: int


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KNOW = re.compile(r"K([0-9])?")
_SYMBOLS = [
    ("!<=", "NSUB"),
    ("<=", "SUB"),
    ("==", "EQ"),
    ("<", "PSUB"),
    ("⊆", "SUB"),
    ("⊄", "NSUB"),
    ("~", "NOT"),
    ("¬", "NOT"),
    ("\\", "DIFF"),
    ("&", "AND"),
    ("∩", "AND"),
    ("|", "OR"),
    ("∪", "OR"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    (",", "COMMA"),
    ("Ω", "OMEGA"),
    ("∅", "EMPTY"),
]
FUNCTIONS = ("empty", "nonempty", "disjoint")
RESERVED = frozenset({"Omega", "Empty", "K", *(f"K{i}" for i in range(10)), *FUNCTIONS})


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "{":
            close = text.find("}", pos)
            if close < 0:
                raise LexError(text, pos, "unterminated event literal")
            body = text[pos + 1:close]
            if "{" in body:
                raise LexError(text, pos + 1 + body.index("{"), "nested brace")
            labels = tuple(part.strip() for part in body.split(",")) if body.strip() else ()
            if any(not label for label in labels):
                raise LexError(text, pos, "empty label in event literal")
            tokens.append(Token("LIT", labels, pos))
            pos = close + 1
            continue
        for sym, kind in _SYMBOLS:
            if text.startswith(sym, pos):
                tokens.append(Token(kind, sym, pos))
                pos += len(sym)
                break
        else:
            m = _IDENT.match(text, pos)
            if not m:
                raise LexError(text, pos)
            word = m.group()
            k = _KNOW.fullmatch(word)
            if k:
                stage = None if k.group(1) is None else int(k.group(1))
                tokens.append(Token("KNOW", stage, pos))
            elif word == "Omega":
                tokens.append(Token("OMEGA", word, pos))
            elif word == "Empty":
                tokens.append(Token("EMPTY", word, pos))
            else:
                tokens.append(Token("NAME", word, pos))
            pos = m.end()
    tokens.append(Token("END", None, len(text)))
    return tokens


# -- parser ------------------------------------------------------------------------

_RELATIONS = {"SUB": Rel.SUBSETEQ, "NSUB": Rel.NOT_SUBSETEQ, "EQ": Rel.EQUALS, "PSUB": Rel.PROPER_SUBSET}
_ATOM_START = ("an event name", "Omega", "Empty", "{...}", "(", "K", "~")


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected) -> ParseError:
        tok = self.tok
        found = "" if tok.kind == "END" else str(tok.value if tok.kind != "LIT" else "{...}")
        return ParseError(tok.pos, expected, found)

    def take(self, kind: str, expected: str) -> Token:
        tok = self.tok
        if tok.kind != kind:
            raise self.fail([expected])
        self.i += 1
        return tok

    def expr(self) -> Expr:
        node = self.conj()
        while self.tok.kind == "OR":
            self.i += 1
            node = Or(node, self.conj())
        return node

    def conj(self) -> Expr:
        node = self.diff()
        while self.tok.kind == "AND":
            self.i += 1
            node = And(node, self.diff())
        return node

    def diff(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "DIFF":
            self.i += 1
            node = Diff(node, self.unary())
        return node

    def unary(self) -> Expr:
        tok = self.tok
        if tok.kind == "KNOW":
            self.i += 1
            return Know(self.unary(), tok.value)
        if tok.kind == "NOT":
            self.i += 1
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "NAME":
            if tok.value in FUNCTIONS:
                raise self.fail(_ATOM_START)
            self.i += 1
            return EventName(tok.value)
        if tok.kind == "OMEGA":
            self.i += 1
            return OmegaLit()
        if tok.kind == "EMPTY":
            self.i += 1
            return EmptyLit()
        if tok.kind == "LIT":
            self.i += 1
            return EventLit(tok.value) if tok.value else EmptyLit()
        if tok.kind == "LPAREN":
            self.i += 1
            node = self.expr()
            self.take("RPAREN", ")")
            return node
        raise self.fail(_ATOM_START)

    def assertion(self) -> Assertion:
        tok = self.tok
        if tok.kind == "NAME" and tok.value in FUNCTIONS:
            rel = Rel(tok.value)
            self.i += 1
            self.take("LPAREN", "(")
            operands = [self.expr()]
            if rel is Rel.DISJOINT:
                self.take("COMMA", ",")
                operands.append(self.expr())
            self.take("RPAREN", ")")
            return Assertion(rel, tuple(operands))
        left = self.expr()
        rel = _RELATIONS.get(self.tok.kind)
        if rel is None:
            raise self.fail(["<=", "!<=", "==", "<", "|", "&", "\\"])
        self.i += 1
        return Assertion(rel, (left, self.expr()))

    def finish(self, node):
        if self.tok.kind != "END":
            raise self.fail(["end of input", "|", "&", "\\"])
        return node


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    return p.finish(p.expr())


def parse_assertion(text: str) -> Assertion:
    p = _Parser(text)
    return p.finish(p.assertion())


# -- printer -------------------------------------------------------------------------

_PREC = {Or: 1, And: 2, Diff: 3, Know: 4, Not: 4}
_BINOP = {Or: "|", And: "&", Diff: "\\"}
_RELOP = {Rel.SUBSETEQ: "<=", Rel.NOT_SUBSETEQ: "!<=", Rel.EQUALS: "==", Rel.PROPER_SUBSET: "<"}


def _prec(node: Expr) -> int:
    return _PREC.get(type(node), 5)


def format_expr(node: Expr) -> str:
    """Render with the fewest parentheses that parse back to ``node``."""
    if isinstance(node, EventName):
        return node.name
    if isinstance(node, OmegaLit):
        return "Omega"
    if isinstance(node, EmptyLit):
        return "{}"
    if isinstance(node, EventLit):
        return "{" + ",".join(node.labels) + "}"
    if isinstance(node, (Know, Not)):
        inner = format_expr(node.child)
        if _prec(node.child) < 4:
            inner = f"({inner})"
        if isinstance(node, Not):
            return "~" + inner
        return ("K " if node.stage is None else f"K{node.stage} ") + inner
    prec = _prec(node)
    left, right = format_expr(node.left), format_expr(node.right)
    if _prec(node.left) < prec:
        left = f"({left})"
    if _prec(node.right) <= prec:
        right = f"({right})"
    return f"{left} {_BINOP[type(node)]} {right}"


def format_assertion(a: Assertion) -> str:
    if a.relation in _RELOP:
        left, right = (format_expr(x) for x in a.operands)
        return f"{left} {_RELOP[a.relation]} {right}"
    return f"{a.relation.value}({', '.join(format_expr(x) for x in a.operands)})"


def format(node: Expr | Assertion) -> str:  # noqa: A001
    if isinstance(node, Assertion):
        return format_assertion(node)
    return format_expr(node)


# -- models and evaluation ------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Model:
    """A state space with named events and one operator per stage tag.

    Stage ``None`` is the bare ``K``; stages ``0``..``9`` are ``K0``..``K9``.
    ``assertions`` are formula strings carried along from a model file.
    """

    space: StateSpace
    events: dict[str, Event] = field(default_factory=dict)
    operators: dict[int | None, KnowledgeOperator] = field(default_factory=dict)
    assertions: tuple[str, ...] = ()

    def __post_init__(self):
        for name, event in self.events.items():
            if not isinstance(name, str) or not _NAME.match(name):
                raise ValueError(f"event name {name!r} is not an identifier")
            if name in RESERVED:
                raise ValueError(f"event name {name!r} is reserved")
            if event.space != self.space:
                raise SpaceMismatch(f"event {name!r} belongs to another state space")
        for stage, k in self.operators.items():
            if stage is not None and (not isinstance(stage, int) or not 0 <= stage <= 9):
                raise ValueError(f"stage tag must be None or 0..9, got {stage!r}")
            if k.space != self.space:
                raise SpaceMismatch(f"operator for stage {stage!r} belongs to another space")

    def operator(self, stage: int | None = None) -> KnowledgeOperator:
        if stage in self.operators:
            return self.operators[stage]
        if stage is None and len(self.operators) == 1:
            return next(iter(self.operators.values()))
        raise UnknownStage(stage)


def eval_expr(node: Expr, model: Model) -> Event:
    space = model.space
    if isinstance(node, EventName):
        try:
            return model.events[node.name]
        except KeyError:
            raise UnboundName(node.name) from None
    if isinstance(node, OmegaLit):
        return space.omega
    if isinstance(node, EmptyLit):
        return space.empty
    if isinstance(node, EventLit):
        return event_from_names(space, node.labels)
    if isinstance(node, Know):
        k = model.operator(node.stage)
        return Event(space, k.table[eval_expr(node.child, model).mask])
    if isinstance(node, Not):
        return ~eval_expr(node.child, model)
    left, right = eval_expr(node.left, model), eval_expr(node.right, model)
    if isinstance(node, Diff):
        return left - right
    if isinstance(node, And):
        return left & right
    return left | right


class AssertionResult(NamedTuple):
    holds: bool
    witness: str | None
    values: tuple[Event, ...]


def eval_assertion(a: Assertion, model: Model) -> AssertionResult:
    """Decide an assertion; ``witness`` names a state showing a failure when one exists."""
    values = tuple(eval_expr(x, model) for x in a.operands)
    rel = a.relation
    if rel is Rel.EMPTY:
        v = relate(values[0], model.space.empty, "subseteq")
    elif rel is Rel.NONEMPTY:
        v = Verdict(bool(values[0]))
    elif rel is Rel.NOT_SUBSETEQ:
        v = Verdict(not relate(*values, "subseteq").holds)
    else:
        v = relate(*values, rel.value)
    return AssertionResult(v.holds, v.witness, values)
