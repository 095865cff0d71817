"""Syntax of the logic of teams: formulas, labels, labelled formulas.

Formulas are built from external Boolean connectives (bot, !, |, &),
internal pointwise connectives (ibot, i!, i|, i&) and a family of derived
connectives (top, itop, nb, down, up, dia, box, ->, ~, o*) that are kept
as first-class AST nodes so they can be evaluated both natively and via
expansion.  Labels are classical propositional formulas over atoms p0,
p1, ...; a labelled formula pairs a label with a formula.

Concrete ASCII grammar (precedence high to low, parentheses always allowed):

    atoms:        bot  ibot  top  itop  nb  P<digits>
    unary:        !  i!  ~  box  dia  down  up           (prefix, tightest)
    conjunction:  &  i&                                   (left-assoc)
    disjunction:  |  i|  o*                               (left-assoc)
    implication:  ->                                      (right-assoc, loosest)

Mixing different operators of one precedence level ("P0 & P1 i& P2")
requires parentheses.  Labels use F (falsum), p<digits>, !, & and | with
the same conventions.  A labelled formula is "<label> : <formula>"; the
equality sugar "a = b" stands for (a <-> b) : itop with a <-> b spelled
(a | !b) & (!a | b).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .errors import ParseError


# ---------------------------------------------------------------------------
# AST types


class Formula:
    """Base class for formula nodes."""

    __slots__ = ()


class DerivedTag(Enum):
    EXT_TOP = "top"
    INT_TOP = "itop"
    NB = "nb"
    DOWN = "down"
    UP = "up"
    DIAMOND = "dia"
    BOX = "box"
    IMPLIES = "->"
    STRICT_NOT = "~"
    CIRCLE_STAR = "o*"


ARITY = {
    DerivedTag.EXT_TOP: 0,
    DerivedTag.INT_TOP: 0,
    DerivedTag.NB: 0,
    DerivedTag.DOWN: 1,
    DerivedTag.UP: 1,
    DerivedTag.DIAMOND: 1,
    DerivedTag.BOX: 1,
    DerivedTag.STRICT_NOT: 1,
    DerivedTag.IMPLIES: 2,
    DerivedTag.CIRCLE_STAR: 2,
}


@dataclass(frozen=True)
class ExtBot(Formula):
    pass


@dataclass(frozen=True)
class IntBot(Formula):
    pass


@dataclass(frozen=True)
class Var(Formula):
    index: int


@dataclass(frozen=True)
class ExtNot(Formula):
    child: Formula


@dataclass(frozen=True)
class IntNot(Formula):
    child: Formula


@dataclass(frozen=True)
class ExtOr(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ExtAnd(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class IntOr(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class IntAnd(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Derived(Formula):
    tag: DerivedTag
    args: tuple[Formula, ...] = ()

    def __post_init__(self):
        if len(self.args) != ARITY[self.tag]:
            raise ValueError(
                f"derived connective {self.tag.value} takes {ARITY[self.tag]} "
                f"argument(s), got {len(self.args)}"
            )


class Label:
    """Base class for label nodes (classical propositional formulas)."""

    __slots__ = ()


@dataclass(frozen=True)
class LBot(Label):
    pass


@dataclass(frozen=True)
class LAtom(Label):
    index: int


@dataclass(frozen=True)
class LNot(Label):
    child: Label


@dataclass(frozen=True)
class LOr(Label):
    left: Label
    right: Label


@dataclass(frozen=True)
class LAnd(Label):
    left: Label
    right: Label


@dataclass(frozen=True)
class LabelledFormula:
    label: Label
    formula: Formula


# Core spellings of the derived constants.
TOP_CORE = ExtNot(ExtBot())
NB_CORE = ExtNot(IntBot())
ITOP_CORE = IntNot(IntBot())


def equality_label(a: Label, b: Label) -> Label:
    """The label a <-> b, spelled (a | !b) & (!a | b)."""
    return LAnd(LOr(a, LNot(b)), LOr(LNot(a), b))


def equality(a: Label, b: Label) -> LabelledFormula:
    """The labelled formula a = b, i.e. (a <-> b) : itop in core syntax."""
    return LabelledFormula(equality_label(a, b), ITOP_CORE)


# ---------------------------------------------------------------------------
# Structural helpers


def free_vars(formula: Formula) -> frozenset[int]:
    """Indices of the propositional variables occurring in the formula."""
    out: set[int] = set()
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, Var):
            out.add(f.index)
        elif isinstance(f, (ExtNot, IntNot)):
            stack.append(f.child)
        elif isinstance(f, (ExtOr, ExtAnd, IntOr, IntAnd)):
            stack.append(f.left)
            stack.append(f.right)
        elif isinstance(f, Derived):
            stack.extend(f.args)
    return frozenset(out)


def label_atoms(label: Label) -> frozenset[int]:
    """Indices of the atomic labels occurring in the label."""
    out: set[int] = set()
    stack = [label]
    while stack:
        a = stack.pop()
        if isinstance(a, LAtom):
            out.add(a.index)
        elif isinstance(a, LNot):
            stack.append(a.child)
        elif isinstance(a, (LOr, LAnd)):
            stack.append(a.left)
            stack.append(a.right)
    return frozenset(out)


def is_core(formula: Formula) -> bool:
    """True iff the formula contains no derived connectives."""
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, Derived):
            return False
        if isinstance(f, (ExtNot, IntNot)):
            stack.append(f.child)
        elif isinstance(f, (ExtOr, ExtAnd, IntOr, IntAnd)):
            stack.append(f.left)
            stack.append(f.right)
    return True


def expand(formula: Formula) -> Formula:
    """Rewrite every derived connective to core syntax.  Idempotent.

    top = !bot, nb = !ibot, itop = i!ibot, down x = x i& top,
    up x = x i| top, dia x = up(down x), box x = !dia !x,
    x -> y = !x | y, ~x = !up(down x & nb),
    x o* y = (x & nb) i| (y & nb).
    """
    if isinstance(f := formula, (ExtBot, IntBot, Var)):
        return f
    if isinstance(f, ExtNot):
        return ExtNot(expand(f.child))
    if isinstance(f, IntNot):
        return IntNot(expand(f.child))
    if isinstance(f, ExtOr):
        return ExtOr(expand(f.left), expand(f.right))
    if isinstance(f, ExtAnd):
        return ExtAnd(expand(f.left), expand(f.right))
    if isinstance(f, IntOr):
        return IntOr(expand(f.left), expand(f.right))
    if isinstance(f, IntAnd):
        return IntAnd(expand(f.left), expand(f.right))
    assert isinstance(f, Derived)
    tag = f.tag
    args = tuple(expand(a) for a in f.args)
    if tag is DerivedTag.EXT_TOP:
        return TOP_CORE
    if tag is DerivedTag.NB:
        return NB_CORE
    if tag is DerivedTag.INT_TOP:
        return ITOP_CORE
    if tag is DerivedTag.DOWN:
        return IntAnd(args[0], TOP_CORE)
    if tag is DerivedTag.UP:
        return IntOr(args[0], TOP_CORE)
    if tag is DerivedTag.DIAMOND:
        return IntOr(IntAnd(args[0], TOP_CORE), TOP_CORE)
    if tag is DerivedTag.BOX:
        return ExtNot(IntOr(IntAnd(ExtNot(args[0]), TOP_CORE), TOP_CORE))
    if tag is DerivedTag.IMPLIES:
        return ExtOr(ExtNot(args[0]), args[1])
    if tag is DerivedTag.STRICT_NOT:
        return ExtNot(IntOr(ExtAnd(IntAnd(args[0], TOP_CORE), NB_CORE), TOP_CORE))
    assert tag is DerivedTag.CIRCLE_STAR
    return IntOr(ExtAnd(args[0], NB_CORE), ExtAnd(args[1], NB_CORE))


def substitute(formula: Formula, mapping: Mapping[int, Formula]) -> Formula:
    """Homomorphic replacement of variables; unmapped variables are unchanged."""
    if isinstance(f := formula, Var):
        return mapping.get(f.index, f)
    if isinstance(f, (ExtBot, IntBot)):
        return f
    if isinstance(f, ExtNot):
        return ExtNot(substitute(f.child, mapping))
    if isinstance(f, IntNot):
        return IntNot(substitute(f.child, mapping))
    if isinstance(f, ExtOr):
        return ExtOr(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, ExtAnd):
        return ExtAnd(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, IntOr):
        return IntOr(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, IntAnd):
        return IntAnd(substitute(f.left, mapping), substitute(f.right, mapping))
    assert isinstance(f, Derived)
    return Derived(f.tag, tuple(substitute(a, mapping) for a in f.args))


# ---------------------------------------------------------------------------
# Lexer

_KEYWORDS = {"bot", "ibot", "top", "itop", "nb", "box", "dia", "down", "up"}

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<arrow>->)
      | (?P<turnstile>\|-)
      | (?P<ibang>i!)
      | (?P<iamp>i&)
      | (?P<ipipe>i\|)
      | (?P<ostar>o\*)
      | (?P<name>[A-Za-z]+[0-9]*)
      | (?P<bang>!)
      | (?P<amp>&)
      | (?P<pipe>\|)
      | (?P<tilde>~)
      | (?P<lpar>\()
      | (?P<rpar>\))
      | (?P<comma>,)
      | (?P<colon>:)
      | (?P<equals>=)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        word = m.group()
        if kind == "name":
            if word in _KEYWORDS:
                kind = word
            elif word == "F":
                kind = "F"
            elif re.fullmatch(r"P[0-9]+", word):
                kind = "var"
            elif re.fullmatch(r"p[0-9]+", word):
                kind = "latom"
            else:
                raise ParseError(f"unknown word {word!r}", pos)
        if kind != "ws":
            tokens.append(_Token(kind, word, pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# Parser (recursive descent; one level holds operators of equal precedence
# and a chain must use a single operator, otherwise parentheses are required)

_CONJ_OPS = {"amp": ExtAnd, "iamp": IntAnd}
_DISJ_OPS = {"pipe": ExtOr, "ipipe": IntOr, "ostar": None}  # o* builds Derived
_FORMULA_ATOM_EXPECT = ("bot", "ibot", "top", "itop", "nb", "P<digits>", "'('")
_LABEL_ATOM_EXPECT = ("F", "p<digits>", "'('")


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, description: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"got {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
                tok.pos,
                (description,),
            )
        return self.next()

    # -- formulas

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek().kind == "arrow":
            self.next()
            right = self.formula()
            return Derived(DerivedTag.IMPLIES, (left, right))
        return left

    def disj(self) -> Formula:
        left = self.conj()
        kind = self.peek().kind
        if kind not in _DISJ_OPS:
            return left
        while self.peek().kind == kind:
            self.next()
            right = self.conj()
            if kind == "ostar":
                left = Derived(DerivedTag.CIRCLE_STAR, (left, right))
            else:
                left = _DISJ_OPS[kind](left, right)
        nxt = self.peek()
        if nxt.kind in _DISJ_OPS:
            raise ParseError(
                f"mixing {nxt.text!r} with a different disjunction-level operator "
                "requires parentheses",
                nxt.pos,
                (self.tokens[self.i - 2].text,),
            )
        return left

    def conj(self) -> Formula:
        left = self.unary()
        kind = self.peek().kind
        if kind not in _CONJ_OPS:
            return left
        while self.peek().kind == kind:
            self.next()
            left = _CONJ_OPS[kind](left, self.unary())
        nxt = self.peek()
        if nxt.kind in _CONJ_OPS:
            raise ParseError(
                f"mixing {nxt.text!r} with a different conjunction-level operator "
                "requires parentheses",
                nxt.pos,
                (self.tokens[self.i - 2].text,),
            )
        return left

    def unary(self) -> Formula:
        kind = self.peek().kind
        if kind == "bang":
            self.next()
            return ExtNot(self.unary())
        if kind == "ibang":
            self.next()
            return IntNot(self.unary())
        if kind == "tilde":
            self.next()
            return Derived(DerivedTag.STRICT_NOT, (self.unary(),))
        if kind in ("box", "dia", "down", "up"):
            self.next()
            tag = DerivedTag(kind)
            return Derived(tag, (self.unary(),))
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "bot":
            self.next()
            return ExtBot()
        if tok.kind == "ibot":
            self.next()
            return IntBot()
        if tok.kind == "top":
            self.next()
            return Derived(DerivedTag.EXT_TOP)
        if tok.kind == "itop":
            self.next()
            return Derived(DerivedTag.INT_TOP)
        if tok.kind == "nb":
            self.next()
            return Derived(DerivedTag.NB)
        if tok.kind == "var":
            self.next()
            return Var(int(tok.text[1:]))
        if tok.kind == "lpar":
            self.next()
            inner = self.formula()
            self.expect("rpar", "')'")
            return inner
        raise ParseError(
            f"got {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
            tok.pos,
            _FORMULA_ATOM_EXPECT,
        )

    # -- labels

    def label(self) -> Label:
        left = self.label_conj()
        while self.peek().kind == "pipe":
            self.next()
            left = LOr(left, self.label_conj())
        return left

    def label_conj(self) -> Label:
        left = self.label_unary()
        while self.peek().kind == "amp":
            self.next()
            left = LAnd(left, self.label_unary())
        return left

    def label_unary(self) -> Label:
        tok = self.peek()
        if tok.kind == "bang":
            self.next()
            return LNot(self.label_unary())
        if tok.kind == "F":
            self.next()
            return LBot()
        if tok.kind == "latom":
            self.next()
            return LAtom(int(tok.text[1:]))
        if tok.kind == "lpar":
            self.next()
            inner = self.label()
            self.expect("rpar", "')'")
            return inner
        raise ParseError(
            f"got {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
            tok.pos,
            _LABEL_ATOM_EXPECT,
        )

    # -- labelled formulas and queries

    def labelled(self) -> LabelledFormula:
        label = self.label()
        tok = self.peek()
        if tok.kind == "colon":
            self.next()
            return LabelledFormula(label, self.formula())
        if tok.kind == "equals":
            self.next()
            return equality(label, self.label())
        raise ParseError(
            f"got {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
            tok.pos,
            ("':'", "'='"),
        )

    def eof(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"trailing input {tok.text!r}", tok.pos, ("end of input",))


def parse_formula(text: str) -> Formula:
    p = _Parser(_tokenize(text))
    f = p.formula()
    p.eof()
    return f


def parse_label(text: str) -> Label:
    p = _Parser(_tokenize(text))
    a = p.label()
    p.eof()
    return a


def parse_labelled(text: str) -> LabelledFormula:
    p = _Parser(_tokenize(text))
    lf = p.labelled()
    p.eof()
    return lf


def parse_entailment_query(text: str) -> tuple[tuple[Formula, ...], Formula]:
    """Parse "phi1, phi2 |- psi" (premises may be empty: "|- psi")."""
    p = _Parser(_tokenize(text))
    premises: list[Formula] = []
    if p.peek().kind != "turnstile":
        premises.append(p.formula())
        while p.peek().kind == "comma":
            p.next()
            premises.append(p.formula())
    p.expect("turnstile", "'|-'")
    conclusion = p.formula()
    p.eof()
    return tuple(premises), conclusion


def parse_labelled_query(text: str) -> tuple[tuple[LabelledFormula, ...], LabelledFormula]:
    """Parse "a1:phi1, a2:phi2 |- b:psi" (premises may be empty)."""
    p = _Parser(_tokenize(text))
    premises: list[LabelledFormula] = []
    if p.peek().kind != "turnstile":
        premises.append(p.labelled())
        while p.peek().kind == "comma":
            p.next()
            premises.append(p.labelled())
    p.expect("turnstile", "'|-'")
    conclusion = p.labelled()
    p.eof()
    return tuple(premises), conclusion


# ---------------------------------------------------------------------------
# Printer.  Binary subformulas are parenthesised except along the
# associativity direction of the same operator, so mixed-level chains are
# always unambiguous and re-parse to the identical tree.

_BIN_OPS: dict[type, str] = {ExtAnd: "&", IntAnd: "i&", ExtOr: "|", IntOr: "i|"}


def _binop_symbol(f: Formula) -> str | None:
    sym = _BIN_OPS.get(type(f))
    if sym is not None:
        return sym
    if isinstance(f, Derived):
        if f.tag is DerivedTag.IMPLIES:
            return "->"
        if f.tag is DerivedTag.CIRCLE_STAR:
            return "o*"
    return None


def format_formula(f: Formula) -> str:
    if isinstance(f, ExtBot):
        return "bot"
    if isinstance(f, IntBot):
        return "ibot"
    if isinstance(f, Var):
        return f"P{f.index}"
    if isinstance(f, ExtNot):
        return "!" + _operand(f.child)
    if isinstance(f, IntNot):
        return "i!" + _operand(f.child)
    sym = _binop_symbol(f)
    if sym is not None:
        if isinstance(f, Derived):
            left, right = f.args
        else:
            left, right = f.left, f.right  # type: ignore[attr-defined]
        assoc_side = right if sym == "->" else left
        other_side = left if sym == "->" else right
        assoc = _wrap(assoc_side, unless_op=sym)
        other = _wrap(other_side, unless_op=None)
        if sym == "->":
            return f"{other} {sym} {assoc}"
        return f"{assoc} {sym} {other}"
    assert isinstance(f, Derived)
    if ARITY[f.tag] == 0:
        return f.tag.value
    if f.tag is DerivedTag.STRICT_NOT:
        return "~" + _operand(f.args[0])
    return f.tag.value + " " + _operand(f.args[0])


def _wrap(f: Formula, unless_op: str | None) -> str:
    sym = _binop_symbol(f)
    text = format_formula(f)
    if sym is not None and sym != unless_op:
        return f"({text})"
    return text


def _operand(f: Formula) -> str:
    text = format_formula(f)
    if _binop_symbol(f) is not None:
        return f"({text})"
    return text


def format_label(a: Label) -> str:
    if isinstance(a, LBot):
        return "F"
    if isinstance(a, LAtom):
        return f"p{a.index}"
    if isinstance(a, LNot):
        inner = format_label(a.child)
        if isinstance(a.child, (LOr, LAnd)):
            return f"!({inner})"
        return "!" + inner
    if isinstance(a, LAnd):
        left = format_label(a.left)
        if isinstance(a.left, LOr):
            left = f"({left})"
        right = format_label(a.right)
        if isinstance(a.right, (LOr, LAnd)):
            right = f"({right})"
        return f"{left} & {right}"
    assert isinstance(a, LOr)
    left = format_label(a.left)
    if isinstance(a.left, LAnd):
        left = f"({left})"
    right = format_label(a.right)
    if isinstance(a.right, (LOr, LAnd)):
        right = f"({right})"
    return f"{left} | {right}"


def format_labelled(lf: LabelledFormula) -> str:
    return f"{format_label(lf.label)} : {format_formula(lf.formula)}"
