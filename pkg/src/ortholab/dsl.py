"""A small term language for lattice identities, and a checker for them.

Grammar (ASCII, with unicode aliases):

    statement := term ("=" | "<=") term
    term      := or
    or        := and ("|" and)*
    and       := unary ("&" unary)*
    unary     := "!" unary | atom
    atom      := variable | "0" | "1" | "(" term ")"

``!`` binds tighter than ``&``, which binds tighter than ``|``; the binary
connectives associate to the left.  The same statement can be checked
against two kinds of structure: the subspace lattice, where ``&``/``|``/``!``
mean meet/span/orthocomplement, or an algebra of subsets of a finite
universe, where they mean the ordinary set operations.  The first reading
has counterexamples to distributivity; the second cannot.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass

from .lattice import (
    GAUSSIAN_RATIONAL,
    Subspace,
    join as subspace_join,
    leq as subspace_leq,
    meet as subspace_meet,
    ortho as subspace_ortho,
    random_subspace,
    subspace_to_json,
    substream,
)

__all__ = [
    "Term",
    "Var",
    "Top",
    "Bottom",
    "Not",
    "And",
    "Or",
    "Relation",
    "IdentityStatement",
    "IdentitySyntaxError",
    "parse_term",
    "parse_statement",
    "parse_statement_lines",
    "format_term",
    "format_statement",
    "collect_variables",
    "SubspaceLattice",
    "BooleanSetAlgebra",
    "eval_term",
    "UnboundVariableError",
    "Counterexample",
    "CheckReport",
    "check",
]

_VAR_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __post_init__(self):
        if not _VAR_RE.fullmatch(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")


@dataclass(frozen=True)
class Top(Term):
    pass


@dataclass(frozen=True)
class Bottom(Term):
    pass


@dataclass(frozen=True)
class Not(Term):
    child: Term


@dataclass(frozen=True)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Or(Term):
    left: Term
    right: Term


class Relation(enum.Enum):
    EQUAL = "="
    LEQ = "<="


@dataclass(frozen=True)
class IdentityStatement:
    lhs: Term
    rhs: Term
    relation: Relation


class IdentitySyntaxError(ValueError):
    """Lexer or parser failure; ``position`` is the 1-based column."""

    def __init__(self, message: str, position: int, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message} at position {position}")
        self.message = message
        self.position = position
        self.line = line


# ---------------------------------------------------------------------------
# Lexer and parser.
# ---------------------------------------------------------------------------

_SINGLE_CHAR_TOKENS = {
    "&": "AND",
    "∧": "AND",  # logical and sign
    "|": "OR",
    "∨": "OR",  # logical or sign
    "!": "NOT",
    "¬": "NOT",  # negation sign
    "(": "LPAREN",
    ")": "RPAREN",
    "=": "EQ",
    "≤": "LEQ",  # less-or-equal sign
    "0": "BOTTOM",
    "1": "TOP",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int  # 1-based column


def _tokenize(text: str) -> list:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        pos = i + 1
        if text.startswith("<=", i):
            tokens.append(_Token("LEQ", "<=", pos))
            i += 2
            continue
        if ch in _SINGLE_CHAR_TOKENS:
            tokens.append(_Token(_SINGLE_CHAR_TOKENS[ch], ch, pos))
            i += 1
            continue
        m = _VAR_RE.match(text, i)
        if m:
            tokens.append(_Token("VAR", m.group(), pos))
            i = m.end()
            continue
        raise IdentitySyntaxError(f"unexpected character {ch!r}", pos)
    tokens.append(_Token("EOF", "", n + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise IdentitySyntaxError(f"expected {expected}, found {found!r}", tok.position)
        return self.advance()

    def statement(self) -> IdentityStatement:
        lhs = self.term()
        tok = self.peek()
        if tok.kind == "EQ":
            relation = Relation.EQUAL
        elif tok.kind == "LEQ":
            relation = Relation.LEQ
        else:
            found = tok.text or "end of input"
            raise IdentitySyntaxError(f"expected '=' or '<=', found {found!r}", tok.position)
        self.advance()
        rhs = self.term()
        self.expect("EOF", "end of input")
        return IdentityStatement(lhs, rhs, relation)

    def term(self) -> Term:
        node = self.and_term()
        while self.peek().kind == "OR":
            self.advance()
            node = Or(node, self.and_term())
        return node

    def and_term(self) -> Term:
        node = self.unary()
        while self.peek().kind == "AND":
            self.advance()
            node = And(node, self.unary())
        return node

    def unary(self) -> Term:
        tok = self.peek()
        if tok.kind == "NOT":
            self.advance()
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "VAR":
            self.advance()
            return Var(tok.text)
        if tok.kind == "TOP":
            self.advance()
            return Top()
        if tok.kind == "BOTTOM":
            self.advance()
            return Bottom()
        if tok.kind == "LPAREN":
            self.advance()
            node = self.term()
            self.expect("RPAREN", "')'")
            return node
        found = tok.text or "end of input"
        raise IdentitySyntaxError(
            f"expected a variable, '0', '1', '!' or '(', found {found!r}", tok.position
        )


def parse_term(text: str) -> Term:
    parser = _Parser(text)
    node = parser.term()
    parser.expect("EOF", "end of input")
    return node


def parse_statement(text: str) -> IdentityStatement:
    return _Parser(text).statement()


def parse_statement_lines(text: str) -> list:
    """Parse a statements file: one statement per line, ``#`` comments allowed."""
    statements = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            statements.append(parse_statement(line))
        except IdentitySyntaxError as err:
            raise IdentitySyntaxError(err.message, err.position, line=lineno) from None
    return statements


# Printer: minimal parentheses, inverse of the parser on ASTs.

_PREC_OR = 1
_PREC_AND = 2
_PREC_NOT = 3
_PREC_ATOM = 4


def _fmt(term: Term, min_prec: int) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Top):
        return "1"
    if isinstance(term, Bottom):
        return "0"
    if isinstance(term, Not):
        text = "!" + _fmt(term.child, _PREC_NOT)
        prec = _PREC_NOT
    elif isinstance(term, And):
        text = f"{_fmt(term.left, _PREC_AND)} & {_fmt(term.right, _PREC_AND + 1)}"
        prec = _PREC_AND
    elif isinstance(term, Or):
        text = f"{_fmt(term.left, _PREC_OR)} | {_fmt(term.right, _PREC_OR + 1)}"
        prec = _PREC_OR
    else:
        raise TypeError(f"not a term node: {term!r}")
    return f"({text})" if prec < min_prec else text


def format_term(term: Term) -> str:
    return _fmt(term, 0)


def format_statement(stmt: IdentityStatement) -> str:
    return f"{format_term(stmt.lhs)} {stmt.relation.value} {format_term(stmt.rhs)}"


def collect_variables(term: Term) -> set:
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, Not):
        return collect_variables(term.child)
    if isinstance(term, (And, Or)):
        return collect_variables(term.left) | collect_variables(term.right)
    return set()


# ---------------------------------------------------------------------------
# Structures the connectives are interpreted over.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubspaceLattice:
    """Closed subspaces with meet/span/orthocomplement; not distributive."""

    space_dim: int
    field: str = GAUSSIAN_RATIONAL

    def __post_init__(self):
        if self.space_dim < 1:
            raise ValueError("space_dim must be >= 1")

    def top(self):
        return Subspace.full(self.space_dim)

    def bottom(self):
        return Subspace.zero(self.space_dim)

    def meet(self, a, b):
        return subspace_meet(a, b)

    def join(self, a, b):
        return subspace_join(a, b)

    def complement(self, a):
        return subspace_ortho(a)

    def leq(self, a, b):
        return subspace_leq(a, b)

    def equal(self, a, b):
        return a == b

    def random_element(self, rng):
        return random_subspace(rng, self.space_dim, self.field)

    def describe(self, element) -> dict:
        return subspace_to_json(element)


@dataclass(frozen=True)
class BooleanSetAlgebra:
    """All subsets of a finite universe with the standard set operations."""

    universe_size: int

    def __post_init__(self):
        if self.universe_size < 1:
            raise ValueError("universe_size must be >= 1")

    def top(self):
        return frozenset(range(self.universe_size))

    def bottom(self):
        return frozenset()

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def complement(self, a):
        return self.top() - a

    def leq(self, a, b):
        return a <= b

    def equal(self, a, b):
        return a == b

    def elements(self):
        # fixed enumeration order: subset k has member i iff bit i of k is set
        for bits in range(1 << self.universe_size):
            yield frozenset(i for i in range(self.universe_size) if bits >> i & 1)

    def random_element(self, rng):
        bits = rng.randrange(1 << self.universe_size)
        return frozenset(i for i in range(self.universe_size) if bits >> i & 1)

    def describe(self, element) -> list:
        return sorted(element)


class UnboundVariableError(KeyError):
    pass


def eval_term(term: Term, assignment: dict, structure):
    """Value of a term under an assignment, in the given structure."""
    if isinstance(term, Var):
        try:
            return assignment[term.name]
        except KeyError:
            raise UnboundVariableError(f"unbound variable {term.name!r}") from None
    if isinstance(term, Top):
        return structure.top()
    if isinstance(term, Bottom):
        return structure.bottom()
    if isinstance(term, Not):
        return structure.complement(eval_term(term.child, assignment, structure))
    if isinstance(term, And):
        return structure.meet(
            eval_term(term.left, assignment, structure),
            eval_term(term.right, assignment, structure),
        )
    if isinstance(term, Or):
        return structure.join(
            eval_term(term.left, assignment, structure),
            eval_term(term.right, assignment, structure),
        )
    raise TypeError(f"not a term node: {term!r}")


def _relation_holds(stmt: IdentityStatement, structure, assignment) -> bool:
    lhs = eval_term(stmt.lhs, assignment, structure)
    rhs = eval_term(stmt.rhs, assignment, structure)
    if stmt.relation is Relation.EQUAL:
        return structure.equal(lhs, rhs)
    return structure.leq(lhs, rhs)


# ---------------------------------------------------------------------------
# The checker.
# ---------------------------------------------------------------------------

_EXHAUSTIVE_LIMIT = 1 << 16


@dataclass(frozen=True)
class Counterexample:
    trial: int
    assignment: dict
    lhs: object
    rhs: object


@dataclass(frozen=True)
class CheckReport:
    statement: str
    structure: object
    mode: str  # "exhaustive" or "random"
    trials: int  # assignments examined
    counterexample: Counterexample | None

    @property
    def holds(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        if isinstance(self.structure, SubspaceLattice):
            structure = {
                "kind": "subspace",
                "space_dim": self.structure.space_dim,
                "field": self.structure.field,
            }
        else:
            structure = {"kind": "boolean", "universe_size": self.structure.universe_size}
        out = {
            "statement": self.statement,
            "structure": structure,
            "mode": self.mode,
            "trials": self.trials,
            "verdict": (
                f"no counterexample ({self.mode}, {self.trials} assignments)"
                if self.holds
                else "counterexample"
            ),
        }
        if self.counterexample is not None:
            cx = self.counterexample
            out["counterexample"] = {
                "trial": cx.trial,
                "assignment": {
                    name: self.structure.describe(value)
                    for name, value in sorted(cx.assignment.items())
                },
                "lhs": self.structure.describe(cx.lhs),
                "rhs": self.structure.describe(cx.rhs),
            }
        return out


def check(stmt: IdentityStatement, structure, trials: int = 1000, seed=0) -> CheckReport:
    """Look for an assignment falsifying the statement.

    Small Boolean structures are checked exhaustively (the assignment space
    is enumerated in a fixed order); everything else draws seeded random
    assignments, one substream per trial, and reports the lowest-index
    counterexample.  Reports are self-verifying: the recorded assignment
    re-evaluates to the recorded sides.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    names = sorted(collect_variables(stmt.lhs) | collect_variables(stmt.rhs))
    text = format_statement(stmt)

    exhaustive = False
    if isinstance(structure, BooleanSetAlgebra):
        total = (1 << structure.universe_size) ** len(names)
        exhaustive = total <= _EXHAUSTIVE_LIMIT
    if not names:
        exhaustive = True

    if exhaustive:
        if isinstance(structure, BooleanSetAlgebra):
            pools = [structure.elements() for _ in names]
        else:
            pools = []
        count = 0
        for trial, values in enumerate(itertools.product(*pools)):
            assignment = dict(zip(names, values))
            count += 1
            if not _relation_holds(stmt, structure, assignment):
                return CheckReport(
                    text,
                    structure,
                    "exhaustive",
                    count,
                    _make_counterexample(stmt, structure, trial, assignment),
                )
        return CheckReport(text, structure, "exhaustive", count, None)

    for trial in range(trials):
        rng = substream(seed, trial)
        assignment = {name: structure.random_element(rng) for name in names}
        if not _relation_holds(stmt, structure, assignment):
            return CheckReport(
                text,
                structure,
                "random",
                trial + 1,
                _make_counterexample(stmt, structure, trial, assignment),
            )
    return CheckReport(text, structure, "random", trials, None)


def _make_counterexample(stmt, structure, trial, assignment) -> Counterexample:
    return Counterexample(
        trial=trial,
        assignment=dict(assignment),
        lhs=eval_term(stmt.lhs, assignment, structure),
        rhs=eval_term(stmt.rhs, assignment, structure),
    )
