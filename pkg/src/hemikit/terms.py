"""Terms over {/\\, \\/, ->, ~, <->, ->n, 0, 1, c} and (quasi-)equations.

Grammar, tightest binding first::

    atom    := var | 0 | 1 | c | '(' term ')'
    unary   := '~' unary | atom
    meet    := unary ('/\\' unary)*
    join    := meet ('\\/' meet)*
    imp     := join ('->' imp)?                 right associative
    term    := imp (('<->' | '->n') imp)?        non-associative

``/\\`` and ``\\/`` associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional, Union

import numpy as np

from .algebra import CheckReport, Failure, FiniteAlgebra, report
from .errors import MissingCenter, MissingNegation, TermSyntaxError, UnboundVariable

# ----------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    kind: str  # "0", "1" or "c"


@dataclass(frozen=True)
class Neg:
    arg: "Term"


@dataclass(frozen=True)
class Bin:
    op: str  # "meet", "join", "imp", "iff", "impN"
    left: "Term"
    right: "Term"


Term = Union[Var, Const, Neg, Bin]

ZERO, ONE, CENTER = Const("0"), Const("1"), Const("c")

_SYMBOL = {"meet": "/\\", "join": "\\/", "imp": "->", "iff": "<->", "impN": "->n"}
_LEVEL = {"iff": 0, "impN": 0, "imp": 1, "join": 2, "meet": 3}


def meet(a, b):
    return Bin("meet", a, b)


def join(a, b):
    return Bin("join", a, b)


def imp(a, b):
    return Bin("imp", a, b)


def neg(a):
    return Neg(a)


def variables(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, Neg):
        return variables(t.arg)
    return variables(t.left) | variables(t.right)


def uses(t: Term, what: str) -> bool:
    """Whether ``t`` mentions ``~`` (what="neg") or the constant ``c``."""
    if isinstance(t, Var):
        return False
    if isinstance(t, Const):
        return what == "c" and t.kind == "c"
    if isinstance(t, Neg):
        return what == "neg" or uses(t.arg, what)
    return uses(t.left, what) or uses(t.right, what)


def desugar(t: Term) -> Term:
    """Expand ``<->`` and ``->n`` into the core signature."""
    if isinstance(t, (Var, Const)):
        return t
    if isinstance(t, Neg):
        return Neg(desugar(t.arg))
    left, right = desugar(t.left), desugar(t.right)
    if t.op == "iff":
        return meet(imp(left, right), imp(right, left))
    if t.op == "impN":
        return imp(left, meet(left, right))
    return Bin(t.op, left, right)


def to_text(t: Term, level: int = 0) -> str:
    """Print ``t`` in the parser's syntax with the minimum of parentheses."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.kind
    if isinstance(t, Neg):
        return "~" + to_text(t.arg, 4)
    mine = _LEVEL[t.op]
    sym = _SYMBOL[t.op]
    if t.op in ("meet", "join"):
        text = f"{to_text(t.left, mine)} {sym} {to_text(t.right, mine + 1)}"
    elif t.op == "imp":
        text = f"{to_text(t.left, mine + 1)} {sym} {to_text(t.right, mine)}"
    else:
        text = f"{to_text(t.left, mine + 1)} {sym} {to_text(t.right, mine + 1)}"
    return f"({text})" if mine < level else text


# ----------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->n(?![a-zA-Z0-9_])|->|/\\|\\/|~|\(|\)|==>|<=|=|&)
  | (?P<var>[a-z][a-zA-Z0-9_]*)
  | (?P<const>[01])
""", re.VERBOSE)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos]!r} at {pos}",
                                  pos, {"term"})
        if m.lastgroup != "ws":
            value = m.group()
            kind = m.lastgroup
            if kind == "var" and value == "c":
                kind = "const"
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, value, pos = self.peek
        found = "end of input" if kind == "end" else repr(value)
        raise TermSyntaxError(
            f"at position {pos}: expected one of {sorted(expected)}, found {found}",
            pos, expected)

    def accept(self, value):
        if self.peek[0] == "op" and self.peek[1] == value:
            self.i += 1
            return True
        return False

    def term(self):
        left = self.imp()
        for value, op in (("<->", "iff"), ("->n", "impN")):
            if self.accept(value):
                right = self.imp()
                if self.peek[1] in ("<->", "->n"):
                    self.fail({")", "end"})
                return Bin(op, left, right)
        return left

    def imp(self):
        left = self.join()
        if self.accept("->"):
            return Bin("imp", left, self.imp())
        return left

    def join(self):
        left = self.meet()
        while self.accept("\\/"):
            left = Bin("join", left, self.meet())
        return left

    def meet(self):
        left = self.unary()
        while self.accept("/\\"):
            left = Bin("meet", left, self.unary())
        return left

    def unary(self):
        if self.accept("~"):
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        kind, value, _ = self.peek
        if kind == "var":
            self.take()
            return Var(value)
        if kind == "const":
            self.take()
            return Const(value)
        if self.accept("("):
            inner = self.term()
            if not self.accept(")"):
                self.fail({")"})
            return inner
        self.fail({"variable", "0", "1", "c", "(", "~"})

    def finish(self):
        if self.peek[0] != "end":
            self.fail({"end", "/\\", "\\/", "->", "<->", "->n"})


def parse(text: str) -> Term:
    """Parse a term.  Equations are not terms: ``"x -> y = 1"`` is rejected."""
    p = _Parser(text)
    t = p.term()
    p.finish()
    return t


# ----------------------------------------------------------------------
# sentences


@dataclass(frozen=True)
class Sentence:
    """``kind`` is "eq", "le" or "quasi".

    For "eq"/"le", ``lhs``/``rhs`` hold the two sides.  A quasi-equation has
    ``premises`` and ``conclusions``, tuples of (lhs, rhs) equations; the
    conclusions are read as a conjunction.
    """

    name: str
    kind: str
    lhs: Optional[Term] = None
    rhs: Optional[Term] = None
    premises: tuple = ()
    conclusions: tuple = ()

    def equations(self) -> list:
        """The sentence as a list of plain (lhs, rhs) equations to test."""
        if self.kind == "eq":
            return [(self.lhs, self.rhs)]
        if self.kind == "le":
            return [(self.lhs, meet(self.lhs, self.rhs))]
        return list(self.conclusions)

    def terms(self) -> Iterator[Term]:
        if self.kind in ("eq", "le"):
            yield self.lhs
            yield self.rhs
        else:
            for l, r in self.premises + self.conclusions:
                yield l
                yield r

    def variables(self) -> list:
        out = set()
        for t in self.terms():
            out |= variables(t)
        return sorted(out)

    def uses(self, what) -> bool:
        return any(uses(t, what) for t in self.terms())

    def as_equation(self) -> "Sentence":
        """An inequation ``l <= r`` rewritten as ``l = l /\\ r``."""
        if self.kind != "le":
            return self
        return Sentence(self.name, "eq", self.lhs, meet(self.lhs, self.rhs))

    def to_text(self) -> str:
        if self.kind == "eq":
            return f"{to_text(self.lhs)} = {to_text(self.rhs)}"
        if self.kind == "le":
            return f"{to_text(self.lhs)} <= {to_text(self.rhs)}"
        prem = " & ".join(f"{to_text(l)} = {to_text(r)}" for l, r in self.premises)
        conc = " & ".join(f"{to_text(l)} = {to_text(r)}" for l, r in self.conclusions)
        return f"{prem} ==> {conc}"


def eq(name, lhs, rhs) -> Sentence:
    return Sentence(name, "eq", _term(lhs), _term(rhs))


def le(name, lhs, rhs) -> Sentence:
    return Sentence(name, "le", _term(lhs), _term(rhs))


def quasi(name, premises, conclusions) -> Sentence:
    def pairs(items):
        return tuple((_term(l), _term(r)) for l, r in items)
    return Sentence(name, "quasi", premises=pairs(premises),
                    conclusions=pairs(conclusions))


def _term(t):
    return parse(t) if isinstance(t, str) else t


def _split_top(text, sep):
    """Split on ``sep`` outside parentheses."""
    parts, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(sep, i):
            parts.append((text[start:i], start))
            i += len(sep)
            start = i
            continue
        i += 1
    parts.append((text[start:], start))
    return parts


def _parse_side(text, at):
    try:
        return parse(text)
    except TermSyntaxError as exc:
        raise TermSyntaxError(str(exc), at + exc.position, exc.expected) from None


def _parse_equation(text, offset, allow_le=True):
    for sep, kind in (("<=", "le"), ("=", "eq")):
        if sep == "<=" and not allow_le:
            continue
        pieces = _split_top(text, sep)
        if len(pieces) == 2:
            (l, lo), (r, ro) = pieces
            return kind, _parse_side(l, offset + lo), _parse_side(r, offset + ro)
        if len(pieces) > 2:
            raise TermSyntaxError(f"more than one '{sep}'", offset, {"term"})
    raise TermSyntaxError("expected '=' or '<='", offset + len(text), {"=", "<="})


def parse_sentence(text: str, name: str = "sentence") -> Sentence:
    """Parse ``L = R``, ``L <= R`` or ``P1 & ... ==> C1 & ...``."""
    sides = _split_top(text, "==>")
    if len(sides) == 1:
        kind, l, r = _parse_equation(text, 0)
        return Sentence(name, kind, l, r)
    if len(sides) != 2:
        raise TermSyntaxError("more than one '==>'", 0, {"term"})
    (prem_text, _), (conc_text, conc_at) = sides
    premises = []
    for part, at in _split_top(prem_text, "&"):
        kind, l, r = _parse_equation(part, at, allow_le=False)
        premises.append((l, r))
    conclusions = []
    for part, at in _split_top(conc_text, "&"):
        kind, l, r = _parse_equation(part, conc_at + at, allow_le=False)
        conclusions.append((l, r))
    return Sentence(name, "quasi", premises=tuple(premises),
                    conclusions=tuple(conclusions))


# ----------------------------------------------------------------------
# evaluation


def _const(alg, kind):
    if kind == "0":
        return alg.bot
    if kind == "1":
        return alg.top
    if alg.center is None:
        raise MissingCenter("term uses c but the algebra has no center")
    return alg.center


def evaluate(t: Term, alg: FiniteAlgebra, env: dict) -> int:
    """Value of ``t`` in ``alg`` under ``env`` (variable name -> index)."""
    if isinstance(t, Var):
        try:
            return int(env[t.name])
        except KeyError:
            raise UnboundVariable(f"variable {t.name} is unbound",
                                  variable=t.name) from None
    if isinstance(t, Const):
        return _const(alg, t.kind)
    if isinstance(t, Neg):
        if alg.neg is None:
            raise MissingNegation("term uses ~ but the algebra has no negation")
        return int(alg.neg[evaluate(t.arg, alg, env)])
    a = evaluate(t.left, alg, env)
    b = evaluate(t.right, alg, env)
    if t.op == "meet":
        return int(alg.meet[a, b])
    if t.op == "join":
        return int(alg.join[a, b])
    if t.op == "imp":
        return int(alg.imp[a, b])
    if t.op == "iff":
        return int(alg.meet[alg.imp[a, b], alg.imp[b, a]])
    return int(alg.imp[a, alg.meet[a, b]])  # impN


def evaluate_all(t: Term, alg: FiniteAlgebra, env: dict) -> np.ndarray:
    """Vectorised :func:`evaluate`: ``env`` maps names to index arrays that
    broadcast together; the result has the broadcast shape."""
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(f"variable {t.name} is unbound",
                                  variable=t.name) from None
    if isinstance(t, Const):
        return np.int64(_const(alg, t.kind))
    if isinstance(t, Neg):
        if alg.neg is None:
            raise MissingNegation("term uses ~ but the algebra has no negation")
        return alg.neg[evaluate_all(t.arg, alg, env)]
    a = evaluate_all(t.left, alg, env)
    b = evaluate_all(t.right, alg, env)
    if t.op == "meet":
        return alg.meet[a, b]
    if t.op == "join":
        return alg.join[a, b]
    if t.op == "imp":
        return alg.imp[a, b]
    if t.op == "iff":
        return alg.meet[alg.imp[a, b], alg.imp[b, a]]
    return alg.imp[a, alg.meet[a, b]]


def assignment_grid(names, n) -> dict:
    """Open grids over ``range(n)`` for each variable, in lexicographic
    (first variable slowest) order once flattened."""
    k = len(names)
    env = {}
    for i, name in enumerate(names):
        shape = [1] * k
        shape[i] = n
        env[name] = np.arange(n).reshape(shape)
    return env


def check_sentence(s: Sentence, alg: FiniteAlgebra) -> CheckReport:
    """Decide ``s`` over every assignment of its variables.

    The witness reported is the lexicographically least falsifying
    assignment, variables taken in alphabetical order.  A quasi-equation
    holds vacuously wherever a premise fails.
    """
    names = s.variables()
    n = alg.size
    env = assignment_grid(names, n)
    shape = (n,) * len(names)
    if s.kind == "quasi":
        active = np.ones(shape, dtype=bool)
        for l, r in s.premises:
            active &= evaluate_all(l, alg, env) == evaluate_all(r, alg, env)
        pairs = s.conclusions
    else:
        active = np.ones(shape, dtype=bool)
        pairs = s.equations()
    bad = np.zeros(shape, dtype=bool)
    sides = []
    for l, r in pairs:
        lv = np.broadcast_to(evaluate_all(l, alg, env), shape)
        rv = np.broadcast_to(evaluate_all(r, alg, env), shape)
        sides.append((lv, rv))
        bad |= active & (lv != rv)
    if not bad.any():
        return report([])
    flat = int(np.flatnonzero(bad.ravel())[0])
    point = np.unravel_index(flat, shape) if shape else ()
    assignment = tuple((name, int(v)) for name, v in zip(names, point))
    for lv, rv in sides:
        if lv[point] != rv[point]:
            if s.kind == "le":
                # report the two sides of l <= r, not of the encoding
                l = evaluate(s.lhs, alg, dict(assignment))
                r = evaluate(s.rhs, alg, dict(assignment))
                return report([Failure(s.name, assignment, l, r)])
            return report([Failure(s.name, assignment, int(lv[point]),
                                   int(rv[point]))])
    raise AssertionError("unreachable")


def holds(s: Sentence, alg: FiniteAlgebra) -> bool:
    return check_sentence(s, alg).passed


def check_sentence_naive(s: Sentence, alg: FiniteAlgebra) -> CheckReport:
    """Scalar reference implementation of :func:`check_sentence`."""
    names = s.variables()
    for point in product(range(alg.size), repeat=len(names)):
        env = dict(zip(names, point))
        if s.kind == "quasi":
            if not all(evaluate(l, alg, env) == evaluate(r, alg, env)
                       for l, r in s.premises):
                continue
            pairs = s.conclusions
        elif s.kind == "le":
            lv, rv = evaluate(s.lhs, alg, env), evaluate(s.rhs, alg, env)
            if alg.meet[lv, rv] != lv:
                return report([Failure(s.name, tuple(env.items()), lv, rv)])
            continue
        else:
            pairs = [(s.lhs, s.rhs)]
        for l, r in pairs:
            lv, rv = evaluate(l, alg, env), evaluate(r, alg, env)
            if lv != rv:
                return report([Failure(s.name, tuple(env.items()), lv, rv)])
    return report([])
