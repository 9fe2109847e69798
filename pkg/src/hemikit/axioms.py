"""Every algebra class as data: a named list of sentences plus parents.

``AxiomSet.sentences`` lists a class's own axioms; ``all_sentences()``
prepends the inherited ones.  Membership is decided by folding
:func:`hemikit.terms.check_sentence` over ``all_sentences()``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .errors import UnknownClass
from .terms import Sentence, eq, le, quasi


class ClassId(enum.Enum):
    LATTICE = "lattice"
    BDL = "bdl"
    HIL = "hil"
    KLEENE = "kleene"
    NELSON = "nelson"
    KHIL_PRE = "khil-pre"
    KHIL_EQ = "khil-eq"
    KHIL_QUASI = "khil-quasi"
    SH = "sh"
    SN = "sn"
    SRL = "srl"
    SNA = "sna"
    CENTERED_KHIL = "centered-khil"

    @classmethod
    def parse(cls, text) -> "ClassId":
        if isinstance(text, ClassId):
            return text
        key = str(text).strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        raise UnknownClass(f"unknown class {text!r}",
                           known=[m.value for m in cls])


@dataclass(frozen=True)
class AxiomSet:
    name: ClassId
    sentences: tuple
    parents: tuple = ()
    requires_neg: bool = False
    requires_center: bool = False

    def all_sentences(self) -> tuple:
        out = []
        seen = set()
        for parent in self.parents:
            for s in axiom_set(parent).all_sentences():
                if s.name not in seen:
                    seen.add(s.name)
                    out.append(s)
        for s in self.sentences:
            if s.name not in seen:
                seen.add(s.name)
                out.append(s)
        return tuple(out)

    def sentence(self, name) -> Sentence:
        for s in self.all_sentences():
            if s.name == name:
                return s
        raise KeyError(name)

    def to_text(self) -> str:
        lines = [f"# {self.name.value}"]
        if self.parents:
            lines.append("# includes " + ", ".join(p.value for p in self.parents))
        for s in self.sentences:
            lines.append(f"{s.name}: {s.to_text()}")
        return "\n".join(lines)


_LATTICE = (
    eq("L1", "x /\\ y", "y /\\ x"),
    eq("L2", "x \\/ y", "y \\/ x"),
    eq("L3", "x /\\ (y /\\ z)", "(x /\\ y) /\\ z"),
    eq("L4", "x \\/ (y \\/ z)", "(x \\/ y) \\/ z"),
    eq("L5", "x /\\ x", "x"),
    eq("L6", "x \\/ x", "x"),
    eq("L7", "x /\\ (x \\/ y)", "x"),
    eq("L8", "x \\/ (x /\\ y)", "x"),
)

_BDL = (
    eq("D1", "x /\\ (y \\/ z)", "(x /\\ y) \\/ (x /\\ z)"),
    eq("B0", "x /\\ 0", "0"),
    eq("B1", "x \\/ 1", "1"),
)

_HIL = (
    eq("H1", "x -> x", "1"),
    le("H2", "x /\\ (x -> y)", "y"),
)

_KLEENE = (
    eq("Ne1", "~~x", "x"),
    eq("Ne2", "~(x /\\ y)", "~x \\/ ~y"),
    eq("Ne3", "(x /\\ ~x) /\\ (y \\/ ~y)", "x /\\ ~x"),
)

_NELSON = (
    eq("Ne4", "x -> x", "1"),
    eq("Ne5", "x -> (y -> z)", "(x /\\ y) -> z"),
    eq("Ne6", "x /\\ (x -> y)", "x /\\ (~x \\/ y)"),
    le("Ne7", "~x \\/ y", "x -> y"),
    eq("Ne8", "x -> (y /\\ z)", "(x -> y) /\\ (x -> z)"),
)

_HN_EQUATIONAL = (
    eq("hN1", "x -> x", "1"),
    le("hN2", "x /\\ (x -> y)", "x /\\ (~x \\/ y)"),
    eq("hN3", "~(x -> y) -> (x /\\ ~y)", "1"),
    eq("hN4", "(x /\\ ~y) -> ~(x -> y)", "1"),
    eq("hN5", "(x /\\ y /\\ (x -> y)) -> (x /\\ (x -> y))", "1"),
    eq("hN6", "(x /\\ (x -> y)) -> (x /\\ y /\\ (x -> y))", "1"),
)

_THETA = [("x -> y", "1"), ("y -> x", "1")]

_HN_QUASI = (
    quasi("hN7", _THETA + [("y -> z", "1"), ("z -> y", "1")],
          [("x -> z", "1"), ("z -> x", "1")]),
    quasi("hN8", _THETA, [("(x /\\ z) -> (y /\\ z)", "1")]),
    quasi("hN9", _THETA, [("(x \\/ z) -> (y \\/ z)", "1")]),
    quasi("hN10", _THETA, [("(x -> z) -> (y -> z)", "1"),
                           ("(z -> x) -> (z -> y)", "1")]),
)

# the single equation that replaces hN7-hN10
NEG_SHIFT = eq("neg-shift", "(x -> y) \\/ (z /\\ ~z)",
               "(x \\/ (z /\\ ~z)) -> (y \\/ (z /\\ ~z))")

_SH = (
    eq("S2", "x /\\ (x -> y)", "x /\\ y"),
    eq("S3", "x /\\ (y -> z)", "x /\\ ((x /\\ y) -> (x /\\ z))"),
    eq("S4", "x -> x", "1"),
)

_SN = (
    eq("SN1", "x /\\ (x \\/ y)", "x"),
    eq("SN2", "x /\\ (y \\/ z)", "(z /\\ x) \\/ (y /\\ x)"),
    eq("SN3", "~~x", "x"),
    eq("SN4", "~(x /\\ y)", "~x \\/ ~y"),
    eq("SN5", "x /\\ ~x", "(x /\\ ~x) /\\ (y \\/ ~y)"),
    eq("SN6", "x /\\ (x ->n y)", "x /\\ (~x \\/ y)"),
    eq("SN7", "x ->n (y ->n z)", "(x /\\ y) ->n z"),
    eq("SN8", "(x ->n y) ->n ((y ->n x) ->n ((x -> z) ->n (y -> z)))", "1"),
    eq("SN9", "(x ->n y) ->n ((y ->n x) ->n ((z -> x) ->n (z -> y)))", "1"),
    eq("SN10", "~(x -> y) ->n (x /\\ ~y)", "1"),
    eq("SN11", "(x /\\ ~y) ->n ~(x -> y)", "1"),
)

_SRL = (
    eq("R1", "(x \\/ y) -> z", "(x -> z) /\\ (y -> z)"),
    eq("R2", "z -> (x /\\ y)", "(z -> x) /\\ (z -> y)"),
    le("R3", "(x -> y) /\\ (y -> z)", "x -> z"),
    eq("R4", "x -> x", "1"),
    le("R5", "x /\\ (x -> y)", "y"),
    le("R6", "x -> y", "z -> (x -> y)"),
)

_SNA = (
    eq("SNA1", "(x \\/ y) -> z", "(x -> z) /\\ (y -> z)"),
    eq("SNA2", "z -> (x /\\ y)", "(z -> x) /\\ (z -> y)"),
    eq("SNA3", "((x -> y) /\\ (y -> z)) -> (x -> z)", "1"),
    eq("SNA4", "x -> x", "1"),
    le("SNA5", "x /\\ (x -> y)", "x /\\ (~x \\/ y)"),
    le("SNA6", "x -> y", "z -> (x -> y)"),
    eq("SNA7", "~(x -> y) -> (x /\\ ~y)", "1"),
    eq("SNA8", "(x /\\ ~y) -> ~(x -> y)", "1"),
)

_CENTER = (eq("C0", "~c", "c"),)


_TABLE = {
    ClassId.LATTICE: (_LATTICE, (), False, False),
    ClassId.BDL: (_BDL, (ClassId.LATTICE,), False, False),
    ClassId.HIL: (_HIL, (ClassId.BDL,), False, False),
    ClassId.KLEENE: (_KLEENE, (ClassId.BDL,), True, False),
    ClassId.NELSON: (_NELSON, (ClassId.KLEENE,), True, False),
    ClassId.KHIL_PRE: (_HN_EQUATIONAL, (ClassId.KLEENE,), True, False),
    ClassId.KHIL_EQ: (_HN_EQUATIONAL + (NEG_SHIFT,), (ClassId.KLEENE,), True, False),
    ClassId.KHIL_QUASI: (_HN_EQUATIONAL + _HN_QUASI, (ClassId.KLEENE,), True, False),
    ClassId.SH: (_SH, (ClassId.BDL,), False, False),
    ClassId.SN: (_SN, (ClassId.BDL,), True, False),
    ClassId.SRL: (_SRL, (ClassId.BDL,), False, False),
    ClassId.SNA: (_SNA, (ClassId.KLEENE,), True, False),
    ClassId.CENTERED_KHIL: (_CENTER, (ClassId.KHIL_QUASI,), True, True),
}


@lru_cache(maxsize=None)
def axiom_set(cls) -> AxiomSet:
    cls = ClassId.parse(cls)
    sentences, parents, needs_neg, needs_center = _TABLE[cls]
    return AxiomSet(cls, sentences, parents, needs_neg, needs_center)


def dump_all() -> str:
    return "\n\n".join(axiom_set(c).to_text() for c in ClassId)
