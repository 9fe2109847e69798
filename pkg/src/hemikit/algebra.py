"""Finite algebras stored as operation tables over the carrier ``0..n-1``.

Tables are row-major with the row indexing the left argument, so
``A.imp[x, y]`` is ``x -> y``.  The induced order is ``x <= y`` iff
``meet[x, y] == x``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvalidAlgebra,
    MissingNegation,
    MultipleCenters,
    NotALattice,
    NotAMorphism,
    NotClosed,
    SizeMismatch,
    WrongBounds,
)

MAX_SIZE = 64

_FIELDS = {"size", "meet", "join", "imp", "neg", "bot", "top", "names", "center"}


def _frozen(table, shape):
    arr = np.array(table, dtype=np.int64)
    if arr.shape != shape:
        raise IndexOutOfRange(f"table has shape {arr.shape}, expected {shape}")
    arr.setflags(write=False)
    return arr


class FiniteAlgebra:
    """An algebra of type (2, 2, 2, [1], 0, 0) given by total tables.

    Only index bounds are enforced by the constructor; use :func:`validate`
    to also establish the lattice laws and the bounds.
    """

    __slots__ = ("size", "meet", "join", "imp", "neg", "bot", "top", "names",
                 "center", "_leq", "_key")

    def __init__(self, size, meet, join, imp, bot, top, neg=None, names=None,
                 center=None):
        if not isinstance(size, (int, np.integer)) or size < 1:
            raise InvalidAlgebra(f"size must be a positive integer, got {size!r}")
        size = int(size)
        self.size = size
        self.meet = _frozen(meet, (size, size))
        self.join = _frozen(join, (size, size))
        self.imp = _frozen(imp, (size, size))
        self.neg = None if neg is None else _frozen(neg, (size,))
        for name, table in (("meet", self.meet), ("join", self.join),
                            ("imp", self.imp), ("neg", self.neg)):
            if table is None:
                continue
            bad = np.argwhere((table < 0) | (table >= size))
            if len(bad):
                raise IndexOutOfRange(
                    f"{name} has entry {int(table[tuple(bad[0])])} out of range",
                    table=name, cell=[int(i) for i in bad[0]])
        for name, value in (("bot", bot), ("top", top), ("center", center)):
            if value is not None and not 0 <= value < size:
                raise IndexOutOfRange(f"{name}={value} out of range", field=name)
        self.bot = int(bot)
        self.top = int(top)
        self.center = None if center is None else int(center)
        if names is not None:
            names = tuple(str(n) for n in names)
            if len(names) != size:
                raise SizeMismatch(f"{len(names)} names for {size} elements")
        self.names = names
        self._leq = None
        self._key = None

    # ------------------------------------------------------------------
    @property
    def has_neg(self) -> bool:
        return self.neg is not None

    @property
    def leq(self) -> np.ndarray:
        """Boolean matrix of the lattice order."""
        if self._leq is None:
            leq = self.meet == np.arange(self.size)[:, None]
            leq.setflags(write=False)
            self._leq = leq
        return self._leq

    def le(self, x, y) -> bool:
        return bool(self.meet[x, y] == x)

    def name(self, x) -> str:
        return self.names[x] if self.names else str(x)

    def index(self, label) -> int:
        """Resolve a display name or an integer-like label to an index."""
        if isinstance(label, (int, np.integer)):
            return int(label)
        if self.names and label in self.names:
            return self.names.index(label)
        try:
            value = int(label)
        except ValueError:
            raise IndexOutOfRange(f"unknown element {label!r}") from None
        if not 0 <= value < self.size:
            raise IndexOutOfRange(f"element {value} out of range")
        return value

    def key(self) -> tuple:
        """Hashable identity of the tables (names are display-only)."""
        if self._key is None:
            self._key = (
                self.size, self.bot, self.top, self.center,
                self.meet.tobytes(), self.join.tobytes(), self.imp.tobytes(),
                None if self.neg is None else self.neg.tobytes(),
            )
        return self._key

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        kind = "with ~" if self.has_neg else "without ~"
        return f"<FiniteAlgebra size={self.size} {kind}>"

    def replace(self, **changes) -> "FiniteAlgebra":
        fields = dict(size=self.size, meet=self.meet, join=self.join,
                      imp=self.imp, bot=self.bot, top=self.top, neg=self.neg,
                      names=self.names, center=self.center)
        fields.update(changes)
        return FiniteAlgebra(**fields)

    # ------------------------------------------------------------------
    def to_dict(self) -> dict:
        out = {
            "size": self.size,
            "meet": self.meet.tolist(),
            "join": self.join.tolist(),
            "imp": self.imp.tolist(),
        }
        if self.neg is not None:
            out["neg"] = self.neg.tolist()
        out["bot"] = self.bot
        out["top"] = self.top
        if self.names is not None:
            out["names"] = list(self.names)
        if self.center is not None:
            out["center"] = self.center
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


# ----------------------------------------------------------------------
# validation


def validate(raw) -> FiniteAlgebra:
    """Build a FiniteAlgebra from a parsed JSON document (or pass one through)
    and check index bounds, the lattice laws and the bounds."""
    if isinstance(raw, FiniteAlgebra):
        alg = raw
    else:
        if not isinstance(raw, dict):
            raise InvalidAlgebra("algebra description must be a JSON object")
        unknown = set(raw) - _FIELDS
        if unknown:
            raise InvalidAlgebra(f"unknown fields: {sorted(unknown)}",
                                 fields=sorted(unknown))
        missing = {"size", "meet", "join", "imp", "bot", "top"} - set(raw)
        if missing:
            raise InvalidAlgebra(f"missing fields: {sorted(missing)}",
                                 fields=sorted(missing))
        try:
            alg = FiniteAlgebra(
                raw["size"], raw["meet"], raw["join"], raw["imp"],
                raw["bot"], raw["top"], neg=raw.get("neg"),
                names=raw.get("names"), center=raw.get("center"))
        except (TypeError, ValueError) as exc:
            raise IndexOutOfRange(f"malformed table: {exc}") from None
    if alg.size > MAX_SIZE:
        raise InvalidAlgebra(f"size {alg.size} exceeds the cap of {MAX_SIZE}")
    _check_lattice(alg)
    _check_bounds(alg)
    if alg.center is not None and alg.neg is not None:
        if alg.neg[alg.center] != alg.center:
            raise InvalidAlgebra(f"declared center {alg.center} is not fixed by ~")
    return alg


def _first_pair(mask):
    hits = np.argwhere(mask)
    return None if len(hits) == 0 else tuple(int(i) for i in hits[0])


def _check_lattice(alg: FiniteAlgebra):
    m, j = alg.meet, alg.join
    idx = np.arange(alg.size)
    checks = [
        ("meet commutative", m != m.T),
        ("join commutative", j != j.T),
        ("absorption x/\\(x\\/y)=x", m[idx[:, None], j] != idx[:, None]),
        ("absorption x\\/(x/\\y)=x", j[idx[:, None], m] != idx[:, None]),
    ]
    for law, mask in checks:
        witness = _first_pair(mask)
        if witness is not None:
            raise NotALattice(f"{law} fails at {witness}", law=law,
                              witness=list(witness))
    if (np.diag(m) != idx).any() or (np.diag(j) != idx).any():
        x = int(np.flatnonzero((np.diag(m) != idx) | (np.diag(j) != idx))[0])
        raise NotALattice(f"idempotence fails at {x}", law="idempotence",
                          witness=[x])
    # associativity over all triples
    for name, t in (("meet", m), ("join", j)):
        left = t[t[:, :, None], idx[None, None, :]]
        right = t[idx[:, None, None], t[None, :, :]]
        witness = _first_pair(left != right)
        if witness is not None:
            raise NotALattice(f"{name} associativity fails at {witness}",
                              law=f"{name} associative", witness=list(witness))


def _check_bounds(alg: FiniteAlgebra):
    leq = alg.leq
    if not leq[alg.bot, :].all():
        raise WrongBounds(f"bot={alg.bot} is not the least element")
    if not leq[:, alg.top].all():
        raise WrongBounds(f"top={alg.top} is not the greatest element")


def load(path) -> FiniteAlgebra:
    with open(path) as fh:
        return validate(json.load(fh))


# ----------------------------------------------------------------------
# reports and morphisms


@dataclass(frozen=True)
class Failure:
    """One falsifying instance: the axiom (or operation) name, the variable
    assignment as element indices, and the two sides that differ."""

    axiom: str
    assignment: tuple  # tuple of (variable, index)
    lhs: Optional[int] = None
    rhs: Optional[int] = None

    def env(self) -> dict:
        return dict(self.assignment)

    def to_dict(self, alg: Optional[FiniteAlgebra] = None) -> dict:
        out = {"axiom": self.axiom,
               "assignment": {k: v for k, v in self.assignment}}
        if alg is not None and alg.names:
            out["named"] = {k: alg.name(v) if isinstance(v, int) else v
                            for k, v in self.assignment}
        if self.lhs is not None:
            out["lhs"] = self.lhs
            out["rhs"] = self.rhs
            if alg is not None and alg.names:
                out["lhs_name"] = alg.name(self.lhs)
                out["rhs_name"] = alg.name(self.rhs) if self.rhs is not None else None
        return out


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    failures: tuple = ()
    info: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.passed

    def failure(self, axiom: str) -> Optional[Failure]:
        for f in self.failures:
            if f.axiom == axiom:
                return f
        return None

    @property
    def failed_axioms(self) -> list:
        return [f.axiom for f in self.failures]

    def to_dict(self, alg: Optional[FiniteAlgebra] = None) -> dict:
        out = {"passed": self.passed,
               "failures": [f.to_dict(alg) for f in self.failures]}
        out.update(self.info)
        return out


def report(failures: Sequence[Failure], **info) -> CheckReport:
    failures = tuple(failures)
    return CheckReport(not failures, failures, info)


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __eq__(self, other):
        if not isinstance(other, Homomorphism):
            return NotImplemented
        return (self.map == other.map and self.source == other.source
                and self.target == other.target)

    def __hash__(self):
        return hash(self.map)

    @property
    def injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def surjective(self) -> bool:
        return len(set(self.map)) == self.target.size

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """Composite ``other o self``."""
        if other.source != self.target:
            raise SizeMismatch("composite of non-composable maps")
        return Homomorphism(self.source, other.target,
                            [other.map[v] for v in self.map])

    def inverse(self) -> "Homomorphism":
        if not (self.injective and self.surjective):
            raise NotAMorphism("map is not a bijection")
        inv = [0] * self.target.size
        for x, v in enumerate(self.map):
            inv[v] = x
        return Homomorphism(self.target, self.source, inv)

    def to_dict(self) -> dict:
        return {"map": list(self.map), "injective": self.injective,
                "surjective": self.surjective}


def identity(alg: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(alg, alg, range(alg.size))


def validate_homomorphism(h: Homomorphism) -> CheckReport:
    """Exhaustively check that ``h`` preserves every operation and constant.

    ``~`` is checked only when both sides carry it.  Failures name the
    operation and its arguments (indices in the source).
    """
    src, tgt = h.source, h.target
    if len(h.map) != src.size:
        raise SizeMismatch(f"map has length {len(h.map)}, source has {src.size}")
    f = np.array(h.map, dtype=np.int64)
    if ((f < 0) | (f >= tgt.size)).any():
        raise IndexOutOfRange("map value outside the target")
    failures = []
    for const in ("bot", "top"):
        if f[getattr(src, const)] != getattr(tgt, const):
            failures.append(Failure(const, (), int(f[getattr(src, const)]),
                                    getattr(tgt, const)))
    for op in ("meet", "join", "imp"):
        s, t = getattr(src, op), getattr(tgt, op)
        lhs = f[s]
        rhs = t[f[:, None], f[None, :]]
        w = _first_pair(lhs != rhs)
        if w is not None:
            failures.append(Failure(op, (("x", w[0]), ("y", w[1])),
                                    int(lhs[w]), int(rhs[w])))
    if src.neg is not None and tgt.neg is not None:
        lhs = f[src.neg]
        rhs = tgt.neg[f]
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            x = int(bad[0])
            failures.append(Failure("neg", (("x", x),), int(lhs[x]), int(rhs[x])))
    return report(failures)


# ----------------------------------------------------------------------
# structural helpers


def find_center(alg: FiniteAlgebra) -> Optional[int]:
    """The unique fixed point of ``~``, or ``None``."""
    if alg.neg is None:
        raise MissingNegation("algebra has no negation")
    fixed = np.flatnonzero(alg.neg == np.arange(alg.size))
    if len(fixed) > 1:
        raise MultipleCenters(f"several fixed points of ~: {fixed.tolist()}",
                              fixed=fixed.tolist())
    return int(fixed[0]) if len(fixed) else None


def with_center(alg: FiniteAlgebra) -> FiniteAlgebra:
    """Return ``alg`` with its ``center`` field filled in when it has one."""
    if alg.center is not None:
        return alg
    c = find_center(alg)
    return alg if c is None else alg.replace(center=c)


def subalgebra(alg: FiniteAlgebra, elements: Sequence[int]):
    """Restrict ``alg`` to ``elements`` (kept in the given order).

    Returns ``(sub, inclusion)``.  Raises :class:`NotClosed` when the subset
    is not closed under the operations.
    """
    elements = [int(e) for e in elements]
    pos = {e: i for i, e in enumerate(elements)}
    if len(pos) != len(elements):
        raise NotClosed("repeated elements")
    sel = np.array(elements)

    def restrict(table, name):
        vals = table[np.ix_(sel, sel)]
        out = np.empty_like(vals)
        for cell in product(range(len(sel)), repeat=2):
            v = int(vals[cell])
            if v not in pos:
                raise NotClosed(f"{name} leaves the subset at {cell}")
            out[cell] = pos[v]
        return out

    neg = None
    if alg.neg is not None:
        neg = []
        for e in elements:
            if int(alg.neg[e]) not in pos:
                raise NotClosed(f"neg leaves the subset at {e}")
            neg.append(pos[int(alg.neg[e])])
    for const in (alg.bot, alg.top):
        if const not in pos:
            raise NotClosed("subset misses a bound")
    center = None
    if alg.center is not None and alg.center in pos:
        center = pos[alg.center]
    names = [alg.name(e) for e in elements] if alg.names else None
    sub = FiniteAlgebra(len(elements), restrict(alg.meet, "meet"),
                        restrict(alg.join, "join"), restrict(alg.imp, "imp"),
                        pos[alg.bot], pos[alg.top], neg=neg, names=names,
                        center=center)
    return sub, Homomorphism(sub, alg, elements)


def chain(n: int, imp, names=None, neg=None) -> FiniteAlgebra:
    """The ``n``-chain ``0 < 1 < ... < n-1`` with the given implication."""
    idx = np.arange(n)
    return validate(FiniteAlgebra(
        n, np.minimum.outer(idx, idx), np.maximum.outer(idx, idx), imp,
        0, n - 1, neg=neg, names=names))


def order_implication(meet, join, bot, top, names=None, neg=None) -> FiniteAlgebra:
    """Lattice with ``x -> y = 1`` if ``x <= y`` and ``0`` otherwise."""
    meet = np.asarray(meet)
    n = meet.shape[0]
    leq = meet == np.arange(n)[:, None]
    imp = np.where(leq, top, bot)
    return validate(FiniteAlgebra(n, meet, join, imp, bot, top, neg=neg,
                                  names=names))


def relabel(alg: FiniteAlgebra, perm: Sequence[int]) -> FiniteAlgebra:
    """Transport ``alg`` along the bijection ``x -> perm[x]``."""
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))

    def move(t):
        return perm[t[np.ix_(inv, inv)]]

    names = None
    if alg.names:
        names = [alg.names[i] for i in inv]
    return FiniteAlgebra(
        alg.size, move(alg.meet), move(alg.join), move(alg.imp),
        int(perm[alg.bot]), int(perm[alg.top]),
        neg=None if alg.neg is None else perm[alg.neg[inv]],
        names=names,
        center=None if alg.center is None else int(perm[alg.center]))
