"""Both directions of the twist representation.

``twist`` builds K(A) on the pairs ``(a, b)`` with ``a /\\ b = 0``;
``quotient`` collapses a hemi-Nelson algebra by the relation
``x -> y = 1 = y -> x``; ``rho`` and ``alpha`` are the comparison maps
between an algebra and its round trip through the other side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import partition
from .algebra import (
    CheckReport,
    Failure,
    FiniteAlgebra,
    Homomorphism,
    find_center,
    report,
    validate,
    validate_homomorphism,
)
from .axioms import ClassId
from .classes import check_class
from .errors import (
    IllDefined,
    MissingNegation,
    NoCenter,
    NotAMorphism,
    NotHIL,
    NotKhIL,
)


def _require(alg, cls, error):
    rep = check_class(alg, cls, first_only=True)
    if not rep.passed:
        f = rep.failures[0]
        raise error(f"algebra is not in {ClassId.parse(cls).value}: "
                    f"{f.axiom} fails", witness=f.to_dict(alg))


# ----------------------------------------------------------------------
# twist


@dataclass(frozen=True, eq=False)
class TwistAlgebra:
    base: FiniteAlgebra
    pairs: tuple
    algebra: FiniteAlgebra

    def index(self, pair) -> int:
        return self._lookup[tuple(int(v) for v in pair)]

    @property
    def _lookup(self):
        cache = self.__dict__.get("_cache")
        if cache is None:
            cache = {p: i for i, p in enumerate(self.pairs)}
            object.__setattr__(self, "_cache", cache)
        return cache

    def to_dict(self) -> dict:
        out = self.algebra.to_dict()
        out["pairs"] = [list(p) for p in self.pairs]
        return out


def twist(base: FiniteAlgebra, check: bool = True) -> TwistAlgebra:
    """K(A): pairs in lexicographic order, operations
    ``(a,b) /\\ (c,d) = (a/\\c, b\\/d)``, ``(a,b) \\/ (c,d) = (a\\/c, b/\\d)``,
    ``~(a,b) = (b,a)``, ``(a,b) -> (c,d) = (a->c, a/\\d)``."""
    if check:
        _require(base, ClassId.HIL, NotHIL)
    m, j, i = base.meet, base.join, base.imp
    a_idx, b_idx = np.nonzero(m == base.bot)  # row-major: lexicographic
    pairs = tuple(zip(a_idx.tolist(), b_idx.tolist()))
    n = base.size
    code = np.full(n * n, -1, dtype=np.int64)
    code[a_idx * n + b_idx] = np.arange(len(pairs))

    a, b = a_idx[:, None], b_idx[:, None]
    c, d = a_idx[None, :], b_idx[None, :]

    def lookup(first, second):
        return code[first * n + second]

    meet = lookup(m[a, c], j[b, d])
    join = lookup(j[a, c], m[b, d])
    imp = lookup(i[a, c], m[a, d])
    neg = lookup(b_idx, a_idx)
    names = [f"({base.name(p)},{base.name(q)})" for p, q in pairs]
    pos = dict(zip(pairs, range(len(pairs))))
    alg = FiniteAlgebra(
        len(pairs), meet, join, imp, pos[(base.bot, base.top)],
        pos[(base.top, base.bot)], neg=neg, names=names,
        center=pos[(base.bot, base.bot)])
    return TwistAlgebra(base, pairs, validate(alg))


# ----------------------------------------------------------------------
# theta and its lattice-theoretic counterpart


def theta_relation(alg: FiniteAlgebra) -> np.ndarray:
    one = alg.imp == alg.top
    return one & one.T


def theta(alg: FiniteAlgebra, check: bool = True) -> tuple:
    """The partition of ``x ~ y`` iff ``x -> y = 1`` and ``y -> x = 1``.

    Transitivity is re-verified even after the class check.
    """
    if check:
        _require(alg, ClassId.KHIL_QUASI, NotKhIL)
    return partition.from_relation(theta_relation(alg))


def negative_elements(alg: FiniteAlgebra) -> list:
    """``{x /\\ ~x}``, the elements below their own negation."""
    if alg.neg is None:
        raise MissingNegation("algebra has no negation")
    return sorted({int(alg.meet[x, alg.neg[x]]) for x in range(alg.size)})


def theta_minus(alg: FiniteAlgebra) -> tuple:
    """``x ~ y`` iff ``x \\/ n = y \\/ n`` for some negative ``n``."""
    rel = np.zeros((alg.size, alg.size), dtype=bool)
    for n in negative_elements(alg):
        col = alg.join[:, n]
        rel |= col[:, None] == col[None, :]
    return partition.from_relation(rel)


# ----------------------------------------------------------------------
# quotient


@dataclass(frozen=True, eq=False)
class QuotientResult:
    source: FiniteAlgebra
    classes: tuple      # per element: least index of its block
    algebra: FiniteAlgebra
    projection: tuple   # per element: index of its block in ``algebra``

    def projection_map(self) -> Homomorphism:
        return Homomorphism(self.source, self.algebra, self.projection)

    def to_dict(self) -> dict:
        out = self.algebra.to_dict()
        out["projection"] = list(self.projection)
        return out


def quotient_by(alg: FiniteAlgebra, labels, ops=("meet", "join", "imp")) -> QuotientResult:
    """Quotient by an arbitrary partition; well-definedness of each operation
    on blocks is verified and reported as :class:`IllDefined`."""
    proj = np.array(partition.canonical(labels), dtype=np.int64)
    k = int(proj.max()) + 1
    reps = np.array([int(np.flatnonzero(proj == b)[0]) for b in range(k)])
    tables = {}
    for op in ops:
        t = getattr(alg, op)
        if t is None:
            continue
        block_table = proj[t[np.ix_(reps, reps)]] if t.ndim == 2 else proj[t[reps]]
        if t.ndim == 2:
            full = block_table[proj[:, None], proj[None, :]]
            bad = np.argwhere(full != proj[t])
        else:
            bad = np.argwhere(block_table[proj] != proj[t])
        if len(bad):
            raise IllDefined(f"{op} is not well defined on blocks",
                             op=op, witness=bad[0].tolist())
        tables[op] = block_table
    names = [alg.name(int(r)) for r in reps] if alg.names else None
    q = FiniteAlgebra(k, tables["meet"], tables["join"], tables["imp"],
                      int(proj[alg.bot]), int(proj[alg.top]),
                      neg=tables.get("neg"), names=names)
    classes = tuple(int(reps[b]) for b in proj)
    return QuotientResult(alg, classes, validate(q), tuple(proj.tolist()))


def quotient(alg: FiniteAlgebra, check: bool = True) -> QuotientResult:
    """T/theta with the block operations; the result is checked to be an
    h-lattice."""
    if check:
        _require(alg, ClassId.KHIL_QUASI, NotKhIL)
    result = quotient_by(alg, theta(alg, check=False))
    rep = check_class(result.algebra, ClassId.HIL, first_only=True)
    if not rep.passed:
        raise IllDefined("quotient is not an h-lattice",
                         witness=rep.failures[0].to_dict())
    return result


# ----------------------------------------------------------------------
# comparison maps


@dataclass(frozen=True, eq=False)
class Embedding:
    """``rho`` together with the objects it was computed from."""

    hom: Homomorphism
    quotient: QuotientResult
    twist: TwistAlgebra

    @property
    def injective(self) -> bool:
        return self.hom.injective

    @property
    def surjective(self) -> bool:
        return self.hom.surjective

    def to_dict(self) -> dict:
        return {"map": list(self.hom.map), "injective": self.injective,
                "surjective": self.surjective,
                "target": self.twist.to_dict()}


def rho(alg: FiniteAlgebra, check: bool = True) -> Embedding:
    """``x -> (x/theta, ~x/theta)`` into K(T/theta)."""
    if alg.neg is None:
        raise MissingNegation("rho needs ~")
    q = quotient(alg, check=check)
    k = twist(q.algebra, check=False)
    proj = q.projection
    image = [k.index((proj[x], proj[int(alg.neg[x])])) for x in range(alg.size)]
    hom = Homomorphism(alg, k.algebra, image)
    rep = validate_homomorphism(hom)
    if not rep.passed:
        raise NotAMorphism("rho is not a homomorphism",
                           witness=rep.failures[0].to_dict())
    if not hom.injective:
        raise NotAMorphism("rho is not injective")
    return Embedding(hom, q, k)


def alpha(base: FiniteAlgebra, check: bool = True) -> Homomorphism:
    """``a -> (a, a -> 0)/theta`` from A onto the quotient of K(A)."""
    if check:
        _require(base, ClassId.HIL, NotHIL)
    k = twist(base, check=False)
    q = quotient(k.algebra, check=False)
    image = [q.projection[k.index((a, int(base.imp[a, base.bot])))]
             for a in range(base.size)]
    hom = Homomorphism(base, q.algebra, image)
    rep = validate_homomorphism(hom)
    if not rep.passed or not (hom.injective and hom.surjective):
        raise NotAMorphism("alpha is not an isomorphism",
                           report=rep.to_dict())
    return hom


def map_twist(f: Homomorphism) -> Homomorphism:
    """K(f): ``(a, b) -> (f(a), f(b))``."""
    _require_morphism(f, ClassId.HIL)
    src, tgt = twist(f.source, check=False), twist(f.target, check=False)
    image = [tgt.index((f.map[a], f.map[b])) for a, b in src.pairs]
    out = Homomorphism(src.algebra, tgt.algebra, image)
    _require_morphism(out, None)
    return out


def map_quotient(g: Homomorphism) -> Homomorphism:
    """C(g): ``x/theta -> g(x)/theta``; block independence is verified."""
    _require_morphism(g, ClassId.KHIL_QUASI)
    qs, qt = quotient(g.source, check=False), quotient(g.target, check=False)
    image = [-1] * qs.algebra.size
    for x in range(g.source.size):
        b = qs.projection[x]
        v = qt.projection[g.map[x]]
        if image[b] not in (-1, v):
            raise IllDefined("C(g) depends on the block representative",
                             witness=[x])
        image[b] = v
    out = Homomorphism(qs.algebra, qt.algebra, image)
    _require_morphism(out, None)
    return out


def _require_morphism(f, cls):
    rep = validate_homomorphism(f)
    if not rep.passed:
        raise NotAMorphism("map does not preserve the operations",
                           witness=rep.failures[0].to_dict())
    if cls is not None:
        for side in (f.source, f.target):
            if not check_class(side, cls, first_only=True).passed:
                raise NotAMorphism(f"endpoint is not in {cls.value}")


# ----------------------------------------------------------------------
# centeredness


def _center(alg):
    if alg.center is not None:
        return alg.center
    if alg.neg is None:
        raise MissingNegation("algebra has no negation")
    c = find_center(alg)
    if c is None:
        raise NoCenter("algebra has no center")
    return c


def _split_pairs(alg, c):
    """Set of ``(z \\/ c, ~z \\/ c)`` over all ``z``."""
    zs = np.arange(alg.size)
    return set(zip(alg.join[zs, c].tolist(), alg.join[alg.neg[zs], c].tolist()))


def check_CK(alg: FiniteAlgebra) -> CheckReport:
    """For ``x, y >= c`` with ``x /\\ y <= c`` some ``z`` has
    ``z \\/ c = x`` and ``~z \\/ c = y``."""
    c = _center(alg)
    reach = _split_pairs(alg, c)
    leq = alg.leq
    for x in range(alg.size):
        if not leq[c, x]:
            continue
        for y in range(alg.size):
            if leq[c, y] and leq[alg.meet[x, y], c] and (x, y) not in reach:
                return report([Failure("CK", (("x", x), ("y", y)))], center=c)
    return report([], center=c)


def check_C(alg: FiniteAlgebra) -> CheckReport:
    """For ``(x /\\ y) -> 0 = 1`` some ``z`` has ``z \\/ c = x \\/ c`` and
    ``~z \\/ c = y \\/ c``."""
    c = _center(alg)
    reach = _split_pairs(alg, c)
    j = alg.join
    for x in range(alg.size):
        for y in range(alg.size):
            if alg.imp[alg.meet[x, y], alg.bot] != alg.top:
                continue
            if (int(j[x, c]), int(j[y, c])) not in reach:
                return report([Failure("C", (("x", x), ("y", y)))], center=c)
    return report([], center=c)


@dataclass(frozen=True, eq=False)
class Representation:
    representable: bool
    witness_base: Optional[FiniteAlgebra] = None
    iso: Optional[Homomorphism] = None
    reason: str = ""

    def to_dict(self) -> dict:
        out = {"representable": self.representable, "reason": self.reason}
        if self.witness_base is not None:
            out["base"] = self.witness_base.to_dict()
            out["iso"] = list(self.iso.map)
        return out


def twist_representable(alg: FiniteAlgebra, check: bool = True) -> Representation:
    """Whether ``alg`` is isomorphic to some K(A); when it is, A is the
    quotient and the isomorphism is ``rho``."""
    if check:
        _require(alg, ClassId.KHIL_QUASI, NotKhIL)
    c = find_center(alg)
    if c is None:
        return Representation(False, reason="no center")
    rep = check_CK(alg.replace(center=c))
    if not rep.passed:
        f = rep.failures[0]
        return Representation(False, reason=f"CK fails at {f.env()}")
    emb = rho(alg, check=False)
    if not emb.surjective:
        raise NotAMorphism("CK holds but rho is not onto")
    return Representation(True, emb.quotient.algebra, emb.hom, "center and CK")
