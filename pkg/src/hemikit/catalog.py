"""Named example algebras, exhaustive enumeration of small algebras, and a
counterexample search harness over registered properties."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Callable, Iterator, Optional

import numpy as np

from . import partition
from .algebra import FiniteAlgebra, chain, order_implication, subalgebra, validate
from .axioms import ClassId, axiom_set
from .classes import check_class, is_member
from .errors import CapExceeded, UnknownClass, UnknownKey, UnknownProperty
from .iso import automorphisms, canonical_imp, canonical_key
from .solver import solve_imp

log = logging.getLogger(__name__)

HIL_CAP = 6
NEG_CAP = 5
ENV_CAP = "HEMIKIT_MAX_SIZE"


# ----------------------------------------------------------------------
# fixtures


def example_hlattice() -> FiniteAlgebra:
    """The 3-chain 0 < a < 1 with a non-Heyting implication."""
    # a -> 1 = 0, so a /\ (a -> 1) = 0 while a /\ 1 = a: not semi-Heyting
    return chain(3, [[2, 1, 2],
                     [0, 2, 0],
                     [0, 1, 2]], names=["0", "a", "1"])


def remark_chain() -> FiniteAlgebra:
    """Kleene 3-chain satisfying hN1-hN6 but not the neg-shift equation."""
    return chain(3, [[2, 2, 2],
                     [2, 2, 1],
                     [0, 1, 2]], names=["0", "a", "1"], neg=[2, 1, 0])


def chain2() -> FiniteAlgebra:
    return chain(2, [[1, 1], [0, 1]], names=["0", "1"])


def boolean4() -> FiniteAlgebra:
    """{0, a, b, 1} with ``x -> y = 1`` iff ``x <= y``, else 0."""
    meet = [[0, 0, 0, 0],
            [0, 1, 0, 1],
            [0, 0, 2, 2],
            [0, 1, 2, 3]]
    join = [[0, 1, 2, 3],
            [1, 1, 3, 3],
            [2, 3, 2, 3],
            [3, 3, 3, 3]]
    return order_implication(meet, join, 0, 3, names=["0", "a", "b", "1"])


def ck_fail_7():
    """K(boolean4) without (a,b) and (b,a); returns (subalgebra, inclusion)."""
    from .twist import twist
    k = twist(boolean4())
    keep = [i for i, p in enumerate(k.pairs) if p not in ((1, 2), (2, 1))]
    return subalgebra(k.algebra, keep)


def centerless_u():
    """{(0,1), (1,0)} inside K(boolean4)."""
    from .twist import twist
    k = twist(boolean4())
    return subalgebra(k.algebra, [k.index((0, 3)), k.index((3, 0))])


def boolean2() -> FiniteAlgebra:
    """Two-element Boolean algebra with ``~`` as complement."""
    return chain(2, [[1, 1], [0, 1]], names=["0", "1"], neg=[1, 0])


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    key: str
    algebra: FiniteAlgebra
    provenance: str
    expected: tuple  # (check, bool) pairs
    members: Optional[tuple] = None  # for filter fixtures

    def verify(self) -> list:
        """Re-check every expected fact; returns the mismatches."""
        from .twist import check_CK, check_C
        from .algebra import find_center
        bad = []
        for check, want in self.expected:
            if check == "CK":
                got = check_CK(self.algebra).passed
            elif check == "C":
                got = check_C(self.algebra).passed
            elif check == "center":
                got = find_center(self.algebra) is not None
            elif check == "h-implicative":
                from .filters import classify_filter, H_IMPLICATIVE
                got = H_IMPLICATIVE in classify_filter(self.algebra, self.members).kinds
            elif check == "open":
                from .filters import classify_filter, OPEN
                got = OPEN in classify_filter(self.algebra, self.members).kinds
            elif check == "n-implicative":
                from .filters import classify_filter, N_IMPLICATIVE
                got = N_IMPLICATIVE in classify_filter(self.algebra, self.members).kinds
            else:
                got = check_class(self.algebra, check, first_only=True).passed
            if got != want:
                bad.append((check, want, got))
        return bad

    def to_dict(self) -> dict:
        out = {"key": self.key, "provenance": self.provenance,
               "expected": [[c if isinstance(c, str) else c.value, w]
                            for c, w in self.expected],
               "algebra": self.algebra.to_dict()}
        if self.members is not None:
            out["members"] = list(self.members)
        return out


def _entries():
    from .twist import twist
    ex = example_hlattice()
    k = twist(ex).algebra
    seven, _ = ck_fail_7()
    u, _ = centerless_u()
    C = ClassId
    return [
        CatalogEntry("example-2.4", ex, "h-lattice on the 3-chain",
                     ((C.HIL, True), (C.SH, False), (C.SRL, False))),
        CatalogEntry("example-3.4", k, "twist of example-2.4: a 5-chain",
                     ((C.KHIL_QUASI, True), (C.KHIL_EQ, True), (C.SN, False),
                      (C.SNA, False), ("center", True), ("CK", True))),
        CatalogEntry("remark-kleene-3chain", remark_chain(),
                     "Kleene 3-chain: hN1-hN6 hold, neg-shift fails",
                     ((C.KLEENE, True), (C.KHIL_PRE, True), (C.KHIL_EQ, False),
                      (C.KHIL_QUASI, False))),
        CatalogEntry("boolean4-hil", boolean4(),
                     "four-element Boolean lattice with order implication",
                     ((C.HIL, True),)),
        CatalogEntry("ck-fail-7", seven,
                     "7-element subalgebra of K(boolean4-hil)",
                     ((C.KHIL_QUASI, True), ("center", True), ("CK", False),
                      ("C", False))),
        CatalogEntry("centerless-u", u, "{(0,1),(1,0)} inside K(boolean4-hil)",
                     ((C.KHIL_QUASI, True), ("center", False))),
        CatalogEntry("open-not-h-filter", k,
                     "filter {(a,0),(1,0)} of example-3.4",
                     (("open", True), ("n-implicative", True),
                      ("h-implicative", False)),
                     members=(k.names.index("(a,0)"), k.names.index("(1,0)"))),
        CatalogEntry("chain2-hil", chain2(), "2-chain with Boolean implication",
                     ((C.HIL, True), (C.SH, True), (C.SRL, True))),
        CatalogEntry("boolean2", boolean2(), "two-element Boolean algebra",
                     ((C.KHIL_QUASI, True), (C.NELSON, True), ("center", False))),
    ]


_CACHE = {}
ALIASES = {"remark-3chain": "remark-kleene-3chain", "boolean4": "boolean4-hil"}


def catalog(key: Optional[str] = None, verify: bool = True):
    """One entry by key, or the full list.  Expected facts are re-checked."""
    if "entries" not in _CACHE:
        entries = _entries()
        if verify:
            for e in entries:
                bad = e.verify()
                if bad:
                    raise AssertionError(f"catalog entry {e.key}: {bad}")
        _CACHE["entries"] = {e.key: e for e in entries}
    entries = _CACHE["entries"]
    if key is None:
        return list(entries.values())
    key = key[:-5] if key.endswith(".json") else key
    key = ALIASES.get(key, key)
    if key not in entries:
        raise UnknownKey(f"unknown catalog key {key!r}", known=sorted(entries))
    return entries[key]


# ----------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class EnumerationSpec:
    cls: ClassId
    size: int
    limit: Optional[int] = None
    up_to_iso: bool = False


def size_cap(needs_neg: bool) -> tuple:
    """(cap, warning) honouring the environment override."""
    cap = NEG_CAP if needs_neg else HIL_CAP
    override = os.environ.get(ENV_CAP)
    if override:
        try:
            value = int(override)
        except ValueError:
            return cap, f"ignored non-integer {ENV_CAP}={override!r}"
        return value, f"size cap overridden to {value} by {ENV_CAP}"
    return cap, None


def _lattice_algebra(leq):
    n = len(leq)
    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            lower = [z for z in range(n) if leq[z][x] and leq[z][y]]
            upper = [z for z in range(n) if leq[x][z] and leq[y][z]]
            glb = [z for z in lower if all(leq[w][z] for w in lower)]
            lub = [z for z in upper if all(leq[z][w] for w in upper)]
            if not glb or not lub:
                return None
            meet[x, y], join[x, y] = glb[0], lub[0]
    return FiniteAlgebra(n, meet, join, np.zeros((n, n), dtype=np.int64), 0, n - 1)


def enumerate_lattices(n: int, distributive: bool = True) -> list:
    """Bounded lattices of size ``n`` up to isomorphism, bottom 0, top n-1.

    The placeholder ``imp`` table of each result is all zeros.
    """
    if n == 1:
        return [FiniteAlgebra(1, [[0]], [[0]], [[0]], 0, 0)]
    middle = list(range(1, n - 1))
    pairs = [(i, j) for i in middle for j in middle if i < j]
    seen = set()
    out = []
    for bits in product((False, True), repeat=len(pairs)):
        leq = [[x == y or x == 0 or y == n - 1 for y in range(n)] for x in range(n)]
        for (i, j), b in zip(pairs, bits):
            leq[i][j] = b
        if not all(leq[x][z] or not (leq[x][y] and leq[y][z])
                   for x in range(n) for y in range(n) for z in range(n)):
            continue
        alg = _lattice_algebra(leq)
        if alg is None:
            continue
        if distributive:
            m, j = alg.meet, alg.join
            lhs = m[np.arange(n)[:, None, None], j[None, :, :]]
            rhs = j[m[:, :, None], m[:, None, :]]
            if (lhs != rhs).any():
                continue
        key = canonical_key(alg, ops=("meet", "join"))
        if key in seen:
            continue
        seen.add(key)
        out.append(alg)
    return out


def enumerate_kleene(n: int) -> list:
    """Kleene lattices (bounded distributive + ``~``) of size ``n`` up to
    isomorphism; ``imp`` is a zero placeholder."""
    out = []
    seen = set()
    ne = axiom_set(ClassId.KLEENE).sentences
    from .terms import check_sentence
    for lat in enumerate_lattices(n):
        leq = lat.leq
        for perm in permutations(range(n)):
            p = np.array(perm)
            if (p[p] != np.arange(n)).any():
                continue
            # order-reversing
            if not (leq <= leq[np.ix_(p, p)].T).all():
                continue
            alg = lat.replace(neg=p)
            if not all(check_sentence(s, alg).passed for s in ne):
                continue
            key = canonical_key(alg, ops=("meet", "join", "neg"))
            if key in seen:
                continue
            seen.add(key)
            out.append(alg)
    return out


def _imp_domains_hil(lat):
    n = lat.size
    leq = lat.leq
    doms = []
    for x, y in product(range(n), repeat=2):
        if x == y:
            doms.append([lat.top])
        else:
            doms.append([v for v in range(n) if leq[lat.meet[x, v], y]])
    return doms


_NO_NEG_CLASSES = {ClassId.HIL, ClassId.SH, ClassId.SRL}
_NEG_CLASSES = {ClassId.NELSON, ClassId.KHIL_PRE, ClassId.KHIL_EQ,
                ClassId.KHIL_QUASI, ClassId.SN, ClassId.SNA,
                ClassId.CENTERED_KHIL}


def _prune_sentences(cls):
    """Equations usable by the backtracker for ``cls``."""
    if cls in (ClassId.KHIL_QUASI, ClassId.CENTERED_KHIL):
        cls = ClassId.KHIL_PRE
    return [s for s in axiom_set(cls).sentences if s.kind in ("eq", "le")]


def enumerate_algebras(spec: EnumerationSpec, *, cap: Optional[int] = None
                       ) -> Iterator[FiniteAlgebra]:
    """Every algebra of ``spec.cls`` of size ``spec.size`` in a deterministic
    order: lattices up to isomorphism, then (for ``~`` classes) involutions,
    then implication tables in lexicographic order.

    With ``up_to_iso`` only the lexicographically least table of each orbit
    under the automorphisms of the underlying lattice (with ``~``) is kept.
    """
    cls = ClassId.parse(spec.cls)
    if cls not in _NO_NEG_CLASSES | _NEG_CLASSES:
        raise UnknownClass(f"class {cls.value} is not enumerable (no -> constraints)")
    needs_neg = cls in _NEG_CLASSES
    if cap is None:
        cap, warning = size_cap(needs_neg)
        if warning:
            log.warning(warning)
    if spec.size > cap:
        raise CapExceeded(f"size {spec.size} exceeds the cap {cap} for {cls.value}",
                          cap=cap)
    n = spec.size
    emitted = 0
    bases = enumerate_kleene(n) if needs_neg else enumerate_lattices(n)
    for base in bases:
        group = None
        if spec.up_to_iso:
            ops = ("meet", "join", "neg") if needs_neg else ("meet", "join")
            group = automorphisms(base, ops=ops)
        if needs_neg:
            tables = solve_imp(n, base.meet, base.join, base.neg, base.bot,
                               base.top, _prune_sentences(cls))
        else:
            tables = _hil_tables(base)
        for imp in tables:
            if group is not None and len(group) > 1:
                if imp.tobytes() != canonical_imp(imp, group):
                    continue
            alg = base.replace(imp=imp)
            if cls not in (ClassId.HIL, ClassId.KHIL_PRE) and \
                    not is_member(alg, cls):
                continue
            yield alg
            emitted += 1
            if spec.limit is not None and emitted >= spec.limit:
                return


def _hil_tables(lat):
    n = lat.size
    doms = _imp_domains_hil(lat)
    for values in product(*doms):
        yield np.array(values, dtype=np.int64).reshape(n, n)


# ----------------------------------------------------------------------
# counterexample search


@dataclass(frozen=True)
class Property:
    name: str
    cls: ClassId          # what gets enumerated
    holds: Callable       # algebra -> bool
    description: str
    min_size: int = 1


def _twist_in_khil(a):
    from .twist import twist
    k = twist(a, check=False).algebra
    return is_member(k, ClassId.KHIL_QUASI) and is_member(k, ClassId.KHIL_EQ)


def _theta_eq(t):
    from .twist import theta, theta_minus
    return theta(t, check=False) == theta_minus(t)


def _neg_shift(t):
    from .axioms import NEG_SHIFT
    from .terms import holds
    return holds(NEG_SHIFT, t)


def _variety(t):
    return is_member(t, ClassId.KHIL_EQ) == is_member(t, ClassId.KHIL_QUASI)


def _alpha_iso(a):
    from .twist import alpha
    alpha(a, check=False)
    return True


def _kalman_ck(a):
    from .twist import check_CK, twist
    return check_CK(twist(a, check=False).algebra).passed


def _rho_vs_c(t):
    from .algebra import find_center
    from .twist import check_C, check_CK, rho
    emb = rho(t, check=False)
    c = find_center(t)
    if c is None:
        return emb.injective
    tc = t.replace(center=c)
    return emb.injective and emb.surjective == check_C(tc).passed == check_CK(tc).passed


def _con_iso(t):
    from .filters import verify_correspondence
    return verify_correspondence(t).passed


def _sh_transfer(a):
    from .twist import twist
    return is_member(a, ClassId.SH) == is_member(twist(a, check=False).algebra, ClassId.SN)


def _srl_transfer(a):
    from .twist import twist
    return is_member(a, ClassId.SRL) == is_member(twist(a, check=False).algebra, ClassId.SNA)


def _sn_filters(t):
    from .filters import H_IMPLICATIVE, N_IMPLICATIVE, enumerate_filters
    if not is_member(t, ClassId.SN):
        return True
    return ([f.members for f in enumerate_filters(t, H_IMPLICATIVE)]
            == [f.members for f in enumerate_filters(t, N_IMPLICATIVE)])


def _sna_filters(t):
    from .filters import H_IMPLICATIVE, OPEN, enumerate_filters
    if not is_member(t, ClassId.SNA):
        return True
    return ([f.members for f in enumerate_filters(t, H_IMPLICATIVE)]
            == [f.members for f in enumerate_filters(t, OPEN)])


PROPERTIES = {p.name: p for p in [
    Property("eqn5-independent-of-hN1-6", ClassId.KHIL_PRE, _neg_shift,
             "neg-shift follows from hN1-hN6 (false: expect a counterexample)"),
    Property("kalman-twist-in-khil", ClassId.HIL, _twist_in_khil,
             "K(A) is hemi-Nelson for every h-lattice A"),
    Property("theta-equals-theta-minus-in-khil", ClassId.KHIL_QUASI, _theta_eq,
             "theta coincides with the negative-element relation"),
    Property("variety", ClassId.KHIL_PRE, _variety,
             "neg-shift is equivalent to hN7-hN10 given hN1-hN6"),
    Property("alpha-iso", ClassId.HIL, _alpha_iso,
             "alpha is an isomorphism"),
    Property("twist-satisfies-ck", ClassId.HIL, _kalman_ck,
             "K(A) satisfies CK"),
    Property("rho-surjective-iff-c", ClassId.KHIL_QUASI, _rho_vs_c,
             "rho is injective, and onto exactly when C (equivalently CK) holds"),
    Property("con-iso", ClassId.KHIL_QUASI, _con_iso,
             "congruences correspond to h-implicative filters"),
    Property("sh-transfer", ClassId.HIL, _sh_transfer,
             "A is semi-Heyting iff K(A) is semi-Nelson"),
    Property("srl-transfer", ClassId.HIL, _srl_transfer,
             "A is subresiduated iff K(A) is subresiduated Nelson"),
    Property("filter-coincidence-sn", ClassId.KHIL_QUASI, _sn_filters,
             "on semi-Nelson algebras h-implicative = N-implicative filters"),
    Property("filter-coincidence-sna", ClassId.KHIL_QUASI, _sna_filters,
             "on subresiduated Nelson algebras h-implicative = open filters"),
]}


def search_counterexample(prop: str, max_size: int, up_to_iso: bool = True
                          ) -> Optional[FiniteAlgebra]:
    """First algebra, in enumeration order, on which ``prop`` fails."""
    if prop not in PROPERTIES:
        raise UnknownProperty(f"unknown property {prop!r}", known=sorted(PROPERTIES))
    p = PROPERTIES[prop]
    for n in range(p.min_size, max_size + 1):
        for alg in enumerate_algebras(EnumerationSpec(p.cls, n, up_to_iso=up_to_iso)):
            if not p.holds(alg):
                return alg
    return None
