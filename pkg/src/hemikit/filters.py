"""Filters and congruences of hemi-Nelson algebras.

Filters are subsets of the carrier, handled internally as boolean
membership vectors and ordered by their bitmask (bit ``x`` set when ``x``
is a member).  Congruences are canonical block labelings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import _kernels, partition
from .algebra import CheckReport, Failure, FiniteAlgebra, report
from .errors import (
    NotACongruence,
    NotASubset,
    NotHImplicative,
    NotTransitive,
    TooLarge,
)

LATTICE_FILTER = "LATTICE_FILTER"
IMPLICATIVE = "IMPLICATIVE"
OPEN = "OPEN"
N_IMPLICATIVE = "N_IMPLICATIVE"
H_IMPLICATIVE = "H_IMPLICATIVE"
KINDS = (LATTICE_FILTER, IMPLICATIVE, OPEN, N_IMPLICATIVE, H_IMPLICATIVE)
SCHEMES = ("F1", "F2", "F3", "F4")

# kinds whose members are always upsets
UPSET_KINDS = (LATTICE_FILTER, N_IMPLICATIVE, H_IMPLICATIVE)

FILTER_CAP = 20
CONGRUENCE_CAP = 12


def parse_kind(text) -> str:
    key = str(text).strip().upper().replace("-", "_")
    aliases = {"LATTICE": LATTICE_FILTER, "FILTER": LATTICE_FILTER,
               "H": H_IMPLICATIVE, "N": N_IMPLICATIVE,
               "HIF": H_IMPLICATIVE}
    key = aliases.get(key, key)
    if key not in KINDS:
        raise ValueError(f"unknown filter kind {text!r}; expected one of {KINDS}")
    return key


# ----------------------------------------------------------------------
# precomputed tables


class _Tables:
    """Everything the filter predicates need, computed once per algebra."""

    def __init__(self, alg: FiniteAlgebra):
        n = alg.size
        m, i = alg.meet, alg.imp
        self.alg = alg
        self.n = n
        self.leq = alg.leq
        self.imp_n = i[np.arange(n)[:, None], m]  # x ->n y = x -> (x /\ y)
        self.one_imp = i[alg.top]
        x = np.arange(n)[:, None, None]
        y = np.arange(n)[None, :, None]
        f = np.arange(n)[None, None, :]
        a = np.broadcast_to(i[:, :, None], (n, n, n))   # x -> y
        b = i[m[x, f], m[y, f]]                        # (x/\f) -> (y/\f)
        self.schemes = {"F1": i[a, b], "F2": i[b, a]}
        if alg.neg is not None:
            ng = alg.neg
            self.schemes["F3"] = i[ng[a], ng[b]]
            self.schemes["F4"] = i[ng[b], ng[a]]
            # F1-F4 side by side, indexed [f, scheme, x, y]
            self.stacked = np.stack([self.schemes[k] for k in SCHEMES]).transpose(3, 0, 1, 2)


_TABLE_CACHE: dict = {}


def _tables(alg: FiniteAlgebra) -> _Tables:
    key = id(alg)
    hit = _TABLE_CACHE.get(key)
    if hit is not None and hit.alg is alg:
        return hit
    if len(_TABLE_CACHE) > 64:
        _TABLE_CACHE.clear()
    t = _Tables(alg)
    _TABLE_CACHE[key] = t
    return t


def _first(mask) -> Optional[tuple]:
    if not mask.any():
        return None
    return tuple(int(v) for v in np.argwhere(mask)[0])


# ----------------------------------------------------------------------
# predicates (each returns the least witness, or None)


def _lattice_witness(t: _Tables, inF):
    alg = t.alg
    if not inF[alg.top]:
        return ("top", ())
    w = _first(inF[:, None] & t.leq & ~inF[None, :])
    if w:
        return ("upset", w)
    w = _first(inF[:, None] & inF[None, :] & ~inF[alg.meet])
    if w:
        return ("meet", w)
    return None


def _mp_witness(inF, top, table):
    if not inF[top]:
        return ("top", ())
    w = _first(inF[:, None] & inF[table] & ~inF[None, :])
    return ("modus-ponens", w) if w else None


def _open_witness(t: _Tables, inF):
    w = _first(inF & ~inF[t.one_imp])
    return ("open", (w[0],)) if w else None


def _scheme_witness(t: _Tables, inF, scheme):
    table = t.schemes[scheme]
    w = _first(inF[None, None, :] & ~inF[table])
    if w is None:
        return None
    return (scheme, w, int(table[w]))


# ----------------------------------------------------------------------
# FilterSet


@dataclass(frozen=True, eq=False)
class FilterSet:
    algebra: FiniteAlgebra
    members: tuple
    kinds: frozenset
    witnesses: tuple = ()  # Failure per violated condition

    @property
    def mask(self) -> int:
        return sum(1 << x for x in self.members)

    def __contains__(self, x) -> bool:
        return int(x) in self.members

    def __eq__(self, other):
        return (isinstance(other, FilterSet) and other.members == self.members
                and other.algebra == self.algebra)

    def __hash__(self):
        return hash(self.members)

    def witness(self, name) -> Optional[Failure]:
        for f in self.witnesses:
            if f.axiom == name:
                return f
        return None

    def to_dict(self) -> dict:
        out = {"members": list(self.members),
               "kinds": [k for k in KINDS if k in self.kinds]}
        if self.algebra.names:
            out["named"] = [self.algebra.name(x) for x in self.members]
        if self.witnesses:
            out["violations"] = [f.to_dict(self.algebra) for f in self.witnesses]
        return out


def _members(alg, subset) -> np.ndarray:
    inF = np.zeros(alg.size, dtype=bool)
    for x in subset:
        x = int(x)
        if not 0 <= x < alg.size:
            raise NotASubset(f"{x} is not an element of the algebra", element=x)
        inF[x] = True
    return inF


def _as_failure(name, w, lhs=None):
    if w is None:
        return None
    if name in SCHEMES:
        names = ("x", "y", "f")
    elif name.endswith("open"):
        names = ("x",)
    else:
        names = ("x", "y")
    return Failure(name, tuple(zip(names, w)), lhs)


def _classify(t: _Tables, inF, witnesses: bool = True):
    kinds = set()
    fails = []

    def note(prefix, w):
        if w is None:
            return True
        if witnesses:
            kind, where = w[0], w[1]
            fails.append(Failure(f"{prefix}:{kind}", tuple(
                zip(("x", "y"), where)) if kind != "top" else ()))
        return False

    if note(LATTICE_FILTER, _lattice_witness(t, inF)):
        kinds.add(LATTICE_FILTER)
    implicative = note(IMPLICATIVE, _mp_witness(inF, t.alg.top, t.alg.imp))
    if implicative:
        kinds.add(IMPLICATIVE)
        w = _open_witness(t, inF)
        if w is None:
            kinds.add(OPEN)
        elif witnesses:
            fails.append(_as_failure(f"{OPEN}:open", w[1]))
    if note(N_IMPLICATIVE, _mp_witness(inF, t.alg.top, t.imp_n)):
        kinds.add(N_IMPLICATIVE)
    h_ok = implicative
    for scheme in SCHEMES:
        if scheme not in t.schemes:
            h_ok = False
            continue
        w = _scheme_witness(t, inF, scheme)
        if w is not None:
            h_ok = False
            if witnesses:
                fails.append(_as_failure(scheme, w[1], w[2]))
            elif not implicative:
                break
    if h_ok:
        kinds.add(H_IMPLICATIVE)
        if OPEN not in kinds or N_IMPLICATIVE not in kinds:
            raise AssertionError("h-implicative filter that is not open and "
                                 "N-implicative: the algebra is not hemi-Nelson")
    return frozenset(kinds), tuple(fails)


def classify_filter(T: FiniteAlgebra, subset: Iterable[int]) -> FilterSet:
    """Tag ``subset`` with every filter kind it satisfies.

    ``witnesses`` holds the least violating instance of each failed
    condition; for F1-F4 the failure records ``x``, ``y``, ``f`` and the
    value of the scheme term (which lies outside the set).
    """
    inF = _members(T, subset)
    kinds, fails = _classify(_tables(T), inF)
    return FilterSet(T, tuple(np.flatnonzero(inF).tolist()), kinds, fails)


def has_kind(T: FiniteAlgebra, subset, kind) -> bool:
    return parse_kind(kind) in classify_filter(T, subset).kinds


def _holds(t: _Tables, inF, kind) -> bool:
    alg = t.alg
    if kind == LATTICE_FILTER:
        return _lattice_witness(t, inF) is None
    if kind == N_IMPLICATIVE:
        return _mp_witness(inF, alg.top, t.imp_n) is None
    if _mp_witness(inF, alg.top, alg.imp) is not None:
        return False
    if kind == IMPLICATIVE:
        return True
    if kind == OPEN:
        return _open_witness(t, inF) is None
    if len(t.schemes) < 4:
        return False
    return bool(inF[t.stacked[inF]].all())


def upsets(alg: FiniteAlgebra) -> list:
    """All nonempty upsets containing the top, as boolean vectors in
    ascending bitmask order."""
    key = (alg.top, alg.leq.tobytes())
    hit = _UPSET_CACHE.get(key)
    if hit is None:
        if len(_UPSET_CACHE) > 256:
            _UPSET_CACHE.clear()
        hit = _UPSET_CACHE[key] = _upsets(alg.size, alg.leq, alg.top)
    return hit


_UPSET_CACHE: dict = {}


def _upsets(n, leq, top):
    # decide elements from the top down so each choice only depends on
    # elements already decided
    order = sorted(range(n), key=lambda x: -int(leq[:, x].sum()))
    out = []
    inF = np.zeros(n, dtype=bool)

    def rec(k):
        if k == n:
            out.append(inF.copy())
            return
        x = order[k]
        above = leq[x] & (np.arange(n) != x)
        if inF[above].all():
            inF[x] = True
            rec(k + 1)
            inF[x] = False
        if x != top:
            rec(k + 1)

    rec(0)
    out.sort(key=_mask)
    return out


def _mask(inF) -> int:
    return sum(1 << int(x) for x in np.flatnonzero(inF))


def _subsets(n):
    for mask in range(1 << n):
        yield np.array([(mask >> x) & 1 for x in range(n)], dtype=bool)


def enumerate_filters(T: FiniteAlgebra, kind) -> list:
    """All subsets of ``kind`` in ascending bitmask order.

    Kinds whose members are upsets are searched among the upsets only;
    the others by a scan over all subsets.
    """
    kind = parse_kind(kind)
    if T.size > FILTER_CAP:
        raise TooLarge(f"filter enumeration is capped at size {FILTER_CAP}",
                       cap=FILTER_CAP)
    t = _tables(T)
    out = []
    for inF in _matching(T, kind):
        kinds, _ = _classify(t, inF, witnesses=False)
        out.append(FilterSet(T, tuple(np.flatnonzero(inF).tolist()), kinds))
    return out


def _matching(T: FiniteAlgebra, kind) -> list:
    """Membership vectors of every subset of ``kind``, bitmask order."""
    t = _tables(T)
    source = upsets(T) if kind in UPSET_KINDS else _subsets(T.size)
    return [inF for inF in source if _holds(t, inF, kind)]


def generated_filter(T: FiniteAlgebra, subset) -> FilterSet:
    """Least h-implicative filter containing ``subset``: close under the
    top, modus ponens and the four schemes until nothing changes."""
    t = _tables(T)
    if len(t.schemes) < 4:
        from .errors import MissingNegation
        raise MissingNegation("h-implicative filters need ~")
    inF = _members(T, subset)
    inF[T.top] = True
    while True:
        new = inF.copy()
        # modus ponens: y with some x in F and x -> y in F
        new |= (inF[:, None] & inF[T.imp]).any(axis=0)
        for scheme in SCHEMES:
            vals = t.schemes[scheme][:, :, inF]
            new[vals.ravel()] = True
        if (new == inF).all():
            break
        inF = new
    return classify_filter(T, np.flatnonzero(inF))


# ----------------------------------------------------------------------
# congruences


@dataclass(frozen=True, eq=False)
class Congruence:
    algebra: FiniteAlgebra
    labels: tuple

    @property
    def blocks(self) -> int:
        return partition.num_blocks(self.labels)

    def block_of(self, x) -> tuple:
        v = self.labels[int(x)]
        return tuple(i for i, w in enumerate(self.labels) if w == v)

    def __eq__(self, other):
        return isinstance(other, Congruence) and other.labels == self.labels

    def __hash__(self):
        return hash(self.labels)

    def __le__(self, other):
        return partition.refines(self.labels, other.labels)

    def to_dict(self) -> dict:
        return {"blocks": list(self.labels)}


def translations(alg: FiniteAlgebra) -> np.ndarray:
    """Rows are the basic unary polynomials ``x -> op(x, z)``,
    ``x -> op(z, x)`` and ``~``."""
    rows = []
    for op in ("meet", "join", "imp"):
        t = getattr(alg, op)
        rows.append(t.T)  # row z: x -> t[x, z]
        if op == "imp":
            rows.append(t)  # row z: x -> t[z, x]
    if alg.neg is not None:
        rows.append(alg.neg[None, :])
    return np.concatenate(rows, axis=0)


def congruence_witness(alg: FiniteAlgebra, labels) -> Optional[Failure]:
    """Least pair of related elements some operation separates."""
    lab = np.asarray(labels)
    # fast path: every row and column of each table is constant on blocks
    # up to relabeling, i.e. equal to the one of the block's first element
    first = np.unique(lab, return_index=True)[1][np.unique(lab, return_inverse=True)[1]]
    tables = [getattr(alg, op) for op in ("meet", "join", "imp")]
    if all((lab[t] == lab[t][first]).all() and (lab[t.T] == lab[t.T][first]).all()
           for t in tables) and (alg.neg is None or
                                 (lab[alg.neg] == lab[alg.neg][first]).all()):
        return None
    same = lab[:, None] == lab[None, :]
    for op, t in zip(("meet", "join", "imp"), tables):
        # (x, y) related, z arbitrary: t[x,z] ~ t[y,z] and t[z,x] ~ t[z,y]
        left = lab[t][:, None, :] != lab[t][None, :, :]
        right = lab[t.T][:, None, :] != lab[t.T][None, :, :]
        bad = same[:, :, None] & (left | right)
        w = _first(bad)
        if w:
            return Failure(op, (("x", w[0]), ("y", w[1]), ("z", w[2])))
    if alg.neg is not None:
        bad = same & (lab[alg.neg][:, None] != lab[alg.neg][None, :])
        w = _first(bad)
        if w:
            return Failure("neg", (("x", w[0]), ("y", w[1])))
    raise AssertionError("congruence check paths disagree")


def is_congruence(alg: FiniteAlgebra, labels) -> bool:
    return congruence_witness(alg, labels) is None


def principal_congruence(alg: FiniteAlgebra, a: int, b: int,
                         trans: Optional[np.ndarray] = None) -> tuple:
    """Least congruence identifying ``a`` and ``b``: union-find closure of
    the pair under every basic translation."""
    if trans is None:
        trans = translations(alg)
    cols = np.ascontiguousarray(trans.T, dtype=np.int64)
    return partition.canonical(_kernels.principal_labels(cols, int(a), int(b)))


def enumerate_congruences(T: FiniteAlgebra) -> list:
    """All congruences, sorted by block labeling: the principal ones plus
    the identity, closed under joins."""
    if T.size > CONGRUENCE_CAP:
        raise TooLarge(f"congruence enumeration is capped at size {CONGRUENCE_CAP}",
                       cap=CONGRUENCE_CAP)
    n = T.size
    trans = translations(T)
    found = {partition.identity(n)}
    principal = set()
    if n > 1:
        cols = np.ascontiguousarray(trans.T, dtype=np.int64)
        for row in _kernels.all_principal(cols):
            principal.add(partition.canonical(row))
    found |= principal
    frontier = list(found)
    while frontier:
        new = []
        for p in frontier:
            for q in principal:
                r = partition.join(p, q)
                if r not in found:
                    found.add(r)
                    new.append(r)
        frontier = new
    return [Congruence(T, labels) for labels in sorted(found)]


def _s_table(T: FiniteAlgebra) -> np.ndarray:
    """``s(x, y) = (x <-> y) /\\ (~x <-> ~y)`` for all pairs."""
    i, m, ng = T.imp, T.meet, T.neg
    iff = m[i, i.T]
    niff = iff[np.ix_(ng, ng)]
    return m[iff, niff]


def congruence_from_filter(T: FiniteAlgebra, F) -> Congruence:
    """The relation ``s(x, y) in F`` of an h-implicative filter."""
    if not isinstance(F, FilterSet):
        F = classify_filter(T, F)
    if H_IMPLICATIVE not in F.kinds:
        raise NotHImplicative("filter is not h-implicative",
                              members=list(F.members))
    inF = _members(T, F.members)
    rel = inF[_s_table(T)]
    try:
        labels = partition.from_relation(rel)
    except NotTransitive as e:
        raise AssertionError(f"relation of an h-implicative filter is not an "
                             f"equivalence: {e}") from e
    w = congruence_witness(T, labels)
    if w is not None:
        raise AssertionError(f"relation of an h-implicative filter is not a "
                             f"congruence: {w}")
    return Congruence(T, labels)


def filter_of_congruence(T: FiniteAlgebra, theta) -> FilterSet:
    """The block of the top element."""
    labels = theta.labels if isinstance(theta, Congruence) else tuple(theta)
    if len(labels) != T.size:
        raise NotACongruence("labeling has the wrong length")
    labels = partition.canonical(labels)
    w = congruence_witness(T, labels)
    if w is not None:
        raise NotACongruence("not compatible with the operations",
                             witness=w.to_dict(T))
    members = [x for x in range(T.size) if labels[x] == labels[T.top]]
    F = classify_filter(T, members)
    if H_IMPLICATIVE not in F.kinds:
        raise AssertionError("top block of a congruence is not h-implicative")
    return F


def verify_correspondence(T: FiniteAlgebra) -> CheckReport:
    """Check that ``F -> Theta(F)`` and ``theta -> 1/theta`` are mutually
    inverse, order-preserving bijections between the h-implicative filters
    and the congruences.

    Both sides are enumerated independently (congruences by principal
    generation, filters by scanning upsets); each map must land in the
    other enumerated set, which is what certifies its values.
    """
    if T.neg is None:
        from .errors import MissingNegation
        raise MissingNegation("h-implicative filters need ~")
    if T.size > FILTER_CAP:
        raise TooLarge(f"filter enumeration is capped at size {FILTER_CAP}",
                       cap=FILTER_CAP)
    cons = [c.labels for c in enumerate_congruences(T)]
    filters = _matching(T, H_IMPLICATIVE)
    members = [tuple(np.flatnonzero(inF).tolist()) for inF in filters]
    s = _s_table(T)
    con_set = set(cons)
    filter_index = {m: k for k, m in enumerate(members)}
    failures = []
    theta_of = []
    for inF, F in zip(filters, members):
        mask = sum(1 << x for x in F)
        try:
            labels = partition.from_relation(inF[s])
        except NotTransitive:
            labels = None
        theta_of.append(labels)
        if labels not in con_set:
            failures.append(Failure("filter-image-not-found", (("filter", mask),)))
            continue
        top = labels[T.top]
        back = tuple(x for x in range(T.size) if labels[x] == top)
        if back != F:
            failures.append(Failure("filter-round-trip", (("filter", mask),)))
    for k, labels in enumerate(cons):
        top = labels[T.top]
        F = tuple(x for x in range(T.size) if labels[x] == top)
        j = filter_index.get(F)
        if j is None or theta_of[j] != labels:
            failures.append(Failure("congruence-round-trip", (("congruence", k),)))
    for a, F in enumerate(members):
        for b, G in enumerate(members):
            if theta_of[a] is None or theta_of[b] is None:
                continue
            sub = set(F) <= set(G)
            if sub != partition.refines(theta_of[a], theta_of[b]):
                failures.append(Failure("order", (("F", a), ("G", b))))
    if len(cons) != len(filters):
        failures.append(Failure("count", (), len(cons), len(filters)))
    pairs = [[list(F), None if lab is None else list(lab)]
             for F, lab in zip(members, theta_of)]
    return report(failures, congruences=len(cons), filters=len(filters),
                  pairs=pairs)
