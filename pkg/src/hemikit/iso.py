"""Isomorphism search between small algebras.

Elements are first colored by iterated refinement (order type, ``~``-orbit
size, then the colors of everything each element produces), and the
backtracker only tries color-preserving assignments.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Iterator, Optional

import numpy as np

from .algebra import FiniteAlgebra, Homomorphism
from .errors import TooLarge

ISO_CAP = 12


def _ops(alg, ops):
    return [op for op in ops if getattr(alg, op) is not None]


def _initial(alg):
    leq = alg.leq
    down = leq.sum(axis=0)
    up = leq.sum(axis=1)
    if alg.neg is not None:
        orbit = np.where(alg.neg == np.arange(alg.size), 1, 2)
    else:
        orbit = np.zeros(alg.size, dtype=int)
    return [(int(down[x]), int(up[x]), int(orbit[x]),
             x == alg.bot, x == alg.top) for x in range(alg.size)]


def colors(*algs, ops=("meet", "join", "imp", "neg")) -> list:
    """Joint color refinement: colors are comparable across ``algs``."""
    current = _rank([_initial(a) for a in algs])
    while True:
        sigs = []
        for alg, cs in zip(algs, current):
            sig = []
            for x in range(alg.size):
                parts = [cs[x]]
                for op in _ops(alg, ops):
                    t = getattr(alg, op)
                    if op == "neg":
                        parts.append(cs[int(t[x])])
                    else:
                        parts.append(tuple(sorted(
                            (cs[y], cs[int(t[x, y])], cs[int(t[y, x])])
                            for y in range(alg.size))))
                sig.append(tuple(parts))
            sigs.append(sig)
        new = _rank(sigs)
        # refinement never merges classes; stop when the count is stable
        if all(len(set(n)) == len(set(c)) for n, c in zip(new, current)):
            return new
        current = new


def _rank(sigs):
    # numbering by sorted signature keeps colors independent of labels
    order = {s: i for i, s in enumerate(sorted({s for sig in sigs for s in sig}))}
    return [[order[s] for s in sig] for sig in sigs]


def isomorphisms(a: FiniteAlgebra, b: FiniteAlgebra,
                 ops=("meet", "join", "imp", "neg"),
                 cap: int = ISO_CAP) -> Iterator[tuple]:
    """Yield every bijection ``a -> b`` preserving ``ops`` and the bounds."""
    if a.size != b.size:
        return
    if a.size > cap:
        raise TooLarge(f"isomorphism search is capped at size {cap}")
    ops = [op for op in ops if getattr(a, op) is not None and getattr(b, op) is not None]
    ca, cb = colors(a, b, ops=ops)
    if sorted(ca) != sorted(cb):
        return
    by_color = {}
    for y, c in enumerate(cb):
        by_color.setdefault(c, []).append(y)
    order = sorted(range(a.size), key=lambda x: (len(by_color[ca[x]]), x))
    n = a.size
    f = [-1] * n
    used = [False] * n
    ta = [getattr(a, op) for op in ops]
    tb = [getattr(b, op) for op in ops]
    unary = [op == "neg" for op in ops]

    def consistent(x):
        fx = f[x]
        for t1, t2, un in zip(ta, tb, unary):
            if un:
                v = int(t1[x])
                if f[v] >= 0 and f[v] != int(t2[fx]):
                    return False
                continue
            for y in range(n):
                fy = f[y]
                if fy < 0:
                    continue
                v = int(t1[x, y])
                if f[v] >= 0 and f[v] != int(t2[fx, fy]):
                    return False
                v = int(t1[y, x])
                if f[v] >= 0 and f[v] != int(t2[fy, fx]):
                    return False
        return True

    def rec(i):
        if i == n:
            yield tuple(f)
            return
        x = order[i]
        for y in by_color[ca[x]]:
            if used[y]:
                continue
            f[x] = y
            used[y] = True
            if consistent(x) and _earlier_ok(x):
                yield from rec(i + 1)
            f[x] = -1
            used[y] = False

    def _earlier_ok(x):
        # images of x under ops may land on already-assigned elements
        for t1, t2, un in zip(ta, tb, unary):
            if un:
                for y in range(n):
                    if f[y] >= 0 and f[int(t1[y])] >= 0 and f[int(t1[y])] != int(t2[f[y]]):
                        return False
        return True

    yield from rec(0)


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra,
                     ops=("meet", "join", "imp", "neg")) -> Optional[Homomorphism]:
    for f in isomorphisms(a, b, ops=ops):
        return Homomorphism(a, b, f)
    return None


def is_isomorphic(a, b, ops=("meet", "join", "imp", "neg")) -> bool:
    return find_isomorphism(a, b, ops=ops) is not None


def automorphisms(alg: FiniteAlgebra, ops=("meet", "join", "neg")) -> list:
    return list(isomorphisms(alg, alg, ops=ops, cap=max(ISO_CAP, alg.size)))


def canonical_imp(imp: np.ndarray, group) -> bytes:
    """Least encoding of ``imp`` over its images under ``group``."""
    best = None
    for g in group:
        g = np.asarray(g)
        inv = np.empty_like(g)
        inv[g] = np.arange(len(g))
        moved = g[imp[np.ix_(inv, inv)]].tobytes()
        if best is None or moved < best:
            best = moved
    return best


def canonical_key(alg: FiniteAlgebra, ops=("meet", "join", "imp", "neg")) -> tuple:
    """An isomorphism-invariant key: least table encoding over all
    color-respecting relabelings."""
    if alg.size > ISO_CAP:
        raise TooLarge(f"canonical forms are capped at size {ISO_CAP}")
    ops = _ops(alg, ops)
    (cs,) = colors(alg, ops=ops)
    # order color classes by a label-free signature
    classes = {}
    for x, c in enumerate(cs):
        classes.setdefault(c, []).append(x)
    ordered = sorted(classes)
    best = None
    for choice in product(*(permutations(classes[c]) for c in ordered)):
        order = [x for block in choice for x in block]
        perm = np.empty(alg.size, dtype=np.int64)
        perm[order] = np.arange(alg.size)
        inv = np.array(order)
        enc = []
        for op in ops:
            t = getattr(alg, op)
            if op == "neg":
                enc.append(tuple(perm[t[inv]].tolist()))
            else:
                enc.append(tuple(perm[t[np.ix_(inv, inv)]].ravel().tolist()))
        enc = tuple(enc)
        if best is None or enc < best:
            best = enc
    return (alg.size, tuple(ops), best)

