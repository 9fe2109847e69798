"""Backtracking search for implication tables satisfying a set of equations.

The lattice (and ``~``) are fixed; the ``n*n`` cells of ``->`` are assigned
in row-major order.  Every ground instance of every equation is evaluated
against the partial table; an instance that needs an unassigned cell is
parked on that cell and re-evaluated when the cell gets a value.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .terms import Bin, Const, Neg, Var, desugar


def _compile(t, names, n, meet, join, neg, imp, consts):
    """Closure evaluating ``t``; a negative result ``-(cell+1)`` means the
    value depends on the unassigned cell."""
    if isinstance(t, Var):
        i = names.index(t.name)
        return lambda env: env[i]
    if isinstance(t, Const):
        k = consts[t.kind]
        return lambda env: k
    if isinstance(t, Neg):
        f = _compile(t.arg, names, n, meet, join, neg, imp, consts)

        def ev_neg(env):
            v = f(env)
            return v if v < 0 else neg[v]
        return ev_neg
    f = _compile(t.left, names, n, meet, join, neg, imp, consts)
    g = _compile(t.right, names, n, meet, join, neg, imp, consts)
    if t.op == "imp":
        def ev_imp(env):
            a = f(env)
            if a < 0:
                return a
            b = g(env)
            if b < 0:
                return b
            cell = a * n + b
            v = imp[cell]
            return v if v >= 0 else -(cell + 1)
        return ev_imp
    table = meet if t.op == "meet" else join

    def ev_lat(env):
        a = f(env)
        if a < 0:
            return a
        b = g(env)
        if b < 0:
            return b
        return table[a][b]
    return ev_lat


def solve_imp(n: int, meet, join, neg, bot: int, top: int,
              equations: Sequence, domains=None) -> Iterator[np.ndarray]:
    """Yield every ``n x n`` table satisfying all ``equations`` (pairs of
    terms, or Sentence objects of kind eq/le), in lexicographic order of the
    row-major table."""
    meet = [list(map(int, row)) for row in np.asarray(meet)]
    join = [list(map(int, row)) for row in np.asarray(join)]
    neg = None if neg is None else [int(v) for v in neg]
    imp = [-1] * (n * n)
    consts = {"0": bot, "1": top, "c": -1}
    if neg is not None:
        fixed = [x for x in range(n) if neg[x] == x]
        if fixed:
            consts["c"] = fixed[0]

    instances = []
    for e in equations:
        if hasattr(e, "equations"):
            pairs = [(desugar(l), desugar(r)) for l, r in e.equations()]
        else:
            pairs = [(desugar(e[0]), desugar(e[1]))]
        for l, r in pairs:
            names = sorted(_vars(l) | _vars(r))
            lf = _compile(l, names, n, meet, join, neg, imp, consts)
            rf = _compile(r, names, n, meet, join, neg, imp, consts)
            for env in product(range(n), repeat=len(names)):
                instances.append((lf, rf, env))

    watches = [[] for _ in range(n * n)]

    def status(inst):
        lf, rf, env = inst
        a = lf(env)
        if a < 0:
            return -a - 1
        b = rf(env)
        if b < 0:
            return -b - 1
        return -1 if a == b else -2

    for inst in instances:
        s = status(inst)
        if s == -2:
            return
        if s >= 0:
            watches[s].append(inst)

    if domains is None:
        domains = [list(range(n))] * (n * n)

    def assign(cell):
        """Set-up after imp[cell] was written: move the parked instances.
        Returns the trail of moves, or None on a violation."""
        pending = watches[cell]
        watches[cell] = []
        moved = []
        for k, inst in enumerate(pending):
            s = status(inst)
            if s == -2:
                for target in reversed(moved):
                    watches[target].pop()
                watches[cell] = pending
                return None
            if s >= 0:
                watches[s].append(inst)
                moved.append(s)
        return pending, moved

    def undo(cell, trail):
        pending, moved = trail
        for target in reversed(moved):
            watches[target].pop()
        watches[cell] = pending

    def rec(cell):
        if cell == n * n:
            yield np.array(imp, dtype=np.int64).reshape(n, n)
            return
        for v in domains[cell]:
            imp[cell] = v
            trail = assign(cell)
            if trail is not None:
                yield from rec(cell + 1)
                undo(cell, trail)
        imp[cell] = -1

    yield from rec(0)


def _vars(t):
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, Neg):
        return _vars(t.arg)
    if isinstance(t, Bin):
        return _vars(t.left) | _vars(t.right)
    raise TypeError(t)
