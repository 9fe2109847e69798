"""Slow, independent reference implementations used to cross-check the
library.  Everything here is scalar Python over plain lists."""

from itertools import product


def tables(alg):
    """Plain-list copies of an algebra's tables."""
    return (alg.meet.tolist(), alg.join.tolist(), alg.imp.tolist(),
            None if alg.neg is None else alg.neg.tolist())


def leq(alg):
    m = alg.meet.tolist()
    n = alg.size
    return [[m[x][y] == x for y in range(n)] for x in range(n)]


def is_hil(alg):
    m, j, i, _ = tables(alg)
    n = alg.size
    le = leq(alg)
    for x in range(n):
        if i[x][x] != alg.top:
            return False
        for y in range(n):
            if not le[m[x][i[x][y]]][y]:
                return False
    return True


def set_partitions(n):
    """Restricted growth strings of length n."""
    if n == 0:
        yield ()
        return

    def rec(prefix, k):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(k + 1):
            yield from rec(prefix + [v], max(k, v + 1))

    yield from rec([0], 1)


def is_congruence(alg, labels):
    m, j, i, ng = tables(alg)
    n = alg.size
    for x in range(n):
        for y in range(n):
            if labels[x] != labels[y]:
                continue
            if ng is not None and labels[ng[x]] != labels[ng[y]]:
                return False
            for z in range(n):
                for t in (m, j, i):
                    if labels[t[x][z]] != labels[t[y][z]]:
                        return False
                    if labels[t[z][x]] != labels[t[z][y]]:
                        return False
    return True


def congruences(alg):
    """Every partition compatible with the operations."""
    return sorted(p for p in set_partitions(alg.size) if is_congruence(alg, p))


def _mp_closed(F, table, top):
    if top not in F:
        return False
    n = len(table)
    return all(y in F for x in F for y in range(n) if table[x][y] in F)


def filter_kinds(alg, F):
    """The set of kind names satisfied by the subset ``F``."""
    m, j, i, ng = tables(alg)
    n = alg.size
    top = alg.top
    le = leq(alg)
    F = set(F)
    kinds = set()
    if (top in F and all(y in F for x in F for y in range(n) if le[x][y])
            and all(m[x][y] in F for x in F for y in F)):
        kinds.add("LATTICE_FILTER")
    implicative = _mp_closed(F, i, top)
    if implicative:
        kinds.add("IMPLICATIVE")
        if all(i[top][x] in F for x in F):
            kinds.add("OPEN")
    impn = [[i[x][m[x][y]] for y in range(n)] for x in range(n)]
    if _mp_closed(F, impn, top):
        kinds.add("N_IMPLICATIVE")
    if implicative and ng is not None:
        ok = True
        for x, y, f in product(range(n), range(n), sorted(F)):
            a = i[x][y]
            b = i[m[x][f]][m[y][f]]
            if not (i[a][b] in F and i[b][a] in F and i[ng[a]][ng[b]] in F
                    and i[ng[b]][ng[a]] in F):
                ok = False
                break
        if ok:
            kinds.add("H_IMPLICATIVE")
    return kinds


def filters(alg, kind):
    """Members of every subset of the given kind, in bitmask order."""
    n = alg.size
    out = []
    for mask in range(1 << n):
        F = [x for x in range(n) if mask >> x & 1]
        if kind in filter_kinds(alg, F):
            out.append(tuple(F))
    return out


def twist_pairs(base):
    m = base.meet.tolist()
    n = base.size
    return [(a, b) for a in range(n) for b in range(n) if m[a][b] == base.bot]


def twist_tables(base):
    """K(A) computed pair by pair."""
    m, j, i, _ = tables(base)
    pairs = twist_pairs(base)
    pos = {p: k for k, p in enumerate(pairs)}
    meet = [[pos[(m[a][c], j[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    join = [[pos[(j[a][c], m[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    imp = [[pos[(i[a][c], m[a][d])] for (c, d) in pairs] for (a, b) in pairs]
    neg = [pos[(b, a)] for (a, b) in pairs]
    return pairs, meet, join, imp, neg


def all_hil_tables(lattice):
    """Every -> table on the lattice satisfying x->x = 1 and
    x /\\ (x->y) <= y, by unpruned brute force over all n^(n*n) tables."""
    n = lattice.size
    m = lattice.meet.tolist()
    le = leq(lattice)
    out = []
    for flat in product(range(n), repeat=n * n):
        t = [flat[r * n:(r + 1) * n] for r in range(n)]
        if all(t[x][x] == lattice.top for x in range(n)) and all(
                le[m[x][t[x][y]]][y] for x in range(n) for y in range(n)):
            out.append(tuple(flat))
    return out


def theta_pairs(alg):
    i = alg.imp.tolist()
    n = alg.size
    return {(x, y) for x in range(n) for y in range(n)
            if i[x][y] == alg.top and i[y][x] == alg.top}


def theta_minus_pairs(alg):
    m, j, _, ng = tables(alg)
    n = alg.size
    le = leq(alg)
    negatives = [z for z in range(n) if le[z][ng[z]]]
    return {(x, y) for x in range(n) for y in range(n)
            if any(j[x][z] == j[y][z] for z in negatives)}


def homomorphisms(src, tgt):
    """Every map preserving the bounds, meet, join, -> and (when both sides
    have it) ~, found by backtracking over images in element order."""
    sm, sj, si, sn = tables(src)
    tm, tj, ti, tn = tables(tgt)
    use_neg = sn is not None and tn is not None
    n = src.size
    out = []
    f = [None] * n
    if src.bot == src.top and tgt.bot != tgt.top:
        return out
    fixed = {src.bot: tgt.bot, src.top: tgt.top}

    def ok(x):
        for y in range(x + 1):
            if f[y] is None:
                continue
            for s, t in ((sm, tm), (sj, tj), (si, ti)):
                for a, b in ((x, y), (y, x)):
                    v = s[a][b]
                    if f[v] is not None and f[v] != t[f[a]][f[b]]:
                        return False
        if use_neg:
            for y in range(n):
                if f[y] is not None and f[sn[y]] is not None and f[sn[y]] != tn[f[y]]:
                    return False
        return True

    def rec(x):
        if x == n:
            if all(f[s[a][b]] == t[f[a]][f[b]] for s, t in ((sm, tm), (sj, tj), (si, ti))
                   for a in range(n) for b in range(n)):
                if not use_neg or all(f[sn[a]] == tn[f[a]] for a in range(n)):
                    out.append(tuple(f))
            return
        choices = [fixed[x]] if x in fixed else range(tgt.size)
        for v in choices:
            f[x] = v
            if ok(x):
                rec(x + 1)
        f[x] = None

    rec(0)
    return out


def all_tables(n):
    """Every n x n table over 0..n-1."""
    import numpy as np
    for flat in product(range(n), repeat=n * n):
        yield np.array(flat, dtype=np.int64).reshape(n, n)
