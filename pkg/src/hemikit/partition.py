"""Partitions of ``0..n-1`` as canonical block labelings.

A labeling numbers blocks by first occurrence, so ``(0, 0, 1, 0, 2)`` is the
canonical form and two labelings describe the same partition iff their
canonical forms are equal.
"""

from __future__ import annotations

import numpy as np

from .errors import NotTransitive


def canonical(labels) -> tuple:
    seen = {}
    out = []
    for v in labels:
        v = int(v)
        if v not in seen:
            seen[v] = len(seen)
        out.append(seen[v])
    return tuple(out)


def blocks(labels) -> list:
    out = {}
    for x, v in enumerate(labels):
        out.setdefault(v, []).append(x)
    return [out[k] for k in sorted(out, key=lambda k: out[k][0])]


def identity(n) -> tuple:
    return tuple(range(n))


def total(n) -> tuple:
    return (0,) * n


def from_relation(rel: np.ndarray) -> tuple:
    """Labeling of an equivalence relation given as a boolean matrix.

    Raises :class:`NotTransitive` (with a witness triple) when ``rel`` is not
    reflexive, symmetric and transitive.
    """
    rel = np.asarray(rel, dtype=bool)
    n = rel.shape[0]
    if not rel.diagonal().all():
        x = int(np.flatnonzero(~rel.diagonal())[0])
        raise NotTransitive(f"relation is not reflexive at {x}", witness=[x])
    if (rel != rel.T).any():
        x, y = (int(i) for i in np.argwhere(rel != rel.T)[0])
        raise NotTransitive(f"relation is not symmetric at {(x, y)}", witness=[x, y])
    comp = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    if (comp & ~rel).any():
        x, z = (int(i) for i in np.argwhere(comp & ~rel)[0])
        y = int(np.flatnonzero(rel[x] & rel[:, z])[0])
        raise NotTransitive(f"relation is not transitive at {(x, y, z)}",
                            witness=[x, y, z])
    labels = [-1] * n
    nxt = 0
    for x in range(n):
        if labels[x] < 0:
            for y in np.flatnonzero(rel[x]):
                labels[int(y)] = nxt
            nxt += 1
    return tuple(labels)


def to_relation(labels) -> np.ndarray:
    lab = np.asarray(labels)
    return lab[:, None] == lab[None, :]


def refines(finer, coarser) -> bool:
    """Whether every block of ``finer`` lies inside a block of ``coarser``."""
    image = {}
    for a, b in zip(finer, coarser):
        if image.setdefault(a, b) != b:
            return False
    return True


def join(p, q) -> tuple:
    """Smallest equivalence containing both partitions."""
    parent = list(range(len(p)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for labels in (p, q):
        first = {}
        for x, v in enumerate(labels):
            if v in first:
                a, b = find(first[v]), find(x)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                first[v] = x
    return canonical(find(x) for x in range(len(p)))


def num_blocks(labels) -> int:
    return len(set(labels))
