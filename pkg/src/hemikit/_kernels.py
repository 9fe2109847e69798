"""Compiled inner loops.  Falls back to plain Python when numba is absent."""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def principal_labels(cols, a, b):
    """Union-find closure of ``{a, b}`` under the translations.

    ``cols[x]`` lists the image of ``x`` under every translation.  Returns
    the root of each element (the least element of its block).
    """
    n, k = cols.shape
    parent = np.arange(n)
    stack_x = np.empty(n * k + 1, dtype=np.int64)
    stack_y = np.empty(n * k + 1, dtype=np.int64)
    stack_x[0] = a
    stack_y[0] = b
    top = 1
    while top > 0:
        top -= 1
        rx = _find(parent, stack_x[top])
        ry = _find(parent, stack_y[top])
        if rx == ry:
            continue
        x = stack_x[top]
        y = stack_y[top]
        if rx < ry:
            parent[ry] = rx
        else:
            parent[rx] = ry
        # at most n - 1 unions, each pushing k pairs
        for j in range(k):
            stack_x[top] = cols[x, j]
            stack_y[top] = cols[y, j]
            top += 1
    out = np.empty(n, dtype=np.int64)
    for x in range(n):
        out[x] = _find(parent, x)
    return out


@njit(cache=True)
def all_principal(cols):
    """Root labels of every principal congruence, one row per pair a < b."""
    n = cols.shape[0]
    out = np.empty((n * (n - 1) // 2, n), dtype=np.int64)
    r = 0
    for a in range(n):
        for b in range(a + 1, n):
            out[r] = principal_labels(cols, a, b)
            r += 1
    return out
