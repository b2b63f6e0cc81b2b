"""JIT-compiled enumeration kernels (numba), with availability flag.

The pure-Python implementations in :mod:`dicycles.counting` are the
reference; these kernels compute the same values and are used when numba
imports cleanly and the result provably fits in int64.  Set the
environment variable DICYCLES_NO_NUMBA to force the Python paths.
"""

from __future__ import annotations

import os

import numpy as np

HAVE_NUMBA = False
if not os.environ.get("DICYCLES_NO_NUMBA"):
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover
        pass

if not HAVE_NUMBA:  # pragma: no cover
    def njit(*args, **kwargs):
        def wrap(f):
            return f
        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def count_cycles(indptr, indices, dense, n, k):
    """Simple directed k-cycles, enumerated from their minimum-index vertex."""
    total = 0
    path = np.empty(k, np.int64)
    it = np.empty(k, np.int64)
    visited = np.zeros(n, np.uint8)
    for s in range(n):
        path[0] = s
        it[0] = indptr[s]
        visited[s] = 1
        depth = 0
        while depth >= 0:
            v = path[depth]
            i = it[depth]
            if i < indptr[v + 1]:
                it[depth] = i + 1
                u = indices[i]
                if u > s and visited[u] == 0:
                    if depth == k - 2:
                        total += dense[u, s]
                    else:
                        depth += 1
                        path[depth] = u
                        it[depth] = indptr[u]
                        visited[u] = 1
            else:
                visited[v] = 0
                depth -= 1
    return total


@njit(cache=True)
def vertex_cycle_counts(indptr, indices, dense, n, k):
    """Per-vertex counts of directed k-cycles through each vertex."""
    tv = np.zeros(n, np.int64)
    path = np.empty(k, np.int64)
    it = np.empty(k, np.int64)
    visited = np.zeros(n, np.uint8)
    for s in range(n):
        path[0] = s
        it[0] = indptr[s]
        visited[s] = 1
        depth = 0
        while depth >= 0:
            v = path[depth]
            i = it[depth]
            if i < indptr[v + 1]:
                it[depth] = i + 1
                u = indices[i]
                if u > s and visited[u] == 0:
                    if depth == k - 2:
                        if dense[u, s]:
                            for t in range(k - 1):
                                tv[path[t]] += 1
                            tv[u] += 1
                    else:
                        depth += 1
                        path[depth] = u
                        it[depth] = indptr[u]
                        visited[u] = 1
            else:
                visited[v] = 0
                depth -= 1
    return tv


@njit(cache=True)
def arc_cycle_counts(indptr, indices, dense, n, k):
    """Per-arc counts of directed k-cycles through each arc (dense matrix)."""
    ta = np.zeros((n, n), np.int64)
    path = np.empty(k, np.int64)
    it = np.empty(k, np.int64)
    visited = np.zeros(n, np.uint8)
    for s in range(n):
        path[0] = s
        it[0] = indptr[s]
        visited[s] = 1
        depth = 0
        while depth >= 0:
            v = path[depth]
            i = it[depth]
            if i < indptr[v + 1]:
                it[depth] = i + 1
                u = indices[i]
                if u > s and visited[u] == 0:
                    if depth == k - 2:
                        if dense[u, s]:
                            for t in range(k - 2):
                                ta[path[t], path[t + 1]] += 1
                            ta[v, u] += 1
                            ta[u, s] += 1
                    else:
                        depth += 1
                        path[depth] = u
                        it[depth] = indptr[u]
                        visited[u] = 1
            else:
                visited[v] = 0
                depth -= 1
    return ta


@njit(cache=True)
def has_cycle(indptr, indices, dense, n, k):
    """1 iff some simple directed k-cycle exists."""
    path = np.empty(k, np.int64)
    it = np.empty(k, np.int64)
    visited = np.zeros(n, np.uint8)
    for s in range(n):
        path[0] = s
        it[0] = indptr[s]
        visited[s] = 1
        depth = 0
        while depth >= 0:
            v = path[depth]
            i = it[depth]
            if i < indptr[v + 1]:
                it[depth] = i + 1
                u = indices[i]
                if u > s and visited[u] == 0:
                    if depth == k - 2:
                        if dense[u, s]:
                            return 1
                    else:
                        depth += 1
                        path[depth] = u
                        it[depth] = indptr[u]
                        visited[u] = 1
            else:
                visited[v] = 0
                depth -= 1
        visited[s] = 0
    return 0


@njit(cache=True)
def count_paths(indptr, indices, n, i):
    """Simple directed paths on exactly i vertices (i >= 2)."""
    total = 0
    path = np.empty(i, np.int64)
    it = np.empty(i, np.int64)
    visited = np.zeros(n, np.uint8)
    for s in range(n):
        path[0] = s
        it[0] = indptr[s]
        visited[s] = 1
        depth = 0
        while depth >= 0:
            v = path[depth]
            p = it[depth]
            if p < indptr[v + 1]:
                it[depth] = p + 1
                u = indices[p]
                if visited[u] == 0:
                    if depth == i - 2:
                        total += 1
                    else:
                        depth += 1
                        path[depth] = u
                        it[depth] = indptr[u]
                        visited[u] = 1
            else:
                visited[v] = 0
                depth -= 1
    return total


@njit(cache=True)
def _popcount64(x):
    x = x - ((x >> 1) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> 2) & np.uint64(0x3333333333333333))
    x = (x + (x >> 4)) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> 56


@njit(cache=True)
def neighbor_condition(indptr, indices, dense, und_bits, n, k, limit):
    """First (vertex, cycle) with > limit underlying neighbors on the cycle.

    Requires n <= 64 (single-word bitmask per vertex).  Returns
    (found, vertex, cycle array); found = 0 means the condition holds.
    """
    path = np.empty(k, np.int64)
    it = np.empty(k, np.int64)
    visited = np.zeros(n, np.uint8)
    cycle_out = np.empty(k, np.int64)
    for s in range(n):
        path[0] = s
        it[0] = indptr[s]
        visited[s] = 1
        depth = 0
        while depth >= 0:
            v = path[depth]
            i = it[depth]
            if i < indptr[v + 1]:
                it[depth] = i + 1
                u = indices[i]
                if u > s and visited[u] == 0:
                    if depth == k - 2:
                        if dense[u, s]:
                            mask = np.uint64(1) << np.uint64(u)
                            for t in range(k - 1):
                                mask |= np.uint64(1) << np.uint64(path[t])
                            for w in range(n):
                                if _popcount64(und_bits[w] & mask) > limit:
                                    for t in range(k - 1):
                                        cycle_out[t] = path[t]
                                    cycle_out[k - 1] = u
                                    return 1, w, cycle_out
                    else:
                        depth += 1
                        path[depth] = u
                        it[depth] = indptr[u]
                        visited[u] = 1
            else:
                visited[v] = 0
                depth -= 1
    return 0, -1, cycle_out
