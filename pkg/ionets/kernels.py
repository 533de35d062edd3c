# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Numba kernels of the explicit search engine.

IO nets conserve the number of tokens, so the markings of total ``k`` over
``n`` places form a finite state space of ``C(k+n-1, n-1)`` compositions.
The kernels in this module give every such marking a dense *rank* via the
combinatorial number system and run breadth-first searches over rank-indexed
arrays instead of hash sets.

Ranking:
    For a marking ``m`` with prefix sums ``s_i = m_0 + ... + m_i`` we place
    "bars" at ``b_i = s_i + i`` for ``i = 0, ..., n-2``. The bars are
    strictly increasing and ``rank(m) = sum_i C(b_i, i+1)`` is a bijection
    from compositions of ``k`` into ``n`` parts onto ``[0, C(k+n-1, n-1))``.

Upper bounds are passed as ``int64`` arrays with `OMEGA_BOUND` encoding omega.
"""

__author__ = "The ionets developers"

import logging
import math

import numpy as np
from numba import njit

_log = logging.getLogger(__name__)

OMEGA_BOUND = -1

ROOT = -1
UNVISITED = -2

_CLIP = 1 << 62


def binomial_table(rows: int, cols: int) -> np.ndarray:
    """Returns ``table[a, b] = C(a, b)`` for ``a <= rows`` and ``b <= cols``.

    Note:
        Entries are clipped at ``2**62`` to stay within ``int64``. Only ranks
        of state spaces below `ionets.ionetsconfig.EXPLICIT_STATE_LIMIT` are
        ever computed, so clipped entries are never summed.
    """
    table = np.zeros((rows + 1, cols + 1), dtype=np.int64)
    for a in range(rows + 1):
        for b in range(min(a, cols) + 1):
            table[a, b] = min(math.comb(a, b), _CLIP)
    return table


def num_markings(total: int, n: int) -> int:
    """Number of markings over ``n`` places with exactly ``total`` tokens."""
    if n == 0:
        return 1 if total == 0 else 0
    return math.comb(total + n - 1, n - 1)


@njit(cache=True)
def next_composition(m):
    """Advance ``m`` in place to its lexicographic successor.

    The first composition of ``k`` is ``(0, ..., 0, k)`` and the last is
    ``(k, 0, ..., 0)``. Returns ``False`` if ``m`` is the last one.
    """
    n = m.shape[0]
    r = n - 1
    while r >= 0 and m[r] == 0:
        r -= 1
    if r <= 0:
        return False
    rest = m[r] - 1
    m[r - 1] += 1
    for i in range(r, n):
        m[i] = 0
    m[n - 1] = rest
    return True


@njit(cache=True)
def rank(m, binom):
    n = m.shape[0]
    s = 0
    result = 0
    for i in range(n - 1):
        s += m[i]
        result += binom[s + i, i + 1]
    return result


@njit(cache=True)
def unrank(r, k, binom, out):
    """Write the marking of total ``k`` with rank ``r`` into ``out``."""
    n = out.shape[0]
    if n == 1:
        out[0] = k
        return
    b = k + n - 1
    prev = k
    for i in range(n - 2, -1, -1):
        b -= 1
        while binom[b, i + 1] > r:
            b -= 1
        r -= binom[b, i + 1]
        s = b - i
        out[i + 1] = prev - s
        prev = s
    out[0] = prev


@njit(cache=True)
def in_cube(m, lower, upper):
    for i in range(m.shape[0]):
        if m[i] < lower[i]:
            return False
        if upper[i] != OMEGA_BOUND and m[i] > upper[i]:
            return False
    return True


@njit(cache=True)
def search_population(
    k, trans, from_lower, from_upper, to_lower, to_upper, binom, count, max_steps
):
    """Multi-source breadth-first search over the markings of total ``k``.

    Args:
        k (`int`):
            The population size.
        trans (`numpy.ndarray`):
            ``(T, 3)`` array of ``(src, obs, dst)`` place indices.
        from_lower, from_upper, to_lower, to_upper (`numpy.ndarray`):
            Bounds of the source and target cubes.
        binom (`numpy.ndarray`):
            Table from `binomial_table` with at least ``k+n`` rows.
        count (`int`):
            Number of markings of total ``k``.
        max_steps (`int`):
            Depth cap of the search, negative for none.

    Returns:
        A tuple ``(found, parent, via)``: the rank of the first target
        marking dequeued (``-1`` if there is none), the BFS parent rank of
        every visited marking (`ROOT` for sources, `UNVISITED` otherwise),
        and the transition index leading to every visited marking.
    """
    n = from_lower.shape[0]
    parent = np.full(count, UNVISITED, np.int64)
    via = np.full(count, -1, np.int32)
    depth = np.zeros(count, np.int32)
    queue = np.empty(count, np.int64)
    head = 0
    tail = 0

    m = np.zeros(n, np.int64)
    m[n - 1] = k
    while True:
        if in_cube(m, from_lower, from_upper):
            r = rank(m, binom)
            parent[r] = ROOT
            queue[tail] = r
            tail += 1
        if not next_composition(m):
            break

    while head < tail:
        r = queue[head]
        head += 1
        unrank(r, k, binom, m)
        if in_cube(m, to_lower, to_upper):
            return r, parent, via
        if max_steps >= 0 and depth[r] >= max_steps:
            continue
        for j in range(trans.shape[0]):
            src = trans[j, 0]
            obs = trans[j, 1]
            dst = trans[j, 2]
            if src == dst:
                continue
            if src == obs:
                if m[src] < 2:
                    continue
            elif m[src] < 1 or m[obs] < 1:
                continue
            m[src] -= 1
            m[dst] += 1
            r2 = rank(m, binom)
            if parent[r2] == UNVISITED:
                parent[r2] = r
                via[r2] = j
                depth[r2] = depth[r] + 1
                queue[tail] = r2
                tail += 1
            m[src] += 1
            m[dst] -= 1
    return -1, parent, via
