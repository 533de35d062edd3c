# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Witness-size bounds and the bounded explicit search.

If some marking of a cube ``C`` reaches some marking of a cube ``C'``, then
already a marking of ``C`` with few tokens does so. `witness_bound` returns
such a population bound and `find_small_witness` searches all populations up
to it, one population size at a time: IO nets conserve tokens, so every
population size is a finite, independent state space.

The bound implemented here is::

    B(C, C') = n**3 + |C|_l + |C'|_l

where ``n`` is the number of places and ``|.|_l`` is the sum of a cube's
lower bounds. It is raised to the smallest total both cubes admit if that
is larger.
"""

import collections
import dataclasses
import logging
import time
from typing import Optional

import numpy as np

from ionets import ionetsconfig as _ionetsconfig
from ionets import kernels
from ionets.countingsets import Cube, OMEGA
from ionets.errors import DimensionMismatch, EmptyCube, StateLimitExceeded
from ionets.net import IONet, Trajectory, replay, successors
from ionets.oracle import enumerate_cube

_log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class WitnessBound:
    """Maximum population a witness needs."""

    value: int

    def __int__(self):
        return self.value


def _check_cubes(net: IONet, c_from: Cube, c_to: Cube):
    for c in (c_from, c_to):
        if c.dim != net.num_places:
            raise DimensionMismatch(
                f"cube has dimension {c.dim} but the net has {net.num_places} places"
            )
        if c.is_empty():
            raise EmptyCube(f"cube {c} is empty")


def witness_bound(net: IONet, c_from: Cube, c_to: Cube) -> WitnessBound:
    """Population bound for witnesses of ``c_from`` reaching ``c_to``.

    Raises:
        `EmptyCube`: If either cube is empty.
        `DimensionMismatch`: If a cube does not match the net.
    """
    _check_cubes(net, c_from, c_to)
    value = net.num_places**3 + c_from.lower_norm() + c_to.lower_norm()
    value = max(value, c_from.min_total(), c_to.min_total())
    return WitnessBound(value)


def feasible_totals(c_from: Cube, c_to: Cube, bound: int) -> range:
    """Population sizes up to ``bound`` that both cubes admit, in ascending order."""
    lo = max(c_from.min_total(), c_to.min_total())
    hi = min(c_from.max_total(), c_to.max_total(), bound)
    return range(lo, hi + 1)


def _search_population_python(
    net: IONet, k: int, c_from: Cube, c_to: Cube, max_steps: Optional[int]
) -> Optional[Trajectory]:
    parent = {}
    queue = collections.deque()
    for m in enumerate_cube(c_from, k):
        parent[m] = None
        queue.append((m, 0))
    while queue:
        m, depth = queue.popleft()
        if c_to.member(m):
            steps = []
            while parent[m] is not None:
                m, tid = parent[m]
                steps.append(tid)
            return Trajectory(m, tuple(reversed(steps)))
        if max_steps is not None and depth >= max_steps:
            continue
        for t, m2 in successors(net, m):
            if m2 not in parent:
                parent[m2] = (m, t.id)
                queue.append((m2, depth + 1))
    return None


def _bounds_array(bounds) -> np.ndarray:
    return np.array(
        [kernels.OMEGA_BOUND if x is OMEGA else x for x in bounds], dtype=np.int64
    )


def _search_population_jit(
    net: IONet, k: int, c_from: Cube, c_to: Cube, max_steps: Optional[int]
) -> Optional[Trajectory]:
    n = net.num_places
    trans = np.array(
        [[t.src, t.obs, t.dst] for t in net.transitions], dtype=np.int64
    ).reshape(-1, 3)
    binom = kernels.binomial_table(k + n, n)
    found, parent, via = kernels.search_population(
        k,
        trans,
        _bounds_array(c_from.lower),
        _bounds_array(c_from.upper),
        _bounds_array(c_to.lower),
        _bounds_array(c_to.upper),
        binom,
        kernels.num_markings(k, n),
        -1 if max_steps is None else max_steps,
    )
    if found < 0:
        return None
    r = int(found)
    steps = []
    while parent[r] != kernels.ROOT:
        steps.append(net.transitions[via[r]].id)
        r = int(parent[r])
    start = np.zeros(n, dtype=np.int64)
    kernels.unrank(r, k, binom, start)
    return Trajectory(tuple(int(x) for x in start), tuple(reversed(steps)))


def search_population(
    net: IONet,
    k: int,
    c_from: Cube,
    c_to: Cube,
    max_steps: int = None,
    state_limit: int = None,
) -> Optional[Trajectory]:
    """Breadth-first search from ``c_from`` to ``c_to`` among markings of total ``k``.

    Returns a shortest trajectory for this population or ``None``.

    Raises:
        `StateLimitExceeded`: If there are more markings of total ``k`` than
            ``state_limit`` (default `ionets.ionetsconfig.EXPLICIT_STATE_LIMIT`).
    """
    limit = _ionetsconfig.resolve_limit(
        state_limit, _ionetsconfig.EXPLICIT_STATE_LIMIT, "state_limit"
    )
    count = kernels.num_markings(k, net.num_places)
    if count > limit:
        raise StateLimitExceeded(
            f"{count} markings of total {k} over {net.num_places} places exceed the limit {limit}"
        )
    if _ionetsconfig.USE_JIT and net.num_places > 0:
        return _search_population_jit(net, k, c_from, c_to, max_steps)
    return _search_population_python(net, k, c_from, c_to, max_steps)


def find_small_witness(
    net: IONet,
    c_from: Cube,
    c_to: Cube,
    bound: int = None,
    max_steps: int = None,
    state_limit: int = None,
) -> Optional[Trajectory]:
    """Find a trajectory from a marking of ``c_from`` to a marking of ``c_to``.

    Populations ``k`` are searched in ascending order from the smallest total
    both cubes admit up to the bound; the first witness found is returned.

    Args:
        net (`IONet`):
            The net.
        c_from (`Cube`):
            Cube of start markings.
        c_to (`Cube`):
            Cube of target markings.
        bound (`int`, optional):
            Largest population searched. Defaults to `witness_bound`, which
            makes ``None`` a sound "unreachable" answer. A smaller bound
            only proves that there is no witness up to it.
        max_steps (`int`, optional):
            Depth cap of every breadth-first search. Defaults to ``None``.
        state_limit (`int`, optional):
            See `search_population`.

    Returns:
        A `Trajectory` whose replay starts in ``c_from`` and ends in
        ``c_to``, or ``None`` if there is none within the bounds.

    Raises:
        `EmptyCube`: If either cube is empty.
    """
    _check_cubes(net, c_from, c_to)
    if bound is None:
        bound = witness_bound(net, c_from, c_to).value
    totals = feasible_totals(c_from, c_to, bound)
    _log.debug(f"searching populations {totals.start}..{totals.stop - 1} for {c_from} -> {c_to}")
    started = time.perf_counter()
    for k in totals:
        traj = search_population(net, k, c_from, c_to, max_steps, state_limit)
        if traj is not None:
            markings = replay(net, traj)
            assert c_from.member(markings[0]) and c_to.member(markings[-1])
            _log.info(
                f"witness of population {k} with {len(traj)} step(s) after "
                f"{time.perf_counter() - started:.3f}s"
            )
            return traj
    _log.info(f"no witness up to population {bound} for {c_from} -> {c_to}")
    return None
