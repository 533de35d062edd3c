# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Predecessor and successor images of counting sets under IO nets.

The one-step images of a cube under an IO transition are again cubes, see
`pre_step_t` and `post_step_t`. The reflexive-transitive closures `pre_star`
and `post_star` are computed by worklist saturation.

Saturation cap:
    Iterating one-step images can produce infinite chains of cubes, e.g.
    ``a in [k,k]`` for ``k = 0, 1, 2, ...``, whose union is a single cube.
    Every cube produced during saturation is therefore widened at a
    cap ``K`` (see `ionets.countingsets.Cube.widen`): lower bounds above ``K``
    become ``K+1``, finite upper bounds above ``K`` become omega. Bounds then
    range over a finite set and saturation terminates.

    Widening only adds markings with an entry above ``K``, hence with more
    than ``K`` tokens, and firing preserves the number of tokens. The result
    is thus exact on every marking with at most ``K`` tokens, and exact on
    all markings if ``K`` is at least the norm of the true result. The
    default cap is ``norm(s) + n**3`` for ``n`` places, see `saturation_cap`.
"""

import collections
import logging
import time
from typing import List

from ionets import ionetsconfig as _ionetsconfig
from ionets.countingsets import Cube, CountingSet, OMEGA, absorb
from ionets.errors import DimensionMismatch, SaturationOverflow
from ionets.net import IONet, IOTransition
from ionets.util import fscache as _fscache
from ionets.util import resultcache as _resultcache

_log = logging.getLogger(__name__)

PRE = "pre"
POST = "post"


def _check(net: IONet, dim: int):
    if dim != net.num_places:
        raise DimensionMismatch(
            f"set has dimension {dim} but the net has {net.num_places} places"
        )


def enabled_cube(net: IONet, t: IOTransition) -> Cube:
    """The cube of markings enabling ``t``."""
    lower = [0] * net.num_places
    if t.src == t.obs:
        lower[t.src] = 2
    else:
        lower[t.src] = 1
        lower[t.obs] = 1
    return Cube(tuple(lower), (OMEGA,) * net.num_places)


def _require_enabled(lower: List[int], t: IOTransition):
    if t.src == t.obs:
        lower[t.src] = max(lower[t.src], 2)
    else:
        lower[t.src] = max(lower[t.src], 1)
        lower[t.obs] = max(lower[t.obs], 1)


def pre_step_t(net: IONet, c: Cube, t: IOTransition) -> Cube:
    """Returns the cube ``{M : M enables t and fire(M, t) in c}``."""
    _check(net, c.dim)
    if c.is_empty():
        return Cube.empty(c.dim)
    lower, upper = list(c.lower), list(c.upper)
    if t.src != t.dst:
        # firing put a token into dst and took one from src
        if upper[t.dst] == 0:
            return Cube.empty(c.dim)
        lower[t.src] += 1
        upper[t.src] = upper[t.src] + 1
        lower[t.dst] = max(lower[t.dst] - 1, 0)
        upper[t.dst] = upper[t.dst] - 1
    _require_enabled(lower, t)
    return Cube(tuple(lower), tuple(upper))


def post_step_t(net: IONet, c: Cube, t: IOTransition) -> Cube:
    """Returns the cube ``{fire(M, t) : M in c, M enables t}``."""
    _check(net, c.dim)
    lower, upper = list(c.lower), list(c.upper)
    _require_enabled(lower, t)
    enabled_part = Cube(tuple(lower), tuple(upper))
    if enabled_part.is_empty():
        return Cube.empty(c.dim)
    if t.src != t.dst:
        lower[t.src] -= 1
        upper[t.src] = upper[t.src] - 1
        lower[t.dst] += 1
        upper[t.dst] = upper[t.dst] + 1
    return Cube(tuple(lower), tuple(upper))


_STEP_T = {PRE: pre_step_t, POST: post_step_t}


def _step(net: IONet, s: CountingSet, direction: str) -> CountingSet:
    _check(net, s.dim)
    step_t = _STEP_T[direction]
    return CountingSet(
        s.dim, tuple(step_t(net, c, t) for c in s.cubes for t in net.transitions)
    ).normalize()


def pre_step(net: IONet, s: CountingSet) -> CountingSet:
    return _step(net, s, PRE)


def post_step(net: IONet, s: CountingSet) -> CountingSet:
    return _step(net, s, POST)


def saturation_cap(net: IONet, *sets: CountingSet) -> int:
    """Default saturation cap for the given net and input sets.

    Returns `ionets.ionetsconfig.SATURATION_CAP` if it is set, else
    ``max(norm(s) for s in sets) + n**3`` where ``n`` is the number of places.
    """
    if _ionetsconfig.SATURATION_CAP > 0:
        return _ionetsconfig.SATURATION_CAP
    return max((s.norm() for s in sets), default=0) + net.num_places**3


class _Saturation:
    """Worklist saturation of a counting set under one-step images.

    Note:
        Images are computed per (cube, transition) pair and cached by value
        for the lifetime of the run.
    """

    def __init__(self, net: IONet, direction: str, cap: int, max_cubes: int):
        self.net = net
        self.step_t = _STEP_T[direction]
        self.direction = direction
        self.cap = cap
        self.max_cubes = max_cubes
        self.cubes: List[Cube] = []
        self.worklist = collections.deque()
        self.images = {}
        self.widened = 0
        self.expanded = 0

    def add(self, c: Cube):
        if c.is_empty():
            return
        if c.exceeds(self.cap):
            if not _ionetsconfig.WIDEN_AT_CAP:
                raise SaturationOverflow(
                    f"{self.direction}* produced cube {c} of norm {c.norm()} above the cap {self.cap}"
                )
            c = c.widen(self.cap)
            self.widened += 1
        if c.covered_by(self.cubes):
            return
        self.cubes = absorb(self.cubes, c)
        self.worklist.append(c)
        if len(self.cubes) > self.max_cubes:
            raise SaturationOverflow(
                f"{self.direction}* exceeded {self.max_cubes} cubes (cap {self.cap})"
            )

    def image(self, c: Cube, t: IOTransition) -> Cube:
        key = (c, t)
        try:
            return self.images[key]
        except KeyError:
            result = self.images[key] = self.step_t(self.net, c, t)
            return result

    def run(self, s: CountingSet) -> CountingSet:
        for c in s.cubes:
            self.add(c)
        while self.worklist:
            c = self.worklist.popleft()
            self.expanded += 1
            for t in self.net.transitions:
                self.add(self.image(c, t))
        return CountingSet(s.dim, tuple(self.cubes))


def _star(net: IONet, s: CountingSet, direction: str, cap: int = None, max_cubes: int = None):
    _check(net, s.dim)
    if cap is None:
        cap = saturation_cap(net, s)
    max_cubes = _ionetsconfig.resolve_limit(max_cubes, _ionetsconfig.MAX_CUBES, "max_cubes")
    # results computed without widening or with fewer cubes differ
    components = (net, s, direction, cap, _ionetsconfig.WIDEN_AT_CAP, max_cubes)
    key = None
    if _ionetsconfig.USE_RESULT_CACHE or _ionetsconfig.USE_FS_CACHE:
        key = _resultcache.make_cache_key(*components)
    if _ionetsconfig.USE_RESULT_CACHE:
        try:
            return _resultcache.get_or_insert_entry(*components)
        except KeyError:
            pass
    if _ionetsconfig.USE_FS_CACHE:
        from ionets.frontend import documents

        try:
            result = documents.parse_counting_set(
                _fscache.read_cached_file(key, prefix=direction), net
            )
            _log.info(f"{direction}*: reusing cached result '{key}'")
            if _ionetsconfig.USE_RESULT_CACHE:
                _resultcache.get_or_insert_entry(*components, entry=result)
            return result
        except FileNotFoundError:
            pass

    started = time.perf_counter()
    _log.info(f"{direction}*: saturating {len(s)} cube(s) over {net.num_places} places, cap {cap}")
    sat = _Saturation(net, direction, cap, max_cubes)
    result = sat.run(s)
    _log.info(
        f"{direction}*: {len(result)} cube(s) after expanding {sat.expanded}, "
        f"{sat.widened} widened, {time.perf_counter() - started:.3f}s"
    )

    if _ionetsconfig.USE_RESULT_CACHE:
        _resultcache.get_or_insert_entry(*components, entry=result)
    if _ionetsconfig.USE_FS_CACHE:
        from ionets.frontend import documents

        _fscache.write_cached_file(
            documents.serialize_counting_set(result, net), key, prefix=direction
        )
    return result


def pre_star(net: IONet, s: CountingSet, cap: int = None, max_cubes: int = None) -> CountingSet:
    """Markings from which some member of ``s`` is reachable.

    Args:
        net (`IONet`):
            The net.
        s (`CountingSet`):
            The target set.
        cap (`int`, optional):
            Saturation cap. The result is exact on all markings with at most
            ``cap`` tokens. Defaults to ``None``, which selects `saturation_cap`.
        max_cubes (`int`, optional):
            Resource bound, defaults to `ionets.ionetsconfig.MAX_CUBES`.

    Raises:
        `SaturationOverflow`: If the result exceeds ``max_cubes`` cubes, or
            if widening is disabled and a cube exceeds the cap.
    """
    return _star(net, s, PRE, cap, max_cubes)


def post_star(net: IONet, s: CountingSet, cap: int = None, max_cubes: int = None) -> CountingSet:
    """Markings reachable from some member of ``s``.

    See:
        `pre_star` for the arguments.
    """
    return _star(net, s, POST, cap, max_cubes)
