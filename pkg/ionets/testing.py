# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Base classes, skip decorators and small fixtures of the ionets test suite."""

import itertools
import os
import unittest

from ionets import ionetsconfig
from ionets.countingsets import Cube, CountingSet, OMEGA
from ionets.net import IONet, Trajectory, replay
from ionets.protocols import IOProtocol, threshold_protocol
from ionets.util import resultcache

RUN_CORPUS = bool(int(os.environ.get("IONETS_TESTS_CORPUS", False)))

_OVERRIDABLE = (
    "SATURATION_CAP",
    "WIDEN_AT_CAP",
    "MAX_CUBES",
    "ORACLE_STATE_LIMIT",
    "EXPLICIT_STATE_LIMIT",
    "CROSS_CHECK",
    "USE_JIT",
    "USE_RESULT_CACHE",
)


class IONetsTestCase(unittest.TestCase):
    """
    For tests that run the engines. Configuration values changed via
    `override_config` are restored and the result cache is cleared after
    every test, so that no test observes saturation results of another.
    """

    def setUp(self):
        self._saved_config = {name: getattr(ionetsconfig, name) for name in _OVERRIDABLE}
        resultcache.clear()

    def tearDown(self):
        for name, value in self._saved_config.items():
            setattr(ionetsconfig, name, value)
        resultcache.clear()

    def override_config(self, **values):
        for name, value in values.items():
            if name not in self._saved_config:
                raise KeyError(f"'{name}' is not an overridable config value")
            setattr(ionetsconfig, name, value)

    def assertReplaysInto(self, net: IONet, traj: Trajectory, s_from, s_to):
        """Replays ``traj`` and checks its first and last markings."""
        markings = replay(net, traj)
        self.assertTrue(s_from.member(markings[0]), f"{markings[0]} not in {s_from}")
        self.assertTrue(s_to.member(markings[-1]), f"{markings[-1]} not in {s_to}")
        return markings


def skip_unless_corpus(reason):
    """Skip this test unless IONETS_TESTS_CORPUS is set"""
    return unittest.skipUnless(RUN_CORPUS, reason)


def skip_without_jit(reason):
    """Skip this test if the numba kernels are disabled"""
    return unittest.skipUnless(ionetsconfig.USE_JIT, reason)


def cube(net: IONet, **bounds) -> Cube:
    """Cube over ``net`` from ``place=(lower, upper)`` keywords; ``None`` is omega.

    Places that are not mentioned get ``[0, omega]``.
    """
    lower, upper = [0] * net.num_places, [OMEGA] * net.num_places
    for name, (lo, hi) in bounds.items():
        p = net.place_index(name)
        lower[p] = lo
        upper[p] = OMEGA if hi is None else hi
    return Cube(tuple(lower), tuple(upper))


def cset(net: IONet, *cubes: Cube) -> CountingSet:
    return CountingSet(net.num_places, cubes)


def markings_upto(n: int, max_total: int):
    """All markings over ``n`` places with at most ``max_total`` tokens."""
    for m in itertools.product(range(max_total + 1), repeat=n):
        if sum(m) <= max_total:
            yield m


def observe_net() -> IONet:
    """Tokens move from ``a`` to ``b`` while ``b`` is marked."""
    return IONet.build(["a", "b"], [("t", "a", "b", "b")])


def swap_net() -> IONet:
    """``observe_net`` plus a transition moving tokens back while ``b`` holds two."""
    return IONet.build(["a", "b"], [("t1", "a", "b", "b"), ("t2", "b", "b", "a")])


def threshold3() -> IOProtocol:
    return threshold_protocol(3)


def threshold3_mutant() -> IOProtocol:
    """`threshold3` with level 2 outputting ``1``; not correct for "at least 3"."""
    p = threshold3()
    output = dict(p.output)
    output["2"] = 1
    return IOProtocol(p.states, p.initial, output, p.rules)


def ambiguous_protocol() -> IOProtocol:
    """Two agents in ``s`` may agree on either output."""
    return IOProtocol(
        ("s", "z0", "z1"),
        ("s",),
        {"s": 0, "z0": 0, "z1": 1},
        (("s", "s", "z0"), ("s", "s", "z1"), ("s", "z0", "z0"), ("s", "z1", "z1")),
    )
