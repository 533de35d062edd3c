# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

import unittest

import numpy as np

from ionets.deciders import Limits, generate_random_instance
from ionets.errors import DuplicateId, InvalidStep, NotEnabled, NotIO, UnknownPlace
from ionets.net import IONet, IOTransition, Trajectory, classify_io, enabled, fire, replay, successors
from ionets.testing import IONetsTestCase, observe_net, swap_net


class TestIONet(IONetsTestCase):
    def test_build(self):
        net = swap_net()
        self.assertEqual(net.num_places, 2)
        self.assertEqual(net.place_names, ("a", "b"))
        self.assertEqual(net.transition("t2"), IOTransition("t2", 1, 1, 0))
        self.assertEqual(net.place_index("b"), 1)

    def test_duplicate_names(self):
        with self.assertRaises(DuplicateId):
            IONet.build(["a", "a"])
        with self.assertRaises(DuplicateId):
            IONet.build(["a", "b"], [("t", "a", "b", "b"), ("t", "b", "a", "a")])

    def test_unknown_place(self):
        with self.assertRaises(UnknownPlace):
            IONet.build(["a"], [("t", "a", "c", "a")])

    def test_check_marking(self):
        net = observe_net()
        self.assertEqual(net.check_marking([1, 2]), (1, 2))
        with self.assertRaises(ValueError):
            net.check_marking((1, -1))


class TestFiring(IONetsTestCase):
    def test_enabled_distinct_places(self):
        net = observe_net()
        t = net.transition("t")
        self.assertTrue(enabled(net, (1, 1), t))
        self.assertFalse(enabled(net, (2, 0), t))
        self.assertFalse(enabled(net, (0, 3), t))

    def test_enabled_self_observation(self):
        net = IONet.build(["a", "b"], [("t", "a", "a", "b")])
        t = net.transition("t")
        self.assertFalse(enabled(net, (1, 5), t))
        self.assertTrue(enabled(net, (2, 0), t))
        self.assertEqual(fire(net, (2, 0), t), (1, 1))

    def test_fire_conserves_tokens(self):
        net = swap_net()
        m = (3, 2)
        for t, m2 in successors(net, m):
            self.assertEqual(sum(m2), sum(m))
            self.assertEqual(fire(net, m, t), m2)

    def test_fire_disabled(self):
        net = observe_net()
        with self.assertRaises(NotEnabled):
            fire(net, (1, 0), net.transition("t"))

    def test_noop_transition(self):
        net = IONet.build(["a", "b"], [("t", "a", "b", "a")])
        t = net.transition("t")
        self.assertTrue(enabled(net, (1, 1), t))
        self.assertEqual(fire(net, (1, 1), t), (1, 1))
        self.assertEqual(list(successors(net, (1, 0))), [])


class TestReplay(IONetsTestCase):
    def test_replay(self):
        net = observe_net()
        markings = replay(net, Trajectory((2, 1), ("t", "t")))
        self.assertEqual(markings, [(2, 1), (1, 2), (0, 3)])

    def test_replay_empty(self):
        self.assertEqual(replay(observe_net(), Trajectory((0, 0))), [(0, 0)])

    def test_replay_not_enabled(self):
        net = observe_net()
        with self.assertRaises(InvalidStep) as cm:
            replay(net, Trajectory((1, 1), ("t", "t")))
        self.assertEqual(cm.exception.index, 1)

    def test_replay_unknown_transition(self):
        with self.assertRaises(InvalidStep) as cm:
            replay(observe_net(), Trajectory((1, 1), ("u",)))
        self.assertEqual(cm.exception.index, 0)


class TestConservation(IONetsTestCase):
    FIRINGS_PER_NET = 100

    def test_random_firing(self):
        rng = np.random.default_rng(1)
        fired = 0
        for seed in range(100):
            net, _, _ = generate_random_instance(seed, Limits(places=5, transitions=8, norm=3))
            m = None
            for _ in range(self.FIRINGS_PER_NET):
                choices = list(successors(net, m)) if m is not None else []
                while not choices:
                    m = tuple(int(x) for x in rng.integers(0, 5, size=net.num_places))
                    choices = list(successors(net, m))
                _, m2 = choices[int(rng.integers(0, len(choices)))]
                self.assertEqual(sum(m2), sum(m))
                self.assertTrue(all(x >= 0 for x in m2))
                m = m2
                fired += 1
        self.assertEqual(fired, 10000)


class TestClassifyIO(IONetsTestCase):
    def test_observation(self):
        self.assertEqual(classify_io([0, 1], [1, 1]), IOTransition("t", 0, 1, 1))
        self.assertEqual(classify_io([1, 0], [1, 1], "u"), IOTransition("u", 0, 1, 1))

    def test_self_observation(self):
        self.assertEqual(classify_io([0, 0], [1, 0]), IOTransition("t", 0, 0, 1))

    def test_prefers_noop_shape(self):
        # {a, b} -> {a, b} is a no-op under either observed place
        t = classify_io([0, 1], [0, 1])
        self.assertEqual(t.src, t.dst)
        self.assertEqual(t.obs, 0)

    def test_not_io(self):
        with self.assertRaises(NotIO):
            classify_io([0, 1], [2, 3])
        with self.assertRaises(NotIO):
            classify_io([0], [0])
        with self.assertRaises(NotIO):
            classify_io([0, 1, 2], [0, 1, 2])


if __name__ == "__main__":
    unittest.main()
