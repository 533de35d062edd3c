# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

import unittest

from ionets import pruning
from ionets.countingsets import OMEGA, Cube
from ionets.deciders import Limits, generate_random_instance
from ionets.errors import EmptyCube, StateLimitExceeded
from ionets.net import replay
from ionets.testing import IONetsTestCase, cube, observe_net, skip_without_jit, swap_net

SMALL = Limits(places=3, transitions=4, norm=2, cubes=1)


class TestWitnessBound(IONetsTestCase):
    def test_value(self):
        net = observe_net()
        a = cube(net, a=(2, 2), b=(1, 1))
        b = cube(net, a=(0, 0), b=(3, None))
        self.assertEqual(pruning.witness_bound(net, a, b).value, 2**3 + 3 + 3)
        self.assertEqual(int(pruning.witness_bound(net, a, b)), 14)

    def test_raised_to_min_total(self):
        net = observe_net()
        a = cube(net, a=(20, None))
        self.assertEqual(pruning.witness_bound(net, a, Cube.universe(2)).value, 28)
        big = cube(net, a=(0, 0), b=(40, 40))
        self.assertGreaterEqual(pruning.witness_bound(net, Cube.universe(2), big).value, 40)

    def test_empty_cube(self):
        net = observe_net()
        with self.assertRaises(EmptyCube):
            pruning.witness_bound(net, Cube.empty(2), Cube.universe(2))

    def test_feasible_totals(self):
        a = Cube((2, 1), (2, 1))
        self.assertEqual(pruning.feasible_totals(a, Cube((0, 3), (0, OMEGA)), 10), range(3, 4))
        self.assertEqual(len(pruning.feasible_totals(a, Cube((0, 2), (0, 2)), 10)), 0)
        self.assertEqual(pruning.feasible_totals(Cube.universe(2), Cube.universe(2), 4), range(0, 5))


class TestFindSmallWitness(IONetsTestCase):
    def test_reachable(self):
        net = observe_net()
        a = cube(net, a=(2, 2), b=(1, 1))
        b = cube(net, a=(0, 0), b=(3, None))
        traj = pruning.find_small_witness(net, a, b)
        self.assertEqual(traj.start, (2, 1))
        self.assertEqual(traj.steps, ("t", "t"))
        self.assertEqual(replay(net, traj)[-1], (0, 3))

    def test_zero_steps(self):
        net = observe_net()
        c = cube(net, a=(1, 1), b=(1, 1))
        traj = pruning.find_small_witness(net, c, Cube.universe(2))
        self.assertEqual(len(traj), 0)
        self.assertEqual(traj.start, (1, 1))

    def test_unreachable(self):
        net = observe_net()
        a = cube(net, a=(2, 2), b=(1, 1))
        self.assertIsNone(pruning.find_small_witness(net, a, cube(net, a=(0, 0), b=(2, 2))))
        self.assertIsNone(pruning.find_small_witness(net, cube(net, b=(0, 0)), cube(net, a=(0, 0), b=(1, None))))

    def test_smallest_population_first(self):
        net = swap_net()
        traj = pruning.find_small_witness(net, cube(net, a=(1, None), b=(1, None)), cube(net, a=(0, 0)))
        self.assertEqual(traj.start, (1, 1))
        self.assertEqual(traj.steps, ("t1",))

    def test_max_steps(self):
        net = observe_net()
        a = cube(net, a=(2, 2), b=(1, 1))
        b = cube(net, a=(0, 0))
        self.assertIsNone(pruning.find_small_witness(net, a, b, max_steps=1))
        self.assertEqual(len(pruning.find_small_witness(net, a, b, max_steps=2)), 2)

    def test_state_limit(self):
        net = observe_net()
        with self.assertRaises(StateLimitExceeded):
            pruning.search_population(net, 10, Cube.universe(2), Cube.universe(2), state_limit=5)

    def test_python_search(self):
        self.override_config(USE_JIT=False)
        self.test_reachable()
        self.test_smallest_population_first()


class TestSearchBackends(IONetsTestCase):
    @skip_without_jit("numba kernels are disabled")
    def test_backends_agree(self):
        for seed in range(20):
            net, s_from, s_to = generate_random_instance(seed, SMALL)
            a, b = s_from.cubes[0], s_to.cubes[0]
            if a.is_empty() or b.is_empty():
                continue
            for k in pruning.feasible_totals(a, b, 6):
                jit = pruning._search_population_jit(net, k, a, b, None)
                python = pruning._search_population_python(net, k, a, b, None)
                self.assertEqual(jit is None, python is None, (seed, k))
                if jit is not None:
                    # both searches are breadth-first
                    self.assertEqual(len(jit), len(python), (seed, k))
                    markings = replay(net, jit)
                    self.assertTrue(a.member(markings[0]) and b.member(markings[-1]))


if __name__ == "__main__":
    unittest.main()
