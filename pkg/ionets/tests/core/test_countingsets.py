# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

import pickle
import unittest

import numpy as np

from ionets.countingsets import OMEGA, Cube, CountingSet, absorb, union_all
from ionets.errors import DimensionMismatch
from ionets.testing import IONetsTestCase, markings_upto


def _random_cube(rng, n, norm):
    lower, upper = [], []
    for _ in range(n):
        lo = int(rng.integers(0, norm + 1))
        lower.append(lo)
        upper.append(OMEGA if rng.random() < 0.4 else int(rng.integers(max(lo - 1, 0), norm + 1)))
    return Cube(tuple(lower), tuple(upper))


def _random_set(rng, n, norm):
    return CountingSet(n, tuple(_random_cube(rng, n, norm) for _ in range(int(rng.integers(0, 4)))))


class TestOmega(IONetsTestCase):
    def test_order(self):
        self.assertTrue(5 < OMEGA)
        self.assertTrue(OMEGA > 10**9)
        self.assertFalse(OMEGA < 3)
        self.assertEqual(OMEGA + 1, OMEGA)
        self.assertEqual(OMEGA - 1, OMEGA)
        self.assertEqual(max(3, OMEGA), OMEGA)
        self.assertEqual(min(3, OMEGA), 3)

    def test_singleton(self):
        self.assertIs(pickle.loads(pickle.dumps(OMEGA)), OMEGA)


class TestCube(IONetsTestCase):
    def test_member(self):
        c = Cube((1, 0), (OMEGA, 2))
        self.assertTrue(c.member((1, 0)))
        self.assertTrue((100, 2) in c)
        self.assertFalse(c.member((0, 1)))
        self.assertFalse(c.member((1, 3)))
        with self.assertRaises(DimensionMismatch):
            c.member((1, 0, 0))

    def test_empty(self):
        self.assertTrue(Cube((2, 0), (1, OMEGA)).is_empty())
        self.assertTrue(Cube.empty(3).is_empty())
        self.assertFalse(Cube.universe(3).is_empty())
        self.assertFalse(Cube((), ()).is_empty())

    def test_negative_bounds(self):
        with self.assertRaises(ValueError):
            Cube((-1,), (2,))

    def test_intersect_and_includes(self):
        a = Cube((0, 1), (3, OMEGA))
        b = Cube((2, 0), (OMEGA, 4))
        self.assertEqual(a.intersect(b), Cube((2, 1), (3, 4)))
        self.assertTrue(a.includes(Cube((1, 2), (2, 2))))
        self.assertFalse(a.includes(b))
        self.assertTrue(a.includes(Cube.empty(2)))

    def test_complement(self):
        c = Cube((1, 0), (2, OMEGA))
        comp = c.complement()
        for m in markings_upto(2, 6):
            self.assertNotEqual(c.member(m), comp.member(m), m)
        self.assertLessEqual(len(comp), 2 * c.dim)

    def test_subtract_is_disjoint(self):
        a = Cube((0, 0), (5, 5))
        b = Cube((2, 1), (3, OMEGA))
        pieces = a.subtract(b)
        for m in markings_upto(2, 10):
            hits = sum(p.member(m) for p in pieces)
            self.assertEqual(hits, int(a.member(m) and not b.member(m)), m)

    def test_merge(self):
        self.assertEqual(Cube((0, 1), (2, 1)).merge(Cube((3, 1), (OMEGA, 1))), Cube((0, 1), (OMEGA, 1)))
        self.assertIsNone(Cube((0, 1), (1, 1)).merge(Cube((3, 1), (4, 1))))
        self.assertIsNone(Cube((0, 0), (1, 1)).merge(Cube((2, 2), (3, 3))))

    def test_norms(self):
        c = Cube((1, 2), (OMEGA, 5))
        self.assertEqual(c.norm(), 5)
        self.assertEqual(c.min_total(), 3)
        self.assertIs(c.max_total(), OMEGA)
        self.assertEqual(Cube((1, 2), (1, 5)).max_total(), 6)
        self.assertEqual(Cube.universe(2).norm(), 0)

    def test_covered_by(self):
        c = Cube((0, 0), (3, 3))
        self.assertTrue(c.covered_by([Cube((0, 0), (1, OMEGA)), Cube((2, 0), (3, 3))]))
        self.assertTrue(c.covered_by([Cube.universe(2)]))
        self.assertFalse(c.covered_by([Cube((0, 0), (1, 3)), Cube((2, 1), (OMEGA, OMEGA))]))
        self.assertFalse(c.covered_by([]))
        self.assertTrue(Cube.empty(2).covered_by([]))

    def test_widen(self):
        c = Cube((0, 12), (11, 13))
        w = c.widen(10)
        self.assertEqual(w, Cube((0, 11), (OMEGA, OMEGA)))
        within = Cube((0, 1), (10, OMEGA))
        self.assertIs(within.widen(10), within)
        # widening only adds markings with an entry above the cap
        for m in markings_upto(2, 30):
            if w.member(m) and not c.member(m):
                self.assertGreater(max(m), 10)


class TestCountingSet(IONetsTestCase):
    DIMS = (1, 2, 3, 4)
    NORM = 3
    BOX = 6

    def _pairs(self, seed, count):
        rng = np.random.default_rng(seed)
        for n in self.DIMS:
            for _ in range(count):
                yield n, _random_set(rng, n, self.NORM), _random_set(rng, n, self.NORM)

    def test_algebra_against_pointwise(self):
        checked = 0
        for n, a, b in self._pairs(7, 50):
            union = a.union(b)
            inter = a.intersect(b)
            diff = a.difference(b)
            comp = a.complement()
            for m in markings_upto(n, self.BOX):
                x, y = a.member(m), b.member(m)
                self.assertEqual(union.member(m), x or y)
                self.assertEqual(inter.member(m), x and y)
                self.assertEqual(diff.member(m), x and not y)
                self.assertEqual(comp.member(m), not x)
                checked += 1
            self.assertEqual(a.includes(inter), True)
            self.assertEqual(union.includes(a), True)
            self.assertEqual(diff.intersect(b).is_empty(), True)
        self.assertGreaterEqual(checked, 10000)

    def test_de_morgan(self):
        for n, a, b in self._pairs(3, 25):
            lhs = a.union(b).complement()
            rhs = a.complement().intersect(b.complement())
            lhs2 = a.intersect(b).complement()
            rhs2 = a.complement().union(b.complement())
            for m in markings_upto(n, self.BOX):
                self.assertEqual(lhs.member(m), rhs.member(m))
                self.assertEqual(lhs2.member(m), rhs2.member(m))
            self.assertTrue(lhs.includes(rhs) and rhs.includes(lhs))

    def test_normalize_and_coalesce_keep_denotation(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            a = _random_set(rng, 3, 2)
            normalized, coalesced = a.normalize(), a.coalesce()
            self.assertLessEqual(len(coalesced), len(normalized))
            for m in markings_upto(3, 5):
                self.assertEqual(a.member(m), normalized.member(m))
                self.assertEqual(a.member(m), coalesced.member(m))

    def test_coalesce_chain(self):
        s = CountingSet(2, tuple(Cube((k, 1), (k, OMEGA)) for k in range(5)))
        self.assertEqual(s.coalesce().cubes, (Cube((0, 1), (4, OMEGA)),))

    def test_is_empty_upto(self):
        s = CountingSet(2, (Cube((4, 3), (OMEGA, OMEGA)), Cube((2, 0), (1, 0))))
        self.assertFalse(s.is_empty())
        self.assertTrue(s.is_empty(upto=6))
        self.assertFalse(s.is_empty(upto=7))
        self.assertTrue(CountingSet.empty(2).is_empty())

    def test_least_member(self):
        s = CountingSet(2, (Cube((3, 0), (OMEGA, 0)), Cube((1, 2), (1, 5)), Cube((0, 3), (0, 3))))
        self.assertEqual(s.least_member(), (0, 3))
        self.assertIsNone(s.least_member(upto=2))
        self.assertIsNone(CountingSet.empty(2).least_member())

    def test_includes(self):
        big = CountingSet(2, (Cube((0, 0), (2, OMEGA)), Cube((3, 0), (OMEGA, OMEGA))))
        self.assertTrue(big.includes(CountingSet.universe(2)))
        self.assertFalse(CountingSet.universe(2).difference(big.union(big)).member((5, 5)))
        self.assertFalse(CountingSet(2, (Cube((0, 0), (2, 2)),)).includes(big))

    def test_upward_closure(self):
        s = CountingSet(2, (Cube((1, 0), (1, 0)),)).upward_closure()
        self.assertTrue(s.member((4, 4)))
        self.assertFalse(s.member((0, 4)))

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            CountingSet.universe(2).union(CountingSet.universe(3))
        with self.assertRaises(DimensionMismatch):
            CountingSet(2, (Cube.universe(3),))

    def test_union_all(self):
        parts = [CountingSet(1, (Cube((k,), (k,)),)) for k in range(3)]
        s = union_all(1, parts)
        self.assertEqual([s.member((k,)) for k in range(5)], [True, True, True, False, False])

    def test_absorb(self):
        cubes = absorb([Cube((0,), (1,))], Cube((2,), (3,)))
        self.assertEqual(cubes, [Cube((0,), (3,))])


if __name__ == "__main__":
    unittest.main()
