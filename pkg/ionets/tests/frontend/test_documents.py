# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

import json
import os
import tempfile
import unittest

from ionets.countingsets import OMEGA, Cube, CountingSet
from ionets.deciders import Verdict
from ionets.errors import DuplicateId, ParseError, UnknownPlace
from ionets.frontend import documents
from ionets.net import IOTransition, Trajectory
from ionets.protocols import predicate_at_least
from ionets.testing import IONetsTestCase, ambiguous_protocol, observe_net, swap_net, threshold3

NET_TEXT = """{
  "places": ["a", "b"],
  "transitions": [
    {"id": "t1", "src": "a", "obs": "b", "dst": "b"},
    {"id": "t2", "pre": ["b", "b"], "post": ["a", "b"]}
  ]
}
"""


class TestNetDocuments(IONetsTestCase):
    def test_parse(self):
        net = documents.parse_net(NET_TEXT)
        self.assertEqual(net, swap_net())
        self.assertEqual(net.transition("t2"), IOTransition("t2", 1, 1, 0))

    def test_round_trip(self):
        net = swap_net()
        text = documents.serialize_net(net)
        self.assertEqual(json.loads(text)["kind"], "net")
        self.assertEqual(json.loads(text)["version"], documents.VERSION)
        self.assertEqual(documents.parse_net(text), net)
        self.assertEqual(documents.serialize_net(documents.parse_net(text)), text)

    def test_invalid_json(self):
        with self.assertRaises(ParseError) as cm:
            documents.parse_net('{\n  "places": ["a",]\n}')
        self.assertEqual(cm.exception.line, 2)
        self.assertIsNotNone(cm.exception.column)

    def test_undecodable_bytes(self):
        with self.assertRaises(ParseError) as cm:
            documents.parse_net(b'{"places":\n ["\xff"]}')
        self.assertEqual((cm.exception.line, cm.exception.column), (2, 4))

    def test_read_file_undecodable(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "net.json")
            with open(path, "wb") as outfile:
                outfile.write(b'{"places": ["\xff"]}')
            with self.assertRaises(ParseError) as cm:
                documents.read_file(path)
            self.assertEqual(cm.exception.line, 1)

    def test_unknown_field(self):
        with self.assertRaises(ParseError):
            documents.parse_net('{"places": ["a"], "extra": 1}')
        with self.assertRaises(ParseError):
            documents.parse_net('{"transitions": []}')

    def test_duplicates(self):
        with self.assertRaises(DuplicateId):
            documents.parse_net('{"places": ["a", "a"]}')
        with self.assertRaises(DuplicateId):
            documents.parse_net(
                '{"places": ["a"], "transitions": ['
                '{"id": "t", "src": "a", "obs": "a", "dst": "a"},'
                '{"id": "t", "src": "a", "obs": "a", "dst": "a"}]}'
            )

    def test_unknown_place(self):
        text = '{"places": ["a"],\n "transitions": [{"id": "t", "src": "a", "obs": "zz", "dst": "a"}]}'
        with self.assertRaises(UnknownPlace) as cm:
            documents.parse_net(text)
        self.assertEqual(cm.exception.line, 2)

    def test_not_io(self):
        with self.assertRaises(ParseError):
            documents.parse_net(
                '{"places": ["a", "b", "c"], "transitions": '
                '[{"id": "t", "pre": ["a", "b"], "post": ["c", "c"]}]}'
            )

    def test_envelope(self):
        with self.assertRaises(ParseError):
            documents.parse_net('{"kind": "cube", "places": []}')
        with self.assertRaises(ParseError):
            documents.parse_net('{"version": "2", "places": []}')
        with self.assertRaises(ParseError):
            documents.parse_net("[1, 2]")


class TestSetDocuments(IONetsTestCase):
    def test_cube(self):
        net = observe_net()
        c = documents.parse_cube('{"bounds": {"b": [2, null]}}', net)
        self.assertEqual(c, Cube((0, 2), (OMEGA, OMEGA)))
        self.assertEqual(documents.parse_cube(documents.serialize_cube(c, net), net), c)

    def test_cube_errors(self):
        net = observe_net()
        for text in [
            '{"bounds": {"c": [0, 1]}}',
            '{"bounds": {"a": [0]}}',
            '{"bounds": {"a": [-1, 2]}}',
            '{"bounds": {"a": [true, 2]}}',
            '{"bounds": {"a": [0, 1]}, "lower": 3}',
        ]:
            with self.assertRaises(ParseError, msg=text):
                documents.parse_cube(text, net)

    def test_counting_set(self):
        net = observe_net()
        s = CountingSet(2, (Cube((1, 0), (OMEGA, 3)), Cube((0, 0), (0, 0))))
        text = documents.serialize_counting_set(s, net)
        self.assertEqual(documents.parse_counting_set(text, net), s)
        self.assertEqual(documents.parse_set_or_cube(text, net), s)

    def test_set_or_cube(self):
        net = observe_net()
        s = documents.parse_set_or_cube('{"bounds": {"a": [1, 1]}}', net)
        self.assertEqual(s, CountingSet(2, (Cube((1, 0), (1, OMEGA)),)))


class TestMarkingsAndTrajectories(IONetsTestCase):
    def test_marking(self):
        net = observe_net()
        self.assertEqual(documents.parse_marking('{"b": 4}', net), (0, 4))
        self.assertEqual(documents.parse_marking(documents.serialize_marking((2, 1), net), net), (2, 1))
        with self.assertRaises(UnknownPlace):
            documents.parse_marking('{"c": 1}', net)
        with self.assertRaises(ParseError):
            documents.parse_marking('{"a": -1}', net)

    def test_trajectory(self):
        net = observe_net()
        traj = Trajectory((2, 1), ("t", "t"))
        text = documents.serialize_trajectory(traj, net)
        self.assertEqual(documents.parse_trajectory(text, net), traj)

    def test_unknown_transition_location(self):
        text = '{\n  "start": {"a": 1, "b": 1},\n  "steps": ["t", "zz"]\n}'
        with self.assertRaises(ParseError) as cm:
            documents.parse_trajectory(text, observe_net())
        self.assertEqual((cm.exception.line, cm.exception.column), (3, 18))
        self.assertIn("zz", str(cm.exception))


class TestProtocolDocuments(IONetsTestCase):
    def test_round_trip(self):
        for p in (threshold3(), ambiguous_protocol()):
            self.assertEqual(documents.parse_protocol(documents.serialize_protocol(p)), p)

    def test_predicate(self):
        p = threshold3()
        phi = predicate_at_least(p, 3)
        self.assertEqual(documents.parse_predicate(documents.serialize_predicate(phi, p), p), phi)
        phi = documents.parse_predicate('{"cubes": [{"bounds": {"1": [2, null]}}]}', p)
        self.assertTrue(phi.holds(p, (2, 0, 0)))

    def test_invalid_output(self):
        with self.assertRaises(ParseError):
            documents.parse_protocol(
                '{"states": ["q"], "initial": ["q"], "output": {"q": true}}'
            )


class TestVerdictDocuments(IONetsTestCase):
    def test_trajectory_witness(self):
        net = observe_net()
        v = Verdict(True, "symbolic", "reach", Trajectory((2, 1), ("t",)), stats={"cutoff": 14})
        self.assertEqual(documents.parse_verdict(documents.serialize_verdict(v, net), net), v)

    def test_marking_witness(self):
        net = observe_net()
        v = Verdict(False, "symbolic", "live", (1, 1), stats={"cutoff": 9})
        body = json.loads(documents.serialize_verdict(v, net))
        self.assertEqual(body["witness"], {"marking": {"a": 1, "b": 1}})
        self.assertEqual(documents.parse_verdict(json.dumps(body), net), v)

    def test_timing(self):
        net = observe_net()
        v = Verdict(
            False,
            "both",
            "reach",
            None,
            False,
            {"symbolic": {"cutoff": 3, "elapsed": 0.5}, "explicit": {"elapsed": 0.1}},
        )
        body = json.loads(documents.serialize_verdict(v, net))
        self.assertEqual(body["stats"], {"symbolic": {"cutoff": 3}, "explicit": {}})
        self.assertFalse(body["exhaustive"])
        body = json.loads(documents.serialize_verdict(v, net, include_timing=True))
        self.assertEqual(body["stats"]["symbolic"]["elapsed"], 0.5)

    def test_output_is_deterministic(self):
        net = swap_net()
        v = Verdict(True, "explicit", "reach", Trajectory((1, 1), ("t1",)))
        self.assertEqual(documents.serialize_verdict(v, net), documents.serialize_verdict(v, net))
        self.assertTrue(documents.serialize_verdict(v, net).endswith("}\n"))


if __name__ == "__main__":
    unittest.main()
