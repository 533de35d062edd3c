# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""JSON documents for nets, sets, trajectories, protocols and verdicts.

Every document is a JSON object. Serialized documents carry the envelope keys
``"kind"`` and ``"version"`` (currently ``"1"``); parsers accept documents
with or without them. Unknown keys are rejected.

Formats (bodies)::

    net           {"places": ["a", "b"],
                   "transitions": [{"id": "t1", "src": "a", "obs": "b", "dst": "b"}]}
    cube          {"bounds": {"a": [1, null], "b": [0, 3]}}
    counting-set  {"cubes": [<cube body>, ...]}
    marking       {"a": 2, "b": 1}
    trajectory    {"start": <marking body>, "steps": ["t1", "t1"]}
    protocol      {"states": [...], "initial": [...], "output": {"q": 0},
                   "rules": [{"observer": "1", "observed": "1", "successor": "2"}]}
    predicate     a counting-set body over the initial states of a protocol
    verdict       {"answer": true, "engine": "symbolic", "problem": "reach",
                   "exhaustive": true, "witness": ..., "stats": {...}}

``null`` encodes the upper bound omega. Places missing in a cube default to
``[0, null]``, places missing in a marking to ``0``. A net transition may
alternatively be given as ``{"id": ..., "pre": [p, q], "post": [r, q]}``; it
is decomposed with `ionets.net.classify_io`.

A verdict witness is a trajectory body or ``{"marking": <marking body>}``.
"""

import json
import logging
from typing import Any, Dict, Optional, Sequence, Tuple

from ionets.countingsets import Cube, CountingSet, OMEGA
from ionets.deciders import Verdict
from ionets.errors import DuplicateId, NotIO, ParseError, UnknownPlace
from ionets.net import IONet, IOTransition, PlaceId, Trajectory, classify_io
from ionets.protocols import IOProtocol, PredicateSpec

_log = logging.getLogger(__name__)

VERSION = "1"

NET = "net"
CUBE = "cube"
COUNTING_SET = "counting-set"
MARKING = "marking"
TRAJECTORY = "trajectory"
PROTOCOL = "protocol"
PREDICATE = "predicate"
VERDICT = "verdict"
INSTANCE = "instance"

_ENVELOPE = ("kind", "version")


def _locate(text: Optional[str], token: Any) -> Tuple[Optional[int], Optional[int]]:
    """1-based line and column of the first occurrence of ``token`` as a JSON string."""
    if text is None or token is None:
        return None, None
    pos = text.find(json.dumps(str(token)))
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def _fail(text: Optional[str], message: str, token: Any = None, cls=ParseError):
    raise cls(message, *_locate(text, token))


def _decode(data: bytes, what: str) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        column = e.start - (data.rfind(b"\n", 0, e.start) + 1) + 1
        raise ParseError(f"{what} is not valid UTF-8: {e.reason}", line, column) from None


def _load(source, kind: str) -> Tuple[Dict[str, Any], Optional[str]]:
    """Returns the body of a document and the text for error locations."""
    if isinstance(source, (bytes, bytearray)):
        source = _decode(bytes(source), f"{kind} document")
    if isinstance(source, str):
        text = source
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON in {kind} document: {e.msg}", e.lineno, e.colno) from None
    else:
        text, obj = None, source
    if not isinstance(obj, dict):
        raise ParseError(f"{kind} document must be a JSON object, got {type(obj).__name__}")
    doc_kind = obj.get("kind", kind)
    if doc_kind != kind:
        _fail(text, f"expected a '{kind}' document, got '{doc_kind}'", doc_kind)
    version = obj.get("version", VERSION)
    if version != VERSION:
        _fail(text, f"unsupported {kind} document version {version!r}", version)
    return {k: v for k, v in obj.items() if k not in _ENVELOPE}, text


def _keys(body: Dict[str, Any], kind: str, text: Optional[str], required=(), optional=()):
    for key in body:
        if key not in required and key not in optional:
            _fail(text, f"unknown field '{key}' in {kind}", key)
    for key in required:
        if key not in body:
            raise ParseError(f"missing field '{key}' in {kind}")


def _natural(value, what: str, text: Optional[str], token=None) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        _fail(text, f"{what} must be a natural number, got {value!r}", token)
    return value


def _str(value, what: str, text: Optional[str]) -> str:
    if not isinstance(value, str):
        raise ParseError(f"{what} must be a string, got {value!r}")
    return value


def _list(value, what: str, text: Optional[str]) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{what} must be a list, got {type(value).__name__}")
    return value


def _dict(value, what: str, text: Optional[str]) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"{what} must be an object, got {type(value).__name__}")
    return value


def _envelope(kind: str, body: Dict[str, Any]) -> Dict[str, Any]:
    return {"kind": kind, "version": VERSION, **body}


def dumps(doc: Dict[str, Any]) -> str:
    """Deterministic JSON text: sorted keys, two-space indentation."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# net


def _net_from_body(body, text) -> IONet:
    _keys(body, NET, text, required=("places",), optional=("transitions",))
    names = [_str(x, "place name", text) for x in _list(body["places"], "places", text)]
    index = {}
    for name in names:
        if name in index:
            _fail(text, f"duplicate place name '{name}'", name, DuplicateId)
        index[name] = len(index)

    def place(tid, name):
        try:
            return index[name]
        except (KeyError, TypeError):
            _fail(text, f"transition '{tid}' refers to unknown place {name!r}", name, UnknownPlace)

    transitions, ids = [], set()
    for entry in _list(body.get("transitions", []), "transitions", text):
        entry = _dict(entry, "transition", text)
        tid = _str(entry.get("id"), "transition id", text)
        if tid in ids:
            _fail(text, f"duplicate transition id '{tid}'", tid, DuplicateId)
        ids.add(tid)
        if "pre" in entry or "post" in entry:
            _keys(entry, "transition", text, required=("id", "pre", "post"))
            pre = [place(tid, x) for x in _list(entry["pre"], "pre", text)]
            post = [place(tid, x) for x in _list(entry["post"], "post", text)]
            try:
                transitions.append(classify_io(pre, post, tid))
            except NotIO as e:
                _fail(text, str(e), tid)
        else:
            _keys(entry, "transition", text, required=("id", "src", "obs", "dst"))
            transitions.append(
                IOTransition(
                    tid, place(tid, entry["src"]), place(tid, entry["obs"]), place(tid, entry["dst"])
                )
            )
    return IONet(tuple(PlaceId(i, name) for i, name in enumerate(names)), tuple(transitions))


def parse_net(source) -> IONet:
    return _net_from_body(*_load(source, NET))


def _net_body(net: IONet) -> Dict[str, Any]:
    names = net.place_names
    return {
        "places": list(names),
        "transitions": [
            {"id": t.id, "src": names[t.src], "obs": names[t.obs], "dst": names[t.dst]}
            for t in net.transitions
        ],
    }


def serialize_net(net: IONet) -> str:
    return dumps(_envelope(NET, _net_body(net)))


# cubes and counting sets


def _cube_from_body(body, names: Sequence[str], text) -> Cube:
    body = _dict(body, CUBE, text)
    _keys(body, CUBE, text, optional=("bounds",))
    index = {name: i for i, name in enumerate(names)}
    lower = [0] * len(names)
    upper = [OMEGA] * len(names)
    for name, interval in _dict(body.get("bounds", {}), "bounds", text).items():
        if name not in index:
            _fail(text, f"unknown place '{name}' in cube", name, UnknownPlace)
        if not isinstance(interval, list) or len(interval) != 2:
            _fail(text, f"bounds of '{name}' must be a [lower, upper] pair", name)
        lo, hi = interval
        p = index[name]
        lower[p] = _natural(lo, f"lower bound of '{name}'", text, name)
        upper[p] = OMEGA if hi is None else _natural(hi, f"upper bound of '{name}'", text, name)
    return Cube(tuple(lower), tuple(upper))


def _cube_body(c: Cube, names: Sequence[str]) -> Dict[str, Any]:
    return {
        "bounds": {
            name: [lo, None if hi is OMEGA else hi]
            for name, lo, hi in zip(names, c.lower, c.upper)
        }
    }


def _set_from_body(body, names: Sequence[str], kind: str, text) -> CountingSet:
    _keys(body, kind, text, required=("cubes",))
    cubes = [_cube_from_body(c, names, text) for c in _list(body["cubes"], "cubes", text)]
    return CountingSet(len(names), tuple(cubes))


def _set_body(s: CountingSet, names: Sequence[str]) -> Dict[str, Any]:
    return {"cubes": [_cube_body(c, names) for c in s.cubes]}


def parse_cube(source, net: IONet) -> Cube:
    body, text = _load(source, CUBE)
    return _cube_from_body(body, net.place_names, text)


def serialize_cube(c: Cube, net: IONet) -> str:
    return dumps(_envelope(CUBE, _cube_body(c, net.place_names)))


def parse_counting_set(source, net: IONet) -> CountingSet:
    body, text = _load(source, COUNTING_SET)
    return _set_from_body(body, net.place_names, COUNTING_SET, text)


def serialize_counting_set(s: CountingSet, net: IONet) -> str:
    return dumps(_envelope(COUNTING_SET, _set_body(s, net.place_names)))


def parse_set_or_cube(source, net: IONet) -> CountingSet:
    """Parse a counting-set document, or a cube document as a one-cube set."""
    if _kind_of(source) == CUBE:
        return CountingSet(net.num_places, (parse_cube(source, net),))
    return parse_counting_set(source, net)


def _kind_of(source) -> Optional[str]:
    try:
        obj = json.loads(source) if isinstance(source, (str, bytes, bytearray)) else source
    except json.JSONDecodeError:
        return None
    if isinstance(obj, dict):
        if "kind" in obj:
            return obj["kind"]
        if "bounds" in obj:
            return CUBE
    return None


# markings and trajectories


def _marking_from_body(body, names: Sequence[str], text) -> Tuple[int, ...]:
    body = _dict(body, MARKING, text)
    index = {name: i for i, name in enumerate(names)}
    m = [0] * len(names)
    for name, value in body.items():
        if name not in index:
            _fail(text, f"unknown place '{name}' in marking", name, UnknownPlace)
        m[index[name]] = _natural(value, f"token count of '{name}'", text, name)
    return tuple(m)


def _marking_body(m: Sequence[int], names: Sequence[str]) -> Dict[str, int]:
    return {name: int(x) for name, x in zip(names, m)}


def parse_marking(source, net: IONet) -> Tuple[int, ...]:
    body, text = _load(source, MARKING)
    return _marking_from_body(body, net.place_names, text)


def serialize_marking(m: Sequence[int], net: IONet) -> str:
    return dumps(_envelope(MARKING, _marking_body(m, net.place_names)))


def _trajectory_from_body(body, net: IONet, text) -> Trajectory:
    body = _dict(body, TRAJECTORY, text)
    _keys(body, TRAJECTORY, text, required=("start",), optional=("steps",))
    start = _marking_from_body(body["start"], net.place_names, text)
    ids = {t.id for t in net.transitions}
    steps = []
    for tid in _list(body.get("steps", []), "steps", text):
        tid = _str(tid, "transition id", text)
        if tid not in ids:
            _fail(text, f"unknown transition id {tid!r} in trajectory", tid)
        steps.append(tid)
    return Trajectory(start, tuple(steps))


def _trajectory_body(traj: Trajectory, net: IONet) -> Dict[str, Any]:
    return {"start": _marking_body(traj.start, net.place_names), "steps": list(traj.steps)}


def parse_trajectory(source, net: IONet) -> Trajectory:
    body, text = _load(source, TRAJECTORY)
    return _trajectory_from_body(body, net, text)


def serialize_trajectory(traj: Trajectory, net: IONet) -> str:
    return dumps(_envelope(TRAJECTORY, _trajectory_body(traj, net)))


# protocols and predicates


def parse_protocol(source) -> IOProtocol:
    """Parse and validate a protocol document.

    Raises:
        `ParseError`: On malformed documents.
        `InvalidProtocol`: If the protocol is structurally invalid.
    """
    body, text = _load(source, PROTOCOL)
    _keys(body, PROTOCOL, text, required=("states", "initial", "output"), optional=("rules",))
    states = [_str(q, "state", text) for q in _list(body["states"], "states", text)]
    initial = [_str(q, "initial state", text) for q in _list(body["initial"], "initial", text)]
    output = {}
    for q, b in _dict(body["output"], "output", text).items():
        if isinstance(b, bool) or b not in (0, 1):
            _fail(text, f"output of '{q}' must be 0 or 1, got {b!r}", q)
        output[q] = b
    rules = []
    for entry in _list(body.get("rules", []), "rules", text):
        entry = _dict(entry, "rule", text)
        _keys(entry, "rule", text, required=("observer", "observed", "successor"))
        rules.append(
            tuple(_str(entry[k], k, text) for k in ("observer", "observed", "successor"))
        )
    protocol = IOProtocol(tuple(states), tuple(initial), output, tuple(rules))
    protocol.validate()
    return protocol


def _protocol_body(p: IOProtocol) -> Dict[str, Any]:
    return {
        "states": list(p.states),
        "initial": list(p.initial),
        "output": {q: p.output[q] for q in p.states},
        "rules": [
            {"observer": r.observer, "observed": r.observed, "successor": r.successor}
            for r in p.rules
        ],
    }


def serialize_protocol(p: IOProtocol) -> str:
    return dumps(_envelope(PROTOCOL, _protocol_body(p)))


def parse_predicate(source, protocol: IOProtocol) -> PredicateSpec:
    body, text = _load(source, PREDICATE)
    return PredicateSpec(_set_from_body(body, protocol.initial, PREDICATE, text))


def serialize_predicate(phi: PredicateSpec, protocol: IOProtocol) -> str:
    return dumps(_envelope(PREDICATE, _set_body(phi.set, protocol.initial)))


# verdicts


def _strip_timing(stats: Dict[str, Any]) -> Dict[str, Any]:
    result = {}
    for key, value in stats.items():
        if key == "elapsed":
            continue
        result[key] = _strip_timing(value) if isinstance(value, dict) else value
    return result


def _verdict_body(v: Verdict, names: Sequence[str], include_timing: bool = False):
    if v.witness is None:
        witness = None
    elif isinstance(v.witness, Trajectory):
        witness = {
            "start": _marking_body(v.witness.start, names),
            "steps": list(v.witness.steps),
        }
    else:
        witness = {"marking": _marking_body(v.witness, names)}
    return {
        "answer": bool(v.answer),
        "engine": v.engine,
        "problem": v.problem,
        "exhaustive": bool(v.exhaustive),
        "witness": witness,
        "stats": dict(v.stats) if include_timing else _strip_timing(v.stats),
    }


def serialize_verdict(v: Verdict, net: IONet, include_timing: bool = False) -> str:
    """Serialize ``v``; timing entries of ``stats`` are dropped unless requested."""
    return dumps(_envelope(VERDICT, _verdict_body(v, net.place_names, include_timing)))


def parse_verdict(source, net: IONet) -> Verdict:
    body, text = _load(source, VERDICT)
    _keys(
        body,
        VERDICT,
        text,
        required=("answer", "engine", "problem"),
        optional=("exhaustive", "witness", "stats"),
    )
    if not isinstance(body["answer"], bool):
        _fail(text, f"verdict answer must be a boolean, got {body['answer']!r}", "answer")
    witness = body.get("witness")
    if witness is not None:
        witness = _dict(witness, "witness", text)
        if "marking" in witness:
            _keys(witness, "witness", text, required=("marking",))
            witness = _marking_from_body(witness["marking"], net.place_names, text)
        else:
            witness = _trajectory_from_body(witness, net, text)
    return Verdict(
        body["answer"],
        _str(body["engine"], "engine", text),
        _str(body["problem"], "problem", text),
        witness,
        bool(body.get("exhaustive", True)),
        dict(_dict(body.get("stats", {}), "stats", text)),
    )


# generated instances


def serialize_instance(net: IONet, s_from: CountingSet, s_to: CountingSet, seed: int = None) -> str:
    names = net.place_names
    body = {
        "net": _envelope(NET, _net_body(net)),
        "from": _envelope(COUNTING_SET, _set_body(s_from, names)),
        "to": _envelope(COUNTING_SET, _set_body(s_to, names)),
    }
    if seed is not None:
        body["seed"] = seed
    return dumps(_envelope(INSTANCE, body))


def parse_instance(source) -> Tuple[IONet, CountingSet, CountingSet]:
    body, text = _load(source, INSTANCE)
    _keys(body, INSTANCE, text, required=("net", "from", "to"), optional=("seed",))
    net = _net_from_body(*_load(body["net"], NET))
    sets = []
    for key in ("from", "to"):
        set_body, _ = _load(body[key], COUNTING_SET)
        sets.append(_set_from_body(set_body, net.place_names, COUNTING_SET, text))
    return net, sets[0], sets[1]


def read_file(path: str) -> str:
    """Returns the UTF-8 text of ``path``; ``-`` is not supported.

    Raises:
        `ParseError`: If the file is not valid UTF-8.
    """
    with open(path, "rb") as infile:
        return _decode(infile.read(), path)


def serialize_marking_set(markings, net: IONet) -> str:
    """A ``marking-set`` document; markings are listed in lexicographic order."""
    names = net.place_names
    return dumps(
        _envelope("marking-set", {"markings": [_marking_body(m, names) for m in sorted(markings)]})
    )


def serialize_corpus(records) -> str:
    return dumps(_envelope("corpus", {"records": list(records)}))
