# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Immediate observation nets, markings and firing.

An immediate observation (IO) transition moves one token from a source place
to a destination place while observing, but not consuming, a token on an
observed place. Its pre-multiset is ``{src, obs}`` and its post-multiset is
``{dst, obs}``. Shapes where places coincide are admitted:

* ``src == dst``: firing leaves the marking unchanged,
* ``src == obs``: two tokens are required on ``src``,
* ``obs == dst``: the moved token joins the observed one.

Markings are dense tuples of natural numbers, one entry per place, in the
order of `IONet.places`. All values in this module are immutable.
"""

__author__ = "The ionets developers"

import collections
import dataclasses
import logging
from typing import Iterable, List, Sequence, Tuple

from ionets.errors import (
    DimensionMismatch,
    DuplicateId,
    InvalidStep,
    NotEnabled,
    NotIO,
    UnknownPlace,
)

_log = logging.getLogger(__name__)

Marking = Tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class PlaceId:
    index: int
    name: str


@dataclasses.dataclass(frozen=True)
class IOTransition:
    """An IO transition ``(src, obs) -> (dst, obs)`` over place indices."""

    id: str
    src: int
    obs: int
    dst: int

    @property
    def pre(self) -> Tuple[int, int]:
        return (self.src, self.obs)

    @property
    def post(self) -> Tuple[int, int]:
        return (self.dst, self.obs)


@dataclasses.dataclass(frozen=True)
class IONet:
    places: Tuple[PlaceId, ...]
    transitions: Tuple[IOTransition, ...]

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        names = set()
        for i, place in enumerate(self.places):
            if place.index != i:
                raise ValueError(f"place '{place.name}' has index {place.index}, expected {i}")
            if place.name in names:
                raise DuplicateId(f"duplicate place name '{place.name}'")
            names.add(place.name)
        ids = set()
        for t in self.transitions:
            if t.id in ids:
                raise DuplicateId(f"duplicate transition id '{t.id}'")
            ids.add(t.id)
            for p in (t.src, t.obs, t.dst):
                if not 0 <= p < len(self.places):
                    raise UnknownPlace(f"transition '{t.id}' refers to place index {p}")

    @classmethod
    def build(cls, place_names: Sequence[str], transitions: Iterable[Sequence[str]] = ()):
        """Create a net from place names and ``(id, src, obs, dst)`` name tuples."""
        places = tuple(PlaceId(i, name) for i, name in enumerate(place_names))
        index = {p.name: p.index for p in places}

        def lookup(tid, name):
            try:
                return index[name]
            except KeyError:
                raise UnknownPlace(f"transition '{tid}' refers to unknown place '{name}'") from None

        result = []
        for tid, src, obs, dst in transitions:
            result.append(
                IOTransition(tid, lookup(tid, src), lookup(tid, obs), lookup(tid, dst))
            )
        return cls(places, tuple(result))

    @property
    def num_places(self) -> int:
        return len(self.places)

    @property
    def place_names(self) -> Tuple[str, ...]:
        return tuple(p.name for p in self.places)

    def place_index(self, name: str) -> int:
        for p in self.places:
            if p.name == name:
                return p.index
        raise UnknownPlace(f"unknown place '{name}'")

    def transition(self, tid: str) -> IOTransition:
        for t in self.transitions:
            if t.id == tid:
                return t
        raise KeyError(tid)

    def check_marking(self, m: Sequence[int]) -> Marking:
        """Returns ``m`` as a `Marking` after validating its shape."""
        if len(m) != self.num_places:
            raise DimensionMismatch(
                f"marking has {len(m)} entries but the net has {self.num_places} places"
            )
        if any(int(x) < 0 for x in m):
            raise ValueError(f"marking {tuple(m)} has negative entries")
        return tuple(int(x) for x in m)

    def __str__(self):
        ts = ", ".join(
            f"{t.id}:({self.places[t.src].name},{self.places[t.obs].name})->"
            f"({self.places[t.dst].name},{self.places[t.obs].name})"
            for t in self.transitions
        )
        return f"IONet(places={list(self.place_names)}, transitions=[{ts}])"


@dataclasses.dataclass(frozen=True)
class Trajectory:
    """A firing sequence given by its start marking and transition ids.

    Intermediate markings are not stored, see `replay`.
    """

    start: Marking
    steps: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(self.start))
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self):
        return len(self.steps)


def total(m: Sequence[int]) -> int:
    return sum(m)


def classify_io(pre: Sequence[int], post: Sequence[int], tid: str = "t") -> IOTransition:
    """Decompose a transition given by pre- and post-multisets into IO shape.

    Returns the ``(src, obs, dst)`` triple with ``pre == {src, obs}`` and
    ``post == {dst, obs}``. If several decompositions exist, the one with
    ``src == dst`` is preferred, then the lowest observed place index.

    Args:
        pre (sequence of `int`):
            The pre-multiset as a sequence of place indices.
        post (sequence of `int`):
            The post-multiset as a sequence of place indices.
        tid (`str`, optional):
            Id of the returned transition. Defaults to ``"t"``.

    Raises:
        `NotIO`: If either multiset does not have exactly two elements or no
            decomposition exists.
    """
    if len(pre) != 2 or len(post) != 2:
        raise NotIO(
            f"transition '{tid}': pre and post must have exactly two elements, "
            f"got {len(pre)} and {len(post)}"
        )
    pre_c = collections.Counter(pre)
    post_c = collections.Counter(post)
    candidates = []
    for obs in sorted(pre_c):
        if post_c[obs] == 0:
            continue
        src = next(iter((pre_c - collections.Counter([obs])).elements()))
        dst = next(iter((post_c - collections.Counter([obs])).elements()))
        candidates.append((src != dst, obs, src, dst))
    if not candidates:
        raise NotIO(f"transition '{tid}': pre {sorted(pre)} and post {sorted(post)} share no observed place")
    _, obs, src, dst = min(candidates)
    return IOTransition(tid, src, obs, dst)


def enabled(net: IONet, m: Marking, t: IOTransition) -> bool:
    if t.src == t.obs:
        return m[t.src] >= 2
    return m[t.src] >= 1 and m[t.obs] >= 1


def fire(net: IONet, m: Marking, t: IOTransition) -> Marking:
    """Fire ``t`` in ``m``; the total token count is unchanged.

    Raises:
        `NotEnabled`: If ``t`` is not enabled in ``m``.
    """
    if not enabled(net, m, t):
        raise NotEnabled(f"transition '{t.id}' is not enabled in {tuple(m)}")
    if t.src == t.dst:
        return tuple(m)
    result = list(m)
    result[t.src] -= 1
    result[t.dst] += 1
    return tuple(result)


def successors(net: IONet, m: Marking):
    """Yields ``(transition, marking)`` for every transition enabled in ``m``."""
    for t in net.transitions:
        if enabled(net, m, t):
            yield t, fire(net, m, t)


def replay(net: IONet, traj: Trajectory) -> List[Marking]:
    """Returns the full marking sequence of ``traj``.

    This is the validity check applied to every witness that ionets produces.

    Raises:
        `InvalidStep`: If a step is not enabled or names an unknown transition.
    """
    m = net.check_marking(traj.start)
    markings = [m]
    for i, tid in enumerate(traj.steps):
        try:
            t = net.transition(tid)
        except KeyError:
            raise InvalidStep(i, f"unknown transition '{tid}'") from None
        if not enabled(net, m, t):
            raise InvalidStep(i, f"transition '{tid}' is not enabled in {m}")
        m = fire(net, m, t)
        markings.append(m)
    return markings
