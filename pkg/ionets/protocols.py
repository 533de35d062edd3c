# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Immediate observation population protocols.

Agents of an IO protocol change their state by observing another agent:
a rule ``(q, o) -> (q', o)`` lets an agent in state ``q`` that observes an
agent in state ``o`` move to ``q'``. Configurations are markings of the
net with one place per state, see `to_net`.

A protocol computes a predicate ``phi`` over input configurations (all agents
in initial states) if every fair run from an input ``C0`` eventually reaches
and never leaves configurations in which all agents output ``phi(C0)``.
On a finite configuration graph this holds iff no configuration reachable
from ``C0`` loses the ability to reach the set ``ST_b`` of configurations
from which only ``b``-consensus configurations are reachable.
"""

import dataclasses
import itertools
import logging
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from ionets.countingsets import Cube, CountingSet, OMEGA
from ionets.deciders import SYMBOLIC, Verdict
from ionets.errors import DimensionMismatch, EngineDisagreement, InvalidProtocol
from ionets.net import IONet, Trajectory
from ionets.pruning import search_population
from ionets.transformers import post_star, pre_star, saturation_cap

_log = logging.getLogger(__name__)


class Rule(NamedTuple):
    observer: str
    observed: str
    successor: str


@dataclasses.dataclass(frozen=True)
class IOProtocol:
    """An IO population protocol.

    Attributes:
        states (`tuple` of `str`):
            The states, in the order of the places of `to_net`.
        initial (`tuple` of `str`):
            The initial states, a nonempty subset of ``states``.
        output (`dict`):
            Maps every state to ``0`` or ``1``.
        rules (`tuple` of `Rule`):
            Observation rules ``(observer, observed) -> (successor, observed)``.
    """

    states: Tuple[str, ...]
    initial: Tuple[str, ...]
    output: Mapping[str, int]
    rules: Tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "initial", tuple(self.initial))
        object.__setattr__(self, "output", dict(self.output))
        object.__setattr__(self, "rules", tuple(Rule(*r) for r in self.rules))

    def validate(self) -> List[str]:
        """Check the protocol's structure.

        Returns:
            Warnings about rules that never change a configuration.

        Raises:
            `InvalidProtocol`: If a name is duplicated or unknown, there is no
                initial state, or an output is missing or not ``0``/``1``.
        """
        known = set(self.states)
        if len(known) != len(self.states):
            raise InvalidProtocol(f"duplicate states in {list(self.states)}")
        if not self.initial:
            raise InvalidProtocol("the protocol has no initial state")
        if len(set(self.initial)) != len(self.initial):
            raise InvalidProtocol(f"duplicate initial states in {list(self.initial)}")
        for q in self.initial:
            if q not in known:
                raise InvalidProtocol(f"initial state '{q}' is not a state")
        for q in self.output:
            if q not in known:
                raise InvalidProtocol(f"output given for unknown state '{q}'")
        for q in self.states:
            if self.output.get(q) not in (0, 1):
                raise InvalidProtocol(f"state '{q}' has output {self.output.get(q)!r}, expected 0 or 1")
        warnings = []
        for i, rule in enumerate(self.rules):
            for q in rule:
                if q not in known:
                    raise InvalidProtocol(f"rule {i} {tuple(rule)} refers to unknown state '{q}'")
            if rule.observer == rule.successor:
                warnings.append(f"rule {i} {tuple(rule)} does not change the observer's state")
        for w in warnings:
            _log.warning(w)
        return warnings

    def labels(self) -> Tuple[int, ...]:
        """The outputs in the order of ``states``."""
        return tuple(self.output[q] for q in self.states)


@dataclasses.dataclass(frozen=True)
class PredicateSpec:
    """A predicate over input configurations.

    ``set`` is a counting set over the initial states (in the order of
    `IOProtocol.initial`); it contains the inputs mapped to ``1``.
    """

    set: CountingSet

    def extend(self, p: IOProtocol) -> CountingSet:
        """The predicate as a counting set over all states; non-initial states are empty."""
        if self.set.dim != len(p.initial):
            raise DimensionMismatch(
                f"predicate has dimension {self.set.dim} but the protocol has {len(p.initial)} initial states"
            )
        positions = [p.states.index(q) for q in p.initial]
        n = len(p.states)
        cubes = []
        for c in self.set.cubes:
            lower, upper = [0] * n, [0] * n
            for i, pos in enumerate(positions):
                lower[pos], upper[pos] = c.lower[i], c.upper[i]
            cubes.append(Cube(tuple(lower), tuple(upper)))
        return CountingSet(n, tuple(cubes)).normalize()

    def holds(self, p: IOProtocol, configuration: Sequence[int]) -> bool:
        return self.extend(p).member(configuration)


def to_net(p: IOProtocol) -> Tuple[IONet, Dict[str, int]]:
    """Translate ``p`` into an IO net with one place per state and one transition per rule.

    Returns:
        The net and the map from states to place indices.
    """
    p.validate()
    net = IONet.build(
        p.states,
        [(f"r{i}", r.observer, r.observed, r.successor) for i, r in enumerate(p.rules)],
    )
    return net, {q: i for i, q in enumerate(p.states)}


def _at_least(n: int, positions: Sequence[int], k: int, fixed_zero: Sequence[int] = ()) -> CountingSet:
    """Markings with at least ``k`` tokens on ``positions`` and none on ``fixed_zero``."""
    cubes = []
    if k <= 0:
        compositions = [(0,) * len(positions)]
    else:
        compositions = [
            c for c in itertools.product(range(k + 1), repeat=len(positions)) if sum(c) == k
        ]
    for comp in compositions:
        lower, upper = [0] * n, [OMEGA] * n
        for pos, x in zip(positions, comp):
            lower[pos] = x
        for pos in fixed_zero:
            upper[pos] = 0
        cubes.append(Cube(tuple(lower), tuple(upper)))
    return CountingSet(n, tuple(cubes)).normalize()


def initial_set(p: IOProtocol, min_agents: int = 1) -> CountingSet:
    """Input configurations with at least ``min_agents`` agents.

    For ``min_agents <= 1`` a union of at most one cube per initial state,
    for larger minima the union of cubes putting at least ``min_agents``
    agents on the initial states in every possible way.
    """
    n = len(p.states)
    positions = [p.states.index(q) for q in p.initial]
    others = [i for i in range(n) if i not in positions]
    return _at_least(n, positions, min_agents, others)


def predicate_at_least(p: IOProtocol, k: int) -> PredicateSpec:
    """The predicate "at least ``k`` agents"."""
    m = len(p.initial)
    return PredicateSpec(_at_least(m, range(m), k))


def consensus_set(p: IOProtocol, b: int) -> CountingSet:
    """Configurations in which all agents output ``b``."""
    upper = tuple(0 if out != b else OMEGA for out in p.labels())
    return CountingSet(len(p.states), (Cube((0,) * len(p.states), upper),))


def stable_consensus_set(p: IOProtocol, b: int, cap: int = None) -> CountingSet:
    """``ST_b``: configurations from which only ``b``-consensus configurations are reachable.

    Args:
        p (`IOProtocol`):
            The protocol.
        b (`int`):
            ``0`` or ``1``.
        cap (`int`, optional):
            Saturation cap, see `ionets.transformers.pre_star`.
    """
    if b not in (0, 1):
        raise ValueError(f"consensus value must be 0 or 1, got {b}")
    net, _ = to_net(p)
    dissenting = consensus_set(p, b).complement()
    return pre_star(net, dissenting, cap=cap).complement()


def _cutoff(net: IONet, cap: Optional[int], *inputs: CountingSet) -> int:
    """Population cutoff of a protocol check.

    At least the saturation cap of ``inputs``, and ``n**3`` above the smallest
    population of every input cube.
    """
    if cap is not None:
        return cap
    cutoff = saturation_cap(net, *inputs)
    for s in inputs:
        for c in s.cubes:
            if not c.is_empty():
                cutoff = max(cutoff, net.num_places**3 + c.lower_norm())
    return cutoff


def _trajectory_to(net: IONet, sources: CountingSet, target: Tuple[int, ...]) -> Trajectory:
    """A trajectory from a member of ``sources`` to the configuration ``target``."""
    k = sum(target)
    point = Cube.point(target)
    for c in sources.cubes:
        if c.is_empty() or not c.min_total() <= k <= c.max_total():
            continue
        traj = search_population(net, k, c, point)
        if traj is not None:
            return traj
    raise EngineDisagreement(
        f"saturation reaches {target} but the explicit search found no trajectory to it"
    )


def check_correct(
    p: IOProtocol, phi: PredicateSpec, min_agents: int = 1, cap: int = None
) -> Verdict:
    """Decide if ``p`` computes ``phi`` on all inputs with at least ``min_agents`` agents.

    For ``b = 0, 1``, ``I_b`` is the set of inputs with ``phi = b``. The protocol
    is correct iff no configuration reachable from ``I_b`` is outside
    ``pre*(ST_b)``.

    Note:
        A negative verdict carries a trajectory from an input to a
        configuration that cannot reach ``ST_b``; ``stats["b"]`` is the
        expected output of that input.
    """
    net, _ = to_net(p)
    inputs = initial_set(p, min_agents)
    ones = phi.extend(p)
    split = (inputs.difference(ones), inputs.intersect(ones))
    cutoff = _cutoff(net, cap, inputs, ones, *split)
    _log.info(f"checking correctness of a {len(p.states)}-state protocol up to population {cutoff}")
    for b, inputs_b in enumerate(split):
        st_b = stable_consensus_set(p, b, cap=cutoff)
        can_stabilize = pre_star(net, st_b, cap=cutoff)
        bad = post_star(net, inputs_b, cap=cutoff).difference(can_stabilize)
        stuck = bad.least_member(upto=cutoff)
        if stuck is not None:
            _log.info(f"configuration {stuck} is reachable from a {b}-input and cannot reach ST_{b}")
            traj = _trajectory_to(net, inputs_b, stuck)
            return Verdict(
                False, SYMBOLIC, "correct", traj, stats={"b": b, "cutoff": cutoff}
            )
    return Verdict(True, SYMBOLIC, "correct", None, stats={"cutoff": cutoff})


def check_well_specified(p: IOProtocol, min_agents: int = 1, cap: int = None) -> Verdict:
    """Decide if every input stabilizes to a unique consensus.

    Two conditions are checked:

    (i) no input can reach both ``ST_0`` and ``ST_1``; a violation carries the
        input configuration as witness.
    (ii) no configuration reachable from an input is stuck outside
        ``pre*(ST_0 | ST_1)``; a violation carries a trajectory from an input
        to such a configuration.
    """
    net, _ = to_net(p)
    inputs = initial_set(p, min_agents)
    cutoff = _cutoff(net, cap, inputs)
    reaches = [pre_star(net, stable_consensus_set(p, b, cap=cutoff), cap=cutoff) for b in (0, 1)]

    ambiguous = inputs.intersect(reaches[0]).intersect(reaches[1]).least_member(upto=cutoff)
    if ambiguous is not None:
        return Verdict(
            False,
            SYMBOLIC,
            "well-specified",
            ambiguous,
            stats={"condition": "ambiguous-input", "cutoff": cutoff},
        )

    stuck = (
        post_star(net, inputs, cap=cutoff)
        .difference(reaches[0].union(reaches[1]))
        .least_member(upto=cutoff)
    )
    if stuck is not None:
        return Verdict(
            False,
            SYMBOLIC,
            "well-specified",
            _trajectory_to(net, inputs, stuck),
            stats={"condition": "no-consensus", "cutoff": cutoff},
        )
    return Verdict(True, SYMBOLIC, "well-specified", None, stats={"cutoff": cutoff})


def threshold_protocol(k: int) -> IOProtocol:
    """The IO protocol deciding "at least ``k`` agents".

    States are ``"1", ..., str(k)``; all agents start in ``"1"``. An agent
    observing an agent in its own level ``i < k`` moves to ``i+1``, and every
    agent observing an agent in level ``k`` moves to ``k``. Only level ``k``
    outputs ``1``.
    """
    if k < 1:
        raise ValueError(f"threshold must be positive, got {k}")
    states = tuple(str(i) for i in range(1, k + 1))
    rules = [(str(i), str(i), str(i + 1)) for i in range(1, k)]
    rules += [(str(i), str(k), str(k)) for i in range(1, k)]
    output = {q: int(q == str(k)) for q in states}
    return IOProtocol(states, ("1",), output, tuple(rules))
