# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Parameterized reachability, coverability and liveness.

Each problem is decided by the symbolic engine (saturation of counting sets,
see `ionets.transformers`) and, for reachability and coverability, also by
the explicit engine (bounded search, see `ionets.pruning`).

Population cutoff:
    Saturation results are exact on all markings with at most ``cap`` tokens,
    where ``cap`` is the saturation cap. The deciders choose the cap of a
    query, its *cutoff*, at least as large as every witness bound of the
    query's cube pairs and test emptiness only on populations up to the
    cutoff. A reachable target is then always found at a population the
    symbolic result is exact on, and both engines decide the same question.
"""

import dataclasses
import logging
import multiprocessing as mp
import time
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from ionets import ionetsconfig as _ionetsconfig
from ionets.countingsets import Cube, CountingSet, OMEGA, union_all
from ionets.errors import DimensionMismatch, EngineDisagreement
from ionets.net import IONet, Marking, Trajectory
from ionets.pruning import find_small_witness, witness_bound
from ionets.transformers import enabled_cube, post_star, pre_star, saturation_cap

_log = logging.getLogger(__name__)

SYMBOLIC = "symbolic"
EXPLICIT = "explicit"
BOTH = "both"
ENGINES = (SYMBOLIC, EXPLICIT, BOTH)

ALL = "all"
EXISTS = "exists"
QUANTIFIERS = (ALL, EXISTS)


@dataclasses.dataclass
class Verdict:
    """Answer of a decision procedure.

    Attributes:
        answer (`bool`):
            The decided answer.
        engine (`str`):
            The engine that produced the answer.
        problem (`str`):
            One of ``"reach"``, ``"cover"``, ``"live"``, ``"correct"`` and
            ``"well-specified"``.
        witness (`Trajectory` or `tuple` or ``None``):
            A replayable trajectory for positive reachability verdicts and
            for protocol counterexamples, a marking for liveness verdicts.
        exhaustive (`bool`):
            ``False`` if a user-supplied bound smaller than the witness bound
            (or a depth cap) was used, in which case a negative answer only
            means "no witness up to the bound".
        stats (`dict`):
            Engine details, e.g. the cutoff, cube counts and timing.
    """

    answer: bool
    engine: str
    problem: str
    witness: Union[Trajectory, Marking, None] = None
    exhaustive: bool = True
    stats: Dict[str, Any] = dataclasses.field(default_factory=dict)


def _check(net: IONet, *sets: CountingSet):
    for s in sets:
        if s.dim != net.num_places:
            raise DimensionMismatch(
                f"set has dimension {s.dim} but the net has {net.num_places} places"
            )


def _nonempty(s: CountingSet) -> List[Cube]:
    return [c for c in s.cubes if not c.is_empty()]


def _cube_pairs(s_from: CountingSet, s_to: CountingSet) -> List[Tuple[Cube, Cube]]:
    return [(a, b) for a in _nonempty(s_from) for b in _nonempty(s_to)]


def query_cutoff(net: IONet, s_from: CountingSet, s_to: CountingSet) -> int:
    """Saturation cap of a reachability query, see the module docstring."""
    cutoff = saturation_cap(net, s_from, s_to)
    for a, b in _cube_pairs(s_from, s_to):
        cutoff = max(cutoff, witness_bound(net, a, b).value)
    return cutoff


def _single(c: Cube) -> CountingSet:
    return CountingSet(c.dim, (c,))


def _extract_witness(net: IONet, s_from: CountingSet, s_to: CountingSet, cap: int) -> Trajectory:
    for a in _nonempty(s_from):
        forward = post_star(net, _single(a), cap=cap)
        for b in _nonempty(s_to):
            if forward.intersect(_single(b)).is_empty(upto=cap):
                continue
            traj = find_small_witness(net, a, b, bound=cap)
            if traj is None:
                raise EngineDisagreement(
                    f"post* of {a} meets {b} up to population {cap} but the explicit search found no witness"
                )
            return traj
    raise EngineDisagreement("post* meets the target set but no single cube pair does")


def _reachable_symbolic(
    net: IONet, s_from: CountingSet, s_to: CountingSet, problem: str, cap: int = None
) -> Verdict:
    started = time.perf_counter()
    cutoff = query_cutoff(net, s_from, s_to) if cap is None else cap
    forward = post_star(net, s_from, cap=cutoff)
    answer = not forward.intersect(s_to).is_empty(upto=cutoff)
    stats = {"cutoff": cutoff, "post_star_cubes": len(forward)}
    if _ionetsconfig.CROSS_CHECK:
        backward = pre_star(net, s_to, cap=cutoff)
        stats["pre_star_cubes"] = len(backward)
        if answer != (not s_from.intersect(backward).is_empty(upto=cutoff)):
            raise EngineDisagreement(
                f"{problem}: post* says {answer} but pre* says {not answer}"
            )
    witness = _extract_witness(net, s_from, s_to, cutoff) if answer else None
    stats["elapsed"] = time.perf_counter() - started
    return Verdict(answer, SYMBOLIC, problem, witness, stats=stats)


def _reachable_explicit(
    net: IONet,
    s_from: CountingSet,
    s_to: CountingSet,
    problem: str,
    bound: int = None,
    max_steps: int = None,
) -> Verdict:
    started = time.perf_counter()
    exhaustive = max_steps is None
    pairs = _cube_pairs(s_from, s_to)
    searched = 0
    for a, b in pairs:
        needed = witness_bound(net, a, b).value
        if bound is not None and bound < needed:
            exhaustive = False
        searched += 1
        traj = find_small_witness(
            net, a, b, bound=needed if bound is None else bound, max_steps=max_steps
        )
        if traj is not None:
            stats = {"cube_pairs": searched, "elapsed": time.perf_counter() - started}
            return Verdict(True, EXPLICIT, problem, traj, stats=stats)
    stats = {"cube_pairs": searched, "elapsed": time.perf_counter() - started}
    if bound is not None:
        stats["bound"] = bound
    return Verdict(False, EXPLICIT, problem, None, exhaustive, stats)


def _reachable(
    net: IONet,
    s_from: CountingSet,
    s_to: CountingSet,
    problem: str,
    engine: str,
    bound: int,
    cap: int,
    max_steps: int,
) -> Verdict:
    _check(net, s_from, s_to)
    if engine not in ENGINES:
        raise ValueError(f"unknown engine '{engine}', expected one of {ENGINES}")
    if engine == SYMBOLIC:
        return _reachable_symbolic(net, s_from, s_to, problem, cap)
    if engine == EXPLICIT:
        return _reachable_explicit(net, s_from, s_to, problem, bound, max_steps)
    symbolic = _reachable_symbolic(net, s_from, s_to, problem, cap)
    explicit = _reachable_explicit(net, s_from, s_to, problem, bound, max_steps)
    if symbolic.answer != explicit.answer and explicit.exhaustive:
        raise EngineDisagreement(
            f"{problem}: symbolic engine says {symbolic.answer}, explicit engine says {explicit.answer}"
        )
    return Verdict(
        symbolic.answer,
        BOTH,
        problem,
        explicit.witness if explicit.witness is not None else symbolic.witness,
        explicit.exhaustive,
        {SYMBOLIC: symbolic.stats, EXPLICIT: explicit.stats},
    )


def cube_reachable(
    net: IONet,
    s_from: CountingSet,
    s_to: CountingSet,
    engine: str = SYMBOLIC,
    bound: int = None,
    cap: int = None,
    max_steps: int = None,
) -> Verdict:
    """Decide if some marking of ``s_from`` reaches some marking of ``s_to``.

    Args:
        net (`IONet`):
            The net.
        s_from (`CountingSet`):
            Start markings.
        s_to (`CountingSet`):
            Target markings.
        engine (`str`, optional):
            ``"symbolic"`` (default), ``"explicit"`` or ``"both"``. With
            ``"both"``, differing answers raise `EngineDisagreement`.
        bound (`int`, optional):
            Population bound of the explicit engine, overriding the witness
            bound. A smaller bound makes negative answers non-exhaustive.
        cap (`int`, optional):
            Saturation cap of the symbolic engine, overriding `query_cutoff`.
        max_steps (`int`, optional):
            Depth cap of the explicit engine.

    Raises:
        `DimensionMismatch`: If a set does not match the net.
    """
    return _reachable(net, s_from, s_to, "reach", engine, bound, cap, max_steps)


def cube_coverable(
    net: IONet,
    s_from: CountingSet,
    s_to: CountingSet,
    engine: str = SYMBOLIC,
    bound: int = None,
    cap: int = None,
    max_steps: int = None,
) -> Verdict:
    """Decide if some marking of ``s_from`` reaches a marking covering a member of ``s_to``.

    Reduces to `cube_reachable` with the upward closure of ``s_to``.
    """
    _check(net, s_from, s_to)
    return _reachable(
        net, s_from, s_to.upward_closure(), "cover", engine, bound, cap, max_steps
    )


def not_live_set(net: IONet, cap: int) -> CountingSet:
    """Markings from which some transition can become dead forever.

    The result is exact on populations up to ``cap``.
    """
    n = net.num_places
    parts = []
    for t in net.transitions:
        can_enable = pre_star(net, _single(enabled_cube(net, t)), cap=cap)
        dead = can_enable.complement()
        parts.append(pre_star(net, dead, cap=cap))
        _log.debug(f"'{t.id}': {len(can_enable)} enabling cube(s), {len(dead)} dead cube(s)")
    return union_all(n, parts)


def live_cutoff(net: IONet, s: CountingSet) -> int:
    """Saturation cap of a liveness query.

    At least the saturation cap of ``s`` and the enabling cubes, and at least
    the witness bound from every cube of ``s`` to every enabling cube, so the
    smallest populations of every cube of ``s`` are examined.
    """
    enabling = [enabled_cube(net, t) for t in net.transitions]
    cutoff = saturation_cap(net, s, *(_single(e) for e in enabling))
    for c in _nonempty(s):
        cutoff = max(cutoff, net.num_places**3 + c.lower_norm())
        for e in enabling:
            cutoff = max(cutoff, witness_bound(net, c, e).value)
    return cutoff


def cube_live(
    net: IONet, s: CountingSet, quantifier: str = ALL, cap: int = None
) -> Verdict:
    """Decide liveness of the markings of ``s``.

    A marking is live if, for every transition ``t``, every marking reachable
    from it can still reach a marking enabling ``t``.

    Args:
        net (`IONet`):
            The net.
        s (`CountingSet`):
            The markings to check.
        quantifier (`str`, optional):
            ``"all"`` (default): every marking of ``s`` is live.
            ``"exists"``: some marking of ``s`` is live.
        cap (`int`, optional):
            Saturation cap; verdicts cover all populations up to it.
            Defaults to `live_cutoff`.

    Note:
        The witness is a marking: a non-live member of ``s`` for a negative
        ``"all"`` verdict, a live member for a positive ``"exists"`` verdict.
    """
    _check(net, s)
    if quantifier not in QUANTIFIERS:
        raise ValueError(f"unknown quantifier '{quantifier}', expected one of {QUANTIFIERS}")
    started = time.perf_counter()
    if cap is None:
        cap = live_cutoff(net, s)
    not_live = not_live_set(net, cap)
    if quantifier == ALL:
        offending = s.intersect(not_live)
        answer = offending.is_empty(upto=cap)
        witness = None if answer else offending.least_member(upto=cap)
    else:
        live = s.difference(not_live)
        answer = not live.is_empty(upto=cap)
        witness = live.least_member(upto=cap) if answer else None
    stats = {
        "cutoff": cap,
        "not_live_cubes": len(not_live),
        "quantifier": quantifier,
        "elapsed": time.perf_counter() - started,
    }
    return Verdict(answer, SYMBOLIC, "live", witness, stats=stats)


@dataclasses.dataclass(frozen=True)
class Limits:
    """Size limits of generated instances."""

    places: int = 5
    transitions: int = 8
    norm: int = 3
    cubes: int = 1


def _random_cube(rng: np.random.Generator, n: int, norm: int) -> Cube:
    lower, upper = [], []
    for _ in range(n):
        lo = int(rng.integers(0, norm + 1))
        lower.append(lo)
        if rng.random() < 0.5:
            upper.append(OMEGA)
        else:
            upper.append(int(rng.integers(lo, norm + 1)))
    return Cube(tuple(lower), tuple(upper))


def _random_set(rng: np.random.Generator, n: int, limits: Limits) -> CountingSet:
    count = int(rng.integers(1, limits.cubes + 1))
    return CountingSet(n, tuple(_random_cube(rng, n, limits.norm) for _ in range(count)))


def generate_random_instance(
    seed: int, limits: Limits = Limits()
) -> Tuple[IONet, CountingSet, CountingSet]:
    """Deterministic pseudo-random reachability instance.

    Distribution:
        The number of places is uniform in ``[min(2, places), places]``, the
        number of transitions uniform in ``[1, transitions]``, and every
        transition's ``(src, obs, dst)`` triple is uniform over all place
        triples. Each of the two sets has between ``1`` and ``cubes`` cubes.
        Every lower bound is uniform in ``[0, norm]``; the upper bound is
        omega with probability one half, else uniform in ``[lower, norm]``.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(min(2, limits.places), limits.places + 1))
    num_transitions = int(rng.integers(1, limits.transitions + 1))
    names = [f"p{i}" for i in range(n)]
    transitions = []
    for i in range(num_transitions):
        src, obs, dst = (int(x) for x in rng.integers(0, n, size=3))
        transitions.append((f"t{i}", names[src], names[obs], names[dst]))
    net = IONet.build(names, transitions)
    return net, _random_set(rng, n, limits), _random_set(rng, n, limits)


def _corpus_record(args) -> Dict[str, Any]:
    seed, limits, problems = args
    net, s_from, s_to = generate_random_instance(seed, limits)
    record = {"seed": seed, "places": net.num_places, "transitions": len(net.transitions)}
    decide = {"reach": cube_reachable, "cover": cube_coverable}
    for problem in problems:
        symbolic = decide[problem](net, s_from, s_to, engine=SYMBOLIC)
        explicit = decide[problem](net, s_from, s_to, engine=EXPLICIT)
        record[problem] = {
            SYMBOLIC: symbolic.answer,
            EXPLICIT: explicit.answer,
            "agree": symbolic.answer == explicit.answer,
        }
    return record


def run_corpus(
    seeds: Iterable[int],
    limits: Limits = Limits(),
    problems: Tuple[str, ...] = ("reach", "cover"),
    jobs: int = 1,
) -> List[Dict[str, Any]]:
    """Run both engines on generated instances and record their answers.

    Args:
        seeds (iterable of `int`):
            Seeds of `generate_random_instance`.
        limits (`Limits`, optional):
            Instance limits.
        problems (`tuple` of `str`, optional):
            Subset of ``("reach", "cover")``.
        jobs (`int`, optional):
            Number of worker processes. Defaults to ``1``, which runs in-process.

    Returns:
        One record per seed with the answers of both engines per problem.
    """
    work = [(int(seed), limits, tuple(problems)) for seed in seeds]
    if jobs > 1:
        with mp.Pool(jobs) as pool:
            records = pool.map(_corpus_record, work)
    else:
        records = [_corpus_record(w) for w in work]
    disagreeing = [
        r["seed"] for r in records if not all(r[p]["agree"] for p in problems)
    ]
    if disagreeing:
        _log.warning(f"engines disagree on seed(s) {disagreeing}")
    return records


def first_disagreement(records: List[Dict[str, Any]]) -> Optional[int]:
    for r in records:
        for key, value in r.items():
            if isinstance(value, dict) and not value["agree"]:
                return r["seed"]
    return None
