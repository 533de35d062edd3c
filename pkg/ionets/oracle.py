# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Brute-force explicit-state ground truth.

Everything in this module works on the finite graph of markings reachable
from a single marking; the graph is finite because firing conserves the
number of tokens. The code deliberately avoids the counting-set algebra and
the numba kernels so that it can serve as an independent reference for both.
"""

import collections
import logging
from typing import Dict, List, Optional, Sequence, Set

from ionets import ionetsconfig as _ionetsconfig
from ionets.countingsets import Cube, OMEGA
from ionets.errors import DimensionMismatch, IONetsError, StateLimitExceeded
from ionets.net import IONet, Marking, enabled, successors, total

_log = logging.getLogger(__name__)


def enumerate_cube(c: Cube, total: int) -> List[Marking]:
    """All members of ``c`` with exactly ``total`` tokens, in lexicographic order."""
    n = c.dim
    if n == 0:
        return [()] if total == 0 else []
    # suffix sums of the bounds prune infeasible prefixes
    rest_lower = [0] * (n + 1)
    rest_upper = [0] * (n + 1)
    for p in range(n - 1, -1, -1):
        rest_lower[p] = rest_lower[p + 1] + c.lower[p]
        rest_upper[p] = rest_upper[p + 1] + c.upper[p]
    result = []

    def rec(p: int, remaining: int, prefix: tuple):
        if p == n - 1:
            if c.lower[p] <= remaining <= c.upper[p]:
                result.append(prefix + (remaining,))
            return
        lo = c.lower[p]
        if rest_upper[p + 1] is not OMEGA:
            lo = max(lo, remaining - rest_upper[p + 1])
        hi = remaining - rest_lower[p + 1]
        if c.upper[p] is not OMEGA:
            hi = min(hi, c.upper[p])
        for x in range(lo, hi + 1):
            rec(p + 1, remaining - x, prefix + (x,))

    rec(0, total, ())
    return result


def _limit(state_limit):
    return _ionetsconfig.resolve_limit(
        state_limit, _ionetsconfig.ORACLE_STATE_LIMIT, "state_limit"
    )


def reach_graph(net: IONet, m: Sequence[int], state_limit: int = None) -> Dict[Marking, List[Marking]]:
    """Returns the reachability graph from ``m`` as successor lists.

    Raises:
        `StateLimitExceeded`: If more than ``state_limit`` markings are reachable.
    """
    limit = _limit(state_limit)
    start = net.check_marking(m)
    graph = {start: None}
    queue = collections.deque([start])
    while queue:
        x = queue.popleft()
        succ = []
        for _, y in successors(net, x):
            succ.append(y)
            if y not in graph:
                if len(graph) >= limit:
                    raise StateLimitExceeded(
                        f"more than {limit} markings reachable from {start}"
                    )
                graph[y] = None
                queue.append(y)
        graph[x] = succ
    return graph


def reach_set(net: IONet, m: Sequence[int], state_limit: int = None) -> Set[Marking]:
    """Markings reachable from ``m``, including ``m``."""
    return set(reach_graph(net, m, state_limit))


def _backward_closure(graph: Dict[Marking, List[Marking]], targets: Set[Marking]) -> Set[Marking]:
    preds = collections.defaultdict(list)
    for x, succ in graph.items():
        for y in succ:
            preds[y].append(x)
    closure = set(targets)
    queue = collections.deque(targets)
    while queue:
        y = queue.popleft()
        for x in preds[y]:
            if x not in closure:
                closure.add(x)
                queue.append(x)
    return closure


def marking_live(net: IONet, m: Sequence[int], state_limit: int = None) -> bool:
    """Returns if every transition stays enabled-able along every run from ``m``.

    ``m`` is live iff for every transition ``t`` and every marking reachable
    from ``m``, some marking reachable from that one enables ``t``.
    """
    graph = reach_graph(net, m, state_limit)
    states = set(graph)
    for t in net.transitions:
        enabling = {x for x in states if enabled(net, x, t)}
        if _backward_closure(graph, enabling) != states:
            _log.debug(f"{tuple(m)} is not live: '{t.id}' can become dead")
            return False
    return True


def fair_stabilization(
    net: IONet, m: Sequence[int], consensus_partition: Sequence[int], state_limit: int = None
) -> Optional[int]:
    """The consensus every fair run from ``m`` stabilizes to, if any.

    Args:
        net (`IONet`):
            The net.
        m (sequence of `int`):
            The start marking.
        consensus_partition (sequence of `int`):
            The output ``0`` or ``1`` of every place.
        state_limit (`int`, optional):
            Defaults to `ionets.ionetsconfig.ORACLE_STATE_LIMIT`.

    Returns:
        ``b`` if every marking reachable from ``m`` can reach the set of
        markings from which all reachable markings have no tokens on
        ``(1-b)``-labeled places, else ``None``. The empty population has
        no consensus and yields ``None``.
    """
    if len(consensus_partition) != net.num_places:
        raise DimensionMismatch(
            f"partition has {len(consensus_partition)} labels but the net has {net.num_places} places"
        )
    if any(b not in (0, 1) for b in consensus_partition):
        raise ValueError(f"partition labels must be 0 or 1: {tuple(consensus_partition)}")
    if total(m) == 0:
        return None
    graph = reach_graph(net, m, state_limit)
    states = set(graph)
    qualifying = []
    for b in (0, 1):
        dissenting = {
            x
            for x in states
            if any(x[p] > 0 for p in range(net.num_places) if consensus_partition[p] != b)
        }
        stable = states - _backward_closure(graph, dissenting)
        if stable and _backward_closure(graph, stable) == states:
            qualifying.append(b)
    if len(qualifying) > 1:
        raise IONetsError(
            f"both consensus values qualify for {tuple(m)}; stable sets must be disjoint"
        )
    return qualifying[0] if qualifying else None
