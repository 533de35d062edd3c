# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Configuration options for ionets

Attributes (Controllable via Environment Variables ``IONETS_<attribute>``):
    SATURATION_CAP (`int`):
        Force the norm cap used by pre*/post* saturation.
        A value of ``0`` selects the built-in formula, see
        `ionets.transformers.saturation_cap`.
        Defaults to ``0``.
    WIDEN_AT_CAP (`bool`):
        Widen cube bounds that exceed the saturation cap (lower bounds are
        set to ``cap+1``, finite upper bounds to omega). If ``False``,
        a cube exceeding the cap raises `ionets.errors.SaturationOverflow`
        instead. Defaults to ``True``.
    MAX_CUBES (`int`):
        Maximum number of cubes a saturation result may hold before
        `ionets.errors.SaturationOverflow` is raised.
        Defaults to ``200000``.
    ORACLE_STATE_LIMIT (`int`):
        Maximum number of markings the brute-force oracle explores per query.
        Defaults to ``1000000``.
    EXPLICIT_STATE_LIMIT (`int`):
        Maximum number of markings of a single population size the explicit
        engine allocates for. Defaults to ``20000000``.
    CROSS_CHECK (`bool`):
        Decide symbolic reachability both via post* and via pre* and
        raise `ionets.errors.EngineDisagreement` if the answers differ.
        Expensive, meant for debugging. Defaults to ``False``.
    USE_JIT (`bool`):
        Run the explicit engine's breadth-first search in the numba kernels
        of `ionets.kernels`. If ``False``, a pure Python search is used.
        Defaults to ``True``.
    USE_RESULT_CACHE (`bool`):
        Cache pre*/post* results in-process, see `ionets.util.resultcache`.
        Defaults to ``True``.
    USE_FS_CACHE (`bool`):
        Store pre*/post* results as counting-set documents in a filesystem
        cache, so that the next ionets process can reuse them.
        Defaults to ``False``.
    CLEAR_FS_CACHE (`bool`):
        Clear the filesystem cache at import time.
        Defaults to ``False``.
"""

import os

import logging

_log = logging.getLogger(__name__)

SATURATION_CAP = int(os.environ.get("IONETS_SATURATION_CAP", 0))

WIDEN_AT_CAP = bool(
    int(os.environ.get("IONETS_WIDEN_AT_CAP", True))
)  # widen instead of failing when a saturation cube exceeds the cap

MAX_CUBES = int(os.environ.get("IONETS_MAX_CUBES", 200_000))

ORACLE_STATE_LIMIT = int(os.environ.get("IONETS_ORACLE_STATE_LIMIT", 1_000_000))

EXPLICIT_STATE_LIMIT = int(
    os.environ.get("IONETS_EXPLICIT_STATE_LIMIT", 20_000_000)
)  # per population size

CROSS_CHECK = bool(int(os.environ.get("IONETS_CROSS_CHECK", False)))

USE_JIT = bool(int(os.environ.get("IONETS_USE_JIT", True)))

USE_RESULT_CACHE = bool(int(os.environ.get("IONETS_USE_RESULT_CACHE", True)))

USE_FS_CACHE = bool(
    int(os.environ.get("IONETS_USE_FS_CACHE", False))
)  # Store saturation results in a per-user temporary directory, so that
# repeated command-line runs on the same inputs can skip the fixpoint.

CLEAR_FS_CACHE = bool(int(os.environ.get("IONETS_CLEAR_FS_CACHE", False)))


def resolve_limit(value, default: int, name: str):
    """Returns ``value`` if it is not ``None``, else ``default``.

    Args:
        value (`int` or ``None``):
            A limit passed explicitly by the caller.
        default (`int`):
            The configured limit.
        name (`str`):
            Name of the limit, used in the log message.
    """
    if value is None:
        return default
    value = int(value)
    if value < 0:
        raise ValueError(f"'{name}' must be non-negative, got {value}")
    _log.debug(f"using explicit {name}={value} instead of configured {default}")
    return value
