# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Parameterized verification of immediate observation Petri nets.

Submodules:

    ionetsconfig: Environment-controlled configuration.
    net: IO nets, markings, firing and trajectories.
    countingsets: Cubes and counting sets.
    transformers: Symbolic pre*/post* saturation.
    kernels, pruning: The explicit search engine.
    oracle: Brute-force ground truth for single markings.
    deciders: Reachability, coverability and liveness.
    protocols: IO population protocols.
    frontend: JSON documents and the ``ionets`` command line.
"""

__version__ = "0.1"

from . import ionetsconfig
from . import errors
from . import util
from .net import IONet, IOTransition, Trajectory, fire, replay
from .countingsets import OMEGA, Cube, CountingSet
from .transformers import pre_star, post_star
from .deciders import Verdict, cube_reachable, cube_coverable, cube_live
from .protocols import IOProtocol, PredicateSpec, check_correct, check_well_specified
