# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""The ``ionets`` command line.

Results are written to standard output as JSON documents (see
`ionets.frontend.documents`), human-readable summaries and log output to
standard error.

Exit codes:
    0: the decided answer is true, or the command succeeded.
    1: the decided answer is false.
    2: usage error or malformed input.
    3: internal error, e.g. a saturation overflow or an engine disagreement.
"""

import enum
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import typer

try:  # typer >= 0.26 vendors click and raises its own copies of the exceptions
    from typer import _click as click
except ImportError:
    import click
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from ionets import deciders, oracle, protocols, transformers
from ionets.countingsets import CountingSet
from ionets.errors import (
    DimensionMismatch,
    EmptyCube,
    IONetsError,
    InvalidProtocol,
    NotIO,
    ParseError,
)
from ionets.frontend import documents
from ionets.net import IONet, Trajectory, replay

_log = logging.getLogger(__name__)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

_console = Console(stderr=True)

app = typer.Typer(
    help="Parameterized analysis of immediate observation Petri nets and population protocols.",
    no_args_is_help=True,
    add_completion=False,
)
protocol_app = typer.Typer(help="Check IO population protocols.", no_args_is_help=True)
oracle_app = typer.Typer(help="Brute-force answers for single markings.", no_args_is_help=True)
app.add_typer(protocol_app, name="protocol")
app.add_typer(oracle_app, name="oracle")


class Engine(str, enum.Enum):
    symbolic = deciders.SYMBOLIC
    explicit = deciders.EXPLICIT
    both = deciders.BOTH


class Quantifier(str, enum.Enum):
    all = deciders.ALL
    exists = deciders.EXISTS


def _file(flag: str, help: str):
    return typer.Option(..., flag, help=help, exists=True, dir_okay=False, readable=True)


_NET = _file("--net", "Net document.")
_FROM = _file("--from", "Counting-set or cube document of start markings.")
_TO = _file("--to", "Counting-set or cube document of target markings.")
_SET = _file("--set", "Counting-set or cube document.")
_PROTOCOL = _file("--protocol", "Protocol document.")
_MARKING = _file("--marking", "Marking document.")
_BOUND = typer.Option(None, "--bound", min=0, help="Population bound of the explicit engine.")
_CAP = typer.Option(None, "--cap", min=0, help="Saturation cap of the symbolic engine.")
_MAX_STEPS = typer.Option(None, "--max-steps", min=0, help="Depth cap of the explicit engine.")
_MIN_AGENTS = typer.Option(1, "--min-agents", min=0, help="Smallest admissible population.")
_TIMING = typer.Option(False, "--timing", help="Include timing in the JSON output.")


@app.callback()
def configure(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log debug output to standard error."),
):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=_console, show_path=False)],
        force=True,
    )


def _read_net(path: Path) -> IONet:
    return documents.parse_net(documents.read_file(str(path)))


def _read_set(path: Path, net: IONet) -> CountingSet:
    return documents.parse_set_or_cube(documents.read_file(str(path)), net)


def _read_protocol(path: Path) -> protocols.IOProtocol:
    return documents.parse_protocol(documents.read_file(str(path)))


def _emit(text: str):
    typer.echo(text, nl=False)


def _summarize(verdict: deciders.Verdict, net: IONet):
    color = "green" if verdict.answer else "red"
    _console.print(
        f"{verdict.problem}: [bold {color}]{str(verdict.answer).lower()}[/] ({verdict.engine} engine)"
    )
    if not verdict.answer and not verdict.exhaustive:
        _console.print(f"[yellow]no witness up to population {verdict.stats.get('bound')}[/yellow]")
    if isinstance(verdict.witness, Trajectory):
        table = Table(title="Witness")
        table.add_column("step", justify="right")
        table.add_column("transition")
        for name in net.place_names:
            table.add_column(escape(name), justify="right")
        markings = replay(net, verdict.witness)
        for i, m in enumerate(markings):
            tid = verdict.witness.steps[i - 1] if i else ""
            table.add_row(str(i), escape(tid), *(str(x) for x in m))
        _console.print(table)
    elif verdict.witness is not None:
        marking = ", ".join(f"{name}={x}" for name, x in zip(net.place_names, verdict.witness))
        _console.print(f"witness marking: {escape(marking)}")


def _finish(verdict: deciders.Verdict, net: IONet, timing: bool = False):
    _emit(documents.serialize_verdict(verdict, net, include_timing=timing))
    _summarize(verdict, net)
    raise typer.Exit(EXIT_TRUE if verdict.answer else EXIT_FALSE)


@app.command()
def reach(
    net: Path = _NET,
    from_: Path = _FROM,
    to: Path = _TO,
    engine: Engine = typer.Option(Engine.symbolic, "--engine"),
    bound: Optional[int] = _BOUND,
    cap: Optional[int] = _CAP,
    max_steps: Optional[int] = _MAX_STEPS,
    timing: bool = _TIMING,
):
    """Can some marking of --from reach some marking of --to?"""
    ionet = _read_net(net)
    verdict = deciders.cube_reachable(
        ionet, _read_set(from_, ionet), _read_set(to, ionet), engine.value, bound, cap, max_steps
    )
    _finish(verdict, ionet, timing)


@app.command()
def cover(
    net: Path = _NET,
    from_: Path = _FROM,
    to: Path = _TO,
    engine: Engine = typer.Option(Engine.symbolic, "--engine"),
    bound: Optional[int] = _BOUND,
    cap: Optional[int] = _CAP,
    max_steps: Optional[int] = _MAX_STEPS,
    timing: bool = _TIMING,
):
    """Can some marking of --from reach a marking covering a member of --to?"""
    ionet = _read_net(net)
    verdict = deciders.cube_coverable(
        ionet, _read_set(from_, ionet), _read_set(to, ionet), engine.value, bound, cap, max_steps
    )
    _finish(verdict, ionet, timing)


@app.command()
def live(
    net: Path = _NET,
    set_: Path = _SET,
    quantifier: Quantifier = typer.Option(Quantifier.all, "--quantifier"),
    cap: Optional[int] = _CAP,
    timing: bool = _TIMING,
):
    """Are all (or some) markings of --set live?"""
    ionet = _read_net(net)
    verdict = deciders.cube_live(ionet, _read_set(set_, ionet), quantifier.value, cap)
    _finish(verdict, ionet, timing)


def _star(net: Path, set_: Path, cap: Optional[int], star):
    ionet = _read_net(net)
    result = star(ionet, _read_set(set_, ionet), cap=cap)
    _emit(documents.serialize_counting_set(result.coalesce().sorted(), ionet))
    _console.print(f"{len(result)} cube(s)")
    raise typer.Exit(EXIT_TRUE)


@app.command()
def prestar(net: Path = _NET, set_: Path = _SET, cap: Optional[int] = _CAP):
    """Print the markings from which --set is reachable."""
    _star(net, set_, cap, transformers.pre_star)


@app.command()
def poststar(net: Path = _NET, set_: Path = _SET, cap: Optional[int] = _CAP):
    """Print the markings reachable from --set."""
    _star(net, set_, cap, transformers.post_star)


@app.command()
def witness(
    net: Path = _NET,
    from_: Path = _FROM,
    to: Path = _TO,
    bound: Optional[int] = _BOUND,
    max_steps: Optional[int] = _MAX_STEPS,
    timing: bool = _TIMING,
):
    """Search a small witness trajectory with the explicit engine."""
    ionet = _read_net(net)
    s_from, s_to = _read_set(from_, ionet), _read_set(to, ionet)
    verdict = deciders.cube_reachable(
        ionet, s_from, s_to, deciders.EXPLICIT, bound=bound, max_steps=max_steps
    )
    _finish(verdict, ionet, timing)


@protocol_app.command("check")
def protocol_check(
    protocol: Path = _PROTOCOL,
    predicate: Path = _file("--predicate", "Predicate document over the initial states."),
    min_agents: int = _MIN_AGENTS,
    cap: Optional[int] = _CAP,
    timing: bool = _TIMING,
):
    """Check that --protocol is well-specified and computes --predicate."""
    p = _read_protocol(protocol)
    phi = documents.parse_predicate(documents.read_file(str(predicate)), p)
    net, _ = protocols.to_net(p)
    verdict = protocols.check_well_specified(p, min_agents, cap)
    if verdict.answer:
        verdict = protocols.check_correct(p, phi, min_agents, cap)
    _finish(verdict, net, timing)


@protocol_app.command("well-specified")
def protocol_well_specified(
    protocol: Path = _PROTOCOL,
    min_agents: int = _MIN_AGENTS,
    cap: Optional[int] = _CAP,
    timing: bool = _TIMING,
):
    """Check that every input of --protocol stabilizes to a unique consensus."""
    p = _read_protocol(protocol)
    net, _ = protocols.to_net(p)
    _finish(protocols.check_well_specified(p, min_agents, cap), net, timing)


@oracle_app.command("reach")
def oracle_reach(net: Path = _NET, marking: Path = _MARKING):
    """Print every marking reachable from --marking."""
    ionet = _read_net(net)
    m = documents.parse_marking(documents.read_file(str(marking)), ionet)
    markings = oracle.reach_set(ionet, m)
    _emit(documents.serialize_marking_set(markings, ionet))
    _console.print(f"{len(markings)} reachable marking(s)")
    raise typer.Exit(EXIT_TRUE)


@oracle_app.command("live")
def oracle_live(net: Path = _NET, marking: Path = _MARKING):
    """Is --marking live?"""
    ionet = _read_net(net)
    m = documents.parse_marking(documents.read_file(str(marking)), ionet)
    answer = oracle.marking_live(ionet, m)
    _finish(deciders.Verdict(answer, "oracle", "live", m), ionet)


@oracle_app.command("stabilize")
def oracle_stabilize(protocol: Path = _PROTOCOL, marking: Path = _MARKING):
    """Which consensus do fair runs from --marking stabilize to?"""
    p = _read_protocol(protocol)
    net, _ = protocols.to_net(p)
    m = documents.parse_marking(documents.read_file(str(marking)), net)
    consensus = oracle.fair_stabilization(net, m, p.labels())
    verdict = deciders.Verdict(
        consensus is not None, "oracle", "stabilize", m, stats={"consensus": consensus}
    )
    _finish(verdict, net)


@app.command()
def gen(
    seed: int = typer.Option(..., "--seed"),
    places: int = typer.Option(5, "--places", min=1),
    transitions: int = typer.Option(8, "--transitions", min=1),
    norm: int = typer.Option(3, "--norm", min=0),
    cubes: int = typer.Option(1, "--cubes", min=1),
):
    """Print a generated reachability instance."""
    limits = deciders.Limits(places, transitions, norm, cubes)
    net, s_from, s_to = deciders.generate_random_instance(seed, limits)
    _emit(documents.serialize_instance(net, s_from, s_to, seed))
    raise typer.Exit(EXIT_TRUE)


def _seed_range(value: str) -> range:
    try:
        start, stop = (int(x) for x in value.split(":"))
    except ValueError:
        raise typer.BadParameter(f"expected START:STOP, got {value!r}") from None
    return range(start, stop)


@app.command()
def corpus(
    seeds: str = typer.Option("0:20", "--seeds", help="Seed range START:STOP."),
    places: int = typer.Option(3, "--places", min=1),
    transitions: int = typer.Option(4, "--transitions", min=1),
    norm: int = typer.Option(2, "--norm", min=0),
    cubes: int = typer.Option(1, "--cubes", min=1),
    jobs: int = typer.Option(1, "--jobs", min=1, help="Worker processes."),
):
    """Run both engines on generated instances; exit 3 if they ever disagree."""
    limits = deciders.Limits(places, transitions, norm, cubes)
    records = deciders.run_corpus(_seed_range(seeds), limits, jobs=jobs)
    _emit(documents.serialize_corpus(records))
    disagreeing = deciders.first_disagreement(records)
    if disagreeing is not None:
        _console.print(f"[bold red]engines disagree on seed {disagreeing}[/]")
        raise typer.Exit(EXIT_INTERNAL)
    _console.print(f"{len(records)} instance(s), engines agree")
    raise typer.Exit(EXIT_TRUE)


_INPUT_ERRORS = (ParseError, InvalidProtocol, DimensionMismatch, EmptyCube, NotIO, OSError)


def cli_dispatch(argv: Sequence[str]) -> int:
    """Run the command line with ``argv`` (without the program name) and return the exit code."""
    try:
        rv = app(args=list(argv), prog_name="ionets", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        _console.print("aborted")
        return EXIT_INTERNAL
    except _INPUT_ERRORS as e:
        _console.print(f"[bold red]error:[/] {escape(str(e))}")
        return EXIT_USAGE
    except IONetsError as e:
        _console.print(f"[bold red]internal error ({type(e).__name__}):[/] {escape(str(e))}")
        return EXIT_INTERNAL
    except Exception:
        _log.exception("unexpected failure")
        return EXIT_INTERNAL
    return rv if isinstance(rv, int) else EXIT_TRUE


def main(argv: List[str] = None):
    sys.exit(cli_dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
