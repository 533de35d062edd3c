# MIT License
#
# Copyright (C) 2024 The ionets developers. All rights reserved.
#
# See the LICENSE file at the root of this repository for the full text.

"""Cubes and counting sets.

A `Cube` is given by a lower bound (natural number) and an upper bound
(natural number or `OMEGA`) per place; it denotes the markings whose entries
lie within the bounds. A `CountingSet` is a finite union of cubes.
Counting sets are closed under all boolean operations, which are implemented
exactly on the denotation. No canonical minimal representation is computed;
emptiness and inclusion are decided via box subtraction, which is exact for
any representation.

Norms:
    The norm of a cube is the largest finite constant among its lower bounds
    and its non-omega upper bounds (``0`` if there is none). The norm of a
    counting set is the maximum over its cubes, for the representation at
    hand. The *lower norm* of a cube is the sum of its lower bounds, i.e. the
    smallest population the cube admits.

Cost:
    Subtracting one cube from another yields at most ``2n`` disjoint cubes
    for ``n`` places. A set difference subtracts every cube of the
    subtrahend from every remaining piece, so complements of sets with many
    cubes can grow quickly. Results are normalized after every subtraction
    round.
"""

import dataclasses
import itertools
import logging
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from ionets.errors import DimensionMismatch

_log = logging.getLogger(__name__)


class _Omega:
    """The upper bound omega; ``omega + k == omega - k == omega`` and
    ``n < omega`` for every natural number ``n``."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ω"

    def __reduce__(self):
        return "OMEGA"

    def __hash__(self):
        return hash("ionets.OMEGA")

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        if not isinstance(other, int) and other is not self:
            return NotImplemented
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("omega - omega is undefined")
        if not isinstance(other, int):
            return NotImplemented
        return self


OMEGA = _Omega()

ExtNat = Union[int, _Omega]


def is_finite(x: ExtNat) -> bool:
    return x is not OMEGA


def _check_dims(a: int, b: int):
    if a != b:
        raise DimensionMismatch(f"dimension {a} does not match dimension {b}")


def _fmt_bound(x: ExtNat) -> str:
    return "ω" if x is OMEGA else str(x)


@dataclasses.dataclass(frozen=True)
class Cube:
    """Per-place intervals ``[lower[p], upper[p]]``.

    A cube is empty iff ``lower[p] > upper[p]`` for some place ``p``.
    """

    lower: Tuple[int, ...]
    upper: Tuple[ExtNat, ...]

    def __post_init__(self):
        lower = tuple(int(x) for x in self.lower)
        upper = tuple(x if x is OMEGA else int(x) for x in self.upper)
        if len(lower) != len(upper):
            raise DimensionMismatch(
                f"cube has {len(lower)} lower but {len(upper)} upper bounds"
            )
        if any(x < 0 for x in lower) or any(x < 0 for x in upper if x is not OMEGA):
            raise ValueError(f"cube bounds must be natural numbers: {lower}, {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def universe(cls, n: int):
        return cls((0,) * n, (OMEGA,) * n)

    @classmethod
    def point(cls, m: Sequence[int]):
        return cls(tuple(m), tuple(m))

    @classmethod
    def empty(cls, n: int):
        return cls((1,) * n, (0,) * n)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def is_empty(self) -> bool:
        return any(lo > hi for lo, hi in zip(self.lower, self.upper))

    def member(self, m: Sequence[int]) -> bool:
        _check_dims(len(m), self.dim)
        return all(lo <= x <= hi for x, lo, hi in zip(m, self.lower, self.upper))

    __contains__ = member

    def intersect(self, other: "Cube") -> "Cube":
        _check_dims(self.dim, other.dim)
        return Cube(
            tuple(max(a, b) for a, b in zip(self.lower, other.lower)),
            tuple(min(a, b) for a, b in zip(self.upper, other.upper)),
        )

    def includes(self, other: "Cube") -> bool:
        """Returns if ``other`` is a subset of this cube."""
        _check_dims(self.dim, other.dim)
        if other.is_empty():
            return True
        return all(
            a <= c and d <= b
            for a, b, c, d in zip(self.lower, self.upper, other.lower, other.upper)
        )

    def complement(self) -> "CountingSet":
        """The exact complement as a union of at most ``2n`` cubes."""
        n = self.dim
        if self.is_empty():
            return CountingSet.universe(n)
        cubes = []
        for p in range(n):
            if self.lower[p] > 0:
                cubes.append(self._replace_interval(Cube.universe(n), p, 0, self.lower[p] - 1))
            if self.upper[p] is not OMEGA:
                cubes.append(self._replace_interval(Cube.universe(n), p, self.upper[p] + 1, OMEGA))
        return CountingSet(n, tuple(cubes))

    def subtract(self, other: "Cube") -> List["Cube"]:
        """Returns pairwise disjoint cubes whose union is ``self - other``."""
        _check_dims(self.dim, other.dim)
        if self.is_empty():
            return []
        if self.intersect(other).is_empty():
            return [self]
        pieces = []
        lower, upper = list(self.lower), list(self.upper)
        for p in range(self.dim):
            a, b = lower[p], upper[p]
            c, d = other.lower[p], other.upper[p]
            if a < c:
                pieces.append(Cube(tuple(lower[:p]) + (a,) + tuple(lower[p + 1 :]),
                                   tuple(upper[:p]) + (c - 1,) + tuple(upper[p + 1 :])))
            if d < b:
                pieces.append(Cube(tuple(lower[:p]) + (d + 1,) + tuple(lower[p + 1 :]),
                                   tuple(upper[:p]) + (b,) + tuple(upper[p + 1 :])))
            lower[p], upper[p] = max(a, c), min(b, d)
        return pieces

    def covered_by(self, cubes: Iterable["Cube"]) -> bool:
        """Returns if the union of ``cubes`` includes this cube."""
        if self.is_empty():
            return True
        overlapping = []
        for d in cubes:
            if d.includes(self):
                return True
            if not self.intersect(d).is_empty():
                overlapping.append(d)
        pieces = [self]
        for d in overlapping:
            pieces = [q for p in pieces for q in p.subtract(d)]
            if not pieces:
                return True
        return False

    def merge(self, other: "Cube") -> Optional["Cube"]:
        """Returns a single cube denoting ``self | other`` if one exists.

        Handles inclusion and cubes that agree on all places but one where
        their intervals overlap or touch. Returns ``None`` otherwise.
        """
        if self.includes(other):
            return self
        if other.includes(self):
            return other
        if self.is_empty() or other.is_empty():
            return None
        differing = [
            p
            for p in range(self.dim)
            if self.lower[p] != other.lower[p] or self.upper[p] != other.upper[p]
        ]
        if len(differing) != 1:
            return None
        (p,) = differing
        a, b = self.lower[p], self.upper[p]
        c, d = other.lower[p], other.upper[p]
        if max(a, c) > min(b, d) + 1:
            return None
        return self._replace_interval(self, p, min(a, c), max(b, d))

    def norm(self) -> int:
        return max(
            itertools.chain(self.lower, (x for x in self.upper if x is not OMEGA)),
            default=0,
        )

    def lower_norm(self) -> int:
        return sum(self.lower)

    def min_total(self) -> int:
        return sum(self.lower)

    def max_total(self) -> ExtNat:
        if any(x is OMEGA for x in self.upper):
            return OMEGA
        return sum(self.upper)

    def lowest(self) -> Tuple[int, ...]:
        """The member with the fewest tokens (the lower bounds)."""
        return self.lower

    def upward_closure(self) -> "Cube":
        return Cube(self.lower, (OMEGA,) * self.dim)

    def exceeds(self, cap: int) -> bool:
        return any(x > cap for x in self.lower) or any(
            x > cap for x in self.upper if x is not OMEGA
        )

    def widen(self, cap: int) -> "Cube":
        """Coarsen every bound above ``cap``.

        Lower bounds above ``cap`` become ``cap+1`` and finite upper bounds
        above ``cap`` become omega. Every marking the widened cube adds has
        an entry above ``cap``, hence a total above ``cap``.
        """
        if not self.exceeds(cap):
            return self
        return Cube(
            tuple(min(x, cap + 1) for x in self.lower),
            tuple(OMEGA if x is OMEGA or x > cap else x for x in self.upper),
        )

    @staticmethod
    def _replace_interval(cube: "Cube", p: int, lo: int, hi: ExtNat) -> "Cube":
        return Cube(
            cube.lower[:p] + (lo,) + cube.lower[p + 1 :],
            cube.upper[:p] + (hi,) + cube.upper[p + 1 :],
        )

    def sort_key(self):
        return (self.lower, tuple((1, 0) if x is OMEGA else (0, x) for x in self.upper))

    def __str__(self):
        if self.is_empty():
            return "∅"
        return "×".join(
            f"[{lo},{_fmt_bound(hi)}]" for lo, hi in zip(self.lower, self.upper)
        )


def absorb(cubes: List[Cube], c: Cube) -> List[Cube]:
    """Insert ``c`` into ``cubes`` merging it with its neighbours.

    Cubes included in the (merged) new cube are dropped. The denotation of the
    result is the union of the denotations of ``cubes`` and ``c``.
    """
    if c.is_empty():
        return cubes
    result = list(cubes)
    merged = True
    while merged:
        merged = False
        for i, d in enumerate(result):
            m = c.merge(d)
            if m is not None:
                c = m
                del result[i]
                merged = True
                break
    result = [d for d in result if not c.includes(d)]
    result.append(c)
    return result


@dataclasses.dataclass(frozen=True)
class CountingSet:
    """A finite union of cubes over ``dim`` places."""

    dim: int
    cubes: Tuple[Cube, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cubes", tuple(self.cubes))
        for c in self.cubes:
            _check_dims(c.dim, self.dim)

    @classmethod
    def empty(cls, n: int):
        return cls(n, ())

    @classmethod
    def universe(cls, n: int):
        return cls(n, (Cube.universe(n),))

    @classmethod
    def of(cls, *cubes: Cube):
        if not cubes:
            raise ValueError("cannot infer the dimension of an empty cube list")
        return cls(cubes[0].dim, cubes)

    def __iter__(self):
        return iter(self.cubes)

    def __len__(self):
        return len(self.cubes)

    def member(self, m: Sequence[int]) -> bool:
        _check_dims(len(m), self.dim)
        return any(c.member(m) for c in self.cubes)

    __contains__ = member

    def union(self, other: "CountingSet") -> "CountingSet":
        _check_dims(self.dim, other.dim)
        return CountingSet(self.dim, self.cubes + other.cubes).normalize()

    def intersect(self, other: "CountingSet") -> "CountingSet":
        _check_dims(self.dim, other.dim)
        return CountingSet(
            self.dim, tuple(a.intersect(b) for a in self.cubes for b in other.cubes)
        ).normalize()

    def difference(self, other: "CountingSet") -> "CountingSet":
        _check_dims(self.dim, other.dim)
        pieces = [c for c in self.cubes if not c.is_empty()]
        for d in other.cubes:
            if not pieces:
                break
            # pieces cut from one cube stay pairwise disjoint
            pieces = [q for p in pieces for q in p.subtract(d)]
        return CountingSet(self.dim, tuple(pieces)).normalize()

    def complement(self) -> "CountingSet":
        return CountingSet.universe(self.dim).difference(self)

    def is_empty(self, upto: Optional[int] = None) -> bool:
        """Returns if the set has no member (of total at most ``upto``)."""
        for c in self.cubes:
            if c.is_empty():
                continue
            if upto is None or c.min_total() <= upto:
                return False
        return True

    def includes(self, other: "CountingSet") -> bool:
        _check_dims(self.dim, other.dim)
        return all(c.covered_by(self.cubes) for c in other.cubes)

    def includes_cube(self, c: Cube) -> bool:
        return self.includes(CountingSet(self.dim, (c,)))

    def normalize(self) -> "CountingSet":
        """Drop empty cubes and cubes included in another single cube."""
        cubes = [c for c in self.cubes if not c.is_empty()]
        kept = []
        for i, c in enumerate(cubes):
            subsumed = any(
                d.includes(c) and (not c.includes(d) or j < i)
                for j, d in enumerate(cubes)
                if j != i
            )
            if not subsumed:
                kept.append(c)
        return CountingSet(self.dim, tuple(kept))

    def coalesce(self) -> "CountingSet":
        """Merge cubes whose union is a single cube; the denotation is unchanged."""
        cubes: List[Cube] = []
        for c in self.normalize().cubes:
            cubes = absorb(cubes, c)
        return CountingSet(self.dim, tuple(cubes))

    def sorted(self) -> "CountingSet":
        return CountingSet(self.dim, tuple(sorted(self.cubes, key=Cube.sort_key)))

    def norm(self) -> int:
        return max((c.norm() for c in self.cubes), default=0)

    def least_member(self, upto: Optional[int] = None):
        """The lower-bound marking of the nonempty cube with the smallest total.

        Ties are broken lexicographically. Returns ``None`` if there is no
        member (of total at most ``upto``).
        """
        candidates = [
            c.lowest()
            for c in self.cubes
            if not c.is_empty() and (upto is None or c.min_total() <= upto)
        ]
        if not candidates:
            return None
        return min(candidates, key=lambda m: (sum(m), m))

    def upward_closure(self) -> "CountingSet":
        return CountingSet(self.dim, tuple(c.upward_closure() for c in self.cubes)).normalize()

    def __str__(self):
        if not self.cubes:
            return "∅"
        return " ∪ ".join(str(c) for c in self.cubes)


def _as_set(x: Union[Cube, CountingSet]) -> CountingSet:
    return x if isinstance(x, CountingSet) else CountingSet(x.dim, (x,))


def member(m: Sequence[int], x: Union[Cube, CountingSet]) -> bool:
    return x.member(m)


def intersect(a, b):
    """Intersection of two cubes (a `Cube`) or of two counting sets."""
    if isinstance(a, Cube) and isinstance(b, Cube):
        return a.intersect(b)
    return _as_set(a).intersect(_as_set(b))


def union(a, b) -> CountingSet:
    return _as_set(a).union(_as_set(b))


def complement(x) -> CountingSet:
    return x.complement()


def difference(a, b) -> CountingSet:
    return _as_set(a).difference(_as_set(b))


def is_empty(x) -> bool:
    return x.is_empty()


def includes(a, b) -> bool:
    return _as_set(a).includes(_as_set(b))


def normalize(s: CountingSet) -> CountingSet:
    return s.normalize()


def norm(x) -> int:
    return x.norm()


def union_all(n: int, sets: Iterable[CountingSet]) -> CountingSet:
    cubes = []
    for s in sets:
        _check_dims(s.dim, n)
        cubes.extend(s.cubes)
    return CountingSet(n, tuple(cubes)).normalize()
