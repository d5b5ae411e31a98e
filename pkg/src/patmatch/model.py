"""Point sets, patterns and match reports shared by the matchers and oracles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PatternError
from .numeric import ComplexRational, rank

SIMILARITY, AFFINE = "similarity", "affine"


def _point(p) -> tuple:
    return tuple(Fraction(x) for x in p)


@dataclass(frozen=True)
class Scene:
    points: tuple
    d: int = 2

    def __post_init__(self):
        pts = tuple(_point(p) for p in self.points)
        for p in pts:
            if len(p) != self.d:
                raise PatternError(f"point {p} is not {self.d}-dimensional")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    def deduplicated(self) -> "Scene":
        seen = dict.fromkeys(self.points)
        return Scene(tuple(seen), self.d)

    def mapped(self, fn) -> "Scene":
        return Scene(tuple(fn(p) for p in self.points), self.d)


@dataclass(frozen=True)
class Pattern:
    """``k`` pairwise distinct points; ``kind`` fixes the matching problem."""

    points: tuple
    d: int = 2
    kind: str = SIMILARITY

    def __post_init__(self):
        pts = tuple(_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        for p in pts:
            if len(p) != self.d:
                raise PatternError(f"point {p} is not {self.d}-dimensional")
        if len(set(pts)) != len(pts):
            raise PatternError("pattern contains repeated points")
        if self.kind == SIMILARITY:
            if self.d != 2:
                raise PatternError("similarity matching is planar (d=2)")
            if len(pts) < 3:
                raise PatternError(f"similarity pattern needs k >= 3 points, got {len(pts)}")
        elif self.kind == AFFINE:
            if self.d < 2:
                raise PatternError("affine matching needs d >= 2")
            if len(pts) < self.d + 2:
                raise PatternError(f"affine pattern needs k >= {self.d + 2} points, got {len(pts)}")
            if rank([p + (1,) for p in pts]) != self.d + 1:
                raise PatternError(f"pattern has no {self.d + 1} affinely independent points")
        else:
            raise PatternError(f"unknown pattern kind {self.kind!r}")

    @property
    def k(self) -> int:
        return len(self.points)


def to_complex(p: Sequence) -> ComplexRational:
    return ComplexRational(p[0], p[1])


@dataclass(frozen=True)
class Similarity:
    """``p -> w*p + z`` on the complex plane, or ``w*conj(p) + z`` if mirrored."""

    w: ComplexRational
    z: ComplexRational
    mirrored: bool = False

    def apply(self, p) -> tuple:
        c = to_complex(p)
        if self.mirrored:
            c = c.conjugate()
        out = self.w * c + self.z
        return (out.re, out.im)


@dataclass(frozen=True)
class AffineMap:
    """Row-vector convention: ``p -> p F + t``.  ``F`` may be singular."""

    F: tuple
    t: tuple

    def apply(self, p) -> tuple:
        d = len(self.t)
        return tuple(sum((p[i] * self.F[i][j] for i in range(d)), Fraction(0)) + self.t[j]
                     for j in range(d))


@dataclass(frozen=True)
class MatchReport:
    indices: tuple
    transform: object

    @property
    def kind(self) -> str:
        return SIMILARITY if isinstance(self.transform, Similarity) else AFFINE

    def check(self, pattern: Pattern, scene: Scene) -> bool:
        """Transform sends every pattern point onto its matched scene point."""
        return all(self.transform.apply(p) == scene.points[i]
                   for p, i in zip(pattern.points, self.indices))


class DistinctPoints:
    """Tuple filter: scene indices must reference pairwise distinct coordinates.

    ``labels`` (one id per coordinate value) lets the solvers prune partial
    tuples without calling the filter.
    """

    def __init__(self, scene: Scene):
        ids = {}
        self.labels = [ids.setdefault(p, len(ids)) for p in scene.points]

    def __call__(self, idx) -> bool:
        g = self.labels
        return len({g[i] for i in idx}) == len(idx)

