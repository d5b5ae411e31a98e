"""Seeded instance generators: planted, random and lattice scenes.

Generators only promise what they build.  Whether a scene actually contains
a match (decoys may complete extra ones) is decided by the oracles.
"""

from __future__ import annotations

import itertools
import random
import warnings
from fractions import Fraction

from .model import AffineMap, Pattern, Scene, Similarity
from .numeric import ComplexRational, det


def _rational(rng: random.Random, lo: int, hi: int, denominator: int) -> Fraction:
    q = rng.randint(1, denominator)
    return Fraction(rng.randint(lo * q, hi * q), q)


def gen_random_scene(d: int, n: int, coordinate_range=(-1000, 1000), seed: int = 0,
                     denominator: int = 1) -> Scene:
    lo, hi = coordinate_range
    rng = random.Random(seed)
    pts = [tuple(_rational(rng, lo, hi, denominator) for _ in range(d)) for _ in range(n)]
    return Scene(tuple(pts), d)


def gen_random_pattern(kind: str, k: int, d: int = 2, coordinate_range=(-20, 20),
                       seed: int = 0) -> Pattern:
    """Pattern with ``k`` distinct random integer points (retries until valid)."""
    rng = random.Random(seed)
    lo, hi = coordinate_range
    for _ in range(1000):
        pts = {tuple(Fraction(rng.randint(lo, hi)) for _ in range(d)) for _ in range(k)}
        if len(pts) < k:
            continue
        try:
            return Pattern(tuple(sorted(pts, key=lambda _: rng.random())), d, kind)
        except ValueError:
            continue
    raise RuntimeError("could not draw a valid pattern")


def _assemble(images, n, d, decoy_range, seed) -> Scene:
    rng = random.Random(seed)
    lo, hi = decoy_range
    pts = list(images)
    while len(pts) < n:
        pts.append(tuple(Fraction(rng.randint(lo, hi)) for _ in range(d)))
    rng.shuffle(pts)
    return Scene(tuple(pts), d)


def gen_planted_similarity(P: Pattern, n: int, w, z, mirrored: bool = False,
                           seed: int = 0, decoy_range=(-10**6, 10**6)) -> Scene:
    """Image of ``P`` under ``w*p + z`` (or ``w*conj(p) + z``) plus decoys."""
    w, z = ComplexRational.of(w), ComplexRational.of(z)
    if not w:
        raise ValueError("scale-rotation w must be nonzero")
    t = Similarity(w, z, mirrored)
    return _assemble([t.apply(p) for p in P.points], n, 2, decoy_range, seed)


def gen_planted_affine(P: Pattern, n: int, F, t, seed: int = 0,
                       decoy_range=(-10**6, 10**6)) -> Scene:
    m = AffineMap(tuple(tuple(Fraction(x) for x in row) for row in F),
                  tuple(Fraction(x) for x in t))
    images = [m.apply(p) for p in P.points]
    if len(set(images)) < len(images):
        warnings.warn("planted affine image has repeated points; it cannot count as a match",
                      stacklevel=2)
    return _assemble(images, n, P.d, decoy_range, seed)


def gen_lattice(d: int, m: int) -> Scene:
    """The grid {1, ..., m}^d in lexicographic order."""
    if m < 2:
        raise ValueError("lattice side must be at least 2")
    pts = itertools.product(range(1, m + 1), repeat=d)
    return Scene(tuple(pts), d)


def random_similarity(rng: random.Random, lo: int = -5, hi: int = 5):
    w = ComplexRational(0)
    while not w:
        w = ComplexRational(rng.randint(lo, hi), rng.randint(lo, hi))
    return w, ComplexRational(rng.randint(-50, 50), rng.randint(-50, 50))


def random_affine(rng: random.Random, d: int, lo: int = -4, hi: int = 4, invertible=True):
    while True:
        F = [[Fraction(rng.randint(lo, hi)) for _ in range(d)] for _ in range(d)]
        if not invertible or det(F) != 0:
            break
    t = [Fraction(rng.randint(-50, 50)) for _ in range(d)]
    return F, t

