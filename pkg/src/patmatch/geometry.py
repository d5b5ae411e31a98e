"""Similarity and affine pattern matching encoded as linear degeneracy tests.

Similarity: points are complex numbers.  After normalising the pattern so
that its anchor pair sits at 0 and 1, a tuple ``a`` is a direct similar copy
iff ``a_r - a_0 = u_r (a_1 - a_0)`` for every other pattern point ``r``.  All
``k - 2`` equations go into one LDT over C^(k-2) via the Hadamard product.

Affine: with ``d + 1`` affinely independent pattern points fixed, Cramer's
rule expresses the affine map linearly in their images; requiring the
remaining points to follow gives ``d (k - d - 1)`` homogeneous equations
with pattern-dependent coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import PatternError
from .ksum import DECIDE, ENUMERATE, LdtInstance, SolverStats, solve
from .model import (
    AFFINE,
    SIMILARITY,
    AffineMap,
    DistinctPoints,
    MatchReport,
    Pattern,
    Scene,
    Similarity,
    to_complex,
)
from .numeric import CVECTOR, VECTOR, ComplexRational, Ring, Vector, det, rank

DIRECT, MIRRORED, BOTH = "direct", "mirrored", "both"


# ------------------------------------------------------------- similarity

@dataclass(frozen=True)
class SimilarityEncoding:
    u: tuple            # normalised positions of the non-anchor points
    orientation: str
    anchor: tuple       # pattern indices sent to 0 and 1
    others: tuple       # pattern indices matching ``u`` entrywise
    base: ComplexRational
    span: ComplexRational


def normalize_similarity(P: Pattern, orientation: str = DIRECT) -> SimilarityEncoding:
    if orientation not in (DIRECT, MIRRORED):
        raise ValueError(f"orientation must be direct or mirrored, got {orientation!r}")
    pts = [to_complex(p) for p in P.points]
    first = 0
    second = next((i for i in range(1, len(pts)) if pts[i] != pts[first]), None)
    if second is None:
        raise PatternError("all pattern points coincide")
    base, span = pts[first], pts[second] - pts[first]
    others = tuple(i for i in range(len(pts)) if i not in (first, second))
    u = [(pts[i] - base) / span for i in others]
    if orientation == MIRRORED:
        u = [x.conjugate() for x in u]
    return SimilarityEncoding(tuple(u), orientation, (first, second), others, base, span)


def similarity_to_ldt(enc: SimilarityEncoding, S: Scene) -> LdtInstance:
    m = len(enc.u)
    k = m + 2
    ring = Ring(CVECTOR, m)
    zero, one = ComplexRational(0), ComplexRational(1)
    beta = [[zero] * m for _ in range(k + 1)]
    i0, i1 = enc.anchor
    for e, (u, r) in enumerate(zip(enc.u, enc.others)):
        beta[i0 + 1][e] = u - one
        beta[i1 + 1][e] = -u
        beta[r + 1][e] = one
    lifted = tuple(Vector((to_complex(p),) * m) for p in S.points)
    return LdtInstance(ring, [Vector(tuple(b)) for b in beta], [lifted] * k)


def recover_similarity(anchor_images, enc: SimilarityEncoding) -> Similarity:
    """Map of the normalised pattern: ``0 -> a``, ``1 -> b``."""
    a, b = anchor_images
    if a == b:
        raise PatternError("anchor images coincide")
    return Similarity(b - a, a, enc.orientation == MIRRORED)


def _to_pattern_frame(t: Similarity, enc: SimilarityEncoding) -> Similarity:
    base, span = enc.base, enc.span
    if t.mirrored:
        base, span = base.conjugate(), span.conjugate()
    w = t.w / span
    return Similarity(w, t.z - w * base, t.mirrored)


def _similarity_reports(P, S, orientation, strategy, rng_seed, mode, stats):
    orientations = (DIRECT, MIRRORED) if orientation == BOTH else (orientation,)
    filt = DistinctPoints(S)
    reports = {}
    for orient in orientations:
        enc = normalize_similarity(P, orient)
        inst = similarity_to_ldt(enc, S)
        res = solve(inst, strategy, rng_seed, mode, filt, stats=stats)
        sols = res.solutions if mode == ENUMERATE else ([res.solution] if res.found else [])
        for sol in sols:
            if sol.indices in reports:
                continue
            a, b = (to_complex(S.points[sol.indices[i]]) for i in enc.anchor)
            t = _to_pattern_frame(recover_similarity((a, b), enc), enc)
            reports[sol.indices] = MatchReport(sol.indices, t)
        if mode == DECIDE and reports:
            break
    return [reports[k] for k in sorted(reports)]


def _require(P: Pattern, kind: str):
    if P.kind != kind:
        raise PatternError(f"expected a {kind} pattern, got {P.kind}")


def find_similar(P: Pattern, S: Scene, strategy: str = "auto", rng_seed: int = 0,
                 orientation: str = BOTH,
                 stats: Optional[SolverStats] = None) -> Optional[MatchReport]:
    """One similar copy of ``P`` in ``S``, or None.  Direct copies are tried first."""
    _require(P, SIMILARITY)
    found = _similarity_reports(P, S, orientation, strategy, rng_seed, DECIDE, stats)
    return found[0] if found else None


def find_all_similar(P: Pattern, S: Scene, strategy: str = "auto", rng_seed: int = 0,
                     orientation: str = BOTH,
                     stats: Optional[SolverStats] = None) -> list:
    """Every ordered index tuple of ``S`` similar to ``P``, sorted."""
    _require(P, SIMILARITY)
    return _similarity_reports(P, S, orientation, strategy, rng_seed, ENUMERATE, stats)


# ----------------------------------------------------------------- affine

@dataclass(frozen=True)
class AffineEncoding:
    independent: tuple   # pattern indices spanning the affine hull
    dependent: tuple
    Qmat: tuple
    detQ: Fraction
    cramer: tuple        # cramer[l][m] = det(Q with column l := e_m)
    coeff_rows: tuple    # per (dependent point, coordinate): beta_0..beta_k

    @property
    def ell(self) -> int:
        return len(self.coeff_rows)


def independent_points(P: Pattern) -> tuple:
    """Greedy prefix of ``d + 1`` affinely independent pattern points."""
    chosen, rows = [], []
    for i, p in enumerate(P.points):
        trial = rows + [p + (1,)]
        if rank(trial) == len(trial):
            chosen.append(i)
            rows = trial
            if len(chosen) == P.d + 1:
                return tuple(chosen)
    raise PatternError(f"pattern has no {P.d + 1} affinely independent points")


def encode_affine(P: Pattern) -> AffineEncoding:
    d, k = P.d, P.k
    ind = independent_points(P)
    dep = tuple(i for i in range(k) if i not in ind)
    Q = tuple(tuple(P.points[i]) + (Fraction(1),) for i in ind)
    detQ = det(Q)
    size = d + 1
    cramer = []
    for col in range(size):
        row = []
        for m in range(size):
            Qc = [list(r) for r in Q]
            for r in range(size):
                Qc[r][col] = Fraction(int(r == m))
            row.append(det(Qc))
        cramer.append(tuple(row))
    rows = []
    for r in dep:
        h = tuple(P.points[r]) + (Fraction(1),)
        coeffs = [Fraction(0)] * (k + 1)
        coeffs[r + 1] = detQ
        for m, i in enumerate(ind):
            coeffs[i + 1] = -sum((h[l] * cramer[l][m] for l in range(size)), Fraction(0))
        rows.extend([tuple(coeffs)] * d)
    return AffineEncoding(ind, dep, Q, detQ, tuple(cramer), tuple(rows))


def affine_to_ldt(P: Pattern, S: Scene):
    """Returns ``(LdtInstance over R^ell, AffineEncoding)``."""
    _require(P, AFFINE)
    enc = encode_affine(P)
    d, k = P.d, P.k
    ell = enc.ell
    ring = Ring(VECTOR, ell)
    beta = [Vector(tuple(row[i] for row in enc.coeff_rows)) for i in range(k + 1)]
    reps = len(enc.dependent)
    lifted = tuple(Vector(tuple(p[j] for _ in range(reps) for j in range(d)))
                   for p in S.points)
    return LdtInstance(ring, beta, [lifted] * k), enc


def parallelogram_ldt(S: Scene) -> LdtInstance:
    """``a1 - a2 + a3 - a4 = 0`` for vertices listed around the quadrilateral."""
    ring = Ring(VECTOR, 2)
    one, minus = Vector((1, 1)), Vector((-1, -1))
    lifted = tuple(Vector(p) for p in S.points)
    return LdtInstance(ring, [ring.zero(), one, minus, one, minus], [lifted] * 4)


def recover_affine(images, enc: AffineEncoding) -> AffineMap:
    """Solve for ``(F, t)`` from the images of the independent points."""
    d = len(enc.Qmat) - 1
    size = d + 1
    cols = []
    for j in range(d):
        rhs = [images[i][j] for i in enc.independent]
        cols.append([sum((enc.cramer[l][m] * rhs[m] for m in range(size)), Fraction(0)) / enc.detQ
                     for l in range(size)])
    F = tuple(tuple(cols[j][l] for j in range(d)) for l in range(d))
    t = tuple(cols[j][d] for j in range(d))
    return AffineMap(F, t)


def _affine_reports(P, S, strategy, rng_seed, mode, stats):
    inst, enc = affine_to_ldt(P, S)
    res = solve(inst, strategy, rng_seed, mode, DistinctPoints(S), stats=stats)
    sols = res.solutions if mode == ENUMERATE else ([res.solution] if res.found else [])
    reports = []
    for sol in sols:
        images = [S.points[i] for i in sol.indices]
        report = MatchReport(sol.indices, recover_affine(images, enc))
        if not report.check(P, S):
            raise AssertionError(f"recovered map does not reproduce match {sol.indices}")
        reports.append(report)
    return reports


def find_affine(P: Pattern, S: Scene, strategy: str = "auto", rng_seed: int = 0,
                stats: Optional[SolverStats] = None) -> Optional[MatchReport]:
    found = _affine_reports(P, S, strategy, rng_seed, DECIDE, stats)
    return found[0] if found else None


def find_all_affine(P: Pattern, S: Scene, strategy: str = "auto", rng_seed: int = 0,
                    stats: Optional[SolverStats] = None) -> list:
    return _affine_reports(P, S, strategy, rng_seed, ENUMERATE, stats)
