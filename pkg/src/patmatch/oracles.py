"""Brute-force matchers used as ground truth.

Nothing here touches the LDT encodings: similarities are found by solving
real 2x2 systems from the first two correspondences, affine maps by Gauss
elimination on the correspondence system.  Both walk ordered tuples of
distinct scene points depth first and drop a prefix as soon as it cannot
extend to a match.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Optional

from .errors import BudgetExceeded, PatternError
from .model import AffineMap, MatchReport, Pattern, Scene, Similarity
from .numeric import ComplexRational

ORACLE_BUDGET = 10**8


def _check_budget(n: int, k: int):
    budget = int(os.environ.get("PATMATCH_BUDGET") or ORACLE_BUDGET)
    if n ** k > budget:
        raise BudgetExceeded(f"{n}^{k} tuples exceed oracle budget {budget}")


def _solve2(a11, a12, a21, a22, b1, b2):
    den = a11 * a22 - a12 * a21
    if den == 0:
        return None
    return (b1 * a22 - a12 * b2) / den, (a11 * b2 - a21 * b1) / den


def _similarity_params(p1, p2, q1, q2, mirrored):
    """(a, b, tx, ty) with q = M p + t, M = [[a,-b],[b,a]] or [[a,b],[b,-a]]."""
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    ex, ey = q2[0] - q1[0], q2[1] - q1[1]
    if mirrored:
        sol = _solve2(dx, dy, -dy, dx, ex, ey)
    else:
        sol = _solve2(dx, -dy, dy, dx, ex, ey)
    if sol is None:
        return None
    a, b = sol
    if mirrored:
        tx = q1[0] - (a * p1[0] + b * p1[1])
        ty = q1[1] - (b * p1[0] - a * p1[1])
    else:
        tx = q1[0] - (a * p1[0] - b * p1[1])
        ty = q1[1] - (b * p1[0] + a * p1[1])
    return a, b, tx, ty


def _similarity_image(params, p, mirrored):
    a, b, tx, ty = params
    if mirrored:
        return (a * p[0] + b * p[1] + tx, b * p[0] - a * p[1] + ty)
    return (a * p[0] - b * p[1] + tx, b * p[0] + a * p[1] + ty)


def _extend(used, pts, targets, out, first_only):
    """Depth-first completion: targets[i] must equal the point at position i."""
    depth = len(used)
    if depth == len(targets):
        out.append(tuple(used))
        return first_only
    want = targets[depth]
    for j, q in enumerate(pts):
        if q != want or any(pts[u] == q for u in used):
            continue
        used.append(j)
        stop = _extend(used, pts, targets, out, first_only)
        used.pop()
        if stop:
            return True
    return False


def oracle_similar(P: Pattern, S: Scene, orientation: str = "both",
                   enumerate_all: bool = False):
    """Similar copies of ``P`` in ``S``: one report (or None), or all of them."""
    if len(P.points) < 2:
        raise PatternError("need at least two pattern points")
    _check_budget(S.n, P.k)
    modes = {"direct": (False,), "mirrored": (True,), "both": (False, True)}[orientation]
    pts, pat = S.points, P.points
    found = {}
    for i1, q1 in enumerate(pts):
        for i2, q2 in enumerate(pts):
            if q1 == q2:
                continue
            for mirrored in modes:
                params = _similarity_params(pat[0], pat[1], q1, q2, mirrored)
                targets = [_similarity_image(params, p, mirrored) for p in pat[2:]]
                tails = []
                _extend([i1, i2], pts, [q1, q2] + targets, tails, not enumerate_all)
                for idx in tails:
                    if idx not in found:
                        a, b, tx, ty = params
                        found[idx] = MatchReport(idx, Similarity(
                            ComplexRational(a, b), ComplexRational(tx, ty), mirrored))
                if tails and not enumerate_all:
                    return found[min(found)]
    if enumerate_all:
        return [found[i] for i in sorted(found)]
    return None


def _add_row(pivots, p, q, d):
    """Eliminate the correspondence ``[p 1] X = q`` against ``pivots``.

    ``pivots`` is a list of (column, row) with rows normalised at their
    pivot.  Returns the new pivot list, or None if the row contradicts it.
    """
    row = [Fraction(x) for x in p] + [Fraction(1)] + [Fraction(x) for x in q]
    for c, pr in pivots:
        f = row[c]
        if f:
            row = [x - f * y for x, y in zip(row, pr)]
    lead = next((c for c in range(d + 1) if row[c]), None)
    if lead is None:
        return pivots if not any(row[d + 1:]) else None
    inv = 1 / row[lead]
    return pivots + [(lead, [x * inv for x in row])]


def _back_substitute(pivots, d):
    """Unique X ((d+1) x d) once there are d+1 pivots."""
    X = [None] * (d + 1)
    for c, row in sorted(pivots, reverse=True):
        val = list(row[d + 1:])
        for c2 in range(c + 1, d + 1):
            if row[c2]:
                val = [v - row[c2] * x for v, x in zip(val, X[c2])]
        X[c] = val
    return X


def _solve_full(pat, imgs, d):
    pivots = []
    for p, q in zip(pat, imgs):
        pivots = _add_row(pivots, p, q, d)
        if pivots is None:
            return None
    return _back_substitute(pivots, d)


def oracle_affine(P: Pattern, S: Scene, enumerate_all: bool = False):
    d, k = P.d, P.k
    _check_budget(S.n, k)
    pts, pat = S.points, P.points
    found = []

    def walk(used, pivots):
        depth = len(used)
        if depth == k:
            found.append(tuple(used))
            return not enumerate_all
        for j, q in enumerate(pts):
            if any(pts[u] == q for u in used):
                continue
            nxt = _add_row(pivots, pat[depth], q, d)
            if nxt is None:
                continue
            used.append(j)
            if len(nxt) == d + 1:
                # map is pinned down: the rest of the tuple is forced
                X = _back_substitute(nxt, d)
                targets = [pts[u] for u in used] + [
                    tuple(sum((p[i] * X[i][c] for i in range(d)), Fraction(0)) + X[d][c]
                          for c in range(d))
                    for p in pat[depth + 1:]]
                tails = []
                stop = _extend(list(used), pts, targets, tails, not enumerate_all)
                found.extend(tails)
            else:
                stop = walk(used, nxt)
            used.pop()
            if stop:
                return True
        return False

    walk([], [])
    reports = []
    for idx in sorted(set(found)):
        X = _solve_full(pat, [pts[i] for i in idx], d)
        F = tuple(tuple(X[i][c] for c in range(d)) for i in range(d))
        reports.append(MatchReport(idx, AffineMap(F, tuple(X[d]))))
    if enumerate_all:
        return reports
    return reports[0] if reports else None
