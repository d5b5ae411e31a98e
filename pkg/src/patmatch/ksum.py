"""k-SUM and k-LDT instances, the reductions between them, and solvers.

The pipeline in :func:`solve` folds the LDT coefficients into the sets,
splits complex numbers into real pairs, projects vectors onto a random
integer direction, runs a scalar solver and verifies every candidate in the
source instance.  A candidate that fails verification is a projection
artefact; the projection is redrawn, and after ``retries`` poisoned draws
the vector instance is solved directly.  The answer is therefore always
exact; randomness only affects running time.
"""

from __future__ import annotations

import itertools
import operator
import os
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Union

from .errors import BudgetExceeded, StructuralError
from .numeric import (
    COMPLEX,
    CVECTOR,
    SCALAR,
    VECTOR,
    FloatBackendPolicy,
    Ring,
    RingElement,
    Scalar,
    Vector,
    common_denominator,
    is_zero,
)

DEFAULT_BUDGET = 10**7
PROJECTION_BOUND = 2**62
DECIDE, ENUMERATE = "decide", "enumerate"

Indices = tuple


def tuple_budget() -> int:
    """Brute-force tuple cap, overridable through ``PATMATCH_BUDGET``."""
    raw = os.environ.get("PATMATCH_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


# ------------------------------------------------------------------ types

def _check_sets(ring: Ring, sets, what="set element"):
    for s in sets:
        for a in s:
            if a.ring != ring:
                raise StructuralError(f"{what} {a!r} not in ring {ring}")


@dataclass(frozen=True)
class KSumInstance:
    ring: Ring
    sets: tuple

    def __post_init__(self):
        sets = tuple(tuple(s) for s in self.sets)
        if not sets:
            raise StructuralError("k-SUM instance needs at least one set")
        _check_sets(self.ring, sets)
        object.__setattr__(self, "sets", sets)

    @property
    def k(self) -> int:
        return len(self.sets)

    def select(self, indices: Sequence[int]) -> tuple:
        return tuple(s[i] for s, i in zip(self.sets, indices))

    def value(self, indices: Sequence[int]) -> RingElement:
        total = self.ring.zero()
        for a in self.select(indices):
            total = total + a
        return total


@dataclass(frozen=True)
class LdtInstance:
    """Decide whether ``beta[0] + sum(beta[i] * a_i)`` vanishes for a tuple."""

    ring: Ring
    beta: tuple
    sets: tuple

    def __post_init__(self):
        sets = tuple(tuple(s) for s in self.sets)
        beta = tuple(self.beta)
        if not sets:
            raise StructuralError("LDT instance needs at least one set")
        if len(beta) != len(sets) + 1:
            raise StructuralError(f"need {len(sets) + 1} coefficients, got {len(beta)}")
        _check_sets(self.ring, sets)
        _check_sets(self.ring, [beta], "coefficient")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "beta", beta)

    @property
    def k(self) -> int:
        return len(self.sets)

    def select(self, indices: Sequence[int]) -> tuple:
        return tuple(s[i] for s, i in zip(self.sets, indices))

    def f(self, witness: Sequence[RingElement]) -> RingElement:
        total = self.beta[0]
        for b, a in zip(self.beta[1:], witness):
            total = total + b * a
        return total

    def value(self, indices: Sequence[int]) -> RingElement:
        return self.f(self.select(indices))

    @classmethod
    def from_ksum(cls, inst: KSumInstance) -> "LdtInstance":
        one = inst.ring.one()
        return cls(inst.ring, (inst.ring.zero(),) + (one,) * inst.k, inst.sets)


@dataclass(frozen=True)
class ProjectionVector:
    v: tuple
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not any(self.v):
            raise StructuralError("projection vector must be nonzero")


@dataclass(frozen=True)
class SolutionTuple:
    indices: tuple
    witness: tuple


@dataclass
class SolverStats:
    """Instrumentation counters (operation counts, not wall time)."""

    partial_sums: int = 0
    comparisons: int = 0
    reduction_ops: int = 0
    candidates: int = 0
    false_positives: int = 0
    attempts: int = 0
    fallback: bool = False

    @property
    def ops(self) -> int:
        return self.partial_sums + self.comparisons + self.reduction_ops


# ------------------------------------------------------------- reductions

def ldt_to_ksum(inst: LdtInstance, stats: Optional[SolverStats] = None) -> KSumInstance:
    """Fold the coefficients into the sets; the constant goes into the last."""
    k = inst.k
    sets = []
    for i, (b, s) in enumerate(zip(inst.beta[1:], inst.sets)):
        if i == k - 1:
            sets.append(tuple(b * a + inst.beta[0] for a in s))
        else:
            sets.append(tuple(b * a for a in s))
    if stats is not None:
        stats.reduction_ops += sum(len(s) for s in inst.sets)
    return KSumInstance(inst.ring, sets)


def complex_to_real(inst: KSumInstance) -> KSumInstance:
    """C^m -> R^2m with interleaved (re0, im0, re1, im1, ...) components."""
    if not inst.ring.is_complex:
        raise StructuralError(f"ring {inst.ring} is not complex")
    ring = Ring(VECTOR, 2 * inst.ring.arity)
    sets = [[Vector(a.components()) for a in s] for s in inst.sets]
    return KSumInstance(ring, sets)


def real_to_complex(inst: KSumInstance) -> KSumInstance:
    """Inverse of :func:`complex_to_real`."""
    from .numeric import ComplexRational

    if inst.ring.tag != VECTOR or inst.ring.arity % 2:
        raise StructuralError(f"ring {inst.ring} has no complex structure")
    ring = Ring(CVECTOR, inst.ring.arity // 2)
    sets = [[Vector(tuple(ComplexRational(c[j], c[j + 1])
                          for j in range(0, len(c), 2)))
             for c in (a.items for a in s)] for s in inst.sets]
    return KSumInstance(ring, sets)


def draw_projection(d: int, rng_seed: int) -> ProjectionVector:
    """Integer direction with coordinates uniform in [1, 2^62]."""
    if d < 1:
        raise ValueError("dimension must be positive")
    rng = random.Random(rng_seed)
    v = tuple(Fraction(rng.randint(1, PROJECTION_BOUND)) for _ in range(d))
    return ProjectionVector(v, {"seed": rng_seed, "d": d})


def attempt_seeds(seed: int) -> Iterator[int]:
    """Seeds for successive projection attempts of :func:`solve`."""
    rng = random.Random(seed)
    while True:
        yield rng.getrandbits(64)


def project_instance(inst: KSumInstance, v: ProjectionVector,
                     stats: Optional[SolverStats] = None) -> KSumInstance:
    if inst.ring.tag == SCALAR and len(v.v) == 1:
        c = v.v[0]
        sets = [[Scalar(a.value * c) for a in s] for s in inst.sets]
    elif inst.ring.tag == VECTOR and inst.ring.arity == len(v.v):
        sets = [[Scalar(sum(x * c for x, c in zip(a.items, v.v))) for a in s]
                for s in inst.sets]
    else:
        raise StructuralError(f"cannot project {inst.ring} with a {len(v.v)}-vector")
    if stats is not None:
        stats.reduction_ops += sum(len(s) for s in inst.sets)
    return KSumInstance(Ring(SCALAR), sets)


def verify_tuple(inst: Union[LdtInstance, KSumInstance], t) -> bool:
    """Exact check of the original predicate at ``t``'s indices."""
    indices = t.indices if isinstance(t, SolutionTuple) else tuple(t)
    if len(indices) != inst.k:
        return False
    for s, i in zip(inst.sets, indices):
        if not 0 <= i < len(s):
            return False
    return is_zero(inst.value(indices))


# ---------------------------------------------------------------- keys

def _integer_keys(inst: KSumInstance):
    """Scale every component by one common denominator.

    Returns (key lists, zero, add).  Scalars become ints, vectors tuples of
    ints.  Sums vanish exactly when the scaled sums do.
    """
    comps = [[a.components() for a in s] for s in inst.sets]
    den = common_denominator(c for s in comps for a in s for c in a)
    if inst.ring.tag == SCALAR:
        keys = [[(a[0] * den).numerator for a in s] for s in comps]
        return keys, 0, operator.add
    keys = [[tuple((c * den).numerator for c in a) for a in s] for s in comps]
    width = len(keys[0][0]) if keys[0] else len(inst.ring.zero().components())
    return keys, (0,) * width, _vadd


def _vadd(x, y):
    return tuple(map(operator.add, x, y))


def _vneg(x):
    return tuple(-c for c in x)


def _neg_for(zero):
    return operator.neg if zero == 0 else _vneg


# --------------------------------------------------------------- solvers
#
# Each solver has a private generator yielding index tuples in lexicographic
# order; the public wrappers turn it into decide/enumerate results.

DistinctFilter = Optional[Callable[[tuple], bool]]


def _finish(inst, gen, mode):
    if mode == DECIDE:
        idx = next(gen, None)
        return None if idx is None else SolutionTuple(idx, inst.select(idx))
    if mode == ENUMERATE:
        return [SolutionTuple(idx, inst.select(idx)) for idx in gen]
    raise ValueError(f"unknown mode {mode!r}")


def _iter_bruteforce(keys, zero, add, distinct_filter, stats):
    count = 1
    for s in keys:
        count *= len(s)
    if count > tuple_budget():
        raise BudgetExceeded(f"{count} tuples exceed budget {tuple_budget()}")
    ranges = [range(len(s)) for s in keys]
    for idx in itertools.product(*ranges):
        total = zero
        for s, i in zip(keys, idx):
            total = add(total, s[i])
        if stats is not None:
            stats.comparisons += 1
        if total == zero and (distinct_filter is None or distinct_filter(idx)):
            yield idx


def _as_ksum(inst):
    # an LDT handed to a raw solver is folded first, never read as plain sets
    return ldt_to_ksum(inst) if isinstance(inst, LdtInstance) else inst


def solve_bruteforce(inst: KSumInstance, mode: str = DECIDE,
                     distinct_filter: DistinctFilter = None,
                     stats: Optional[SolverStats] = None):
    """Exhaustive scan of the product of the sets (test oracle)."""
    inst = _as_ksum(inst)
    keys, zero, add = _integer_keys(inst)
    return _finish(inst, _iter_bruteforce(keys, zero, add, distinct_filter, stats), mode)


def _iter_3sum(values, distinct_filter, stats, tol=None):
    """Sort + two pointers for each element of the first set.

    With ``tol`` set the values are floats and sums within ``tol`` of zero
    count as hits.
    """
    a1, a2, a3 = values
    o2 = sorted(range(len(a2)), key=a2.__getitem__)
    o3 = sorted(range(len(a3)), key=a3.__getitem__, reverse=True)
    s2 = [a2[j] for j in o2]
    s3 = [a3[j] for j in o3]
    n2, n3 = len(s2), len(s3)
    comparisons = 0
    try:
        for i, x in enumerate(a1):
            lo, hi = 0, 0
            hits = []
            while lo < n2 and hi < n3:
                comparisons += 1
                t = x + s2[lo] + s3[hi]
                if tol is None:
                    zero_hit = t == 0
                else:
                    zero_hit = -tol <= t <= tol
                if zero_hit:
                    # expand runs of equal values on both sides
                    lo_end = lo + 1
                    while lo_end < n2 and s2[lo_end] == s2[lo]:
                        lo_end += 1
                    hi_end = hi + 1
                    while hi_end < n3 and s3[hi_end] == s3[hi]:
                        hi_end += 1
                    comparisons += (lo_end - lo) + (hi_end - hi)
                    hits.extend((o2[p], o3[q]) for p in range(lo, lo_end)
                                for q in range(hi, hi_end))
                    lo, hi = lo_end, hi_end
                elif t < 0:
                    lo += 1
                else:
                    hi += 1
            hits.sort()
            for j, l in hits:
                idx = (i, j, l)
                if distinct_filter is None or distinct_filter(idx):
                    yield idx
    finally:
        if stats is not None:
            stats.comparisons += comparisons


def solve_3sum_quadratic(inst: KSumInstance, mode: str = DECIDE,
                         distinct_filter: DistinctFilter = None,
                         policy: Optional[FloatBackendPolicy] = None,
                         stats: Optional[SolverStats] = None):
    """Classical O(n^2) 3SUM over a scalar ring.

    Witnesses come out in lexicographic index order, so the decide-mode
    witness is the same one :func:`solve_bruteforce` reports.  Passing a
    :class:`FloatBackendPolicy` runs on floats instead (benchmarks only).
    """
    inst = _as_ksum(inst)
    if inst.k != 3:
        raise StructuralError(f"3SUM needs k=3, got k={inst.k}")
    if inst.ring.tag != SCALAR:
        raise StructuralError(f"3SUM needs a scalar ring, got {inst.ring}")
    if policy is not None:
        values = [[float(a.value) for a in s] for s in inst.sets]
        gen = _iter_3sum(values, distinct_filter, stats, tol=policy.epsilon)
    else:
        keys, _, _ = _integer_keys(inst)
        gen = _iter_3sum(keys, distinct_filter, stats)
    return _finish(inst, gen, mode)


def _prefix_sums(keys, zero, add, labels):
    """(code, partial sum, labels used) for every tuple over ``keys``.

    ``code`` packs the indices in mixed radix (see :func:`_decode`); the
    order is lexicographic.  Tuples repeating a label are skipped.
    """
    level = [(0, zero, ())]
    for s in keys:
        n = len(s)
        nxt = []
        for code, total, used in level:
            base = code * n
            for i, x in enumerate(s):
                if labels is None:
                    nxt.append((base + i, add(total, x), used))
                elif labels[i] not in used:
                    nxt.append((base + i, add(total, x), used + (labels[i],)))
        level = nxt
    return level


def _decode(code, radices):
    idx = []
    for n in reversed(radices):
        code, i = divmod(code, n)
        idx.append(i)
    return tuple(reversed(idx))


def _iter_mitm(keys, zero, add, distinct_filter, stats):
    neg = _neg_for(zero)
    labels = getattr(distinct_filter, "labels", None)
    k = len(keys)
    h = (k + 1) // 2
    left, right = keys[:h], keys[h:]
    rrad = [len(s) for s in right]

    # index the smaller half: sum -> first code, repeats in ``extra``
    index, extra = {}, defaultdict(list)
    built = 0
    if right:
        last = right[-1]
        n = len(last)
        for pcode, ptotal, used in _prefix_sums(right[:-1], zero, add, labels):
            base = pcode * n
            for i, x in enumerate(last):
                if labels is not None and labels[i] in used:
                    continue
                t = add(ptotal, x)
                if t in index:
                    extra[t].append(base + i)
                else:
                    index[t] = base + i
                built += 1
    else:
        index[zero] = 0
    if stats is not None:
        stats.partial_sums += built

    def hits(code, t):
        yield _decode(code, rrad)
        for c in extra.get(t, ()):
            yield _decode(c, rrad)

    # stream the larger half; its last set is the inner loop
    get = index.get
    last = left[-1]
    lrad = [len(s) for s in left[:-1]]
    generated = 0
    try:
        for pcode, ptotal, _ in _prefix_sums(left[:-1], zero, add, labels):
            pidx = _decode(pcode, lrad)
            generated += len(last)
            for i, x in enumerate(last):
                t = neg(add(ptotal, x))
                code = get(t)
                if code is None:
                    continue
                for ridx in hits(code, t):
                    idx = pidx + (i,) + ridx
                    if distinct_filter is None or distinct_filter(idx):
                        yield idx
    finally:
        if stats is not None:
            stats.partial_sums += generated


def solve_mitm(inst: KSumInstance, mode: str = DECIDE,
               distinct_filter: DistinctFilter = None,
               stats: Optional[SolverStats] = None):
    """Meet in the middle: index the last floor(k/2) sets, stream the rest.

    ``stats.partial_sums`` counts n^floor(k/2) + n^ceil(k/2) generated
    partial sums on a full scan.
    """
    inst = _as_ksum(inst)
    keys, zero, add = _integer_keys(inst)
    return _finish(inst, _iter_mitm(keys, zero, add, distinct_filter, stats), mode)


_ITERS = {
    "bruteforce": _iter_bruteforce,
    "mitm": _iter_mitm,
}
STRATEGIES = ("auto", "bruteforce", "brute", "mitm", "quad3sum")


def _candidates(inst: KSumInstance, strategy: str, distinct_filter, stats):
    if strategy == "brute":
        strategy = "bruteforce"
    if strategy == "auto":
        strategy = "mitm"
    if strategy == "quad3sum":
        if inst.k != 3 or inst.ring.tag != SCALAR:
            raise StructuralError("quad3sum needs a scalar 3SUM instance")
        keys, _, _ = _integer_keys(inst)
        return _iter_3sum(keys, distinct_filter, stats)
    if strategy not in _ITERS:
        raise ValueError(f"unknown strategy {strategy!r}")
    keys, zero, add = _integer_keys(inst)
    return _ITERS[strategy](keys, zero, add, distinct_filter, stats)


# --------------------------------------------------------------- pipeline

@dataclass
class MatchDecision:
    found: bool
    solution: Optional[SolutionTuple] = None
    solutions: list = field(default_factory=list)
    attempts: int = 0
    false_positives: int = 0
    fallback: bool = False
    stats: SolverStats = field(default_factory=SolverStats)


class _Poisoned(Exception):
    pass


def _run(source, scalar_inst, strategy, mode, distinct_filter, stats):
    """Verify candidates in ``source``; raise _Poisoned on the first failure."""
    found = []
    for idx in _candidates(scalar_inst, strategy, distinct_filter, stats):
        stats.candidates += 1
        if not verify_tuple(source, idx):
            stats.false_positives += 1
            raise _Poisoned(idx)
        found.append(SolutionTuple(idx, source.select(idx)))
        if mode == DECIDE:
            break
    return found


def solve(inst: Union[LdtInstance, KSumInstance], strategy: str = "auto",
          rng_seed: int = 0, mode: str = DECIDE,
          distinct_filter: DistinctFilter = None, retries: int = 3,
          stats: Optional[SolverStats] = None) -> MatchDecision:
    """Reduce to scalar k-SUM, solve, and verify in the source ring."""
    if mode not in (DECIDE, ENUMERATE):
        raise ValueError(f"unknown mode {mode!r}")
    stats = stats if stats is not None else SolverStats()
    ks = ldt_to_ksum(inst, stats) if isinstance(inst, LdtInstance) else inst
    if ks.ring.is_complex:
        ks = complex_to_real(ks)

    found = None
    if ks.ring.tag == SCALAR:
        # no projection needed, so nothing can be poisoned
        stats.attempts = 1
        found = _run(inst, ks, strategy, mode, distinct_filter, stats)
    else:
        seeds = attempt_seeds(rng_seed)
        for _ in range(retries):
            stats.attempts += 1
            v = draw_projection(ks.ring.arity, next(seeds))
            projected = project_instance(ks, v, stats)
            try:
                found = _run(inst, projected, strategy, mode, distinct_filter, stats)
                break
            except _Poisoned:
                continue
        if found is None:
            stats.fallback = True
            direct = "mitm" if strategy in ("auto", "quad3sum") else strategy
            found = _run(inst, ks, direct, mode, distinct_filter, stats)

    return MatchDecision(
        found=bool(found),
        solution=found[0] if found else None,
        solutions=found if mode == ENUMERATE else [],
        attempts=stats.attempts,
        false_positives=stats.false_positives,
        fallback=stats.fallback,
        stats=stats,
    )
