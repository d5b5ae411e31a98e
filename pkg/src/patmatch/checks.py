"""Seeded corpora and cross-checks shared by ``patmatch selftest`` and the test suite."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .generators import (
    gen_lattice,
    gen_planted_affine,
    gen_planted_similarity,
    gen_random_pattern,
    gen_random_scene,
    random_affine,
    random_similarity,
)
from .geometry import find_all_affine, find_all_similar, find_affine, find_similar
from .ksum import (
    KSumInstance,
    LdtInstance,
    attempt_seeds,
    draw_projection,
    ldt_to_ksum,
    solve,
    solve_bruteforce,
)
from .model import AFFINE, SIMILARITY, Pattern
from .numeric import (
    COMPLEX,
    CVECTOR,
    SCALAR,
    VECTOR,
    ComplexRational,
    Ring,
    Vector,
    is_zero,
)
from .oracles import oracle_affine, oracle_similar


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int = 0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" first failure: {self.failures[0]}" if self.failures else ""
        return f"[{status}] {self.name} ({self.checked} checked, {len(self.failures)} failures){extra}"


# ---------------------------------------------------------- LDT corpus

_MAX_N = {3: 8, 4: 6, 5: 4}


def _small(rng):
    # mostly tiny integers so that zero sums are common; some fractions
    if rng.random() < 0.2:
        return Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return Fraction(rng.randint(-3, 3))


def random_element(ring: Ring, rng: random.Random):
    if ring.tag == SCALAR:
        return ring.element(_small(rng))
    if ring.tag == COMPLEX:
        return ring.element(ComplexRational(_small(rng), _small(rng)))
    if ring.tag == VECTOR:
        return ring.element([_small(rng) for _ in range(ring.arity)])
    return ring.element([ComplexRational(_small(rng), _small(rng)) for _ in range(ring.arity)])


def random_ldt(seed: int) -> LdtInstance:
    rng = random.Random(seed)
    k = rng.choice((3, 4, 5))
    n = rng.randint(1, _MAX_N[k])
    tag = (SCALAR, COMPLEX, VECTOR, CVECTOR)[seed % 4]
    ring = Ring(tag, 1 if tag in (SCALAR, COMPLEX) else rng.randint(1, 3))
    beta = [random_element(ring, rng) for _ in range(k + 1)]
    sets = [[random_element(ring, rng) for _ in range(n)] for _ in range(k)]
    # plant a solution in half of the instances by fixing the last element
    if rng.random() < 0.5:
        try:
            partial = beta[0]
            for b, s in zip(beta[1:-1], sets[:-1]):
                partial = partial + b * s[0]
            inv = _inverse(beta[-1])
            sets[-1][0] = (-partial) * inv
        except ZeroDivisionError:
            pass
    return LdtInstance(ring, beta, sets)


def _inverse(b):
    ring = b.ring
    if ring.tag == SCALAR:
        return ring.element(1 / b.value)
    if ring.tag == COMPLEX:
        return ring.element(ComplexRational(1) / b.value)
    if ring.tag == VECTOR:
        return Vector(tuple(1 / x for x in b.items))
    return Vector(tuple(ComplexRational(1) / x for x in b.items))


def check_reduction_soundness(count: int = 500, seed: int = 0) -> CheckResult:
    """f(t) = 0 in the LDT iff the folded k-SUM sums to 0 at t, for every tuple."""
    res = CheckResult("ldt_to_ksum soundness (exhaustive)", True)
    solutions = 0
    for s in range(seed, seed + count):
        inst = random_ldt(s)
        folded = ldt_to_ksum(inst)
        for idx in itertools.product(*(range(len(a)) for a in inst.sets)):
            lhs = is_zero(inst.value(idx))
            rhs = is_zero(folded.value(idx))
            solutions += lhs
            if lhs != rhs:
                res.failures.append((s, idx))
        res.checked += 1
    res.passed = not res.failures and solutions > 0
    return res


# ---------------------------------------------------- geometric corpora

def similarity_case(seed: int):
    """(pattern, scene, label) with k in {3,4,5} and n <= 10."""
    rng = random.Random(seed)
    k = (3, 4, 5)[seed % 3]
    flavor = ("planted", "random", "lattice")[(seed // 3) % 3]
    P = gen_random_pattern(SIMILARITY, k, coordinate_range=(-3, 3), seed=seed)
    if flavor == "lattice":
        S = gen_lattice(2, 3)
        # draw the pattern from the lattice itself so that matches exist
        P = Pattern(tuple(rng.sample(S.points, k)), 2, SIMILARITY)
    elif flavor == "random":
        S = gen_random_scene(2, rng.randint(k, 10), (0, 3), seed)
    else:
        w, z = random_similarity(rng, -2, 2)
        S = gen_planted_similarity(P, rng.randint(k, 10), w, z,
                                   mirrored=rng.random() < 0.5, seed=seed,
                                   decoy_range=(-6, 6))
    return P, S, flavor


def affine_case(seed: int):
    """(pattern, scene, label) with d in {2,3}, k in {d+2, d+3} and n <= 9."""
    rng = random.Random(seed)
    d = (2, 3)[seed % 2]
    k = d + 2 + (seed // 2) % 2
    flavor = ("planted", "random", "lattice")[(seed // 4) % 3]
    P = gen_random_pattern(AFFINE, k, d, coordinate_range=(-2, 2), seed=seed)
    if flavor == "lattice":
        S = gen_lattice(d, 3 if d == 2 else 2)
        while True:
            pts = tuple(rng.sample(S.points, k))
            try:
                P = Pattern(pts, d, AFFINE)
                break
            except ValueError:
                continue
    elif flavor == "random":
        S = gen_random_scene(d, rng.randint(k, 9), (0, 2), seed)
    else:
        F, t = random_affine(rng, d, -2, 2, invertible=rng.random() < 0.8)
        images = {tuple(sum((p[i] * F[i][j] for i in range(d)), Fraction(0)) + t[j]
                        for j in range(d)) for p in P.points}
        if len(images) < k:
            F, t = random_affine(rng, d, -2, 2)
        S = gen_planted_affine(P, rng.randint(k, 9), F, t, seed=seed, decoy_range=(-4, 4))
    return P, S, flavor


def check_oracle_equivalence(kind: str, count: int = 1000, seed: int = 0) -> CheckResult:
    """Pipeline and oracle agree on the decision and on every matched tuple."""
    res = CheckResult(f"{kind} pipeline == oracle ({count} instances)", True)
    positives = 0
    for s in range(seed, seed + count):
        if kind == SIMILARITY:
            P, S, _ = similarity_case(s)
            mine = find_all_similar(P, S, rng_seed=s)
            theirs = oracle_similar(P, S, enumerate_all=True)
            decided = find_similar(P, S, rng_seed=s) is not None
        else:
            P, S, _ = affine_case(s)
            mine = find_all_affine(P, S, rng_seed=s)
            theirs = oracle_affine(P, S, enumerate_all=True)
            decided = find_affine(P, S, rng_seed=s) is not None
        a = [r.indices for r in mine]
        b = [r.indices for r in theirs]
        positives += bool(b)
        if a != b or decided != bool(b) or not all(r.check(P, S) for r in mine):
            res.failures.append(s)
        res.checked += 1
    res.passed = not res.failures and 0 < positives < count
    return res


# --------------------------------------------------------- Las Vegas

def adversarial_instance(seed: int, poisoned: int = 3, planted: bool = False) -> KSumInstance:
    """Vector 3-SUM whose first ``poisoned`` projections all see a false zero.

    For attempt ``a`` with direction ``(x, y)`` the pair ``(y, 0) + (0, -x)``
    projects to ``xy - yx = 0`` although the vector sum is ``(y, -x) != 0``.
    """
    ring = Ring(VECTOR, 2)
    seeds = attempt_seeds(seed)
    a1, a2 = [], []
    for _ in range(poisoned):
        x, y = draw_projection(2, next(seeds)).v
        a1.append(ring.element((y, 0)))
        a2.append(ring.element((0, -x)))
    a3 = [ring.element((0, 0))]
    if planted:
        a1.append(ring.element((5, -7)))
        a2.append(ring.element((-5, 7)))
    return KSumInstance(ring, [a1, a2, a3])


def check_las_vegas(count: int = 100, seed: int = 0) -> CheckResult:
    res = CheckResult(f"Las Vegas guarantee ({count} projection seeds)", True)
    for s in range(seed, seed + count):
        for poisoned in (1, 3, 5):
            for planted in (False, True):
                inst = adversarial_instance(s, poisoned, planted)
                truth = solve_bruteforce(inst) is not None
                for mode in ("decide", "enumerate"):
                    out = solve(inst, "auto", s, mode)
                    ok = out.found == truth and out.false_positives >= 1
                    if out.found:
                        ok &= is_zero(inst.value(out.solution.indices))
                    # poisoning every allowed draw must end in the fallback
                    if poisoned >= 3:
                        ok &= out.fallback
                    if not ok:
                        res.failures.append((s, poisoned, planted, mode))
                    res.checked += 1
    res.passed = not res.failures
    return res


def run_selftest(scale: float = 0.1, seed: int = 0) -> list:
    """Reduction soundness, oracle equivalence and Las Vegas checks at reduced scale."""
    n = lambda full: max(1, int(full * scale))  # noqa: E731
    return [
        check_reduction_soundness(n(500), seed),
        check_oracle_equivalence(SIMILARITY, n(1000), seed),
        check_oracle_equivalence(AFFINE, n(1000), seed),
        check_las_vegas(n(100), seed),
    ]

