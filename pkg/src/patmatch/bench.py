"""Operation-count benchmarks and log-log slope fits."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .generators import gen_random_pattern, gen_random_scene
from .geometry import find_all_similar
from .ksum import KSumInstance, SolverStats, solve_3sum_quadratic, solve_mitm
from .model import SIMILARITY
from .numeric import FloatBackendPolicy, Ring, Scalar

DEFAULT_SIZES = {
    "3sum": (500, 1000, 2000, 4000),
    "mitm4": (50, 100, 200, 400),
    "mitm5": (12, 24, 48, 96),
    "pipeline": (500, 1000, 2000, 4000),
}


@dataclass
class BenchRow:
    suite: str
    k: int
    n: int
    seconds: float
    ops: int


def random_scalar_instance(k: int, n: int, seed: int, bits: int = 60) -> KSumInstance:
    """Sets of wide random integers: a zero sum is practically impossible,
    so every solver scans its whole search space."""
    rng = random.Random(seed)
    sets = [[Scalar(Fraction(rng.randint(-(2**bits), 2**bits))) for _ in range(n)]
            for _ in range(k)]
    return KSumInstance(Ring("scalar"), sets)


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def bench_3sum(n: int, seed: int = 0, epsilon=None) -> BenchRow:
    inst = random_scalar_instance(3, n, seed)
    stats = SolverStats()
    policy = FloatBackendPolicy(epsilon) if epsilon is not None else None
    secs = _timed(lambda: solve_3sum_quadratic(inst, "enumerate", policy=policy, stats=stats))
    return BenchRow("3sum", 3, n, secs, stats.comparisons)


def bench_mitm(k: int, n: int, seed: int = 0) -> BenchRow:
    inst = random_scalar_instance(k, n, seed)
    stats = SolverStats()
    secs = _timed(lambda: solve_mitm(inst, "enumerate", stats=stats))
    return BenchRow("mitm", k, n, secs, stats.partial_sums)


def bench_pipeline(n: int, seed: int = 0) -> BenchRow:
    """Similarity matching (k=3) through the reduction and two-pointer 3SUM."""
    P = gen_random_pattern(SIMILARITY, 3, seed=seed)
    S = gen_random_scene(2, n, (-10**9, 10**9), seed)
    stats = SolverStats()
    secs = _timed(lambda: find_all_similar(P, S, strategy="quad3sum", rng_seed=seed,
                                           stats=stats))
    return BenchRow("pipeline", 3, n, secs, stats.ops)


def loglog_slope(rows) -> float:
    x = np.log([r.n for r in rows])
    y = np.log([r.ops for r in rows])
    return float(np.polyfit(x, y, 1)[0])


def run_suite(suite: str, sizes=None, seed: int = 0, epsilon=None) -> dict:
    """Returns {(suite, k): rows}."""
    out = {}
    if suite == "3sum":
        sizes = sizes or DEFAULT_SIZES["3sum"]
        out[("3sum", 3)] = [bench_3sum(n, seed, epsilon) for n in sizes]
    elif suite == "mitm":
        for k in (4, 5):
            ks = sizes or DEFAULT_SIZES[f"mitm{k}"]
            out[("mitm", k)] = [bench_mitm(k, n, seed) for n in ks]
    elif suite == "pipeline":
        sizes = sizes or DEFAULT_SIZES["pipeline"]
        out[("pipeline", 3)] = [bench_pipeline(n, seed) for n in sizes]
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return out
