"""Exact geometric pattern matching through k-SUM reductions."""

from .geometry import (
    affine_to_ldt,
    find_affine,
    find_all_affine,
    find_all_similar,
    find_similar,
    normalize_similarity,
    similarity_to_ldt,
)
from .ksum import (
    KSumInstance,
    LdtInstance,
    solve,
    solve_3sum_quadratic,
    solve_bruteforce,
    solve_mitm,
)
from .model import AffineMap, MatchReport, Pattern, Scene, Similarity

__version__ = "0.1.0"
