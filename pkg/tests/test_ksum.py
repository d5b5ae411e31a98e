import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patmatch.errors import BudgetExceeded, StructuralError
from patmatch.ksum import (
    KSumInstance,
    LdtInstance,
    ProjectionVector,
    SolutionTuple,
    SolverStats,
    complex_to_real,
    draw_projection,
    ldt_to_ksum,
    project_instance,
    real_to_complex,
    solve,
    solve_3sum_quadratic,
    solve_bruteforce,
    solve_mitm,
    verify_tuple,
)
from patmatch.numeric import ComplexRational, FloatBackendPolicy, Ring, Vector, is_zero

SCALAR = Ring("scalar")
V2 = Ring("vector", 2)


def scalars(*sets):
    return KSumInstance(SCALAR, [[SCALAR.element(x) for x in s] for s in sets])


def values(inst):
    return [[a.value for a in s] for s in inst.sets]


# ------------------------------------------------------------ ldt_to_ksum

def test_ldt_to_ksum_folds_coefficients():
    inst = LdtInstance(SCALAR, [SCALAR.element(b) for b in (1, 2, -1, 1)],
                       [[SCALAR.element(1), SCALAR.element(2)],
                        [SCALAR.element(3)], [SCALAR.element(0)]])
    folded = ldt_to_ksum(inst)
    assert values(folded) == [[2, 4], [-3], [1]]
    # tuple (1, 3, 0) sits at indices (0, 0, 0)
    assert inst.value((0, 0, 0)) == SCALAR.element(0)
    assert folded.value((0, 0, 0)) == SCALAR.element(0)
    assert not is_zero(inst.value((1, 0, 0)))
    assert not is_zero(folded.value((1, 0, 0)))


def test_ldt_to_ksum_identity_for_plain_ksum():
    ks = scalars([1, -2], [3], [Fraction(1, 2), 0])
    assert ldt_to_ksum(LdtInstance.from_ksum(ks)).sets == ks.sets


def test_ldt_to_ksum_complex_triangle():
    C = Ring("complex")
    u, one = ComplexRational(0, 1), ComplexRational(1)
    beta = [C.element(0), C.element(u - one), C.element(-u), C.element(one)]
    inst = LdtInstance(C, beta, [[C.element(0)], [C.element(1)], [C.element(u)]])
    folded = ldt_to_ksum(inst)
    assert [s[0].value for s in folded.sets] == [ComplexRational(0), -u, u]
    assert is_zero(folded.value((0, 0, 0))) and is_zero(inst.value((0, 0, 0)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_ldt_reduction_sound_on_every_tuple(seed):
    from patmatch.checks import random_ldt

    inst = random_ldt(seed)
    folded = ldt_to_ksum(inst)
    assert [len(s) for s in folded.sets] == [len(s) for s in inst.sets]
    for idx in itertools.product(*(range(len(s)) for s in inst.sets)):
        assert is_zero(inst.value(idx)) == is_zero(folded.value(idx))


def test_ldt_needs_k_plus_one_coefficients():
    with pytest.raises(StructuralError):
        LdtInstance(SCALAR, [SCALAR.element(1)] * 3, [[SCALAR.element(1)]] * 3)


# -------------------------------------------------------- complex_to_real

def test_complex_to_real_examples():
    C = Ring("complex")
    flat = complex_to_real(KSumInstance(C, [[C.element(ComplexRational(3, 4))]]))
    assert flat.ring == Ring("vector", 2)
    assert flat.sets[0][0] == Vector((3, 4))

    C2 = Ring("cvector", 2)
    el = C2.element([ComplexRational(1, 2), ComplexRational(3, -1)])
    flat = complex_to_real(KSumInstance(C2, [[el]]))
    assert flat.sets[0][0] == Vector((1, 2, 3, -1))
    assert real_to_complex(flat).sets[0][0] == el


def test_complex_to_real_preserves_solutions():
    C = Ring("complex")
    inst = KSumInstance(C, [[C.element(ComplexRational(1, 2)), C.element(ComplexRational(0, 1))],
                            [C.element(ComplexRational(-1, -2))]])
    flat = complex_to_real(inst)
    for idx in itertools.product(range(2), range(1)):
        assert is_zero(inst.value(idx)) == is_zero(flat.value(idx))


def test_complex_to_real_rejects_real_rings():
    with pytest.raises(StructuralError):
        complex_to_real(scalars([1], [2]))


# ------------------------------------------------------------- projection

def test_draw_projection():
    v = draw_projection(1, 5)
    assert len(v.v) == 1 and 1 <= v.v[0] <= 2**62
    assert draw_projection(2, 17) == draw_projection(2, 17)
    assert draw_projection(2, 17).v != draw_projection(2, 18).v
    assert all(c.denominator == 1 and c >= 1 for c in draw_projection(6, 3).v)


def test_projection_keeps_true_solution():
    inst = KSumInstance(V2, [[V2.element((1, -1))], [V2.element((-1, 1))]])
    proj = project_instance(inst, ProjectionVector((Fraction(1), Fraction(1))))
    assert values(proj) == [[0], [0]]


def test_projection_false_positive_and_verification():
    inst = KSumInstance(V2, [[V2.element((1, 0))], [V2.element((0, -1))]])
    proj = project_instance(inst, ProjectionVector((Fraction(1), Fraction(1))))
    assert values(proj) == [[1], [-1]]
    assert is_zero(proj.value((0, 0)))
    assert inst.value((0, 0)) == V2.element((1, -1))
    assert not verify_tuple(inst, SolutionTuple((0, 0), ()))


def test_projection_equal_coordinates_is_scaled_coordinate_sum():
    inst = KSumInstance(V2, [[V2.element((2, 5)), V2.element((-1, 1))]])
    proj = project_instance(inst, ProjectionVector((Fraction(3), Fraction(3))))
    assert values(proj) == [[21, 0]]


def test_projection_arity_mismatch():
    with pytest.raises(StructuralError):
        project_instance(KSumInstance(V2, [[V2.element((1, 1))]]),
                         ProjectionVector((Fraction(1),) * 3))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
                         min_size=1, max_size=4), min_size=2, max_size=3),
       st.integers(0, 2**32))
def test_projection_completeness(raw, seed):
    inst = KSumInstance(V2, [[V2.element(p) for p in s] for s in raw])
    proj = project_instance(inst, draw_projection(2, seed))
    for idx in itertools.product(*(range(len(s)) for s in raw)):
        if is_zero(inst.value(idx)):
            assert is_zero(proj.value(idx))


# ------------------------------------------------------------ verify_tuple

def test_verify_tuple():
    inst = scalars([1, 2], [3, 5], [-4])
    assert verify_tuple(inst, SolutionTuple((0, 0, 0), ()))
    assert not verify_tuple(inst, (1, 0, 0))
    assert not verify_tuple(inst, (5, 0, 0))
    empty = scalars([1, 2], [3], [4])
    assert not any(verify_tuple(empty, idx) for idx in itertools.product(range(2), [0], [0]))


# ---------------------------------------------------------------- solvers

def test_bruteforce_examples():
    inst = scalars([-5, 1, 4], [-5, 1, 4], [-5, 1, 4])
    sol = solve_bruteforce(inst)
    assert sol.indices == (0, 1, 2)
    assert sorted(a.value for a in sol.witness) == [-5, 1, 4]
    assert solve_bruteforce(scalars([1, 2, 3], [1, 2, 3], [1, 2, 3])) is None
    sols = solve_bruteforce(scalars([0], [0], [0]), "enumerate")
    assert [s.indices for s in sols] == [(0, 0, 0)]


def test_bruteforce_enumerates_in_lexicographic_order():
    inst = scalars([1, -1], [1, -1], [0, 0])
    got = [s.indices for s in solve_bruteforce(inst, "enumerate")]
    assert got == sorted(got) and len(got) == 4


def test_bruteforce_distinct_filter():
    inst = scalars([0, 1], [0, -1], [0])
    got = [s.indices for s in solve_bruteforce(inst, "enumerate",
                                               distinct_filter=lambda idx: idx[0] != 0)]
    assert got == [(1, 1, 0)]


def test_bruteforce_budget(monkeypatch):
    monkeypatch.setenv("PATMATCH_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        solve_bruteforce(scalars(range(5), range(5), range(5)))


def test_3sum_examples():
    sol = solve_3sum_quadratic(scalars([1, 2], [3, 5], [-4]))
    assert sol.indices == (0, 0, 0)
    assert [a.value for a in sol.witness] == [1, 3, -4]
    assert solve_3sum_quadratic(scalars([1, 2], [3], [4, 9])) is None
    assert solve_3sum_quadratic(scalars([0, 0], [0], [0])).indices == (0, 0, 0)


def test_3sum_rejects_wrong_shape():
    with pytest.raises(StructuralError):
        solve_3sum_quadratic(scalars([1], [2]))
    with pytest.raises(StructuralError):
        solve_3sum_quadratic(KSumInstance(V2, [[V2.element((0, 0))]] * 3))


def test_3sum_float_backend():
    inst = scalars([Fraction(1, 10)], [Fraction(2, 10)], [Fraction(-3, 10)])
    assert solve_3sum_quadratic(inst, policy=FloatBackendPolicy(1e-12)) is not None
    assert solve_3sum_quadratic(scalars([1], [2], [4]), policy=FloatBackendPolicy(1e-9)) is None


def test_mitm_example():
    inst = scalars(*[[1, -1]] * 4)
    sol = solve_mitm(inst)
    assert is_zero(inst.value(sol.indices))
    assert sol.indices == solve_bruteforce(inst).indices == (0, 0, 1, 1)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_mitm_agrees_with_bruteforce(k):
    rng = random.Random(k)
    for trial in range(1000 if k == 5 else 200):
        n = rng.randint(1, 4)
        inst = scalars(*[[rng.randint(-6, 6) for _ in range(n)] for _ in range(k)])
        brute = solve_bruteforce(inst, "enumerate")
        mitm = solve_mitm(inst, "enumerate")
        assert [s.indices for s in mitm] == [s.indices for s in brute]
        first = solve_mitm(inst)
        assert (first is None) == (not brute)
        if brute:
            assert first.indices == brute[0].indices


def test_mitm_on_vectors():
    inst = KSumInstance(V2, [[V2.element((1, 0)), V2.element((0, 1))],
                             [V2.element((0, -1))], [V2.element((0, 0))]])
    assert [s.indices for s in solve_mitm(inst, "enumerate")] == [(1, 0, 0)]


def test_mitm_counter_grows_quadratically_for_k4():
    counts = []
    for n in (50, 100, 200):
        stats = SolverStats()
        rng = random.Random(n)
        inst = scalars(*[[rng.randint(-2**60, 2**60) for _ in range(n)] for _ in range(4)])
        solve_mitm(inst, "enumerate", stats=stats)
        counts.append(stats.partial_sums)
    assert counts == [2 * 50**2, 2 * 100**2, 2 * 200**2]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6),
       st.lists(st.integers(-5, 5), min_size=1, max_size=6),
       st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_three_solvers_agree(a, b, c):
    inst = scalars(a, b, c)
    brute = [s.indices for s in solve_bruteforce(inst, "enumerate")]
    assert [s.indices for s in solve_mitm(inst, "enumerate")] == brute
    assert [s.indices for s in solve_3sum_quadratic(inst, "enumerate")] == brute
    d = solve_3sum_quadratic(inst)
    assert (d.indices if d else None) == (brute[0] if brute else None)


# --------------------------------------------------------------- pipeline

@pytest.mark.parametrize("strategy", ["auto", "bruteforce", "brute", "mitm"])
def test_solve_matches_bruteforce_on_random_ldt(strategy):
    from patmatch.checks import random_ldt

    for seed in range(120):
        inst = random_ldt(seed)
        truth = [s.indices for s in solve_bruteforce(ldt_to_ksum(inst), "enumerate")]
        out = solve(inst, strategy, seed, "enumerate")
        assert [s.indices for s in out.solutions] == truth
        dec = solve(inst, strategy, seed)
        assert dec.found == bool(truth)
        if dec.found:
            assert verify_tuple(inst, dec.solution)


def test_solve_quad3sum_strategy():
    inst = LdtInstance.from_ksum(scalars([1, 2], [3, 5], [-4]))
    assert solve(inst, "quad3sum").solution.indices == (0, 0, 0)
    with pytest.raises(StructuralError):
        solve(LdtInstance.from_ksum(scalars([1], [2], [3], [4])), "quad3sum")


def test_solve_no_solution_regardless_of_projection():
    inst = KSumInstance(V2, [[V2.element((1, 2))], [V2.element((3, 4))], [V2.element((0, 1))]])
    for seed in range(20):
        assert not solve(inst, rng_seed=seed).found


def test_solve_rejects_then_recovers_from_false_positive():
    from patmatch.checks import adversarial_instance

    inst = adversarial_instance(seed=11, poisoned=1, planted=True)
    out = solve(inst, rng_seed=11)
    assert out.false_positives == 1 and out.attempts == 2 and not out.fallback
    assert out.found and verify_tuple(inst, out.solution)


def test_solve_falls_back_after_retry_cap():
    from patmatch.checks import adversarial_instance

    inst = adversarial_instance(seed=4, poisoned=3)
    out = solve(inst, rng_seed=4, retries=3)
    assert out.false_positives == 3 and out.fallback and not out.found
