from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from patmatch.errors import FormatError, StructuralError
from patmatch.numeric import (
    ComplexRational,
    Complex,
    FloatBackendPolicy,
    Ring,
    Scalar,
    Vector,
    det,
    format_number,
    is_zero,
    parse_number,
    rank,
    ring_add,
    ring_mul,
)

rationals = st.fractions(max_denominator=10**6).filter(lambda x: abs(x.numerator) < 10**12)
complexes = st.builds(ComplexRational, rationals, rationals)


def test_ring_add_examples():
    assert ring_add(Scalar(Fraction(1, 2)), Scalar(Fraction(1, 3))) == Scalar(Fraction(5, 6))
    assert ring_add(Vector((1, 2)), Vector((-1, -2))) == Vector((0, 0))
    assert ring_add(Complex(ComplexRational(0, 1)), Complex(ComplexRational(0, -1))) == \
        Complex(ComplexRational(0, 0))


def test_ring_mul_examples():
    assert ring_mul(Vector((2, 3)), Vector((4, 5))) == Vector((8, 15))
    i = Complex(ComplexRational(0, 1))
    assert ring_mul(i, i) == Complex(ComplexRational(-1, 0))
    x = Scalar(Fraction(7, 3))
    assert ring_mul(x, Ring("scalar").one()) == x


@pytest.mark.parametrize("a, b", [
    (Scalar(1), Vector((1,))),
    (Vector((1, 2)), Vector((1, 2, 3))),
    (Complex(ComplexRational(1)), Scalar(1)),
    (Vector((1,)), Vector((ComplexRational(1),))),
])
def test_mismatch_is_structural_error(a, b):
    with pytest.raises(StructuralError):
        ring_add(a, b)
    with pytest.raises(StructuralError):
        ring_mul(a, b)


def test_is_zero():
    assert is_zero(Vector((0, 0)))
    assert not is_zero(Scalar(Fraction(1, 10**40)))
    assert is_zero(Scalar(Fraction("1e-12")), FloatBackendPolicy(1e-9))
    assert not is_zero(Scalar(Fraction("1e-12")), FloatBackendPolicy(0.0))
    assert is_zero(Scalar(0), FloatBackendPolicy(0.0))


@pytest.mark.parametrize("text, value", [
    ("12", Fraction(12)),
    ("-3.25", Fraction(-13, 4)),
    ("+0.1", Fraction(1, 10)),
    ("6/4", Fraction(3, 2)),
    ("-1/3", Fraction(-1, 3)),
    (7, Fraction(7)),
])
def test_parse_number(text, value):
    assert parse_number(text) == value


@pytest.mark.parametrize("bad", ["1e5", "1/0", "abc", "1.", ".5", "1/-2", 0.5, None, True])
def test_parse_number_rejects(bad):
    with pytest.raises(FormatError):
        parse_number(bad)


def test_format_roundtrip():
    for x in (Fraction(0), Fraction(-7), Fraction(22, 7), Fraction(-1, 3)):
        assert parse_number(format_number(x)) == x


@given(rationals, rationals)
def test_rational_add_sub_exact(a, b):
    assert (a + b) - b == a


@given(rationals, rationals)
def test_canonical_form(a, b):
    # equal values have identical representations and hashes
    c = (a * b + a) - a * b
    assert c == a and hash(c) == hash(a)
    assert (c.numerator, c.denominator) == (a.numerator, a.denominator)


@given(complexes, complexes, complexes)
def test_complex_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == ComplexRational(0)
    assert (a * b).re == a.re * b.re - a.im * b.im
    if a:
        assert a * (ComplexRational(1) / a) == ComplexRational(1)


vectors3 = st.lists(rationals, min_size=3, max_size=3).map(lambda xs: Vector(tuple(xs)))


@given(vectors3, vectors3, vectors3)
def test_hadamard_ring_axioms(u, v, w):
    one = Ring("vector", 3).one()
    assert u * v == v * u
    assert (u * v) * w == u * (v * w)
    assert u * (v + w) == u * v + u * w
    assert u * one == u
    assert all((u * v).items[i] == u.items[i] * v.items[i] for i in range(3))


def test_ring_identities():
    r = Ring("cvector", 2)
    x = r.element([ComplexRational(1, 2), ComplexRational(-3, 1)])
    assert x + r.zero() == x
    assert x * r.one() == x


def test_det_and_rank():
    assert det([[2, 0], [0, 3]]) == 6
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[1, 2], [2, 4]]) == 0
    assert det([[Fraction(1, 2), 1, 0], [0, 1, 1], [1, 0, 1]]) == Fraction(3, 2)
    assert rank([[1, 2, 1], [2, 4, 2], [0, 1, 1]]) == 2
    assert rank([[0, 0], [0, 0]]) == 0
