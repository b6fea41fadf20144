from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from fshin.degrees import (
    HALF,
    INEQ_ORDER,
    Ineq,
    ONE,
    SignedBound,
    ZERO,
    conjugates,
    format_degree,
    impl_kd,
    neg_lukasiewicz,
    negate,
    reflect,
    tconorm_max,
    tnorm_min,
    to_degree,
)

degrees = st.fractions(min_value=0, max_value=1, max_denominator=20)


def test_to_degree_exact():
    assert to_degree("0.75") == Fraction(3, 4)
    assert to_degree("3/4") == Fraction(3, 4)
    assert to_degree(1) == ONE
    assert to_degree(Fraction(1, 3)) == Fraction(1, 3)


def test_format_degree():
    assert format_degree(Fraction(3, 4)) == "0.75"
    assert format_degree(Fraction(1, 3)) == "1/3"
    assert format_degree(ZERO) == "0"
    assert format_degree(ONE) == "1"
    assert format_degree(Fraction(1, 20)) == "0.05"


@given(degrees)
def test_format_round_trip(d):
    assert to_degree(format_degree(d)) == d


@given(degrees)
def test_complement_involution(d):
    assert neg_lukasiewicz(neg_lukasiewicz(d)) == d


@given(degrees, degrees)
def test_de_morgan(a, b):
    assert neg_lukasiewicz(tnorm_min(a, b)) == tconorm_max(
        neg_lukasiewicz(a), neg_lukasiewicz(b)
    )


@given(degrees, degrees)
def test_kd_implication_is_material(a, b):
    assert impl_kd(a, b) == tconorm_max(neg_lukasiewicz(a), b)


@given(degrees)
def test_idempotency(d):
    assert tnorm_min(d, d) == d
    assert tconorm_max(d, d) == d


def test_reflect_negate_involutions():
    for k in Ineq:
        assert reflect(reflect(k)) is k
        assert negate(negate(k)) is k
        # negate flips sign, reflect flips sign, but they differ in strictness
        assert reflect(k).positive != k.positive
        assert negate(k).positive != k.positive
        assert reflect(k).strict == k.strict
        assert negate(k).strict != k.strict


def test_ineq_order_total():
    assert sorted(Ineq, key=INEQ_ORDER.__getitem__) == [
        Ineq.GE,
        Ineq.GT,
        Ineq.LE,
        Ineq.LT,
    ]


def _expected_conjugate(pos, neg):
    if pos.ineq is Ineq.GE and neg.ineq is Ineq.LE:
        return pos.degree > neg.degree
    return pos.degree >= neg.degree


@given(degrees, degrees, st.sampled_from(list(Ineq)), st.sampled_from(list(Ineq)))
def test_conjugation_table(n, m, k1, k2):
    b1, b2 = SignedBound(k1, n), SignedBound(k2, m)
    got = conjugates(b1, b2)
    assert got == conjugates(b2, b1)
    if k1.positive == k2.positive:
        assert not got
    else:
        pos, neg = (b1, b2) if k1.positive else (b2, b1)
        assert got == _expected_conjugate(pos, neg)


def test_conjugation_boundaries():
    ge, gt = SignedBound(Ineq.GE, HALF), SignedBound(Ineq.GT, HALF)
    le, lt = SignedBound(Ineq.LE, HALF), SignedBound(Ineq.LT, HALF)
    assert not conjugates(ge, le)  # x = 1/2 satisfies both
    assert conjugates(ge, lt)
    assert conjugates(gt, le)
    assert conjugates(gt, lt)
