from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fshin.degrees import Ineq, SignedBound
from fshin.kb import ABox, ConceptAssertion, FuzzyKB, RBox, RoleAssertion, TBox
from fshin.parser import (
    ParseError,
    parse_concept,
    parse_kb,
    parse_query,
    serialize_kb,
)
from fshin.syntax import (
    And,
    AtLeast,
    AtMost,
    BOTTOM,
    Exists,
    Forall,
    Name,
    Not,
    Or,
    Role,
    TOP,
)


def test_role_assertion_example():
    kb = parse_kb("assert (o1,o2):isPartOf >= 0.8.")
    [ra] = kb.abox.role_assertions
    assert ra.subject == "o1" and ra.object == "o2"
    assert ra.role == Role("isPartOf")
    assert ra.bound == SignedBound(Ineq.GE, Fraction(4, 5))


def test_bottom_assertion_parses():
    kb = parse_kb("assert a : bottom > 0.")
    [ca] = kb.abox.concept_assertions
    assert ca.concept is BOTTOM


def test_precedence_and_binds_tighter():
    c = parse_concept("A and B or C")
    assert c == Or(And(Name("A"), Name("B")), Name("C"))
    assert parse_concept("not A and B") == And(Not(Name("A")), Name("B"))


def test_quantifier_body_tight():
    c = parse_concept("some r.A and B")
    assert c == And(Exists(Role("r"), Name("A")), Name("B"))
    c = parse_concept("all r-.(A or B)")
    assert c == Forall(Role("r", inverted=True), Or(Name("A"), Name("B")))


def test_number_restrictions():
    assert parse_concept(">= 2 r") == AtLeast(2, Role("r"))
    assert parse_concept("<= 0 s-") == AtMost(0, Role("s", inverted=True))


def test_equals_expands_to_pair():
    kb = parse_kb("assert a : A = 0.5.")
    bounds = [ca.bound for ca in kb.abox.concept_assertions]
    assert bounds == [
        SignedBound(Ineq.GE, Fraction(1, 2)),
        SignedBound(Ineq.LE, Fraction(1, 2)),
    ]


def test_statements():
    kb = parse_kb(
        """
        define C equiv all r.A.
        define D subsumed-by C.
        implies A B.
        trans r.
        subrole r s.
        distinct a b.
        # comment lines vanish
        assert a : top >= 1.
        """
    )
    assert kb.tbox.definitions["C"] == ("equiv", Forall(Role("r"), Name("A")))
    assert kb.tbox.definitions["D"][0] == "sub"
    assert kb.tbox.gcis == [(Name("A"), Name("B"))]
    assert kb.rbox.transitive == {"r"}
    assert (Role("r"), Role("s")) in kb.rbox.inclusions
    assert frozenset({"a", "b"}) in kb.abox.inequalities


def test_errors_carry_spans():
    with pytest.raises(ParseError) as e:
        parse_kb("assert a : A >= 1.5.")
    assert e.value.span is not None
    with pytest.raises(ParseError):
        parse_concept("and A")
    with pytest.raises(ParseError):
        parse_kb("assert a : A >= 0.5")  # missing final dot


def test_parse_query_forms():
    q, b = parse_query("a : A >= 0.5")
    assert q == ("a", Name("A"))
    assert b == SignedBound(Ineq.GE, Fraction(1, 2))
    q, b = parse_query("(a): A and B")
    assert q == ("a", And(Name("A"), Name("B"))) and b is None
    q, b = parse_query("(a,b): r- < 1/3")
    assert q == ("a", "b", Role("r", inverted=True))
    assert b == SignedBound(Ineq.LT, Fraction(1, 3))


def test_degree_rendering_in_serialization():
    kb = FuzzyKB(abox=ABox(concept_assertions=[
        ConceptAssertion("a", Name("A"), SignedBound(Ineq.GE, Fraction(3, 4))),
        ConceptAssertion("a", Name("A"), SignedBound(Ineq.LE, Fraction(1, 3))),
    ]))
    text = serialize_kb(kb)
    assert "0.75" in text and "1/3" in text
    assert serialize_kb(FuzzyKB()) == ""


# --- round-trip property ---

names = st.sampled_from(["A", "B", "Cname"])
inds = st.sampled_from(["a", "b", "c"])
roles = st.builds(Role, st.sampled_from(["r", "s"]), st.booleans())
degs = st.fractions(min_value=0, max_value=1, max_denominator=16)
bounds = st.builds(SignedBound, st.sampled_from(list(Ineq)), degs)

concepts = st.recursive(
    st.one_of(
        st.just(TOP),
        st.just(BOTTOM),
        st.builds(Name, names),
        st.builds(AtLeast, st.integers(0, 3), roles),
        st.builds(AtMost, st.integers(0, 3), roles),
    ),
    lambda inner: st.one_of(
        st.builds(Not, inner),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
        st.builds(Exists, roles, inner),
        st.builds(Forall, roles, inner),
    ),
    max_leaves=6,
)


@st.composite
def kbs(draw):
    defs = {}
    for name in draw(st.sets(st.sampled_from(["D1", "D2"]), max_size=2)):
        defs[name] = (draw(st.sampled_from(["sub", "equiv"])), draw(concepts))
    tbox = TBox(definitions=defs, gcis=draw(st.lists(st.tuples(concepts, concepts), max_size=2)))
    rbox = RBox(
        transitive=draw(st.sets(st.sampled_from(["r", "s"]), max_size=2)),
        inclusions=draw(st.sets(st.tuples(roles, roles), max_size=2)),
    )
    abox = ABox(
        concept_assertions=draw(
            st.lists(st.builds(ConceptAssertion, inds, concepts, bounds), max_size=3)
        ),
        role_assertions=draw(
            st.lists(st.builds(RoleAssertion, inds, inds, roles, bounds), max_size=3)
        ),
        inequalities=draw(
            st.sets(
                st.tuples(inds, inds).map(lambda p: frozenset(p)), max_size=2
            )
        ),
    )
    return FuzzyKB(tbox, rbox, abox)


@given(kbs())
def test_round_trip(kb):
    assert parse_kb(serialize_kb(kb)) == kb
