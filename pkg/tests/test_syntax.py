from hypothesis import given
from hypothesis import strategies as st

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
    concept_text,
    inv,
    nnf,
    subconcepts,
)

names = st.sampled_from(["A", "B", "C"])
roles = st.builds(Role, st.sampled_from(["r", "s"]), st.booleans())


def concepts(depth=3):
    base = st.one_of(
        st.just(TOP),
        st.just(BOTTOM),
        st.builds(Name, names),
        st.builds(AtLeast, st.integers(0, 3), roles),
        st.builds(AtMost, st.integers(0, 3), roles),
    )
    return st.recursive(
        base,
        lambda inner: st.one_of(
            st.builds(Not, inner),
            st.builds(And, inner, inner),
            st.builds(Or, inner, inner),
            st.builds(Exists, roles, inner),
            st.builds(Forall, roles, inner),
        ),
        max_leaves=8,
    )


def test_inv_involution():
    r = Role("r")
    assert inv(inv(r)) == r
    assert inv(r).inverted


def _negations_atomic(c):
    for d in subconcepts(c):
        if isinstance(d, Not) and not isinstance(d.arg, Name):
            return False
    return True


@given(concepts())
def test_nnf_pushes_negation_to_names(c):
    assert _negations_atomic(nnf(c))


@given(concepts())
def test_nnf_idempotent(c):
    n = nnf(c)
    assert nnf(n) == n


def test_nnf_number_restrictions():
    r = Role("r")
    assert nnf(Not(AtMost(2, r))) == AtLeast(3, r)
    assert nnf(Not(AtLeast(3, r))) == AtMost(2, r)
    assert nnf(Not(AtLeast(0, r))) is BOTTOM
    assert nnf(Not(TOP)) is BOTTOM
    assert nnf(Not(BOTTOM)) is TOP


def test_nnf_de_morgan():
    a, b = Name("A"), Name("B")
    assert nnf(Not(And(a, b))) == Or(Not(a), Not(b))
    assert nnf(Not(Exists(Role("r"), a))) == Forall(Role("r"), Not(a))


def test_concept_text_examples():
    r = Role("r", inverted=True)
    c = And(Exists(r, Name("A")), Not(Name("B")))
    assert concept_text(c) == "(some r-.A and not B)"
    assert str(AtLeast(2, Role("s"))) == ">= 2 s"


@given(concepts())
def test_subconcepts_contains_self(c):
    assert c in set(subconcepts(c))
