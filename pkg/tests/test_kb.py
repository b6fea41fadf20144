from fractions import Fraction

import pytest

from fshin.degrees import Ineq, SignedBound
from fshin.kb import (
    ABox,
    ConceptAssertion,
    CyclicTBox,
    FuzzyKB,
    RBox,
    RoleAssertion,
    TBox,
    compute_ell,
    detect_mode,
    expand_concept,
    hierarchy_closure,
    normalize_for_gci,
    unfold,
    validate,
)
from fshin.syntax import And, AtLeast, AtMost, Exists, Name, Not, Role, inv


def bound(op, d):
    return SignedBound(op, Fraction(d))


def test_unfold_expands_chains():
    tbox = TBox(definitions={
        "A": ("equiv", And(Name("B"), Name("P"))),
        "B": ("equiv", Exists(Role("r"), Name("Q"))),
    })
    u = unfold(tbox)
    kind, body = u.definitions["A"]
    assert kind == "equiv"
    assert body == And(Exists(Role("r"), Name("Q")), Name("P"))


def test_unfold_inclusion_gets_fresh_primitive():
    tbox = TBox(definitions={"A": ("sub", Name("B"))})
    u = unfold(tbox)
    _, body = u.definitions["A"]
    assert isinstance(body, And)
    assert body.left == Name("A_prim")
    assert body.right == Name("B")


def test_cyclic_tbox_not_unfoldable():
    tbox = TBox(definitions={"A": ("equiv", Exists(Role("r"), Name("A")))})
    assert not tbox.is_unfoldable()
    with pytest.raises(CyclicTBox):
        unfold(TBox(definitions=tbox.definitions, gcis=[]))


def test_expand_concept_produces_nnf():
    tbox = unfold(TBox(definitions={"A": ("equiv", Not(Name("B")))}))
    out = expand_concept(Not(Name("A")), tbox)
    assert out == Name("B")


def test_hierarchy_closure_reflexive_transitive_inverse():
    r, s, t = Role("r"), Role("s"), Role("t")
    rbox = hierarchy_closure(RBox(inclusions={(r, s), (s, t)}))
    assert rbox.includes(r, t)
    assert rbox.includes(r, r)
    assert rbox.includes(inv(r), inv(t))
    assert not rbox.includes(t, r)
    # closing again changes nothing
    again = hierarchy_closure(rbox)
    assert again.closure == rbox.closure


def test_simple_roles():
    r, s = Role("r"), Role("s")
    rbox = hierarchy_closure(RBox(transitive={"r"}, inclusions={(r, s)}))
    assert not rbox.simple(s)  # transitive sub-role r
    assert rbox.simple(Role("t"))
    assert rbox.is_transitive(inv(r))  # transitivity survives inversion


def test_detect_mode():
    assert detect_mode(FuzzyKB()) == "si"
    kb = FuzzyKB(rbox=RBox(inclusions={(Role("r"), Role("s"))}))
    assert detect_mode(kb) == "shin"
    kb = FuzzyKB(abox=ABox(concept_assertions=[
        ConceptAssertion("a", AtLeast(2, Role("r")), bound(Ineq.GE, "1/2"))
    ]))
    assert detect_mode(kb) == "shin"
    kb = FuzzyKB(tbox=TBox(gcis=[(Name("A"), Name("B"))]))
    assert detect_mode(kb) == "gci"


def test_validate_flags_non_simple_number_restriction():
    r, s = Role("r"), Role("s")
    kb = FuzzyKB(
        rbox=RBox(transitive={"r"}, inclusions={(r, s)}),
        abox=ABox(concept_assertions=[
            ConceptAssertion("a", AtMost(1, s), bound(Ineq.GE, "1/2"))
        ]),
    )
    codes = {d.code for d in validate(kb)}
    assert "non-simple-role-in-number-restriction" in codes


def test_individual_order_first_appearance():
    abox = ABox(
        concept_assertions=[ConceptAssertion("b", Name("A"), bound(Ineq.GE, "1/2"))],
        role_assertions=[RoleAssertion("a", "b", Role("r"), bound(Ineq.GE, "1/2"))],
        inequalities={frozenset({"c", "a"})},
    )
    assert abox.individuals() == ["b", "a", "c"]


def test_compute_ell_halves_min_gap():
    # pool {0, 0.4, 0.5, 0.6, 1}: min gap 0.1
    assert compute_ell([Fraction(2, 5)]) == Fraction(1, 20)
    assert compute_ell([]) == Fraction(1, 4)


def test_normalize_for_gci():
    ell = Fraction(1, 20)
    abox = ABox(
        concept_assertions=[ConceptAssertion("a", Name("C"), bound(Ineq.LT, "3/5"))],
        role_assertions=[RoleAssertion("a", "b", Role("r"), bound(Ineq.GT, "2/5"))],
    )
    out, xa = normalize_for_gci(abox, ell)
    assert out.concept_assertions[0].bound == bound(Ineq.LE, Fraction(11, 20))
    assert out.role_assertions[0].bound == bound(Ineq.GE, Fraction(9, 20))
    expected = {
        Fraction(0), Fraction(9, 20), Fraction(11, 20), Fraction(1, 2), Fraction(1)
    }
    assert expected <= set(xa)
