import pytest

from fshin.parser import parse_kb
from fshin.services import consistency
from fshin.tableau import ResourceLimit, audit_properties, extract_model
from fshin.oracle import satisfies_kb


def run(text, mode="auto", budget=10**6):
    return consistency(parse_kb(text), mode, budget)


def test_trivial_consistent():
    r = run("assert a : A >= 0.6.")
    assert r.consistent
    assert audit_properties(r.forest) == []


def test_conjugated_pair_clash():
    r = run("assert a : A >= 0.6.\nassert a : A < 0.5.")
    assert not r.consistent


def test_bottom_and_top_bounds():
    assert not run("assert a : bottom > 0.").consistent
    assert not run("assert a : top < 1.").consistent
    assert run("assert a : bottom <= 0.").consistent
    assert run("assert a : top >= 1.").consistent


def test_negation_rule():
    r = run("assert a : not A >= 0.8.\nassert a : A >= 0.3.")
    assert not r.consistent


def test_disjunction_branches():
    r = run("assert a : A or B >= 0.6.\nassert a : A < 0.6.\nassert a : B < 0.6.")
    assert not r.consistent
    r = run("assert a : A or B >= 0.6.\nassert a : A < 0.6.")
    assert r.consistent


def test_exists_forall_interaction():
    r = run("assert a : some r.A >= 0.7.\nassert a : all r.(not A) >= 0.7.")
    assert not r.consistent
    # at 0.3 the universal is weak enough to coexist
    r = run("assert a : some r.A >= 0.7.\nassert a : all r.(not A) >= 0.3.")
    assert r.consistent


def test_role_assertion_propagation():
    r = run(
        "assert (a,b): r >= 0.8.\n"
        "assert a : all r.C >= 0.9.\n"
        "assert b : C < 0.5.\n"
    )
    assert not r.consistent


def test_inverse_role_propagation():
    r = run(
        "assert (a,b): r >= 0.8.\n"
        "assert b : all r-.C >= 0.9.\n"
        "assert a : C < 0.5.\n"
    )
    assert not r.consistent


def test_edge_clash_via_inverse():
    r = run("assert (a,b): r >= 0.8.\nassert (b,a): r- < 0.7.")
    assert not r.consistent


def test_transitive_propagation():
    r = run(
        "trans r.\n"
        "assert (a,b): r >= 0.9.\n"
        "assert (b,c): r >= 0.9.\n"
        "assert a : all r.C >= 0.8.\n"
        "assert c : C < 0.5.\n"
    )
    assert not r.consistent
    # without transitivity the chain does not reach c
    r = run(
        "assert (a,b): r >= 0.9.\n"
        "assert (b,c): r >= 0.9.\n"
        "assert a : all r.C >= 0.8.\n"
        "assert c : C < 0.5.\n"
    )
    assert r.consistent


def test_blocking_terminates_cycle():
    r = run(
        "define C equiv some r.C.\n"
        "trans r.\n"
        "assert a : C >= 0.7.\n",
    )
    # a cyclic definition is not unfoldable; gci mode handles it
    assert r.prepared.mode == "gci"
    assert r.consistent


def test_si_blocking_infinite_chain():
    r = run(
        "trans r.\n"
        "assert a : some r.(some r.A) >= 0.6.\n"
        "assert a : all r.(some r.A) >= 0.6."
    )
    assert r.consistent
    blocks = [ev for ev in r.trace if ev[0] == "block"]
    assert blocks, "expected the chain to be stopped by blocking"


def test_number_restriction_atleast():
    r = run("assert a : >= 2 s >= 0.8.\nassert a : <= 1 s > 0.3.")
    assert not r.consistent
    r = run("assert a : >= 2 s >= 0.8.\nassert a : <= 1 s <= 0.1.")
    assert r.consistent


def test_atmost_merges_named_successors():
    r = run(
        "assert (a,b): s >= 0.9.\n"
        "assert (a,c): s >= 0.9.\n"
        "assert a : <= 1 s >= 0.8.\n"
    )
    assert r.consistent
    merges = [ev for ev in r.trace if ev[0] in ("merge", "merge-root")]
    assert merges


def test_atmost_distinct_successors_clash():
    r = run(
        "assert (a,b): s >= 0.9.\n"
        "assert (a,c): s >= 0.9.\n"
        "assert a : <= 1 s >= 0.8.\n"
        "distinct b c.\n"
    )
    assert not r.consistent


def test_role_inclusion_propagation():
    r = run(
        "subrole p r.\n"
        "assert (a,b): p >= 0.8.\n"
        "assert a : all r.C >= 0.9.\n"
        "assert b : C < 0.5.\n"
    )
    assert not r.consistent


def test_gci_all_branches_clash():
    r = run(
        "implies >= 1 R C.\n"
        "assert (a, b): R >= 0.6.\n"
        "assert a : C < 0.6.\n"
    )
    assert r.prepared.mode == "gci"
    assert not r.consistent


def test_budget_exceeded():
    with pytest.raises(ResourceLimit):
        run(
            "assert a : some r.(some r.A) >= 0.6.\n"
            "assert a : all r.(some r.A) >= 0.6.",
            budget=5,
        )


def test_dump_format():
    r = run("assert (a,b): r >= 0.8.\nassert a : A >= 0.75.")
    text = r.forest.dump()
    lines = text.splitlines()
    assert lines[0] == "node 0 root {⟨A,>=,3/4⟩}"
    assert lines[1] == "node 1 root {}"
    assert lines[2] == "edge 0 -> 1 {⟨r,>=,4/5⟩}"


def test_extracted_model_satisfies():
    text = (
        "trans r.\n"
        "assert (a,b): r >= 0.8.\n"
        "assert a : some r.A >= 0.7.\n"
        "assert b : all r-.B >= 0.6.\n"
    )
    kb = parse_kb(text)
    res = consistency(kb)
    assert res.consistent
    model = extract_model(res.forest)
    assert satisfies_kb(model, kb)


def test_audit_on_clash_free_forests():
    samples = [
        "assert a : A or B >= 0.6.",
        "assert a : some r.(A and B) >= 0.7.\nassert a : all r.A >= 0.2.",
        "trans r.\nassert (a,b): r >= 0.9.\nassert a : all r.C >= 0.3.",
    ]
    for text in samples:
        res = run(text)
        assert res.consistent
        assert audit_properties(res.forest) == [], text
