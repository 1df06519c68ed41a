"""Acceptance suite: one test per criterion, one printed pass line each.

Expected structures are checked by containment up to blank-node isomorphism;
finding counts are exact. Each fixture pipeline must finish within a second.
"""

import random
import time

import pytest

from normgraph.cli import run_pipeline
from normgraph.engine import (
    EngineConfig, MaxIterationsExceeded, load_rules, run_fixpoint,
)
from normgraph.model import (
    FALSE, Graph, HOLD, NECESSARY, NOT,
    OBLIGATORY, OPTIONAL, PERMITTED, RDF_TYPE, REXIST, TRUE, Triple,
    contains_isomorphic, graph_union, isomorphic,
)
from normgraph.ontology import FIXTURES, builtin_ruleset, fixture, vocabulary
from normgraph.report import extract_findings
from normgraph.turtle import parse_turtle, serialize_turtle
from conftest import has_reified, random_graph, run_fixture, soa


def _report(name):
    pipe = run_fixture(name)
    return pipe, extract_findings(pipe.result.graph, pipe.result.provenance)


def _expected_contained(name) -> bool:
    _, _, expected = fixture(name)
    pipe = run_fixture(name)
    return expected is not None and contains_isomorphic(expected, pipe.result.graph)


def _ok(number, label):
    print(f"acceptance {number:02d} {label}: PASS")


def test_acceptance_01_john_leaves_contradiction():
    pipe, report = _report("john-leaves-contradiction")
    g = pipe.result.graph
    trues = has_reified(g, soa("elj"), RDF_TYPE, REXIST, (TRUE, HOLD))
    falses = has_reified(g, soa("elj"), RDF_TYPE, REXIST, (FALSE, HOLD))
    assert trues and falses
    assert _expected_contained("john-leaves-contradiction")
    assert report.counts() == {"Contradiction": 1}
    _ok(1, "john-leaves contradiction")


def test_acceptance_02_cash_card_contradictions():
    pipe, report = _report("cash-card-contradiction")
    g = pipe.result.graph
    assert Triple(soa("epjcash"), NOT, soa("epjcard")) in g
    assert Triple(soa("epjcard"), NOT, soa("epjcash")) in g
    assert report.counts()["Contradiction"] == 2
    assert _expected_contained("cash-card-contradiction")
    _ok(2, "cash/card pragmatic contradiction pair")


def test_acceptance_03_disjunctive_syllogism_on_both_levels():
    pipe, _ = _report("or-and-ds")
    g = pipe.result.graph
    assert Triple(soa("eej"), RDF_TYPE, REXIST) in g
    assert Triple(soa("edj"), RDF_TYPE, REXIST) in g
    fired = {r.rule_id for r in pipe.result.trace if r.solutions > 0}
    # eventuality-level path
    assert "ds-rexist" in fired
    # statement-level path: disjunction built, then resolved, then materialized
    assert {"or-to-disjunction", "ds-statement", "hold-true"} <= fired
    _ok(3, "disjunctive syllogism along both paths")


def test_acceptance_04_prohibition_to_obligation_compliance():
    pipe, report = _report("prohibited-not-pay-compliance")
    assert Triple(soa("epj"), RDF_TYPE, OBLIGATORY) in pipe.result.graph
    assert _expected_contained("prohibited-not-pay-compliance")
    assert report.counts() == {"Compliance": 1}
    _ok(4, "prohibited-to-not-pay compliance round trip")


def test_acceptance_05_optional_vs_prohibited_conflict():
    pipe, report = _report("optional-vs-prohibited-conflict")
    g = pipe.result.graph
    assert has_reified(g, soa("elj"), RDF_TYPE, OBLIGATORY, (FALSE, HOLD))
    assert has_reified(g, soa("enlj"), RDF_TYPE, OBLIGATORY, (FALSE, HOLD))
    assert Triple(soa("elj"), RDF_TYPE, PERMITTED) in g
    assert Triple(soa("enlj"), RDF_TYPE, PERMITTED) in g
    assert _expected_contained("optional-vs-prohibited-conflict")
    assert report.counts() == {"Conflict": 1}
    _ok(5, "optional vs prohibited conflict")


def test_acceptance_06_partial_conflict_between_obligations():
    _, report = _report("partial-conflict-obligations")
    assert report.counts().get("Conflict") == 2
    assert report.counts().get("Contradiction") is None
    assert _expected_contained("partial-conflict-obligations")
    _ok(6, "two symmetric partial conflicts, no contradiction")


def test_acceptance_07_building_norms():
    pipe, report = _report("building-norms")
    assert report.counts().get("Conflict", 0) >= 1
    assert _expected_contained("building-norms")
    # the same run without John produces nothing
    data, user_rules, _ = fixture("building-norms")
    without_john = Graph(prefix_map=data.prefix_map)
    for t in data.triples():
        if soa("John") in (t.subject, t.object):
            continue
        without_john.insert(t)
    empty = run_pipeline([without_john, user_rules],
                         set(FIXTURES["building-norms"].layers))
    assert extract_findings(empty.result.graph).findings == []
    _ok(7, "building norms fire for John only")


def test_acceptance_08_smith_and_permitted_variant():
    pipe, _ = _report("smith")
    assert Triple(soa("esd"), RDF_TYPE, OBLIGATORY) in pipe.result.graph
    variant = run_fixture("permitted-smith-non-inference")
    assert Triple(soa("esd"), RDF_TYPE, PERMITTED) not in variant.result.graph
    _ok(8, "obligation disjunctive syllogism, permission non-inference")


def test_acceptance_09_sketty_pipeline_and_obligatory_variant():
    pipe, report = _report("sketty-necessity")
    g = pipe.result.graph
    assert has_reified(g, soa("epsj"), soa("has-instrument"), soa("cash"),
                       (NECESSARY, HOLD))
    assert Triple(soa("epsj"), soa("has-instrument"), soa("cash")) in g
    assert _expected_contained("sketty-necessity")
    assert report.counts() == {"Violation": 1, "NecessaryViolation": 1}
    # switching the payment from really-existing to obligatory turns the
    # violation into a conflict
    data, rules, _ = fixture("sketty-necessity")
    variant = Graph(prefix_map=data.prefix_map)
    for t in data.triples():
        if t == Triple(soa("epsj"), RDF_TYPE, REXIST):
            variant.insert(Triple(soa("epsj"), RDF_TYPE, OBLIGATORY))
        else:
            variant.insert(t)
    flipped = run_pipeline([variant, rules], set(FIXTURES["sketty-necessity"].layers))
    counts = extract_findings(flipped.result.graph).counts()
    assert counts.get("Conflict") == 1
    assert "Violation" not in counts
    _ok(9, "necessity pipeline; obligatory variant flips violation to conflict")


def test_acceptance_10_sketty_card_contradiction():
    pipe, report = _report("sketty-card-contradiction")
    g = pipe.result.graph
    assert _expected_contained("sketty-card-contradiction")
    assert report.counts().get("Contradiction", 0) >= 1
    # the contradiction is over a thematic role value, not over existence
    assert has_reified(g, soa("epscj"), soa("has-instrument"), soa("cash"),
                       (TRUE, HOLD))
    assert any(f.rule_id == "contradiction-thematic" for f in report.findings)
    _ok(10, "necessity-driven thematic contradiction")


def test_acceptance_11_termination_guard():
    data, unguarded, _ = fixture("wife-guard-unguarded")
    with pytest.raises(MaxIterationsExceeded):
        run_fixpoint(data, load_rules(unguarded), EngineConfig(max_iterations=50))
    data, guarded, _ = fixture("wife-guard")
    result = run_fixpoint(data, load_rules(guarded))
    wives = result.graph.match(None, soa("wife-of"), None)
    assert len(wives) == 1
    _ok(11, "unguarded rule diverges, guarded rule converges with one wife")


def test_acceptance_12a_brute_force_equivalence():
    from test_rules import _brute_solutions, _random_case
    from normgraph.rules import evaluate_where

    rnd = random.Random(555001)
    agreements = 0
    for _ in range(200):
        g, gp = _random_case(rnd)
        got = {frozenset((v.name, t) for v, t in b.items())
               for b in evaluate_where(g, gp)}
        assert got == _brute_solutions(g, gp)
        agreements += 1
    assert agreements == 200
    _ok(12, "evaluator agrees with brute-force enumeration on 200 cases")


def test_acceptance_12b_fixture_properties():
    from normgraph.engine import RuleSet

    rnd = random.Random(555002)
    for name, info in FIXTURES.items():
        if info.expects_error:
            continue
        started = time.time()
        pipe = run_fixture(name)
        data, user_rules, _ = fixture(name)
        # monotonicity
        assert pipe.data.triples() <= pipe.result.graph.triples(), name
        # idempotence
        rules = builtin_ruleset(set(info.layers)) + load_rules(
            graph_union(vocabulary(), user_rules))
        again = run_fixpoint(pipe.result.graph, rules)
        assert again.graph.triples() == pipe.result.graph.triples(), name
        # rule-order independence, label-identical
        shuffled = list(rules.entries)
        rnd.shuffle(shuffled)
        permuted = run_fixpoint(graph_union(vocabulary(), data), RuleSet(shuffled))
        assert permuted.graph.triples() == pipe.result.graph.triples(), name
        assert time.time() - started < 1.0, f"{name} exceeded the 1 s budget"
    _ok(12, "monotonicity, idempotence, order independence on every fixture")


def test_acceptance_12c_hexagon_closure():
    rnd = random.Random(555003)
    for case in range(20):
        e = soa(f"acc-ev{case}-{rnd.randrange(10_000)}")
        ne = soa(f"acc-nev{case}-{rnd.randrange(10_000)}")
        data = Graph([Triple(e, RDF_TYPE, OBLIGATORY)])
        data.insert(Triple(e, NOT, ne) if rnd.random() < 0.5 else Triple(ne, NOT, e))
        g = run_fixpoint(graph_union(vocabulary(), data), builtin_ruleset({"dts"})).graph
        assert Triple(e, RDF_TYPE, PERMITTED) in g
        assert has_reified(g, ne, RDF_TYPE, PERMITTED, (FALSE, HOLD))
        assert has_reified(g, ne, RDF_TYPE, OBLIGATORY, (FALSE, HOLD))
        assert has_reified(g, e, RDF_TYPE, OPTIONAL, (FALSE, HOLD))
        assert has_reified(g, ne, RDF_TYPE, OPTIONAL, (FALSE, HOLD))
    _ok(12, "hexagon closure on 20 randomized pairs")


def test_acceptance_12d_turtle_round_trip():
    rnd = random.Random(555004)
    for _ in range(100):
        g = random_graph(rnd)
        assert isomorphic(parse_turtle(serialize_turtle(g)), g)
    _ok(12, "turtle round trip on 100 random graphs")


def test_every_fixture_completes_within_one_second():
    for name, info in FIXTURES.items():
        data, user_rules, _ = fixture(name)
        started = time.time()
        try:
            run_pipeline([data, user_rules], set(info.layers), max_iterations=100)
        except MaxIterationsExceeded:
            assert info.expects_error, name
        assert time.time() - started < 1.0, name
