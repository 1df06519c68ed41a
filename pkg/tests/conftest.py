"""Shared test helpers: cached fixture runs, reification lookup, random data."""

from __future__ import annotations

import random

import pytest

from normgraph.cli import PipelineResult, run_pipeline
from normgraph.model import (
    BlankNode, Graph, Iri, Literal, RDF_OBJECT, RDF_PREDICATE,
    RDF_SUBJECT, RDF_TYPE, Term, Triple,
)
from normgraph.ontology import FIXTURES, fixture

_PIPELINE_CACHE: dict[str, PipelineResult] = {}


def run_fixture(name: str) -> PipelineResult:
    """Run one fixture's pipeline with its declared layers (cached)."""
    if name not in _PIPELINE_CACHE:
        info = FIXTURES[name]
        data, user_rules, _ = fixture(name)
        _PIPELINE_CACHE[name] = run_pipeline([data, user_rules], set(info.layers))
    return _PIPELINE_CACHE[name]


def reified_nodes(g: Graph, s: Term | None = None, p: Term | None = None,
                  o: Term | None = None, classes: tuple = ()) -> list[Term]:
    """Nodes reifying (s, p, o) that carry all the given truth classes."""
    candidates = None
    for pred, val in ((RDF_SUBJECT, s), (RDF_PREDICATE, p), (RDF_OBJECT, o)):
        if val is None:
            continue
        nodes = {t.subject for t in g.match_iter(p=pred, o=val)}
        candidates = nodes if candidates is None else candidates & nodes
    if candidates is None:
        candidates = {t.subject for t in g.match_iter(p=RDF_SUBJECT)}
    out = []
    for node in candidates:
        if all(Triple(node, RDF_TYPE, c) in g for c in classes):
            out.append(node)
    return out


def has_reified(g: Graph, s: Term, p: Term, o: Term, classes: tuple) -> bool:
    return bool(reified_nodes(g, s, p, o, classes))


def soa(local: str) -> Iri:
    from normgraph.model import SOA_NS
    return Iri(SOA_NS + local)


def random_graph(rng: random.Random, max_triples: int = 12,
                 with_blanks: bool = True, with_literals: bool = True) -> Graph:
    iris = [Iri(f"https://example.org/n{i}") for i in range(6)]
    iris += [soa(f"thing{i}") for i in range(3)]
    preds = [Iri(f"https://example.org/p{i}") for i in range(4)]
    blanks = [BlankNode(f"parse:x{i}") for i in range(3)]
    literals = [Literal("plain"), Literal('with "quotes"'), Literal("line\nbreak"),
                Literal("tab\tand\\slash")]
    g = Graph()
    for _ in range(rng.randrange(max_triples + 1)):
        spool = iris + (blanks if with_blanks else [])
        opool = iris + (blanks if with_blanks else []) + (literals if with_literals else [])
        g.insert(Triple(rng.choice(spool), rng.choice(preds), rng.choice(opool)))
    return g


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)
