"""RDF-style terms, triples, and an indexed in-memory graph.

The data model is deliberately small: IRIs, blank nodes, and plain literals.
No datatypes, no language tags, no named graphs. Graphs are sets of triples
with subject/predicate/object indexes, plus blank-node-isomorphism comparison
so that derived graphs containing anonymous individuals can be checked against
expected ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value or any(c.isspace() for c in self.value):
            raise ValueError(f"invalid IRI: {self.value!r}")


@dataclass(frozen=True)
class BlankNode:
    # Labels carry a generation-source prefix ("parse:", "skolem:") so the
    # origin of an anonymous individual stays inspectable. Equality is label
    # equality.
    label: str


@dataclass(frozen=True)
class Literal:
    # Plain literal; equality is lexical-form equality.
    value: str


Term = Iri | BlankNode | Literal

# Deterministic total order over terms: Iri < BlankNode < Literal, then by
# the underlying string. Used wherever output must be reproducible.
_KIND_RANK = {Iri: 0, BlankNode: 1, Literal: 2}


def term_key(t: Term) -> tuple[int, str]:
    if isinstance(t, Iri):
        return (0, t.value)
    if isinstance(t, BlankNode):
        return (1, t.label)
    return (2, t.value)


def render_term(t: Term) -> str:
    """Canonical prefix-independent rendering, for sort keys and hashes."""
    if isinstance(t, Iri):
        return f"<{t.value}>"
    if isinstance(t, BlankNode):
        return f"_:{t.label}"
    escaped = t.value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if not isinstance(self.predicate, Iri):
            raise ValueError(f"triple predicate must be an IRI, got {self.predicate!r}")
        if isinstance(self.subject, Literal):
            raise ValueError("triple subject cannot be a literal")

    def key(self) -> tuple:
        return (term_key(self.subject), term_key(self.predicate), term_key(self.object))


class Graph:
    """A set of triples with per-position indexes and a prefix map."""

    def __init__(self, triples: Iterable[Triple] = (), prefix_map: Optional[dict[str, str]] = None):
        self._triples: set[Triple] = set()
        self._by_s: dict[Term, set[Triple]] = {}
        self._by_p: dict[Term, set[Triple]] = {}
        self._by_o: dict[Term, set[Triple]] = {}
        self.prefix_map: dict[str, str] = dict(prefix_map or {})
        for t in triples:
            self.insert(t)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self._triples, key=Triple.key))

    def triples(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    def insert(self, t: Triple) -> bool:
        """Add a triple; returns True iff it was not already present."""
        if t in self._triples:
            return False
        self._triples.add(t)
        self._by_s.setdefault(t.subject, set()).add(t)
        self._by_p.setdefault(t.predicate, set()).add(t)
        self._by_o.setdefault(t.object, set()).add(t)
        return True

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.insert(t))

    def copy(self) -> "Graph":
        return Graph(self._triples, self.prefix_map)

    def match_iter(self, s: Optional[Term] = None, p: Optional[Term] = None,
                   o: Optional[Term] = None) -> Iterator[Triple]:
        """Unordered match, driven by the most selective available index."""
        pools = []
        if s is not None:
            pools.append(self._by_s.get(s, set()))
        if p is not None:
            pools.append(self._by_p.get(p, set()))
        if o is not None:
            pools.append(self._by_o.get(o, set()))
        if not pools:
            return iter(self._triples)
        base = min(pools, key=len)
        return (t for t in base
                if (s is None or t.subject == s)
                and (p is None or t.predicate == p)
                and (o is None or t.object == o))

    def match(self, s: Optional[Term] = None, p: Optional[Term] = None,
              o: Optional[Term] = None) -> list[Triple]:
        return sorted(self.match_iter(s, p, o), key=Triple.key)

    def subject_pool(self, t: Term) -> int:
        return len(self._by_s.get(t, ()))

    def predicate_pool(self, t: Term) -> int:
        return len(self._by_p.get(t, ()))

    def object_pool(self, t: Term) -> int:
        return len(self._by_o.get(t, ()))

    def check_indexes(self) -> bool:
        """Internal consistency: every index agrees with the triple set."""
        from itertools import chain
        indexed = set(chain.from_iterable(self._by_s.values()))
        if indexed != self._triples:
            return False
        for t in self._triples:
            if t not in self._by_s.get(t.subject, set()):
                return False
            if t not in self._by_p.get(t.predicate, set()):
                return False
            if t not in self._by_o.get(t.object, set()):
                return False
        return True

    def terms(self) -> set[Term]:
        out: set[Term] = set()
        for t in self._triples:
            out.add(t.subject)
            out.add(t.predicate)
            out.add(t.object)
        return out

    def blank_nodes(self) -> set[BlankNode]:
        return {t for t in self.terms() if isinstance(t, BlankNode)}


def graph_union(*graphs: Graph) -> Graph:
    out = Graph()
    for g in graphs:
        out.update(g.triples())
        for k, v in g.prefix_map.items():
            out.prefix_map.setdefault(k, v)
    return out


def graph_difference(g1: Graph, g2: Graph) -> Graph:
    out = Graph(prefix_map=g1.prefix_map)
    out.update(g1.triples() - g2.triples())
    return out


def _ground_part(g: Graph) -> set[Triple]:
    return {t for t in g.triples()
            if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)}


def _signature(g: Graph, b: BlankNode) -> tuple:
    """Degree signature used to prune the bijection search."""
    out_edges = sorted((term_key(t.predicate),
                        term_key(t.object) if not isinstance(t.object, BlankNode) else (1, "*"))
                       for t in g.match_iter(s=b))
    in_edges = sorted((term_key(t.predicate),
                       term_key(t.subject) if not isinstance(t.subject, BlankNode) else (1, "*"))
                      for t in g.match_iter(o=b))
    return (tuple(out_edges), tuple(in_edges))


def _map_triple(t: Triple, mapping: dict[BlankNode, BlankNode]) -> Triple:
    s = mapping.get(t.subject, t.subject) if isinstance(t.subject, BlankNode) else t.subject
    o = mapping.get(t.object, t.object) if isinstance(t.object, BlankNode) else t.object
    return Triple(s, t.predicate, o)


def _extend_mapping(sub: Graph, sup: Graph, blanks: list[BlankNode],
                    mapping: dict[BlankNode, BlankNode], used: set[BlankNode],
                    bijective: bool) -> bool:
    if not blanks:
        return all(_map_triple(t, mapping) in sup for t in sub.triples())
    b = blanks[0]
    sig = _signature(sub, b)
    for cand in sorted(sup.blank_nodes(), key=term_key):
        if cand in used:
            continue
        if bijective and _signature(sup, cand) != sig:
            continue
        mapping[b] = cand
        used.add(cand)
        # Check only triples whose blanks are all mapped so far.
        ok = True
        for t in sub.match_iter(s=b):
            mt_obj = t.object
            if isinstance(mt_obj, BlankNode) and mt_obj not in mapping:
                continue
            if _map_triple(t, mapping) not in sup:
                ok = False
                break
        if ok:
            for t in sub.match_iter(o=b):
                mt_sub = t.subject
                if isinstance(mt_sub, BlankNode) and mt_sub not in mapping:
                    continue
                if _map_triple(t, mapping) not in sup:
                    ok = False
                    break
        if ok and _extend_mapping(sub, sup, blanks[1:], mapping, used, bijective):
            return True
        del mapping[b]
        used.discard(cand)
    return False


def isomorphic(g1: Graph, g2: Graph) -> bool:
    """True iff a bijection over blank nodes maps g1's triples onto g2's."""
    if len(g1) != len(g2):
        return False
    if _ground_part(g1) != _ground_part(g2):
        return False
    b1, b2 = g1.blank_nodes(), g2.blank_nodes()
    if len(b1) != len(b2):
        return False
    ordered = sorted(b1, key=lambda b: (_signature(g1, b), term_key(b)))
    return _extend_mapping(g1, g2, ordered, {}, set(), bijective=True)


def contains_isomorphic(sub: Graph, sup: Graph) -> bool:
    """True iff sub embeds into sup: ground triples are contained directly and
    sub's blank nodes map injectively onto sup's so every triple lands in sup."""
    if not _ground_part(sub) <= sup.triples():
        return False
    ordered = sorted(sub.blank_nodes(), key=term_key)
    if not ordered:
        return True
    return _extend_mapping(sub, sup, ordered, {}, set(), bijective=False)


# --- Well-known vocabulary -------------------------------------------------

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
ONT_NS = "https://w3id.org/ontology/conflict-tolerantdeontictraditionalscheme#"
SOA_NS = ONT_NS + "soa"

DEFAULT_PREFIXES: dict[str, str] = {
    "": ONT_NS,
    "soa": SOA_NS,
    "rdf": RDF_NS,
    "rdfs": RDFS_NS,
}


def _iri(ns: str, local: str) -> Iri:
    return Iri(ns + local)


RDF_TYPE = _iri(RDF_NS, "type")
RDF_SUBJECT = _iri(RDF_NS, "subject")
RDF_PREDICATE = _iri(RDF_NS, "predicate")
RDF_OBJECT = _iri(RDF_NS, "object")
RDF_STATEMENT = _iri(RDF_NS, "Statement")
RDF_PROPERTY = _iri(RDF_NS, "Property")
RDFS_CLASS = _iri(RDFS_NS, "Class")
RDFS_SUBCLASSOF = _iri(RDFS_NS, "subClassOf")
RDFS_DOMAIN = _iri(RDFS_NS, "domain")
RDFS_RANGE = _iri(RDFS_NS, "range")

STATEMENT = _iri(ONT_NS, "statement")
TRUE = _iri(ONT_NS, "true")
FALSE = _iri(ONT_NS, "false")
HOLD = _iri(ONT_NS, "hold")
NECESSARY = _iri(ONT_NS, "necessary")
POSSIBLE = _iri(ONT_NS, "possible")
EVENTUALITY = _iri(ONT_NS, "Eventuality")
MODALITY = _iri(ONT_NS, "Modality")
REXIST = _iri(ONT_NS, "Rexist")
DEONTIC_MODALITY = _iri(ONT_NS, "DeonticModality")
OBLIGATORY = _iri(ONT_NS, "Obligatory")
PERMITTED = _iri(ONT_NS, "Permitted")
OPTIONAL = _iri(ONT_NS, "Optional")
THEMATIC_ROLE = _iri(ONT_NS, "ThematicRole")
NOT = _iri(ONT_NS, "not")
AND1 = _iri(ONT_NS, "and1")
AND2 = _iri(ONT_NS, "and2")
OR1 = _iri(ONT_NS, "or1")
OR2 = _iri(ONT_NS, "or2")
DISJUNCTION = _iri(ONT_NS, "disjunction")
IS_IN_CONTRADICTION_WITH = _iri(ONT_NS, "is-in-contradiction-with")
IS_IN_CONFLICT_WITH = _iri(ONT_NS, "is-in-conflict-with")
IS_COMPLIED_WITH_BY = _iri(ONT_NS, "is-complied-with-by")
IS_VIOLATED_BY = _iri(ONT_NS, "is-violated-by")
IS_NECESSARILY_VIOLATED_BY = _iri(ONT_NS, "is-necessarily-violated-by")
INFERENCE_RULE = _iri(ONT_NS, "InferenceRule")
HAS_SPARQL_CODE = _iri(ONT_NS, "has-sparql-code")
