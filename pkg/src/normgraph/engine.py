"""Fixpoint application of rule sets over a graph.

Scheduling is naive and snapshot-scoped: every iteration evaluates every rule
against the graph as it stood at the start of the iteration, then merges all
produced triples at once. That buys rule-order independence (together with
deterministic skolemization) at the cost of a few extra passes, which the
small graphs this engine targets never notice. Semi-naive evaluation (joining
each rule against the previous iteration's delta) is the natural upgrade if
graphs ever outgrow this.

The engine is conflict-blind by construction: nothing branches on the
abnormality predicates, so contradictions and conflicts accumulate in the
graph like any other triples and never stop a run. Termination comes from
the rules' NOT EXISTS guards; max_iterations is only a backstop against
rules that mint fresh individuals without a guard.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .model import (
    BlankNode, Graph, HAS_SPARQL_CODE, INFERENCE_RULE, Iri, Literal, RDF_TYPE,
    Term, Triple, graph_difference, term_key,
)
from .rules import RuleQuery, RuleSyntaxError, SkolemPolicy, evaluate_where, instantiate, parse_rule


class MissingRuleBody(Exception):
    pass


class MaxIterationsExceeded(Exception):
    def __init__(self, limit: int, last_added: int):
        super().__init__(
            f"no fixpoint after {limit} iterations; "
            f"the last pass still added {last_added} triple(s)")
        self.limit = limit
        self.last_added = last_added


@dataclass(frozen=True)
class RuleEntry:
    rule_id: str
    query: RuleQuery
    layer: str = "user"


class RuleSet:
    """Ordered collection of rules with unique ids."""

    def __init__(self, entries: Iterable[RuleEntry] = ()):
        self.entries: list[RuleEntry] = []
        self._ids: set[str] = set()
        for e in entries:
            self.add(e)

    def add(self, entry: RuleEntry):
        if entry.rule_id in self._ids:
            raise ValueError(f"duplicate rule id {entry.rule_id!r}")
        self._ids.add(entry.rule_id)
        self.entries.append(entry)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def ids(self) -> list[str]:
        return [e.rule_id for e in self.entries]

    def __add__(self, other: "RuleSet") -> "RuleSet":
        return RuleSet([*self.entries, *other.entries])


@dataclass
class EngineConfig:
    max_iterations: int = 100
    trace_enabled: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    rule_id: str
    solutions: int
    added: int


@dataclass
class RunResult:
    graph: Graph
    iterations_used: int
    provenance: dict[Triple, tuple[str, int]]
    trace: list[TraceRecord] = field(default_factory=list)


def _rule_id_for_subject(subject: Term) -> str:
    if isinstance(subject, BlankNode):
        return subject.label
    if isinstance(subject, Iri):
        for sep in ("#", "/"):
            if sep in subject.value:
                local = subject.value.rsplit(sep, 1)[1]
                if local:
                    return local
        return subject.value
    return str(subject)


def load_rules(g: Graph, layer: str = "user") -> RuleSet:
    """One rule per individual typed :InferenceRule carrying a rule body."""
    subjects = sorted({t.subject for t in g.match_iter(p=RDF_TYPE, o=INFERENCE_RULE)},
                      key=term_key)
    out = RuleSet()
    for subject in subjects:
        bodies = [t.object for t in g.match_iter(s=subject, p=HAS_SPARQL_CODE)]
        literals = [b for b in bodies if isinstance(b, Literal)]
        if not literals:
            raise MissingRuleBody(
                f"inference rule {_rule_id_for_subject(subject)} has no rule body")
        rule_id = _rule_id_for_subject(subject)
        try:
            query = parse_rule(rule_id, literals[0].value, g.prefix_map)
        except RuleSyntaxError as err:
            raise RuleSyntaxError(f"{err} (from {_rule_id_for_subject(subject)})") from err
        out.add(RuleEntry(rule_id, query, layer))
    return out


def strip_rules(g: Graph) -> Graph:
    """The data remainder of a graph: everything except rule definitions."""
    subjects = {t.subject for t in g.match_iter(p=RDF_TYPE, o=INFERENCE_RULE)}
    out = Graph(prefix_map=g.prefix_map)
    for t in g.triples():
        if t.subject in subjects and (
                (t.predicate == RDF_TYPE and t.object == INFERENCE_RULE)
                or t.predicate == HAS_SPARQL_CODE):
            continue
        out.insert(t)
    return out


def run_fixpoint(data: Graph, rules: RuleSet, cfg: Optional[EngineConfig] = None) -> RunResult:
    """Apply all rules to a fixpoint; the result graph always contains the input."""
    cfg = cfg or EngineConfig()
    graph = data.copy()
    provenance: dict[Triple, tuple[str, int]] = {}
    trace: list[TraceRecord] = []
    for iteration in range(1, cfg.max_iterations + 1):
        pending: list[Triple] = []
        pending_set: set[Triple] = set()
        for entry in rules:
            solutions = evaluate_where(graph, entry.query.where_clause)
            produced = instantiate(entry.query, solutions, SkolemPolicy(salt=f"i{iteration}"))
            added = 0
            for t in produced:
                if t in graph or t in pending_set:
                    continue
                pending.append(t)
                pending_set.add(t)
                provenance[t] = (entry.rule_id, iteration)
                added += 1
            if cfg.trace_enabled:
                trace.append(TraceRecord(iteration, entry.rule_id, len(solutions), added))
        if not pending:
            return RunResult(graph, iteration, provenance, trace)
        graph.update(pending)
    raise MaxIterationsExceeded(cfg.max_iterations, len(pending))


def diff_inferred(result: RunResult, data: Graph) -> Graph:
    """Exactly the inferred triples: the run's graph minus its input."""
    return graph_difference(result.graph, data)
