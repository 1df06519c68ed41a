"""The CONSTRUCT-WHERE rule dialect: syntax, parsing, and evaluation.

A rule is a CONSTRUCT template plus a WHERE group pattern. The dialect is a
frozen subset of SPARQL 1.1:

    rule      := CONSTRUCT '{' template '}' WHERE '{' group '}'
    template  := triples with variables and (possibly nested) '[ ... ]'
                 blank-node property lists
    group     := element*
    element   := triples-block
               | '{' group '}' UNION '{' group '}'
               | NOT EXISTS '{' group '}'
               | FILTER '(' expr ')'
               | BIND '(' ground-term AS ?var ')'
    expr      := comparisons ?v = t, ?v != t (also var/var), combined with
                 '&&', '||', and parentheses

Keywords are case-insensitive and whitespace is free-form; `a` abbreviates
rdf:type; `.` statement separators are optional between elements. Anything
outside this grammar is a syntax error: the evaluator would rather fail
loudly than silently mis-evaluate a rule.

Evaluation is set-semantics, left to right, each element joining with the
accumulated solutions:

  - a triple pattern joins all compatible graph matches;
  - UNION contributes the solutions of both branches;
  - NOT EXISTS keeps a solution iff the inner group has no solution under it
    (outer bindings substitute into the inner pattern);
  - FILTER keeps solutions whose expression is true; a comparison that
    mentions an unbound variable rejects the solution;
  - BIND extends every solution with a constant.

Blank nodes written in a WHERE group behave as fresh variables. Blank nodes
in the template become skolem nodes named from the rule id, the blank's
position, the solution, and the instantiation salt, so one instantiation call
is reproducible bit-for-bit.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .model import (
    BlankNode, DEFAULT_PREFIXES, Graph, Iri, Literal, RDF_TYPE, Term, Triple,
    render_term, term_key,
)


class RuleSyntaxError(Exception):
    def __init__(self, message: str, pos: int = -1, rule_id: str = ""):
        where = f" at offset {pos}" if pos >= 0 else ""
        tag = f" in rule '{rule_id}'" if rule_id else ""
        super().__init__(f"{message}{where}{tag}")
        self.pos = pos
        self.rule_id = rule_id


class UnboundTemplateVariable(Exception):
    pass


class BindConflict(Exception):
    pass


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class TemplateBlank:
    index: int


PatternTerm = Term | Variable
TemplateTerm = Term | Variable | TemplateBlank


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm


@dataclass(frozen=True)
class Comparison:
    left: PatternTerm
    negated: bool  # True for !=
    right: PatternTerm


@dataclass(frozen=True)
class ExprAnd:
    items: tuple


@dataclass(frozen=True)
class ExprOr:
    items: tuple


Expr = Comparison | ExprAnd | ExprOr


@dataclass(frozen=True)
class Filter:
    expr: Expr


@dataclass(frozen=True)
class Bind:
    value: Term
    var: Variable


@dataclass(frozen=True)
class GroupPattern:
    elements: tuple


@dataclass(frozen=True)
class Union:
    left: GroupPattern
    right: GroupPattern


@dataclass(frozen=True)
class NotExists:
    inner: GroupPattern


@dataclass(frozen=True)
class TemplateTriple:
    subject: TemplateTerm
    predicate: TemplateTerm
    object: TemplateTerm


@dataclass(frozen=True)
class RuleQuery:
    rule_id: str
    construct_template: tuple  # of TemplateTriple
    where_clause: GroupPattern


# --- Tokenizer ---------------------------------------------------------------

_KEYWORDS = {"construct", "where", "union", "not", "exists", "filter", "bind", "as"}
_PUNCT = ("&&", "||", "!=", "=", "{", "}", "(", ")", "[", "]", ";", ",", ".")
_NAME_RE = re.compile(r"[A-Za-z0-9_\-]+")


@dataclass
class _Token:
    kind: str  # keyword, var, iri, pname, literal, punct, a
    value: object
    pos: int


def _tokenize(text: str, rule_id: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith('"""', i):
            end = text.find('"""', i + 3)
            if end < 0:
                raise RuleSyntaxError("unterminated long string", i, rule_id)
            tokens.append(_Token("literal", text[i + 3:end], i))
            i = end + 3
            continue
        if c == '"':
            j = i + 1
            out = []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    out.append({"n": "\n", "t": "\t", "r": "\r"}.get(text[j + 1], text[j + 1]))
                    j += 2
                else:
                    out.append(text[j])
                    j += 1
            if j >= n:
                raise RuleSyntaxError("unterminated string", i, rule_id)
            tokens.append(_Token("literal", "".join(out), i))
            i = j + 1
            continue
        two = text[i:i + 2]
        if two in ("&&", "||", "!="):
            tokens.append(_Token("punct", two, i))
            i += 2
            continue
        if c in "{}()[];,=.":
            tokens.append(_Token("punct", c, i))
            i += 1
            continue
        if c == "?":
            m = _NAME_RE.match(text, i + 1)
            if not m:
                raise RuleSyntaxError("bad variable name", i, rule_id)
            tokens.append(_Token("var", m.group(0), i))
            i = m.end()
            continue
        if c == "<":
            end = text.find(">", i)
            if end < 0:
                raise RuleSyntaxError("unterminated IRI", i, rule_id)
            tokens.append(_Token("iri", text[i + 1:end], i))
            i = end + 1
            continue
        if c == ":":
            m = _NAME_RE.match(text, i + 1)
            local = m.group(0) if m else ""
            tokens.append(_Token("pname", ("", local), i))
            i = (m.end() if m else i + 1)
            continue
        m = _NAME_RE.match(text, i)
        if m:
            word = m.group(0)
            j = m.end()
            if j < n and text[j] == ":":
                m2 = _NAME_RE.match(text, j + 1)
                local = m2.group(0) if m2 else ""
                tokens.append(_Token("pname", (word, local), i))
                i = (m2.end() if m2 else j + 1)
                continue
            lowered = word.lower()
            if lowered in _KEYWORDS:
                tokens.append(_Token("keyword", lowered, i))
            elif word == "a":
                tokens.append(_Token("a", "a", i))
            else:
                raise RuleSyntaxError(f"unknown keyword {word!r}", i, rule_id)
            i = j
            continue
        raise RuleSyntaxError(f"unexpected character {c!r}", i, rule_id)
    return tokens


# --- Parser ------------------------------------------------------------------


class _RuleParser:
    def __init__(self, rule_id: str, text: str, prefixes: dict[str, str]):
        self.rule_id = rule_id
        self.tokens = _tokenize(text, rule_id)
        self.i = 0
        self.prefixes = dict(DEFAULT_PREFIXES)
        self.prefixes.update(prefixes)
        self.blank_count = 0       # template blanks
        self.where_blank_count = 0  # fresh variables for [] in WHERE

    def error(self, message: str) -> RuleSyntaxError:
        pos = self.tokens[self.i].pos if self.i < len(self.tokens) else -1
        return RuleSyntaxError(message, pos, self.rule_id)

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise RuleSyntaxError("unexpected end of rule", -1, self.rule_id)
        self.i += 1
        return tok

    def expect_punct(self, value: str):
        tok = self.next()
        if tok.kind != "punct" or tok.value != value:
            raise RuleSyntaxError(f"expected {value!r}", tok.pos, self.rule_id)

    def expect_keyword(self, value: str):
        tok = self.next()
        if tok.kind != "keyword" or tok.value != value:
            raise RuleSyntaxError(f"expected {value.upper()}", tok.pos, self.rule_id)

    def at_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "punct" and tok.value == value

    def at_keyword(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "keyword" and tok.value == value

    def expand(self, prefix: str, local: str, pos: int) -> Iri:
        if prefix not in self.prefixes:
            raise RuleSyntaxError(f"undeclared prefix '{prefix}:'", pos, self.rule_id)
        return Iri(self.prefixes[prefix] + local)

    def parse_rule(self) -> RuleQuery:
        self.expect_keyword("construct")
        self.expect_punct("{")
        template = self.parse_triples_until_close(in_template=True)
        self.expect_keyword("where")
        self.expect_punct("{")
        where = self.parse_group()
        self.expect_punct("}")
        if self.peek() is not None:
            raise self.error("trailing tokens after WHERE clause")
        rq = RuleQuery(self.rule_id, tuple(template), where)
        unbound = template_variables(rq) - bindable_variables(where)
        if unbound:
            names = ", ".join(sorted(v.name for v in unbound))
            raise UnboundTemplateVariable(
                f"rule '{self.rule_id}': template variables never bound in WHERE: {names}")
        return rq

    # template parsing ---------------------------------------------------

    def parse_triples_until_close(self, in_template: bool) -> list[TemplateTriple]:
        acc: list[TemplateTriple] = []
        while not self.at_punct("}"):
            self.parse_triples_block(acc, in_template)
            while self.at_punct("."):
                self.next()
        self.expect_punct("}")
        return acc

    def parse_term(self, acc: list, in_template: bool):
        tok = self.next()
        if tok.kind == "var":
            return Variable(tok.value)
        if tok.kind == "iri":
            return Iri(tok.value)
        if tok.kind == "pname":
            prefix, local = tok.value
            return self.expand(prefix, local, tok.pos)
        if tok.kind == "a":
            return RDF_TYPE
        if tok.kind == "literal":
            return Literal(tok.value)
        if tok.kind == "punct" and tok.value == "[":
            return self.parse_property_list_node(acc, in_template)
        raise RuleSyntaxError(f"unexpected token {tok.value!r}", tok.pos, self.rule_id)

    def parse_property_list_node(self, acc: list, in_template: bool):
        if in_template:
            node: TemplateTerm = TemplateBlank(self.blank_count)
            self.blank_count += 1
        else:
            # the leading space keeps these internal variables out of the
            # namespace a rule author can reach
            node = Variable(f" bnode{self.where_blank_count}")
            self.where_blank_count += 1
        if not self.at_punct("]"):
            self.parse_predicate_objects(node, acc, in_template)
        self.expect_punct("]")
        return node

    def parse_predicate_objects(self, subject, acc: list, in_template: bool):
        while True:
            predicate = self.parse_term(acc, in_template)
            if isinstance(predicate, (TemplateBlank, Literal)):
                raise self.error("bad predicate")
            while True:
                obj = self.parse_term(acc, in_template)
                if in_template:
                    acc.append(TemplateTriple(subject, predicate, obj))
                else:
                    acc.append(TriplePattern(subject, predicate, obj))
                if self.at_punct(","):
                    self.next()
                    continue
                break
            if self.at_punct(";"):
                self.next()
                # allow "; }" and "; ]" and "; ." like the Turtle reader
                if self.at_punct("]") or self.at_punct("}") or self.at_punct(".") or self.peek() is None:
                    return
                continue
            return

    def parse_triples_block(self, acc: list, in_template: bool):
        subject = self.parse_term(acc, in_template)
        if isinstance(subject, Literal):
            raise self.error("literal cannot be a subject")
        # "[ ... ]" used as a whole statement
        if isinstance(subject, (TemplateBlank, Variable)) and (
                self.at_punct(".") or self.at_punct("}") or self.peek() is None):
            return
        self.parse_predicate_objects(subject, acc, in_template)

    # WHERE parsing --------------------------------------------------------

    def parse_group(self) -> GroupPattern:
        elements: list = []
        while True:
            tok = self.peek()
            if tok is None or (tok.kind == "punct" and tok.value == "}"):
                break
            if tok.kind == "punct" and tok.value == ".":
                self.next()
                continue
            if tok.kind == "punct" and tok.value == "{":
                self.next()
                left = self.parse_group()
                self.expect_punct("}")
                if not self.at_keyword("union"):
                    # a bare braced group just flattens into the sequence
                    elements.extend(left.elements)
                    continue
                union: Union | None = None
                while self.at_keyword("union"):
                    self.next()
                    self.expect_punct("{")
                    right = self.parse_group()
                    self.expect_punct("}")
                    union = Union(left if union is None else GroupPattern((union,)), right)
                elements.append(union)
                continue
            if tok.kind == "keyword" and tok.value == "not":
                self.next()
                self.expect_keyword("exists")
                self.expect_punct("{")
                inner = self.parse_group()
                self.expect_punct("}")
                elements.append(NotExists(inner))
                continue
            if tok.kind == "keyword" and tok.value == "filter":
                self.next()
                self.expect_punct("(")
                expr = self.parse_expr()
                self.expect_punct(")")
                elements.append(Filter(expr))
                continue
            if tok.kind == "keyword" and tok.value == "bind":
                self.next()
                self.expect_punct("(")
                value = self.parse_term([], in_template=False)
                if isinstance(value, Variable):
                    raise self.error("BIND accepts only ground terms")
                self.expect_keyword("as")
                var_tok = self.next()
                if var_tok.kind != "var":
                    raise RuleSyntaxError("expected variable after AS", var_tok.pos, self.rule_id)
                self.expect_punct(")")
                elements.append(Bind(value, Variable(var_tok.value)))
                continue
            if tok.kind == "keyword":
                raise self.error(f"unexpected keyword {tok.value.upper()}")
            patterns: list = []
            self.parse_triples_block(patterns, in_template=False)
            elements.extend(patterns)
        return GroupPattern(tuple(elements))

    def parse_expr(self) -> Expr:
        items = [self.parse_and()]
        while self.at_punct("||"):
            self.next()
            items.append(self.parse_and())
        return items[0] if len(items) == 1 else ExprOr(tuple(items))

    def parse_and(self) -> Expr:
        items = [self.parse_primary()]
        while self.at_punct("&&"):
            self.next()
            items.append(self.parse_primary())
        return items[0] if len(items) == 1 else ExprAnd(tuple(items))

    def parse_primary(self) -> Expr:
        if self.at_punct("("):
            self.next()
            inner = self.parse_expr()
            # "(expr)" or "(operand op operand)" both arrive here; a closing
            # paren after a full expr ends the primary.
            self.expect_punct(")")
            return inner
        left = self.parse_operand()
        tok = self.next()
        if tok.kind != "punct" or tok.value not in ("=", "!="):
            raise RuleSyntaxError("expected '=' or '!='", tok.pos, self.rule_id)
        right = self.parse_operand()
        return Comparison(left, tok.value == "!=", right)

    def parse_operand(self) -> PatternTerm:
        tok = self.peek()
        if tok is not None and tok.kind == "punct" and tok.value == "(":
            raise self.error("nested comparison operand")
        term = self.parse_term([], in_template=False)
        if isinstance(term, TemplateBlank):
            raise self.error("blank node in FILTER")
        return term


def parse_rule(rule_id: str, text: str, prefixes: Optional[dict[str, str]] = None) -> RuleQuery:
    """Parse one rule body (the literal value of a has-sparql-code triple)."""
    parser = _RuleParser(rule_id, text, prefixes or {})
    return parser.parse_rule()


# --- Static analysis ---------------------------------------------------------


def template_variables(rq: RuleQuery) -> set[Variable]:
    out: set[Variable] = set()
    for tt in rq.construct_template:
        for part in (tt.subject, tt.predicate, tt.object):
            if isinstance(part, Variable):
                out.add(part)
    return out


def bindable_variables(gp: GroupPattern) -> set[Variable]:
    """Variables that can carry a binding out of the group: triple-pattern
    positions and BIND targets, looking through UNION branches but not into
    NOT EXISTS or FILTER."""
    out: set[Variable] = set()
    for el in gp.elements:
        if isinstance(el, TriplePattern):
            for part in (el.subject, el.predicate, el.object):
                if isinstance(part, Variable):
                    out.add(part)
        elif isinstance(el, Union):
            out |= bindable_variables(el.left)
            out |= bindable_variables(el.right)
        elif isinstance(el, Bind):
            out.add(el.var)
    return out


# --- Evaluation --------------------------------------------------------------

Binding = dict[Variable, Term]


def _freeze(b: Binding) -> frozenset:
    return frozenset((v.name, t) for v, t in b.items())


def _match_pattern(g: Graph, tp: TriplePattern, binding: Binding) -> list[Binding]:
    def resolve(part: PatternTerm) -> Optional[Term]:
        if isinstance(part, Variable):
            return binding.get(part)
        return part

    s, p, o = resolve(tp.subject), resolve(tp.predicate), resolve(tp.object)
    out = []
    for t in g.match_iter(s, p, o):
        new = dict(binding)
        ok = True
        for part, actual in ((tp.subject, t.subject), (tp.predicate, t.predicate),
                             (tp.object, t.object)):
            if isinstance(part, Variable):
                bound = new.get(part)
                if bound is None:
                    new[part] = actual
                elif bound != actual:
                    ok = False
                    break
        if ok:
            out.append(new)
    return out


class _UnboundInFilter(Exception):
    pass


def _eval_expr(expr: Expr, binding: Binding) -> bool:
    if isinstance(expr, Comparison):
        def value(part: PatternTerm) -> Term:
            if isinstance(part, Variable):
                if part not in binding:
                    raise _UnboundInFilter(part.name)
                return binding[part]
            return part
        equal = value(expr.left) == value(expr.right)
        return (not equal) if expr.negated else equal
    if isinstance(expr, ExprAnd):
        return all(_eval_expr(item, binding) for item in expr.items)
    return any(_eval_expr(item, binding) for item in expr.items)


# Assumed match count for a position held by an already-bound variable when
# planning a join order; only the relative magnitude matters.
_BOUND_POOL = 4


def _pattern_cost(g: Graph, tp: TriplePattern, bound: set[Variable]) -> int:
    pools = []
    for part, pool_of in ((tp.subject, g.subject_pool),
                          (tp.predicate, g.predicate_pool),
                          (tp.object, g.object_pool)):
        if isinstance(part, Variable):
            if part in bound:
                pools.append(_BOUND_POOL)
        else:
            pools.append(pool_of(part))
    return min(pools) if pools else len(g) + 1


def _pattern_vars(tp: TriplePattern):
    return (part for part in (tp.subject, tp.predicate, tp.object)
            if isinstance(part, Variable))


def _plan_run(g: Graph, run: list[TriplePattern], bound: set[Variable]) -> list[TriplePattern]:
    """Greedy join order for consecutive triple patterns: cheapest (most
    selective) next, given what is bound so far. Joins commute, so this never
    changes the solution set, only the size of the intermediate ones."""
    remaining = list(enumerate(run))
    ordered = []
    bound = set(bound)
    while remaining:
        index, best = min(remaining,
                          key=lambda iv: (_pattern_cost(g, iv[1], bound), iv[0]))
        remaining.remove((index, best))
        ordered.append(best)
        bound.update(_pattern_vars(best))
    return ordered


def evaluate_where(g: Graph, gp: GroupPattern, seed: Optional[Binding] = None) -> list[Binding]:
    """All solution bindings of the group over the graph, seeded with `seed`.

    The result is a set (no duplicate bindings) in a deterministic order.
    Elements keep their left-to-right semantics; runs of adjacent triple
    patterns are join-planned by selectivity first.
    """
    acc: list[Binding] = [dict(seed) if seed else {}]
    bound: set[Variable] = set(seed) if seed else set()
    elements = list(gp.elements)
    position = 0
    while position < len(elements):
        el = elements[position]
        if not acc:
            break
        if isinstance(el, TriplePattern):
            run = [el]
            while position + 1 < len(elements) and isinstance(elements[position + 1],
                                                              TriplePattern):
                position += 1
                run.append(elements[position])
            for tp in _plan_run(g, run, bound):
                acc = [nb for b in acc for nb in _match_pattern(g, tp, b)]
                bound.update(_pattern_vars(tp))
                if not acc:
                    break
        elif isinstance(el, Union):
            nxt: list[Binding] = []
            for b in acc:
                nxt.extend(evaluate_where(g, el.left, b))
                nxt.extend(evaluate_where(g, el.right, b))
            acc = nxt
            bound |= bindable_variables(el.left) | bindable_variables(el.right)
        elif isinstance(el, NotExists):
            acc = [b for b in acc if not evaluate_where(g, el.inner, b)]
        elif isinstance(el, Filter):
            kept = []
            for b in acc:
                try:
                    if _eval_expr(el.expr, b):
                        kept.append(b)
                except _UnboundInFilter:
                    pass
            acc = kept
        elif isinstance(el, Bind):
            for b in acc:
                if el.var in b:
                    raise BindConflict(f"variable ?{el.var.name} is already bound")
                b[el.var] = el.value
            bound.add(el.var)
        else:  # pragma: no cover - parser only emits the kinds above
            raise TypeError(f"unknown pattern element {el!r}")
        # set semantics
        seen: set[frozenset] = set()
        unique: list[Binding] = []
        for b in acc:
            key = _freeze(b)
            if key not in seen:
                seen.add(key)
                unique.append(b)
        acc = unique
        position += 1
    acc.sort(key=lambda b: sorted((v.name, term_key(t)) for v, t in b.items()))
    return acc


# --- Instantiation -----------------------------------------------------------


@dataclass(frozen=True)
class SkolemPolicy:
    """Names blank nodes created by rule templates.

    The label is a pure function of (rule id, template blank position, salt,
    solution), so instantiating the same rule on the same solution with the
    same policy reproduces identical triples across runs and processes. The
    fixpoint engine salts the policy with its iteration counter: an unguarded
    rule therefore mints a new individual on every pass, exactly like a fresh
    anonymous node would, and only NOT EXISTS guards stop the loop.
    """

    salt: str = ""

    def label(self, rule_id: str, index: int, signature: str) -> str:
        digest = hashlib.sha1(
            f"{rule_id}\x00{index}\x00{self.salt}\x00{signature}".encode()).hexdigest()[:12]
        return f"skolem:{rule_id}:{index}:{digest}"


def _solution_signature(binding: Binding) -> str:
    return ",".join(f"{v.name}={render_term(t)}"
                    for v, t in sorted(binding.items(), key=lambda kv: kv[0].name))


def instantiate(rq: RuleQuery, solutions: Iterable[Binding],
                skolem: Optional[SkolemPolicy] = None) -> Graph:
    """Expand the CONSTRUCT template once per solution into a graph."""
    policy = skolem or SkolemPolicy()
    out = Graph()
    for binding in solutions:
        signature = _solution_signature(binding)
        blanks: dict[int, BlankNode] = {}

        def resolve(part: TemplateTerm) -> Term:
            if isinstance(part, Variable):
                if part not in binding:
                    raise UnboundTemplateVariable(
                        f"rule '{rq.rule_id}': ?{part.name} unbound at instantiation")
                return binding[part]
            if isinstance(part, TemplateBlank):
                if part.index not in blanks:
                    blanks[part.index] = BlankNode(
                        policy.label(rq.rule_id, part.index, signature))
                return blanks[part.index]
            return part

        for tt in rq.construct_template:
            out.insert(Triple(resolve(tt.subject), resolve(tt.predicate), resolve(tt.object)))
    return out
