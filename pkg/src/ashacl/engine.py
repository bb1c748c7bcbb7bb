"""Validation of data graphs against shapes graphs and construction of reports."""

from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .components import LIST_TAKING, Constraint, ViolationRecord, eval_constraint
from .graph import TYPE, Graph, graph_union, instances_of, list_members
from .paths import IllFormedPath, compile_path, encode_list, encode_path
from .shapes import (
    IllFormedness,
    Shape,
    check_shape,
    check_shapes_graph,
    complete_targets,
    load_shape,
    recursive_shapes,
    shapes_closure,
    value_nodes,
)
from .terms import FALSE, SH, TRUE, BNode, Literal, Term, term_key

log = logging.getLogger(__name__)

RECURSIVE = "RecursiveShapesGraph"
ILL_FORMED = "IllFormedShapesGraph"
UNSUPPORTED_ENTAILMENT = "UnsupportedEntailment"
RESOURCE_LIMIT = "ResourceLimit"

DEFAULT_MAX_RESULTS = 100_000
DEFAULT_MAX_DEPTH = 64


class ValidationFailure(Exception):
    """Processor-level failure; never expressible as a validation report."""

    def __init__(self, code: str, detail: str, diagnostics: Sequence[IllFormedness] = ()):
        super().__init__(f"{code}: {detail}")
        self.code = code
        self.detail = detail
        self.diagnostics = list(diagnostics)


@dataclass
class ResultsStructure:
    graph: Graph = field(default_factory=Graph)
    top_level: frozenset[Term] = frozenset()

    @property
    def conforms(self) -> bool:
        return not self.top_level


def combine(structures: Iterable[ResultsStructure]) -> ResultsStructure:
    """Union of graphs and of top-level sets; blank nodes are shared, not renamed."""
    structures = list(structures)
    if len(structures) == 1:
        return structures[0]
    top: set[Term] = set()
    for r in structures:
        top |= r.top_level
    return ResultsStructure(graph_union(r.graph for r in structures), frozenset(top))


def _language_messages(shape: Shape) -> list[Literal]:
    """At most one message per language tag, the lexically smallest."""
    chosen: dict[str, Literal] = {}
    for m in shape.messages:
        if m.lang is None:
            continue
        if m.lang not in chosen or m.lexical < chosen[m.lang].lexical:
            chosen[m.lang] = m
    return [chosen[k] for k in sorted(chosen)]


def build_result(focus: Term, value: Term | None, c: Constraint, shape: Shape,
                 shapes: Graph, into: Graph) -> BNode:
    r = into.fresh_blank()
    into.add(r, TYPE, SH.ValidationResult)
    into.add(r, SH.focusNode, focus)
    if value is not None:
        into.add(r, SH.valueNode, value)
    if shape.path is not None:
        into.add(r, SH.resultPath, encode_path(shape.path, into))
    into.add(r, SH.sourceShape, shape.node)
    into.add(r, SH.sourceConstraintComponent, c.component)
    into.add(r, SH.resultSeverity, shape.severity)
    for m in _language_messages(shape):
        into.add(r, SH.resultMessage, m)
    for p, x in c.parameter_values:
        if p in LIST_TAKING:
            into.add(r, p, encode_list(list_members(x, shapes) or [], into))
        else:
            into.add(r, p, x)
    return r


class Validator:
    """One validation run over a data graph and a potential shapes graph.

    Construction performs the shapes-graph checks and raises
    ValidationFailure when the graph is ill-formed, recursive or asks for an
    entailment regime.  ``rng``, when given, shuffles every iteration order;
    reports must be isomorphic regardless.
    """

    def __init__(self, data: Graph, shapes: Graph, *, max_results: int = DEFAULT_MAX_RESULTS,
                 max_depth: int = DEFAULT_MAX_DEPTH, rng: random.Random | None = None):
        self.data = data
        self.shapes_graph = shapes
        self.max_results = max_results
        self.max_depth = max_depth
        self.rng = rng
        self._reserved = set(data.blank_ids | shapes.blank_ids)
        self._shapes: dict[Term, Shape] = {}
        self._conforms: dict[tuple[Term, Term], bool] = {}
        self._depth = 0
        self._count = 0
        self._warned: set[Term] = set()

        diagnostics = check_shapes_graph(shapes)
        if diagnostics:
            raise ValidationFailure(
                ILL_FORMED, f"{len(diagnostics)} ill-formed shape rule violation(s)", diagnostics)
        recursive = recursive_shapes(shapes)
        if recursive:
            names = ", ".join(s.n3() for s in sorted(recursive, key=term_key))
            raise ValidationFailure(RECURSIVE, f"recursive shapes: {names}")
        regimes = [o for _, o in shapes.subject_objects(SH.entailment)]
        if regimes:
            names = ", ".join(o.n3() for o in sorted(regimes, key=term_key))
            raise ValidationFailure(UNSUPPORTED_ENTAILMENT, f"entailment regimes are not supported: {names}")
        self.closure = shapes_closure(shapes)

    def _order(self, items: Iterable) -> list:
        items = sorted(items, key=_sort_key)
        if self.rng is not None:
            self.rng.shuffle(items)
        return items

    def _new_graph(self) -> Graph:
        return Graph(reserved=self._reserved)

    def shape(self, node: Term) -> Shape:
        s = self._shapes.get(node)
        if s is None:
            if node not in self.closure:
                problems = check_shape(node, self.shapes_graph)
                if problems:
                    raise ValidationFailure(ILL_FORMED, f"{node.n3()} is an ill-formed shape", problems)
            s = self._shapes[node] = load_shape(node, self.shapes_graph)
            if node not in self._warned and any(m.lang is None for m in s.messages):
                self._warned.add(node)
                log.warning("shape %s: messages without a language tag are not copied into results",
                            node.n3())
        return s

    # term-level conformance, used by the shape-inducing components

    def conforms_term(self, value: Term, shape_node: Term) -> bool:
        key = (value, shape_node)
        got = self._conforms.get(key)
        if got is not None:
            return got
        shape = self.shape(shape_node)
        self._depth += 1
        try:
            if self._depth > self.max_depth:
                raise ValidationFailure(RESOURCE_LIMIT, f"nested conformance depth exceeds {self.max_depth}")
            got = True
            if not shape.deactivated:
                vn = value_nodes(value, self.data, shape)
                for c in shape.constraints:
                    if eval_constraint(c, value, vn, self.data, shape.node, self.shapes_graph,
                                       self.conforms_term, shape):
                        got = False
                        break
        finally:
            self._depth -= 1
        self._conforms[key] = got
        return got

    def violations(self, focus: Term, shape: Shape) -> list[ViolationRecord]:
        if shape.deactivated:
            return []
        vn = value_nodes(focus, self.data, shape)
        out = []
        for c in self._order(shape.constraints):
            out.extend(eval_constraint(c, focus, vn, self.data, shape.node, self.shapes_graph,
                                       self.conforms_term, shape))
        return out

    # the three validation levels

    def validate_term(self, focus: Term, shape: Shape | Term) -> ResultsStructure:
        if not isinstance(shape, Shape):
            shape = self.shape(shape)
        records = self.violations(focus, shape)
        if not records:
            return ResultsStructure(self._new_graph())
        self._count += len(records)
        if self._count > self.max_results:
            raise ValidationFailure(RESOURCE_LIMIT, f"more than {self.max_results} validation results")
        g = self._new_graph()
        top = [build_result(r.focus, r.value, r.constraint, shape, self.shapes_graph, g) for r in records]
        return ResultsStructure(g, frozenset(top))

    def validate_shape(self, shape: Shape | Term) -> ResultsStructure:
        if not isinstance(shape, Shape):
            shape = self.shape(shape)
        parts = [self.validate_term(t, shape) for t in self._order(complete_targets(shape, self.data))]
        return combine(parts) if parts else ResultsStructure(self._new_graph())

    def validate_graph(self) -> ResultsStructure:
        parts = [self.validate_shape(s) for s in self._order(self.closure)]
        return combine(parts) if parts else ResultsStructure(self._new_graph())


def _sort_key(x):
    if isinstance(x, Constraint):
        return (x.component.value, [(p.value, term_key(v)) for p, v in x.parameter_values])
    return term_key(x)


def validate_graph(data: Graph, shapes: Graph, **limits) -> ResultsStructure:
    return Validator(data, shapes, **limits).validate_graph()


def validate_shape(data: Graph, shape: Term, shapes: Graph, **limits) -> ResultsStructure:
    return Validator(data, shapes, **limits).validate_shape(shape)


def validate_term(focus: Term, data: Graph, shape: Term, shapes: Graph, **limits) -> ResultsStructure:
    return Validator(data, shapes, **limits).validate_term(focus, shape)


def conforms(data: Graph, shapes: Graph, **limits) -> bool:
    return validate_graph(data, shapes, **limits).conforms


def build_report(r: ResultsStructure) -> Graph:
    g = r.graph.copy()
    g.reserve_blanks(r.graph.blank_ids)
    n = g.fresh_blank()
    g.add(n, TYPE, SH.ValidationReport)
    g.add(n, SH.conforms, FALSE if r.top_level else TRUE)
    for t in sorted(r.top_level, key=term_key):
        g.add(n, SH.result, t)
    return g


def report_conforms(report: Graph) -> bool | None:
    """The sh:conforms answer carried by a report graph, None if absent."""
    for n in instances_of(SH.ValidationReport, report):
        for v in report.objects(n, SH.conforms):
            return v == TRUE
    return None


RESULT_RULES = {
    "result-type": "has no rdf:type sh:ValidationResult triple",
    "result-focus-node": "does not have exactly one sh:focusNode",
    "result-value-node": "has more than one sh:valueNode",
    "result-path": "has more than one sh:resultPath or an ill-formed one",
    "result-source-shape": "does not have exactly one sh:sourceShape",
    "result-source-component": "does not have exactly one sh:sourceConstraintComponent",
    "result-severity": "does not have exactly one sh:resultSeverity",
    "result-message": "has a sh:resultMessage that is not language-tagged or repeats a tag",
    "result-detail": "has a sh:detail value that is not a validation result",
    "result-list-parameter": "has a list-taking parameter value that is not a list",
}


def validate_results_graph(g: Graph) -> list[IllFormedness]:
    """Check every validation-result node of ``g`` against the results-graph conditions."""
    out: list[IllFormedness] = []
    results = instances_of(SH.ValidationResult, g)
    for r in sorted(results, key=term_key):
        def bad(rule: str) -> None:
            out.append(IllFormedness(rule, r, RESULT_RULES[rule]))

        if SH.ValidationResult not in g.objects(r, TYPE):
            bad("result-type")
        if len(g.objects(r, SH.focusNode)) != 1:
            bad("result-focus-node")
        if len(g.objects(r, SH.valueNode)) > 1:
            bad("result-value-node")
        paths = g.objects(r, SH.resultPath)
        if len(paths) > 1:
            bad("result-path")
        else:
            for p in paths:
                try:
                    compile_path(p, g)
                except IllFormedPath:
                    bad("result-path")
        if len(g.objects(r, SH.sourceShape)) != 1:
            bad("result-source-shape")
        if len(g.objects(r, SH.sourceConstraintComponent)) != 1:
            bad("result-source-component")
        if len(g.objects(r, SH.resultSeverity)) != 1:
            bad("result-severity")
        msgs = g.objects(r, SH.resultMessage)
        tags = [m.lang for m in msgs if isinstance(m, Literal) and m.lang is not None]
        if len(tags) != len(msgs) or len(set(tags)) != len(tags):
            bad("result-message")
        if any(d not in results for d in g.objects(r, SH.detail)):
            bad("result-detail")
        if any(list_members(v, g) is None for p in LIST_TAKING for v in g.objects(r, p)):
            bad("result-list-parameter")
    return out


__all__ = [
    "ValidationFailure", "ResultsStructure", "Validator", "combine", "build_result",
    "validate_graph", "validate_shape", "validate_term", "conforms", "build_report",
    "report_conforms", "validate_results_graph", "RESULT_RULES",
]
