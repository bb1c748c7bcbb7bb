"""Shape discovery, well-formedness rules, and shape-level derived data."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .components import (
    REGISTRY,
    SHAPE_INDUCING_LIST,
    SHAPE_INDUCING_SINGLE,
    Constraint,
)
from .graph import Graph, instances_of, is_instance, list_members
from .paths import IllFormedPath, PathExpr, compile_path, eval_path
from .sparql import comparable
from .terms import (
    RDFS,
    SH,
    XSD_BOOLEAN,
    BNode,
    IRI,
    Literal,
    Term,
    boolean_value,
    integer_value,
    is_lang_string,
    is_xsd_string,
    term_key,
)

TARGET_PREDICATES = (SH.targetNode, SH.targetClass, SH.targetSubjectsOf, SH.targetObjectsOf)

# Every ill-formed-shape rule, keyed by the id carried in diagnostics.
RULES: dict[str, str] = {
    "severity-multiple": "more than one value for sh:severity",
    "message-type": "sh:message value is neither a language-tagged string nor an xsd:string literal",
    "deactivated-type": "sh:deactivated value is not an xsd:boolean literal",
    "target-node-kind": "sh:targetNode value is not an IRI or literal",
    "target-class-kind": "sh:targetClass value is not an IRI",
    "implicit-class-kind": "shape is an instance of rdfs:Class but not an IRI",
    "target-subjects-of-kind": "sh:targetSubjectsOf value is not an IRI",
    "target-objects-of-kind": "sh:targetObjectsOf value is not an IRI",
    "path-ill-formed": "sh:path value is an ill-formed property path",
    "path-multiple": "more than one value for sh:path",
    "class-kind": "sh:class value is not an IRI",
    "datatype-kind": "sh:datatype value is not an IRI",
    "node-kind-value": "sh:nodeKind value is not sh:BlankNode, sh:IRI or sh:Literal",
    "min-count-type": "sh:minCount value is not an xsd:integer literal",
    "max-count-type": "sh:maxCount value is not an xsd:integer literal",
    "min-exclusive-type": "sh:minExclusive value cannot be used with SPARQL <",
    "min-inclusive-type": "sh:minInclusive value cannot be used with SPARQL <=",
    "max-exclusive-type": "sh:maxExclusive value cannot be used with SPARQL >",
    "max-inclusive-type": "sh:maxInclusive value cannot be used with SPARQL >=",
    "min-length-type": "sh:minLength value is not an xsd:integer literal",
    "max-length-type": "sh:maxLength value is not an xsd:integer literal",
    "pattern-type": "sh:pattern value is not an xsd:string literal",
    "flags-type": "sh:flags value is not an xsd:string literal",
    "pattern-multiple": "more than one value for sh:pattern",
    "flags-multiple": "more than one value for sh:flags",
    "stem-type": "sh:stem value is not an xsd:string literal",
    "language-in-list": "sh:languageIn value is not a list of xsd:string literals",
    "unique-lang-value": "sh:uniqueLang value is not the xsd:boolean literal true",
    "equals-kind": "sh:equals value is not an IRI",
    "disjoint-kind": "sh:disjoint value is not an IRI",
    "less-than-kind": "sh:lessThan value is not an IRI",
    "less-than-or-equals-kind": "sh:lessThanOrEquals value is not an IRI",
    "shape-kind": "sh:shape value is not an IRI or blank node",
    "not-kind": "sh:not value is not an IRI or blank node",
    "and-list": "sh:and value is not a list of IRIs or blank nodes",
    "or-list": "sh:or value is not a list of IRIs or blank nodes",
    "qualified-value-shape-kind": "sh:qualifiedValueShape value is not an IRI or blank node",
    "qualified-count-type": "sh:qualifiedMinCount or sh:qualifiedMaxCount value is not an xsd:integer literal",
    "qualified-multiple": "more than one value for sh:qualifiedValueShape, sh:qualifiedMinCount or sh:qualifiedMaxCount",
    "qualified-count-missing": "sh:qualifiedValueShape without sh:qualifiedMinCount or sh:qualifiedMaxCount",
    "closed-value": "sh:closed value is not the xsd:boolean literal true",
    "ignored-properties-list": "sh:ignoredProperties value is not a list of IRIs",
    "closed-multiple": "more than one value for sh:closed or sh:ignoredProperties",
    "in-list": "sh:in value is not a list of IRIs or blank nodes",
}


@dataclass(frozen=True)
class IllFormedness:
    rule: str
    node: Term
    detail: str = ""

    def __str__(self) -> str:
        text = f"[{self.rule}] {self.node.n3()}: {RULES.get(self.rule, self.rule)}"
        return text + (f" ({self.detail})" if self.detail else "")


@dataclass(frozen=True)
class TargetSpec:
    kind: str  # node | class | implicitClass | subjectsOf | objectsOf
    argument: Term


@dataclass(frozen=True)
class Shape:
    node: Term
    severity: Term
    messages: tuple[Literal, ...]
    deactivated: bool
    path: PathExpr | None
    path_node: Term | None
    constraints: tuple[Constraint, ...]
    targets: tuple[TargetSpec, ...]


def explicit_shapes(g: Graph) -> set[Term]:
    out = instances_of(SH.Shape, g)
    for p in TARGET_PREDICATES:
        out |= {s for s, _ in g.subject_objects(p)}
    return out


def referenced_shapes(s: Term, g: Graph) -> set[Term]:
    """Shapes that ``s`` refers to through shape-inducing parameters."""
    out: set[Term] = set()
    for p in SHAPE_INDUCING_SINGLE:
        out |= g.objects(s, p)
    for p in SHAPE_INDUCING_LIST:
        for lst in g.objects(s, p):
            out.update(list_members(lst, g) or ())
    return out


def shapes_closure(g: Graph) -> set[Term]:
    shapes = explicit_shapes(g)
    todo = list(shapes)
    while todo:
        for o in referenced_shapes(todo.pop(), g):
            if o not in shapes:
                shapes.add(o)
                todo.append(o)
    return shapes


def is_recursive(g: Graph) -> bool:
    return bool(recursive_shapes(g))


def recursive_shapes(g: Graph) -> set[Term]:
    """Shapes related to themselves by the transitive closure of refers-to."""
    edges = {s: referenced_shapes(s, g) for s in shapes_closure(g)}
    out = set()
    for s in edges:
        seen: set[Term] = set()
        stack = list(edges[s])
        while stack:
            x = stack.pop()
            if x == s:
                out.add(s)
                break
            if x in seen:
                continue
            seen.add(x)
            stack.extend(edges.get(x, ()))
    return out


def _is_iri_or_blank(t: Term) -> bool:
    return isinstance(t, (IRI, BNode))


def _is_integer(t: Term) -> bool:
    return integer_value(t) is not None


def _list_of(t: Term, g: Graph, member_ok) -> bool:
    members = list_members(t, g)
    return members is not None and all(member_ok(m) for m in members)


# (parameter, rule id, test a single value must pass)
_VALUE_RULES = [
    (SH.message, "message-type", lambda v, g: is_lang_string(v) or is_xsd_string(v)),
    (SH.deactivated, "deactivated-type",
     lambda v, g: isinstance(v, Literal) and v.datatype == XSD_BOOLEAN),
    (SH.targetNode, "target-node-kind", lambda v, g: isinstance(v, (IRI, Literal))),
    (SH.targetClass, "target-class-kind", lambda v, g: isinstance(v, IRI)),
    (SH.targetSubjectsOf, "target-subjects-of-kind", lambda v, g: isinstance(v, IRI)),
    (SH.targetObjectsOf, "target-objects-of-kind", lambda v, g: isinstance(v, IRI)),
    (SH["class"], "class-kind", lambda v, g: isinstance(v, IRI)),
    (SH.datatype, "datatype-kind", lambda v, g: isinstance(v, IRI)),
    (SH.nodeKind, "node-kind-value", lambda v, g: v in (SH.BlankNode, SH.IRI, SH.Literal)),
    (SH.minCount, "min-count-type", lambda v, g: _is_integer(v)),
    (SH.maxCount, "max-count-type", lambda v, g: _is_integer(v)),
    (SH.minExclusive, "min-exclusive-type", lambda v, g: comparable(v)),
    (SH.minInclusive, "min-inclusive-type", lambda v, g: comparable(v)),
    (SH.maxExclusive, "max-exclusive-type", lambda v, g: comparable(v)),
    (SH.maxInclusive, "max-inclusive-type", lambda v, g: comparable(v)),
    (SH.minLength, "min-length-type", lambda v, g: _is_integer(v)),
    (SH.maxLength, "max-length-type", lambda v, g: _is_integer(v)),
    (SH.pattern, "pattern-type", lambda v, g: is_xsd_string(v)),
    (SH.flags, "flags-type", lambda v, g: is_xsd_string(v)),
    (SH.stem, "stem-type", lambda v, g: is_xsd_string(v)),
    (SH.languageIn, "language-in-list", lambda v, g: _list_of(v, g, is_xsd_string)),
    (SH.uniqueLang, "unique-lang-value", lambda v, g: boolean_value(v) is True),
    (SH.equals, "equals-kind", lambda v, g: isinstance(v, IRI)),
    (SH.disjoint, "disjoint-kind", lambda v, g: isinstance(v, IRI)),
    (SH.lessThan, "less-than-kind", lambda v, g: isinstance(v, IRI)),
    (SH.lessThanOrEquals, "less-than-or-equals-kind", lambda v, g: isinstance(v, IRI)),
    (SH.shape, "shape-kind", lambda v, g: _is_iri_or_blank(v)),
    (SH["not"], "not-kind", lambda v, g: _is_iri_or_blank(v)),
    (SH["and"], "and-list", lambda v, g: _list_of(v, g, _is_iri_or_blank)),
    (SH["or"], "or-list", lambda v, g: _list_of(v, g, _is_iri_or_blank)),
    (SH.qualifiedValueShape, "qualified-value-shape-kind", lambda v, g: _is_iri_or_blank(v)),
    (SH.qualifiedMinCount, "qualified-count-type", lambda v, g: _is_integer(v)),
    (SH.qualifiedMaxCount, "qualified-count-type", lambda v, g: _is_integer(v)),
    (SH.closed, "closed-value", lambda v, g: boolean_value(v) is True),
    (SH.ignoredProperties, "ignored-properties-list",
     lambda v, g: _list_of(v, g, lambda m: isinstance(m, IRI))),
    (SH["in"], "in-list", lambda v, g: _list_of(v, g, _is_iri_or_blank)),
]

# each listed parameter may carry at most one value
_SINGLE_VALUED = [
    ("severity-multiple", (SH.severity,)),
    ("path-multiple", (SH.path,)),
    ("pattern-multiple", (SH.pattern,)),
    ("flags-multiple", (SH.flags,)),
    ("qualified-multiple", (SH.qualifiedValueShape, SH.qualifiedMinCount, SH.qualifiedMaxCount)),
    ("closed-multiple", (SH.closed, SH.ignoredProperties)),
]


def check_shape(s: Term, g: Graph) -> list[IllFormedness]:
    """Every ill-formed-shape rule ``s`` violates in ``g``, one entry per rule."""
    found: dict[str, list[str]] = {}

    def hit(rule: str, detail: str = "") -> None:
        found.setdefault(rule, [])
        if detail:
            found[rule].append(detail)

    for rule, params in _SINGLE_VALUED:
        for p in params:
            if len(g.objects(s, p)) > 1:
                hit(rule, f"{len(g.objects(s, p))} values for {p.value}")
    for p, rule, ok in _VALUE_RULES:
        for v in sorted(g.objects(s, p), key=term_key):
            if not ok(v, g):
                hit(rule, v.n3())
    if not isinstance(s, IRI) and is_instance(s, RDFS.Class, g):
        hit("implicit-class-kind")
    for p in sorted(g.objects(s, SH.path), key=term_key):
        try:
            compile_path(p, g)
        except IllFormedPath as exc:
            hit("path-ill-formed", exc.rule)
    if g.objects(s, SH.qualifiedValueShape) and not (
            g.objects(s, SH.qualifiedMinCount) or g.objects(s, SH.qualifiedMaxCount)):
        hit("qualified-count-missing")
    return [IllFormedness(rule, s, "; ".join(found[rule])) for rule in RULES if rule in found]


def check_shapes_graph(g: Graph) -> list[IllFormedness]:
    out: list[IllFormedness] = []
    for s in sorted(shapes_closure(g), key=term_key):
        out.extend(check_shape(s, g))
    return out


def extract_constraints(s: Term, g: Graph) -> tuple[Constraint, ...]:
    """One constraint per combination of the shape's mandatory-parameter values."""
    out = []
    for comp in REGISTRY.values():
        value_sets = [sorted(g.objects(s, p), key=term_key) for p in comp.mandatory]
        if not all(value_sets):
            continue
        optional = tuple(sorted(
            ((o, v) for o in comp.optional for v in g.objects(s, o)),
            key=lambda pv: (pv[0].value, term_key(pv[1])),
        ))
        for combo in itertools.product(*value_sets):
            out.append(Constraint(comp.id, tuple(zip(comp.mandatory, combo)), optional))
    return tuple(out)


def severity(s: Term, g: Graph) -> Term:
    vals = g.objects(s, SH.severity)
    return next(iter(vals)) if len(vals) == 1 else SH.Violation


def is_deactivated(s: Term, g: Graph) -> bool:
    return any(boolean_value(v) is True for v in g.objects(s, SH.deactivated))


def load_shape(s: Term, g: Graph) -> Shape:
    """Build the Shape record; ``s`` must already pass check_shape."""
    path_nodes = g.objects(s, SH.path)
    path_node = next(iter(path_nodes)) if len(path_nodes) == 1 else None
    path = compile_path(path_node, g) if path_node is not None else None
    targets = []
    for kind, p in (("node", SH.targetNode), ("class", SH.targetClass),
                    ("subjectsOf", SH.targetSubjectsOf), ("objectsOf", SH.targetObjectsOf)):
        targets.extend(TargetSpec(kind, v) for v in sorted(g.objects(s, p), key=term_key))
    if is_instance(s, RDFS.Class, g):
        targets.append(TargetSpec("implicitClass", s))
    messages = tuple(sorted((m for m in g.objects(s, SH.message) if isinstance(m, Literal)),
                            key=term_key))
    return Shape(
        node=s,
        severity=severity(s, g),
        messages=messages,
        deactivated=is_deactivated(s, g),
        path=path,
        path_node=path_node,
        constraints=extract_constraints(s, g),
        targets=tuple(targets),
    )


def target_nodes(spec: TargetSpec, data: Graph) -> set[Term]:
    if spec.kind == "node":
        return {spec.argument}
    if spec.kind in ("class", "implicitClass"):
        return instances_of(spec.argument, data)
    if spec.kind == "subjectsOf":
        return {s for s, _ in data.subject_objects(spec.argument)}
    if spec.kind == "objectsOf":
        return {o for _, o in data.subject_objects(spec.argument)}
    raise ValueError(f"unknown target kind {spec.kind!r}")


def complete_targets(shape: Shape, data: Graph) -> set[Term]:
    out: set[Term] = set()
    for spec in shape.targets:
        out |= target_nodes(spec, data)
    return out


def value_nodes(focus: Term, data: Graph, shape: Shape) -> set[Term]:
    if shape.path is None:
        return {focus}
    return eval_path(focus, shape.path, data)

