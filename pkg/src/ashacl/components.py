"""The constraint-component registry and the per-component violation rules."""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from .graph import Graph, is_instance, list_members
from .sparql import Tristate, lang_matches, regex_match, sparql_compare, sparql_str, str_starts
from .terms import SH, BNode, IRI, Literal, Term, integer_value, term_key


@dataclass(frozen=True)
class ComponentDef:
    id: IRI
    mandatory: tuple[IRI, ...]
    optional: tuple[IRI, ...] = ()
    list_taking: frozenset[IRI] = frozenset()
    shape_inducing: frozenset[IRI] = frozenset()

    @property
    def parameters(self) -> tuple[IRI, ...]:
        return self.mandatory + self.optional


def _c(name: str, mandatory: str, optional: tuple[str, ...] = (), lists: tuple[str, ...] = (),
       shapes: tuple[str, ...] = ()) -> ComponentDef:
    return ComponentDef(
        SH[name + "ConstraintComponent"],
        (SH[mandatory],),
        tuple(SH[o] for o in optional),
        frozenset(SH[x] for x in lists),
        frozenset(SH[x] for x in shapes),
    )


REGISTRY: dict[IRI, ComponentDef] = {c.id: c for c in (
    _c("Class", "class"),
    _c("Datatype", "datatype"),
    _c("NodeKind", "nodeKind"),
    _c("MinCount", "minCount"),
    _c("MaxCount", "maxCount"),
    _c("MinExclusive", "minExclusive"),
    _c("MinInclusive", "minInclusive"),
    _c("MaxExclusive", "maxExclusive"),
    _c("MaxInclusive", "maxInclusive"),
    _c("MinLength", "minLength"),
    _c("MaxLength", "maxLength"),
    _c("Pattern", "pattern", optional=("flags",)),
    _c("Stem", "stem"),
    _c("LanguageIn", "languageIn", lists=("languageIn",)),
    _c("UniqueLang", "uniqueLang"),
    _c("Equals", "equals"),
    _c("Disjoint", "disjoint"),
    _c("LessThan", "lessThan"),
    _c("LessThanOrEquals", "lessThanOrEquals"),
    _c("Shape", "shape", shapes=("shape",)),
    _c("Not", "not", shapes=("not",)),
    _c("And", "and", lists=("and",), shapes=("and",)),
    _c("Or", "or", lists=("or",), shapes=("or",)),
    _c("QualifiedValueShape", "qualifiedValueShape",
       optional=("qualifiedMinCount", "qualifiedMaxCount"), shapes=("qualifiedValueShape",)),
    _c("Closed", "closed", optional=("ignoredProperties",), lists=("ignoredProperties",)),
    _c("HasValue", "hasValue"),
    _c("In", "in", lists=("in",)),
)}

LIST_TAKING: frozenset[IRI] = frozenset().union(*(c.list_taking for c in REGISTRY.values()))
SHAPE_INDUCING: frozenset[IRI] = frozenset().union(*(c.shape_inducing for c in REGISTRY.values()))
SHAPE_INDUCING_SINGLE = SHAPE_INDUCING - LIST_TAKING
SHAPE_INDUCING_LIST = SHAPE_INDUCING & LIST_TAKING


def registry() -> list[ComponentDef]:
    return list(REGISTRY.values())


def lookup(component: IRI) -> ComponentDef:
    return REGISTRY[component]


@dataclass(frozen=True)
class Constraint:
    """One component bound to concrete parameter values of a shape."""

    component: IRI
    mandatory: tuple[tuple[IRI, Term], ...]
    optional: tuple[tuple[IRI, Term], ...] = ()

    @property
    def parameter_values(self) -> tuple[tuple[IRI, Term], ...]:
        return self.mandatory + self.optional

    def value(self, param: IRI) -> Term:
        for p, v in self.mandatory:
            if p == param:
                return v
        raise KeyError(param)

    def optional_value(self, param: IRI) -> Term | None:
        for p, v in self.optional:
            if p == param:
                return v
        return None


@dataclass(frozen=True)
class ViolationRecord:
    focus: Term
    value: Term | None
    constraint: Constraint
    shape: object = field(compare=False, default=None)


ConformsFn = Callable[[Term, Term], bool]


@dataclass
class _Ctx:
    focus: Term
    values: set[Term]
    data: Graph
    shape_node: Term
    shapes: Graph
    conforms: ConformsFn
    c: Constraint


def _each(ctx: _Ctx, pred: Callable[[Term], bool]) -> list[Term | None]:
    return [v for v in sorted(ctx.values, key=term_key) if pred(v)]


def _class(ctx):
    x = ctx.c.value(SH["class"])
    return _each(ctx, lambda v: not is_instance(v, x, ctx.data))


def _datatype(ctx):
    x = ctx.c.value(SH.datatype)
    return _each(ctx, lambda v: not (isinstance(v, Literal) and v.datatype == x.value))


_KIND_TEST = {
    SH.BlankNode: lambda v: isinstance(v, BNode),
    SH.IRI: lambda v: isinstance(v, IRI),
    SH.Literal: lambda v: isinstance(v, Literal),
}


def _node_kind(ctx):
    test = _KIND_TEST[ctx.c.value(SH.nodeKind)]
    return _each(ctx, lambda v: not test(v))


def _min_count(ctx):
    return [None] if len(ctx.values) < integer_value(ctx.c.value(SH.minCount)) else []


def _max_count(ctx):
    return [None] if len(ctx.values) > integer_value(ctx.c.value(SH.maxCount)) else []


def _bound(param: str, op: str):
    def rule(ctx):
        i = ctx.c.value(SH[param])
        return _each(ctx, lambda v: sparql_compare(op, i, v) is not Tristate.TRUE)
    return rule


def _min_length(ctx):
    i = integer_value(ctx.c.value(SH.minLength))
    return _each(ctx, lambda v: isinstance(v, BNode) or len(sparql_str(v)) < i)


def _max_length(ctx):
    i = integer_value(ctx.c.value(SH.maxLength))
    return _each(ctx, lambda v: isinstance(v, BNode) or len(sparql_str(v)) > i)


def _pattern(ctx):
    r = ctx.c.value(SH.pattern).lexical
    flags_term = ctx.c.optional_value(SH.flags)
    flags = flags_term.lexical if flags_term is not None else ""
    return _each(ctx, lambda v: isinstance(v, BNode)
                 or regex_match(sparql_str(v), r, flags) is not Tristate.TRUE)


def _stem(ctx):
    i = ctx.c.value(SH.stem).lexical
    return _each(ctx, lambda v: not isinstance(v, IRI) or not str_starts(sparql_str(v), i))


def _language_in(ctx):
    ranges = [m.lexical for m in list_members(ctx.c.value(SH.languageIn), ctx.shapes) or []]
    return _each(ctx, lambda v: not (isinstance(v, Literal) and v.lang is not None
                                     and any(lang_matches(v.lang, r) for r in ranges)))


def _unique_lang(ctx):
    tags = Counter(v.lang.lower() for v in ctx.values if isinstance(v, Literal) and v.lang is not None)
    return _each(ctx, lambda v: isinstance(v, Literal) and v.lang is not None
                 and tags[v.lang.lower()] > 1)


def _equals(ctx):
    others = ctx.data.objects(ctx.focus, ctx.c.value(SH.equals))
    return sorted(ctx.values ^ others, key=term_key)


def _disjoint(ctx):
    others = ctx.data.objects(ctx.focus, ctx.c.value(SH.disjoint))
    return sorted(ctx.values & others, key=term_key)


def _less(param: str, op: str):
    def rule(ctx):
        others = ctx.data.objects(ctx.focus, ctx.c.value(SH[param]))
        return _each(ctx, lambda v: any(sparql_compare(op, v, w) is not Tristate.TRUE for w in others))
    return rule


def _shape(ctx):
    x = ctx.c.value(SH.shape)
    return _each(ctx, lambda v: not ctx.conforms(v, x))


def _not(ctx):
    x = ctx.c.value(SH["not"])
    return _each(ctx, lambda v: ctx.conforms(v, x))


def _and(ctx):
    members = list_members(ctx.c.value(SH["and"]), ctx.shapes) or []
    return _each(ctx, lambda v: not all(ctx.conforms(v, m) for m in members))


def _or(ctx):
    members = list_members(ctx.c.value(SH["or"]), ctx.shapes) or []
    return _each(ctx, lambda v: not any(ctx.conforms(v, m) for m in members))


def _qualified(ctx):
    x = ctx.c.value(SH.qualifiedValueShape)
    k = sum(1 for v in ctx.values if ctx.conforms(v, x))
    lo = ctx.c.optional_value(SH.qualifiedMinCount)
    hi = ctx.c.optional_value(SH.qualifiedMaxCount)
    if (lo is not None and k < integer_value(lo)) or (hi is not None and k > integer_value(hi)):
        return [None]
    return []


def allowed_predicates(shape_node: Term, shapes: Graph) -> set[Term]:
    """IRIs that are sh:path of some sh:shape value of the shape."""
    out: set[Term] = set()
    for t in shapes.objects(shape_node, SH.shape):
        out |= {w for w in shapes.objects(t, SH.path) if isinstance(w, IRI)}
    return out


def _closed(ctx):
    allowed = allowed_predicates(ctx.shape_node, ctx.shapes)
    ignored = ctx.c.optional_value(SH.ignoredProperties)
    if ignored is not None:
        allowed |= set(list_members(ignored, ctx.shapes) or [])
    hits = [(p, o) for p, o in ctx.data.predicate_objects(ctx.focus) if p not in allowed]
    return [o for p, o in sorted(hits, key=lambda po: (term_key(po[0]), term_key(po[1])))]


def _has_value(ctx):
    return [None] if ctx.c.value(SH.hasValue) not in ctx.values else []


def _in(ctx):
    members = set(list_members(ctx.c.value(SH["in"]), ctx.shapes) or [])
    return _each(ctx, lambda v: v not in members)


_RULES: dict[IRI, Callable[[_Ctx], list[Term | None]]] = {
    SH.ClassConstraintComponent: _class,
    SH.DatatypeConstraintComponent: _datatype,
    SH.NodeKindConstraintComponent: _node_kind,
    SH.MinCountConstraintComponent: _min_count,
    SH.MaxCountConstraintComponent: _max_count,
    SH.MinExclusiveConstraintComponent: _bound("minExclusive", "<"),
    SH.MinInclusiveConstraintComponent: _bound("minInclusive", "<="),
    SH.MaxExclusiveConstraintComponent: _bound("maxExclusive", ">"),
    SH.MaxInclusiveConstraintComponent: _bound("maxInclusive", ">="),
    SH.MinLengthConstraintComponent: _min_length,
    SH.MaxLengthConstraintComponent: _max_length,
    SH.PatternConstraintComponent: _pattern,
    SH.StemConstraintComponent: _stem,
    SH.LanguageInConstraintComponent: _language_in,
    SH.UniqueLangConstraintComponent: _unique_lang,
    SH.EqualsConstraintComponent: _equals,
    SH.DisjointConstraintComponent: _disjoint,
    SH.LessThanConstraintComponent: _less("lessThan", "<"),
    SH.LessThanOrEqualsConstraintComponent: _less("lessThanOrEquals", "<="),
    SH.ShapeConstraintComponent: _shape,
    SH.NotConstraintComponent: _not,
    SH.AndConstraintComponent: _and,
    SH.OrConstraintComponent: _or,
    SH.QualifiedValueShapeConstraintComponent: _qualified,
    SH.ClosedConstraintComponent: _closed,
    SH.HasValueConstraintComponent: _has_value,
    SH.InConstraintComponent: _in,
}
assert set(_RULES) == set(REGISTRY)


def eval_constraint(c: Constraint, focus: Term, value_nodes: Iterable[Term], data: Graph,
                    shape_node: Term, shapes: Graph, conforms: ConformsFn,
                    shape: object = None) -> list[ViolationRecord]:
    """Violations of one constraint for one focus node, in deterministic order.

    ``conforms(v, x)`` must answer whether ``v`` conforms to shape ``x``; the
    engine supplies it.  Closed can report the same value twice when it is
    the object of two disallowed triples, so the result is a list.
    """
    ctx = _Ctx(focus, set(value_nodes), data, shape_node, shapes, conforms, c)
    return [ViolationRecord(focus, v, c, shape) for v in _RULES[c.component](ctx)]
