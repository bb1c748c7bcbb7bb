"""Property paths: compile an RDF encoding to an expression tree, evaluate it, encode it back."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .graph import FIRST, NIL, REST, Graph, list_members
from .terms import SH, BNode, IRI, Term

ALTERNATIVE = SH.alternativePath
INVERSE = SH.inversePath
ZERO_OR_MORE = SH.zeroOrMorePath
ONE_OR_MORE = SH.oneOrMorePath
ZERO_OR_ONE = SH.zeroOrOnePath

_UNARY_KEYS = (INVERSE, ZERO_OR_MORE, ONE_OR_MORE, ZERO_OR_ONE)

RULE_MULTIPLE_KEYS = "path-multiple-keys"
RULE_CYCLE = "path-cycle"
RULE_NO_UNIQUE_CASE = "path-no-unique-case"


@dataclass(frozen=True, slots=True)
class PredicatePath:
    iri: IRI


@dataclass(frozen=True, slots=True)
class SequencePath:
    parts: tuple


@dataclass(frozen=True, slots=True)
class AlternativePath:
    parts: tuple


@dataclass(frozen=True, slots=True)
class InversePath:
    inner: PathExpr


@dataclass(frozen=True, slots=True)
class ZeroOrMorePath:
    inner: PathExpr


@dataclass(frozen=True, slots=True)
class OneOrMorePath:
    inner: PathExpr


@dataclass(frozen=True, slots=True)
class ZeroOrOnePath:
    inner: PathExpr


PathExpr = Union[PredicatePath, SequencePath, AlternativePath, InversePath,
                 ZeroOrMorePath, OneOrMorePath, ZeroOrOnePath]

_UNARY_CTOR = {
    INVERSE: InversePath,
    ZERO_OR_MORE: ZeroOrMorePath,
    ONE_OR_MORE: OneOrMorePath,
    ZERO_OR_ONE: ZeroOrOnePath,
}
_UNARY_PRED = {ctor: pred for pred, ctor in _UNARY_CTOR.items()}


class IllFormedPath(ValueError):
    def __init__(self, rule: str, node: Term, detail: str = ""):
        super().__init__(f"{rule}: {node}" + (f" ({detail})" if detail else ""))
        self.rule = rule
        self.node = node
        self.detail = detail


def has_multiple_keys(p: Term, g: Graph) -> bool:
    if not isinstance(p, BNode):
        return False
    groups = int(bool(g.objects(p, FIRST) or g.objects(p, REST)))
    groups += bool(g.objects(p, ALTERNATIVE))
    groups += sum(bool(g.objects(p, k)) for k in _UNARY_KEYS)
    return groups > 1


def on_path_cycle(p: Term, g: Graph) -> bool:
    """Whether a blank node returns to itself along a sequence of path-building edges.

    The accepted edge sequences are one or more repetitions of
    ``rdf:rest* rdf:first``, ``sh:alternativePath rdf:rest* rdf:first`` or a
    single unary path predicate.  Searched as reachability over
    (node, automaton state) pairs: state 0 sits at a unit boundary, state 1
    is inside a ``rdf:rest*`` run waiting for ``rdf:first``.
    """
    if not isinstance(p, BNode):
        return False
    start = (p, 0)
    seen = set()
    stack = [start]
    while stack:
        node, state = stack.pop()
        succ = []
        if state == 0:
            for key in _UNARY_KEYS:
                succ.extend((o, 0) for o in g.objects(node, key))
            succ.extend((o, 1) for o in g.objects(node, ALTERNATIVE))
        succ.extend((o, 1) for o in g.objects(node, REST))
        succ.extend((o, 0) for o in g.objects(node, FIRST))
        for nxt in succ:
            if nxt == start:
                return True
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


class _Compiler:
    def __init__(self, g: Graph):
        self.g = g
        self.memo: dict[Term, PathExpr | IllFormedPath] = {}

    def compile(self, p: Term) -> PathExpr:
        got = self.memo.get(p)
        if got is None:
            got = self.memo[p] = self._compile(p)
        if isinstance(got, IllFormedPath):
            raise got
        return got

    def well_formed(self, p: Term) -> PathExpr | None:
        try:
            return self.compile(p)
        except IllFormedPath:
            return None

    def _compile(self, p: Term) -> PathExpr | IllFormedPath:
        g = self.g
        if has_multiple_keys(p, g):
            return IllFormedPath(RULE_MULTIPLE_KEYS, p)
        if on_path_cycle(p, g):
            return IllFormedPath(RULE_CYCLE, p)
        matches: list[PathExpr] = []
        if isinstance(p, IRI):
            matches.append(PredicatePath(p))
        if isinstance(p, BNode):
            members = list_members(p, g)
            if members is not None and len(members) >= 2:
                parts = [self.well_formed(m) for m in members]
                if all(x is not None for x in parts):
                    matches.append(SequencePath(tuple(parts)))
            alts = g.objects(p, ALTERNATIVE)
            if len(alts) == 1:
                members = list_members(next(iter(alts)), g)
                if members is not None and len(members) >= 2:
                    parts = [self.well_formed(m) for m in members]
                    if all(x is not None for x in parts):
                        matches.append(AlternativePath(tuple(parts)))
            for key, ctor in _UNARY_CTOR.items():
                vals = g.objects(p, key)
                if len(vals) == 1:
                    inner = self.well_formed(next(iter(vals)))
                    if inner is not None:
                        matches.append(ctor(inner))
        if len(matches) != 1:
            return IllFormedPath(RULE_NO_UNIQUE_CASE, p, f"{len(matches)} mapping cases apply")
        return matches[0]


def compile_path(p: Term, g: Graph) -> PathExpr:
    """Map an RDF-encoded path to its expression tree; raises IllFormedPath."""
    return _Compiler(g).compile(p)


def path_equivalent(e1: PathExpr, e2: PathExpr) -> bool:
    return e1 == e2


def eval_path(start: Term, e: PathExpr, g: Graph) -> set[Term]:
    """Every v such that (start, v) is a solution of ``e`` over ``g``."""
    return _eval({start}, e, g, True)


def _eval(nodes: set[Term], e: PathExpr, g: Graph, forward: bool) -> set[Term]:
    if isinstance(e, PredicatePath):
        out: set[Term] = set()
        if forward:
            for n in nodes:
                out |= g.objects(n, e.iri)
        else:
            for n in nodes:
                out |= g.subjects(e.iri, n)
        return out
    if isinstance(e, InversePath):
        return _eval(nodes, e.inner, g, not forward)
    if isinstance(e, SequencePath):
        parts = e.parts if forward else reversed(e.parts)
        for part in parts:
            nodes = _eval(nodes, part, g, forward)
            if not nodes:
                break
        return nodes
    if isinstance(e, AlternativePath):
        out = set()
        for part in e.parts:
            out |= _eval(nodes, part, g, forward)
        return out
    if isinstance(e, ZeroOrOnePath):
        return set(nodes) | _eval(nodes, e.inner, g, forward)
    if isinstance(e, (ZeroOrMorePath, OneOrMorePath)):
        reached = _closure(nodes, e.inner, g, forward)
        if isinstance(e, ZeroOrMorePath):
            reached |= nodes
        return reached
    raise TypeError(f"not a path expression: {e!r}")


def _closure(start: set[Term], inner: PathExpr, g: Graph, forward: bool) -> set[Term]:
    """Nodes reachable in one or more ``inner`` steps; the visited set bounds the loop."""
    reached: set[Term] = set()
    frontier = set(start)
    while frontier:
        step = _eval(frontier, inner, g, forward) - reached
        reached |= step
        frontier = step
    return reached


def encode_path(e: PathExpr, into: Graph) -> Term:
    """Write an RDF encoding of ``e`` into ``into`` using fresh blanks; return its node."""
    if isinstance(e, PredicatePath):
        return e.iri
    if isinstance(e, SequencePath):
        return encode_list([encode_path(x, into) for x in e.parts], into)
    node = into.fresh_blank()
    if isinstance(e, AlternativePath):
        into.add(node, ALTERNATIVE, encode_list([encode_path(x, into) for x in e.parts], into))
    else:
        into.add(node, _UNARY_PRED[type(e)], encode_path(e.inner, into))
    return node


def encode_list(items: list[Term], into: Graph) -> Term:
    """Write a fresh rdf:first/rdf:rest chain holding ``items``; return its head."""
    if not items:
        return NIL
    cells = [into.fresh_blank() for _ in items]
    for i, item in enumerate(items):
        into.add(cells[i], FIRST, item)
        into.add(cells[i], REST, cells[i + 1] if i + 1 < len(cells) else NIL)
    return cells[0]


def to_sparql(e: PathExpr) -> str:
    """SPARQL surface syntax, handy in diagnostics."""
    if isinstance(e, PredicatePath):
        return e.iri.n3()
    if isinstance(e, SequencePath):
        return "(" + " / ".join(to_sparql(x) for x in e.parts) + ")"
    if isinstance(e, AlternativePath):
        return "(" + " | ".join(to_sparql(x) for x in e.parts) + ")"
    suffix = {InversePath: None, ZeroOrMorePath: "*", OneOrMorePath: "+", ZeroOrOnePath: "?"}[type(e)]
    if suffix is None:
        return "^" + to_sparql(e.inner)
    return to_sparql(e.inner) + suffix
