"""Indexed triple store plus the basic graph relations: values, lists, instances."""

from __future__ import annotations

import itertools
from collections import defaultdict
from collections.abc import Iterable, Iterator

from .terms import RDF, RDFS, BNode, IRI, Literal, Term, term_key

Triple = tuple[Term, IRI, Term]

NIL = RDF.nil
FIRST = RDF.first
REST = RDF.rest
TYPE = RDF.type
SUBCLASS = RDFS.subClassOf

# Process-wide so blanks minted for different graphs never collide.
_blank_counter = itertools.count()


class Graph:
    """A set of RDF triples with subject, predicate and object indexes."""

    def __init__(self, triples: Iterable[Triple] = (), reserved: set[str] | None = None):
        self._triples: set[Triple] = set()
        self._spo: dict[Term, dict[IRI, set[Term]]] = defaultdict(lambda: defaultdict(set))
        self._pos: dict[IRI, dict[Term, set[Term]]] = defaultdict(lambda: defaultdict(set))
        self._osp: dict[Term, dict[Term, set[IRI]]] = defaultdict(lambda: defaultdict(set))
        self._blank_ids: set[str] = set()
        # may be shared between graphs that must never mint the same blank
        self._reserved: set[str] = reserved if reserved is not None else set()
        for t in triples:
            self.add(*t)

    # building

    def add(self, s: Term, p: IRI, o: Term) -> None:
        if not isinstance(s, (IRI, BNode)):
            raise ValueError(f"subject must be an IRI or blank node, got {s!r}")
        if not isinstance(p, IRI):
            raise ValueError(f"predicate must be an IRI, got {p!r}")
        if not isinstance(o, (IRI, BNode, Literal)):
            raise ValueError(f"object must be an RDF term, got {o!r}")
        t = (s, p, o)
        if t in self._triples:
            return
        self._triples.add(t)
        self._spo[s][p].add(o)
        self._pos[p][o].add(s)
        self._osp[o][s].add(p)
        for x in (s, o):
            if isinstance(x, BNode):
                self._blank_ids.add(x.id)

    def remove(self, s: Term, p: IRI, o: Term) -> None:
        t = (s, p, o)
        if t not in self._triples:
            return
        self._triples.remove(t)
        _discard(self._spo, s, p, o)
        _discard(self._pos, p, o, s)
        _discard(self._osp, o, s, p)

    def update(self, triples: Iterable[Triple]) -> None:
        for t in triples:
            self.add(*t)

    def reserve_blanks(self, ids: Iterable[str]) -> None:
        """Keep fresh_blank from handing out any of ``ids``."""
        self._reserved.update(ids)

    def fresh_blank(self) -> BNode:
        while True:
            bid = "g%d" % next(_blank_counter)
            if bid not in self._blank_ids and bid not in self._reserved:
                self._reserved.add(bid)
                return BNode(bid)

    def copy(self) -> Graph:
        g = Graph(self._triples)
        g._reserved.update(self._reserved)
        return g

    # reading

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: object) -> bool:
        return t in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __repr__(self) -> str:
        return f"<Graph with {len(self)} triples>"

    @property
    def blank_ids(self) -> frozenset[str]:
        return frozenset(self._blank_ids)

    def objects(self, s: Term, p: IRI) -> set[Term]:
        by_p = self._spo.get(s)
        if not by_p:
            return set()
        return set(by_p.get(p, ()))

    def subjects(self, p: IRI, o: Term) -> set[Term]:
        by_o = self._pos.get(p)
        if not by_o:
            return set()
        return set(by_o.get(o, ()))

    def predicate_objects(self, s: Term) -> Iterator[tuple[IRI, Term]]:
        for p, objs in self._spo.get(s, {}).items():
            for o in objs:
                yield p, o

    def subject_predicates(self, o: Term) -> Iterator[tuple[Term, IRI]]:
        for s, preds in self._osp.get(o, {}).items():
            for p in preds:
                yield s, p

    def subject_objects(self, p: IRI) -> Iterator[tuple[Term, Term]]:
        for o, subs in self._pos.get(p, {}).items():
            for s in subs:
                yield s, o

    def triples(self, s: Term | None = None, p: IRI | None = None,
                o: Term | None = None) -> Iterator[Triple]:
        """Pattern match; ``None`` is a wildcard."""
        if s is not None:
            if p is not None:
                for obj in self.objects(s, p):
                    if o is None or obj == o:
                        yield (s, p, obj)
            else:
                for pred, obj in list(self.predicate_objects(s)):
                    if o is None or obj == o:
                        yield (s, pred, obj)
        elif p is not None:
            if o is not None:
                for sub in self.subjects(p, o):
                    yield (sub, p, o)
            else:
                yield from list(self.subject_objects(p))
        elif o is not None:
            for sub, pred in list(self.subject_predicates(o)):
                yield (sub, pred, o)
        else:
            yield from list(self._triples)

    def has_subject(self, s: Term) -> bool:
        return bool(self._spo.get(s))

    def nodes(self) -> set[Term]:
        """Every subject and object of the graph."""
        out: set[Term] = set()
        for s, _, o in self._triples:
            out.add(s)
            out.add(o)
        return out

    def sorted_triples(self) -> list[Triple]:
        return sorted(self._triples, key=lambda t: (term_key(t[0]), term_key(t[1]), term_key(t[2])))


def _discard(index: dict, a, b, c) -> None:
    inner = index[a]
    inner[b].discard(c)
    if not inner[b]:
        del inner[b]
    if not inner:
        del index[a]


def values(n: Term, p: IRI, g: Graph) -> set[Term]:
    return g.objects(n, p)


def fresh_blank(g: Graph) -> BNode:
    return g.fresh_blank()


def list_members(n: Term, g: Graph) -> list[Term] | None:
    """Members of ``n`` when it is a well-formed list in ``g``, else None.

    A well-formed list is ``rdf:nil`` with no first/rest values, or an IRI or
    blank cell with exactly one ``rdf:first`` and exactly one ``rdf:rest``
    whose value is again a list, with no ``rdf:rest`` cycle.
    """
    members: list[Term] = []
    seen: set[Term] = set()
    node = n
    while True:
        if not isinstance(node, (IRI, BNode)):
            return None
        firsts = g.objects(node, FIRST)
        rests = g.objects(node, REST)
        if node == NIL:
            return members if not firsts and not rests else None
        if node in seen or len(firsts) != 1 or len(rests) != 1:
            return None
        seen.add(node)
        members.append(next(iter(firsts)))
        node = next(iter(rests))


def superclasses(c: Term, g: Graph) -> set[Term]:
    """``c`` plus everything reachable from it over rdfs:subClassOf."""
    seen = {c}
    stack = [c]
    while stack:
        for sup in g.objects(stack.pop(), SUBCLASS):
            if sup not in seen:
                seen.add(sup)
                stack.append(sup)
    return seen


def subclasses(c: Term, g: Graph) -> set[Term]:
    """``c`` plus everything that reaches it over rdfs:subClassOf."""
    seen = {c}
    stack = [c]
    while stack:
        for sub in g.subjects(SUBCLASS, stack.pop()):
            if sub not in seen:
                seen.add(sub)
                stack.append(sub)
    return seen


def is_instance(n: Term, m: Term, g: Graph) -> bool:
    """One rdf:type edge then zero or more rdfs:subClassOf edges from n to m."""
    seen: set[Term] = set()
    stack = list(g.objects(n, TYPE))
    while stack:
        c = stack.pop()
        if c == m:
            return True
        if c in seen:
            continue
        seen.add(c)
        stack.extend(g.objects(c, SUBCLASS))
    return False


def instances_of(m: Term, g: Graph) -> set[Term]:
    out: set[Term] = set()
    for c in subclasses(m, g):
        out |= g.subjects(TYPE, c)
    return out


def graph_union(gs: Iterable[Graph], merge: bool = False) -> Graph:
    """Union of graphs.

    With ``merge`` the blank nodes of every graph after the first are renamed
    apart from the blanks already present before the union is taken.
    """
    out = Graph()
    for g in gs:
        if merge and len(out):
            clash = g.blank_ids & (out.blank_ids | out._reserved)
            if clash:
                out.reserve_blanks(g.blank_ids)
                renames = {bid: out.fresh_blank() for bid in sorted(clash)}
                g = Graph(_rename(t, renames) for t in g)
        out.update(g)
        out.reserve_blanks(g._reserved)
    return out


def _rename(t: Triple, renames: dict[str, BNode]) -> Triple:
    s, p, o = t
    if isinstance(s, BNode) and s.id in renames:
        s = renames[s.id]
    if isinstance(o, BNode) and o.id in renames:
        o = renames[o.id]
    return (s, p, o)


def isomorphic(g1: Graph, g2: Graph) -> bool:
    """Graph isomorphism up to a bijective relabelling of blank nodes."""
    if len(g1) != len(g2):
        return False
    ground1 = {t for t in g1 if not _has_blank(t)}
    ground2 = {t for t in g2 if not _has_blank(t)}
    if ground1 != ground2:
        return False
    b1 = sorted({x for t in g1 for x in (t[0], t[2]) if isinstance(x, BNode)}, key=term_key)
    b2 = sorted({x for t in g2 for x in (t[0], t[2]) if isinstance(x, BNode)}, key=term_key)
    if len(b1) != len(b2):
        return False
    rest1 = [t for t in g1 if _has_blank(t)]
    rest2 = [t for t in g2 if _has_blank(t)]
    c1 = _refine({b: 0 for b in b1}, rest1)
    c2 = _refine({b: 0 for b in b2}, rest2)
    return _search(c1, c2, rest1, rest2, set(rest2))


def _has_blank(t: Triple) -> bool:
    return isinstance(t[0], BNode) or isinstance(t[2], BNode)


def _refine(colors: dict[BNode, object], triples: list[Triple]) -> dict[BNode, object]:
    """Colour refinement; colours are hashable signatures comparable across graphs."""
    n_classes = len(set(colors.values()))
    for _ in range(len(colors) + 1):
        sig: dict[BNode, list] = {b: [] for b in colors}
        for s, p, o in triples:
            if isinstance(s, BNode):
                sig[s].append((0, p.value, colors[o] if isinstance(o, BNode) else ("t", term_key(o))))
            if isinstance(o, BNode):
                sig[o].append((1, p.value, colors[s] if isinstance(s, BNode) else ("t", term_key(s))))
        new = {b: hash((colors[b], tuple(sorted(map(repr, sig[b]))))) for b in colors}
        k = len(set(new.values()))
        colors = new
        if k == n_classes:
            break
        n_classes = k
    return colors


def _search(c1, c2, rest1, rest2, set2) -> bool:
    hist1 = sorted(c1.values())
    hist2 = sorted(c2.values())
    if hist1 != hist2:
        return False
    classes: dict[object, list[BNode]] = defaultdict(list)
    for b, c in c1.items():
        classes[c].append(b)
    ambiguous = [bs for bs in classes.values() if len(bs) > 1]
    if not ambiguous:
        by_color = {c: b for b, c in c2.items()}
        mapping = {b: by_color[c] for b, c in c1.items()}
        return all(_rename_map(t, mapping) in set2 for t in rest1)
    target = min(ambiguous, key=len)
    pick = target[0]
    color = c1[pick]
    marker = ("individual", color)
    for cand in [b for b, c in c2.items() if c == color]:
        n1 = dict(c1)
        n2 = dict(c2)
        n1[pick] = hash(marker)
        n2[cand] = hash(marker)
        if _search(_refine(n1, rest1), _refine(n2, rest2), rest1, rest2, set2):
            return True
    return False


def _rename_map(t: Triple, m: dict[BNode, BNode]) -> Triple:
    s, p, o = t
    return (m.get(s, s), p, m.get(o, o))
