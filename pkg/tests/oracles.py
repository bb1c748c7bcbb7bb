"""Brute-force reference implementations, written straight from the definitions.

None of these reuse the package's algorithms; they only share the term and
graph containers.
"""

from __future__ import annotations

import datetime as dt
import re
from fractions import Fraction

from ashacl.terms import RDF, RDFS, SH, XSD_NS, BNode, IRI, Literal

TYPE, SUB, FIRST, REST, NIL = RDF.type, RDFS.subClassOf, RDF.first, RDF.rest, RDF.nil


def scan_values(n, p, triples):
    return {o for s, q, o in triples if s == n and q == p}


# lists

def _rest_reaches(start, target, triples):
    frontier = scan_values(start, REST, triples)
    seen = set()
    while frontier:
        x = frontier.pop()
        if x == target:
            return True
        if x in seen:
            continue
        seen.add(x)
        frontier |= scan_values(x, REST, triples)
    return False


def oracle_is_list(n, triples):
    if not isinstance(n, (IRI, BNode)):
        return False
    firsts = scan_values(n, FIRST, triples)
    rests = scan_values(n, REST, triples)
    if n == NIL and not firsts and not rests:
        return True
    if len(firsts) != 1 or len(rests) != 1:
        return False
    if _rest_reaches(n, n, triples):
        return False
    return oracle_is_list(next(iter(rests)), triples)


def oracle_members(n, triples):
    if not oracle_is_list(n, triples):
        return None
    if n == NIL:
        return []
    (first,) = scan_values(n, FIRST, triples)
    (rest,) = scan_values(n, REST, triples)
    return [first] + oracle_members(rest, triples)


# instances

def oracle_is_instance(n, m, triples):
    """Enumerate walks: one rdf:type step then rdfs:subClassOf steps, up to |g| edges.

    Walks that revisit a node inside the subClassOf part are pruned; any such
    walk contains a shorter one with the same endpoints.
    """
    triples = list(triples)
    limit = len(triples)

    def walk(node, length, visited):
        if node == m:
            return True
        if length >= limit:
            return False
        for s, p, o in triples:
            if s == node and p == SUB and o not in visited:
                if walk(o, length + 1, visited | {o}):
                    return True
        return False

    return any(walk(o, 1, {o}) for s, p, o in triples if s == n and p == TYPE)


# property paths as relations over a finite universe

def path_relation(e, triples, universe):
    """Set of (x, y) pairs; closures as the union of bounded relational powers."""
    from ashacl import paths as P

    if isinstance(e, P.PredicatePath):
        return {(s, o) for s, p, o in triples if p == e.iri}
    if isinstance(e, P.InversePath):
        return {(y, x) for x, y in path_relation(e.inner, triples, universe)}
    if isinstance(e, P.SequencePath):
        rel = path_relation(e.parts[0], triples, universe)
        for part in e.parts[1:]:
            nxt = path_relation(part, triples, universe)
            rel = {(x, z) for x, y in rel for y2, z in nxt if y == y2}
        return rel
    if isinstance(e, P.AlternativePath):
        out = set()
        for part in e.parts:
            out |= path_relation(part, triples, universe)
        return out
    ident = {(x, x) for x in universe}
    base = path_relation(e.inner, triples, universe)
    if isinstance(e, P.ZeroOrOnePath):
        return base | ident
    power, total = base, set(base)
    for _ in range(len(universe)):
        power = {(x, z) for x, y in power for y2, z in base if y == y2}
        total |= power
    if isinstance(e, P.ZeroOrMorePath):
        total |= ident
    return total


def oracle_eval_path(start, e, triples):
    universe = {start} | {s for s, _, _ in triples} | {o for _, _, o in triples}
    return {y for x, y in path_relation(e, triples, universe) if x == start}


# the path-cycle regular expression

_LETTER = {REST: "R", FIRST: "F", SH.alternativePath: "A", SH.inversePath: "I",
           SH.zeroOrMorePath: "Z", SH.oneOrMorePath: "O", SH.zeroOrOnePath: "Q"}
_CYCLE_RE = re.compile(r"(?:R*F|AR*F|I|Z|O|Q)+\Z")


def oracle_on_cycle(p, triples, max_len):
    """Enumerate closed walks from p of length <= max_len and regex-match them."""
    edges = [(s, _LETTER[q], o) for s, q, o in triples if q in _LETTER]

    def walk(node, word):
        if word and node == p and _CYCLE_RE.match(word):
            return True
        if len(word) >= max_len:
            return False
        return any(walk(o, word + letter) for s, letter, o in edges if s == node)

    return isinstance(p, BNode) and walk(p, "")


# SPARQL comparison, rebuilt from a type table

_INTS = {XSD_NS + t for t in ("integer", "int", "long", "short", "byte", "nonNegativeInteger",
                               "positiveInteger", "negativeInteger", "nonPositiveInteger",
                               "unsignedLong", "unsignedInt", "unsignedShort", "unsignedByte")}


def _oracle_value(t):
    if not isinstance(t, Literal) or t.lang is not None:
        return None
    d = t.datatype
    try:
        if d in _INTS:
            if not re.fullmatch(r"[+-]?\d+", t.lexical):
                return None
            return ("num", Fraction(int(t.lexical)))
        if d == XSD_NS + "decimal":
            if not re.fullmatch(r"[+-]?(\d+(\.\d*)?|\.\d+)", t.lexical):
                return None
            return ("num", Fraction(t.lexical))
        if d in (XSD_NS + "double", XSD_NS + "float"):
            return ("dbl", float(t.lexical.replace("INF", "inf")))
        if d == XSD_NS + "string":
            return ("str", t.lexical)
        if d == XSD_NS + "boolean":
            return ("bool", {"true": 1, "1": 1, "false": 0, "0": 0}[t.lexical])
        if d == XSD_NS + "dateTime":
            s = t.lexical.replace("Z", "+00:00")
            v = dt.datetime.fromisoformat(s)
            if v.tzinfo is None:
                v = v.replace(tzinfo=dt.timezone.utc)
            return ("dt", v)
    except (ValueError, KeyError):
        return None
    return None


def oracle_compare(op, a, b):
    """'true' | 'false' | 'error'."""
    va, vb = _oracle_value(a), _oracle_value(b)
    if va is None or vb is None:
        return "error"
    (fa, xa), (fb, xb) = va, vb
    if {fa, fb} <= {"num", "dbl"}:
        if "dbl" in (fa, fb):
            xa, xb = float(xa), float(xb)
    elif fa != fb:
        return "error"
    result = {"<": xa < xb, "<=": xa <= xb, ">": xa > xb, ">=": xa >= xb}[op]
    return "true" if result else "false"


def oracle_lang_matches(tag, rng):
    if rng == "*":
        return bool(tag)
    t = tag.lower().split("-")
    r = rng.lower().split("-")
    return t[:len(r)] == r


# one transcription per constraint component: returns the list of values
# (None for valueless results) that must be reported

def oracle_results(comp, params, f, V, d_triples, s_node, s_triples, conforms):
    name = comp.value.rsplit("#", 1)[1].replace("ConstraintComponent", "")
    V = set(V)
    x = params.get("main")

    def members(node):
        return oracle_members(node, s_triples) or []

    def ival(lit):
        return int(lit.lexical)

    def strv(v):
        return v.value if isinstance(v, IRI) else v.lexical

    vals_fp = scan_values(f, x, d_triples) if isinstance(x, IRI) else set()
    out = []
    for v in V:
        if name == "Class" and not oracle_is_instance(v, x, d_triples):
            out.append(v)
        elif name == "Datatype" and not (isinstance(v, Literal) and v.datatype == x.value):
            out.append(v)
        elif name == "NodeKind" and not {
            SH.BlankNode: isinstance(v, BNode), SH.IRI: isinstance(v, IRI),
            SH.Literal: isinstance(v, Literal)}[x]:
            out.append(v)
        elif name in ("MinExclusive", "MinInclusive", "MaxExclusive", "MaxInclusive"):
            op = {"MinExclusive": "<", "MinInclusive": "<=", "MaxExclusive": ">", "MaxInclusive": ">="}[name]
            if oracle_compare(op, x, v) != "true":
                out.append(v)
        elif name == "MinLength" and (isinstance(v, BNode) or len(strv(v)) < ival(x)):
            out.append(v)
        elif name == "MaxLength" and (isinstance(v, BNode) or len(strv(v)) > ival(x)):
            out.append(v)
        elif name == "Pattern":
            flags = params.get("flags")
            fl = 0
            for ch in (flags.lexical if flags else ""):
                fl |= {"i": re.I, "s": re.S, "m": re.M, "x": re.X}[ch]
            if isinstance(v, BNode) or not re.search(x.lexical, strv(v), fl):
                out.append(v)
        elif name == "Stem" and (not isinstance(v, IRI) or not v.value.startswith(x.lexical)):
            out.append(v)
        elif name == "LanguageIn" and not (
                isinstance(v, Literal) and v.lang is not None
                and any(oracle_lang_matches(v.lang, m.lexical) for m in members(x))):
            out.append(v)
        elif name == "UniqueLang" and isinstance(v, Literal) and v.lang is not None and any(
                w != v and isinstance(w, Literal) and w.lang is not None and w.lang.lower() == v.lang.lower()
                for w in V):
            out.append(v)
        elif name == "Equals" and v not in vals_fp:
            out.append(v)
        elif name == "Disjoint" and v in vals_fp:
            out.append(v)
        elif name == "LessThan" and not all(oracle_compare("<", v, w) == "true" for w in vals_fp):
            out.append(v)
        elif name == "LessThanOrEquals" and not all(oracle_compare("<=", v, w) == "true" for w in vals_fp):
            out.append(v)
        elif name == "Shape" and not conforms(v, x):
            out.append(v)
        elif name == "Not" and conforms(v, x):
            out.append(v)
        elif name == "And" and not all(conforms(v, m) for m in members(x)):
            out.append(v)
        elif name == "Or" and not any(conforms(v, m) for m in members(x)):
            out.append(v)
        elif name == "In" and v not in members(x):
            out.append(v)
    if name == "Equals":
        out.extend(w for w in vals_fp if w not in V)
    if name == "MinCount" and len(V) < ival(x):
        out.append(None)
    if name == "MaxCount" and len(V) > ival(x):
        out.append(None)
    if name == "HasValue" and x not in V:
        out.append(None)
    if name == "QualifiedValueShape":
        k = len([v for v in V if conforms(v, x)])
        lo, hi = params.get("qualifiedMinCount"), params.get("qualifiedMaxCount")
        if (lo is not None and k < ival(lo)) or (hi is not None and k > ival(hi)):
            out.append(None)
    if name == "Closed":
        allowed = set()
        for t in scan_values(s_node, SH.shape, s_triples):
            allowed |= {w for w in scan_values(t, SH.path, s_triples) if isinstance(w, IRI)}
        ign = params.get("ignoredProperties")
        if ign is not None:
            allowed |= set(members(ign))
        out.extend(o for s, p, o in d_triples if s == f and p not in allowed)
    return out
