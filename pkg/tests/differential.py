"""Implementation-versus-oracle comparisons shared by unit and acceptance tests."""

from __future__ import annotations

import itertools
import random
from collections import Counter

from ashacl.components import eval_constraint
from ashacl.graph import Graph, is_instance, list_members
from ashacl.paths import eval_path
from ashacl.terms import RDF, RDFS, BNode
from generators import NODES, PREDS, ex, random_component_case, random_path
from oracles import oracle_eval_path, oracle_is_instance, oracle_members, oracle_results


def component_divergence(seed: int, comp) -> str | None:
    """Describe a disagreement for one random case, or return None."""
    rng = random.Random(seed)
    c, focus, V, d, s_node, sg, conforms = random_component_case(rng, comp)
    got = eval_constraint(c, focus, V, d, s_node, sg, conforms)
    params = {"main": c.mandatory[0][1]}
    for p, v in c.optional:
        params[p.value.rsplit("#", 1)[1]] = v
    want = oracle_results(comp, params, focus, V, list(d), s_node, list(sg), conforms)
    if Counter(r.value for r in got) != Counter(want):
        return f"seed={seed} focus={focus} V={sorted(map(str, V))} got={[str(r.value) for r in got]} want={[str(w) for w in want]}"
    if any(r.focus != focus or r.constraint != c for r in got):
        return f"seed={seed} wrong focus or constraint on a record"
    return None


def small_graph(rng: random.Random, max_triples: int = 16) -> Graph:
    """At most eight distinct nodes: six IRIs and two blanks."""
    pool = NODES[:6] + [BNode("k0"), BNode("k1")]
    return Graph((rng.choice(pool), rng.choice(PREDS), rng.choice(pool))
                 for _ in range(rng.randint(0, max_triples)))


def path_divergence(seed: int) -> str | None:
    rng = random.Random(seed)
    g = small_graph(rng)
    e = random_path(rng, 3)
    for start in NODES[:4]:
        got, want = eval_path(start, e, g), oracle_eval_path(start, e, list(g))
        if got != want:
            return f"seed={seed} start={start} e={e} got={got} want={want}"
    return None


def list_family_divergences() -> tuple[int, int]:
    """(cases, disagreements) over every rest-digraph on up to 4 cells.

    Each cell has one rdf:first and zero, one or two rdf:rest values, each
    pointing at a cell or rdf:nil; a 3-cell family also varies first counts.
    """
    cases = bad = 0
    nil = RDF.nil
    for n in range(1, 5):
        cells = [BNode(f"c{i}") for i in range(n)]
        targets = cells + [nil]
        choices = [()] + [(t,) for t in targets] + list(itertools.combinations(targets, 2))
        for rests in itertools.product(choices, repeat=n):
            triples = [(c, RDF.first, ex(f"m{i}")) for i, c in enumerate(cells)]
            triples += [(c, RDF.rest, t) for c, rs in zip(cells, rests) for t in rs]
            g = Graph(triples)
            for c in cells + [nil]:
                cases += 1
                bad += list_members(c, g) != oracle_members(c, triples)
    for n in range(1, 4):
        cells = [BNode(f"c{i}") for i in range(n)]
        for firsts in itertools.product(range(3), repeat=n):
            for rests in itertools.product([None] + cells + [nil], repeat=n):
                triples = [(c, RDF.first, ex(f"m{j}")) for c, k in zip(cells, firsts) for j in range(k)]
                triples += [(c, RDF.rest, t) for c, t in zip(cells, rests) if t is not None]
                g = Graph(triples)
                for c in cells:
                    cases += 1
                    bad += list_members(c, g) != oracle_members(c, triples)
    return cases, bad


def instance_family_divergences() -> tuple[int, int]:
    """(cases, disagreements) over all type/subClassOf digraphs on 4 nodes.

    Node n carries rdf:type edges to any subset of the four nodes, and the
    other three carry any subset of the 9 possible rdfs:subClassOf edges.
    """
    cases = bad = 0
    n = ex("n")
    classes = [ex("A"), ex("B"), ex("C")]
    every = [n] + classes
    sub_edges = [(a, b) for a in classes for b in classes]
    for type_mask in range(16):
        types = [(n, RDF.type, every[i]) for i in range(4) if type_mask >> i & 1]
        for sub_mask in range(1 << len(sub_edges)):
            triples = types + [(a, RDFS.subClassOf, b) for i, (a, b) in enumerate(sub_edges) if sub_mask >> i & 1]
            g = Graph(triples)
            for x in every:
                for m in every:
                    cases += 1
                    bad += is_instance(x, m, g) != oracle_is_instance(x, m, triples)
    return cases, bad
