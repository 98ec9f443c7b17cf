"""Independent brute-force oracles.

Nothing here imports the engines under test except the Graph container and
named constructors.  Isomorphism goes through networkx, counting through
plain subset or colouring scans.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import networkx as nx

from partfn.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edge_list())
    return h


def brute_match(g: Graph) -> list[int]:
    """Scan all 2^m edge subsets."""
    es = g.edge_list()
    out = [0] * (g.n // 2 + 1)
    for mask in range(1 << len(es)):
        used = set()
        ok = True
        size = 0
        for i, (u, v) in enumerate(es):
            if mask >> i & 1:
                if u in used or v in used:
                    ok = False
                    break
                used.update((u, v))
                size += 1
        if ok:
            out[size] += 1
    return out


def brute_ind(g: Graph) -> list[int]:
    """Scan all 2^n vertex subsets."""
    es = g.edge_list()
    out = [0] * (g.n + 1)
    for mask in range(1 << g.n):
        if all(not (mask >> u & 1 and mask >> v & 1) for u, v in es):
            out[bin(mask).count("1")] += 1
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def brute_potts(g: Graph, q: int) -> list[int]:
    """Scan all q^n colourings."""
    es = g.edge_list()
    out = [0] * (g.m + 1)
    for cols in product(range(q), repeat=g.n):
        out[sum(1 for u, v in es if cols[u] == cols[v])] += 1
    return out


def z_value(c, lam: Fraction) -> Fraction:
    return sum((Fraction(x) * lam ** k for k, x in enumerate(c)), Fraction(0))


def occupancy(c, denom: int, lam: Fraction) -> Fraction:
    z = z_value(c, lam)
    return sum((k * x * lam ** k for k, x in enumerate(c)), Fraction(0)) / (z * denom)


def labelled_regular(d: int, n: int) -> list[frozenset]:
    """Every labelled d-regular graph on n vertices, by edge-by-edge backtracking."""
    pairs = list(combinations(range(n), 2))
    out = []
    deg = [0] * n

    def rec(i, chosen):
        if all(x == d for x in deg):
            out.append(frozenset(chosen))
            return
        if i == len(pairs):
            return
        u, v = pairs[i]
        # vertex u must be saturated once all its pairs are past
        if deg[u] < d and deg[v] < d:
            deg[u] += 1
            deg[v] += 1
            chosen.append((u, v))
            rec(i + 1, chosen)
            chosen.pop()
            deg[u] -= 1
            deg[v] -= 1
        nxt = pairs[i + 1][0] if i + 1 < len(pairs) else n
        if nxt != u and deg[u] < d:
            return
        rec(i + 1, chosen)

    rec(0, [])
    return out


def iso_classes(graphs) -> list[nx.Graph]:
    """Bucket networkx graphs into isomorphism classes with nx.is_isomorphic."""
    buckets: dict = {}
    for h in graphs:
        key = nx.weisfeiler_lehman_graph_hash(h)
        reps = buckets.setdefault(key, [])
        if not any(nx.is_isomorphic(h, r) for r in reps):
            reps.append(h)
    return [r for reps in buckets.values() for r in reps]


def naive_regular_classes(d: int, n: int) -> list[nx.Graph]:
    gs = []
    for es in labelled_regular(d, n):
        h = nx.Graph()
        h.add_nodes_from(range(n))
        h.add_edges_from(es)
        gs.append(h)
    return iso_classes(gs)


def nx_girth(h: nx.Graph) -> float:
    return nx.girth(h)


def rooted_ball_nx(h: nx.Graph, v: int, r: int) -> nx.Graph:
    dist = nx.single_source_shortest_path_length(h, v, cutoff=r)
    b = h.subgraph(dist).copy()
    for x in b.nodes:
        b.nodes[x]["root"] = x == v
    return b


def brute_profile(g: Graph, r: int) -> list[tuple[nx.Graph, Fraction]]:
    """rho_r(G) as (representative rooted ball, probability) pairs."""
    h = to_nx(g)
    classes: list[list] = []
    nm = lambda a, b: a["root"] == b["root"]
    for v in range(g.n):
        b = rooted_ball_nx(h, v, r)
        for cl in classes:
            if nx.is_isomorphic(b, cl[0], node_match=nm):
                cl[1] += 1
                break
        else:
            classes.append([b, 1])
    return [(b, Fraction(c, g.n)) for b, c in classes]


def brute_tv(g: Graph, h: Graph, r: int) -> Fraction:
    pg, ph = brute_profile(g, r), brute_profile(h, r)
    nm = lambda a, b: a["root"] == b["root"]
    total = Fraction(0)
    matched = set()
    for bg, p in pg:
        q = Fraction(0)
        for j, (bh, pp) in enumerate(ph):
            if nx.is_isomorphic(bg, bh, node_match=nm):
                q = pp
                matched.add(j)
                break
        total += abs(p - q)
    total += sum((pp for j, (_, pp) in enumerate(ph) if j not in matched), Fraction(0))
    return total / 2


def random_graph(rng, n: int, p: float) -> Graph:
    es = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph(n, es)
