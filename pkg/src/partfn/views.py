"""Local views and the model quantities attached to each of them.

match
    Central edge e = uv together with the incident edges that are externally
    uncovered, i.e. not incident to an edge of M outside {e} and N(e).  Up to
    edge-rooted isomorphism this graph is determined by (a, b, c): a and b
    count uncovered private neighbours of the two endpoints (a <= b) and c
    counts uncovered common neighbours, each contributing a triangle.
ind
    Induced subgraph on the neighbours of v that have no neighbour in
    I minus N(v).  Note v itself belongs to I minus N(v), so v in I forces
    the empty view.
potts
    G[N2bar(v)] with the colours of the vertices at distance exactly 2,
    canonical up to global colour permutation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Any, Iterator, Optional, Sequence

from .canon import canon
from .exact import RatPoly, as_rat, poly_eval
from .graph import Graph, GraphError, k_dd, regular_supergraph, rooted_ball
from .polys import ind_coeffs


@dataclass(frozen=True)
class LocalView:
    kind: str
    cert: bytes
    data: Any = field(compare=False, hash=False)

    def hex(self) -> str:
        return self.cert.hex()

    def label(self) -> str:
        if self.kind == "match":
            return "edge(a=%d,b=%d,c=%d)" % self.data
        if self.kind == "ind":
            return f"C(n={self.data.n},edges={sorted(self.data.edges)})"
        g, cols = self.data
        return f"ball(n={g.n},boundary={cols})"


# matchings ---------------------------------------------------------------

def _match_view_graph(a: int, b: int, c: int) -> Graph:
    # 0 = u, 1 = v, then a private of u, b private of v, c common
    es = [(0, 1)]
    nxt = 2
    for _ in range(a):
        es.append((0, nxt)); nxt += 1
    for _ in range(b):
        es.append((1, nxt)); nxt += 1
    for _ in range(c):
        es += [(0, nxt), (1, nxt)]; nxt += 1
    return Graph(nxt, es)


@lru_cache(maxsize=None)
def match_view(a: int, b: int, c: int) -> LocalView:
    a, b = min(a, b), max(a, b)
    g = _match_view_graph(a, b, c)
    cert = canon(g, colors=[1, 1] + [0] * (g.n - 2))
    return LocalView("match", cert, (a, b, c))


def match_view_at(g: Graph, partner: dict[int, int], e: tuple[int, int]) -> LocalView:
    """View at edge e given the matching as a partner map."""
    u, v = e
    a = b = c = 0
    for w in g.adj[u]:
        if w == v:
            continue
        if partner.get(w, u) in (u, v):
            if w in g.adj[v]:
                c += 1
            else:
                a += 1
    for w in g.adj[v]:
        if w != u and w not in g.adj[u] and partner.get(w, v) in (u, v):
            b += 1
    return match_view(a, b, c)


def candidate_match_views(d: int) -> list[LocalView]:
    out = []
    for c in range(d):
        for a in range(d - c):
            for b in range(a, d - c):
                out.append(match_view(a, b, c))
    return out


@dataclass(frozen=True)
class MatchViewStats:
    """Weighted matchings of the view graph and what each says about e and N(e)."""
    # entries: (|M_L|, e in M, #f in M, #f both free, #f exactly one matched,
    #           e both free, e exactly one matched)
    rows: tuple[tuple[int, int, int, int, int, int, int], ...]


@lru_cache(maxsize=None)
def match_view_stats(a: int, b: int, c: int, d: int) -> MatchViewStats:
    g = _match_view_graph(a, b, c)
    edges = g.edge_list()
    cov_u = d - 1 - (a + c)
    cov_v = d - 1 - (b + c)
    if cov_u < 0 or cov_v < 0:
        raise ValueError("view does not fit degree d")
    rows = []
    for mask in range(1 << len(edges)):
        chosen = [edges[i] for i in range(len(edges)) if mask >> i & 1]
        used = [x for ed in chosen for x in ed]
        if len(used) != len(set(used)):
            continue
        matched = set(used)
        e_in = int((0, 1) in chosen)
        f_in = f_free = f_one = 0
        for (x, y) in edges:
            if (x, y) == (0, 1):
                continue
            if (x, y) in chosen:
                f_in += 1
                continue
            k = (x in matched) + (y in matched)
            f_free += k == 0
            f_one += k == 1
        # covered incident edges: far endpoint matched outside, edge itself not in M
        f_one += cov_u * (0 not in matched) + cov_v * (1 not in matched)
        ke = (0 in matched) + (1 in matched)
        rows.append((len(chosen), e_in, f_in, f_free, f_one,
                     int(ke == 0), int(ke == 1 and not e_in)))
    return MatchViewStats(tuple(rows))


def match_view_quantities(view: LocalView, d: int, lam: Fraction) -> dict[str, Fraction]:
    """Conditional expectations given the view, exact at fugacity lam.

    root: P(e in M | L) = lam / Z_L.  For each edge type T the double-counting
    defect E[#f in N(e) of type T | L] - 2(d-1) P(e of type T | L).
    """
    lam = as_rat(lam)
    a, b, c = view.data
    st = match_view_stats(a, b, c, d)
    z = Fraction(0)
    acc = [Fraction(0)] * 6
    for row in st.rows:
        w = lam ** row[0]
        z += w
        for i in range(6):
            acc[i] += w * row[i + 1]
    e_in, f_in, f_free, f_one, e_free, e_one = (x / z for x in acc)
    k = 2 * (d - 1)
    return {
        "root": e_in,
        "Z": z,
        "in": f_in - k * e_in,
        "free": f_free - k * e_free,
        "one": f_one - k * e_one,
    }


# independent sets --------------------------------------------------------

def ind_view(c: Graph) -> LocalView:
    return LocalView("ind", canon(c), c)


def ind_view_at(g: Graph, members: set[int], v: int, cache: Optional[dict] = None) -> LocalView:
    covered_by = members - set(g.adj[v])
    unc = tuple(w for w in sorted(g.adj[v]) if not (g.adj[w] & covered_by))
    if cache is None:
        return ind_view(g.induced(unc)[0])
    hit = cache.get(unc)
    if hit is None:
        hit = cache[unc] = ind_view(g.induced(unc)[0])
    return hit


@lru_cache(maxsize=None)
def candidate_ind_views(d: int) -> tuple[LocalView, ...]:
    """All graphs on at most d vertices, one per isomorphism class."""
    seen: dict[bytes, LocalView] = {}
    for k in range(d + 1):
        pairs = list(combinations(range(k), 2))
        for mask in range(1 << len(pairs)):
            c = Graph(k, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
            lv = ind_view(c)
            seen.setdefault(lv.cert, lv)
    return tuple(sorted(seen.values(), key=lambda lv: (lv.data.n, lv.data.m, lv.cert)))


def ind_view_quantities(view: LocalView, d: int, lam: Fraction) -> dict[str, Fraction]:
    """root: lam/(1+lam) / Z_C, an unbiased estimator of P(v in I);
    nbr: lam Z_C'/Z_C / d, the same quantity estimated through N(v)."""
    lam = as_rat(lam)
    cs = ind_coeffs(view.data).coeffs
    z = poly_eval(RatPoly(cs), lam)
    dz = sum(k * ck * lam ** k for k, ck in enumerate(cs))
    root = lam / (1 + lam) / z
    nbr = dz / z / d
    return {"root": root, "Z": z, "nbr": nbr, "defect": root - nbr}


# Potts -------------------------------------------------------------------

def potts_view_at(g: Graph, colors: Sequence[int], v: int, q: int,
                  cache: Optional[dict] = None) -> LocalView:
    if cache is None:
        ball = rooted_ball(g, v, 2)
    else:
        ball = cache.get(("ball", v))
        if ball is None:
            ball = cache[("ball", v)] = rooted_ball(g, v, 2)
    bcols = tuple(colors[ball.labels[i]] if ball.dist[i] == 2 else -1 for i in range(ball.graph.n))
    key = (v, bcols)
    if cache is not None and key in cache:
        return cache[key]
    best = None
    for perm in permutations(range(q)):
        cols = [perm[c] if c >= 0 else -1 for c in bcols]
        cert = canon(ball.graph, root=0, colors=cols)
        if best is None or cert < best[0]:
            best = (cert, tuple(cols))
    lv = LocalView("potts", best[0], (ball.graph, best[1]))
    if cache is not None:
        cache[key] = lv
    return lv


@lru_cache(maxsize=None)
def kdd_potts_views(d: int, q: int) -> frozenset[bytes]:
    """Certificates of all Potts views occurring in K_{d,d} at positive fugacity."""
    g = k_dd(d)
    cache: dict = {}
    out = set()
    for cols in product(range(q), repeat=g.n):
        for v in range(g.n):
            out.add(potts_view_at(g, cols, v, q, cache).cert)
    return frozenset(out)


# K_{d,d} views -----------------------------------------------------------

def kdd_views(d: int, kind: str) -> list[LocalView]:
    """Views occurring in K_{d,d} at any positive fugacity."""
    if kind == "match":
        return [match_view(j, j, 0) for j in range(d)]
    if kind == "ind":
        return [ind_view(Graph(0)), ind_view(Graph(d))]
    raise ValueError(f"no fixed K_dd view list for {kind!r}")


# realizability -----------------------------------------------------------

@dataclass(frozen=True)
class Realization:
    host: Graph
    root: Any        # edge (u, v) for match, vertex for ind
    config: tuple    # matching edges, or independent set members


def _partner_map(edges) -> dict[int, int]:
    p = {}
    for x, y in edges:
        p[x] = y
        p[y] = x
    return p


def realize_match_view(view: LocalView, d: int) -> Realization:
    a, b, c = view.data
    es = [(0, 1)]
    mset = []
    nxt = 2

    def add_nbr(center: int, other: Optional[int], covered: bool):
        nonlocal nxt
        w = nxt
        nxt += 1
        es.append((center, w))
        if other is not None:
            es.append((other, w))
        if covered:
            z = nxt
            nxt += 1
            es.append((w, z))
            mset.append((w, z))

    for _ in range(a):
        add_nbr(0, None, False)
    for _ in range(d - 1 - a - c):
        add_nbr(0, None, True)
    for _ in range(b):
        add_nbr(1, None, False)
    for _ in range(d - 1 - b - c):
        add_nbr(1, None, True)
    for _ in range(c):
        add_nbr(0, 1, False)
    base = Graph(nxt, es)
    host, _ = regular_supergraph(base, d)
    return Realization(host, (0, 1), tuple(mset))


def realize_ind_view(view: LocalView, d: int) -> Realization:
    c: Graph = view.data
    k = c.n
    if k > d:
        raise GraphError("view larger than d")
    # 0 = v, 1..k = uncovered (carry C), then covered neighbours with private z
    es = [(0, i + 1) for i in range(k)] + [(x + 1, y + 1) for x, y in c.edges]
    members = []
    nxt = k + 1
    for _ in range(d - k):
        w, z = nxt, nxt + 1
        nxt += 2
        es += [(0, w), (w, z)]
        members.append(z)
    host, _ = regular_supergraph(Graph(nxt, es), d)
    return Realization(host, 0, tuple(members))


def certify_realizable(view: LocalView, d: int) -> Optional[Realization]:
    """Build a d-regular host and configuration producing ``view``; None if the
    construction does not reproduce it."""
    if view.kind == "match":
        r = realize_match_view(view, d)
        got = match_view_at(r.host, _partner_map(r.config), r.root)
    elif view.kind == "ind":
        r = realize_ind_view(view, d)
        got = ind_view_at(r.host, set(r.config), r.root)
    else:
        raise ValueError("realizability certificates exist for match and ind views")
    if not r.host.is_regular(d) or got != view:
        return None
    return r


# configuration enumeration ----------------------------------------------

def iter_matchings(g: Graph) -> Iterator[list[tuple[int, int]]]:
    edges = g.edge_list()
    used = [False] * g.n
    cur: list[tuple[int, int]] = []

    def rec(i: int):
        if i == len(edges):
            yield list(cur)
            return
        yield from rec(i + 1)
        u, v = edges[i]
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            cur.append((u, v))
            yield from rec(i + 1)
            cur.pop()
            used[u] = used[v] = False

    yield from rec(0)


def iter_independent_sets(g: Graph) -> Iterator[list[int]]:
    blocked = [0] * g.n
    cur: list[int] = []

    def rec(v: int):
        if v == g.n:
            yield list(cur)
            return
        yield from rec(v + 1)
        if not blocked[v]:
            cur.append(v)
            for w in g.adj[v]:
                blocked[w] += 1
            yield from rec(v + 1)
            for w in g.adj[v]:
                blocked[w] -= 1
            cur.pop()

    yield from rec(0)
