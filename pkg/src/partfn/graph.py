"""Finite simple graphs with named extremal families, rooted balls and graph I/O."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class GraphError(ValueError):
    pass


class Graph:
    """Immutable simple graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "adj", "_hash")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), d_max: Optional[int] = None):
        if n < 0:
            raise GraphError("negative vertex count")
        es = set()
        adj = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in es:
                raise GraphError(f"parallel edge ({a},{b})")
            es.add((a, b))
            adj[a].add(b)
            adj[b].add(a)
        if d_max is not None:
            bad = [v for v in range(n) if len(adj[v]) > d_max]
            if bad:
                raise GraphError(f"vertex {bad[0]} exceeds max degree {d_max}")
        self.n = n
        self.edges = frozenset(es)
        self.adj = tuple(frozenset(a) for a in adj)
        self._hash = None

    # basic queries -------------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def is_regular(self, d: Optional[int] = None) -> bool:
        ds = set(self.degrees())
        if not ds:
            return True
        return len(ds) == 1 and (d is None or ds == {d})

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # derived graphs ------------------------------------------------------
    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Vertex v becomes perm[v]."""
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph; returns (graph, old_label_of_new_vertex)."""
        order = list(vertices)
        idx = {v: i for i, v in enumerate(order)}
        es = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        return Graph(len(order), es), order

    def without_vertices(self, gone: Iterable[int]) -> tuple["Graph", list[int]]:
        gone = set(gone)
        return self.induced([v for v in range(self.n) if v not in gone])

    def without_edge(self, e: tuple[int, int]) -> "Graph":
        a, b = min(e), max(e)
        return Graph(self.n, (x for x in self.edges if x != (a, b)))

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = []
            seen[s] = True
            stack = [s]
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def component_graphs(self) -> list["Graph"]:
        return [self.induced(c)[0] for c in self.components()]

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def bfs_distances(self, s: int, limit: Optional[int] = None) -> dict[int, int]:
        dist = {s: 0}
        q = deque([s])
        while q:
            v = q.popleft()
            if limit is not None and dist[v] >= limit:
                continue
            for w in self.adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        return dist

    def eccentricity(self, v: int) -> int:
        return max(self.bfs_distances(v).values())

    def girth(self) -> Optional[int]:
        """Length of a shortest cycle, None for forests."""
        best = None
        for s in range(self.n):
            dist = {s: 0}
            parent = {s: -1}
            q = deque([s])
            while q:
                v = q.popleft()
                if best is not None and 2 * dist[v] + 1 >= best:
                    break
                for w in self.adj[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        parent[w] = v
                        q.append(w)
                    elif parent[v] != w:
                        c = dist[v] + dist[w] + 1
                        if best is None or c < best:
                            best = c
        return best

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edge_list()]}

    @classmethod
    def from_json(cls, obj) -> "Graph":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
            raise GraphError('graph JSON must look like {"n": int, "edges": [[u, v], ...]}')
        return cls(int(obj["n"]), obj["edges"])

    def to_graph6(self) -> str:
        return to_graph6(self)

    @classmethod
    def from_graph6(cls, s: str) -> "Graph":
        return from_graph6(s)


def disjoint_union(*gs: Graph) -> Graph:
    es = []
    off = 0
    for g in gs:
        es.extend((u + off, v + off) for u, v in g.edges)
        off += g.n
    return Graph(off, es)


# graph6 ------------------------------------------------------------------

def _n_bytes(n: int) -> list[int]:
    if n <= 62:
        return [n + 63]
    if n <= 258047:
        return [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    return [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]


def to_graph6(g: Graph) -> str:
    bits = []
    for v in range(1, g.n):
        for u in range(v):
            bits.append(1 if (u, v) in g.edges else 0)
    while len(bits) % 6:
        bits.append(0)
    data = [63 + int("".join(map(str, bits[i:i + 6])), 2) for i in range(0, len(bits), 6)]
    return bytes(_n_bytes(g.n) + data).decode("ascii")


def from_graph6(s: str) -> Graph:
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    raw = [ord(c) - 63 for c in s]
    if not raw or any(x < 0 or x > 63 for x in raw):
        raise GraphError(f"not a graph6 string: {s!r}")
    if raw[0] != 63:
        n, rest = raw[0], raw[1:]
    elif len(raw) > 1 and raw[1] != 63:
        n = (raw[1] << 12) | (raw[2] << 6) | raw[3]
        rest = raw[4:]
    else:
        n = 0
        for x in raw[2:8]:
            n = (n << 6) | x
        rest = raw[8:]
    bits = []
    for x in rest:
        bits.extend((x >> s) & 1 for s in range(5, -1, -1))
    need = n * (n - 1) // 2
    if len(bits) < need:
        raise GraphError("graph6 string too short")
    es = []
    k = 0
    for v in range(1, n):
        for u in range(v):
            if bits[k]:
                es.append((u, v))
            k += 1
    return Graph(n, es)


# named graphs --------------------------------------------------------------

def complete(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def k_dd(d: int) -> Graph:
    """Complete bipartite K_{d,d}: sides 0..d-1 and d..2d-1."""
    return Graph(2 * d, ((i, d + j) for i in range(d) for j in range(d)))


def h_dn(d: int, n: int) -> Graph:
    """n/2d disjoint copies of K_{d,d}."""
    if d < 1 or n % (2 * d):
        raise GraphError(f"H_{{d,n}} needs 2d | n (d={d}, n={n})")
    return disjoint_union(*[k_dd(d)] * (n // (2 * d)))


def cl_dn(d: int, n: int) -> Graph:
    """n/(d+1) disjoint cliques K_{d+1}."""
    if d < 1 or n % (d + 1):
        raise GraphError(f"CL_{{d,n}} needs (d+1) | n (d={d}, n={n})")
    return disjoint_union(*[complete(d + 1)] * (n // (d + 1)))


def heawood() -> Graph:
    """Incidence graph of the Fano plane; the (3,6)-cage on 14 vertices."""
    es = [(i, (i + 1) % 14) for i in range(14)]
    es += [(i, (i + 5) % 14) for i in range(0, 14, 2)]
    return Graph(14, es)


def hw_n(n: int) -> Graph:
    if n % 14:
        raise GraphError(f"HW_n needs 14 | n (n={n})")
    return disjoint_union(*[heawood()] * (n // 14))


def prism() -> Graph:
    """Triangular prism C_3 x K_2."""
    return Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])


def petersen() -> Graph:
    return generalized_petersen(5, 2)


def generalized_petersen(n: int, k: int) -> Graph:
    es = [(i, (i + 1) % n) for i in range(n)]
    es += [(i, n + i) for i in range(n)]
    es += [(n + i, n + (i + k) % n) for i in range(n)]
    return Graph(2 * n, es)


def make_named(spec: str) -> Graph:
    """Parse names like ``K33``, ``K_dd(3)``, ``H_dn(3,12)``, ``CL_dn(3,8)``,
    ``Heawood``, ``HW_n(28)``, ``C8``, ``Cycle(8)``, ``Prism``, ``K4``,
    ``Petersen``, ``GP(7,2)``, and disjoint unions joined by ``+``."""
    parts = [p.strip() for p in spec.split("+")]
    if len(parts) > 1:
        return disjoint_union(*(make_named(p) for p in parts))
    s = parts[0]
    low = s.lower().replace(" ", "")

    def args(prefix: str) -> list[int]:
        inner = low[len(prefix):].strip("()")
        return [int(x) for x in inner.split(",") if x]

    if low in ("prism",):
        return prism()
    if low == "heawood":
        return heawood()
    if low == "petersen":
        return petersen()
    if low.startswith("k_dd("):
        return k_dd(*args("k_dd"))
    if low.startswith("h_dn("):
        return h_dn(*args("h_dn"))
    if low.startswith("cl_dn("):
        return cl_dn(*args("cl_dn"))
    if low.startswith("hw_n("):
        return hw_n(*args("hw_n"))
    if low.startswith("cycle("):
        return cycle(*args("cycle"))
    if low.startswith("gp("):
        return generalized_petersen(*args("gp"))
    if low.startswith("h") and low[1:].replace(",", "").isdigit() and "," in low:
        d, n = low[1:].split(",")
        return h_dn(int(d), int(n))
    if low.startswith("c") and low[1:].isdigit():
        return cycle(int(low[1:]))
    if low.startswith("p") and low[1:].isdigit():
        return path(int(low[1:]))
    if low.startswith("k") and low[1:].isdigit():
        digits = low[1:]
        if len(digits) == 2 and digits[0] == digits[1] and digits != "11":
            return k_dd(int(digits[0]))
        return complete(int(digits))
    raise GraphError(f"unknown graph name {spec!r}")


def regular_supergraph(g: Graph, d: int) -> tuple[Graph, int]:
    """Embed ``g`` (max degree <= d) as an induced subgraph of a d-regular graph.

    Repeatedly doubles the graph and joins each deficient vertex to its twin;
    the original copy keeps labels 0..g.n-1.  Returns (graph, rounds).
    """
    if g.max_degree() > d:
        raise GraphError("max degree exceeds target regularity")
    cur = g
    rounds = 0
    while not cur.is_regular(d) or cur.n == 0:
        if cur.n == 0:
            break
        n = cur.n
        es = list(cur.edges) + [(u + n, v + n) for u, v in cur.edges]
        es += [(v, v + n) for v in range(n) if cur.degree(v) < d]
        cur = Graph(2 * n, es)
        rounds += 1
    return cur, rounds


@dataclass(frozen=True)
class RootedBall:
    center: int          # original label of the root
    radius: int
    graph: Graph         # induced ball, root relabelled to 0
    dist: tuple[int, ...]  # distance from the root, per ball vertex
    labels: tuple[int, ...]  # original label per ball vertex


def rooted_ball(g: Graph, v: int, r: int) -> RootedBall:
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range")
    dist = g.bfs_distances(v, limit=r)
    order = sorted(dist, key=lambda w: (dist[w], w))
    sub, labels = g.induced(order)
    return RootedBall(v, r, sub, tuple(dist[w] for w in labels), tuple(labels))
