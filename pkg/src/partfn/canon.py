"""Canonical certificates for small vertex-coloured graphs.

Colour refinement followed by an individualisation-refinement search tree;
the certificate is the lexicographically least relabelled graph over all
leaves.  Automorphisms discovered at equal leaves prune sibling branches
lying in the same orbit of the pointwise stabiliser of the current prefix.
Disconnected graphs are handled component-wise.
"""
from __future__ import annotations

from typing import Hashable, Optional, Sequence

from .graph import Graph

CanonicalForm = bytes


def _refine(adj: Sequence[Sequence[int]], colors: list[int]) -> list[int]:
    """Coarsest equitable refinement; colour ids are ranks of invariant signatures."""
    n = len(colors)
    cur = colors
    while True:
        sig = [(cur[v], tuple(sorted(cur[w] for w in adj[v]))) for v in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        nxt = [ranks[s] for s in sig]
        if len(ranks) == len(set(cur)):
            return nxt
        cur = nxt


def _initial(colors: Sequence[Hashable]) -> list[int]:
    keys = sorted(set(colors), key=repr)
    idx = {k: i for i, k in enumerate(keys)}
    return [idx[c] for c in colors]


def _individualise(colors: list[int], v: int) -> list[int]:
    c = colors[v]
    # v keeps rank c; its cell-mates move just above, everything later shifts up
    return [x if x < c else (x + 1 if (x > c or w != v) else x) for w, x in enumerate(colors)]


class _Search:
    def __init__(self, n: int, adj, vertex_colors):
        self.n = n
        self.adj = adj
        self.vcol = vertex_colors
        self.best: Optional[tuple] = None
        self.best_perm: Optional[list[int]] = None
        self.autos: list[list[int]] = []

    def leaf_cert(self, colors: list[int]) -> tuple:
        # colors discrete: vertex v gets new label colors[v]
        inv = [0] * self.n
        for v, c in enumerate(colors):
            inv[c] = v
        es = sorted(
            (min(colors[u], colors[w]), max(colors[u], colors[w]))
            for u in range(self.n) for w in self.adj[u] if u < w
        )
        return (tuple(self.vcol[inv[i]] for i in range(self.n)), tuple(es))

    def run(self, colors: list[int], prefix: tuple[int, ...]) -> None:
        colors = _refine(self.adj, colors)
        if len(set(colors)) == self.n:
            cert = self.leaf_cert(colors)
            if self.best is None or cert < self.best:
                self.best, self.best_perm = cert, colors
            elif cert == self.best:
                # colors∘best_perm^-1 is an automorphism
                inv = [0] * self.n
                for v, c in enumerate(self.best_perm):
                    inv[c] = v
                auto = [inv[colors[v]] for v in range(self.n)]
                if any(auto[v] != v for v in range(self.n)):
                    self.autos.append(auto)
            return
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        # target: first smallest non-trivial cell (invariant choice)
        target = min((len(vs), c) for c, vs in cells.items() if len(vs) > 1)[1]
        done: list[int] = []
        for v in cells[target]:
            if done and self._same_orbit(v, done, prefix):
                continue
            done.append(v)
            self.run(_individualise(colors, v), prefix + (v,))

    def _same_orbit(self, v: int, done: list[int], prefix: tuple[int, ...]) -> bool:
        gens = [a for a in self.autos if all(a[p] == p for p in prefix)]
        if not gens:
            return False
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in gens:
            for x in range(self.n):
                rx, ry = find(x), find(a[x])
                if rx != ry:
                    parent[rx] = ry
        rv = find(v)
        return any(find(u) == rv for u in done)


def _connected_cert(g: Graph, vcol: Sequence[Hashable]) -> tuple:
    s = _Search(g.n, g.adj, list(vcol))
    s.run(_initial(vcol), ())
    return (g.n, s.best)


def canonical_cert(g: Graph, root: Optional[int] = None,
                   colors: Optional[Sequence[Hashable]] = None) -> tuple:
    """Canonical invariant as a nested tuple (see :func:`canon`)."""
    base = list(colors) if colors is not None else [0] * g.n
    vcol = [(1 if v == root else 0, base[v]) for v in range(g.n)]
    comps = []
    for comp in g.components():
        sub, labels = g.induced(comp)
        comps.append(_connected_cert(sub, [vcol[v] for v in labels]))
    comps.sort(key=repr)
    return tuple(comps)


def canon(g: Graph, root: Optional[int] = None,
          colors: Optional[Sequence[Hashable]] = None) -> CanonicalForm:
    """Byte certificate equal for (root- and colour-preserving) isomorphic inputs."""
    return repr(canonical_cert(g, root, colors)).encode()


def canonical_labeling(g: Graph, colors: Optional[Sequence[Hashable]] = None) -> list[int]:
    """A permutation p with g.relabel(p) canonical; connected graphs only."""
    vcol = list(colors) if colors is not None else [0] * g.n
    s = _Search(g.n, g.adj, vcol)
    s.run(_initial(vcol), ())
    return list(s.best_perm)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canon(g) == canon(h)
