"""Enumeration of d-regular graphs up to isomorphism.

Connected graphs are grown in breadth-first order from a root: the vertex
being processed takes its missing neighbours from already-created vertices
of deficit (as combinations) and from a block of freshly created vertices.
Girth is enforced edge by edge.  Duplicate labellings are rejected by
canonical certificate.  Disconnected graphs are multisets of connected ones.
"""
from __future__ import annotations

import logging
import os
from collections import deque
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Iterator

from .canon import canon
from .graph import Graph, disjoint_union

log = logging.getLogger(__name__)

DEFAULT_LIMITS = {2: 16, 3: 14}


class CapacityError(RuntimeError):
    """Requested computation exceeds the configured desk-scale limits."""


def capacity_lifted() -> bool:
    return os.environ.get("PARTFN_CAPACITY", "").lower() in ("1", "true", "yes", "unlimited")


def _check_limit(d: int, n: int) -> None:
    limit = DEFAULT_LIMITS.get(d, 10)
    if n > limit:
        if not capacity_lifted():
            raise CapacityError(
                f"enumerating {d}-regular graphs on {n} vertices exceeds the default "
                f"limit n <= {limit}; set PARTFN_CAPACITY=1 to override")
        log.warning("enumerating %d-regular graphs on %d vertices (above default %d)", d, n, limit)


def _far_enough(adj: list[set], u: int, v: int, min_girth: int) -> bool:
    """True iff adding uv creates no cycle shorter than min_girth."""
    if min_girth <= 3:
        return True
    limit = min_girth - 2  # existing path of length <= limit would close a short cycle
    seen = {u: 0}
    q = deque([u])
    while q:
        x = q.popleft()
        if seen[x] >= limit:
            continue
        for y in adj[x]:
            if y not in seen:
                if y == v:
                    return False
                seen[y] = seen[x] + 1
                q.append(y)
    return True


def _connected_raw(d: int, m: int, min_girth: int) -> Iterator[list[tuple[int, int]]]:
    adj: list[set] = [set() for _ in range(m)]
    edges: list[tuple[int, int]] = []

    def rec(i: int, created: int):
        if i == created:
            if created == m:
                yield list(edges)
            return
        need = d - len(adj[i])
        cands = [j for j in range(i + 1, created) if len(adj[j]) < d and j not in adj[i]]
        for k in range(min(need, len(cands)), -1, -1):
            fresh = need - k
            if created + fresh > m:
                continue
            for chosen in combinations(cands, k):
                ok = True
                added = []
                for j in chosen:
                    if not _far_enough(adj, i, j, min_girth):
                        ok = False
                        break
                    adj[i].add(j); adj[j].add(i); edges.append((i, j)); added.append(j)
                if ok:
                    for t in range(fresh):
                        j = created + t
                        adj[i].add(j); adj[j].add(i); edges.append((i, j))
                    yield from rec(i + 1, created + fresh)
                    for t in range(fresh):
                        j = created + t
                        adj[i].discard(j); adj[j].discard(i); edges.pop()
                for j in added:
                    adj[i].discard(j); adj[j].discard(i); edges.pop()

    if m == 0:
        return
    yield from rec(0, 1)


@lru_cache(maxsize=None)
def connected_regular(d: int, m: int, min_girth: int = 3) -> tuple[Graph, ...]:
    """One representative per isomorphism class of connected d-regular graphs on m vertices."""
    if m <= d or (d * m) % 2:
        return ()
    seen = set()
    out = []
    for es in _connected_raw(d, m, min_girth):
        g = Graph(m, es)
        c = canon(g)
        if c not in seen:
            seen.add(c)
            out.append(g)
    out.sort(key=lambda g: (g.to_graph6()))
    return tuple(out)


def enumerate_regular(d: int, n: int, min_girth: int = 3, *, check_limits: bool = True) -> Iterator[Graph]:
    """Yield one graph per isomorphism class of d-regular graphs on n vertices with
    girth >= min_girth (disconnected graphs included)."""
    if (d * n) % 2 or d >= n and not (d == 0):
        return
    if check_limits:
        _check_limit(d, n)
    sizes = [m for m in range(d + 1, n + 1) if (d * m) % 2 == 0 and connected_regular(d, m, min_girth)]

    def parts(rem: int, smallest: int) -> Iterator[list[int]]:
        if rem == 0:
            yield []
            return
        for s in sizes:
            if s >= smallest and s <= rem:
                for rest in parts(rem - s, s):
                    yield [s] + rest

    for sz in parts(n, 0):
        counts: dict[int, int] = {}
        for s in sz:
            counts[s] = counts.get(s, 0) + 1
        groups = [list(combinations_with_replacement(connected_regular(d, s, min_girth), c))
                  for s, c in sorted(counts.items())]

        def prod(idx: int, acc: list[Graph]) -> Iterator[Graph]:
            if idx == len(groups):
                yield disjoint_union(*acc)
                return
            for choice in groups[idx]:
                yield from prod(idx + 1, acc + list(choice))

        yield from prod(0, [])
