"""Exact coefficient vectors of the partition functions, one engine per model."""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb, factorial
from typing import Optional, Sequence

from .canon import canon
from .enumerate import CapacityError, capacity_lifted
from .exact import RatPoly
from .graph import Graph

KINDS = ("match", "ind", "potts")


@dataclass(frozen=True)
class CoefVector:
    kind: str
    coeffs: tuple[int, ...]
    q: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if (self.kind == "potts") != (self.q is not None):
            raise ValueError("q is required for potts and only for potts")
        if any(c < 0 for c in self.coeffs):
            raise ValueError("coefficients must be nonnegative")

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def top(self) -> int:
        """Largest index with a nonzero coefficient."""
        return max((k for k, c in enumerate(self.coeffs) if c), default=0)

    def poly(self) -> RatPoly:
        return RatPoly(self.coeffs)

    def padded(self, length: int) -> "CoefVector":
        if length < len(self.coeffs):
            if any(self.coeffs[length:]):
                raise ValueError("cannot truncate nonzero coefficients")
            return CoefVector(self.kind, self.coeffs[:length], self.q)
        return CoefVector(self.kind, self.coeffs + (0,) * (length - len(self.coeffs)), self.q)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "coeffs": [str(c) for c in self.coeffs]}
        if self.q is not None:
            out["q"] = self.q
        return out

    @classmethod
    def from_json(cls, obj) -> "CoefVector":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(obj["kind"], tuple(int(c) for c in obj["coeffs"]), obj.get("q"))


def _conv(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) > 16:
        return kronecker_conv(a, b)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def kronecker_conv(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of nonnegative integer sequences via one big-integer multiplication."""
    if any(x < 0 for x in a) or any(x < 0 for x in b):
        raise ValueError("Kronecker packing needs nonnegative entries")
    bound = min(len(a), len(b)) * max(a) * max(b)
    # slots must hold every input entry as well as every output entry
    bits = max(bound.bit_length(), max(a).bit_length(), max(b).bit_length()) + 1
    pa = int.from_bytes(b"".join(x.to_bytes((bits + 7) // 8, "little") for x in a), "little")
    pb = int.from_bytes(b"".join(x.to_bytes((bits + 7) // 8, "little") for x in b), "little")
    width = (bits + 7) // 8
    raw = (pa * pb).to_bytes(width * (len(a) + len(b) - 1) + 1, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(len(a) + len(b) - 1)]


def _add(a: Sequence[int], b: Sequence[int], shift: int = 0) -> list[int]:
    out = list(a) + [0] * max(0, len(b) + shift - len(a))
    for j, y in enumerate(b):
        out[j + shift] += y
    return out


def _trim(a: Sequence[int]) -> list[int]:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


# matchings ---------------------------------------------------------------

_MATCH_MEMO: dict[bytes, tuple[int, ...]] = {}
_IND_MEMO: dict[bytes, tuple[int, ...]] = {}


def _match_connected(g: Graph) -> tuple[int, ...]:
    if g.m == 0:
        return (1,)
    if g.m == 1:
        return (1, 1)
    key = canon(g)
    hit = _MATCH_MEMO.get(key)
    if hit is not None:
        return hit
    u = max(range(g.n), key=g.degree)
    v = min(g.adj[u])
    # m(G) = m(G - e) + x m(G - u - v)
    rest = _match_poly(g.without_edge((u, v)))
    sub, _ = g.without_vertices((u, v))
    res = tuple(_trim(_add(rest, _match_poly(sub), 1)))
    _MATCH_MEMO[key] = res
    return res


def _match_poly(g: Graph) -> list[int]:
    acc = [1]
    for comp in g.components():
        if len(comp) > 1:
            acc = _conv(acc, _match_connected(g.induced(comp)[0]))
    return acc


def match_coeffs(g: Graph) -> CoefVector:
    """m_k(G) for 0 <= k <= n//2."""
    cs = _trim(_match_poly(g))
    return CoefVector("match", tuple(cs)).padded(g.n // 2 + 1)


# independent sets --------------------------------------------------------

def _ind_connected(g: Graph) -> tuple[int, ...]:
    if g.n == 1:
        return (1, 1)
    if g.m == g.n * (g.n - 1) // 2:
        return (1, g.n)
    key = canon(g)
    hit = _IND_MEMO.get(key)
    if hit is not None:
        return hit
    v = max(range(g.n), key=g.degree)
    a, _ = g.without_vertices((v,))
    b, _ = g.without_vertices(set(g.adj[v]) | {v})
    # i(G) = i(G - v) + x i(G - N[v])
    res = tuple(_trim(_add(_ind_poly(a), _ind_poly(b), 1)))
    _IND_MEMO[key] = res
    return res


def _ind_poly(g: Graph) -> list[int]:
    acc = [1]
    for comp in g.components():
        acc = _conv(acc, _ind_connected(g.induced(comp)[0]))
    return acc


def ind_coeffs(g: Graph) -> CoefVector:
    """i_k(G) up to the independence number."""
    return CoefVector("ind", tuple(_trim(_ind_poly(g))))


# Potts -------------------------------------------------------------------

MAX_FRONTIER = 11


def _vertex_order(g: Graph) -> list[int]:
    """BFS order per component, keeping the active frontier narrow."""
    seen: set[int] = set()
    order: list[int] = []
    for s in sorted(range(g.n), key=lambda v: (g.degree(v), v)):
        if s in seen:
            continue
        seen.add(s)
        q = [s]
        while q:
            v = q.pop(0)
            order.append(v)
            for w in sorted(g.adj[v]):
                if w not in seen:
                    seen.add(w)
                    q.append(w)
    return order


def _normalise(blocks: Sequence[int]) -> tuple[int, ...]:
    ren: dict[int, int] = {}
    return tuple(ren.setdefault(b, len(ren)) for b in blocks)


def random_cluster_coeffs(g: Graph, q: int) -> list[int]:
    """Coefficients a_j of sum_{A subset E} v^|A| q^{c(A)} as a polynomial in v.

    Frontier dynamic programme over connectivity partitions: states are set
    partitions of the active vertices, values are integer polynomials in v.
    """
    order = _vertex_order(g)
    pos = {v: i for i, v in enumerate(order)}
    last_needed = {v: max([pos[v]] + [pos[w] for w in g.adj[v]]) for v in order}
    frontier: list[int] = []
    states: dict[tuple[int, ...], list[int]] = {(): [1]}
    for i, v in enumerate(order):
        frontier.append(v)
        new_states = {}
        for st, poly in states.items():
            key = st + (max(st, default=-1) + 1,)
            new_states[key] = _add(new_states.get(key, []), poly)
        states = new_states
        for w in sorted(g.adj[v], key=pos.get):
            if pos[w] >= i:
                continue
            a, b = frontier.index(v), frontier.index(w)
            nxt: dict[tuple[int, ...], list[int]] = {}
            for st, poly in states.items():
                nxt[st] = _add(nxt.get(st, []), poly)
                ba, bb = st[a], st[b]
                merged = _normalise([ba if x == bb else x for x in st])
                nxt[merged] = _add(nxt.get(merged, []), poly, 1)
            states = nxt
        # retire vertices whose neighbourhoods are complete
        for w in [x for x in frontier if last_needed[x] <= i]:
            idx = frontier.index(w)
            nxt = {}
            for st, poly in states.items():
                blk = st[idx]
                rest = st[:idx] + st[idx + 1:]
                p = poly if blk in rest else [c * q for c in poly]
                k = _normalise(rest)
                nxt[k] = _add(nxt.get(k, []), p)
            states = nxt
            frontier.pop(idx)
        if len(frontier) > MAX_FRONTIER and not capacity_lifted():
            raise CapacityError(f"Potts frontier width {len(frontier)} exceeds {MAX_FRONTIER}")
    assert not frontier
    return _trim(states[()])


CROSS_CHECK_LIMIT = 10 ** 7


def colouring_count_coeffs(g: Graph, q: int) -> list[int]:
    """Direct enumeration of all q^n colourings."""
    from itertools import product
    out = [0] * (g.m + 1)
    es = g.edge_list()
    for cols in product(range(q), repeat=g.n):
        out[sum(cols[x] == cols[y] for x, y in es)] += 1
    return out


def potts_coeffs(g: Graph, q: int, cross_check: bool = False) -> CoefVector:
    """c^q_k(G): number of q-colourings with exactly k monochromatic edges.

    Z = sum_A (x-1)^|A| q^c(A), re-expanded in powers of x.  With cross_check,
    the result is compared against direct enumeration when q^n <= 10^7.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    a = random_cluster_coeffs(g, q)
    out = [0] * (g.m + 1)
    for j, aj in enumerate(a):
        if aj:
            for k in range(j + 1):
                out[k] += aj * comb(j, k) * (-1) ** (j - k)
    if cross_check and q ** g.n <= CROSS_CHECK_LIMIT:
        direct = colouring_count_coeffs(g, q)
        if direct != out:
            raise AssertionError(f"random-cluster and direct colouring counts differ: {out} vs {direct}")
    return CoefVector("potts", tuple(out), q)


# combinators -------------------------------------------------------------

def disjoint_union_coeffs(a: CoefVector, b: CoefVector) -> CoefVector:
    if a.kind != b.kind or a.q != b.q:
        raise ValueError(f"kind mismatch: {a.kind}/{a.q} vs {b.kind}/{b.q}")
    return CoefVector(a.kind, tuple(_conv(a.coeffs, b.coeffs)), a.q)


def power_coeffs(a: CoefVector, k: int) -> CoefVector:
    """Coefficients of k disjoint copies, by repeated squaring."""
    if k < 0:
        raise ValueError("negative power")
    result = [1]
    base = list(a.coeffs)
    while k:
        if k & 1:
            result = _conv(result, base)
        k >>= 1
        if k:
            base = _conv(base, base)
    return CoefVector(a.kind, tuple(result), a.q)


def kdd_match_coeffs(d: int) -> CoefVector:
    """m_k(K_{d,d}) = C(d,k)^2 k!."""
    return CoefVector("match", tuple(comb(d, k) ** 2 * factorial(k) for k in range(d + 1)))


def kdd_ind_coeffs(d: int) -> CoefVector:
    """i_0 = 1 and i_k(K_{d,d}) = 2 C(d,k) for k >= 1."""
    return CoefVector("ind", (1,) + tuple(2 * comb(d, k) for k in range(1, d + 1)))


def h_dn_coeffs(d: int, n: int, kind: str, q: Optional[int] = None) -> CoefVector:
    """Coefficients of H_{d,n} from the K_{d,d} block."""
    if n % (2 * d):
        raise ValueError(f"2d must divide n (d={d}, n={n})")
    from .graph import k_dd
    if kind == "match":
        block = kdd_match_coeffs(d)
    elif kind == "ind":
        block = kdd_ind_coeffs(d)
    else:
        block = potts_coeffs(k_dd(d), q)
    return power_coeffs(block, n // (2 * d))


def coeffs(g: Graph, kind: str, q: Optional[int] = None) -> CoefVector:
    if kind == "match":
        return match_coeffs(g)
    if kind == "ind":
        return ind_coeffs(g)
    if kind == "potts":
        if q is None:
            raise ValueError("potts needs q")
        return potts_coeffs(g, q)
    raise ValueError(f"unknown kind {kind!r}")


def perfect_matching_count(g: Graph, with_flag: bool = False):
    """m_{n/2}(G).  Odd n gives 0; with ``with_flag`` returns (count, n_is_even)."""
    if g.n % 2:
        return (0, False) if with_flag else 0
    c = match_coeffs(g)[g.n // 2]
    return (c, True) if with_flag else c
