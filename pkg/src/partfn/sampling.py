"""Neighbourhood profiles and the truncated sampling distance."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .canon import canon
from .exact import rat_str
from .graph import Graph, rooted_ball

DEFAULT_RMAX = 6


@dataclass(frozen=True)
class NeighborhoodProfile:
    radius: int
    dist: dict  # rooted-ball certificate -> probability

    def total(self) -> Fraction:
        return sum(self.dist.values(), Fraction(0))


def ball_cert(g: Graph, v: int, r: int) -> bytes:
    return canon(rooted_ball(g, v, r).graph, root=0)


def profile(g: Graph, r: int) -> NeighborhoodProfile:
    """rho_r(G): each vertex adds 1/n to the class of its depth-r ball."""
    if g.n == 0:
        raise ValueError("empty graph has no profile")
    counts: dict[bytes, int] = {}
    per_comp: dict[bytes, list[bytes]] = {}
    for comp in g.components():
        sub, labels = g.induced(comp)
        key = canon(sub)
        if key not in per_comp:
            per_comp[key] = [ball_cert(sub, v, r) for v in range(sub.n)]
        for c in per_comp[key]:
            counts[c] = counts.get(c, 0) + 1
    return NeighborhoodProfile(r, {c: Fraction(k, g.n) for c, k in counts.items()})


def tv(p: NeighborhoodProfile, q: NeighborhoodProfile) -> Fraction:
    keys = set(p.dist) | set(q.dist)
    return sum((abs(p.dist.get(k, 0) - q.dist.get(k, 0)) for k in keys), Fraction(0)) / 2


@dataclass(frozen=True)
class SamplingDistance:
    lower: Fraction
    upper: Fraction
    per_radius_tv: tuple[Fraction, ...]

    def __iter__(self):
        return iter((self.lower, self.upper))

    def to_json(self) -> dict:
        return {"lower": rat_str(self.lower), "upper": rat_str(self.upper),
                "per_radius_tv": [rat_str(t) for t in self.per_radius_tv]}


def sampling_distance(g: Graph, h: Graph, r_max: int = DEFAULT_RMAX) -> SamplingDistance:
    """lower = sum_{r<=r_max} 2^-r TV_r,  upper = lower + 2^-r_max."""
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    tvs = tuple(tv(profile(g, r), profile(h, r)) for r in range(1, r_max + 1))
    lower = sum((t / 2 ** r for r, t in enumerate(tvs, 1)), Fraction(0))
    return SamplingDistance(lower, lower + Fraction(1, 2 ** r_max), tvs)


def stable_radius(g: Graph) -> int:
    """Radius past which every ball is its whole component."""
    return max((g.eccentricity(v) for v in range(g.n)), default=0)


def sampling_distance_exact(g: Graph, h: Graph) -> Fraction:
    """The full infinite sum.  Balls stop growing at radius R = max eccentricity,
    so TV_r = TV_R for r >= R and the tail sums to 2^-R TV_R."""
    R = max(stable_radius(g), stable_radius(h), 1)
    tvs = [tv(profile(g, r), profile(h, r)) for r in range(1, R + 1)]
    head = sum((t / 2 ** r for r, t in enumerate(tvs, 1)), Fraction(0))
    return head + tvs[-1] / 2 ** R


def fraction_outside_kdd(g: Graph, d: int) -> Fraction:
    """Fraction of vertices in no K_{d,d} component."""
    if g.max_degree() > d:
        raise ValueError("max degree exceeds d")
    if g.n == 0:
        return Fraction(0)
    from .graph import k_dd
    target = canon(k_dd(d))
    inside = 0
    for comp in g.components():
        if len(comp) == 2 * d:
            sub, _ = g.induced(comp)
            if sub.m == d * d and canon(sub) == target:
                inside += len(comp)
    return Fraction(g.n - inside, g.n)
