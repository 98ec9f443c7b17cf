"""Grand-canonical and canonical observables, exact at rational fugacity."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Optional

from .enumerate import CapacityError, capacity_lifted
from .exact import as_rat, rat_str
from .graph import Graph
from .polys import CoefVector, coeffs as coef_vector
from .views import (LocalView, ind_view_at, iter_independent_sets, iter_matchings,
                    match_view_at, potts_view_at)

DEFAULT_GRID = tuple(Fraction(x) for x in ("1/10", "1/4", "1/2", "1", "2", "4", "10"))
DEFAULT_TOL = Fraction(1, 10 ** 9)
MAX_CONFIGS = 2_000_000


def _z_and_dz(c: CoefVector, lam: Fraction) -> tuple[Fraction, Fraction]:
    z = Fraction(0)
    dz = Fraction(0)
    p = Fraction(1)
    for k, ck in enumerate(c.coeffs):
        z += ck * p
        dz += k * ck * p
        p *= lam
    return z, dz


def partition_value(c: CoefVector, lam) -> Fraction:
    return _z_and_dz(c, as_rat(lam))[0]


def mean_size(c: CoefVector, lam) -> Fraction:
    """lam Z'(lam) / Z(lam): expected configuration size."""
    lam = as_rat(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    z, dz = _z_and_dz(c, lam)
    if z <= 0:
        raise ZeroDivisionError("partition function vanishes")
    return dz / z


def occupancy_fraction(c: CoefVector, g_size: tuple[int, int], lam) -> Fraction:
    """alpha (match: per edge, ind: per vertex) or beta^q (potts: per edge)."""
    n, m = g_size
    norm = n if c.kind == "ind" else m
    if norm == 0:
        raise ValueError("empty normaliser")
    return mean_size(c, lam) / norm


internal_energy = occupancy_fraction


@dataclass(frozen=True)
class SizeDistribution:
    """prob[k] = weights[k] / total; integer weights keep convolutions exact and fast."""
    weights: tuple[int, ...]
    total: int

    def __post_init__(self):
        if self.total <= 0 or sum(self.weights) != self.total:
            raise ValueError("weights must sum to a positive total")

    def prob(self, k: int) -> Fraction:
        if 0 <= k < len(self.weights):
            return Fraction(self.weights[k], self.total)
        return Fraction(0)

    @property
    def probs(self) -> list[Fraction]:
        return [Fraction(w, self.total) for w in self.weights]

    @property
    def support(self) -> list[int]:
        return [k for k, w in enumerate(self.weights) if w]

    def mean(self) -> Fraction:
        return Fraction(sum(k * w for k, w in enumerate(self.weights)), self.total)

    def variance(self) -> Fraction:
        mu = self.mean()
        return Fraction(sum(k * k * w for k, w in enumerate(self.weights)), self.total) - mu * mu

    def to_json(self) -> dict:
        return {"probs": [rat_str(p) for p in self.probs]}


def size_distribution(c: CoefVector, lam) -> SizeDistribution:
    lam = as_rat(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    top = len(c.coeffs) - 1
    p, q = lam.numerator, lam.denominator
    # c_k p^k q^(top-k) is proportional to c_k lam^k
    ws = tuple(ck * p ** k * q ** (top - k) for k, ck in enumerate(c.coeffs))
    return SizeDistribution(ws, sum(ws))


def tune_lambda_bracket(c: CoefVector, target_mean, tol=DEFAULT_TOL) -> tuple[Fraction, Fraction, Fraction]:
    """(lo, hi, lam): mean(lo) <= target <= mean(hi), |mean(lam) - target| <= tol."""
    target = as_rat(target_mean)
    tol = as_rat(tol)
    kmax = c.top
    if not 0 < target < kmax:
        raise ValueError(f"target mean must lie in (0, {kmax})")
    lo, hi = Fraction(0), Fraction(1)
    while mean_size(c, hi) < target:
        lo, hi = hi, hi * 2
    if mean_size(c, hi) == target:
        return hi, hi, hi
    while True:
        mid = (lo + hi) / 2
        m = mean_size(c, mid)
        if m == target:
            return mid, mid, mid
        if m < target:
            lo = mid
        else:
            hi = mid
        # mean is increasing: both endpoints within tol pins the value
        m_lo, m_hi = mean_size(c, lo), mean_size(c, hi)
        if m_hi - m_lo <= tol:
            lam = lo if target - m_lo <= m_hi - target else hi
            return lo, hi, lam


def tune_lambda(c: CoefVector, target_mean, tol=DEFAULT_TOL) -> Fraction:
    """Fugacity at which the expected size equals target_mean (within tol)."""
    return tune_lambda_bracket(c, target_mean, tol)[2]


def free_volume(c: CoefVector, k: int) -> Fraction:
    """(k+1) c_{k+1} / c_k."""
    if c[k] == 0:
        raise ValueError(f"free volume undefined: c[{k}] = 0")
    return Fraction((k + 1) * c[k + 1], c[k])


# local views --------------------------------------------------------------

@dataclass(frozen=True)
class LocalViewDistribution:
    kind: str
    d: int
    lam: Fraction
    probs: dict
    q: Optional[int] = None

    def total(self) -> Fraction:
        return sum(self.probs.values(), Fraction(0))

    def support(self) -> list[LocalView]:
        return [lv for lv, p in self.probs.items() if p]

    def to_json(self) -> dict:
        out = {"kind": self.kind, "d": self.d, "lambda": rat_str(self.lam),
               "probs": {lv.hex(): rat_str(p) for lv, p in sorted(self.probs.items(), key=lambda t: t[0].cert)}}
        if self.q is not None:
            out["q"] = self.q
        return out


def _capacity(count: int, what: str) -> None:
    if count > MAX_CONFIGS and not capacity_lifted():
        raise CapacityError(f"{what}: {count} configurations exceed {MAX_CONFIGS}; set PARTFN_CAPACITY=1")


@lru_cache(maxsize=256)
def local_view_counts(g: Graph, kind: str, q: Optional[int] = None) -> dict:
    """view -> integer polynomial: entry k counts (configuration, root) pairs of weight lam^k."""
    out: dict[LocalView, list[int]] = {}

    def bump(lv: LocalView, k: int) -> None:
        row = out.setdefault(lv, [])
        if len(row) <= k:
            row.extend([0] * (k + 1 - len(row)))
        row[k] += 1

    if kind == "match":
        _capacity(sum(coef_vector(g, "match").coeffs), "matchings")
        es = g.edge_list()
        for mset in iter_matchings(g):
            partner = {}
            for x, y in mset:
                partner[x] = y
                partner[y] = x
            for e in es:
                bump(match_view_at(g, partner, e), len(mset))
    elif kind == "ind":
        _capacity(sum(coef_vector(g, "ind").coeffs), "independent sets")
        cache: dict = {}
        for iset in iter_independent_sets(g):
            members = set(iset)
            for v in range(g.n):
                bump(ind_view_at(g, members, v, cache), len(iset))
    elif kind == "potts":
        if q is None or q < 2:
            raise ValueError("potts needs q >= 2")
        _capacity(q ** g.n, "colourings")
        cache = {}
        es = g.edge_list()
        for cols in product(range(q), repeat=g.n):
            mono = sum(cols[x] == cols[y] for x, y in es)
            for v in range(g.n):
                bump(potts_view_at(g, cols, v, q, cache), mono)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return {lv: tuple(row) for lv, row in out.items()}


def local_view_distribution(g: Graph, kind: str, lam, q: Optional[int] = None) -> LocalViewDistribution:
    """Exact distribution of the local view at a uniform root under the model at lam."""
    lam = as_rat(lam)
    if kind in ("match", "potts") and g.m == 0 or g.n == 0:
        raise ValueError("graph has no roots for this model")
    counts = local_view_counts(g, kind, q)
    raw = {lv: sum(ck * lam ** k for k, ck in enumerate(row)) for lv, row in counts.items()}
    norm = sum(raw.values(), Fraction(0))
    probs = {lv: w / norm for lv, w in raw.items() if w}
    return LocalViewDistribution(kind, g.max_degree(), lam, probs, q if kind == "potts" else None)


def edge_occupancy_bound_check(g: Graph, lam, kind: str = "match") -> bool:
    """P(e in M) <= lam/(1+lam) for every edge (match) or P(v in I) for every vertex (ind)."""
    lam = as_rat(lam)
    bound = lam / (1 + lam)
    if kind == "match":
        z = partition_value(coef_vector(g, "match"), lam)
        for u, v in g.edge_list():
            sub, _ = g.without_vertices((u, v))
            if lam * partition_value(coef_vector(sub, "match"), lam) / z > bound:
                return False
        return True
    if kind == "ind":
        z = partition_value(coef_vector(g, "ind"), lam)
        for v in range(g.n):
            sub, _ = g.without_vertices(set(g.adj[v]) | {v})
            if lam * partition_value(coef_vector(sub, "ind"), lam) / z > bound:
                return False
        return True
    raise ValueError(f"unknown kind {kind!r}")
