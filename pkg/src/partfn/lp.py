"""Occupancy-method linear programs solved exactly over the rationals.

Primal: max a.p subject to A p <= b, p >= 0, columns indexed by local views.
Dual:   min b.q subject to A^T q >= a, q >= 0.

The constraint family is built from double counting in a d-regular graph
together with the spatial Markov property: every conditional expectation
given a local view is computed exactly by running the model on the view.

match  normalisation, and for each edge type T in {in M, both endpoints
       free, exactly one endpoint matched}:
       E[#f in N(e) of type T] = 2(d-1) P(e has type T).
ind    normalisation and  lam/(1+lam) E[1/Z_C] = E[lam Z_C'/Z_C] / d.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .exact import as_rat, rat_str
from .graph import Graph, k_dd
from .observables import occupancy_fraction
from .polys import kdd_ind_coeffs, kdd_match_coeffs
from .views import (LocalView, candidate_ind_views, candidate_match_views, certify_realizable,
                    ind_view_quantities, kdd_views, match_view_quantities)

log = logging.getLogger(__name__)

MAX_D = 5


class LPError(RuntimeError):
    """Infeasible or unbounded program (a constraint-generation bug)."""


class DegenerateLPError(LPError):
    """Every slack is zero, so no stability constant can be extracted."""


# simplex -------------------------------------------------------------------

@dataclass
class _Tableau:
    rows: list[list[Fraction]]
    rhs: list[Fraction]
    basis: list[int]


def _pivot(t: _Tableau, r: int, c: int) -> None:
    piv = t.rows[r][c]
    row = [x / piv for x in t.rows[r]]
    t.rows[r] = row
    t.rhs[r] /= piv
    for i, other in enumerate(t.rows):
        if i != r and other[c]:
            f = other[c]
            t.rows[i] = [x - f * y for x, y in zip(other, row)]
            t.rhs[i] -= f * t.rhs[r]
    t.basis[r] = c


def _optimise(t: _Tableau, cost: Sequence[Fraction], allowed: Sequence[bool],
              trace: Optional[list] = None) -> None:
    """Maximise cost.x over the tableau with Bland's rule."""
    while True:
        if trace is not None:
            trace.append(sum(cost[b] * v for b, v in zip(t.basis, t.rhs)))
        enter = None
        for j in range(len(cost)):
            if not allowed[j] or j in t.basis:
                continue
            red = cost[j] - sum(cost[b] * row[j] for b, row in zip(t.basis, t.rows))
            if red > 0:
                enter = j
                break
        if enter is None:
            return
        best = None
        for i, row in enumerate(t.rows):
            if row[enter] > 0:
                ratio = t.rhs[i] / row[enter]
                key = (ratio, t.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise LPError("unbounded")
        _pivot(t, best[1], enter)


@dataclass(frozen=True)
class SimplexResult:
    optimum: Fraction
    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]
    iterates: tuple[Fraction, ...]


def simplex_max(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction],
                c: Sequence[Fraction]) -> SimplexResult:
    """max c.x s.t. A x <= b, x >= 0, exact.  Returns primal x and dual y.

    Two phases; rows with negative right-hand side receive artificials.
    Duals are read off the slack columns: y_i = -(reduced cost of s_i).
    """
    m = len(A)
    n = len(c)
    A = [[as_rat(v) for v in row] for row in A]
    b = [as_rat(v) for v in b]
    c = [as_rat(v) for v in c]
    neg = [i for i in range(m) if b[i] < 0]
    n_art = len(neg)
    width = n + m + n_art
    rows, rhs, basis = [], [], []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        row = [sign * v for v in A[i]] + [Fraction(0)] * (m + n_art)
        row[n + i] = Fraction(sign)
        if sign < 0:
            k = n + m + neg.index(i)
            row[k] = Fraction(1)
            basis.append(k)
        else:
            basis.append(n + i)
        rows.append(row)
        rhs.append(sign * b[i])
    t = _Tableau(rows, rhs, basis)
    if n_art:
        cost1 = [Fraction(0)] * (n + m) + [Fraction(-1)] * n_art
        _optimise(t, cost1, [True] * width)
        if sum(cost1[bi] * v for bi, v in zip(t.basis, t.rhs)) < 0:
            raise LPError("infeasible")
        # drive remaining (zero-level) artificials out of the basis
        dropped = []
        for i in range(m):
            if t.basis[i] >= n + m:
                j = next((j for j in range(n + m) if t.rows[i][j] != 0), None)
                if j is None:
                    dropped.append(i)
                else:
                    _pivot(t, i, j)
        for i in reversed(dropped):
            del t.rows[i], t.rhs[i], t.basis[i]
    allowed = [True] * (n + m) + [False] * n_art
    cost = c + [Fraction(0)] * (m + n_art)
    trace: list[Fraction] = []
    _optimise(t, cost, allowed, trace)
    x = [Fraction(0)] * width
    for bi, v in zip(t.basis, t.rhs):
        x[bi] = v
    opt = sum(c[j] * x[j] for j in range(n))
    y = []
    for i in range(m):
        j = n + i
        red = cost[j] - sum(cost[bi] * row[j] for bi, row in zip(t.basis, t.rows))
        y.append(-red)
    return SimplexResult(opt, tuple(x[:n]), tuple(y), tuple(trace))


# LP objects ----------------------------------------------------------------

@dataclass(frozen=True)
class TightnessReport:
    alpha_kdd: Fraction
    optimum: Fraction
    tight: bool
    witness: dict = field(default_factory=dict)   # LocalView -> p(L) of an optimal solution


@dataclass(frozen=True)
class ExactLP:
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    a: tuple[Fraction, ...]
    views: tuple[LocalView, ...]
    row_names: tuple[str, ...]
    d: int = 0
    kind: str = ""
    lam: Fraction = Fraction(0)
    tightness: Optional[TightnessReport] = None

    def __post_init__(self):
        if len(self.A) != len(self.b) or len(self.row_names) != len(self.b):
            raise ValueError("row count mismatch")
        if any(len(r) != len(self.a) for r in self.A) or len(self.views) != len(self.a):
            raise ValueError("column count mismatch")

    def objective(self, p: Sequence[Fraction]) -> Fraction:
        return sum(x * y for x, y in zip(self.a, p))

    def violations(self, p: Sequence[Fraction]) -> list[tuple[str, Fraction]]:
        """Rows with (A p)_i > b_i, and the excess; empty iff feasible (p >= 0 assumed)."""
        out = []
        for name, row, bi in zip(self.row_names, self.A, self.b):
            lhs = sum(x * y for x, y in zip(row, p))
            if lhs > bi:
                out.append((name, lhs - bi))
        return out

    def vector_of(self, dist: dict) -> tuple[tuple[Fraction, ...], dict]:
        """Column vector of a view distribution, plus any mass on unknown views."""
        idx = {lv: i for i, lv in enumerate(self.views)}
        p = [Fraction(0)] * len(self.views)
        unknown = {}
        for lv, w in dist.items():
            if lv in idx:
                p[idx[lv]] += w
            else:
                unknown[lv] = w
        return tuple(p), unknown

    def to_text(self) -> str:
        """Human-readable dump: columns, objective row, constraint rows, entries 'a/b'."""
        lines = [f"\\ exact occupancy LP kind={self.kind} d={self.d} lambda={rat_str(self.lam)}"]
        for j, lv in enumerate(self.views):
            lines.append(f"\\ p{j} = {lv.label()} [{lv.hex()}]")
        lines.append("Maximize")
        lines.append(" obj: " + _linear(self.a))
        lines.append("Subject To")
        for name, row, bi in zip(self.row_names, self.A, self.b):
            lines.append(f" {name}: {_linear(row)} <= {rat_str(bi)}")
        lines.append("Bounds")
        lines.append(" p_j >= 0 for all j")
        lines.append("End")
        return "\n".join(lines) + "\n"


def _linear(coeffs: Sequence[Fraction]) -> str:
    terms = [f"{'+' if v > 0 else '-'} {rat_str(abs(v))} p{j}" for j, v in enumerate(coeffs) if v]
    if not terms:
        return "0"
    s = " ".join(terms)
    return s[2:] if s.startswith("+ ") else s


@dataclass(frozen=True)
class DualCertificate:
    q: tuple[Fraction, ...]
    objective: Fraction
    slack: dict   # LocalView -> Fraction

    def zero_slack(self) -> list[LocalView]:
        return [lv for lv, s in self.slack.items() if s == 0]


@dataclass(frozen=True)
class LPSolution:
    optimum: Fraction
    primal: tuple[Fraction, ...]
    dual: DualCertificate
    iterates: tuple[Fraction, ...]

    def to_json(self, lp: ExactLP) -> dict:
        return {
            "kind": lp.kind, "d": lp.d, "lambda": rat_str(lp.lam),
            "optimum": rat_str(self.optimum),
            "dual_objective": rat_str(self.dual.objective),
            "primal": {lv.hex(): rat_str(x) for lv, x in zip(lp.views, self.primal) if x},
            "dual": [rat_str(x) for x in self.dual.q],
            "slack": {lv.hex(): rat_str(s) for lv, s in self.dual.slack.items()},
            "zero_slack": [lv.hex() for lv in self.dual.zero_slack()],
            "view_labels": {lv.hex(): lv.label() for lv in lp.views},
        }


@dataclass(frozen=True)
class StabilityResult:
    theta_star: Fraction
    f: Fraction
    c: Fraction
    L_star: tuple[LocalView, ...]
    dual: DualCertificate
    optimum: Fraction
    augmented_feasible: bool

    def to_json(self) -> dict:
        return {"theta_star": rat_str(self.theta_star), "f": rat_str(self.f), "c": rat_str(self.c),
                "optimum": rat_str(self.optimum),
                "L_star": [lv.label() for lv in self.L_star],
                "augmented_dual_feasible": self.augmented_feasible}


# construction ---------------------------------------------------------------

@lru_cache(maxsize=None)
def enumerate_local_views(d: int, kind: str) -> tuple[LocalView, ...]:
    """All local views realizable in d-regular graphs, each certified by a host."""
    if not 1 <= d <= MAX_D:
        raise ValueError(f"local view enumeration supports 1 <= d <= {MAX_D}")
    if kind == "match":
        cands = candidate_match_views(d)
    elif kind == "ind":
        cands = candidate_ind_views(d)
    else:
        raise ValueError(f"no local-view LP for kind {kind!r}")
    out = []
    for lv in cands:
        if certify_realizable(lv, d) is not None:
            out.append(lv)
        else:
            log.info("view %s not certified for d=%d", lv.label(), d)
    return tuple(out)


def alpha_kdd(d: int, kind: str, lam) -> Fraction:
    lam = as_rat(lam)
    if kind == "match":
        return occupancy_fraction(kdd_match_coeffs(d), (2 * d, d * d), lam)
    if kind == "ind":
        return occupancy_fraction(kdd_ind_coeffs(d), (2 * d, d * d), lam)
    raise ValueError(f"unknown kind {kind!r}")


def build_lp(d: int, kind: str, lam, check: bool = True) -> ExactLP:
    lam = as_rat(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    views = enumerate_local_views(d, kind)
    nv = len(views)
    one = Fraction(1)
    A = [tuple([one] * nv), tuple([-one] * nv)]
    b = [one, -one]
    names = ["norm_le", "norm_ge"]
    if kind == "match":
        qs = [match_view_quantities(lv, d, lam) for lv in views]
        keys = ("in", "free", "one")
    else:
        qs = [ind_view_quantities(lv, d, lam) for lv in views]
        keys = ("defect",)
    for key in keys:
        row = tuple(qv[key] for qv in qs)
        A += [row, tuple(-x for x in row)]
        b += [Fraction(0), Fraction(0)]
        names += [f"{key}_le", f"{key}_ge"]
    a = tuple(qv["root"] for qv in qs)
    lp = ExactLP(tuple(A), tuple(b), a, views, tuple(names), d, kind, lam)
    if not check:
        return lp
    sol = solve_lp(lp)
    target = alpha_kdd(d, kind, lam)
    tight = sol.optimum == target
    witness = {} if tight else {lv: x for lv, x in zip(views, sol.primal) if x}
    if not tight:
        log.warning("LP not tight: kind=%s d=%d lambda=%s optimum %s > alpha_Kdd %s",
                    kind, d, lam, sol.optimum, target)
    rep = TightnessReport(target, sol.optimum, tight, witness)
    return ExactLP(lp.A, lp.b, lp.a, lp.views, lp.row_names, d, kind, lam, rep)


def solve_lp(lp: ExactLP) -> LPSolution:
    res = simplex_max(lp.A, lp.b, lp.a)
    q = res.y
    if any(x < 0 for x in q):
        raise LPError("negative dual value")
    slack = {}
    for j, lv in enumerate(lp.views):
        col = sum(lp.A[i][j] * q[i] for i in range(len(q)))
        slack[lv] = col - lp.a[j]
    if any(s < 0 for s in slack.values()):
        raise LPError("dual infeasible at optimum")
    dual_obj = sum(x * y for x, y in zip(lp.b, q))
    if dual_obj != res.optimum:
        raise LPError(f"duality gap {dual_obj} vs {res.optimum}")
    if any(v > dual_obj for v in res.iterates):
        raise LPError("weak duality violated on an iterate")
    if any(x * slack[lv] for x, lv in zip(res.x, lp.views)):
        raise LPError("complementary slackness violated")
    return LPSolution(res.optimum, res.x, DualCertificate(q, dual_obj, slack), res.iterates)


# stability -----------------------------------------------------------------

def f_constant(d: int, kind: str, lam, q: Optional[int] = None) -> Fraction:
    """Probability lower bound for a view outside L* at a vertex or edge not in a K_{d,d}."""
    lam = as_rat(lam)
    if kind == "match":
        return min((1 + lam) ** -(d - 2), lam * (1 + lam) ** -(2 * d * d))
    if kind == "ind":
        return lam * (1 + lam) ** -(2 * d + 1)
    if kind == "potts":
        if q is None:
            raise ValueError("potts needs q")
        return (lam ** d / q) ** (2 * d)
    raise ValueError(f"unknown kind {kind!r}")


def _augmented_q(lp: ExactLP, alpha: Fraction, outside: Sequence[bool]) -> tuple[Fraction, tuple[Fraction, ...]]:
    """max theta s.t. A^T q - theta x >= a, b.q <= alpha, theta <= 1, q >= 0."""
    m = len(lp.b)
    rows, rhs = [], []
    for j in range(len(lp.views)):
        rows.append([-lp.A[i][j] for i in range(m)] + [Fraction(int(outside[j]))])
        rhs.append(-lp.a[j])
    rows.append(list(lp.b) + [Fraction(0)])
    rhs.append(alpha)
    rows.append([Fraction(0)] * m + [Fraction(1)])
    rhs.append(Fraction(1))
    res = simplex_max(rows, rhs, [Fraction(0)] * m + [Fraction(1)])
    return res.optimum, res.x[:m]


def stability_constant(d: int, kind: str, lam) -> StabilityResult:
    lam = as_rat(lam)
    lp = build_lp(d, kind, lam, check=False)
    sol = solve_lp(lp)
    kdd = set(kdd_views(d, kind))
    outside = [lv not in kdd for lv in lp.views]
    theta_aug, q = _augmented_q(lp, sol.optimum, outside)
    if theta_aug <= 0:
        q = sol.dual.q
    slack = {}
    for j, lv in enumerate(lp.views):
        slack[lv] = sum(lp.A[i][j] * q[i] for i in range(len(q))) - lp.a[j]
    pos = [s for s in slack.values() if s > 0]
    if not pos:
        raise DegenerateLPError(f"all slacks zero for kind={kind} d={d} lambda={lam}")
    theta = min(pos)
    L_star = tuple(lv for lv, s in slack.items() if s == 0)
    dual_obj = sum(x * y for x, y in zip(lp.b, q))
    x = [lv not in L_star for lv in lp.views]
    aug_ok = (all(v >= 0 for v in q) and dual_obj == sol.optimum and
              all(sum(lp.A[i][j] * q[i] for i in range(len(q))) - theta * x[j] >= lp.a[j]
                  for j in range(len(lp.views))))
    f = f_constant(d, kind, lam)
    return StabilityResult(theta, f, f * theta, L_star, DualCertificate(tuple(q), dual_obj, slack),
                           sol.optimum, aug_ok)


@dataclass(frozen=True)
class GapCheck:
    ok: bool
    alpha_g: Fraction
    alpha_kdd: Fraction
    c: Fraction
    delta: Fraction

    @property
    def margin(self) -> Fraction:
        return self.alpha_kdd - self.c * self.delta - self.alpha_g


def stability_gap_detail(g: Graph, d: int, kind: str, lam, stab: Optional[StabilityResult] = None,
                         delta: str = "exact", r_max: int = 6, dist: Optional[Fraction] = None) -> GapCheck:
    """delta="exact" uses the full sampling distance; "upper" the truncated bound lower + 2^-r_max."""
    from .polys import coeffs
    from .sampling import sampling_distance, sampling_distance_exact
    lam = as_rat(lam)
    if not g.is_regular(d):
        raise ValueError(f"graph is not {d}-regular")
    stab = stab or stability_constant(d, kind, lam)
    a_g = occupancy_fraction(coeffs(g, kind), (g.n, g.m), lam)
    a_k = alpha_kdd(d, kind, lam)
    if dist is not None:
        pass
    elif delta == "exact":
        dist = sampling_distance_exact(g, k_dd(d))
    elif delta == "upper":
        dist = sampling_distance(g, k_dd(d), r_max).upper
    else:
        raise ValueError(f"unknown delta mode {delta!r}")
    return GapCheck(a_g <= a_k - stab.c * dist, a_g, a_k, stab.c, dist)


def stability_gap_check(g: Graph, d: int, kind: str, lam) -> bool:
    """alpha_G(lam) <= alpha_{K_dd}(lam) - c(d, lam) * delta(G, K_dd), exactly."""
    return stability_gap_detail(g, d, kind, lam).ok


def lp_certificate_json(lp: ExactLP, sol: LPSolution) -> str:
    obj = sol.to_json(lp)
    if lp.tightness is not None:
        obj["alpha_kdd"] = rat_str(lp.tightness.alpha_kdd)
        obj["tight"] = lp.tightness.tight
    return json.dumps(obj, indent=2, sort_keys=True)
