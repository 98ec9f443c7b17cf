"""The six dominance predicates between two partition functions and their implications."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .exact import RatPoly, log_deriv_numerator, negative_witness, poly_eval, rat_str
from .graph import Graph, cl_dn
from .polys import CoefVector, ind_coeffs

FLAGS = ("COUNT", "PART", "COEF", "OCC", "MAX", "FV")

# (premise, conclusion) pairs guaranteed by the hierarchy proposition
IMPLICATIONS = (("PART", "COUNT"), ("PART", "MAX"), ("COEF", "PART"),
                ("OCC", "PART"), ("FV", "COEF"), ("FV", "OCC"))

Coeffs = Union[CoefVector, Sequence[int]]


def _as_list(c: Coeffs) -> list[int]:
    return list(c.coeffs) if isinstance(c, CoefVector) else [int(x) for x in c]


def _pad(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    n = max(len(a), len(b))
    return a + [0] * (n - len(a)), b + [0] * (n - len(b))


def _validate(a: list[int], b: list[int]) -> None:
    if not a or not b:
        raise ValueError("empty coefficient vector")
    if any(x < 0 for x in a + b):
        raise ValueError("negative coefficient")
    if a[0] != b[0]:
        raise ValueError(f"constant terms differ ({a[0]} vs {b[0]}); rejected rather than normalised")
    if a[0] <= 0:
        raise ValueError("constant term must be positive")


def _witness_interval(w) -> dict:
    x, lo, hi = w
    return {"lambda": rat_str(x), "interval": [rat_str(lo), None if hi is None else rat_str(hi)]}


def has_internal_zero(c: Sequence[int]) -> bool:
    """A zero coefficient followed by a nonzero one."""
    seen_zero = False
    for x in c:
        if x == 0:
            seen_zero = True
        elif seen_zero:
            return True
    return False


def fv_holds(a: Sequence[int], b: Sequence[int]) -> tuple[bool, object]:
    """FV with the zero conventions: an H ratio after a zero of H is -inf; where
    c_k(G) = 0 the comparison fails only if H's ratio is positive."""
    for k in range(len(a) - 1):
        if b[k] == 0:
            return True, None       # every later H ratio is -inf
        if a[k] == 0:
            if b[k + 1] > 0:
                return False, k
            continue
        if a[k + 1] * b[k] < b[k + 1] * a[k]:
            return False, k
    return True, None


@dataclass
class DominanceReport:
    flags: dict
    witnesses: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)   # broken implications (bug detector)
    rk_nonneg: bool = True
    notes: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"flags": dict(self.flags), "witnesses": self.witnesses,
                "consistent": self.consistent,
                "violations": [f"{p} => {c}" for p, c in self.violations],
                "notes": list(self.notes)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def rk_coefficients(zg: Coeffs, zh: Coeffs, check_points: Sequence[Fraction] = (Fraction(1, 3), Fraction(2), Fraction(7, 2))) -> list[int]:
    """r_k = sum_j (k - 2j + 1) b_j a_{k-j+1}: coefficients of Z_G' Z_H - Z_H' Z_G."""
    a, b = _pad(_as_list(zg), _as_list(zh))
    _validate(a, b)
    n = len(a) - 1
    A = lambda i: a[i] if 0 <= i <= n else 0
    B = lambda i: b[i] if 0 <= i <= n else 0
    rs = [sum((k - 2 * j + 1) * B(j) * A(k - j + 1) for j in range(k + 2)) for k in range(max(2 * n, 1))]
    num = log_deriv_numerator(RatPoly(a), RatPoly(b))
    r_poly = RatPoly(rs)
    for x in check_points:
        if poly_eval(r_poly, x) != poly_eval(num, x):
            raise AssertionError("r_k expansion disagrees with Z_G'Z_H - Z_H'Z_G")
    return rs


def dominance(zg: Coeffs, zh: Coeffs) -> DominanceReport:
    a, b = _pad(_as_list(zg), _as_list(zh))
    _validate(a, b)
    pa, pb = RatPoly(a), RatPoly(b)
    flags, wit = {}, {}

    flags["COUNT"] = sum(a) >= sum(b)
    if not flags["COUNT"]:
        wit["COUNT"] = {"sum_g": str(sum(a)), "sum_h": str(sum(b))}

    w = negative_witness(pa - pb)
    flags["PART"] = w is None
    if w is not None:
        wit["PART"] = _witness_interval(w)

    bad = next((k for k in range(len(a)) if a[k] < b[k]), None)
    flags["COEF"] = bad is None
    if bad is not None:
        wit["COEF"] = {"k": bad}

    w = negative_witness(log_deriv_numerator(pa, pb))
    flags["OCC"] = w is None
    if w is not None:
        wit["OCC"] = _witness_interval(w)

    flags["MAX"] = a[-1] >= b[-1]
    if not flags["MAX"]:
        wit["MAX"] = {"k": len(a) - 1}

    ok, k = fv_holds(a, b)
    flags["FV"] = ok
    if not ok:
        wit["FV"] = {"k": k}

    rep = DominanceReport(flags, wit)
    # with a zero of H followed by a nonzero coefficient, the zero convention
    # makes FV vacuous past the zero, so FV no longer forces COEF or OCC
    fv_applies = not has_internal_zero(b)
    if not fv_applies:
        rep.notes.append("H has an internal zero: FV implications not applicable")
    rep.violations = [(p, c) for p, c in IMPLICATIONS
                      if flags[p] and not flags[c] and (p != "FV" or fv_applies)]
    if flags["FV"] and fv_applies:
        rep.rk_nonneg = all(r >= 0 for r in rk_coefficients(a, b))
        if not rep.rk_nonneg:
            rep.violations.append(("FV", "r_k >= 0"))
    return rep


def hierarchy_consistency(zg: Coeffs, zh: Coeffs) -> tuple[bool, list]:
    """(ok, violated implications)."""
    rep = dominance(zg, zh)
    return rep.consistent, rep.violations


@dataclass(frozen=True)
class CutlerRadcliffeResult:
    ok: bool
    fv_failures: tuple[int, ...]
    coef_failures: tuple[int, ...]


def cutler_radcliffe_detail(g: Graph, d: int, n: int) -> CutlerRadcliffeResult:
    if (d + 1) == 0 or n % (d + 1):
        raise ValueError(f"d+1 must divide n (d={d}, n={n})")
    if g.n != n or not g.is_regular(d):
        raise ValueError(f"graph is not {d}-regular on {n} vertices")
    ig = ind_coeffs(g)
    ic = ind_coeffs(cl_dn(d, n))
    fv_bad = []
    for k in range(1, n // (d + 1) + 1):
        # (k+1) i_{k+1}(G)/i_k(G) >= (k+1) i_{k+1}(CL)/i_k(CL), cross-multiplied
        if ig[k] == 0 or ig[k + 1] * ic[k] < ic[k + 1] * ig[k]:
            fv_bad.append(k)
    coef_bad = [k for k in range(max(len(ig), len(ic))) if ig[k] < ic[k]]
    return CutlerRadcliffeResult(not fv_bad and not coef_bad, tuple(fv_bad), tuple(coef_bad))


def cutler_radcliffe_check(g: Graph, d: int, n: int) -> bool:
    """f_k(G) >= f_k(CL_{d,n}) for 1 <= k <= n/(d+1), and i_k(G) >= i_k(CL_{d,n}) for all k."""
    return cutler_radcliffe_detail(g, d, n).ok
