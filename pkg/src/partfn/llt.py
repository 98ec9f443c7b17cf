"""Convolution powers against the local-CLT Gaussian, plus finite checks of the transfer inequalities.

The Gaussian density is the only floating-point quantity in the package; it is
evaluated with mpmath at PRECISION significant digits, alongside an interval
enclosure, and compared with exact probabilities.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .exact import as_rat, rat_str
from .graph import Graph, k_dd
from .observables import (SizeDistribution, partition_value, size_distribution,
                          tune_lambda_bracket)
from .polys import (CoefVector, coeffs, disjoint_union_coeffs, kdd_ind_coeffs, kdd_match_coeffs, kronecker_conv,
                    power_coeffs, potts_coeffs)

PRECISION = 60


class LatticeError(ValueError):
    """Base distribution violates the two-consecutive-integers hypothesis."""


@dataclass(frozen=True)
class ConvolutionPower:
    base: SizeDistribution
    K: int
    dist: SizeDistribution


def _int_power(ws: tuple[int, ...], K: int) -> list[int]:
    result = [1]
    base = list(ws)
    while K:
        if K & 1:
            result = kronecker_conv(result, base)
        K >>= 1
        if K:
            base = kronecker_conv(base, base)
    return result


def convolution_power(base: SizeDistribution, K: int) -> ConvolutionPower:
    """Distribution of the sum of K independent copies, exact."""
    if K < 1:
        raise ValueError("K must be at least 1")
    ws = _int_power(base.weights, K)
    return ConvolutionPower(base, K, SizeDistribution(tuple(ws), base.total ** K))


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class GnedenkoResult:
    K: int
    deviation: mpmath.mpf               # max_k |P(S_K = k) - gaussian(k)|
    deviation_interval: tuple           # interval enclosure (lo, hi) of the same maximum
    argmax: int
    rows: tuple = field(repr=False, default=())   # (k, exact prob, gaussian, deviation)

    @property
    def scaled(self) -> mpmath.mpf:
        return self.deviation * mpmath.sqrt(self.K)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "prob", "gaussian", "deviation"])
        for k, p, g, dv in self.rows:
            w.writerow([k, rat_str(p), mpmath.nstr(g, 20), mpmath.nstr(dv, 20)])
        return buf.getvalue()


def check_lattice(base: SizeDistribution) -> None:
    sup = set(base.support)
    if not any(k + 1 in sup for k in sup):
        raise LatticeError("support must contain two consecutive integers")


def gnedenko_deviation(base: SizeDistribution, K: int) -> GnedenkoResult:
    """Compare P(S_K = k) with the local-CLT Gaussian density, uniformly in k."""
    check_lattice(base)
    cp = convolution_power(base, K)
    mu, var = base.mean(), base.variance()
    with mpmath.workdps(PRECISION):
        m, s2 = _mp(K * mu), _mp(K * var)
        norm = 1 / mpmath.sqrt(2 * mpmath.pi * s2)
        rows = []
        best = (mpmath.mpf(-1), -1)
        for k, w in enumerate(cp.dist.weights):
            p = Fraction(w, cp.dist.total)
            g = norm * mpmath.exp(-(k - m) ** 2 / (2 * s2))
            dv = abs(_mp(p) - g)
            rows.append((k, p, g, dv))
            if dv > best[0]:
                best = (dv, k)
        # interval enclosure at the maximiser
        iv = mpmath.iv
        iv.dps = PRECISION
        k = best[1]
        ik = iv.mpf(k)
        im = iv.mpf(K * mu.numerator) / mu.denominator
        is2 = iv.mpf(K * var.numerator) / var.denominator
        gi = iv.exp(-(ik - im) ** 2 / (2 * is2)) / iv.sqrt(2 * iv.pi * is2)
        pi_ = iv.mpf(rows[k][1].numerator) / rows[k][1].denominator
        diff = pi_ - gi
        lo, hi = (mpmath.mpf(e) for e in diff._mpi_)
        enclosure = (min(abs(lo), abs(hi)) if lo * hi > 0 else mpmath.mpf(0), max(abs(lo), abs(hi)))
    return GnedenkoResult(K, best[0], enclosure, k, tuple(rows))


# ratio sandwich for H_{d,n} coefficients ---------------------------------------

@dataclass(frozen=True)
class RatioCheck:
    lam: Fraction
    ok: bool
    ratios: tuple[Fraction, ...]      # lam^r c_k / c_{k-r}, r = 0..r_max
    lam_lower: Fraction               # 2 eps / d (match)
    lam_upper: Optional[Fraction]     # lambda where alpha_Kdd = (1-eps)/d (match), or 1 (potts)
    lam_in_bounds: bool
    eps: Fraction


def _block(d: int, kind: str, q: Optional[int]) -> CoefVector:
    if kind == "match":
        return kdd_match_coeffs(d)
    if kind == "ind":
        return kdd_ind_coeffs(d)
    if kind == "potts":
        if q is None or q < 3:
            raise ValueError("potts ratio check needs q >= 3")
        return potts_coeffs(k_dd(d), q)
    raise ValueError(f"unsupported kind {kind!r}")


def ratio_lemma_check(d: int, n: int, k: int, r_max: int, delta, kind: str = "match",
                      q: Optional[int] = None, eps=None) -> RatioCheck:
    """Tune lam so the mean size on H_{d,n} is k, then test
    (1-delta) c_{k-r} <= lam^r c_k <= (1+delta) c_{k-r} for 0 <= r <= r_max."""
    delta = as_rat(delta)
    if n % (2 * d):
        raise ValueError("2d must divide n")
    K = n // (2 * d)
    if kind == "match":
        top = Fraction(n, 2)
        eps_max = min(Fraction(k, n), 1 - Fraction(2 * k, n))
    else:
        top = Fraction(d * n, 2 * q)
        eps_max = min(Fraction(k, n), 1 - Fraction(k) / top)
    eps = eps_max if eps is None else as_rat(eps)
    if eps <= 0 or eps > eps_max or (kind == "potts" and eps == eps_max):
        raise ValueError(f"k={k} outside the lemma's range for eps={eps}")
    block = _block(d, kind, q)
    # the mean over K independent blocks is K times the block mean
    _, _, lam = tune_lambda_bracket(block, Fraction(k, K))
    hc = power_coeffs(block, K)
    ratios = []
    ok = True
    for r in range(r_max + 1):
        if hc[k - r] == 0:
            ok = False
            ratios.append(Fraction(-1))
            continue
        ratio = lam ** r * hc[k] / hc[k - r]
        ratios.append(ratio)
        ok &= (1 - delta) <= ratio <= (1 + delta)
    if kind == "match":
        lo = 2 * eps / d
        # alpha_Kdd(lam) <= (1-eps)/d, i.e. block mean <= d(1-eps)
        up = tune_lambda_bracket(block, d * (1 - eps))[1]
        inb = lo <= lam <= up
    else:
        lo = Fraction(0)
        up = Fraction(1)
        inb = lam < 1
    return RatioCheck(lam, ok, tuple(ratios), lo, up, inb, eps)


def ratio_lemma_first_n(d: int, n0: int, k0: int, r_max: int, delta, kind: str = "match",
                        q: Optional[int] = None, n_max: int = 6000) -> Optional[int]:
    """Smallest n >= n0 keeping k/n = k0/n0 (and 2d | n) at which the sandwich holds."""
    frac = Fraction(k0, n0)
    step = 2 * d
    while (step * frac).denominator != 1:
        step += 2 * d
    n = n0
    while n <= n_max:
        if ratio_lemma_check(d, n, int(n * frac), r_max, delta, kind, q).ok:
            return n
        n += step
    return None


# transfer inequality audit ------------------------------------------------------

@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: Fraction
    rhs: Fraction
    holds: bool

    @property
    def margin(self) -> Fraction:
        return self.rhs - self.lhs

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": rat_str(self.lhs), "rhs": rat_str(self.rhs),
                "holds": self.holds, "margin": rat_str(self.margin)}


def _le(name: str, lhs, rhs, strict: bool = False) -> Inequality:
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    return Inequality(name, lhs, rhs, lhs < rhs if strict else lhs <= rhs)


def _hdn(d: int, n: int, kind: str, q: Optional[int]) -> CoefVector:
    if n == 0:
        return CoefVector(kind, (1,), q if kind == "potts" else None)
    return power_coeffs(_block(d, kind, q), n // (2 * d))


def ep_prime_check(d: int, n: int) -> list[Inequality]:
    """m_{k+1}(H_{d,n}) / m_k(H_{d,n}) <= d(n-2k) / (2(k+1)) for every k < n/2."""
    h = _hdn(d, n, "match", None)
    out = []
    for k in range(n // 2):
        if h[k]:
            out.append(_le(f"ratio k={k}", Fraction(h[k + 1], h[k]), Fraction(d * (n - 2 * k), 2 * (k + 1))))
    return out


def transfer_inequality_audit(gprime: Graph, d: int, n: int, k: int, case: str, *,
                              delta=Fraction(1, 10), delta_prime=Fraction(1, 10),
                              kind: str = "match", q: Optional[int] = None) -> dict:
    """Evaluate the displayed inequalities of one case at concrete parameters.

    G = G' disjoint union H_{d,n-n1}; the report lists each inequality with
    both sides exact, never claiming the theorem itself.
    """
    delta, delta_prime = as_rat(delta), as_rat(delta_prime)
    n1 = gprime.n
    if not gprime.is_regular(d):
        raise ValueError(f"G' must be {d}-regular")
    if n % (2 * d) or n1 % (2 * d) or n1 > n:
        raise ValueError("need 2d | n, 2d | n1 and n1 <= n")
    from .sampling import fraction_outside_kdd
    if any(len(c) == 2 * d and fraction_outside_kdd(gprime.induced(c)[0], d) == 0
           for c in gprime.components()):
        raise ValueError("G' must contain no K_{d,d} component")
    if case not in ("Small1", "Small2", "Large"):
        raise ValueError(f"unknown case {case!r}")
    n2 = n - n1
    cg = coeffs(gprime, kind, q)
    h = _hdn(d, n2, kind, q)
    hp = _hdn(d, n1, kind, q)
    hn = _hdn(d, n, kind, q)
    g_all = disjoint_union_coeffs(cg, h)
    rows: list[Inequality] = []
    rows.append(_le("coefficient convolution m_k(G) = sum_r m_r(G') m_{k-r}(H)",
                    sum(cg[r] * h[k - r] for r in range(k + 1)), g_all[k]))
    if kind == "potts":
        N1 = n1
        if hn[k]:
            rows.append(_le("Small-1 colour claim c_{k-1}/c_k < delta q^-N1",
                            Fraction(hn[k - 1], hn[k]), delta * Fraction(1, q ** N1), strict=True))
            rows.append(_le("recolouring bound c_k >= n/(4dk q^2d) c_{k-1}",
                            Fraction(n, 4 * d * k * q ** (2 * d)) * hn[k - 1], hn[k]))
        rows.append(_le("conclusion c_k(G) <= c_k(H_{d,n})", g_all[k], hn[k]))
        return {"case": case, "kind": kind, "d": d, "n": n, "n1": n1, "k": k, "q": q,
                "inequalities": [r.to_json() for r in rows], "all_hold": all(r.holds for r in rows)}
    if case == "Small1":
        top = n1 // 2
        rows.append(_le("top gap m_{n1/2}(G') <= (1-delta) m_{n1/2}(H_{d,n1})", cg[top], (1 - delta) * hp[top]))
        if hn[k]:
            rows.append(_le("counting bound m_{k+1}/m_k <= d(n-2k)/(2(k+1))",
                            Fraction(hn[k + 1], hn[k]), Fraction(d * (n - 2 * k), 2 * (k + 1))))
            rows.append(_le("eps' choice m_{k+1}/m_k < delta 2^(-d n1/2)",
                            Fraction(hn[k + 1], hn[k]), delta / 2 ** (d * n1 // 2), strict=True))
        tail = max((h[kk] for kk in range(max(k - top + 1, 0), len(h.coeffs))), default=0)
        rows.append(_le("chain line 2: m_k(G) <= m_top(G') m_{k-top}(H) + 2^(d n1/2) max tail",
                        g_all[k], cg[top] * h[k - top] + 2 ** (d * n1 // 2) * tail))
        rows.append(_le("chain line 4: (1-delta) m_top(H') m_{k-top}(H) + delta m_{k-top}(H) <= m_top(H') m_{k-top}(H)",
                        (1 - delta) * hp[top] * h[k - top] + delta * h[k - top], hp[top] * h[k - top]))
    elif case == "Small2":
        K2 = n2 // (2 * d)
        if not 0 < k < K2 * d:
            raise ValueError("Small2 needs 0 < k < n2/2 so that lam can be tuned on H_{d,n2}")
        _, _, lam = tune_lambda_bracket(_block(d, kind, q), Fraction(k, K2))
        for r in range(n1 // 2 + 1):
            if h[k - r]:
                ratio = lam ** r * h[k] / h[k - r]
                rows.append(_le(f"sandwich lower r={r}", (1 - delta_prime) * h[k - r], lam ** r * h[k]))
                rows.append(_le(f"sandwich upper r={r}", lam ** r * h[k], (1 + delta_prime) * h[k - r]))
        zg = partition_value(cg, lam)
        zh = partition_value(hp, lam)
        rows.append(_le("Z_G'(lam) <= (1-delta')/(1+2delta') Z_H'(lam)", zg,
                        (1 - delta_prime) / (1 + 2 * delta_prime) * zh))
        rows.append(_le("lam >= 2 eps/d with eps = k/n", 2 * Fraction(k, n) / d, lam))
    else:
        # lam makes the mean size on the whole of H_{d,n} equal to k
        _, _, lam = tune_lambda_bracket(_block(d, kind, q), Fraction(k, n // (2 * d)))
        s = max(range(min(n1 // 2, k) + 1), key=lambda r: (cg[r] * h[k - r], -r))
        a = (k * n1) // n
        b = -((-k * n2) // n)
        zg = partition_value(cg, lam)
        zhp = partition_value(hp, lam)
        pg = size_distribution(cg, lam).prob(s)
        php = size_distribution(hp, lam).prob(a)
        sh = size_distribution(h, lam)
        lhs = zhp / zg * (php / pg) * (sh.prob(b) / sh.prob(k - s))
        rows.append(_le("most likely split bound m_k(G) <= (n1/2+1) m_s(G') m_{k-s}(H)",
                        g_all[k], (n1 // 2 + 1) * cg[s] * h[k - s]))
        rows.append(_le("lower bound m_k(H_{d,n}) >= m_floor(H') m_ceil(H)", hp[a] * h[b], hn[k]))
        rows.append(_le("cancelled form (n1/2+1) <= Z ratio x P ratios", Fraction(n1 // 2 + 1), lhs))
    rows.append(_le("conclusion m_k(G) <= m_k(H_{d,n})", g_all[k], hn[k]))
    return {"case": case, "kind": kind, "d": d, "n": n, "n1": n1, "k": k,
            "inequalities": [r.to_json() for r in rows], "all_hold": all(r.holds for r in rows)}
