"""Exact rational polynomials and sign decisions on the nonnegative axis.

All values are :class:`fractions.Fraction`; nothing in this module touches
floating point.  Sign questions are settled with Sturm sequences.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

Rat = Fraction


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


class RatPoly:
    """Univariate polynomial with rational coefficients, index = degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "RatPoly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatPoly):
            other = RatPoly([other])
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "RatPoly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*x^{k}")
        return "RatPoly(" + " + ".join(terms) + ")"

    def __add__(self, other) -> "RatPoly":
        other = _coerce(other)
        m = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(self[k] + other[k] for k in range(m))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "RatPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RatPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "RatPoly":
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "RatPoly":
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def __call__(self, x) -> Fraction:
        return poly_eval(self, x)

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RatPoly(), RatPoly(rem)
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lead
        for shift in range(dq, -1, -1):
            c = rem[shift + other.degree] / lead
            quot[shift] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[shift + j] -= c * b
        return RatPoly(quot), RatPoly(rem[: other.degree])

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[0]

    def monic(self) -> "RatPoly":
        return self if self.is_zero() else RatPoly(c / self.lead for c in self.coeffs)


def _coerce(x) -> RatPoly:
    return x if isinstance(x, RatPoly) else RatPoly([x])


def poly_eval(p: RatPoly, x) -> Fraction:
    """Horner evaluation, exact."""
    x = as_rat(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: RatPoly) -> RatPoly:
    if p.degree <= 0:
        return p
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


def sturm_sequence(p: RatPoly) -> list[RatPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return [s for s in seq if not s.is_zero()]


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _int_form(p: RatPoly) -> tuple[int, ...]:
    """Coefficients scaled by a positive integer to clear denominators (sign-preserving)."""
    m = 1
    for c in p.coeffs:
        m = m * c.denominator // gcd(m, c.denominator)
    return tuple(int(c * m) for c in p.coeffs)


def _int_seq(seq: list[RatPoly]) -> list[tuple[int, ...]]:
    return [_int_form(s) for s in seq]


def _sign_at(ic: tuple[int, ...], x: Optional[Fraction]) -> int:
    # sign of q^deg * p(num/q), by homogenised Horner in integers; None is +infinity
    if x is None:
        return (ic[-1] > 0) - (ic[-1] < 0)
    num, den = x.numerator, x.denominator
    acc = 0
    qp = 1
    for c in reversed(ic):
        acc = acc * num + c * qp
        qp *= den
    return (acc > 0) - (acc < 0)


def _var_at(seq: list[tuple[int, ...]], x: Optional[Fraction]) -> int:
    return _variations([_sign_at(s, x) for s in seq])


def root_bound(p: RatPoly) -> Fraction:
    """Cauchy bound: every real root has absolute value below the result."""
    if p.degree <= 0:
        return Fraction(1)
    lead = abs(p.lead)
    return 1 + max(abs(c) / lead for c in p.coeffs[:-1])


def _count(seq: list[RatPoly], a: Fraction, b: Optional[Fraction]) -> int:
    return _var_at(seq, a) - _var_at(seq, b)


def count_roots(p: RatPoly, a: Fraction, b: Optional[Fraction]) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (a, b]."""
    sf = squarefree_part(p)
    if sf.degree <= 0:
        return 0
    seq = _int_seq(sturm_sequence(sf))
    return _count(seq, as_rat(a), None if b is None else as_rat(b))


def _descartes(p: RatPoly) -> int:
    """Sign variations of the coefficients: an upper bound on positive roots."""
    return _variations([_sign(c) for c in p.coeffs])


def isolate_positive_roots(p: RatPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (lo, hi], increasing, each holding exactly one distinct
    positive real root of ``p``."""
    if p.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    sf = squarefree_part(p)
    if sf.degree <= 0:
        return []
    seq = _int_seq(sturm_sequence(sf))
    top = root_bound(sf)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(Fraction(0), top)]
    while stack:
        lo, hi = stack.pop()
        n = _var_at(seq, lo) - _var_at(seq, hi)
        if n == 1:
            out.append((lo, hi))
        elif n > 1:
            mid = (lo + hi) / 2
            stack.append((lo, mid))
            stack.append((mid, hi))
    return sorted(out)


def squarefree_factors(p: RatPoly) -> list[tuple[RatPoly, int]]:
    """Yun's algorithm: p = lead * prod f_i**i with each f_i squarefree and coprime."""
    if p.degree <= 0:
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def _odd_part(p: RatPoly) -> RatPoly:
    acc = RatPoly([1])
    for f, mult in squarefree_factors(p):
        if mult % 2:
            acc = acc * f
    return acc


def negative_witness(p: RatPoly) -> Optional[tuple[Fraction, Fraction, Optional[Fraction]]]:
    """Find x >= 0 with p(x) < 0.

    Returns ``(x, lo, hi)`` where p <= 0 throughout the open interval (lo, hi)
    (``hi`` None means unbounded) and p(x) < 0, or None if p >= 0 on [0, inf).
    Signs are read off multiplicity parity: past 0 the sign is that of the
    lowest nonzero coefficient, and it flips only at odd-multiplicity roots.
    """
    if p.is_zero():
        return None
    low = next(c for c in p.coeffs if c)
    if low > 0 and _descartes(p) == 0:
        return None
    odd = _odd_part(p)
    seq = _int_seq(sturm_sequence(odd)) if odd.degree > 0 else []
    odd_roots = [_lift_off_zero(seq, iv) for iv in isolate_positive_roots(odd)] if odd.degree > 0 else []
    if low < 0:
        if poly_eval(p, 0) < 0:
            return (Fraction(0), Fraction(0), odd_roots[0][0] if odd_roots else None)
        hi = odd_roots[0][0] if odd_roots else None
        x = _clean_point(p, seq, Fraction(0), hi)
        return (x, Fraction(0), hi)
    if not odd_roots:
        return None
    # sign is >= 0 up to the first odd root, <= 0 until the second
    lo = odd_roots[0][1]
    hi = None
    if len(odd_roots) > 1:
        # intervals may touch when the first root is their shared endpoint
        hi = _separate(seq, lo, odd_roots[1])[0]
    x = _clean_point(p, seq, lo, hi)
    return (x, lo, hi)


def _lift_off_zero(seq: list[tuple[int, ...]], iv: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    lo, hi = iv
    while lo == 0:
        mid = (lo + hi) / 2
        if _count(seq, mid, hi) == 1:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _separate(seq: list[tuple[int, ...]], floor: Fraction, iv: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    """Shrink the isolating interval iv until its lower end exceeds floor."""
    lo, hi = iv
    while lo <= floor:
        mid = (lo + hi) / 2
        if _count(seq, mid, hi) == 1:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _clean_point(p: RatPoly, seq: list[tuple[int, ...]], lo: Fraction, hi: Optional[Fraction]) -> Fraction:
    """A point in (lo, hi) with no odd root in (lo, x] and p(x) != 0 (seq: Sturm sequence of the odd part)."""
    span = (hi - lo) if hi is not None else Fraction(1)
    t = Fraction(1, 2)
    while True:
        x = lo + span * t
        if (not seq or _count(seq, lo, x) == 0) and poly_eval(p, x) != 0:
            return x
        t /= 2


def poly_nonneg_on_nonneg_axis(p: RatPoly) -> bool:
    """True iff p(x) >= 0 for every real x >= 0."""
    if p.is_zero():
        return True
    low = next(c for c in p.coeffs if c)
    if low < 0 or p.lead < 0:
        return False
    if _descartes(p) == 0:
        return True
    odd = _odd_part(p)
    return odd.degree <= 0 or count_roots(odd, Fraction(0), None) == 0


def _check_partition_poly(p: RatPoly, name: str) -> None:
    if any(c < 0 for c in p.coeffs):
        raise ValueError(f"{name} has a negative coefficient; not a partition function")
    if p[0] <= 0:
        raise ValueError(f"{name} needs a positive constant term")


def log_deriv_numerator(zg: RatPoly, zh: RatPoly) -> RatPoly:
    """Z_G' Z_H - Z_H' Z_G; its sign on (0, inf) is the sign of the log-derivative gap."""
    return zg.derivative() * zh - zh.derivative() * zg


def log_deriv_compare(zg: RatPoly, zh: RatPoly) -> bool:
    """True iff x Z_G'(x)/Z_G(x) >= x Z_H'(x)/Z_H(x) for every x > 0."""
    _check_partition_poly(zg, "zg")
    _check_partition_poly(zh, "zh")
    return poly_nonneg_on_nonneg_axis(log_deriv_numerator(zg, zh))


def rat_str(x: Fraction) -> str:
    x = as_rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Fraction:
    s = s.strip()
    if "." in s or "e" in s.lower():
        return Fraction(s)  # decimal literal parsed exactly
    return Fraction(s)
