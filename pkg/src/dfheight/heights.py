"""Weil heights of rationals and rational points, with exact checks of the
standard height inequalities.

All heights here are exact on the multiplicative side (``H`` is a positive
integer for rational input); the logarithmic value ``h = log H`` is reported
as a float interval rounded outward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, NamedTuple, Sequence

from .errors import PreconditionError
from .exactnum import Interval, rational


def log_enclosure(n: int | Fraction) -> Interval:
    """Outward-rounded float interval around ``log n`` for a positive rational."""
    q = Fraction(n)
    if q <= 0:
        raise ValueError("log of a non-positive number")
    if q == 1:
        return Interval(0.0, 0.0)
    v = math.log(q.numerator) - math.log(q.denominator)
    slack = 8 * math.ulp(max(abs(v), 1.0))
    lo = v - slack
    if q > 1:
        lo = max(lo, 0.0)
    return Interval(lo, v + slack)


@dataclass(frozen=True)
class HeightValue:
    multiplicative: int | Fraction | None
    logarithmic: Interval

    @classmethod
    def exact(cls, H: int | Fraction) -> "HeightValue":
        return cls(H, log_enclosure(H))

    @property
    def h(self) -> float:
        """Best float estimate of the logarithmic height."""
        return self.logarithmic.mid


def height_rational(a) -> HeightValue:
    """H(p/q) = max(|p|, q) in lowest terms."""
    a = rational(a)
    return HeightValue.exact(max(abs(a.numerator), a.denominator))


def H_rational(a) -> int:
    a = rational(a)
    return max(abs(a.numerator), a.denominator)


def primitive_vector(coords: Sequence) -> list[int]:
    """Integer vector proportional to ``coords`` with gcd 1."""
    qs = [rational(c) for c in coords]
    if not any(qs):
        raise PreconditionError("a projective point needs a nonzero coordinate")
    den = 1
    for q in qs:
        den = lcm(den, q.denominator)
    ints = [int(q * den) for q in qs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints]


def height_point(coords: Sequence) -> HeightValue:
    """Height of the projective point [c_0 : ... : c_n]."""
    return HeightValue.exact(max(abs(v) for v in primitive_vector(coords)))


class AffineHeight:
    """Running height of the affine tuple (a_0, ..., a_n), i.e. of [1 : a_0 : ... : a_n].

    With L the lcm of the denominators, the vector (L, L a_0, ..., L a_n) is
    already primitive, so H = L * max(1, |a_i|).
    """

    __slots__ = ("den_lcm", "max_abs")

    def __init__(self, values: Iterable = ()):
        self.den_lcm = 1
        self.max_abs = Fraction(1)
        for v in values:
            self.push(v)

    def push(self, v) -> None:
        v = rational(v)
        self.den_lcm = lcm(self.den_lcm, v.denominator)
        if abs(v) > self.max_abs:
            self.max_abs = abs(v)

    @property
    def H(self) -> int:
        return int(self.den_lcm * self.max_abs)

    def log(self) -> float:
        return log_enclosure(self.H).mid


def H_affine_tuple(values: Sequence) -> int:
    return AffineHeight(values).H


def height_affine_tuple(values: Sequence) -> HeightValue:
    return HeightValue.exact(H_affine_tuple(values))


# --------------------------------------------------------------------------
# inequality checks


@dataclass
class InequalityReport:
    power_rule: bool = True
    sum_rule: bool = True
    product_rule: bool = True
    witnesses: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.power_rule and self.sum_rule and self.product_rule


def check_height_inequalities(sample: Sequence, m: int) -> InequalityReport:
    """Exact checks of H(a^m) = H(a)^|m|, H(a_1+...+a_r) <= r*prod H(a_i),
    H(ab) <= H(a)H(b) and H(a) <= H(ab)H(b) (the last for b != 0).

    Sums are checked on consecutive pairs and triples of ``sample``,
    products on consecutive pairs.  Zero is skipped in the power rule when
    m <= 0.
    """
    vals = [rational(a) for a in sample]
    rep = InequalityReport()
    for a in vals:
        if not a and m <= 0:
            continue
        lhs = H_rational(a**m)
        rhs = H_rational(a) ** abs(m)
        if lhs != rhs:
            rep.power_rule = False
            rep.witnesses.append({"rule": "power", "a": str(a), "m": m, "lhs": lhs, "rhs": rhs})
    for r in (2, 3):
        for i in range(len(vals) - r + 1):
            group = vals[i : i + r]
            lhs = H_rational(sum(group, Fraction(0)))
            rhs = r * math.prod(H_rational(a) for a in group)
            if lhs > rhs:
                rep.sum_rule = False
                rep.witnesses.append({"rule": "sum", "terms": [str(a) for a in group], "lhs": lhs, "rhs": rhs})
    for a, b in zip(vals, vals[1:]):
        ha, hb = H_rational(a), H_rational(b)
        hab = H_rational(a * b)
        if hab > ha * hb or (b and ha > hab * hb):
            rep.product_rule = False
            rep.witnesses.append({"rule": "product", "a": str(a), "b": str(b), "lhs": hab, "rhs": ha * hb})
    return rep


# --------------------------------------------------------------------------
# polynomial evaluation bound


def C1(d: int) -> float:
    """Slope constant of the evaluation bound (artifact choice, see ``poly_eval_height_bound``)."""
    return float(d + 1)


def C0(d: int) -> float:
    return (d + 1) * math.log(d + 1)


class EvalBound(NamedTuple):
    slope_term: float  # C1(d) * max h(a_i)
    constant: float  # C0(d)

    @property
    def total(self) -> float:
        return self.slope_term + self.constant


def poly_eval_height_bound(d: int, coeff_height_max: float) -> EvalBound:
    """Bound for |h(P(alpha)) - d h(alpha)| when deg P = d and max h(a_i) <= coeff_height_max.

    The constants are C1(d) = d + 1 and C0(d) = (d + 1) log(d + 1).  The
    upper direction is provable place by place:
    H(P(alpha)) <= (d+1) * prod H(a_i) * H(alpha)^d.
    The lower direction is checked on randomized instances in the tests.
    """
    if d < 1:
        raise PreconditionError("the evaluation bound needs degree d >= 1")
    if coeff_height_max < 0:
        raise PreconditionError("coefficient height bound must be nonnegative")
    return EvalBound(C1(d) * coeff_height_max, C0(d))
