from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import factorint

from dfheight.errors import PreconditionError
from dfheight.heights import (
    AffineHeight,
    H_affine_tuple,
    H_rational,
    check_height_inequalities,
    height_point,
    height_rational,
    log_enclosure,
    poly_eval_height_bound,
    primitive_vector,
)

rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)


def _abs_p(x: Fraction, p: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return Fraction(1, p) ** v if v >= 0 else Fraction(p) ** (-v)


def place_by_place_H(coords) -> Fraction:
    """Product over all places of the max coordinate absolute value."""
    xs = [Fraction(c) for c in coords]
    primes = set()
    for x in xs:
        if x:
            primes |= set(factorint(abs(x.numerator))) | set(factorint(x.denominator))
    H = max(abs(x) for x in xs)
    for p in primes:
        H *= max(_abs_p(x, p) for x in xs)
    return H


def test_rational_heights():
    assert H_rational(Fraction(-3, 7)) == 7
    assert H_rational(Fraction(22, 7)) == 22
    assert H_rational(0) == 1
    assert height_rational(1).logarithmic == (0.0, 0.0)
    iv = height_rational(Fraction(1, 2)).logarithmic
    assert iv.lo <= math.log(2) <= iv.hi


def test_log_enclosure_is_outward():
    for n in (2, 3, 10**30 + 7, Fraction(7, 3)):
        iv = log_enclosure(n)
        assert iv.lo <= math.log(Fraction(n).numerator) - math.log(Fraction(n).denominator) <= iv.hi
    with pytest.raises(ValueError):
        log_enclosure(0)


@given(st.lists(rationals, min_size=1, max_size=5).filter(any))
def test_point_height_matches_place_by_place_product(coords):
    assert height_point(coords).multiplicative == place_by_place_H(coords)


@given(st.lists(rationals, min_size=1, max_size=5).filter(any), rationals.filter(bool))
def test_point_height_is_projective(coords, lam):
    assert height_point(coords).multiplicative == height_point([lam * c for c in coords]).multiplicative


def test_primitive_vector():
    assert primitive_vector([Fraction(1, 2), Fraction(1, 3), 0]) == [3, 2, 0]
    with pytest.raises(PreconditionError):
        primitive_vector([0, 0])


@given(st.lists(rationals, max_size=8))
def test_affine_height_matches_projective(values):
    assert H_affine_tuple(values) == place_by_place_H([1, *values])
    running = AffineHeight()
    prev = 1
    for v in values:
        running.push(v)
        assert running.H >= prev
        prev = running.H
    assert running.H == H_affine_tuple(values)


def test_inequalities_on_sample():
    rng = random.Random(7)
    sample = [Fraction(rng.randint(-999, 999), rng.randint(1, 999)) for _ in range(200)]
    for m in range(-3, 4):
        assert check_height_inequalities(sample, m).passed


@given(st.lists(rationals, min_size=3, max_size=10), st.integers(-3, 3))
def test_inequalities_property(sample, m):
    rep = check_height_inequalities(sample, m)
    assert rep.passed, rep.witnesses


def test_eval_bound_arguments():
    b = poly_eval_height_bound(3, 2.0)
    assert b.slope_term == 8.0
    assert b.constant == pytest.approx(4 * math.log(4))
    assert b.total == b.slope_term + b.constant
    with pytest.raises(PreconditionError):
        poly_eval_height_bound(0, 1.0)
    with pytest.raises(PreconditionError):
        poly_eval_height_bound(2, -1.0)


@given(
    st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=50), min_size=2, max_size=6),
    st.fractions(min_value=-10**4, max_value=10**4, max_denominator=10**4),
)
def test_eval_bound_holds_both_directions(coeffs, alpha):
    if coeffs[-1] == 0:
        coeffs[-1] = Fraction(1)
    d = len(coeffs) - 1
    value = sum(c * alpha**i for i, c in enumerate(coeffs))
    if value == 0:
        return
    hmax = max(math.log(H_rational(c)) for c in coeffs)
    bound = poly_eval_height_bound(d, hmax).total
    diff = math.log(H_rational(value)) - d * math.log(H_rational(alpha))
    assert abs(diff) <= bound + 1e-9
