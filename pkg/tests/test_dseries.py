from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from dfheight.dseries import (
    DFiniteSystem,
    Polynomial,
    RationalFunction,
    TruncatedSeries,
    apply_system,
    coefficient_relation,
    falling_factorial,
    monomials_of_degree,
    monomials_up_to,
    nonzero_substitution_check,
    section,
    substitute_monomials,
)
from dfheight.errors import PreconditionError

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def sympy_coeffs(expr, T):
    x = sympy.Symbol("x")
    s = sympy.series(expr(x), x, 0, T + 1).removeO()
    return [Fraction(str(s.coeff(x, k))) for k in range(T + 1)]


def test_monomial_enumeration():
    assert sorted(monomials_of_degree(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(list(monomials_up_to(3, 4))) == 35


def test_falling_factorial():
    assert falling_factorial(0, 5) == 1
    assert falling_factorial(3, 5) == 60
    assert falling_factorial(3, 2) == 0
    assert falling_factorial(2, Fraction(1, 2)) == Fraction(-1, 4)


def test_polynomial_arithmetic():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    p = (x + y) ** 2
    assert p.coefficient((1, 1)) == 2
    assert p.total_degree() == 2
    assert (p - x * x - y * y) == 2 * x * y
    assert p.derivative(0) == 2 * x + 2 * y
    assert p.evaluate([1, 2]) == 9
    assert Polynomial(2, {(0, 0): 0}).is_zero()


def test_univariate_expansion_matches_sympy():
    f = RationalFunction.univariate([1, 2], [1, -1, -1])
    assert f.expand(30).to_list() == sympy_coeffs(lambda x: (1 + 2 * x) / (1 - x - x**2), 30)
    g = RationalFunction.univariate([1], [1, 0, 0, -1])
    assert g.expand(20).to_list() == sympy_coeffs(lambda x: 1 / (1 - x**3), 20)


def test_bivariate_expansion():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    one = Polynomial.constant(2, 1)
    f = RationalFunction(one, (one - x * y) * (one + y))
    s = f.expand(12)
    for a, b in monomials_up_to(2, 12):
        # 1/(1-xy) * 1/(1+y): coefficient of x^a y^b is (-1)^(b-a) if b >= a
        expected = (-1) ** (b - a) if b >= a else 0
        assert s[(a, b)] == expected


def test_expansion_needs_nonzero_constant_term():
    with pytest.raises(PreconditionError):
        RationalFunction.univariate([1], [0, 1]).expand(5)


@given(st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=1, max_size=4), st.integers(0, 15), st.integers(0, 15))
def test_truncation_commutes_with_expansion(num, den, T1, T2):
    if not den[0]:
        den[0] = Fraction(1)
    f = RationalFunction.univariate(num, den)
    lo, hi = sorted((T1, T2))
    assert f.expand(hi).truncate(lo) == f.expand(lo)
    # the expansion really is num/den to order hi
    prod = (f.expand(hi).as_polynomial() * f.den).truncate(hi)
    assert prod == f.num.truncate(hi)


def test_series_list_roundtrip():
    s = TruncatedSeries.from_list([1, 0, Fraction(1, 2)])
    assert s.T == 2 and s.to_list() == [1, 0, Fraction(1, 2)]
    with pytest.raises(ValueError):
        TruncatedSeries(1, 2, {(3,): 1})


def exp_system():
    # f' - f = 0
    return DFiniteSystem.univariate([[-1], [1]])


def test_apply_system_on_solution_is_zero():
    T = 25
    exp = TruncatedSeries.from_list(sympy_coeffs(sympy.exp, T))
    (res,) = apply_system(exp_system(), exp)
    assert res.is_zero()
    assert res.T == T - 1
    sqrt_sys = DFiniteSystem.univariate([[-1], [2, 2]])  # 2(1+x) f' - f = 0
    sq = TruncatedSeries.from_list(sympy_coeffs(lambda x: sympy.sqrt(1 + x), T))
    (res,) = apply_system(sqrt_sys, sq)
    assert res.is_zero() and res.T == T - 2


def test_apply_system_detects_non_solution():
    (res,) = apply_system(exp_system(), TruncatedSeries.from_list([1, 1, 1, 1, 1]))
    assert not res.is_zero()


def test_apply_system_multivariate():
    # f = 1/((1-x)(1-y)) solves (1-x) f_x - f = 0 and (1-y) f_y - f = 0
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    one = Polynomial.constant(2, 1)
    sys = DFiniteSystem(2, [[-one, one - x], [-one, one - y]])
    f = RationalFunction(one, (one - x) * (one - y)).expand(10)
    assert all(r.is_zero() for r in apply_system(sys, f))


def test_apply_system_too_short():
    with pytest.raises(PreconditionError):
        apply_system(DFiniteSystem.univariate([[0, 0, 1], [1]]), TruncatedSeries.from_list([1, 1]))


def test_coefficient_relation():
    # f' - f: coefficient of x^r gives (r+1) a_{r+1} - a_r
    rel = coefficient_relation(exp_system(), 0, (4,))
    assert rel == [(5, (5,)), (-1, (4,))]
    # (1-x) f' - f: (r+1) a_{r+1} - r a_r - a_r
    sys = DFiniteSystem.univariate([[-1], [1, -1]])
    assert coefficient_relation(sys, 0, (3,)) == [(4, (4,)), (-4, (3,))]
    # indices below zero are dropped
    sys = DFiniteSystem.univariate([[0, 0, 1]])
    assert coefficient_relation(sys, 0, (1,)) == []


def test_substitution():
    f = RationalFunction(
        Polynomial.constant(2, 1),
        Polynomial(2, {(0, 0): 1, (1, 1): -1}),
    )
    g = substitute_monomials(f, [1, 2])
    assert g.den == Polynomial.univariate([1, 0, 0, -1])
    s = substitute_monomials(f.expand(6), [1, 2])
    assert s.T == 6
    assert s.to_list() == g.expand(6).to_list()
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    assert not nonzero_substitution_check(x - y, [1, 1])
    assert nonzero_substitution_check(x - y, [1, 2])
    with pytest.raises(ValueError):
        substitute_monomials(x, [0, 1])


@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 8))
def test_substitution_commutes_with_expansion(u0, u1, T):
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    one = Polynomial.constant(2, 1)
    f = RationalFunction(one + x, (one - x - y * y) * (one + x * y))
    lhs = substitute_monomials(f.expand(T), [u0, u1])
    rhs = substitute_monomials(f, [u0, u1]).expand(lhs.T)
    assert lhs == rhs


def test_sections_reassemble():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    one = Polynomial.constant(2, 1)
    f = RationalFunction(one + y, (one - x * y) * (one + y) * (one - x - y))
    T = 9
    full = f.expand(T)
    for N in range(T + 1):
        g = section(f, 0, N, T - N)
        for (b,), c in g.coeffs.items():
            assert full[(N, b)] == c
        for (a, b), c in full.coeffs.items():
            if a == N:
                assert g[(b,)] == c
