"""Sparse multivariate polynomials, truncated power series and linear
differential systems with polynomial coefficients.

Exponent vectors are tuples of nonnegative ints; variables are indexed from
0.  Series are truncated by total degree.  Scalars are ``Fraction`` or
``Cyclotomic``; a missing key always means a zero coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import PreconditionError
from .exactnum import Cyclotomic, rational

MultiIndex = tuple


def _scalar(x):
    if isinstance(x, Cyclotomic):
        return x
    return rational(x)


def _add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def _sub_index(a: MultiIndex, b: MultiIndex) -> MultiIndex | None:
    out = tuple(x - y for x, y in zip(a, b))
    return out if min(out, default=0) >= 0 else None


def monomials_of_degree(m: int, k: int) -> Iterator[MultiIndex]:
    """All exponent vectors in m variables of total degree exactly k."""
    for combo in combinations_with_replacement(range(m), k):
        idx = [0] * m
        for v in combo:
            idx[v] += 1
        yield tuple(idx)


def monomials_up_to(m: int, T: int) -> Iterator[MultiIndex]:
    for k in range(T + 1):
        yield from monomials_of_degree(m, k)


# --------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Sparse polynomial in ``m`` variables; zero coefficients are never stored."""

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: Mapping[MultiIndex, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[MultiIndex, object] = {}
        for idx, c in items:
            idx = tuple(int(e) for e in idx)
            if len(idx) != m or min(idx, default=0) < 0:
                raise ValueError(f"bad exponent vector {idx} for {m} variables")
            c = _scalar(c)
            if idx in clean:
                c = clean[idx] + c
            clean[idx] = c
        self.m = m
        self.terms = {k: v for k, v in clean.items() if v}

    # constructors -------------------------------------------------------

    @classmethod
    def constant(cls, m: int, c) -> "Polynomial":
        return cls(m, {(0,) * m: c})

    @classmethod
    def variable(cls, m: int, i: int) -> "Polynomial":
        idx = [0] * m
        idx[i] = 1
        return cls(m, {tuple(idx): 1})

    @classmethod
    def monomial(cls, idx: Sequence[int], c=1) -> "Polynomial":
        return cls(len(idx), {tuple(idx): c})

    @classmethod
    def univariate(cls, coeffs: Sequence) -> "Polynomial":
        """From a coefficient list, lowest degree first."""
        return cls(1, {(k,): c for k, c in enumerate(coeffs)})

    # queries ------------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, idx: MultiIndex):
        return self.terms.get(tuple(idx), Fraction(0))

    def constant_term(self):
        return self.coefficient((0,) * self.m)

    def total_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(k) for k in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((k[i] for k in self.terms), default=-1)

    def support(self) -> list[MultiIndex]:
        return sorted(self.terms)

    def to_univariate(self) -> list:
        if self.m != 1:
            raise ValueError("polynomial is not univariate")
        out = [Fraction(0)] * (self.total_degree() + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    def height_data(self) -> list[Fraction]:
        """Coefficients as rationals (raises for non-rational cyclotomic entries)."""
        out = []
        for c in self.terms.values():
            if isinstance(c, Cyclotomic):
                c = c.to_rational()
            out.append(c)
        return out

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.m != other.m:
            raise ValueError("variable counts differ")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.m, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return Polynomial(self.m, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.m, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            other = _scalar(other)
            return Polynomial(self.m, {k: c * other for k, c in self.terms.items()})
        self._check(other)
        terms: dict[MultiIndex, object] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = _add_index(k1, k2)
                v = c1 * c2
                terms[k] = terms[k] + v if k in terms else v
        return Polynomial(self.m, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Polynomial.constant(self.m, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.m == other.m and (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.m, frozenset(self.terms)))

    def __repr__(self):
        if not self.terms:
            return f"Polynomial({self.m}: 0)"
        parts = []
        for k in sorted(self.terms):
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(k) if e)
            parts.append(f"{self.terms[k]}" + (f"*{mono}" if mono else ""))
        return f"Polynomial({self.m}: {' + '.join(parts)})"

    def derivative(self, i: int, times: int = 1) -> "Polynomial":
        terms = {}
        for k, c in self.terms.items():
            if k[i] >= times:
                nk = list(k)
                nk[i] -= times
                terms[tuple(nk)] = c * falling_factorial(times, k[i])
        return Polynomial(self.m, terms)

    def evaluate(self, point: Sequence):
        acc = Fraction(0)
        for k, c in self.terms.items():
            v = c
            for x, e in zip(point, k):
                if e:
                    v = v * x**e
            acc = acc + v
        return acc

    def truncate(self, T: int) -> "Polynomial":
        return Polynomial(self.m, {k: c for k, c in self.terms.items() if sum(k) <= T})

    def drop_variable(self, i: int) -> "Polynomial":
        """Reinterpret as a polynomial in the other variables (requires no x_i)."""
        if self.degree_in(i) > 0:
            raise ValueError(f"polynomial depends on variable {i}")
        return Polynomial(self.m - 1, {k[:i] + k[i + 1 :]: c for k, c in self.terms.items()})


# --------------------------------------------------------------------------
# truncated series


class TruncatedSeries:
    """Power series in ``m`` variables known up to total degree ``T``."""

    __slots__ = ("m", "T", "coeffs")

    def __init__(self, m: int, T: int, coeffs: Mapping[MultiIndex, object] | Iterable = ()):
        if T < 0:
            raise ValueError("truncation degree must be nonnegative")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        clean = {}
        for idx, c in items:
            idx = tuple(int(e) for e in idx)
            if len(idx) != m or min(idx, default=0) < 0:
                raise ValueError(f"bad exponent vector {idx} for {m} variables")
            if sum(idx) > T:
                raise ValueError(f"index {idx} exceeds the truncation degree {T}")
            c = _scalar(c)
            if c:
                clean[idx] = c
        self.m = m
        self.T = T
        self.coeffs = clean

    @classmethod
    def from_list(cls, values: Sequence) -> "TruncatedSeries":
        """Univariate series with coefficients a_0..a_{len-1}."""
        return cls(1, len(values) - 1, {(k,): v for k, v in enumerate(values)})

    def to_list(self) -> list:
        if self.m != 1:
            raise ValueError("series is not univariate")
        return [self.coeffs.get((k,), Fraction(0)) for k in range(self.T + 1)]

    def __getitem__(self, idx) -> object:
        if isinstance(idx, int):
            idx = (idx,)
        return self.coeffs.get(tuple(idx), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, T: int) -> "TruncatedSeries":
        T = min(T, self.T)
        return TruncatedSeries(self.m, T, {k: c for k, c in self.coeffs.items() if sum(k) <= T})

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.m, self.coeffs)

    def values(self) -> list:
        """All coefficients with ||n|| <= T, zeros included, in graded order."""
        return [self[idx] for idx in monomials_up_to(self.m, self.T)]

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.m != other.m or self.T != other.T:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[k] == other[k] for k in keys)

    def __repr__(self):
        return f"TruncatedSeries(m={self.m}, T={self.T}, nonzero={len(self.coeffs)})"


def series_quotient(num: Polynomial, den: Polynomial, T: int) -> TruncatedSeries:
    """Expansion of num/den to total degree T (den must have nonzero constant term)."""
    if num.m != den.m:
        raise ValueError("variable counts differ")
    c0 = den.constant_term()
    if not c0:
        raise PreconditionError("denominator has zero constant term; not a power series")
    inv0 = 1 / c0
    rest = [(k, c) for k, c in den.terms.items() if any(k)]
    out: dict[MultiIndex, object] = {}
    for idx in monomials_up_to(num.m, T):
        acc = num.coefficient(idx)
        for k, c in rest:
            prev = _sub_index(idx, k)
            if prev is not None and prev in out:
                acc = acc - c * out[prev]
        if acc:
            out[idx] = acc * inv0
    return TruncatedSeries(num.m, T, out)


@dataclass(frozen=True)
class RationalFunction:
    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.num.m != self.den.m:
            raise ValueError("numerator and denominator variable counts differ")
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    @property
    def m(self) -> int:
        return self.num.m

    def expand(self, T: int) -> TruncatedSeries:
        return series_quotient(self.num, self.den, T)

    def same_function(self, other: "RationalFunction") -> bool:
        """Cross-multiplication identity num*other.den == other.num*den."""
        return self.num * other.den == other.num * self.den

    @classmethod
    def univariate(cls, num: Sequence, den: Sequence) -> "RationalFunction":
        return cls(Polynomial.univariate(num), Polynomial.univariate(den))


# --------------------------------------------------------------------------
# differential systems


def falling_factorial(j: int, x) -> Fraction:
    """B_j(x) = x (x-1) ... (x-j+1), with B_0 = 1."""
    if j < 0:
        raise ValueError("falling factorial order must be nonnegative")
    out = Fraction(1) if not isinstance(x, int) else 1
    for k in range(j):
        out *= x - k
    return Fraction(out)


class DFiniteSystem:
    """One linear ODE per variable: sum_j P_{i,j} (d/dx_i)^j f = 0 for each i."""

    __slots__ = ("m", "equations")

    def __init__(self, m: int, equations: Sequence[Sequence[Polynomial]]):
        if len(equations) != m:
            raise ValueError(f"need one equation per variable ({m}), got {len(equations)}")
        eqs = []
        for i, eq in enumerate(equations):
            eq = [p if isinstance(p, Polynomial) else Polynomial(m, p) for p in eq]
            while eq and eq[-1].is_zero():
                eq.pop()
            if not eq:
                raise PreconditionError(f"equation {i} has no nonzero coefficient")
            for p in eq:
                if p.m != m:
                    raise ValueError("coefficient polynomial has the wrong variable count")
            eqs.append(tuple(eq))
        self.m = m
        self.equations = tuple(eqs)

    @classmethod
    def univariate(cls, coeffs: Sequence[Sequence]) -> "DFiniteSystem":
        """``coeffs[j]`` lists the coefficients of P_j, lowest degree first."""
        return cls(1, [[Polynomial.univariate(c) for c in coeffs]])

    def order(self, i: int) -> int:
        return len(self.equations[i]) - 1

    def max_order(self) -> int:
        return max(self.order(i) for i in range(self.m))

    def max_degree(self, i: int | None = None) -> int:
        eqs = self.equations if i is None else [self.equations[i]]
        return max(p.total_degree() for eq in eqs for p in eq)

    def leading(self, i: int) -> Polynomial:
        return self.equations[i][-1]

    def coefficient_height_bound(self) -> float:
        """Largest log height among all (rational) coefficients of the P_{i,j}."""
        from .heights import H_rational, log_enclosure

        best = 1
        for eq in self.equations:
            for p in eq:
                for c in p.height_data():
                    best = max(best, H_rational(c))
        return log_enclosure(best).hi

    def __repr__(self):
        return f"DFiniteSystem(m={self.m}, orders={[self.order(i) for i in range(self.m)]})"


def apply_system(sys: DFiniteSystem, f: TruncatedSeries) -> list[TruncatedSeries]:
    """Residuals (sum_j P_{i,j} d^j/dx_i^j) f, one per variable.

    Residual i is reported to total degree T - d_i - maxdeg(P_{i,.}), a
    conservative degree where no coefficient beyond f's truncation enters.
    """
    if sys.m != f.m:
        raise ValueError("variable counts differ")
    out = []
    for i, eq in enumerate(sys.equations):
        d = len(eq) - 1
        top = f.T - d - max(p.total_degree() for p in eq)
        if top < 0:
            raise PreconditionError(
                f"truncation T={f.T} too small to determine residual {i}", index=i
            )
        res: dict[MultiIndex, object] = {}
        for j, p in enumerate(eq):
            if p.is_zero():
                continue
            for idx, a in f.coeffs.items():
                if idx[i] < j:
                    continue
                shifted = list(idx)
                shifted[i] -= j
                base = tuple(shifted)
                if sum(base) > top:
                    continue
                da = a * falling_factorial(j, idx[i])
                for k, c in p.terms.items():
                    r = _add_index(base, k)
                    if sum(r) <= top:
                        v = c * da
                        res[r] = res[r] + v if r in res else v
        out.append(TruncatedSeries(sys.m, top, res))
    return out


def coefficient_relation(
    sys: DFiniteSystem, i: int, r: MultiIndex
) -> list[tuple[object, MultiIndex]]:
    """Linear relation among the a_u forced by the coefficient of x^r in equation i.

    Sum over j and n in supp P_{i,j} of p_{i,j,n} B_j(r_i + j - n_i) a_{r + j e_i - n};
    indices with a negative entry are dropped and equal indices merged.
    """
    r = tuple(r)
    acc: dict[MultiIndex, object] = {}
    for j, p in enumerate(sys.equations[i]):
        for n, c in p.terms.items():
            u = list(r)
            u[i] += j
            u = _sub_index(tuple(u), n)
            if u is None:
                continue
            v = c * falling_factorial(j, u[i])
            if v:
                acc[u] = acc[u] + v if u in acc else v
    return sorted(((c, u) for u, c in acc.items() if c), key=lambda t: t[1], reverse=True)


# --------------------------------------------------------------------------
# monomial substitution and sections


def _substituted_degree(idx: MultiIndex, u: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(idx, u))


def _check_weights(m: int, u: Sequence[int]):
    if len(u) != m:
        raise ValueError(f"weight vector must have length {m}")
    if min(u) < 1:
        raise ValueError("substitution weights must be positive")


def substitute_monomials(f, u: Sequence[int]):
    """Set x_i = t^{u_i}.

    A TruncatedSeries maps to a univariate series known to degree
    (T+1)*min(u) - 1; a Polynomial or RationalFunction maps termwise.
    """
    u = [int(w) for w in u]
    if isinstance(f, RationalFunction):
        return RationalFunction(substitute_monomials(f.num, u), substitute_monomials(f.den, u))
    _check_weights(f.m, u)
    if isinstance(f, Polynomial):
        return Polynomial(1, [((_substituted_degree(k, u),), c) for k, c in f.terms.items()])
    if isinstance(f, TruncatedSeries):
        top = (f.T + 1) * min(u) - 1
        acc: dict[int, object] = {}
        for k, c in f.coeffs.items():
            n = _substituted_degree(k, u)
            if n <= top:
                acc[n] = acc[n] + c if n in acc else c
        return TruncatedSeries(1, top, {(n,): c for n, c in acc.items()})
    raise TypeError(f"cannot substitute into {type(f).__name__}")


def nonzero_substitution_check(P: Polynomial, u: Sequence[int]) -> bool:
    if P.is_zero():
        raise PreconditionError("the zero polynomial stays zero under any substitution")
    return not substitute_monomials(P, u).is_zero()


def section(f: RationalFunction, variable: int, N: int, T: int) -> TruncatedSeries:
    """g_N: the coefficient of x_variable^N in f, as a series in the other variables to degree T."""
    if N < 0:
        raise ValueError("section index must be nonnegative")
    if not f.den.constant_term():
        raise PreconditionError("denominator has zero constant term; not a power series")
    full = f.expand(T + N)
    out = {}
    for k, c in full.coeffs.items():
        if k[variable] == N:
            rest = k[:variable] + k[variable + 1 :]
            if sum(rest) <= T:
                out[rest] = c
    return TruncatedSeries(f.m - 1, T, out)
