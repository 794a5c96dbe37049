"""Constant-coefficient linear recurrences and the analysis of univariate
rational-function denominators: root-of-unity classification, exact closed
forms over Q(zeta_N), periodicity, and sections along arithmetic
progressions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from . import _linalg
from . import _upoly as up
from .errors import PreconditionError, UnsupportedFieldError
from .exactnum import (
    AlgebraicByMinPoly,
    Cyclotomic,
    algebraic_box,
    cyclotomic_order_of,
    cyclotomic_polynomial,
    eval_on_box,
    exact_root,
    factor_over_q,
    is_root_of_unity,
    orders_with_phi_at_most,
    rational,
    simplify,
    to_algebraic,
)


def _scalar(x):
    return x if isinstance(x, (Cyclotomic, AlgebraicByMinPoly)) else rational(x)


def _as_list(p) -> list:
    from .dseries import Polynomial

    if isinstance(p, Polynomial):
        return p.to_univariate()
    return [_scalar(c) for c in p]


@dataclass(frozen=True)
class ConstRecurrence:
    """sum_k char_poly[k] * a_{n+k} = 0 for all n >= offset.

    ``initial`` holds a_offset .. a_{offset+D-1}; ``prefix`` holds the
    terms a_0 .. a_{offset-1} that the relation does not govern.
    """

    char_poly: tuple
    initial: tuple
    offset: int = 0
    prefix: tuple = ()

    def __post_init__(self):
        cp = tuple(_scalar(c) for c in up.trim(list(self.char_poly)))
        object.__setattr__(self, "char_poly", cp)
        object.__setattr__(self, "initial", tuple(_scalar(c) for c in self.initial))
        object.__setattr__(self, "prefix", tuple(_scalar(c) for c in self.prefix))
        if len(cp) < 2:
            raise PreconditionError("characteristic polynomial needs degree >= 1")
        if not cp[0]:
            raise PreconditionError("characteristic polynomial has a zero root")
        if len(self.initial) != len(cp) - 1:
            raise PreconditionError(
                f"need {len(cp) - 1} initial terms, got {len(self.initial)}"
            )
        if self.offset < 0 or len(self.prefix) != self.offset:
            raise PreconditionError("prefix length must equal the offset")

    @property
    def order(self) -> int:
        return len(self.char_poly) - 1

    def terms(self, count: int) -> list:
        """a_0 .. a_{count-1}."""
        out = list(self.prefix[:count])
        window = list(self.initial)
        lead = self.char_poly[-1]
        D = self.order
        n = self.offset
        while len(out) < count:
            out.append(window[0])
            nxt = Fraction(0)
            for k in range(D):
                if self.char_poly[k]:
                    nxt = nxt + self.char_poly[k] * window[k]
            window = window[1:] + [-nxt / lead]
            n += 1
        return out


def recurrence_from_denominator(G, numerator) -> ConstRecurrence:
    """Recurrence of the Taylor coefficients of numerator/G.

    The characteristic polynomial is x^D G(1/x) with D = deg G; the relation
    holds from N1 = max(0, deg numerator - D + 1).
    """
    G = up.trim(_as_list(G))
    num = up.trim(_as_list(numerator))
    if not G or not G[0]:
        raise PreconditionError("denominator must have a nonzero constant term")
    D = len(G) - 1
    if D == 0:
        raise PreconditionError("constant denominator gives no recurrence; the series is a polynomial")
    n1 = max(0, len(num) - 1 - D + 1)
    seq = up.series_inverse_mul(num, G, n1 + D)
    char = up.reverse(G, D)
    return ConstRecurrence(tuple(char), tuple(seq[n1:]), n1, tuple(seq[:n1]))


# --------------------------------------------------------------------------
# characteristic roots


def _is_rational_poly(p: Sequence) -> bool:
    return all(not isinstance(c, Cyclotomic) or c.is_rational() for c in p)


def _to_rational_poly(p: Sequence) -> list[Fraction]:
    return [c.to_rational() if isinstance(c, Cyclotomic) else Fraction(c) for c in p]


def _common_order(p: Sequence) -> int:
    n = 1
    for c in p:
        if isinstance(c, Cyclotomic):
            n = lcm(n, c.order)
    return n


def norm_polynomial(p: Sequence) -> list[Fraction]:
    """Product of all Galois conjugates of a polynomial over Q(zeta_N); rational."""
    if _is_rational_poly(p):
        return _to_rational_poly(p)
    n = _common_order(p)
    lifted = [Cyclotomic.lift(c).embed(n) for c in p]
    prod: list = [Fraction(1)]
    for a in range(1, n + 1):
        if gcd(a, n) == 1:
            prod = up.mul(prod, [c.galois(a) for c in lifted])
    return [Cyclotomic.lift(c).to_rational() for c in prod]


def _synthetic_div(p: list, root) -> tuple[list, object]:
    """p(x) = (x - root) q(x) + rem."""
    q = [Fraction(0)] * (len(p) - 1)
    acc = Fraction(0)
    for k in range(len(p) - 1, 0, -1):
        acc = acc * root + p[k]
        q[k - 1] = acc
    rem = acc * root + p[0]
    return q, rem


@dataclass
class RootsOfUnityReport:
    all_roots_of_unity: bool
    orders: dict[int, int] = field(default_factory=dict)  # order -> multiplicity
    witness: list | None = None  # non-cyclotomic remainder of the characteristic polynomial

    def __bool__(self):
        return self.all_roots_of_unity


def _unit_root_multiplicity(p: list, z) -> tuple[int, list]:
    k = 0
    while len(p) > 1:
        q, rem = _synthetic_div(p, z)
        if rem:
            break
        p = q
        k += 1
    return k, p


def all_roots_of_unity(rec: ConstRecurrence | Sequence) -> RootsOfUnityReport:
    """Decide exactly whether every characteristic root is a root of unity."""
    char = list(rec.char_poly) if isinstance(rec, ConstRecurrence) else [_scalar(c) for c in rec]
    if _is_rational_poly(char):
        rest = _to_rational_poly(char)
        orders: dict[int, int] = {}
        for n in orders_with_phi_at_most(len(rest) - 1):
            phi = list(cyclotomic_polynomial(n))
            while len(rest) >= len(phi):
                q = up.exact_div(rest, phi)
                if q is None:
                    break
                rest = q
                orders[n] = orders.get(n, 0) + 1
        if len(up.trim(rest)) > 1:
            return RootsOfUnityReport(False, orders, up.primitive_int(rest))
        return RootsOfUnityReport(True, orders)
    # cyclotomic coefficients: candidates come from the cyclotomic factors of the norm
    candidates = []
    for f, _ in factor_over_q(norm_polynomial(char)):
        n = cyclotomic_order_of(f)
        if n is not None:
            candidates.append(n)
    rest = list(char)
    orders = {}
    for n in candidates:
        for k in range(n):
            if gcd(k, n) == 1:
                e, rest = _unit_root_multiplicity(rest, Cyclotomic.zeta(n, k))
                if e:
                    orders[n] = max(orders.get(n, 0), e)
    if len(up.trim(rest)) > 1:
        return RootsOfUnityReport(False, orders, rest)
    return RootsOfUnityReport(True, orders)


def _scaled_unit_roots(f: list[int]) -> list[Cyclotomic] | None:
    """Roots of an irreducible integer polynomial if they are all r*zeta, r rational."""
    e = len(f) - 1
    r = exact_root(abs(Fraction(f[0], f[-1])), e)
    if r is None or r == 0:
        return None
    g = [Fraction(c) * r**k / (f[-1] * r**e) for k, c in enumerate(f)]
    if any(c.denominator != 1 for c in g):
        return None
    n = cyclotomic_order_of([int(c) for c in g])
    if n is None:
        return None
    return [Cyclotomic.zeta(n, k) * r for k in range(n) if gcd(k, n) == 1]


def characteristic_roots(char: Sequence) -> list[tuple[object, int]]:
    """Exact roots (rational times root of unity) with multiplicities.

    Raises UnsupportedFieldError when some root has a different shape.
    """
    char = [_scalar(c) for c in char]
    out: list[tuple[object, int]] = []
    rational_char = _is_rational_poly(char)
    rest = list(char)
    found = 0
    for f, e in factor_over_q(norm_polynomial(char)):
        roots = _scaled_unit_roots(f)
        if roots is None:
            if rational_char:
                raise UnsupportedFieldError(
                    f"characteristic factor {f} has roots outside Q(zeta_N); "
                    "use all_roots_of_unity / root_equivalence_classes for classification"
                )
            continue
        for z in roots:
            if rational_char:
                mult = e
            else:
                mult, rest = _unit_root_multiplicity(rest, z)
            if mult:
                out.append((simplify(z), mult))
                found += mult
    if found != len(char) - 1:
        raise UnsupportedFieldError("some characteristic roots lie outside Q(zeta_N)")
    return out


# --------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class ClosedForm:
    """a_n = sum_i P_i(n) * root_i^n for n >= offset; P_i lowest degree first."""

    terms: tuple  # of (root, tuple of coefficients)
    offset: int = 0

    def __call__(self, n: int):
        acc = Fraction(0)
        for root, poly in self.terms:
            acc = acc + up.evaluate(list(poly), n) * root**n
        return simplify(acc) if isinstance(acc, Cyclotomic) else acc

    def values(self, start: int, stop: int) -> list:
        return [self(n) for n in range(start, stop)]

    @property
    def roots(self) -> list:
        return [r for r, _ in self.terms]


def closed_form_cyclotomic(rec: ConstRecurrence) -> ClosedForm:
    """Exact closed form sum P_i(n) rho_i^n with rho_i = rational * root of unity.

    Solves the polynomial-coefficient ansatz against D terms and verifies it on
    3D further terms.
    """
    roots = characteristic_roots(rec.char_poly)
    D = rec.order
    n1 = rec.offset
    cols = [(rho, t) for rho, e in roots for t in range(e)]
    terms = rec.terms(n1 + 4 * D)
    rows = []
    for n in range(n1, n1 + D):
        rows.append([Fraction(n) ** t * rho**n for rho, t in cols])
    sol = _linalg.solve(rows, terms[n1 : n1 + D])
    if sol is None:
        raise UnsupportedFieldError("closed-form ansatz has no solution")  # pragma: no cover
    grouped: dict[int, list] = {}
    for (rho, t), u in zip(cols, sol):
        key = next(i for i, (r, _) in enumerate(roots) if r is rho)
        grouped.setdefault(key, []).append(simplify(u) if isinstance(u, Cyclotomic) else u)
    cf_terms = []
    for i, coeffs in sorted(grouped.items()):
        coeffs = up.trim(coeffs)
        if coeffs:
            cf_terms.append((roots[i][0], tuple(coeffs)))
    cf = ClosedForm(tuple(cf_terms), n1)
    for n in range(n1, n1 + 4 * D):
        if cf(n) != terms[n]:
            raise UnsupportedFieldError(f"closed form disagrees with the recurrence at n={n}")  # pragma: no cover
    return cf


def multiplicity_bound_check(cf: ClosedForm, L: float) -> bool:
    """max(deg P_i + 1) <= L + 1, for closed forms whose roots are roots of unity."""
    for root, _ in cf.terms:
        if is_root_of_unity(root) is None:
            raise PreconditionError(f"root {root!r} is not a root of unity")
    worst = max((len(p) for _, p in cf.terms), default=0)
    return worst <= L + 1


# --------------------------------------------------------------------------
# periodicity and sections


def detect_periodicity(terms: Sequence) -> tuple[int, int] | None:
    """Shortest explanation (preperiod p, period q) of the truncation.

    Among all pairs with a_{n+q} = a_n for p <= n < len - q and at least two
    full periods after p, return the one minimizing p + q (ties go to the
    smaller q).  A verdict about this truncation only.
    """
    vals = list(terms)
    n = len(vals)
    if n < 4:
        raise PreconditionError("periodicity detection needs at least 4 terms")
    best = None
    for q in range(1, n // 2 + 1):
        # the set of valid preperiods is upward closed; find the smallest
        bad = -1
        for k in range(n - q - 1, -1, -1):
            if vals[k + q] != vals[k]:
                bad = k
                break
        p = bad + 1
        if n - p >= 2 * q and (best is None or p + q < sum(best)):
            best = (p, q)
    return best


def berlekamp_massey(seq: Sequence) -> list:
    """Connection polynomial C (C[0] = 1) of the shortest recurrence
    sum_k C[k] s_{n-k} = 0 generating ``seq``, over any exact field."""
    s = list(seq)
    C: list = [Fraction(1)]
    B: list = [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n]
        for i in range(1, min(L, len(C) - 1) + 1):
            if C[i]:
                d = d + C[i] * s[n - i]
        if not d:
            m += 1
            continue
        update = up.sub(C, [Fraction(0)] * m + up.scale(B, d / b))
        if 2 * L <= n:
            B, b, L, m = C, d, n + 1 - L, 1
        else:
            m += 1
        C = update
    C = list(C) + [Fraction(0)] * (L + 1 - len(C))
    return C[: L + 1]


def arithmetic_progression_section(rec: ConstRecurrence, modulus: int, residue: int) -> ConstRecurrence:
    """Recurrence for b_N = a_{N*modulus + residue}."""
    if modulus < 1 or not 0 <= residue < modulus:
        raise PreconditionError("need modulus >= 1 and 0 <= residue < modulus")
    D = rec.order
    start = max(0, -(-(rec.offset - residue) // modulus))
    count = start + 2 * D + 3 * D
    a = rec.terms((count - 1) * modulus + residue + 1)
    b = [a[N * modulus + residue] for N in range(count)]
    C = berlekamp_massey(b[start : start + 2 * D])
    L = len(C) - 1
    char = list(reversed(C))  # x^L C(1/x), lowest degree first
    shift = 0
    while len(char) > 1 and not char[0]:
        char = char[1:]
        shift += 1
    if len(char) < 2:
        char = [Fraction(-1), Fraction(1)]  # eventually zero: b_{n+1} = b_n = 0
    new_off = start + shift
    order = len(char) - 1
    out = ConstRecurrence(tuple(char), tuple(b[new_off : new_off + order]), new_off, tuple(b[:new_off]))
    if out.terms(count) != b[:count]:
        raise PreconditionError("section recurrence failed verification")  # pragma: no cover
    return out


# --------------------------------------------------------------------------
# root-of-unity equivalence


def _quotient_is_root_of_unity(a, b) -> bool:
    exact = (int, Fraction, Cyclotomic)
    if isinstance(a, exact) and isinstance(b, exact):
        q = Cyclotomic.lift(a) / Cyclotomic.lift(b) if isinstance(a, Cyclotomic) or isinstance(b, Cyclotomic) else Fraction(a) / Fraction(b)
        return is_root_of_unity(q) is not None
    return _minpoly_quotient_is_root_of_unity(to_algebraic(a), to_algebraic(b))


def _minpoly_quotient_is_root_of_unity(a: AlgebraicByMinPoly, b: AlgebraicByMinPoly) -> bool:
    import sympy

    # |a| = |b| is necessary; the Mahler measure of conjugate-closed orbits must agree too,
    # but the resultant below decides the question exactly.
    x, y = sympy.symbols("x y")
    p = sum(c * (x * y) ** k for k, c in enumerate(a.minpoly))
    q = sum(c * y**k for k, c in enumerate(b.minpoly))
    R = sympy.Poly(sympy.resultant(q, p, y), x)
    _, facs = R.factor_list()
    factors = []
    for f, _ in facs:
        coeffs = up.primitive_int([int(c) for c in reversed(f.all_coeffs())])
        if len(coeffs) >= 2:
            factors.append(coeffs)
    if not any(cyclotomic_order_of(f) is not None for f in factors):
        return False
    prec = 64
    while prec <= AlgebraicByMinPoly.MAX_PREC:
        quot = algebraic_box(a, prec) * algebraic_box(b, prec).reciprocal()
        live = [f for f in factors if eval_on_box(f, quot, 2 * prec).contains_zero()]
        if len(live) == 1:
            return cyclotomic_order_of(live[0]) is not None
        if live and all(cyclotomic_order_of(f) is not None for f in live):
            return True
        if live and all(cyclotomic_order_of(f) is None for f in live):
            return False
        prec *= 2
    raise PreconditionError("could not separate the factors of the quotient polynomial")  # pragma: no cover


def root_equivalence_classes(roots: Sequence) -> list[list[int]]:
    """Partition indices of nonzero roots by 'ratio is a root of unity'."""
    for i, r in enumerate(roots):
        if isinstance(r, (int, Fraction, Cyclotomic)) and not r:
            raise PreconditionError("roots must be nonzero", index=i)
    classes: list[list[int]] = []
    for i, r in enumerate(roots):
        for cls in classes:
            if _quotient_is_root_of_unity(r, roots[cls[0]]):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes
