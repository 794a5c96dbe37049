"""Exact scalars: rationals, elements of cyclotomic fields, and algebraic
numbers given by a minimal polynomial plus an isolating rectangle.

Rationals are plain :class:`fractions.Fraction` values.  ``Cyclotomic``
stores an element of Q(zeta_N) in the power basis modulo the N-th
cyclotomic polynomial, so equality is coordinate-wise after embedding both
operands into a common field.

Certified numerics (root isolation, Mahler measure) use exact rational
arithmetic on the certification side; floating point is only used to
propose root approximations.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm
from typing import Callable, NamedTuple, Sequence, Union

import mpmath
from mpmath import iv, libmp

from . import _linalg
from . import _upoly as up
from .errors import PreconditionError, ToleranceNotReached

Rational = Fraction


def rational(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or ``"p/q"`` string) to a canonical Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


# --------------------------------------------------------------------------
# elementary number theory


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return tuple(sorted(ds))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs a positive integer")
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    p = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        p = _int_exact_div(p, cyclotomic_polynomial(d))
    return tuple(p)


def _int_exact_div(a: list[int], b: Sequence[int]) -> list[int]:
    # b monic
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    assert not any(a[:db]), "inexact cyclotomic division"
    return q


@lru_cache(maxsize=None)
def orders_with_phi(d: int) -> tuple[int, ...]:
    """All N with euler_phi(N) == d (uses phi(N) >= sqrt(N/2))."""
    return tuple(n for n in range(1, 2 * d * d + 3) if euler_phi(n) == d)


@lru_cache(maxsize=None)
def orders_with_phi_at_most(d: int) -> tuple[int, ...]:
    return tuple(n for n in range(1, 2 * d * d + 3) if euler_phi(n) <= d)


# --------------------------------------------------------------------------
# cyclotomic field elements


def _fold(order: int, terms: dict[int, Fraction]) -> tuple[Fraction, ...]:
    """Reduce sum c_k x^k modulo Phi_order, using x^order = 1 first."""
    phi_poly = cyclotomic_polynomial(order)
    d = len(phi_poly) - 1
    r = [Fraction(0)] * max(order, d)
    for k, c in terms.items():
        if c:
            r[k % order] += c
    for k in range(len(r) - 1, d - 1, -1):
        c = r[k]
        if c:
            base = k - d
            for j in range(d):
                if phi_poly[j]:
                    r[base + j] -= c * phi_poly[j]
            r[k] = Fraction(0)
    return tuple(r[:d])


class Cyclotomic:
    """Immutable element of Q(zeta_N) in the reduced power basis."""

    __slots__ = ("order", "coords", "_canon")

    def __init__(self, order: int, coords: Sequence):
        if order < 1:
            raise ValueError("order must be positive")
        coords = tuple(rational(c) for c in coords)
        if len(coords) != euler_phi(order):
            raise ValueError(
                f"Q(zeta_{order}) needs {euler_phi(order)} coordinates, got {len(coords)}"
            )
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "_canon", None)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic is immutable")

    # construction -------------------------------------------------------

    @classmethod
    def zeta(cls, order: int, k: int = 1) -> "Cyclotomic":
        """The root of unity exp(2 pi i k / order)."""
        return cls(order, _fold(order, {k % order: Fraction(1)}))

    @classmethod
    def from_rational(cls, q, order: int = 1) -> "Cyclotomic":
        return cls(order, _fold(order, {0: rational(q)}))

    @classmethod
    def lift(cls, x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(1, (Fraction(x),))
        raise TypeError(f"cannot lift {type(x).__name__} into a cyclotomic field")

    def embed(self, order: int) -> "Cyclotomic":
        """The same element viewed in Q(zeta_order); ``self.order`` must divide it."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"Q(zeta_{self.order}) is not a subfield of Q(zeta_{order})")
        step = order // self.order
        return Cyclotomic(order, _fold(order, {i * step: c for i, c in enumerate(self.coords)}))

    # arithmetic ---------------------------------------------------------

    def _pair(self, other):
        if not isinstance(other, (Cyclotomic, int, Fraction)):
            return None
        other = Cyclotomic.lift(other)
        n = lcm(self.order, other.order)
        return self.embed(n), other.embed(n)

    def __add__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        a, b = pr
        return Cyclotomic(a.order, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-x for x in self.coords])

    def __pos__(self):
        return self

    def __sub__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        a, b = pr
        return Cyclotomic(a.order, [x - y for x, y in zip(a.coords, b.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.order, [x * other for x in self.coords])
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        a, b = pr
        terms: dict[int, Fraction] = {}
        for i, x in enumerate(a.coords):
            if not x:
                continue
            for j, y in enumerate(b.coords):
                if y:
                    terms[i + j] = terms.get(i + j, Fraction(0)) + x * y
        return Cyclotomic(a.order, _fold(a.order, terms))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if not self:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        g, s, _ = up.xgcd(list(self.coords), list(cyclotomic_polynomial(self.order)))
        # g is monic of degree 0, i.e. 1
        return Cyclotomic(self.order, _fold(self.order, dict(enumerate(s))))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return Cyclotomic(self.order, [x / other for x in self.coords])
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.from_rational(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        a, b = pr
        return a.coords == b.coords

    def __hash__(self):
        c = self.canonical()
        if c.order == 1:
            return hash(c.coords[0])
        return hash((c.order, c.coords))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}*z^{k}" if k else f"{c}")
        body = " + ".join(terms) if terms else "0"
        return f"Cyclotomic({self.order}: {body})"

    # structure ----------------------------------------------------------

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coords[0]

    def galois(self, a: int) -> "Cyclotomic":
        """Image under zeta -> zeta^a (``a`` coprime to the order)."""
        if gcd(a, self.order) != 1:
            raise ValueError("Galois exponent must be coprime to the order")
        return Cyclotomic(
            self.order,
            _fold(self.order, {(a * i) % self.order: c for i, c in enumerate(self.coords)}),
        )

    def conjugates(self) -> list["Cyclotomic"]:
        """Distinct Galois conjugates (the orbit of this element)."""
        seen: dict[tuple, Cyclotomic] = {}
        for a in range(1, self.order + 1):
            if gcd(a, self.order) == 1:
                c = self.galois(a)
                seen.setdefault(c.coords, c)
        return list(seen.values())

    def norm(self) -> Fraction:
        prod = Cyclotomic.from_rational(1, self.order)
        for a in range(1, self.order + 1):
            if gcd(a, self.order) == 1:
                prod = prod * self.galois(a)
        return prod.to_rational()

    def minimal_polynomial(self) -> list[int]:
        """Primitive integer minimal polynomial over Q, lowest degree first."""
        poly: list = [Fraction(1)]
        for c in self.conjugates():
            poly = up.mul(poly, [-c, 1])
        return up.primitive_int([Cyclotomic.lift(c).to_rational() for c in poly])

    def _subfield_coords(self, d: int) -> tuple[Fraction, ...] | None:
        step = self.order // d
        basis = [Cyclotomic.zeta(self.order, k * step).coords for k in range(euler_phi(d))]
        rows = [[basis[k][i] for k in range(len(basis))] for i in range(len(self.coords))]
        sol = _linalg.solve(rows, list(self.coords))
        return None if sol is None else tuple(Fraction(x) for x in sol)

    def canonical(self) -> "Cyclotomic":
        """The same element stored in the smallest cyclotomic field containing it."""
        if self._canon is not None:
            return self._canon
        result = self
        if self.order > 1:
            for d in divisors(self.order):
                if d % 4 == 2:
                    continue  # Q(zeta_d) == Q(zeta_{d/2})
                if d == self.order:
                    break
                sub = self._subfield_coords(d)
                if sub is not None:
                    result = Cyclotomic(d, sub)
                    break
        object.__setattr__(result, "_canon", result)
        object.__setattr__(self, "_canon", result)
        return result

    # numerics -----------------------------------------------------------

    def to_complex(self) -> complex:
        z = mpmath.mpc(0)
        with mpmath.workprec(80):
            for k, c in enumerate(self.coords):
                if c:
                    z += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(
                        mpmath.mpf(2 * k) / self.order
                    )
        return complex(z)

    def value_box(self, prec: int = 64) -> "Box":
        """Rigorous rectangle containing this element."""
        with _iv_prec(prec):
            re = iv.mpf(0)
            im = iv.mpf(0)
            for k, c in enumerate(self.coords):
                if c:
                    ang = 2 * iv.pi * k / self.order
                    q = iv.mpf(c.numerator) / c.denominator
                    re += q * iv.cos(ang)
                    im += q * iv.sin(ang)
        return Box(*_iv_bounds(re), *_iv_bounds(im))


Scalar = Union[int, Fraction, Cyclotomic]


def simplify(x):
    """Return a Fraction when a cyclotomic value is rational, else its canonical form."""
    if isinstance(x, Cyclotomic):
        if x.is_rational():
            return x.to_rational()
        return x.canonical()
    return Fraction(x) if isinstance(x, int) else x


# --------------------------------------------------------------------------
# certified complex enclosures


class Interval(NamedTuple):
    """Closed real interval with float endpoints, rounded outward."""

    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


def _mpf_to_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    if not man:
        if t != libmp.fzero:
            raise ValueError("non-finite value")
        return Fraction(0)
    man = -int(man) if sign else int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


def _iv_bounds(x) -> tuple[Fraction, Fraction]:
    a, b = x._mpi_
    return _mpf_to_fraction(a), _mpf_to_fraction(b)


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def _ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(-((-x.numerator << bits) // x.denominator), 1 << bits)


def _sqrt_up(q: Fraction, bits: int) -> Fraction:
    if q <= 0:
        return Fraction(0)
    scaled = q * 4**bits
    n = -(-scaled.numerator // scaled.denominator)
    return Fraction(isqrt(n) + 1, 2**bits)


def _sqrt_down(q: Fraction, bits: int) -> Fraction:
    if q <= 0:
        return Fraction(0)
    scaled = q * 4**bits
    return Fraction(isqrt(scaled.numerator // scaled.denominator), 2**bits)


def _iv_from_fraction(q: Fraction):
    return iv.mpf(q.numerator) / q.denominator


@contextmanager
def _iv_prec(prec: int):
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


def _float_down(x) -> float:
    f = float(x)
    return math.nextafter(math.nextafter(f, -math.inf), -math.inf)


def _float_up(x) -> float:
    f = float(x)
    return math.nextafter(math.nextafter(f, math.inf), math.inf)


def _imul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def _isq(a):
    lo, hi = a
    if lo >= 0:
        return (lo * lo, hi * hi)
    if hi <= 0:
        return (hi * hi, lo * lo)
    return (Fraction(0), max(lo * lo, hi * hi))


@dataclass(frozen=True)
class Box:
    """Closed axis-parallel rectangle in C with rational endpoints."""

    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    @classmethod
    def point(cls, re, im=0) -> "Box":
        re, im = rational(re), rational(im)
        return cls(re, re, im, im)

    @property
    def re(self):
        return (self.re_lo, self.re_hi)

    @property
    def im(self):
        return (self.im_lo, self.im_hi)

    def width(self) -> Fraction:
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    def contains_zero(self) -> bool:
        return self.re_lo <= 0 <= self.re_hi and self.im_lo <= 0 <= self.im_hi

    def intersects(self, other: "Box") -> bool:
        return not (
            self.re_hi < other.re_lo
            or other.re_hi < self.re_lo
            or self.im_hi < other.im_lo
            or other.im_hi < self.im_lo
        )

    def contains(self, other: "Box") -> bool:
        return (
            self.re_lo <= other.re_lo
            and other.re_hi <= self.re_hi
            and self.im_lo <= other.im_lo
            and other.im_hi <= self.im_hi
        )

    def rounded(self, bits: int) -> "Box":
        return Box(
            _floor_dyadic(self.re_lo, bits),
            _ceil_dyadic(self.re_hi, bits),
            _floor_dyadic(self.im_lo, bits),
            _ceil_dyadic(self.im_hi, bits),
        )

    def __add__(self, other: "Box") -> "Box":
        return Box(
            self.re_lo + other.re_lo,
            self.re_hi + other.re_hi,
            self.im_lo + other.im_lo,
            self.im_hi + other.im_hi,
        )

    def __mul__(self, other: "Box") -> "Box":
        rr = _imul(self.re, other.re)
        ii = _imul(self.im, other.im)
        ri = _imul(self.re, other.im)
        ir = _imul(self.im, other.re)
        return Box(rr[0] - ii[1], rr[1] - ii[0], ri[0] + ir[0], ri[1] + ir[1])

    def scale(self, q) -> "Box":
        q = rational(q)
        a = sorted((self.re_lo * q, self.re_hi * q))
        b = sorted((self.im_lo * q, self.im_hi * q))
        return Box(a[0], a[1], b[0], b[1])

    def reciprocal(self) -> "Box":
        n2 = _isq(self.re)
        m2 = _isq(self.im)
        den = (n2[0] + m2[0], n2[1] + m2[1])
        if den[0] <= 0:
            raise ZeroDivisionError("box may contain zero")
        inv = (1 / den[1], 1 / den[0])
        re = _imul(self.re, inv)
        im = _imul((-self.im_hi, -self.im_lo), inv)
        return Box(re[0], re[1], im[0], im[1])


def eval_on_box(coeffs: Sequence, box: Box, bits: int = 256) -> Box:
    """Horner evaluation of a rational polynomial over a box, rounded outward."""
    acc = Box.point(0)
    for c in reversed(coeffs):
        acc = (acc * box + Box.point(c)).rounded(bits)
    return acc


class _Disk(NamedTuple):
    re: Fraction
    im: Fraction
    radius: Fraction  # rational upper bound

    def square(self) -> Box:
        return Box(self.re - self.radius, self.re + self.radius, self.im - self.radius, self.im + self.radius)


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cdiv(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / n, (a[1] * b[0] - a[0] * b[1]) / n)


@lru_cache(maxsize=256)
def _root_disks(coeffs: tuple[int, ...], prec: int) -> tuple[_Disk, ...] | None:
    """Pairwise disjoint disks, each containing exactly one root of ``coeffs``.

    Approximations come from mpmath; inclusion radii n*|p(z_i)/(a_n prod(z_i-z_j))|
    are evaluated exactly (Smith's Gerschgorin-type bound), so a disjoint
    family certifies one root per disk.  Returns ``None`` if the disks overlap
    at this precision.
    """
    n = len(coeffs) - 1
    if n < 1:
        return ()
    if n == 1:
        return (_Disk(Fraction(-coeffs[0], coeffs[1]), Fraction(0), Fraction(0)),)
    try:
        with mpmath.workprec(prec):
            approx = mpmath.polyroots(
                list(reversed(coeffs)), maxsteps=60 + 4 * n + prec // 4, extraprec=prec
            )
            zs = []
            for z in approx:
                z = mpmath.mpc(z)
                zs.append((_mpf_to_fraction(z.real._mpf_), _mpf_to_fraction(z.imag._mpf_)))
    except mpmath.libmp.NoConvergence:
        return None
    if len(set(zs)) < n:
        return None
    lead = coeffs[-1]
    disks = []
    bits = 2 * prec
    for i, zi in enumerate(zs):
        val = (Fraction(0), Fraction(0))
        for c in reversed(coeffs):
            val = _cmul(val, zi)
            val = (val[0] + c, val[1])
        den = (Fraction(lead), Fraction(0))
        for j, zj in enumerate(zs):
            if j != i:
                den = _cmul(den, (zi[0] - zj[0], zi[1] - zj[1]))
        w = _cdiv(val, den)
        r2 = n * n * (w[0] * w[0] + w[1] * w[1])
        disks.append(_Disk(zi[0], zi[1], _sqrt_up(r2, bits)))
    for i in range(n):
        for j in range(i + 1, n):
            a, b = disks[i], disks[j]
            d2 = (a.re - b.re) ** 2 + (a.im - b.im) ** 2
            if d2 <= (a.radius + b.radius) ** 2:
                return None
    return tuple(disks)


def _disk_meets_box(d: _Disk, box: Box) -> bool:
    return d.square().intersects(box)


def _certified_inside(d: _Disk, box: Box) -> bool:
    """Whether the root held by ``d`` certainly lies in ``box``.

    A disk centred on the real axis is its own mirror image, so for a real
    polynomial its single root is real; this lets segments of the real axis
    serve as isolating boxes.
    """
    if box.contains(d.square()):
        return True
    if d.im == 0 and box.im_lo <= 0 <= box.im_hi:
        return box.re_lo <= d.re - d.radius and d.re + d.radius <= box.re_hi
    return False


# --------------------------------------------------------------------------
# algebraic numbers by minimal polynomial


def _is_irreducible(coeffs: Sequence[int]) -> bool:
    import sympy

    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(coeffs)), x, domain="ZZ").is_irreducible


@dataclass(frozen=True)
class AlgebraicByMinPoly:
    """An algebraic number: its minimal polynomial and an isolating rectangle.

    ``minpoly`` lists integer coefficients lowest degree first; ``box`` is
    ``(re_lo, re_hi, im_lo, im_hi)`` with rational endpoints.
    """

    minpoly: tuple[int, ...]
    box: tuple[Fraction, Fraction, Fraction, Fraction]

    MAX_PREC = 1 << 13

    def __post_init__(self):
        mp = tuple(int(c) for c in self.minpoly)
        object.__setattr__(self, "minpoly", mp)
        object.__setattr__(self, "box", tuple(rational(b) for b in self.box))
        if len(mp) < 2 or mp[-1] <= 0:
            raise PreconditionError("minimal polynomial needs degree >= 1 and positive leading coefficient")
        g = 0
        for c in mp:
            g = gcd(g, c)
        if g != 1:
            raise PreconditionError("minimal polynomial must be primitive")
        if up.degree(up.poly_gcd(mp, up.derivative(mp))) > 0:
            raise PreconditionError("minimal polynomial must be squarefree")
        if len(mp) > 2 and not _is_irreducible(mp):
            raise PreconditionError("minimal polynomial must be irreducible over Q")
        b = self.box
        if b[0] > b[1] or b[2] > b[3]:
            raise PreconditionError("box endpoints out of order")
        self._isolating_disk()

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def region(self) -> Box:
        return Box(*self.box)

    def _isolating_disk(self, min_prec: int = 64) -> _Disk:
        region = self.region
        if region.width() == 0:
            z = (region.re_lo, region.im_lo)
            val = (Fraction(0), Fraction(0))
            for c in reversed(self.minpoly):
                val = _cmul(val, z)
                val = (val[0] + c, val[1])
            if val != (0, 0):
                raise PreconditionError("point box is not a root of the minimal polynomial")
            return _Disk(z[0], z[1], Fraction(0))
        prec = min_prec
        while prec <= self.MAX_PREC:
            disks = _root_disks(self.minpoly, prec)
            if disks is not None:
                meeting = [d for d in disks if _disk_meets_box(d, region)]
                if not meeting:
                    raise PreconditionError("box contains no root of the minimal polynomial")
                inside = [d for d in meeting if _certified_inside(d, region)]
                if len(inside) > 1:
                    raise PreconditionError("box contains more than one root")
                if len(meeting) == 1 and len(inside) == 1:
                    return meeting[0]
            prec *= 2
        raise PreconditionError("could not certify that the box isolates a single root")

    def enclosure(self, prec: int = 64) -> Box:
        """Certified rectangle around the root, tighter as ``prec`` grows."""
        d = self._isolating_disk(prec)
        return d.square()

    def to_complex(self) -> complex:
        d = self._isolating_disk()
        return complex(float(d.re), float(d.im))

    @classmethod
    def from_rational(cls, q) -> "AlgebraicByMinPoly":
        q = rational(q)
        return cls((-q.numerator, q.denominator), (q, q, Fraction(0), Fraction(0)))

    @classmethod
    def roots_of(cls, minpoly: Sequence[int]) -> list["AlgebraicByMinPoly"]:
        """All roots of an irreducible primitive polynomial, each isolated."""
        mp = tuple(int(c) for c in minpoly)
        prec = 64
        while prec <= cls.MAX_PREC:
            disks = _root_disks(mp, prec)
            if disks is not None:
                squares = [d.square() for d in disks]
                if all(
                    not squares[i].intersects(squares[j])
                    for i in range(len(squares))
                    for j in range(i + 1, len(squares))
                ):
                    return [cls(mp, (s.re_lo, s.re_hi, s.im_lo, s.im_hi)) for s in squares]
            prec *= 2
        raise PreconditionError("root isolation failed within the precision budget")

    @classmethod
    def from_value_box(cls, minpoly: Sequence[int], value_box: Callable[[int], Box]) -> "AlgebraicByMinPoly":
        """The root of ``minpoly`` lying in ``value_box(prec)`` for growing ``prec``."""
        mp = tuple(int(c) for c in minpoly)
        prec = 64
        while prec <= cls.MAX_PREC:
            disks = _root_disks(mp, prec)
            if disks is not None:
                vb = value_box(prec)
                hits = [d for d in disks if _disk_meets_box(d, vb)]
                if len(hits) == 1:
                    sq = hits[0].square()
                    if not any(d is not hits[0] and _disk_meets_box(d, sq) for d in disks):
                        return cls(mp, (sq.re_lo, sq.re_hi, sq.im_lo, sq.im_hi))
            prec *= 2
        raise PreconditionError("could not identify the root within the precision budget")


def to_algebraic(x) -> AlgebraicByMinPoly:
    """View any supported nonzero scalar as an :class:`AlgebraicByMinPoly`."""
    if isinstance(x, AlgebraicByMinPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return AlgebraicByMinPoly.from_rational(x)
    if isinstance(x, Cyclotomic):
        if x.is_rational():
            return AlgebraicByMinPoly.from_rational(x.to_rational())
        return AlgebraicByMinPoly.from_value_box(x.minimal_polynomial(), x.value_box)
    raise TypeError(f"unsupported scalar {x!r}")


def algebraic_box(x, prec: int = 64) -> Box:
    """Rigorous rectangle containing any supported scalar."""
    if isinstance(x, (int, Fraction)):
        return Box.point(x)
    if isinstance(x, Cyclotomic):
        return x.value_box(prec)
    return x.enclosure(prec)


# --------------------------------------------------------------------------
# roots of unity and heights


def _cyclotomic_order_of_minpoly(mp: Sequence[int]) -> int | None:
    d = len(mp) - 1
    for n in orders_with_phi(d):
        if tuple(mp) == cyclotomic_polynomial(n):
            return n
    return None


def is_root_of_unity(a) -> int | None:
    """Exact multiplicative order of ``a`` if it is a root of unity, else ``None``."""
    if isinstance(a, (int, Fraction)):
        if a == 0:
            raise PreconditionError("zero is not a unit")
        if a == 1:
            return 1
        if a == -1:
            return 2
        return None
    if isinstance(a, Cyclotomic):
        if not a:
            raise PreconditionError("zero is not a unit")
        big = lcm(2, a.order)
        if a**big != 1:
            return None
        for d in divisors(big):
            if a**d == 1:
                return d
        return None  # pragma: no cover
    if isinstance(a, AlgebraicByMinPoly):
        return _cyclotomic_order_of_minpoly(a.minpoly)
    raise TypeError(f"unsupported scalar {a!r}")


def mahler_height(
    p: AlgebraicByMinPoly | Sequence[int], tolerance: float = 1e-9, max_iter: int = 9
) -> Interval:
    """Certified enclosure of the logarithmic Weil height of an algebraic number.

    Uses h(alpha) = (log|a_d| + sum log+|alpha_i|) / d over the roots of the
    minimal polynomial, with every root certified by an exact inclusion disk.
    """
    mp = tuple(p.minpoly) if isinstance(p, AlgebraicByMinPoly) else tuple(int(c) for c in p)
    d = len(mp) - 1
    if d < 1:
        raise PreconditionError("minimal polynomial must have degree >= 1")
    prec = 64
    best = None
    for _ in range(max_iter):
        disks = _root_disks(mp, prec)
        if disks is not None:
            bits = 2 * prec
            with _iv_prec(prec + 20):
                total = iv.log(iv.mpf(abs(mp[-1])))
                for disk in disks:
                    m2 = disk.re * disk.re + disk.im * disk.im
                    lo = max(Fraction(0), _sqrt_down(m2, bits) - disk.radius)
                    hi = _sqrt_up(m2, bits) + disk.radius
                    if hi <= 1:
                        continue
                    lo_log = iv.log(_iv_from_fraction(lo)).a if lo > 1 else iv.mpf(0).a
                    hi_log = iv.log(_iv_from_fraction(hi)).b
                    total += iv.mpf([lo_log, hi_log])
                total = total / d
            enc = Interval(max(0.0, _float_down(total.a)), _float_up(total.b))
            best = enc
            if enc.width <= tolerance:
                return enc
        prec *= 2
    raise ToleranceNotReached(
        f"Mahler-measure enclosure did not reach width {tolerance}", best
    )


def log_mahler_measure(
    p: AlgebraicByMinPoly | Sequence[int], tolerance: float = 1e-9, max_iter: int = 9
) -> Interval:
    """Enclosure of log M(P) = d * h(alpha) for the minimal polynomial P of degree d."""
    mp = tuple(p.minpoly) if isinstance(p, AlgebraicByMinPoly) else tuple(int(c) for c in p)
    d = len(mp) - 1
    enc = mahler_height(mp, tolerance / max(d, 1), max_iter)
    return Interval(max(0.0, _float_down(enc.lo * d)), _float_up(enc.hi * d))


def factor_over_q(coeffs: Sequence) -> list[tuple[list[int], int]]:
    """Irreducible factorization over Q of a rational polynomial (lowest degree first).

    Returns primitive integer factors with positive leading coefficient and
    their multiplicities; the scalar content is dropped.
    """
    import sympy

    ints = up.primitive_int(coeffs)
    if len(ints) < 2:
        return []
    x = sympy.Symbol("x")
    _, facs = sympy.Poly(list(reversed(ints)), x, domain="ZZ").factor_list()
    out = []
    for f, e in facs:
        out.append((up.primitive_int([int(c) for c in reversed(f.all_coeffs())]), int(e)))
    return out


def cyclotomic_order_of(coeffs: Sequence[int]) -> int | None:
    """N if the primitive integer polynomial ``coeffs`` equals Phi_N, else None."""
    return _cyclotomic_order_of_minpoly(tuple(coeffs))


def exact_root(q: Fraction, e: int) -> Fraction | None:
    """The nonnegative rational e-th root of q >= 0 if it exists."""
    def iroot(n: int) -> int | None:
        lo, hi = 0, 1
        while hi**e <= n:
            hi *= 2
        while lo < hi - 1:
            mid = (lo + hi) // 2
            if mid**e <= n:
                lo = mid
            else:
                hi = mid
        return lo if lo**e == n else None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)
