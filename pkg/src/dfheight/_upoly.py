"""Dense univariate polynomials as coefficient lists, lowest degree first.

Coefficients may be any exact field elements (``int``, ``Fraction`` or
``Cyclotomic``); zero tests use truthiness.  The empty list is the zero
polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def trim(p: Sequence) -> list:
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return list(p[:n])


def degree(p: Sequence) -> int:
    """Degree of ``p``; the zero polynomial has degree -1."""
    return len(trim(p)) - 1


def add(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return trim(out)


def neg(a: Sequence) -> list:
    return [-c for c in a]


def sub(a: Sequence, b: Sequence) -> list:
    return add(a, neg(b))


def scale(a: Sequence, c) -> list:
    if not c:
        return []
    return trim([c * x for x in a])


def mul(a: Sequence, b: Sequence) -> list:
    a, b = trim(a), trim(b)
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return trim(out)


def power(a: Sequence, e: int) -> list:
    result = [1]
    base = trim(a)
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def divmod_(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Euclidean division over a field."""
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = b[-1]
    inv = 1 / lead if not isinstance(lead, int) else Fraction(1, lead)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1]
        if not c:
            continue
        c = c * inv
        q[k] = c
        for j, y in enumerate(b):
            r[k + j] = r[k + j] - c * y
    return trim(q), trim(r[: len(b) - 1])


def exact_div(a: Sequence, b: Sequence) -> list | None:
    """Quotient ``a / b`` if ``b`` divides ``a``, else ``None``."""
    q, r = divmod_(a, b)
    return None if r else q


def monic(a: Sequence) -> list:
    a = trim(a)
    if not a:
        return []
    lead = a[-1]
    inv = 1 / lead if not isinstance(lead, int) else Fraction(1, lead)
    return [c * inv for c in a]


def poly_gcd(a: Sequence, b: Sequence) -> list:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def xgcd(a: Sequence, b: Sequence) -> tuple[list, list, list]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g`` and ``g`` monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], s0, t0
    lead = r0[-1]
    inv = 1 / lead if not isinstance(lead, int) else Fraction(1, lead)
    return [c * inv for c in r0], scale(s0, inv), scale(t0, inv)


def derivative(a: Sequence) -> list:
    return trim([k * c for k, c in enumerate(a)][1:])


def evaluate(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def reverse(a: Sequence, d: int | None = None) -> list:
    """``x^d a(1/x)``; ``d`` defaults to ``deg a``."""
    a = trim(a)
    if d is None:
        d = len(a) - 1
    out = [0] * (d + 1)
    for i, c in enumerate(a):
        out[d - i] = c
    return trim(out)


def primitive_int(a: Sequence) -> list[int]:
    """Scale a rational polynomial to a primitive integer one, positive lead."""
    a = [Fraction(c) for c in trim(a)]
    if not a:
        return []
    den = 1
    for c in a:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def squarefree_part(a: Sequence) -> list:
    g = poly_gcd(a, derivative(a))
    return monic(divmod_(a, g)[0]) if len(g) > 1 else monic(a)


def series_inverse_mul(num: Sequence, den: Sequence, count: int) -> list:
    """First ``count`` Taylor coefficients of ``num/den`` (``den[0] != 0``)."""
    den = trim(den)
    if not den or not den[0]:
        raise ValueError("denominator has zero constant term")
    d0 = den[0]
    inv0 = 1 / d0 if not isinstance(d0, int) else Fraction(1, d0)
    out: list = []
    for n in range(count):
        acc = num[n] if n < len(num) else 0
        for k in range(1, min(n, len(den) - 1) + 1):
            if den[k]:
                acc = acc - den[k] * out[n - k]
        out.append(acc * inv0)
    return out
