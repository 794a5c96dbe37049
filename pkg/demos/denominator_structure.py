"""Recognising denominators of the form prod (1 - zeta_i x^{n_i}).

A product of binomials with root-of-unity coefficients is multiplied out
and factored back; a polynomial outside that shape is rejected with the
undivided remainder.  The coefficients of 1/((1 - x1 x2)(1 + x2)) take
only three values, and each of its sections in x1 is eventually periodic.

    python demos/denominator_structure.py
"""

from __future__ import annotations

from dfheight import Cyclotomic, Polynomial, RationalFunction, denominator_form_check, section
from dfheight.certify import finite_set_check
from dfheight.lrs import detect_periodicity


def main() -> None:
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    one = Polynomial.constant(2, 1)
    z3 = Cyclotomic.zeta(3)

    G = (one - x * y) * (one + y) * (one - z3 * x * x * y)
    rep = denominator_form_check(G)
    print(f"G has {len(G.terms)} terms; cyclotomic form: {rep.is_cyclotomic_form}")
    for f in rep.factors:
        print(f"  1 - ({f.zeta}) x^{f.exponent}   multiplicity {f.multiplicity}")

    rep = denominator_form_check(one - x - y)
    print(f"1 - x - y: cyclotomic form {rep.is_cyclotomic_form}, remainder {rep.remainder!r}")

    f = RationalFunction(one, (one - x * y) * (one + y))
    values = finite_set_check(f.expand(20).values())
    print(f"coefficients of 1/((1-xy)(1+y)) to degree 20: {[str(v) for v in values.values]}")
    for N in range(4):
        g = section(f, 0, N, 30).to_list()
        print(f"  section x^{N}: first terms {[str(v) for v in g[:8]]}, (preperiod, period) = {detect_periodicity(g)}")


if __name__ == "__main__":
    main()
