"""Certifying that a D-finite series is rational.

Start from a rational function, forget it, keep only a first-order ODE and
a few seed terms, and let the certification pipeline recover it.  The same
pipeline rejects exp, whose coefficient heights grow too fast.

    python demos/certify_rational.py
"""

from __future__ import annotations

from dfheight import RationalFunction, certify_rational, p_recurrence_from_ode
from dfheight.certify import ode_for_rational
from dfheight.dseries import DFiniteSystem


def main() -> None:
    # (1 + 2x - x^2) / ((1 - x^3)(1 + x^2))
    num = [1, 2, -1]
    den = [1, 0, 1, -1, 0, -1]
    source = RationalFunction.univariate(num, den)
    sys = ode_for_rational(num, den)
    print("ODE coefficients P_j (lowest degree first):")
    for j, P in enumerate(sys.equations[0]):
        print(f"  P_{j} = {[str(c) for c in P.to_univariate()]}")

    T = 120
    rec = p_recurrence_from_ode(sys)
    terms = source.expand(T - 1).to_list()
    seeds = {i: terms[i] for i in rec.required_seed_indices(T)}
    print(f"recurrence order {rec.order}, seeds at indices {sorted(seeds)}")

    rep = certify_rational(sys, seeds, T=T)
    print(f"verdict: {rep.verdict}")
    print(f"  delta = {rep.delta}, eta has {len(str(rep.eta))} digits, N ({rep.N_source}) has {len(str(rep.N))} digits")
    print(f"  numerator   {[str(c) for c in rep.num]}")
    print(f"  denominator {[str(c) for c in rep.den]}")
    print(f"  exact ODE check: {rep.ode_verified}")
    print(f"  equals the source: {rep.function.same_function(source)}")

    exp = DFiniteSystem.univariate([[-1], [1]])
    rep = certify_rational(exp, {0: 1})
    print(f"exp: {rep.verdict} at n = {rep.witnesses[0]['index']}")


if __name__ == "__main__":
    main()
