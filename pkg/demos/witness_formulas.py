"""Checking a closed formula a_n = sum c_{n,s,t} n^t alpha_s^n against an ODE.

For a_n = n 2^n the identity behind the ODE holds exactly at every index,
and peeling off the powers of n leaves rational layers: sum 2^n x^n and,
after applying x d/dx once, 2x/(1-2x)^2.  Perturbing one coefficient of the
formula breaks the identity at a named index.

    python demos/witness_formulas.py
"""

from __future__ import annotations

from fractions import Fraction

from dfheight import theorem2_pipeline
from dfheight.certify import Theorem2Witness, ode_for_rational
from dfheight.errors import BetaIdentityError


def show(rf) -> str:
    if rf is None:
        return "not rational"
    return f"{[str(c) for c in rf.num.to_univariate()]} / {[str(c) for c in rf.den.to_univariate()]}"


def main() -> None:
    sys = ode_for_rational([0, 2], [1, -4, 4])  # 2x / (1 - 2x)^2
    w = Theorem2Witness.periodic(1, [2], [[[0, 1]]])
    rep = theorem2_pipeline(w, sys, 30)
    print(f"a_0..a_7 = {[str(a) for a in rep.terms[:8]]}")
    print(f"identity verified for r = 0..{rep.beta_checked - 1}")
    for layer in rep.layers:
        print(f"  t = {layer['t']}: g = {show(layer['g'])},  theta^t g = {show(layer['theta_g'])}")

    bad = Theorem2Witness(1, (2,), lambda n, s, t: Fraction(t) + (Fraction(1, 7) if (n, t) == (9, 0) else 0))
    try:
        theorem2_pipeline(bad, sys, 30)
    except BetaIdentityError as e:
        print(f"perturbed witness: {e}")


if __name__ == "__main__":
    main()
