"""Height growth of three coefficient sequences.

exp has coefficients 1/n!, whose heights grow like n log n; 1/(1-2x) has
2^n, growing linearly; 1/(1-x^3) is periodic with height 0.  The profile
also checks the certified per-step increment bound exactly at every step.

    python demos/height_growth.py
"""

from __future__ import annotations

from dfheight import DFiniteSystem, height_profile, p_recurrence_from_ode

SYSTEMS = {
    "exp            f' - f = 0": (DFiniteSystem.univariate([[-1], [1]]), {0: 1}),
    "1/(1-2x)       (1-2x) f' - 2f = 0": (DFiniteSystem.univariate([[-2], [1, -2]]), {0: 1}),
    "1/(1-x^3)      (1-x^3) f' - 3x^2 f = 0": (DFiniteSystem.univariate([[0, 0, -3], [1, 0, 0, -1]]), {0: 1, 1: 0, 2: 0}),
}


def main(T: int = 1000) -> None:
    for name, (sys, seeds) in SYSTEMS.items():
        rec = p_recurrence_from_ode(sys)
        prof = height_profile(rec, seeds, T)
        print(name)
        print(f"  growth class: {prof.growth}   property P: {prof.property_P}")
        print(f"  exact step checks: {prof.step_checks}, violations: {len(prof.step_violations)}")
        print(f"  {'n':>6} {'h(a_0..a_n)':>14} {'h(a_n)/n':>10} {'cum/(n log n)':>14}")
        for row in prof.ratio_table([10, 100, T]):
            print(
                f"  {row['n']:>6} {row['h_cumulative']:>14.4f} {row['h_over_n']:>10.5f}"
                f" {row['cumulative_over_n_log_n']:>14.5f}"
            )
        print()


if __name__ == "__main__":
    main()
