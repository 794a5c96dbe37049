"""Exact height analysis of D-finite power series.

Modules:
    exactnum  rationals, cyclotomic fields, algebraic numbers by minimal polynomial
    heights   Weil heights and the standard height inequalities
    dseries   polynomials, truncated series, differential systems
    lrs       constant-coefficient recurrences and denominator analysis
    certify   recurrences from ODEs, height profiles, rationality certification
    formats   JSON encodings
    cli       command-line front end
"""

__version__ = "0.1.0"

from .certify import (
    PRecurrence,
    certify_rational,
    denominator_form_check,
    effective_bounds,
    finite_set_check,
    generate_terms,
    height_profile,
    p_recurrence_from_ode,
    rational_reconstruct,
    theorem2_pipeline,
)
from .dseries import (
    DFiniteSystem,
    Polynomial,
    RationalFunction,
    TruncatedSeries,
    apply_system,
    coefficient_relation,
    falling_factorial,
    nonzero_substitution_check,
    section,
    substitute_monomials,
)
from .exactnum import AlgebraicByMinPoly, Cyclotomic, is_root_of_unity, mahler_height
from .heights import (
    check_height_inequalities,
    height_affine_tuple,
    height_point,
    height_rational,
    poly_eval_height_bound,
)
from .lrs import (
    ClosedForm,
    ConstRecurrence,
    all_roots_of_unity,
    arithmetic_progression_section,
    closed_form_cyclotomic,
    detect_periodicity,
    multiplicity_bound_check,
    recurrence_from_denominator,
    root_equivalence_classes,
)
