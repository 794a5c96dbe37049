"""Pipelines built on the lower modules: P-recurrences from ODEs, exact term
generation, height profiles with certified per-step increments, effective
rationality bounds and certification, denominator-form recognition, and the
reduction that checks witness formulas a_n = sum c_{n,s,t} n^t alpha_s^n
against an ODE.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Mapping, Sequence

import mpmath

from . import _upoly as up
from .dseries import (
    DFiniteSystem,
    Polynomial,
    RationalFunction,
    TruncatedSeries,
    apply_system,
    falling_factorial,
)
from .errors import BetaIdentityError, PreconditionError, SingularRecurrenceError
from .exactnum import (
    AlgebraicByMinPoly,
    Box,
    Cyclotomic,
    algebraic_box,
    cyclotomic_order_of,
    factor_over_q,
    is_root_of_unity,
    rational,
    simplify,
)
from .heights import AffineHeight, C0, C1, H_rational, log_enclosure
from .lrs import detect_periodicity, norm_polynomial, root_equivalence_classes

# --------------------------------------------------------------------------
# P-recurrences


@dataclass(frozen=True)
class PRecurrence:
    """sum_{i=0}^{M} R_i(n) a_{n+i} = 0 for all n >= offset.

    ``coeffs[i]`` lists the rational coefficients of R_i, lowest degree first.
    """

    coeffs: tuple
    offset: int = 0

    def __post_init__(self):
        cs = tuple(tuple(Fraction(c) for c in up.trim([rational(x) for x in r])) for r in self.coeffs)
        if not cs or not cs[-1]:
            raise PreconditionError("leading recurrence coefficient must be nonzero")
        object.__setattr__(self, "coeffs", cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def R(self, i: int, n: int) -> Fraction:
        return up.evaluate(list(self.coeffs[i]), Fraction(n)) if self.coeffs[i] else Fraction(0)

    def singular_indices(self, upto: int) -> list[int]:
        """Indices n in [offset, upto) where R_M(n) = 0."""
        lead = list(self.coeffs[-1])
        return [n for n in range(self.offset, upto) if up.evaluate(lead, Fraction(n)) == 0]

    def required_seed_indices(self, T: int) -> list[int]:
        """Term indices below T that generation cannot produce without a seed."""
        M = self.order
        need = set(range(min(self.offset + M, T)))
        need.update(n + M for n in self.singular_indices(T - M) if n + M < T)
        return sorted(need)


def p_recurrence_from_ode(sys: DFiniteSystem) -> PRecurrence:
    """Recurrence of the Taylor coefficients of solutions of a univariate ODE.

    With P_j = sum_s p_{j,s} x^s the coefficient of x^r gives
    sum_{j,s} p_{j,s} B_j(r+j-s) a_{r+j-s} = 0.  Writing k = j - s and
    n = r + kmin, R_{k-kmin}(n) collects p_{j,s} B_j(n + k - kmin).
    """
    if sys.m != 1:
        raise PreconditionError("p_recurrence_from_ode needs a univariate system")
    terms = []
    for j, p in enumerate(sys.equations[0]):
        for (s,), c in p.terms.items():
            if isinstance(c, Cyclotomic):
                c = c.to_rational()
            terms.append((j, s, Fraction(c)))
    if not terms:
        raise PreconditionError("all coefficient polynomials vanish")
    ks = [j - s for j, s, _ in terms]
    kmin, kmax = min(ks), max(ks)
    R: list[list] = [[] for _ in range(kmax - kmin + 1)]
    for j, s, c in terms:
        k = j - s
        shift = k - kmin
        # B_j(n + shift) as a polynomial in n
        poly: list = [Fraction(1)]
        for t in range(j):
            poly = up.mul(poly, [Fraction(shift - t), Fraction(1)])
        R[k - kmin] = up.add(R[k - kmin], up.scale(poly, c))
    return PRecurrence(tuple(tuple(r) for r in R), max(0, kmin))


def _seed_map(seeds) -> dict[int, Fraction]:
    if seeds is None:
        return {}
    if isinstance(seeds, Mapping):
        return {int(k): rational(v) for k, v in seeds.items()}
    return {i: rational(v) for i, v in enumerate(seeds)}


def generate_terms(rec: PRecurrence, seeds, T: int) -> list[Fraction]:
    """a_0 .. a_{T-1}; seeds fix indices the recurrence cannot determine.

    A seed at an index the recurrence does determine must agree with it.
    """
    seeds = _seed_map(seeds)
    M = rec.order
    lead = list(rec.coeffs[-1])
    others = [list(c) for c in rec.coeffs[:-1]]
    out: list[Fraction] = []
    for idx in range(T):
        n = idx - M
        value = None
        if n >= rec.offset:
            rm = up.evaluate(lead, Fraction(n))
            if rm:
                acc = Fraction(0)
                for i, r in enumerate(others):
                    if r and out[n + i]:
                        acc += up.evaluate(r, Fraction(n)) * out[n + i]
                value = -acc / rm
            elif idx not in seeds:
                raise SingularRecurrenceError(
                    f"singular leading coefficient: R_M({n}) = 0, a seed for a_{idx} is required",
                    index=n,
                )
        if idx in seeds:
            if value is not None and value != seeds[idx]:
                raise PreconditionError(
                    f"seed a_{idx} = {seeds[idx]} contradicts the recurrence value {value}", index=idx
                )
            value = seeds[idx]
        if value is None:
            raise PreconditionError(f"missing seed for a_{idx}", index=idx)
        out.append(value)
    return out


# --------------------------------------------------------------------------
# height profiles


def _integer_recurrence(rec: PRecurrence) -> list[list[int]]:
    """R_i scaled by one common positive integer so all coefficients are integers."""
    den = 1
    for r in rec.coeffs:
        for c in r:
            den = den * c.denominator // gcd(den, c.denominator)
    return [[int(c * den) for c in r] for r in rec.coeffs]


@dataclass
class StepBound:
    """Certified bound h(a_0..a_{n+M}) - h(a_0..a_{n+M-1}) <= log(factor) per generated term.

    ``factor`` is max(M, 1) * max_i |S_i(n)| with S_i the integer-scaled
    recurrence coefficients; the analytic envelope A log n + B bounds its log.
    """

    A: float
    B: float
    seed_height: float

    def envelope(self, n: int) -> float:
        return self.A * math.log(max(n, 1)) + self.B

    @property
    def C(self) -> float:
        """h(a_0..a_N) <= C N log N for all N >= 2."""
        return self.A + (self.B + self.seed_height) / math.log(2)


@dataclass
class HeightProfile:
    T: int
    cumulative: list[float]  # h(a_0..a_n)
    term_heights: list[float]  # h(a_n)
    ratio_log: list[float | None]  # h(a_n)/log n, n >= 2
    ratio_linear: list[float | None]  # h(a_n)/n
    ratio_nlogn: list[float | None]  # h(a_0..a_n)/(n log n)
    growth: str
    property_P: bool
    step_checks: int
    step_violations: list[int]
    envelope_violations: list[int]
    step_bound: StepBound | None
    nlogn_bound_holds: bool

    def ratio_table(self, points: Sequence[int] | None = None) -> list[dict]:
        if points is None:
            points = sorted({n for n in (2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000, self.T) if 2 <= n <= self.T})
        return [
            {
                "n": n,
                "h_cumulative": self.cumulative[n],
                "h_term": self.term_heights[n],
                "h_over_log_n": self.ratio_log[n],
                "h_over_n": self.ratio_linear[n],
                "cumulative_over_n_log_n": self.ratio_nlogn[n],
            }
            for n in points
        ]


def classify_growth(H_terms: Sequence[int]) -> str:
    """'bounded', 'sublinear', 'linear' or 'nlogn' from exact term heights H(a_n).

    bounded: no new height record in the second half of the range.
    Otherwise, with hmax(n) the running maximum of h(a_k), k <= n, and
    T the last index: slope s = log2(hmax(T)/hmax(T/2)); s < 1/2 is
    sublinear, else an increase of hmax(n)/n between T/2 and T above
    (log 2)/2 indicates n log n growth, and linear otherwise.
    """
    T = len(H_terms) - 1
    if T < 4:
        return "bounded"
    half = T // 2
    first = max(H_terms[: half + 1])
    second = max(H_terms[half + 1 :])
    if second <= first:
        return "bounded"
    h_half = log_enclosure(first).mid
    h_top = log_enclosure(max(first, second)).mid
    if h_half <= 0 or math.log2(h_top / h_half) < 0.5:
        return "sublinear"
    if h_top / T - h_half / half > 0.5 * math.log(2):
        return "nlogn"
    return "linear"


def height_profile(rec: PRecurrence, seeds, T: int) -> HeightProfile:
    """Exact height data for a_0..a_T plus the certified per-step check.

    For every term produced by the recurrence (not by a seed) the exact
    inequality H(a_0..a_{n+M}) <= max(M,1) * max_i |S_i(n)| * H(a_0..a_{n+M-1})
    is tested.
    """
    terms = generate_terms(rec, seeds, T + 1)
    seed_map = _seed_map(seeds)
    M = rec.order
    S = _integer_recurrence(rec)
    mfac = max(M, 1)

    acc = AffineHeight()
    cumulative: list[float] = []
    term_H: list[int] = []
    term_h: list[float] = []
    violations: list[int] = []
    env_viol: list[int] = []
    checks = 0
    prev_H = 1
    seed_height = 0.0

    S_deg = max(len(s) - 1 for s in S)
    S_height = max((log_enclosure(abs(c)).hi for s in S for c in s if c), default=0.0)
    d_env = max(S_deg, 1)
    A = float(S_deg)
    B = math.log(mfac) + C1(d_env) * S_height + C0(d_env)

    for idx, a in enumerate(terms):
        acc.push(a)
        H_now = acc.H
        n = idx - M
        determined = n >= rec.offset and up.evaluate(list(rec.coeffs[-1]), Fraction(n)) != 0
        if determined:
            checks += 1
            factor = mfac * max(abs(up.evaluate(s, n)) if s else 0 for s in S)
            if H_now > max(factor, 1) * prev_H:
                violations.append(idx)
            inc = log_enclosure(H_now).lo - log_enclosure(prev_H).hi
            if inc > StepBound(A, B, 0.0).envelope(n) + 1e-9:
                env_viol.append(idx)
        else:
            seed_height += log_enclosure(H_rational(a)).hi
        prev_H = H_now
        cumulative.append(log_enclosure(H_now).mid)
        hterm = H_rational(a)
        term_H.append(hterm)
        term_h.append(log_enclosure(hterm).mid)

    bound = StepBound(A, B, seed_height)
    r_log: list[float | None] = [None, None]
    r_lin: list[float | None] = [None, None]
    r_nlogn: list[float | None] = [None, None]
    nlogn_ok = True
    for n in range(2, T + 1):
        ln = math.log(n)
        r_log.append(term_h[n] / ln)
        r_lin.append(term_h[n] / n)
        r_nlogn.append(cumulative[n] / (n * ln))
        if cumulative[n] > bound.C * n * ln * (1 + 1e-12):
            nlogn_ok = False
    growth = classify_growth(term_H)
    return HeightProfile(
        T=T,
        cumulative=cumulative,
        term_heights=term_h,
        ratio_log=r_log[: T + 1],
        ratio_linear=r_lin[: T + 1],
        ratio_nlogn=r_nlogn[: T + 1],
        growth=growth,
        property_P=growth == "bounded",
        step_checks=checks,
        step_violations=violations,
        envelope_violations=env_viol,
        step_bound=bound,
        nlogn_bound_holds=nlogn_ok,
    )


# --------------------------------------------------------------------------
# effective bounds


@dataclass(frozen=True)
class EffectiveBounds:
    """delta and eta for inputs (m, M, D, d_max), with the intermediate constants.

    ``per_order`` maps each order d to its (K, C2, C3, C4, C5, C6, delta_d, eta_d).
    """

    delta: Fraction
    eta: int
    m: int
    M: float
    D: int
    d_max: int
    per_order: tuple = ()

    def degree_budget(self, N: int) -> int:
        return N + self.eta


_R0_MARGIN = mpmath.mpf("1e-30")


def effective_bounds(m: int, M: float, D: int, d_max: int) -> EffectiveBounds:
    """Explicit delta, eta.

    For each order d in 1..d_max, with eps = 1/(2m):
      K  = (d+1)(D+1)^m         number of unknown coefficients in the local linear system
      C2 = d log(1 + d + D)     height growth of the falling factorials B_j
      C3 = 2K,  C4 = K(M + C2) + log K
      C5 = C1(d) C3,  C6 = C1(d) C4 + C0(d)   (C0, C1 from the evaluation bound)
      delta_d = d / (2 C5),   R0 = exp(2 C6) / eps^2
      eta_d   = d + D + 2 + floor(R0) + 1
    then delta = min delta_d, eta~ = max eta_d,
    eta'' = eta~ + (2m-1) m d_max and eta = eta'' + (m-1) D.
    The logarithms are evaluated in high precision and R0 is nudged upward,
    so eta is never too small because of rounding.
    """
    if m < 1 or M < 0 or D < 0 or d_max < 1:
        raise PreconditionError("need m >= 1, M >= 0, D >= 0, d_max >= 1")
    eps = Fraction(1, 2 * m)
    rows = []
    delta = None
    eta_t = 0
    for d in range(1, d_max + 1):
        K = (d + 1) * (D + 1) ** m
        C3 = 2 * K
        C5 = C1(d) * C3
        delta_d = Fraction(d, 2 * (d + 1) * C3)  # d / (2 C5) with C1(d) = d + 1
        # R0 has about 2 C6 / log 2 integer bits; carry 128 more
        approx_C6 = (d + 1) * (K * (M + d * math.log(1 + d + D)) + math.log(K)) + C0(d)
        bits = int(2 * approx_C6 / math.log(2)) + 2 * (2 * m).bit_length() + 192
        with mpmath.workprec(bits):
            C2 = d * mpmath.log(1 + d + D)
            C4 = K * (mpmath.mpf(M) + C2) + mpmath.log(K)
            C6 = (d + 1) * C4 + (d + 1) * mpmath.log(d + 1)
            R0 = mpmath.exp(2 * C6) * eps.denominator**2 / eps.numerator**2
            R0 *= 1 + _R0_MARGIN
            floor_R0 = int(mpmath.floor(R0))
        eta_d = d + D + 2 + floor_R0 + 1
        rows.append((K, float(C2), C3, float(C4), C5, float(C6), delta_d, eta_d))
        delta = delta_d if delta is None else min(delta, delta_d)
        eta_t = max(eta_t, eta_d)
    eta2 = eta_t + (2 * m - 1) * m * d_max
    eta = eta2 + (m - 1) * D
    return EffectiveBounds(delta, eta, m, float(M), D, d_max, tuple(rows))


# --------------------------------------------------------------------------
# rational reconstruction


def rational_reconstruct(terms: Sequence, dmax_num: int, dmax_den: int) -> RationalFunction | None:
    """num/den with deg num <= dmax_num, deg den <= dmax_den, den(0) = 1,
    whose expansion matches every supplied term; None if there is none.

    Only the denominator is solved for (a Hankel-type linear system on the
    equations beyond dmax_num); the numerator then follows by multiplication.
    """
    a, b = dmax_num, dmax_den
    if a < 0 or b < 0:
        raise PreconditionError("degree bounds must be nonnegative")
    vals = [v if isinstance(v, Cyclotomic) else rational(v) for v in terms]
    if len(vals) < a + b + 2:
        raise PreconditionError(
            f"need at least {a + b + 2} terms for degree bounds ({a}, {b}), got {len(vals)}"
        )
    from . import _linalg

    def t(i):
        return vals[i] if i >= 0 else Fraction(0)

    if b:
        rows = [[t(n - k) for k in range(1, b + 1)] for n in range(a + 1, len(vals))]
        rhs = [-vals[n] for n in range(a + 1, len(vals))]
        sol = _linalg.solve(rows, rhs)
        if sol is None:
            return None
        den = [Fraction(1)] + list(sol)
    else:
        if any(vals[a + 1 :]):
            return None
        den = [Fraction(1)]
    num = up.mul(vals, den)[: a + 1]
    num, den = up.trim(num), up.trim(den)
    g = up.poly_gcd(num, den) if num else [Fraction(1)]
    if len(g) > 1:
        num = up.divmod_(num, g)[0]
        den = up.divmod_(den, g)[0]
    c = den[0]
    num = [x / c for x in num]
    den = [x / c for x in den]
    num = [simplify(x) for x in num]
    den = [simplify(x) for x in den]
    if up.series_inverse_mul(num, den, len(vals)) != vals:
        return None  # pragma: no cover - the solve guarantees agreement
    return RationalFunction.univariate(num, den)


def guess_rational(terms: Sequence, margin: int | None = None) -> RationalFunction | None:
    """Smallest balanced degree bound s for which reconstruction succeeds,
    keeping ``margin`` surplus terms as a check (default len/3)."""
    if margin is None:
        margin = len(terms) // 3
    s = 0
    while 2 * s + 2 + margin <= len(terms):
        rf = rational_reconstruct(terms, s, s)
        if rf is not None:
            return rf
        s += 1
    return None


def ode_for_rational(num: Sequence, den: Sequence) -> DFiniteSystem:
    """First-order ODE (A B) f' - (A' B - A B') f = 0 satisfied by f = A/B."""
    A = up.trim([rational(c) for c in num])
    B = up.trim([rational(c) for c in den])
    if not A:
        return DFiniteSystem.univariate([[], [1]])
    P1 = up.mul(A, B)
    P0 = up.neg(up.sub(up.mul(up.derivative(A), B), up.mul(A, up.derivative(B))))
    g = up.poly_gcd(P1, P0) if P0 else up.monic(P1)
    P1 = up.divmod_(P1, g)[0]
    P0 = up.divmod_(P0, g)[0] if P0 else []
    lead = Fraction(1) / P1[-1]
    return DFiniteSystem.univariate([up.scale(P0, lead) or [0], up.scale(P1, lead)])


def ode_residual_is_zero(sys: DFiniteSystem, f: RationalFunction) -> bool:
    """Exact check that sum_j P_j (A/B)^{(j)} = 0, using f^{(j)} = A_j / B^{j+1}."""
    if sys.m != 1:
        raise PreconditionError("exact ODE check is univariate")
    A = f.num.to_univariate()
    B = f.den.to_univariate()
    dB = up.derivative(B)
    eq = sys.equations[0]
    d = len(eq) - 1
    total: list = []
    Aj = A
    for j, P in enumerate(eq):
        term = up.mul(P.to_univariate(), up.mul(Aj, up.power(B, d - j)))
        total = up.add(total, term)
        Aj = up.sub(up.mul(up.derivative(Aj), B), up.scale(up.mul(Aj, dB), Fraction(j + 1)))
    return not up.trim(total)


# --------------------------------------------------------------------------
# certification


@dataclass
class CertificationReport:
    verdict: str
    delta: Fraction
    eta: int
    degree_budget: int | None
    N: int | None
    N_source: str
    T: int
    num: list | None = None
    den: list | None = None
    num_bound_used: int | None = None
    den_bound_used: int | None = None
    ode_verified: bool = False
    conditional: bool = True
    witnesses: list[dict] = field(default_factory=list)
    bounds: EffectiveBounds | None = None

    @property
    def function(self) -> RationalFunction | None:
        if self.num is None:
            return None
        return RationalFunction.univariate(self.num, self.den)


def _implied_N(H: int, delta: Fraction) -> int:
    """Smallest N with delta * log N > log H, i.e. N > H^(1/delta), plus one."""
    if H <= 1:
        return 2
    e = Fraction(1) / delta
    bits = int(math.log2(H) * float(e)) + 128
    with mpmath.workprec(bits):
        val = mpmath.power(mpmath.mpf(H), mpmath.mpf(e.numerator) / e.denominator)
        return int(mpmath.floor(val)) + 2


def certify_rational(
    sys: DFiniteSystem, seeds, N: int | None = None, T: int = 120
) -> CertificationReport:
    """Effective rationality test for a univariate ODE solution.

    Steps: (delta, eta) from the coefficient data of ``sys``; the growth
    hypothesis h(a_n) < delta log n is checked on a_N..a_{T-1} when N is
    given, otherwise N is inferred from bounded heights (no new height
    record in the second half of the range).  The denominator is bounded by
    deg P_d and the numerator by the budget N + eta clipped to what T terms
    can determine.  A reconstructed A/B is finally checked exactly against
    the ODE; together with agreement on the generated terms this makes the
    identification unconditional, which the report records.
    """
    if sys.m != 1:
        raise PreconditionError("certify_rational handles univariate systems")
    rec = p_recurrence_from_ode(sys)
    M = sys.coefficient_height_bound()
    D = sys.max_degree()
    d = sys.order(0)
    bounds = effective_bounds(1, M, D, max(d, 1))
    delta = bounds.delta
    terms = generate_terms(rec, seeds, T)
    H = [H_rational(a) for a in terms]
    report = CertificationReport(
        verdict="", delta=delta, eta=bounds.eta, degree_budget=None, N=N,
        N_source="caller" if N is not None else "inferred", T=T, bounds=bounds,
    )
    if N is not None:
        for n in range(max(N, 2), T):
            lhs = log_enclosure(H[n]).lo
            if lhs >= float(delta) * math.log(n):
                report.verdict = "hypothesis-violated"
                report.witnesses.append(
                    {"index": n, "height": log_enclosure(H[n]).mid, "threshold": float(delta) * math.log(n)}
                )
                return report
    else:
        half = T // 2
        first = max(H[: half + 1], default=1)
        for n in range(half + 1, T):
            if H[n] > first:
                report.verdict = "hypothesis-violated"
                report.witnesses.append(
                    {"index": n, "height": log_enclosure(H[n]).mid, "first_half_max": log_enclosure(first).mid}
                )
                return report
        N = _implied_N(first, delta)
        report.N = N
    budget = bounds.degree_budget(N)
    report.degree_budget = budget
    b = sys.leading(0).total_degree()
    a = min(budget, T - 2 * b - 4)
    report.den_bound_used = b
    report.num_bound_used = a
    rf = rational_reconstruct(terms, a, b) if a >= 0 else None
    if rf is None:
        report.verdict = "reconstruction-failed"
        return report
    report.verdict = "certified-rational"
    report.num = rf.num.to_univariate()
    report.den = rf.den.to_univariate()
    report.ode_verified = ode_residual_is_zero(sys, rf)
    report.conditional = not report.ode_verified
    if not report.ode_verified:
        report.witnesses.append({"note": "reconstruction matches all terms but fails the exact ODE check"})
    return report


def verify_candidate(sys: DFiniteSystem, candidate: RationalFunction, N: int, T: int) -> dict:
    """Multivariate check: residuals of ``candidate`` under ``sys`` to degree T,
    and whether P_{1,d_1}...P_{m,d_m} * candidate is a polynomial within the
    degree budget N + eta."""
    M = sys.coefficient_height_bound()
    bounds = effective_bounds(sys.m, M, sys.max_degree(), sys.max_order())
    residuals = apply_system(sys, candidate.expand(T))
    P = Polynomial.constant(sys.m, 1)
    for i in range(sys.m):
        P = P * sys.leading(i)
    num = P * candidate.num
    # P * num / den is a polynomial iff den divides it; test via truncated expansion
    top = num.total_degree() + 1
    prod = RationalFunction(num, candidate.den).expand(top + candidate.den.total_degree() + 1)
    is_poly = all(sum(k) <= top - 1 for k in prod.coeffs)
    deg = max((sum(k) for k in prod.coeffs), default=0)
    return {
        "residuals_zero": [r.is_zero() for r in residuals],
        "degree_budget": bounds.degree_budget(N),
        "product_is_polynomial": is_poly,
        "product_degree": deg,
        "within_budget": is_poly and deg <= bounds.degree_budget(N),
        "delta": bounds.delta,
        "eta": bounds.eta,
    }


# --------------------------------------------------------------------------
# structure checks


@dataclass
class DenominatorFactor:
    zeta: object  # Fraction or Cyclotomic
    exponent: tuple
    multiplicity: int


@dataclass
class DenominatorFormReport:
    is_cyclotomic_form: bool
    scalar: object
    factors: list[DenominatorFactor]
    multiplicity_violation: bool
    remainder: Polynomial | None = None

    @property
    def multiplicities(self) -> list[int]:
        return [f.multiplicity for f in self.factors]


def _primitive_direction(k: tuple) -> tuple:
    g = 0
    for e in k:
        g = gcd(g, e)
    return tuple(e // g for e in k)


def _ray_polynomial(G: Polynomial, v: tuple) -> list:
    out: dict[int, object] = {}
    for k, c in G.terms.items():
        mult = None
        for e, w in zip(k, v):
            if w == 0:
                if e:
                    break
            else:
                if e % w:
                    break
                q = e // w
                if mult is None:
                    mult = q
                elif mult != q:
                    break
        else:
            out[mult or 0] = c
    if not out:
        return []
    return [out.get(i, Fraction(0)) for i in range(max(out) + 1)]


def _unit_roots_of(p: list) -> list:
    """Roots of unity z with p(z) = 0 (coefficients rational or cyclotomic)."""
    roots = []
    for f, _ in factor_over_q(norm_polynomial(p)):
        n = cyclotomic_order_of(f)
        if n is None:
            continue
        for k in range(n):
            if gcd(k, n) == 1:
                z = Cyclotomic.zeta(n, k)
                if not up.evaluate(p, z):
                    roots.append(simplify(z))
    return roots


def _divide_by_binomial(G: Polynomial, omega, v: tuple) -> Polynomial | None:
    """G / (1 - omega x^v) if exact, else None."""
    top = G.total_degree() - sum(v)
    if top < 0:
        return None
    q: dict = {}
    for u, c in G.terms.items():
        k = 0
        w = u
        coef = c
        while sum(w) <= top:
            q[w] = q[w] + coef if w in q else coef
            w = tuple(a + b for a, b in zip(w, v))
            coef = coef * omega
            k += 1
    Q = Polynomial(G.m, q)
    binom = Polynomial(G.m, {(0,) * G.m: 1, v: -omega})
    return Q if Q * binom == G else None


def denominator_form_check(G: Polynomial) -> DenominatorFormReport:
    """Try to write G = scalar * prod (1 - zeta_i x^{n_i}) with zeta_i roots of unity
    and primitive n_i.

    Each round restricts G to the ray through a primitive direction v of
    its support; along an extreme ray only factors with n_i = v survive,
    so the roots of unity of that ray polynomial give the candidates omega
    for trial division by 1 - omega x^v.
    """
    if G.is_zero():
        raise PreconditionError("G must be nonzero")
    c0 = G.constant_term()
    if not c0:
        raise PreconditionError("G(0) = 0: not the denominator of a power series")
    rest = G * (1 / c0)
    found: list[tuple[object, tuple]] = []
    while rest.total_degree() > 0:
        progressed = False
        dirs = sorted({_primitive_direction(k) for k in rest.terms if any(k)}, key=lambda v: (sum(v), v))
        for v in dirs:
            ray = _ray_polynomial(rest, v)
            for z in _unit_roots_of(ray):
                omega = simplify(1 / Cyclotomic.lift(z)) if isinstance(z, Cyclotomic) else 1 / z
                Q = _divide_by_binomial(rest, omega, v)
                if Q is not None:
                    found.append((omega, v))
                    rest = Q
                    progressed = True
                    break
            if progressed:
                break
        if not progressed:
            return DenominatorFormReport(False, simplify(c0), _group(found), False, rest)
    scalar = simplify(c0 * rest.constant_term())
    factors = _group(found)
    return DenominatorFormReport(True, scalar, factors, any(f.multiplicity > 1 for f in factors))


def _group(found) -> list[DenominatorFactor]:
    out: list[DenominatorFactor] = []
    for omega, v in found:
        for f in out:
            if f.exponent == v and f.zeta == omega:
                f.multiplicity += 1
                break
        else:
            out.append(DenominatorFactor(omega, v, 1))
    return out


@dataclass
class FiniteSetReport:
    distinct_count: int
    values: list
    periodicity: object = None


def finite_set_check(terms: Sequence, modulus: int | None = None) -> FiniteSetReport:
    """Distinct values among ``terms``; with ``modulus``, also the periodicity
    verdict of each residue class (None where fewer than 4 terms)."""
    vals = []
    for t in terms:
        if t not in vals:
            vals.append(t)
    per = None
    if modulus:
        per = []
        for r in range(modulus):
            cls = list(terms[r::modulus])
            per.append(detect_periodicity(cls) if len(cls) >= 4 else None)
    try:
        vals.sort()
    except TypeError:
        pass
    return FiniteSetReport(len(vals), vals, per)


# --------------------------------------------------------------------------
# witness formulas a_n = sum_s sum_t c_{n,s,t} n^t alpha_s^n


@dataclass(frozen=True)
class Theorem2Witness:
    """Data (d, alphas, c) describing a_n = sum_{s,t} c(n, s, t) n^t alpha_s^n.

    ``c`` is a callable on (n, s, t) with 0-based s and 0 <= t <= d.
    """

    d: int
    alphas: tuple
    c: Callable[[int, int, int], Fraction]

    @property
    def k(self) -> int:
        return len(self.alphas)

    @classmethod
    def periodic(cls, d: int, alphas: Sequence, table: Sequence) -> "Theorem2Witness":
        """c(n, s, t) = table[n mod P][s][t]."""
        tbl = tuple(tuple(tuple(rational(x) for x in row) for row in block) for block in table)
        P = len(tbl)

        def c(n, s, t, _tbl=tbl, _P=P):
            return _tbl[n % _P][s][t]

        return cls(d, tuple(alphas), c)

    def exact(self) -> bool:
        return all(isinstance(a, (int, Fraction, Cyclotomic)) for a in self.alphas)

    def term(self, n: int):
        acc = Fraction(0)
        for s, a in enumerate(self.alphas):
            coef = sum((self.c(n, s, t) * Fraction(n) ** t for t in range(self.d + 1)), Fraction(0))
            if coef:
                acc = acc + coef * _pow(a, n)
        return simplify(acc) if isinstance(acc, Cyclotomic) else acc


def _pow(a, n: int):
    if isinstance(a, int):
        a = Fraction(a)
    return a**n


def _box_pow(b: Box, n: int, bits: int) -> Box:
    out = Box.point(1)
    base = b
    while n:
        if n & 1:
            out = (out * base).rounded(bits)
        n >>= 1
        if n:
            base = (base * base).rounded(bits)
    return out


@dataclass
class Theorem2Report:
    terms: list
    beta_checked: int
    classes: list[list[int]]
    layers: list[dict]


def beta_coefficients(sys: DFiniteSystem, w: Theorem2Witness, r: int) -> list:
    """beta_{r,s} for each s, so that the coefficient of x^r in the ODE is sum_s beta_{r,s} alpha_s^r."""
    out = []
    for s, alpha in enumerate(w.alphas):
        acc = Fraction(0)
        for j, P in enumerate(sys.equations[0]):
            for (e,), p in P.terms.items():
                u = r + j - e
                if u < 0:
                    continue
                ff = falling_factorial(j, u)
                if not ff:
                    continue
                coef = sum((w.c(u, s, t) * Fraction(u) ** t for t in range(w.d + 1)), Fraction(0))
                if coef:
                    acc = acc + p * ff * coef * _pow(alpha, j - e)
        out.append(acc)
    return out


def _beta_sum_exact(betas, alphas, r):
    total = Fraction(0)
    for b, a in zip(betas, alphas):
        if b:
            total = total + b * _pow(a, r)
    return total


def _beta_sum_box(sys, w, r, prec):
    # the same sum written as sum over a_u terms, evaluated on boxes
    bits = 2 * prec
    total = Box.point(0)
    for s, alpha in enumerate(w.alphas):
        abox = algebraic_box(alpha, prec)
        for j, P in enumerate(sys.equations[0]):
            for (e,), p in P.terms.items():
                u = r + j - e
                if u < 0:
                    continue
                ff = falling_factorial(j, u)
                coef = sum((w.c(u, s, t) * Fraction(u) ** t for t in range(w.d + 1)), Fraction(0))
                if not (ff and coef):
                    continue
                q = rational(p.to_rational() if isinstance(p, Cyclotomic) else p) * ff * coef
                total = (total + _box_pow(abox, u, bits).scale(q)).rounded(bits)
    return total


def theorem2_pipeline(
    w: Theorem2Witness, sys: DFiniteSystem, T: int, tolerance: float = 1e-9
) -> Theorem2Report:
    """Check a witness formula against an ODE and rebuild its rational layers.

    (i) a_n from the formula; (ii) sum_s beta_{r,s} alpha_s^r = 0 for
    0 <= r <= T, exactly for exact alphas and by interval exclusion
    otherwise, refining each enclosure until its width is below ``tolerance``
    (BetaIdentityError names the first failing r); (iii) classes
    of alphas up to roots of unity; (iv) for each layer t the series
    g_t = sum_n (sum_s c_{n,s,t} alpha_s^n) x^n and theta^t g_t with
    theta = x d/dx, each tested for rationality by reconstruction.
    """
    if sys.m != 1:
        raise PreconditionError("the witness check is univariate")
    exact = w.exact()
    count = T + 1
    terms = [w.term(n) for n in range(count)] if exact else []
    for r in range(T + 1):
        if exact:
            total = _beta_sum_exact(beta_coefficients(sys, w, r), w.alphas, r)
            if total:
                raise BetaIdentityError(f"beta identity fails at r={r}", r)
        else:
            prec = 64
            while True:
                box = _beta_sum_box(sys, w, r, prec)
                if not box.contains_zero():
                    raise BetaIdentityError(f"beta identity fails at r={r}", r)
                if box.width() < Fraction(tolerance) or prec >= AlgebraicByMinPoly.MAX_PREC:
                    break
                prec *= 2
    classes = root_equivalence_classes(list(w.alphas))
    layers = []
    if exact:
        for t in range(w.d, -1, -1):
            g = []
            for n in range(count):
                acc = Fraction(0)
                for s, a in enumerate(w.alphas):
                    c = w.c(n, s, t)
                    if c:
                        acc = acc + c * _pow(a, n)
                g.append(simplify(acc) if isinstance(acc, Cyclotomic) else acc)
            theta = [g[n] * Fraction(n) ** t for n in range(count)]
            rg = guess_rational(g)
            rt = guess_rational(theta)
            layers.append({"t": t, "g": rg, "theta_g": rt, "g_rational": rg is not None, "theta_g_rational": rt is not None})
    return Theorem2Report(terms, T + 1, classes, layers)
