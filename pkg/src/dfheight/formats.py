"""JSON encodings of scalars, polynomials, series, systems, recurrences and
reports.

Parsers raise :class:`FormatError` naming the path of the first offending
field (for example ``equations[0][1][2]``).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .certify import (
    CertificationReport,
    DenominatorFormReport,
    EffectiveBounds,
    HeightProfile,
    PRecurrence,
    Theorem2Report,
    Theorem2Witness,
)
from .dseries import DFiniteSystem, Polynomial, RationalFunction, TruncatedSeries
from .errors import FormatError, PreconditionError
from .exactnum import AlgebraicByMinPoly, Cyclotomic, euler_phi
from .lrs import ClosedForm, ConstRecurrence, RootsOfUnityReport

# --------------------------------------------------------------------------
# scalars


def _rational(v, path: str) -> Fraction:
    if isinstance(v, bool):
        raise FormatError(path, "booleans are not numbers")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise FormatError(path, f"not a rational 'p/q': {v!r}") from None
    if isinstance(v, float):
        raise FormatError(path, "floats are not exact; write rationals as \"p/q\"")
    raise FormatError(path, f"expected a rational, got {type(v).__name__}")


def parse_scalar(v, path: str = "value"):
    if isinstance(v, dict):
        if "order" in v or "coords" in v:
            order = _int(v.get("order"), f"{path}.order", minimum=1)
            coords = v.get("coords")
            if not isinstance(coords, list):
                raise FormatError(f"{path}.coords", "expected a list")
            if len(coords) != euler_phi(order):
                raise FormatError(f"{path}.coords", f"expected {euler_phi(order)} coordinates for order {order}")
            return Cyclotomic(order, [_rational(c, f"{path}.coords[{i}]") for i, c in enumerate(coords)])
        if "minpoly" in v or "box" in v:
            mp = v.get("minpoly")
            box = v.get("box")
            if not isinstance(mp, list) or len(mp) < 2:
                raise FormatError(f"{path}.minpoly", "expected a list of at least two integers")
            ints = [_int(c, f"{path}.minpoly[{i}]") for i, c in enumerate(mp)]
            if not isinstance(box, list) or len(box) != 4:
                raise FormatError(f"{path}.box", "expected [re_lo, re_hi, im_lo, im_hi]")
            b = [_rational(x, f"{path}.box[{i}]") for i, x in enumerate(box)]
            try:
                return AlgebraicByMinPoly(tuple(ints), tuple(b))
            except PreconditionError as e:
                raise FormatError(path, str(e)) from None
        raise FormatError(path, "unknown scalar object (expected order/coords or minpoly/box)")
    return _rational(v, path)


def dump_scalar(x) -> Any:
    if isinstance(x, Cyclotomic):
        x = x.canonical()
        if x.is_rational():
            return str(x.to_rational())
        return {"order": x.order, "coords": [str(c) for c in x.coords]}
    if isinstance(x, AlgebraicByMinPoly):
        return {"minpoly": list(x.minpoly), "box": [str(b) for b in x.box]}
    return str(Fraction(x))


def _int(v, path: str, minimum: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(path, "expected an integer")
    if minimum is not None and v < minimum:
        raise FormatError(path, f"must be >= {minimum}")
    return v


def _obj(v, path: str) -> dict:
    if not isinstance(v, dict):
        raise FormatError(path, "expected an object")
    return v


def _list(v, path: str) -> list:
    if not isinstance(v, list):
        raise FormatError(path, "expected a list")
    return v


# --------------------------------------------------------------------------
# polynomials, series, systems


def _index(v, m: int | None, path: str) -> tuple:
    if isinstance(v, int) and not isinstance(v, bool) and (m is None or m == 1):
        v = [v]
    idx = _list(v, path)
    out = tuple(_int(e, f"{path}[{i}]", minimum=0) for i, e in enumerate(idx))
    if m is not None and len(out) != m:
        raise FormatError(path, f"expected {m} exponents")
    return out


def parse_polynomial(v, m: int | None = None, path: str = "poly") -> Polynomial:
    """A polynomial is a list of [index, scalar] pairs."""
    terms = []
    for i, item in enumerate(_list(v, path)):
        p = f"{path}[{i}]"
        if not isinstance(item, list) or len(item) != 2:
            raise FormatError(p, "expected [index, scalar]")
        idx = _index(item[0], m, f"{p}[0]")
        if m is None:
            m = len(idx)
        terms.append((idx, parse_scalar(item[1], f"{p}[1]")))
    if m is None:
        raise FormatError(path, "cannot infer the variable count of an empty polynomial")
    return Polynomial(m, terms)


def dump_polynomial(p: Polynomial) -> list:
    return [[list(k), dump_scalar(c)] for k, c in sorted(p.terms.items())]


def parse_series(v, path: str = "series") -> TruncatedSeries:
    d = _obj(v, path)
    m = _int(d.get("m"), f"{path}.m", minimum=0)
    T = _int(d.get("T"), f"{path}.T", minimum=0)
    coeffs = []
    for i, item in enumerate(_list(d.get("coeffs"), f"{path}.coeffs")):
        p = f"{path}.coeffs[{i}]"
        item = _obj(item, p)
        idx = _index(item.get("idx"), m, f"{p}.idx")
        if sum(idx) > T:
            raise FormatError(f"{p}.idx", f"total degree exceeds T={T}")
        coeffs.append((idx, parse_scalar(item.get("val"), f"{p}.val")))
    return TruncatedSeries(m, T, coeffs)


def dump_series(s: TruncatedSeries) -> dict:
    return {
        "m": s.m,
        "T": s.T,
        "coeffs": [{"idx": list(k), "val": dump_scalar(c)} for k, c in sorted(s.coeffs.items())],
    }


def parse_system(v, path: str = "system") -> DFiniteSystem:
    d = _obj(v, path)
    m = _int(d.get("m"), f"{path}.m" if path != "system" else "m", minimum=1)
    eqs_path = "equations" if path == "system" else f"{path}.equations"
    eqs = _list(d.get("equations"), eqs_path)
    if len(eqs) != m:
        raise FormatError(eqs_path, f"expected {m} equations")
    parsed = []
    for i, eq in enumerate(eqs):
        polys = [parse_polynomial(p, m, f"{eqs_path}[{i}][{j}]") for j, p in enumerate(_list(eq, f"{eqs_path}[{i}]"))]
        if not any(not p.is_zero() for p in polys):
            raise FormatError(f"{eqs_path}[{i}]", "all coefficient polynomials are zero")
        parsed.append(polys)
    return DFiniteSystem(m, parsed)


def dump_system(sys: DFiniteSystem) -> dict:
    return {"m": sys.m, "equations": [[dump_polynomial(p) for p in eq] for eq in sys.equations]}


def parse_ratfun(v, path: str = "ratfun") -> RationalFunction:
    d = _obj(v, path)
    pre = "" if path == "ratfun" else f"{path}."
    num = parse_polynomial(d.get("num"), None, f"{pre}num")
    den = parse_polynomial(d.get("den"), num.m, f"{pre}den")
    if den.is_zero():
        raise FormatError(f"{pre}den", "zero denominator")
    return RationalFunction(num, den)


def dump_ratfun(f: RationalFunction) -> dict:
    return {"num": dump_polynomial(f.num), "den": dump_polynomial(f.den)}


def _scalar_list(v, path: str) -> list:
    return [parse_scalar(x, f"{path}[{i}]") for i, x in enumerate(_list(v, path))]


def parse_const_recurrence(v, path: str = "recurrence") -> ConstRecurrence:
    d = _obj(v, path)
    pre = "" if path == "recurrence" else f"{path}."
    char = _scalar_list(d.get("char_poly"), f"{pre}char_poly")
    initial = _scalar_list(d.get("initial"), f"{pre}initial")
    offset = _int(d.get("offset", 0), f"{pre}offset", minimum=0)
    prefix = _scalar_list(d.get("prefix", [0] * offset), f"{pre}prefix")
    try:
        return ConstRecurrence(tuple(char), tuple(initial), offset, tuple(prefix))
    except PreconditionError as e:
        raise FormatError(f"{pre}char_poly", str(e)) from None


def dump_const_recurrence(r: ConstRecurrence) -> dict:
    out = {
        "char_poly": [dump_scalar(c) for c in r.char_poly],
        "initial": [dump_scalar(c) for c in r.initial],
        "offset": r.offset,
    }
    if r.prefix:
        out["prefix"] = [dump_scalar(c) for c in r.prefix]
    return out


def dump_closed_form(cf: ClosedForm) -> dict:
    return {
        "terms": [{"root": dump_scalar(r), "poly": [dump_scalar(c) for c in p]} for r, p in cf.terms],
        "offset": cf.offset,
    }


def dump_p_recurrence(r: PRecurrence) -> dict:
    return {"order": r.order, "coeffs": [[str(c) for c in R] for R in r.coeffs], "offset": r.offset}


def parse_p_recurrence(v, path: str = "recurrence") -> PRecurrence:
    d = _obj(v, path)
    coeffs = _list(d.get("coeffs"), "coeffs")
    parsed = []
    for i, R in enumerate(coeffs):
        parsed.append(tuple(_rational(c, f"coeffs[{i}][{j}]") for j, c in enumerate(_list(R, f"coeffs[{i}]"))))
    if not parsed or not any(parsed[-1]):
        raise FormatError("coeffs", "leading coefficient polynomial must be nonzero")
    return PRecurrence(tuple(parsed), _int(d.get("offset", 0), "offset", minimum=0))


def parse_seeds(v, path: str = "seeds") -> dict[int, Fraction]:
    if v is None:
        return {}
    if isinstance(v, list):
        return {i: _rational(x, f"{path}[{i}]") for i, x in enumerate(v)}
    if isinstance(v, dict):
        out = {}
        for k, x in v.items():
            try:
                idx = int(k)
            except ValueError:
                raise FormatError(f"{path}.{k}", "seed keys must be integer indices") from None
            out[idx] = _rational(x, f"{path}.{k}")
        return out
    raise FormatError(path, "expected a list or an index->value object")


def parse_witness(v, path: str = "witness") -> Theorem2Witness:
    d = _obj(v, path)
    deg = _int(d.get("d"), f"{path}.d", minimum=0)
    alphas = _scalar_list(d.get("alphas"), f"{path}.alphas")
    if not alphas:
        raise FormatError(f"{path}.alphas", "need at least one alpha")
    c = _obj(d.get("c"), f"{path}.c")
    period = _int(c.get("period"), f"{path}.c.period", minimum=1)
    table = _list(c.get("table"), f"{path}.c.table")
    if len(table) != period:
        raise FormatError(f"{path}.c.table", f"expected {period} rows")
    rows = []
    for n, block in enumerate(table):
        block = _list(block, f"{path}.c.table[{n}]")
        if len(block) != len(alphas):
            raise FormatError(f"{path}.c.table[{n}]", f"expected {len(alphas)} entries (one per alpha)")
        rows.append(
            [
                [_rational(x, f"{path}.c.table[{n}][{s}][{t}]") for t, x in enumerate(_list(r, f"{path}.c.table[{n}][{s}]"))]
                for s, r in enumerate(block)
            ]
        )
        for s, r in enumerate(rows[-1]):
            if len(r) != deg + 1:
                raise FormatError(f"{path}.c.table[{n}][{s}]", f"expected d+1 = {deg + 1} values")
    return Theorem2Witness.periodic(deg, alphas, rows)


# --------------------------------------------------------------------------
# reports


def dump_bounds(b: EffectiveBounds) -> dict:
    return {
        "delta": float(b.delta),
        "delta_exact": str(b.delta),
        "eta": b.eta,
        "inputs": {"m": b.m, "M": b.M, "D": b.D, "d_max": b.d_max},
        "per_order": [
            {"d": d + 1, "K": K, "C2": C2, "C3": C3, "C4": C4, "C5": C5, "C6": C6, "delta": str(dl), "eta": et}
            for d, (K, C2, C3, C4, C5, C6, dl, et) in enumerate(b.per_order)
        ],
    }


def dump_certification(r: CertificationReport) -> dict:
    return {
        "verdict": r.verdict,
        "delta": float(r.delta),
        "delta_exact": str(r.delta),
        "eta": r.eta,
        "degree_budget": r.degree_budget,
        "N": r.N,
        "N_source": r.N_source,
        "T": r.T,
        "num": None if r.num is None else [dump_scalar(c) for c in r.num],
        "den": None if r.den is None else [dump_scalar(c) for c in r.den],
        "num_bound_used": r.num_bound_used,
        "den_bound_used": r.den_bound_used,
        "ode_verified": r.ode_verified,
        "conditional": r.conditional,
        "witnesses": r.witnesses,
    }


def dump_profile(p: HeightProfile) -> dict:
    sb = p.step_bound
    return {
        "T": p.T,
        "growth": p.growth,
        "property_P": p.property_P,
        "ratios": p.ratio_table(),
        "step_checks": p.step_checks,
        "step_violations": p.step_violations,
        "envelope_violations": p.envelope_violations,
        "step_envelope": None if sb is None else {"A": sb.A, "B": sb.B, "seed_height": sb.seed_height, "C": sb.C},
        "nlogn_bound_holds": p.nlogn_bound_holds,
    }


def dump_roots_report(r: RootsOfUnityReport) -> dict:
    return {
        "all_roots_of_unity": r.all_roots_of_unity,
        "orders": {str(k): v for k, v in sorted(r.orders.items())},
        "witness": None if r.witness is None else [dump_scalar(c) for c in r.witness],
    }


def dump_denominator_report(r: DenominatorFormReport) -> dict:
    return {
        "is_cyclotomic_form": r.is_cyclotomic_form,
        "scalar": dump_scalar(r.scalar),
        "factors": [
            {"zeta": dump_scalar(f.zeta), "exponent": list(f.exponent), "multiplicity": f.multiplicity}
            for f in r.factors
        ],
        "multiplicity_violation": r.multiplicity_violation,
        "remainder": None if r.remainder is None else dump_polynomial(r.remainder),
    }


def dump_theorem2(r: Theorem2Report) -> dict:
    layers = []
    for L in r.layers:
        layers.append(
            {
                "t": L["t"],
                "g_rational": L["g_rational"],
                "theta_g_rational": L["theta_g_rational"],
                "g": None if L["g"] is None else dump_ratfun(L["g"]),
                "theta_g": None if L["theta_g"] is None else dump_ratfun(L["theta_g"]),
            }
        )
    return {"beta_identity": "holds", "beta_checked": r.beta_checked, "classes": r.classes, "layers": layers}


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
