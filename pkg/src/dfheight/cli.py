"""Command-line front end: ``dfheight <command> --input FILE [--output FILE] ...``.

Exit status: 0 when the analysis completed (negative verdicts included),
2 for malformed input or usage errors, 3 for unmet preconditions such as a
missing seed at a singular index.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from . import formats as fmt
from .certify import (
    certify_rational,
    denominator_form_check,
    generate_terms,
    height_profile,
    p_recurrence_from_ode,
    theorem2_pipeline,
)
from .dseries import Polynomial, RationalFunction, TruncatedSeries, substitute_monomials
from .errors import BetaIdentityError, FormatError, PreconditionError, UnsupportedFieldError
from .lrs import (
    all_roots_of_unity,
    arithmetic_progression_section,
    closed_form_cyclotomic,
    detect_periodicity,
    recurrence_from_denominator,
)

COMMANDS = (
    "recur-from-ode",
    "generate",
    "height-profile",
    "certify-rational",
    "classify-lrs",
    "denominator-check",
    "theorem2-check",
    "substitute",
)


def _parse_u(text: str) -> list[int]:
    try:
        u = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise FormatError("--u", "expected comma-separated positive integers") from None
    if not u or min(u) < 1:
        raise FormatError("--u", "expected comma-separated positive integers")
    return u


def _system_and_seeds(doc):
    d = fmt._obj(doc, "input")
    sys_ = fmt.parse_system(d)
    if sys_.m != 1:
        raise FormatError("m", "this command needs a univariate system (m = 1)")
    return sys_, fmt.parse_seeds(d.get("seeds"))


def _cmd_recur_from_ode(doc, args):
    sys_ = fmt.parse_system(doc)
    if sys_.m != 1:
        raise FormatError("m", "recur-from-ode needs a univariate system (m = 1)")
    return {"recurrence": fmt.dump_p_recurrence(p_recurrence_from_ode(sys_))}


def _cmd_generate(doc, args):
    T = args.T if args.T is not None else 20
    d = fmt._obj(doc, "input")
    if "char_poly" in d:
        rec = fmt.parse_const_recurrence(d)
        terms = rec.terms(T)
    else:
        sys_, seeds = _system_and_seeds(d)
        terms = generate_terms(p_recurrence_from_ode(sys_), seeds, T)
    return {"T": T, "terms": [fmt.dump_scalar(t) for t in terms]}


def _cmd_height_profile(doc, args):
    T = args.T if args.T is not None else 200
    sys_, seeds = _system_and_seeds(doc)
    return fmt.dump_profile(height_profile(p_recurrence_from_ode(sys_), seeds, T))


def _cmd_certify(doc, args):
    T = args.T if args.T is not None else 120
    sys_, seeds = _system_and_seeds(doc)
    N = doc.get("N")
    if N is not None:
        N = fmt._int(N, "N", minimum=0)
    rep = certify_rational(sys_, seeds, N=N, T=T)
    return fmt.dump_certification(rep)


def _cmd_classify_lrs(doc, args):
    d = fmt._obj(doc, "input")
    if "char_poly" in d:
        rec = fmt.parse_const_recurrence(d)
    else:
        f = fmt.parse_ratfun(d)
        if f.m != 1:
            raise FormatError("num", "classify-lrs needs a univariate rational function")
        rec = recurrence_from_denominator(f.den, f.num)
    T = args.T if args.T is not None else max(4 * rec.order + rec.offset, 12)
    out = {
        "recurrence": fmt.dump_const_recurrence(rec),
        "roots_of_unity": fmt.dump_roots_report(all_roots_of_unity(rec)),
    }
    try:
        out["closed_form"] = fmt.dump_closed_form(closed_form_cyclotomic(rec))
    except UnsupportedFieldError as e:
        out["closed_form"] = None
        out["closed_form_note"] = str(e)
    terms = rec.terms(T)
    per = detect_periodicity(terms) if len(terms) >= 4 else None
    out["periodicity"] = None if per is None else {"preperiod": per[0], "period": per[1], "truncation": T}
    if args.modulus is not None:
        residue = args.residue or 0
        out["section"] = fmt.dump_const_recurrence(arithmetic_progression_section(rec, args.modulus, residue))
    return out


def _cmd_denominator_check(doc, args):
    if isinstance(doc, dict) and "den" in doc:
        G = fmt.parse_ratfun(doc).den
    elif isinstance(doc, dict):
        G = fmt.parse_polynomial(doc.get("poly"), None, "poly")
    else:
        G = fmt.parse_polynomial(doc, None, "poly")
    return fmt.dump_denominator_report(denominator_form_check(G))


def _cmd_theorem2(doc, args):
    T = args.T if args.T is not None else 30
    d = fmt._obj(doc, "input")
    sys_ = fmt.parse_system(fmt._obj(d.get("system"), "system"), "system")
    w = fmt.parse_witness(d.get("witness"))
    try:
        rep = theorem2_pipeline(w, sys_, T, tolerance=args.tolerance)
    except BetaIdentityError as e:
        return {"beta_identity": "fails", "failing_r": e.r, "message": str(e)}
    return fmt.dump_theorem2(rep)


def _cmd_substitute(doc, args):
    if args.u is None:
        raise FormatError("--u", "substitute needs --u")
    u = _parse_u(args.u)
    d = fmt._obj(doc, "input")
    if "coeffs" in d:
        s = fmt.parse_series(d)
        return {"series": fmt.dump_series(substitute_monomials(s, u))}
    if "num" in d:
        f = fmt.parse_ratfun(d)
        return {"ratfun": fmt.dump_ratfun(substitute_monomials(f, u))}
    p = fmt.parse_polynomial(d.get("poly"), None, "poly")
    return {"poly": fmt.dump_polynomial(substitute_monomials(p, u))}


HANDLERS = {
    "recur-from-ode": _cmd_recur_from_ode,
    "generate": _cmd_generate,
    "height-profile": _cmd_height_profile,
    "certify-rational": _cmd_certify,
    "classify-lrs": _cmd_classify_lrs,
    "denominator-check": _cmd_denominator_check,
    "theorem2-check": _cmd_theorem2,
    "substitute": _cmd_substitute,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dfheight", description="Exact height analysis of D-finite power series.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=True, help="input JSON file ('-' for stdin)")
    p.add_argument("--output", help="report file (default: stdout)")
    p.add_argument("--T", type=int, help="truncation / number of terms")
    p.add_argument("--num-deg", type=int, help="numerator degree bound (reconstruction)")
    p.add_argument("--den-deg", type=int, help="denominator degree bound (reconstruction)")
    p.add_argument("--modulus", type=int, help="arithmetic-progression modulus")
    p.add_argument("--residue", type=int, help="arithmetic-progression residue")
    p.add_argument("--u", help="comma-separated substitution weights")
    p.add_argument("--tolerance", type=float, default=1e-9, help="target width of certified enclosures (theorem2-check with algebraic alphas)")
    p.add_argument("--meta", help="write run metadata (timing, version) to this separate file")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise FormatError("input", f"not valid JSON ({e.msg} at line {e.lineno})") from None
        if args.T is not None and args.T < 0:
            raise FormatError("--T", "must be nonnegative")
        if not args.tolerance > 0:
            raise FormatError("--tolerance", "must be positive")
        report = HANDLERS[args.command](doc, args)
        if args.num_deg is not None or args.den_deg is not None:
            report = _with_reconstruction(report, args)
    except OSError as e:
        print(f"dfheight: cannot read input: {e}", file=sys.stderr)
        return 2
    except FormatError as e:
        print(f"dfheight: malformed input: {e}", file=sys.stderr)
        return 2
    except PreconditionError as e:
        where = f" (index {e.index})" if e.index is not None else ""
        print(f"dfheight: precondition failed{where}: {e}", file=sys.stderr)
        return 3
    text = fmt.dumps(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.meta:
        meta = {"command": args.command, "version": __version__, "elapsed_seconds": time.perf_counter() - start}
        with open(args.meta, "w", encoding="utf-8") as fh:
            fh.write(fmt.dumps(meta))
    return 0


def _with_reconstruction(report: dict, args) -> dict:
    """Attach an explicit-bounds reconstruction of the generated terms, if any."""
    from .certify import rational_reconstruct

    terms = report.get("terms")
    if terms is None:
        return report
    a = args.num_deg if args.num_deg is not None else 0
    b = args.den_deg if args.den_deg is not None else 0
    vals = [Fraction(t) for t in terms]
    if len(vals) < a + b + 2:
        raise FormatError("--T", f"need at least {a + b + 2} terms for the requested degree bounds")
    rf = rational_reconstruct(vals, a, b)
    report = dict(report)
    report["reconstruction"] = None if rf is None else fmt.dump_ratfun(rf)
    return report


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
