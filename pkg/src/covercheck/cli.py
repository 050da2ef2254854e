"""``cover-check``: run one analysis on a problem file.

Exit codes: 0 when the command ran (whatever the verdict), 1 for input
errors, 2 when an internal limit (timeout, separating-form budget) was hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import signal
import sys
import time
from fractions import Fraction

from .ideal import Ideal, saturate
from .morphism import (MorphismPresentation, NoSeparatingFormError, NotFiniteError,
                       NotZeroDimensionalError, PointOffBaseError, covering_verdict,
                       finiteness_witnesses, fiber_algebra, analyze_zero_dim, is_etale,
                       is_finite, is_finite_flat, jacobian_ideal, non_etale_locus,
                       non_finite_locus, non_flat_locus)
from .poly import Polynomial, StructuralError, format_poly
from .problem import ProblemFile, ProblemSyntaxError, parse_problem

COMMANDS = ("gb", "is-finite", "non-finite-locus", "is-flat", "non-flat-locus",
            "is-etale", "non-etale-locus", "covering", "fiber")


class InputError(Exception):
    pass


class LimitReached(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgParser(prog="cover-check",
                    description="Finite / flat / étale tests and covering verdicts for "
                                "projections of affine varieties.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", help="problem file (fiber:, base:, ideal: sections)")
    ap.add_argument("--json", action="store_true", help="emit one JSON object")
    ap.add_argument("--point", help="named point from the file, or inline 'y1=3,y2=6'")
    ap.add_argument("--form", help="linear form for the fiber command, e.g. '1,2'")
    ap.add_argument("--assume-reduced", action="store_true",
                    help="treat the presentation as reduced (covering)")
    ap.add_argument("--timeout-seconds", type=int, default=0, metavar="N")
    ap.add_argument("--order", help="block orders as lex|grevlex[,lex|grevlex]")
    return ap


# ------------------------------------------------------------- helpers

def _polys(gens) -> list[str]:
    return [format_poly(g) for g in gens]


def _ideal(I: Ideal, M: MorphismPresentation) -> list[str]:
    return _polys(I.groebner_basis(M.order).elements)


def _mono(m, M: MorphismPresentation) -> str:
    return format_poly(Polynomial(M.vars, {tuple(m): Fraction(1)}))


def _frac(q: Fraction) -> str:
    return str(q)


def _order_arg(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2 or any(p not in ("lex", "grevlex") for p in parts):
        raise InputError(f"--order expects lex|grevlex[,lex|grevlex], got {text!r}")
    return parts[0], parts[1]


def _point_arg(problem: ProblemFile, arg: str | None) -> tuple[str, dict]:
    if arg is None:
        raise InputError("the fiber command needs --point <name>")
    if arg in problem.points:
        return arg, problem.points[arg]
    if "=" in arg:
        text = "fiber: _f\nbase: " + " ".join(problem.base) + "\nideal: 0\npoint inline: " + arg
        try:
            return arg, parse_problem(text).points["inline"]
        except ProblemSyntaxError as e:
            raise InputError(f"bad inline point {arg!r}: {e.message}") from None
    known = ", ".join(problem.points) or "none"
    raise InputError(f"unknown point {arg!r} (points in file: {known})")


def _form_arg(text: str | None):
    if text is None:
        return None
    try:
        return tuple(Fraction(p.strip()) for p in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--form expects comma-separated rationals, got {text!r}") from None


def load_presentation(problem: ProblemFile, orders=None) -> MorphismPresentation:
    orders = orders or problem.orders
    vars = problem.vars
    gens = problem.ideal
    if problem.saturate:
        gens = list(saturate(Ideal(vars, gens), Ideal(vars, problem.saturate)).canonical())
    return MorphismPresentation(vars, gens, orders)


# ------------------------------------------------------------ commands

def cmd_gb(M, problem, args):
    cert = {"order": f"block({M.order_names[0]}, {M.order_names[1]})",
            "groebner_basis": _polys(M.G),
            "base_ideal": _polys(M.G_y)}
    return None, cert


def cmd_is_finite(M, problem, args):
    found = finiteness_witnesses(M)
    ok, fc = is_finite(M)
    witnesses = {v: {"element": format_poly(g), "exponent": g.lm(M.order)[M.vars.index(v)]}
                 for v, g in found.items() if g is not None}
    lms = ", ".join(_mono(m, M) for m in M.gb.leading_monomials())
    missing = {v: f"no Gröbner basis element has a leading monomial that is a power of {v} "
                  f"(leading monomials: {lms})"
               for v, g in found.items() if g is None}
    return ok, {"witnesses": witnesses, "missing": missing}


def _locus(M, I):
    empty = I.groebner_basis(M.order).is_unit()
    return ("EMPTY" if empty else "NONEMPTY"), {"locus": _ideal(I, M)}


def cmd_non_finite_locus(M, problem, args):
    return _locus(M, non_finite_locus(M))


def _flat_cert(M, res):
    if res.matrix is None:
        return {"finite": False}
    return {"finite": True,
            "monomial_basis": [_mono(m, M) for m in res.basis],
            "relations": _polys(res.relations),
            "presentation_matrix": [_polys(r) for r in res.matrix.to_rows()],
            "fitting_ideals": [_ideal(F, M) for F in res.fitting],
            "flatness_ideal": _ideal(res.F, M)}


def cmd_is_flat(M, problem, args):
    res = is_finite_flat(M)
    return res.flat, _flat_cert(M, res)


def cmd_non_flat_locus(M, problem, args):
    return _locus(M, non_flat_locus(M))


def cmd_is_etale(M, problem, args):
    flat = is_finite_flat(M).flat
    cert = {"finite_flat": flat}
    if is_finite(M)[0]:
        cert["jacobian_ideal"] = _ideal(jacobian_ideal(M), M)
    return is_etale(M), cert


def cmd_non_etale_locus(M, problem, args):
    return _locus(M, non_etale_locus(M))


def cmd_covering(M, problem, args):
    radical = None
    if problem.radical is not None:
        radical = MorphismPresentation(M.vars, problem.radical, M.order_names)
    v = covering_verdict(M, assume_reduced=args.assume_reduced, radical=radical)
    cert = {"finite": v.finite, "flat": v.flat, "etale": v.etale,
            "certified_on": v.certified_on, "note": v.note,
            "groebner_basis": _polys(M.G),
            "loci": {k: _ideal(I, M) for k, I in v.loci.items()}}
    return v.verdict.value, cert


def cmd_fiber(M, problem, args):
    name, point = _point_arg(problem, args.point)
    alg = fiber_algebra(M, point)
    rep = analyze_zero_dim(alg, _form_arg(args.form), point)
    fvars = alg.vars
    cert = {"point": {k: _frac(q) for k, q in point.items()},
            "point_name": name,
            "fiber_ideal": _polys(alg.gb.elements),
            "fiber_basis": [format_poly(Polynomial(fvars, {m: Fraction(1)})) for m in alg.basis],
            "separating_form": None if rep.separating_form is None
            else [_frac(Fraction(u)) for u in rep.separating_form],
            "charpoly": None if rep.charpoly is None else format_poly(rep.charpoly),
            "squarefree_part": None if rep.squarefree is None else format_poly(rep.squarefree),
            "gcd_degree": rep.gcd_degree}
    return {"length": rep.length, "distinct": rep.distinct, "real": rep.real}, cert


HANDLERS = {"gb": cmd_gb, "is-finite": cmd_is_finite, "non-finite-locus": cmd_non_finite_locus,
            "is-flat": cmd_is_flat, "non-flat-locus": cmd_non_flat_locus,
            "is-etale": cmd_is_etale, "non-etale-locus": cmd_non_etale_locus,
            "covering": cmd_covering, "fiber": cmd_fiber}


# ------------------------------------------------------------- output

def _value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    return str(v)


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}", f"input: {report['input']['file']}"]
    verdict = report["verdict"]
    if isinstance(verdict, dict):
        lines.append("verdict: " + "  ".join(f"{k}={v}" for k, v in verdict.items()))
    elif verdict is not None:
        lines.append(f"verdict: {_value(verdict)}")

    def emit(key, val, indent):
        pad = "  " * indent
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            for k, v in val.items():
                emit(k, v, indent + 1)
        elif isinstance(val, list):
            if val and isinstance(val[0], list):
                lines.append(f"{pad}{key}:")
                for i, row in enumerate(val):
                    lines.append(f"{pad}  [{i}] " + ("<" + ", ".join(row) + ">" if row else "<0>"))
            else:
                lines.append(f"{pad}{key} ({len(val)}):")
                lines.extend(f"{pad}  {x}" for x in val)
        else:
            lines.append(f"{pad}{key}: {_value(val)}")

    for k, v in report["certificates"].items():
        emit(k, v, 0)
    lines.append(f"time: {report['timing']['seconds']:.3f}s")
    return "\n".join(lines)


def _on_alarm(signum, frame):
    raise LimitReached("timeout")


def run(args) -> dict:
    try:
        with open(args.file, "rb") as fh:
            raw = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {args.file}: {e.strerror}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise InputError(f"{args.file} is not UTF-8") from None
    problem = parse_problem(text)
    orders = _order_arg(args.order) if args.order else None
    start = time.perf_counter()
    M = load_presentation(problem, orders)
    verdict, cert = HANDLERS[args.command](M, problem, args)
    elapsed = time.perf_counter() - start
    options = {"assume_reduced": args.assume_reduced, "order": list(M.order_names),
               "point": args.point, "form": args.form}
    return {"command": args.command,
            "input": {"file": os.path.basename(args.file),
                      "sha256": hashlib.sha256(raw).hexdigest()},
            "options": options,
            "verdict": verdict,
            "certificates": cert,
            "timing": {"seconds": round(elapsed, 6)}}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.timeout_seconds < 0:
        print("cover-check: error: --timeout-seconds must be non-negative", file=sys.stderr)
        return 1
    if args.timeout_seconds:
        signal.signal(signal.SIGALRM, _on_alarm)
        signal.alarm(args.timeout_seconds)
    try:
        report = run(args)
    except (InputError, ProblemSyntaxError, StructuralError, NotFiniteError,
            PointOffBaseError, NotZeroDimensionalError) as e:
        print(f"cover-check: error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        # radical presentation that does not match the input, and similar
        print(f"cover-check: error: {e}", file=sys.stderr)
        return 1
    except (LimitReached, NoSeparatingFormError, RecursionError, MemoryError) as e:
        print(f"cover-check: limit reached: {e or type(e).__name__}", file=sys.stderr)
        return 2
    finally:
        if args.timeout_seconds:
            signal.alarm(0)
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print(render_text(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
