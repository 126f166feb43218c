"""Command-line front end.

Every command reads JSON, writes JSON and prints a one-line report.  With
``--output`` the payload goes to that file and the report to stdout;
without it the payload goes to stdout and the report to stderr.
Exit codes: 0 ok, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Any, Callable, Dict, Optional

from .coeff import CoefficientContext
from .errors import PadicPrepError, UsageError

COMMANDS = ("divide", "prepare", "phi-check", "trivialize", "linearize",
            "char-subgroup", "char-eval", "koszul", "window", "selftest")
NEEDS_CONTEXT = {"divide", "prepare", "phi-check", "trivialize", "linearize", "char-subgroup", "char-eval"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prime", type=int)
    common.add_argument("--precision", type=int)
    common.add_argument("--degree", type=int, default=8)
    common.add_argument("--seed", type=int)
    common.add_argument("--output")

    p = _Parser(prog="padic-prep", description="Local p-adic series toolkit")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("divide", parents=[common], help="Weierstrass division G = U*F + R")
    s.add_argument("--input", required=True)
    s.add_argument("--variant", choices=["batch", "monomial-asc", "monomial-desc"])
    s = sub.add_parser("prepare", parents=[common], help="Weierstrass preparation F = W*U")
    s.add_argument("--input", required=True)
    s = sub.add_parser("phi-check", parents=[common], help="is the ideal stable under Frobenius")
    s.add_argument("--input", required=True)
    s.add_argument("--frobenius", required=True)
    s = sub.add_parser("trivialize", parents=[common], help="unit trivialization / eigen-homogenization")
    s.add_argument("--input", required=True)
    s.add_argument("--frobenius", required=True)
    s = sub.add_parser("linearize", parents=[common], help="evaluation map of a prime phi-ideal")
    s.add_argument("--input", required=True)
    s.add_argument("--frobenius", required=True)
    s = sub.add_parser("char-subgroup", parents=[common], help="sample characters along an evaluation map")
    s.add_argument("--map", required=True)
    s.add_argument("--samples", type=int, default=8)
    s = sub.add_parser("char-eval", parents=[common], help="evaluate an ideal at characters")
    s.add_argument("--ideal", required=True)
    s.add_argument("--char", required=True)
    s = sub.add_parser("koszul", parents=[common], help="Koszul complex and its reduction")
    s.add_argument("--n", type=int, required=True)
    s = sub.add_parser("window", parents=[common], help="cohomology window check for a complex")
    s.add_argument("--input", required=True)
    sub.add_parser("selftest", parents=[common], help="run the built-in invariant suite")
    return p


def parse_request(argv) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if args.command in NEEDS_CONTEXT:
        missing = [f"--{f}" for f in ("prime", "precision") if getattr(args, f) is None]
        if missing:
            raise UsageError(f"{args.command}: missing required flag(s): {', '.join(missing)}")
        try:
            args.ctx = CoefficientContext(args.prime, args.precision, args.degree)
        except ValueError as e:
            raise UsageError(str(e))
    else:
        args.ctx = None
    if args.seed is None:
        env = os.environ.get("PADIC_PREP_SEED")
        try:
            args.seed = int(env) if env else 0
        except ValueError:
            raise UsageError("PADIC_PREP_SEED must be an integer")
    return args


def _load(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}")


def _series(obj, ctx, job: dict, default_coords="t"):
    from .series import MultiSeries

    if isinstance(obj, str):
        if "nvars" not in job:
            raise UsageError("string series need 'nvars' in the job")
        return MultiSeries.parse(obj, ctx, int(job["nvars"]), job.get("coords", default_coords))
    return MultiSeries.from_json(obj, ctx)


def _max_loss(payload) -> int:
    best = 0
    stack = [payload]
    while stack:
        x = stack.pop()
        if isinstance(x, dict):
            if "loss" in x and isinstance(x["loss"], int) and "u" in x:
                best = max(best, x["loss"])
            stack.extend(x.values())
        elif isinstance(x, list):
            stack.extend(x)
    return best


# -- commands ---------------------------------------------------------------

def cmd_divide(args) -> dict:
    from .weierstrass import weierstrass_divide

    job = _load(args.input)
    F = _series(job["F"], args.ctx, job)
    G = _series(job["G"], args.ctx, job)
    res = weierstrass_divide(G, F, args.variant or job.get("variant", "batch"))
    return res.to_json()


def cmd_prepare(args) -> dict:
    from .weierstrass import weierstrass_prepare

    job = _load(args.input)
    return weierstrass_prepare(_series(job["F"], args.ctx, job)).to_json()


def _ideal(path, ctx):
    from .ideal import IdealPresentation

    return IdealPresentation.from_json(_load(path), ctx)


def _frob(path):
    from .frobenius import FrobeniusAction

    return FrobeniusAction.from_json(_load(path))


def cmd_phi_check(args) -> dict:
    from .frobenius import is_phi_stable

    I = _ideal(args.input, args.ctx)
    return {"stable": is_phi_stable(I, _frob(args.frobenius))}


def cmd_trivialize(args) -> dict:
    from .frobenius import homogenize_eigen, trivialization_loss, trivialize_unit

    job = _load(args.input)
    phi = _frob(args.frobenius)
    if "f" in job:
        return homogenize_eigen(_series(job["f"], args.ctx, job, "x"), phi).to_json()
    if "u" not in job:
        raise UsageError("trivialize job needs 'u' (unit) or 'f' (eigen generator)")
    c, h = trivialize_unit(_series(job["u"], args.ctx, job, "x"), phi)
    return {"c": c.to_json(), "h": h.to_json(), "loss": trivialization_loss(phi, args.ctx)}


def cmd_linearize(args) -> dict:
    from .ideal import IdealPresentation
    from .linearize import linearize_phi_ideal, verify_evaluation
    from .series import X, change_coords

    I = _ideal(args.input, args.ctx)
    if I.coords != X:
        gens = tuple(change_coords(g, X) for g in I.generators)
        I = IdealPresentation(gens, I.nvars, X, I.flavor, False, I.prime)
    pi = linearize_phi_ideal(I, _frob(args.frobenius))
    out = pi.to_json()
    out["verified"] = verify_evaluation(I, pi)
    return out


def cmd_char_subgroup(args) -> dict:
    from .characters import char_from_line, sample_line_parameters
    from .linearize import EvaluationMap

    pi = EvaluationMap.from_json(_load(args.map), args.ctx)
    xs = sample_line_parameters(pi, args.samples, args.seed)
    return {"samples": [{"x": x.to_json(), "character": char_from_line(pi, x).to_json()} for x in xs]}


def cmd_char_eval(args) -> dict:
    from .characters import Character, eval_ideal_at_char

    I = _ideal(args.ideal, args.ctx)
    data = _load(args.char)
    chars = [s["character"] for s in data["samples"]] if "samples" in data else [data]
    results = []
    for d in chars:
        vals = eval_ideal_at_char(I, Character.from_json(d, args.ctx))
        results.append({"values": [v.to_json() for v in vals], "vanishes": all(v.is_zero() for v in vals)})
    return {"results": results, "all_vanish": all(r["vanishes"] for r in results)}


def cmd_koszul(args) -> dict:
    from .homology import koszul_complex, reduce_and_cohomology

    if args.n < 1:
        raise UsageError("--n must be positive")
    K = koszul_complex(args.n)
    return {"complex": K.to_json(), "reduced_cohomology": reduce_and_cohomology(K).to_json()}


def cmd_window(args) -> dict:
    from .homology import FreeComplex, check_window

    try:
        Q = FreeComplex.from_json(_load(args.input))
    except (KeyError, ValueError, TypeError) as e:
        raise UsageError(f"invalid complex: {e}")
    return check_window(Q)


def cmd_selftest(args) -> dict:
    from .selftest import run_selftest

    return run_selftest(args.seed)


DISPATCH: Dict[str, Callable] = {
    "divide": cmd_divide,
    "prepare": cmd_prepare,
    "phi-check": cmd_phi_check,
    "trivialize": cmd_trivialize,
    "linearize": cmd_linearize,
    "char-subgroup": cmd_char_subgroup,
    "char-eval": cmd_char_eval,
    "koszul": cmd_koszul,
    "window": cmd_window,
    "selftest": cmd_selftest,
}


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def run_request(args) -> int:
    start = time.perf_counter()
    report: Dict[str, Any] = {"command": args.command}
    try:
        payload = DISPATCH[args.command](args)
    except UsageError as e:
        report.update(status="error", error_code=e.code, message=str(e))
        print(json.dumps(report, sort_keys=True), file=sys.stderr)
        return 2
    except PadicPrepError as e:
        report.update(status="error", error_code=e.code, message=str(e))
        print(json.dumps(report, sort_keys=True), file=sys.stderr if not args.output else sys.stdout)
        return 1
    except (KeyError, ValueError, TypeError) as e:
        report.update(status="error", error_code="InvalidInput", message=str(e))
        print(json.dumps(report, sort_keys=True), file=sys.stderr if not args.output else sys.stdout)
        return 1
    text = dumps(payload)
    report.update(status="ok", error_code=None, precision_loss=_max_loss(payload),
                  elapsed=round(time.perf_counter() - start, 4))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        report["payload"] = args.output
        print(json.dumps(report, sort_keys=True))
    else:
        sys.stdout.write(text)
        print(json.dumps(report, sort_keys=True), file=sys.stderr)
    if args.command == "selftest" and not payload.get("ok", False):
        return 1
    return 0


def main(argv: Optional[list] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_request(argv)
    except UsageError as e:
        print(f"padic-prep: error: {e}", file=sys.stderr)
        print(json.dumps({"status": "error", "error_code": e.code, "message": str(e)}), file=sys.stderr)
        return 2
    return run_request(args)


if __name__ == "__main__":
    sys.exit(main())
