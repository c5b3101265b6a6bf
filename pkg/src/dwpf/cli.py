"""Command-line front end: compute / enumerate / verify / weights.

Complex numbers on the command line are whitespace-free ``a+bi`` strings
("1", "0.7+0.2i", "-1.5-0.3i", "2i").  All stdout payloads are JSON or
CSV per --format; numbers are printed with 17 significant digits so runs
diff bit-faithfully in CI.

Exit codes: 0 success / verification pass, 1 verification failure,
2 usage or precondition error, 3 node budget exceeded.  The environment
variable DWPF_PRECISION ("complex128" or "extended") sets the default
precision.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bracket import PRECISIONS, BracketParams
from .determinant import PFResult, fused_pf, homogeneous_pf, ik_pf, \
    semi_homogeneous_pf, spin1_pf
from .enumeration import asm_of_config, brute_force_pf, count_configs, \
    enumerate_configs
from .errors import BudgetExceeded, DWError, GenericityExhausted
from .model import spin1_table_weight, weight_table
from .errors import NotInTable
from .verify import CheckSpec, run_degree_check, run_equivalence, \
    run_homogeneous_suite, run_recursion_suite


def parse_complex(text: str) -> complex:
    """Parse an a+bi string; the imaginary unit may be written i or j."""
    cleaned = text.strip().replace("i", "j").replace("I", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise ValueError(f"cannot parse complex number from {text!r}") from None


def parse_complex_list(text: str) -> list:
    return [parse_complex(part) for part in text.split(",") if part.strip()]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _default_precision() -> str:
    env = os.environ.get("DWPF_PRECISION", "complex128")
    return env if env in PRECISIONS else "complex128"


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="dwpf",
        description="Domain-wall partition functions of spin-k/2 vertex models")
    sub = top.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--k", type=int, default=1, help="model level (spin k/2)")
        sp.add_argument("--lambda", dest="lam", type=parse_complex, default=1 + 0j,
                        metavar="A+Bi", help="crossing parameter")
        sp.add_argument("--precision", choices=PRECISIONS,
                        default=_default_precision())
        sp.add_argument("--format", choices=("json", "csv", "pretty"),
                        default="json")

    c = sub.add_parser("compute", help="one partition-function value")
    common(c)
    c.add_argument("--L", type=int, help="lattice size (default: inferred)")
    c.add_argument("--x", type=parse_complex_list, default=[],
                   metavar="X1,X2,...", help="horizontal rapidities")
    c.add_argument("--y", type=parse_complex_list, default=[],
                   metavar="Y1,Y2,...", help="vertical rapidities")
    c.add_argument("--u", type=parse_complex, default=None,
                   help="rapidity difference for --method homogeneous")
    c.add_argument("--method", default="determinant",
                   choices=("determinant", "ik", "fused", "spin1", "bruteforce",
                            "semi-homogeneous", "homogeneous"))
    c.add_argument("--weights", default="auto",
                   choices=("auto", "six_vertex", "fused", "spin1_table", "ones"),
                   help="weight source for --method bruteforce")
    c.add_argument("--budget", type=int, default=None,
                   help="node budget for the exhaustive method")

    e = sub.add_parser("enumerate", help="stream DW configurations")
    e.add_argument("--k", type=int, default=1)
    e.add_argument("--L", type=int, required=True)
    e.add_argument("--count-only", action="store_true",
                   help="print just the number of configurations")
    e.add_argument("--asm", action="store_true",
                   help="dump the matrix image of each configuration as CSV")
    e.add_argument("--budget", type=int, default=None)

    v = sub.add_parser("verify", help="run a cross-check suite")
    common(v)
    v.add_argument("--suite", required=True,
                   choices=("equivalence", "recursion", "degree",
                            "homogeneous", "all"))
    v.add_argument("--L", type=int, default=2)
    v.add_argument("--draws", type=int, default=5)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=None,
                   help="relative tolerance (default depends on the suite)")

    w = sub.add_parser("weights", help="dump the fused vertex-weight table")
    common(w)
    w.add_argument("--u", type=parse_complex, required=True,
                   help="rapidity difference u = -x + y")
    w.add_argument("--compare-table", action="store_true",
                   help="also print the closed-form spin-1 weights and deltas")
    return top


# --- compute ------------------------------------------------------------------

def _compute_result(args) -> PFResult:
    p = BracketParams(lam=args.lam, precision=args.precision)
    k = args.k
    xs, ys = list(args.x), list(args.y)
    L = args.L if args.L is not None else max(len(xs), len(ys), 1)

    method = args.method
    if method == "determinant":
        method = "ik" if k == 1 else "fused"

    if method == "homogeneous":
        u = args.u
        if u is None:
            if len(xs) == 1 and len(ys) == 1:
                u = -xs[0] + ys[0]
            else:
                raise ValueError("--method homogeneous needs --u (or one x and one y)")
        return homogeneous_pf(p, k, L, u)
    if method == "semi-homogeneous":
        if len(xs) != 1:
            raise ValueError("--method semi-homogeneous needs exactly one --x value")
        if len(ys) != L:
            raise ValueError(f"need {L} vertical rapidities, got {len(ys)}")
        return semi_homogeneous_pf(p, k, xs[0], ys)

    if len(xs) != L or len(ys) != L:
        raise ValueError(f"need {L} rapidities in both --x and --y "
                         f"(got {len(xs)} and {len(ys)})")
    if method == "ik":
        if k != 1:
            raise ValueError("--method ik requires --k 1")
        return ik_pf(p, xs, ys)
    if method == "fused":
        return fused_pf(p, k, xs, ys)
    if method == "spin1":
        if k != 2:
            raise ValueError("--method spin1 requires --k 2")
        return spin1_pf(p, xs, ys)
    if method == "bruteforce":
        value = brute_force_pf(p, k, L, xs, ys, weights=args.weights,
                               budget=args.budget)
        return PFResult(value, "brute_force", k, L, p.lam, tuple(xs), tuple(ys), 1.0)
    raise ValueError(f"unhandled method {method!r}")


def _print_pf(res: PFResult, fmt: str):
    d = res.to_dict()
    if fmt == "json":
        print(json.dumps(d))
    elif fmt == "csv":
        keys = ["value_re", "value_im", "method", "k", "L",
                "lambda", "xs", "ys", "condition_estimate"]
        flat = {
            "value_re": _fmt(d["value_re"]), "value_im": _fmt(d["value_im"]),
            "method": d["method"], "k": d["k"], "L": d["L"],
            "lambda": _cpx_str(d["lambda"]),
            "xs": ";".join(_cpx_str(v) for v in d["xs"]),
            "ys": ";".join(_cpx_str(v) for v in d["ys"]),
            "condition_estimate": _fmt(d["condition_estimate"]),
        }
        print(",".join(keys))
        print(",".join(str(flat[key]) for key in keys))
    else:
        print(f"method              {d['method']}")
        print(f"k, L                {d['k']}, {d['L']}")
        print(f"lambda              {_cpx_str(d['lambda'])}")
        print(f"value               {_fmt(d['value_re'])} {_fmt(d['value_im'])}i")
        print(f"condition estimate  {_fmt(d['condition_estimate'])}")


def _cpx_str(pair) -> str:
    re, im = pair
    return f"{_fmt(re)}{'+' if im >= 0 else '-'}{_fmt(abs(im))}i"


# --- enumerate ------------------------------------------------------------------

def _cmd_enumerate(args) -> int:
    if args.count_only:
        print(count_configs(args.k, args.L, budget=args.budget))
        return 0
    if args.asm:
        print("config,row," + ",".join(f"c{j}" for j in range(args.L)))
        for idx, config in enumerate(enumerate_configs(args.k, args.L,
                                                       budget=args.budget)):
            matrix = asm_of_config(config)
            for i, row in enumerate(matrix.entries):
                print(f"{idx},{i}," + ",".join(str(e) for e in row))
        return 0
    for config in enumerate_configs(args.k, args.L, budget=args.budget):
        print(json.dumps(config.to_dict()))
    return 0


# --- verify ---------------------------------------------------------------------

_SUITE_TOL = {"equivalence": 1e-8, "recursion": 1e-9,
              "degree": 1e-8, "homogeneous": 1e-6}


def _cmd_verify(args) -> int:
    reports = []

    def spec(name, ks, Ls, tol):
        return CheckSpec(name=name, ks=ks, Ls=Ls, draws=args.draws,
                         seed=args.seed, tolerance=args.tol or tol,
                         precision=args.precision)

    suites = [args.suite] if args.suite != "all" else \
        ["equivalence"] + (["recursion", "degree"] if args.k == 2 else []) + \
        ["homogeneous"]
    for name in suites:
        if name == "equivalence":
            s = spec("equivalence", args.k, args.L, _SUITE_TOL[name])
            lhs = "ik" if args.k == 1 else "fused"
            reports.append(run_equivalence(s, lhs, "brute_force"))
            if args.k == 2:
                reports.append(run_equivalence(
                    spec("equivalence_spin1", 2, args.L, _SUITE_TOL[name]),
                    "fused", "spin1"))
        elif name == "recursion":
            reports.append(run_recursion_suite(
                spec("recursion", args.k, args.L, _SUITE_TOL[name])))
        elif name == "degree":
            reports.append(run_degree_check(
                spec("degree", args.k, args.L, _SUITE_TOL[name])))
        elif name == "homogeneous":
            reports.append(run_homogeneous_suite(
                spec("homogeneous", args.k, args.L, _SUITE_TOL[name])))
    payload = [r.to_dict() for r in reports]
    if args.format == "pretty":
        for r in payload:
            worst = max((c["rel_err"] for c in r["cases"]), default=0.0)
            print(f"{r['name']:24s} {r['verdict']:4s} cases={len(r['cases'])} "
                  f"worst_rel={worst:.3e} elapsed={r['elapsed_ms']:.0f}ms")
    else:
        print(json.dumps(payload if len(payload) > 1 else payload[0]))
    return 0 if all(r.verdict for r in reports) else 1


# --- weights ---------------------------------------------------------------------

def _cmd_weights(args) -> int:
    if args.k > 3:
        raise ValueError("weight dumps are limited to k <= 3")
    p = BracketParams(lam=args.lam, precision=args.precision)
    table = weight_table(p, args.k, args.u)
    records = table.records()
    if args.compare_table:
        if args.k != 2:
            raise ValueError("--compare-table requires --k 2")
        for rec in records:
            v = (rec["alpha2"], rec["beta2"], rec["gamma2"], rec["delta2"])
            try:
                closed = complex(spin1_table_weight(p, v, args.u))
            except NotInTable:
                continue
            fused = complex(rec["weight_re"], rec["weight_im"])
            rec["closed_re"] = closed.real
            rec["closed_im"] = closed.imag
            rec["abs_delta"] = abs(fused - closed)
    if args.format == "csv":
        keys = list(records[0].keys())
        print(",".join(keys))
        for rec in records:
            print(",".join(_fmt(rec[key]) if isinstance(rec[key], float)
                           else str(rec[key]) for key in keys))
    elif args.format == "pretty":
        for rec in records:
            spins = (rec["alpha2"], rec["beta2"], rec["gamma2"], rec["delta2"])
            line = f"{str(spins):22s} {_fmt(rec['weight_re'])} {_fmt(rec['weight_im'])}i"
            if "abs_delta" in rec:
                line += f"   closed-form delta {rec['abs_delta']:.3e}"
            print(line)
    else:
        print(json.dumps(records))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compute":
            _print_pf(_compute_result(args), args.format)
            return 0
        if args.command == "enumerate":
            return _cmd_enumerate(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "weights":
            return _cmd_weights(args)
        raise ValueError(f"unknown command {args.command!r}")
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except GenericityExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DWError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
