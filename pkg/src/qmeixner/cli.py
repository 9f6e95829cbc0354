"""Command line interface.

Multi-index components and the measure index k are 1-based here, as in the
usual mathematical notation; the library itself is 0-based.

Exit codes: 0 success, 1 invalid input, 2 failed verification, 3 internal fault.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from .classical import ClassicalParams
from .errors import InvalidParams, QMeixnerError, ZeroCountMismatch
from .formulas import monic_formula_coeffs
from .index import MultiIndex
from .mop import METHODS, construct, recurrence_coeffs_oracle
from .numeric import (
    find_zeros,
    limit_contract,
    limit_study,
    limit_table_csv,
    numeric_solve_orthogonality,
)
from .scalars import DEFAULT_PRECISION
from .verify import SUITES, report_passed, run_suite
from .weights import WeightParams, factorial_moment, truncated_moment


def rational(text: str) -> Fraction:
    """An exact rational such as ``1/4`` or ``3``; decimals are refused."""
    text = text.strip()
    if any(c in text for c in ".eE"):
        raise InvalidParams(f"{text!r}: give rationals exactly, as p/q")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParams(f"cannot read {text!r} as a rational") from exc


def rational_list(text: str) -> tuple:
    return tuple(rational(t) for t in text.split(","))


def int_list(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise InvalidParams(f"cannot read {text!r} as a comma-separated list of integers") from exc


def int_range(text: str) -> range:
    """``a:b`` (inclusive) or a single integer."""
    try:
        if ":" in text:
            a, b = text.split(":")
            return range(int(a), int(b) + 1)
        return range(int(text), int(text) + 1)
    except ValueError as exc:
        raise InvalidParams(f"cannot read {text!r} as a range a:b") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", default="1/4", help="base q in (0,1), exact rational")
    common.add_argument("--alpha", default="1/3", help="comma-separated alphas in (0,1)")
    common.add_argument("--beta", default="1", help="beta > 0")
    common.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="bits")
    common.add_argument("--out", choices=("json", "csv"), default="json")
    common.add_argument("--tol", default="1e-30", help="numeric tolerance for truncated sums")

    p = _Parser(prog="qmeixner", description="q-Meixner multiple orthogonal polynomials")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="construct one polynomial")
    g.add_argument("--n", required=True, help="multi-index, e.g. 2,1")
    g.add_argument("--method", choices=METHODS, default="oracle")

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--max-order", type=int, default=4)

    r = sub.add_parser("recurrence", parents=[common], help="recurrence coefficients")
    r.add_argument("--n", required=True)
    r.add_argument("--k", type=int, required=True, help="1-based direction")

    m = sub.add_parser("moments", parents=[common], help="factorial moments")
    m.add_argument("--k", default="0:4", help="range a:b of moment orders")

    z = sub.add_parser("zeros", parents=[common], help="certified zeros")
    z.add_argument("--n", required=True)

    lim = sub.add_parser("limit", parents=[common], help="q -> 1 convergence table")
    lim.add_argument("--n", required=True)
    lim.add_argument("--k", type=int, required=True)
    lim.add_argument("--m-range", default="4:12")
    return p


def _params(args) -> WeightParams:
    return WeightParams(rational(args.q), rational_list(args.alpha), rational(args.beta))


def _index(args, r: int) -> MultiIndex:
    n = int_list(args.n)
    if len(n) != r:
        raise InvalidParams(f"--n has {len(n)} entries but there are {r} alphas")
    return MultiIndex(n)


def _direction(args, r: int) -> int:
    if not 1 <= args.k <= r:
        raise InvalidParams(f"--k must lie in 1..{r}")
    return args.k - 1


def _tol(args):
    try:
        return mpmath.mpf(args.tol)
    except (ValueError, TypeError) as exc:
        raise InvalidParams(f"bad --tol {args.tol!r}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_gen(args) -> tuple:
    params = _params(args)
    n = _index(args, params.r)
    if args.mode == "numeric":
        with mpmath.workprec(args.precision):
            poly = numeric_solve_orthogonality(params, n, _tol(args), args.precision)
            coeffs = [mpmath.nstr(c, args.precision * 3 // 10) for c in poly.coeffs]
        obj = {"n": list(n), "method": "oracle-numeric", "monic": True, "coeffs": coeffs}
        if args.out == "csv":
            return _csv(["m", "coeff"], enumerate(coeffs)), 0
        return _dump(obj), 0
    p = construct(params, n, args.method)
    obj = p.to_json()
    if args.out == "csv":
        return _csv(["m", "a", "b"], [(m, c["a"], c["b"]) for m, c in enumerate(obj["coeffs"])]), 0
    return _dump(obj), 0


def cmd_verify(args) -> tuple:
    params = _params(args)
    report = run_suite(params, args.suite, args.max_order)
    code = 0 if report_passed(report) else 2
    if args.out == "csv":
        rows = [(e["identity"], ",".join(map(str, e["n"] or [])), e["status"]) for e in report]
        return _csv(["identity", "n", "status"], rows), code
    return _dump(report), code


def cmd_recurrence(args) -> tuple:
    params = _params(args)
    n = _index(args, params.r)
    k = _direction(args, params.r)
    fb, up, fd = monic_formula_coeffs(params, n, k)
    ob, od = recurrence_coeffs_oracle(params, n, k)
    rows = [("b", str(fb), str(ob), fb == ob), ("c_ratio", str(up), "1", up == 1)]
    for i in range(params.r):
        if n[i]:
            rows.append((f"d{i + 1}", str(fd[i]), str(od[i]), fd[i] == od[i]))
    header = ["coeff", "formula", "oracle", "match"]
    if args.out == "csv":
        return _csv(header, rows), 0
    return _dump([dict(zip(header, row)) for row in rows]), 0


def cmd_moments(args) -> tuple:
    params = _params(args)
    ks = int_range(args.k)
    rows = []
    tol = _tol(args)
    for i in range(params.r):
        for k in ks:
            val, _ = truncated_moment(params, i, k, tol, args.precision)
            num = mpmath.nstr(val, 30)
            if params.exact and args.mode == "exact":
                mu = factorial_moment(params, i, k)
                rows.append((i + 1, k, str(mu.a), str(mu.b), num))
            else:
                rows.append((i + 1, k, "", "", num))
    header = ["i", "k", "exact_a", "exact_b", "numeric"]
    if args.out == "csv":
        return _csv(header, rows), 0
    return _dump([dict(zip(header, row)) for row in rows]), 0


def cmd_zeros(args) -> tuple:
    params = _params(args)
    n = _index(args, params.r)
    p = construct(params, n, "oracle")
    zeros = find_zeros(p, args.precision)
    if len(zeros) != n.norm:
        raise ZeroCountMismatch(f"{len(zeros)} zeros for |n| = {n.norm}")
    digits = args.precision * 3 // 10
    text = [mpmath.nstr(z, digits) for z in zeros]
    if args.out == "csv":
        return _csv(["j", "zero"], [(j + 1, t) for j, t in enumerate(text)]), 0
    return _dump({"n": list(n), "count": len(text), "zeros": text}), 0


def cmd_limit(args) -> tuple:
    classical = ClassicalParams(rational_list(args.alpha), rational(args.beta))
    n = _index(args, classical.r)
    k = _direction(args, classical.r)
    rows = limit_study(classical, n, k, int_range(args.m_range), args.precision)
    if args.out == "csv":
        return limit_table_csv(rows), 0
    return _dump({"rows": [dict(zip(("m", "q", "coeff_name", "q_value", "classical_value",
                                     "abs_error", "ratio"), r.as_strings())) for r in rows],
                  "contract": limit_contract(rows)}), 0


COMMANDS = {
    "gen": cmd_gen,
    "verify": cmd_verify,
    "recurrence": cmd_recurrence,
    "moments": cmd_moments,
    "zeros": cmd_zeros,
    "limit": cmd_limit,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = COMMANDS[args.command](args)
    except QMeixnerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - anything else is an internal fault
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
