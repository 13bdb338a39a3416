"""Command-line front end; every subcommand prints JSON (or plain text on request).

Exit codes: 0 success, 1 usage or input error, 2 failed verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import List, Optional

from .classify import SpaceClass, classify_expr, two_letter_table
from .expr import ParseError, format_expr, parse, parse_poly
from .norms import (
    QuadConfig,
    bergman_norm,
    bloch_seminorm,
    garsia_bmoa,
    hardy_norm,
    operator_matrix,
    operator_norm_trunc,
    sup_norm,
)
from .rewrite import NormalizationLimitError, evaluate_exact, normalize
from . import experiments as ex
from .series import TaylorSeries, apply_expr, parse_symbol


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _floats(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _emit(obj, args=None):
    print(json.dumps(obj, indent=2))


def _cmd_normalize(args) -> int:
    c = normalize(parse(args.expr), max_terms=args.max_terms)
    if args.json:
        print(c.dumps())
    elif args.latex:
        e = c.to_expr()
        print("0" if e is None else format_expr(e, "latex"))
    else:
        print(c)
    return 0


def _space(args) -> SpaceClass:
    if args.space == "hardy":
        return SpaceClass.hardy(args.p)
    return SpaceClass.bergman(args.alpha, args.p)


def _cmd_classify(args) -> int:
    _emit(classify_expr(parse(args.expr), _space(args)).to_json())
    return 0


def _cmd_table(args) -> int:
    sp = _space(args)
    rows = []
    for word, cl in two_letter_table(sp).items():
        rows.append(
            {
                "word": word,
                "verdict": cl.verdict,
                "power": cl.power,
                "condition": cl.bounded_iff,
                "provenance": list(cl.provenance),
            }
        )
    _emit({"space": sp.kind, "rows": rows})
    return 0


def _cmd_eval(args) -> int:
    e = parse(args.expr)
    f = parse_poly(args.f)
    if args.exact:
        if args.g is None:
            raise UsageError("--exact needs --g")
        out = evaluate_exact(e, f, parse_poly(args.g))
        _emit({"mode": "exact", "coefficients": [str(c) for c in out] or ["0"]})
        return 0
    spec = args.series if args.series is not None else args.g
    if spec is None:
        raise UsageError("give --exact with --g, or --series SPEC")
    fs = TaylorSeries([complex(c) for c in f], N=args.N, exact=False)
    out = apply_expr(e, fs, parse_symbol(spec), args.N)
    _emit({"mode": "float", "N": args.N, "coefficients": out.to_json()})
    return 0


def _cmd_norm(args) -> int:
    f = parse_symbol(args.f)
    if args.N is not None:
        f = f.series(args.N)
    cfg = QuadConfig(args.radial, args.angular, args.refine)
    lower = False
    if args.kind == "bergman":
        if args.alpha == -1:
            raise UsageError("use --kind hardy for alpha = -1")
        value = bergman_norm(f, args.alpha, args.p, cfg)
    elif args.kind == "hardy":
        value = hardy_norm(f, args.p, args.angular if args.N is None else None)
    elif args.kind == "bloch":
        value, lower = bloch_seminorm(f), True
    elif args.kind == "bmoa":
        value, lower = garsia_bmoa(f), True
    else:
        value, lower = sup_norm(f), True
    _emit({"kind": args.kind, "f": args.f, "value": value, "grid_lower_bound": lower})
    return 0


def _cmd_opnorm(args) -> int:
    g = [complex(c) for c in parse_poly(args.g)]
    M = operator_matrix(parse(args.expr), g, args.alpha, args.trunc)
    _emit({"expr": args.expr, "g": args.g, "alpha": args.alpha, "N": args.trunc, "bandwidth": M.bandwidth, "norm": operator_norm_trunc(M, args.tol)})
    return 0


def _report_out(rep: ex.Report, args) -> int:
    if getattr(args, "csv", False):
        buf = io.StringIO()
        writer = csv.writer(buf)
        cols = [o for o in rep.observations if isinstance(o["value"], list) and o["value"] and not isinstance(o["value"][0], (list, dict))]
        writer.writerow([o["label"] for o in cols])
        for row in zip(*[o["value"] for o in cols]):
            writer.writerow(row)
        sys.stdout.write(buf.getvalue())
    else:
        _emit(rep.to_json())
    return 2 if rep.verdict == "fail" else 0


def _cmd_verify(args) -> int:
    seed = args.seed
    if args.suite == "oracle":
        rep = ex.verify_oracle(args.trials or 200, seed)
    elif args.suite == "commutators":
        rep = ex.verify_commutators(args.k_max, args.j_max)
    elif args.suite == "determinants":
        rep = ex.verify_determinants(args.m_max, args.n_max)
    elif args.suite == "nesting":
        rep = ex.verify_nesting(args.trials or 100, args.deg_max, seed)
    else:
        rep = ex.verify_trivial(args.trials or 100, seed)
    return _report_out(rep, args)


def _cmd_experiment(args) -> int:
    name = args.name
    if name == "counterexample-growth":
        rep = ex.counterexample_growth(args.k, args.alpha, args.p, args.r, args.nodes)
    elif name == "counterexample-bounded":
        rep = ex.counterexample_bounded(args.beta, args.eps, args.alpha, args.p, args.lam, args.N or 4096, args.r)
    elif name == "dilation":
        g = parse_poly(args.g or "z")
        rep = ex.dilation_monotonicity(args.expr or "T", g, int(args.alpha), args.r or (0.3, 0.6, 0.9), args.N or 150)
    elif name == "power-inequality":
        g = parse_poly(args.g or "z")
        rep = ex.power_inequality_scan(g, args.n, args.N or 64, args.samples, args.seed, args.alpha)
    elif name == "pointwise-bound":
        g = parse_symbol(args.g) if args.g else None
        rep = ex.pointwise_bound_check(g, args.gamma, args.lam or (0.9,), args.k_max, None, args.N or 2048)
    else:
        rep = ex.vmoa_probe(args.beta, args.a, args.K)
    return _report_out(rep, args)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="paraprod", description="Canonical forms, boundedness verdicts and numerical checks for analytic paraproducts.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    n = sub.add_parser("normalize", help="canonical S^j T^k form")
    n.add_argument("expr")
    fmt = n.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--latex", action="store_true")
    n.add_argument("--max-terms", type=int, default=10**6)
    n.set_defaults(func=_cmd_normalize)

    def space_args(q, required=True):
        q.add_argument("--space", choices=["bergman", "hardy"], required=required, default="bergman")
        q.add_argument("--alpha", type=float, default=0.0)
        q.add_argument("--p", type=float, default=2.0)

    c = sub.add_parser("classify", help="boundedness verdict")
    c.add_argument("expr")
    space_args(c)
    c.set_defaults(func=_cmd_classify)

    t = sub.add_parser("table", help="verdicts for all two-letter words")
    space_args(t)
    t.set_defaults(func=_cmd_table)

    e = sub.add_parser("eval", help="apply an expression to f")
    e.add_argument("expr")
    e.add_argument("--f", required=True, help="polynomial in z")
    e.add_argument("--g", help="polynomial symbol in z")
    e.add_argument("--exact", action="store_true")
    e.add_argument("--series", help="symbol spec, e.g. log or pow(log,0.6)")
    e.add_argument("--N", type=int, default=16)
    e.set_defaults(func=_cmd_eval)

    nm = sub.add_parser("norm", help="norms and seminorms")
    nm.add_argument("--kind", choices=["bergman", "hardy", "bloch", "bmoa", "sup"], required=True)
    nm.add_argument("--f", required=True, help="function spec: polynomial, log, pow(...), dil(...), h(lam,alpha,p), ftest(gamma,lam)")
    nm.add_argument("--alpha", type=float, default=0.0)
    nm.add_argument("--p", type=float, default=2.0)
    nm.add_argument("--N", type=int, help="use the truncated series instead of the closed form")
    nm.add_argument("--radial", type=int, default=64)
    nm.add_argument("--angular", type=int, default=256)
    nm.add_argument("--refine", type=float, default=1.0)
    nm.set_defaults(func=_cmd_norm)

    o = sub.add_parser("opnorm", help="finite-section operator norm on A^2_alpha")
    o.add_argument("expr")
    o.add_argument("--g", required=True)
    o.add_argument("--alpha", type=int, default=0)
    o.add_argument("--trunc", type=int, default=200)
    o.add_argument("--tol", type=float, default=1e-12)
    o.set_defaults(func=_cmd_opnorm)

    v = sub.add_parser("verify", help="exact verification suites")
    v.add_argument("suite", choices=["oracle", "commutators", "determinants", "nesting", "trivial"])
    v.add_argument("--seed", type=int, default=ex.DEFAULT_SEED)
    v.add_argument("--trials", type=int)
    v.add_argument("--k-max", type=int, default=5)
    v.add_argument("--j-max", type=int, default=7)
    v.add_argument("--m-max", type=int, default=6)
    v.add_argument("--n-max", type=int, default=6)
    v.add_argument("--deg-max", type=int, default=5)
    v.add_argument("--csv", action="store_true")
    v.set_defaults(func=_cmd_verify)

    x = sub.add_parser("experiment", help="numerical experiments")
    x.add_argument(
        "name",
        choices=["counterexample-growth", "counterexample-bounded", "dilation", "power-inequality", "pointwise-bound", "vmoa-probe"],
    )
    x.add_argument("--k", type=float, default=2)
    x.add_argument("--n", type=int, default=2)
    x.add_argument("--alpha", type=float, default=0.0)
    x.add_argument("--p", type=float, default=2.0)
    x.add_argument("--beta", type=float, default=0.6)
    x.add_argument("--eps", type=float, default=0.1)
    x.add_argument("--gamma", type=float, default=8.0)
    x.add_argument("--k-max", type=int, default=3)
    x.add_argument("--N", type=int)
    x.add_argument("--K", type=int, default=4096)
    x.add_argument("--nodes", type=int, default=32)
    x.add_argument("--samples", type=int, default=50)
    x.add_argument("--seed", type=int, default=ex.DEFAULT_SEED)
    x.add_argument("--expr")
    x.add_argument("--g")
    x.add_argument("--r", type=_floats, help="comma-separated radii")
    x.add_argument("--lam", type=_floats, help="comma-separated lambda values")
    x.add_argument("--a", type=_floats, help="comma-separated points a")
    x.add_argument("--csv", action="store_true")
    x.set_defaults(func=_cmd_experiment)
    return p


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UsageError, ValueError, NormalizationLimitError) as err:
        print(f"paraprod: error: {err}", file=sys.stderr)
        return 1


def main(argv: Optional[List[str]] = None) -> None:
    try:
        code = run(argv)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 1
    sys.exit(code)


if __name__ == "__main__":
    main()
