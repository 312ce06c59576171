"""Command-line interface: ``padicreg <subcommand> ...``.

Exit codes: 0 success, 1 usage, 2 input/parse error, 3 mathematical
precondition failure (degenerate or inconsistent data, bad hypotheses).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import hierarchy, io, polyfit, solver
from .errors import DegenerateDataError, PreconditionError
from .padic_core import INF, Prime, abs_p, dist_p, format_rational, parse_rational, vp

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_MATH = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # Let "-3/4" through as a value, as argparse already does for "-3".
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _prime(text: str) -> Prime:
    try:
        return Prime(int(text))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _rational_list(text: str) -> list[Fraction]:
    try:
        return [parse_rational(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _power_text(x: Fraction, p: int) -> str:
    """``1/9`` -> ``1/9 (3^-2)`` when ``x`` is a power of ``p``."""
    if x == 0:
        return "0"
    v = vp(x, p)
    if Fraction(p) ** v == x and abs(v) > 1:
        return f"{format_rational(x)} ({p}^{v})"
    return format_rational(x)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _load_dataset(args) -> solver.Dataset:
    if args.bundled:
        return io.bundled(args.bundled).payload
    if not args.dataset:
        raise UsageError("give a dataset path or --bundled NAME")
    with open(args.dataset, encoding="utf-8") as fh:
        text = fh.read()
    header = {"auto": None, "yes": True, "no": False}[args.header]
    return io.parse_dataset(text, header=header, check_consistency=not args.allow_inconsistent)


def _load_tree(args) -> hierarchy.TaxonomyTree:
    if args.tree:
        with open(args.tree, encoding="utf-8") as fh:
            return hierarchy.load_tree(fh.read())
    return io.bundled_tree("fig1")


# --- subcommands -------------------------------------------------------------


def cmd_vp(args):
    p = args.prime or 2
    v = vp(args.x, p)
    a = abs_p(args.x, p)
    vtext = "inf" if v is INF else str(v)
    _emit(args, {"x": format_rational(args.x), "prime": int(p), "v": vtext, "abs": format_rational(a)},
          f"v={vtext} |x|={format_rational(a)}")


def cmd_dist(args):
    p = args.prime or 2
    d = dist_p(args.x, args.y, p)
    _emit(args, {"prime": int(p), "distance": format_rational(d)}, f"d={_power_text(d, p)}")


def _report_text(report: solver.FitReport, names=None) -> str:
    lines = [
        f"prime: {report.prime}",
        f"mode: {report.mode}",
        f"loss: {format_rational(report.loss)}",
        f"candidates: {report.candidates_examined} subsets ({report.singular_skipped} singular)",
        f"optimal models ({len(report.optimal_models)}):",
    ]
    for m in report.optimal_models:
        lines.append(
            f"  y = {solver.format_affine(m.weights, m.intercept, names)}"
            f"   [fits {report.fit_counts[m]} rows]"
        )
    return "\n".join(lines)


def cmd_fit(args):
    data = _load_dataset(args)
    report = solver.fit(data, args.prime or 2, args.mode, workers=args.threads)
    if args.json:
        sys.stdout.write(io.serialize_report(report))
    else:
        print(_report_text(report))


def cmd_descend(args):
    data = _load_dataset(args)
    p = args.prime or 2
    model = solver.AffineModel.from_vector(args.start or [0] * (data.dim + 1))
    loss = solver.evaluate_loss(model, data, p)
    steps = [{"model": io.model_to_dict(model), "loss": format_rational(loss)}]
    lines = [f"start: {model}   loss {format_rational(loss)}"]
    for new, step in solver.descend_to_candidate(model, data, p):
        loss = solver.evaluate_loss(new, data, p)
        steps.append({
            "model": io.model_to_dict(new),
            "loss": format_rational(loss),
            "direction": [format_rational(v) for v in step.direction],
            "chosen_index": step.chosen_index,
            "step_size": format_rational(step.step_size),
        })
        lines.append(
            f"row {step.chosen_index}: alpha={format_rational(step.step_size)} -> {new}"
            f"   loss {format_rational(loss)}"
        )
    _emit(args, {"prime": int(p), "steps": steps}, "\n".join(lines))


def _xy(args):
    if args.points:
        data = io.parse_dataset(open(args.points, encoding="utf-8").read(), check_consistency=False)
        if data.dim != 1:
            raise UsageError("points file must have exactly two columns")
        return [x[0] for x in data.features], data.targets
    if args.xs is None or args.ys is None:
        raise UsageError("give --xs and --ys, or --points FILE")
    return args.xs, args.ys


def cmd_polyfit(args):
    xs, ys = _xy(args)
    res = polyfit.fit_poly(xs, ys, args.degree, args.prime or 2, args.mode)
    _emit(
        args,
        {"prime": int(args.prime or 2), "degree": args.degree, "loss": format_rational(res.loss),
         "polynomials": [q.to_text() for q in res.polynomials]},
        "\n".join([f"loss: {format_rational(res.loss)}"] + [f"  {q}" for q in res.polynomials]),
    )


def cmd_interp(args):
    xs, ys = _xy(args)
    P = polyfit.interpolate(polyfit.EvaluationSet(tuple(xs), tuple(ys)))
    _emit(args, {"coefficients": P.to_text(), "polynomial": str(P)}, str(P))


def cmd_residual_check(args):
    p = args.prime or 2
    P = polyfit.Polynomial.parse(args.poly)
    S = polyfit.EvaluationSet(tuple(args.xs))
    if args.approx is not None:
        approximants = [polyfit.Polynomial.parse(args.approx)]
    else:
        approximants = list(polyfit.fit_poly(S.xs, [P(x) for x in S.xs], args.degree, p, args.mode).polynomials)
    out = []
    lines = []
    for Q in approximants:
        roots = sorted(polyfit.residual_roots_in_S(P, Q, S))
        R = P - Q
        ok = len(roots) >= args.degree + 1
        out.append({"approximant": Q.to_text(), "residual": R.to_text(),
                    "roots": [format_rational(r) for r in roots], "certified": ok})
        lines.append(f"Q = {Q}   P - Q = {R}   roots in S: "
                     f"{', '.join(format_rational(r) for r in roots) or 'none'}"
                     f"   {'ok' if ok else 'FEWER THAN n+1'}")
    _emit(args, {"prime": int(p), "degree": args.degree, "results": out}, "\n".join(lines))


def cmd_encode(args):
    tree = _load_tree(args)
    code = hierarchy.node_code(tree, args.label, args.prime)
    _emit(args, {"label": args.label, **code.to_dict()}, f"{code.dotted}\n{code.value}")


def cmd_decode(args):
    p = args.prime or 409
    code = hierarchy.PathCode.from_value(args.value, p)
    _emit(args, code.to_dict(), code.dotted)


def cmd_similar(args):
    tree = _load_tree(args)
    u = hierarchy.node_code(tree, args.a, args.prime)
    v = hierarchy.node_code(tree, args.b, args.prime)
    d = hierarchy.similarity(u, v)
    depth = hierarchy.common_depth(u, v)
    _emit(args,
          {"a": u.to_dict(), "b": v.to_dict(), "distance": format_rational(d), "common_depth": depth},
          f"distance: {_power_text(d, u.prime)}\ncommon ancestor depth: "
          f"{'identical' if depth is None else depth}")


def zorgette_verdict(report: solver.FitReport) -> list[str]:
    """Robots implicated by vanishing coefficients in the optimal models."""
    verdicts = []
    for m in report.optimal_models:
        zero = tuple(j for j, w in enumerate(m.weights) if w == 0)
        if zero == (0, 1):
            text = "robot 1 faulty"
        elif zero == (1,):
            text = "robot 3 faulty"
        elif zero == (0,):
            text = "robot 2 faulty"
        else:
            continue
        if text not in verdicts:
            verdicts.append(text)
    return verdicts or ["no robot implicated"]


def ols_verdict(coef) -> str:
    """The robot with the smaller raw |coefficient| looks unrelated to robot 1."""
    return "robot 2 faulty" if abs(coef[0]) < abs(coef[1]) else "robot 3 faulty"


def cmd_zorgette(args):
    p = args.prime or 409
    data = io.bundled("zorgette").payload
    report = solver.fit(data, p, args.mode, workers=args.threads)
    names = ["y", "z"]
    verdicts = zorgette_verdict(report)
    coef = solver.ols_baseline(data)
    ols_v = ols_verdict(coef)
    correct = "robot 3 faulty"
    if args.json:
        payload = {
            "padic": {**io.report_to_dict(report), "verdict": verdicts},
            "ols": {"weights": [float(c) for c in coef[:2]], "intercept": float(coef[2]),
                    "verdict": ols_v},
        }
        print(json.dumps(payload, indent=2))
        return
    lines = [f"{p}-adic regression of robot 1 (x) on robot 2 (y) and robot 3 (z)"]
    for m in report.optimal_models:
        lines.append(f"  x = {solver.format_affine(m.weights, m.intercept, names)}"
                     f"   [fits {report.fit_counts[m]} of {data.k} missions]")
        if m.intercept != 0 and m.intercept.denominator == 1:
            v = vp(m.intercept, p)
            if Fraction(p) ** v == m.intercept:
                lines.append(f"      intercept = {p}^{v}")
    lines.append(f"  {p}-adic loss: {format_rational(report.loss)} (mode {report.mode})")
    lines.append(f"  verdict: {'; '.join(verdicts)}")
    lines.append("ordinary least squares (binary64)")
    lines.append(f"  x = {coef[0]:.15g} y + {coef[1]:.15g} z + {coef[2]:.15g}".replace("+ -", "- "))
    suffix = "" if ols_v == correct else " (incorrect)"
    lines.append(f"  verdict: {ols_v}{suffix}")
    print("\n".join(lines))


def cmd_dump(args):
    if args.name in io._TREES:
        print(json.dumps(hierarchy.tree_to_json(io.bundled_tree(args.name)), indent=2))
    else:
        sys.stdout.write(io.bundled_text(args.name))


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", "--prime", type=_prime, default=None, help="prime p")
    common.add_argument("--mode", choices=["auto", "exact", "large-prime"], default="auto")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="worker processes for enumeration")

    data_opts = argparse.ArgumentParser(add_help=False)
    data_opts.add_argument("dataset", nargs="?", help="CSV file: features..., target")
    data_opts.add_argument("--bundled", help="use a bundled dataset instead of a file")
    data_opts.add_argument("--header", choices=["auto", "yes", "no"], default="auto")
    data_opts.add_argument("--allow-inconsistent", action="store_true",
                           help="accept equal features with different targets")

    xy_opts = argparse.ArgumentParser(add_help=False)
    xy_opts.add_argument("--xs", type=_rational_list, help="comma-separated x values")
    xy_opts.add_argument("--ys", type=_rational_list, help="comma-separated y values")
    xy_opts.add_argument("--points", help="two-column CSV of (x, y)")

    tree_opts = argparse.ArgumentParser(add_help=False)
    tree_opts.add_argument("--tree", help="tree document (JSON or edge-list CSV); default: bundled fig1")

    parser = _Parser(prog="padicreg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("vp", parents=[common], help="p-adic valuation and absolute value")
    s.add_argument("x", type=_rational)
    s.set_defaults(func=cmd_vp)

    s = sub.add_parser("dist", parents=[common], help="p-adic distance")
    s.add_argument("x", type=_rational)
    s.add_argument("y", type=_rational)
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("fit", parents=[common, data_opts], help="exact p-adic linear regression")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("descend", parents=[common, data_opts],
                       help="improve a model step by step until it fits n+1 rows")
    s.add_argument("--start", type=_rational_list, help="weights...,intercept (default all zero)")
    s.set_defaults(func=cmd_descend)

    s = sub.add_parser("polyfit", parents=[common, xy_opts], help="p-adic polynomial fit")
    s.add_argument("-n", "--degree", type=int, required=True)
    s.set_defaults(func=cmd_polyfit)

    s = sub.add_parser("interp", parents=[common, xy_opts], help="exact polynomial interpolation")
    s.set_defaults(func=cmd_interp)

    s = sub.add_parser("residual-check", parents=[common],
                       help="roots in S of P - Q for optimal degree-n approximants Q")
    s.add_argument("--poly", required=True, help="P as little-endian coefficients, e.g. -2,3,0,1")
    s.add_argument("--approx", help="check this Q instead of computing optimal ones")
    s.add_argument("--xs", type=_rational_list, required=True, help="evaluation set S")
    s.add_argument("-n", "--degree", type=int, required=True)
    s.set_defaults(func=cmd_residual_check)

    s = sub.add_parser("encode", parents=[common, tree_opts], help="path code of a tree node")
    s.add_argument("label")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("decode", parents=[common], help="digits of a path code")
    s.add_argument("value", type=int)
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("similar", parents=[common, tree_opts], help="p-adic distance of two nodes")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_similar)

    s = sub.add_parser("zorgette", parents=[common], help="faulty-robot example: p-adic vs OLS")
    s.set_defaults(func=cmd_zorgette)

    s = sub.add_parser("dump", parents=[common], help="print a bundled dataset or tree")
    s.add_argument("name", choices=io.bundled_names() + sorted(io._TREES))
    s.set_defaults(func=cmd_dump)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        args.func(args)
    except UsageError as e:
        print(f"padicreg: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateDataError as e:
        print(f"padicreg: {e}", file=sys.stderr)
        print(f"certificate: {' '.join(map(str, e.certificate))}", file=sys.stderr)
        return EXIT_MATH
    except PreconditionError as e:
        print(f"padicreg: {e}", file=sys.stderr)
        return EXIT_MATH
    except (OSError, ValueError, KeyError) as e:
        print(f"padicreg: {e}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
