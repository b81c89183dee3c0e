"""Command-line entry point.  Every subcommand prints one JSON report.

Exit codes: 0 definite verdict, 2 indeterminate, 1 error or bad usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import __version__
from .classify import classify_purity, invariant_summary, wick_check
from .curvature import CATALOG_NAMES, catalog_metric
from .document import DocumentError, parse_input, write_document
from .invariants import VSI_TOL, evaluate_invariants, generate_contractions, is_vsi
from .kempf_ness import FlowConfig, Group, limit_from_flow, norm_flow

EXIT_OK, EXIT_ERROR, EXIT_INDETERMINATE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _flow_args(p, tol_help="gradient tolerance of the flow"):
    p.add_argument("--tol", type=float, default=None, help=tol_help)
    p.add_argument("--max-iter", type=int, default=FlowConfig.max_iter)
    p.add_argument("--seed", type=int, default=FlowConfig.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wickrot", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="purity type of the Riemann or Weyl tensor")
    p.add_argument("--input", required=True)
    p.add_argument("--tensor", choices=("riemann", "weyl"), default="riemann")
    _flow_args(p)

    p = sub.add_parser("wick-check", help="are two bundles Wick-rotated?")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    _flow_args(p, "relative invariant tolerance")

    p = sub.add_parser("invariants", help="evaluate polynomial curvature invariants")
    p.add_argument("--input", required=True)
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("flow", help="run the norm-minimizing flow")
    p.add_argument("--input", required=True)
    p.add_argument("--group", choices=("real", "complex"), default="real")
    _flow_args(p)

    p = sub.add_parser("vsi", help="do all generated invariants vanish?")
    p.add_argument("--input", required=True)
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--tol", type=float, default=VSI_TOL)

    p = sub.add_parser("catalog", help="write a named example bundle")
    p.add_argument("--name", required=True, choices=CATALOG_NAMES)
    p.add_argument("--emit", required=True, help="output path")
    p.add_argument("--dim", type=int, default=None, help="dimension for flat")
    p.add_argument("--signature", default=None, help="p,q for flat")
    return parser


def _config(args) -> FlowConfig:
    kw = {"max_iter": args.max_iter, "seed": args.seed}
    if args.command != "wick-check" and args.tol is not None:
        kw["grad_tol"] = args.tol
    return FlowConfig(**kw)


def _cmd_classify(args):
    config = _config(args)
    bundle = parse_input(args.input)
    rep = classify_purity(bundle, args.tensor, config)
    out = {"input": args.input, "label": bundle.label, "signature": list(bundle.signature.as_tuple())}
    out.update(rep.as_dict())
    return out, EXIT_INDETERMINATE if rep.indeterminate else EXIT_OK


def _cmd_wick(args):
    config = _config(args)
    a, b = parse_input(args.a), parse_input(args.b)
    kw = {} if args.tol is None else {"tol": args.tol}
    v = wick_check(a, b, config, **kw)
    out = {"a": args.a, "b": args.b, "config": config.as_dict()}
    out.update(v.as_dict())
    return out, EXIT_INDETERMINATE if v.relation == "indeterminate" else EXIT_OK


def _cmd_invariants(args):
    bundle = parse_input(args.input)
    words = generate_contractions(args.max_degree, range(1, len(bundle.derivatives) + 1))
    vec = evaluate_invariants(bundle, words)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "degree", "pairing", "value"])
        for word, value in zip(vec.words, vec.values):
            w.writerow([word.label, word.degree, " ".join(f"{a}-{b}" for a, b in word.pairing), repr(value)])
        return buf.getvalue(), EXIT_OK
    out = {"input": args.input, "max_degree": args.max_degree,
           "words": [w.text() for w in vec.words]}
    out.update(invariant_summary(vec))
    return out, EXIT_OK


def _cmd_flow(args):
    config = _config(args)
    bundle = parse_input(args.input)
    group = Group.complexified(bundle.n) if args.group == "complex" else Group.real(bundle.signature)
    res = norm_flow(bundle.riemann_tensor(), group, config)
    out = {"input": args.input}
    out.update(res.summary())
    if res.verdict == "boundary-limit":
        out["limit_max_abs"] = limit_from_flow(res).max_abs()
    return out, EXIT_INDETERMINATE if res.verdict == "max-iter" else EXIT_OK


def _cmd_vsi(args):
    bundle = parse_input(args.input)
    vec = evaluate_invariants(bundle, max_degree=args.max_degree)
    out = {"input": args.input, "max_degree": args.max_degree, "tol": args.tol,
           "vsi": is_vsi(bundle, args.max_degree, args.tol),
           "max_abs_invariant": max((abs(x) for x in vec.values), default=0.0)}
    return out, EXIT_OK


def _cmd_catalog(args):
    bundle = catalog_metric(args.name, args.dim, args.signature)
    write_document(bundle, args.emit)
    return {"name": args.name, "label": bundle.label, "emit": args.emit,
            "signature": list(bundle.signature.as_tuple())}, EXIT_OK


COMMANDS = {
    "classify": _cmd_classify,
    "wick-check": _cmd_wick,
    "invariants": _cmd_invariants,
    "flow": _cmd_flow,
    "vsi": _cmd_vsi,
    "catalog": _cmd_catalog,
}


def run_command(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=stderr)
    try:
        report, code = COMMANDS[args.command](args)
    except (DocumentError, OSError, ValueError, KeyError, FloatingPointError) as exc:
        print(f"wickrot {args.command}: error: {exc}", file=stderr)
        return EXIT_ERROR
    if isinstance(report, str):
        stdout.write(report)
    else:
        report = {"command": args.command, "argv": list(argv), **report}
        json.dump(report, stdout, indent=2, default=str)
        stdout.write("\n")
    return code


def main(argv=None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))
