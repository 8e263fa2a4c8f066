"""Command-line interface. Every command prints one JSON report.

Exit status: 0 ok, 1 domain error (report on stderr), 2 usage error.
Output is plain JSON and never colored, so ``NO_COLOR`` needs no handling
beyond being honored trivially.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog
from .analysis import ContextualityAnalysis
from .equivalence import inequalities_equivalent
from .exceptions import KSError
from .ksmodel import ks_feasible
from .modelfile import load_model, model_to_dict
from .nchv_bound import InfeasibleConstraintsError, classical_bound, reduce
from .statevector import bell_value, spectral_max


def _term_list(op, labels):
    return [
        {"coefficient": t.coefficient, "groups": [str(g) for g in t.groups], "text": t.describe(labels)}
        for t in op.terms
    ]


def cmd_verify_ks(args):
    model, name = load_model(args.model)
    res = ks_feasible(model)
    return {
        "feasible": res.feasible,
        "certificate": None if res.certificate is None else list(res.certificate),
        "assignment": res.assignment,
        "n_contexts": len(model.contexts),
        "symbols": [str(s) for s in model.symbols],
        "signs": list(model.signs),
    }


def cmd_bound(args):
    model, name = load_model(args.model)
    op = model.bell_operator()
    res = classical_bound(op, workers=args.threads)
    out = {"bound": res.bound, "maximizer": res.maximizer, "evaluations": res.evaluations}
    if model.state is not None:
        q = bell_value(op, model.state)
        out["quantum_value"] = q
        out["violation"] = q > res.bound + 1e-9
    return out


def cmd_qvalue(args):
    model, name = load_model(args.model)
    op = model.bell_operator()
    out = {"operator": op.describe(model.labels)}
    if model.state is not None:
        out["bell_value"] = bell_value(op, model.state)
    if args.spectral or model.state is None:
        out["spectral_max"] = spectral_max(op)
    return out


def cmd_reduce(args):
    model, name = load_model(args.model)
    op = model.bell_operator()
    red = reduce(model, op)
    full_bound = classical_bound(op).bound
    try:
        constrained = classical_bound(red.operator, red.constraints).bound
    except InfeasibleConstraintsError:
        constrained = None
    out = {
        "terms": _term_list(red.operator, model.labels),
        "operator": red.operator.describe(model.labels),
        "removed": list(red.removed),
        "shift": red.shift,
        "classical_bound": full_bound,
        "reduced_bound": full_bound - red.shift,
        "constrained_bound": constrained,
    }
    if model.state is not None:
        out["quantum_value"] = bell_value(red.operator, model.state)
    return out


def cmd_equiv(args):
    reduced = []
    for src in args.model:
        model, _ = load_model(src)
        reduced.append((reduce(model).operator, model.labels))
    (a, la), (b, lb) = reduced
    rep = inequalities_equivalent(a, b)
    return {
        "equivalent": rep.equivalent,
        "matching": [list(p) for p in rep.matching],
        "failures": [list(f) for f in rep.failures],
        "reduced": [a.describe(la), b.describe(lb)],
    }


def cmd_ingest(args):
    est = ContextualityAnalysis(model=args.model, error_mode=args.error_mode).fit(args.data)
    return est.report()


def cmd_list_models(args):
    out = []
    for name in catalog.names():
        e = catalog.get(name)
        out.append({
            "name": name,
            "description": e.description,
            "n": e.model.n,
            "contexts": len(e.model.contexts),
            "classical_bound": e.expected["classical_bound"],
            "quantum_value": e.expected["quantum_value"],
        })
    return out


def cmd_export_model(args):
    model, _ = load_model(args.model)
    obj = model_to_dict(model)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2)
            fh.write("\n")
    return obj


COMMANDS = {
    "verify-ks": cmd_verify_ks,
    "bound": cmd_bound,
    "qvalue": cmd_qvalue,
    "reduce": cmd_reduce,
    "equiv": cmd_equiv,
    "ingest": cmd_ingest,
    "list-models": cmd_list_models,
    "export-model": cmd_export_model,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kscontext", description=__doc__.splitlines()[0])
    parser.add_argument("--pretty", action="store_true", help="indent JSON output")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text, model=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indent JSON output")
        if model:
            p.add_argument("--model", required=True, help="catalog name or model file")
        return p

    add("verify-ks", "decide whether a noncontextual value assignment exists")
    p = add("bound", "classical bound by exhaustive enumeration")
    p.add_argument("--threads", type=int, default=1, help="split the enumeration across threads")
    p = add("qvalue", "quantum value on the model state")
    p.add_argument("--spectral", action="store_true", help="also report the largest eigenvalue")
    add("reduce", "drop identity-product terms and shift the bound")
    p = add("equiv", "compare the reduced inequalities of two models", model=False)
    p.add_argument("--model", action="append", required=True, help="give twice")
    p = add("ingest", "evaluate measured data against a model", model=False)
    p.add_argument("--data", required=True, help="CSV/JSON data file, or 'ghz3-measured'")
    p.add_argument("--model", default="mermin-ghz3", help="catalog name or model file")
    p.add_argument("--error-mode", default="linear", choices=("linear", "quadrature", "poisson"))
    add("list-models", "list catalog models", model=False)
    p = add("export-model", "write a model in the model file format")
    p.add_argument("--output", help="also write the model to this file")
    return parser


def _inputs(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("command", "pretty")}


def run(argv=None) -> tuple:
    """Parse and dispatch; returns ``(exit_code, report, args)``.

    Usage errors raise ``SystemExit(2)`` from argparse.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "equiv" and len(args.model) != 2:
        parser.error("equiv needs exactly two --model arguments")
    report = {"command": args.command, "inputs": _inputs(args), "result": None, "status": "ok", "message": ""}
    try:
        report["result"] = COMMANDS[args.command](args)
    except (KSError, ValueError, KeyError, OSError) as exc:
        report["status"] = "error"
        report["message"] = f"{type(exc).__name__}: {exc}"
        return 1, report, args
    return 0, report, args


def main(argv=None) -> int:
    code, report, args = run(argv)
    text = json.dumps(report, indent=2 if getattr(args, "pretty", False) else None, sort_keys=False)
    print(text, file=sys.stdout if code == 0 else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
