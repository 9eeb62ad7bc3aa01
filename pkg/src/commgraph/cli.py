"""Command-line front end.

Exit codes: 0 when every asserted expectation holds, 1 when one fails (the
failing fact is named on stderr), 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from commgraph import __version__
from commgraph.catalog import autfree_set, get_case, heisenberg_set, list_cases, run_case, sl_set
from commgraph.certify import check_main_theorem, check_thompson_variant, thompson_generators, verify_certificate
from commgraph.engine import KeyDecodeError, element_from_key
from commgraph.graph import GeneratorSet, build, to_dot
from commgraph.probe import BallCapExceeded, ends_probe


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, cert: dict | None, dot: str | None, out) -> None:
    if getattr(args, "json", None) and cert is not None:
        write_atomic(args.json, dumps(cert))
    if getattr(args, "dot", None) and dot is not None:
        write_atomic(args.dot, dot)
    if args.verbose and cert is not None:
        out.write(dumps(cert))


def _positive(lo: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}")
        return v

    return parse


def _generator_set(args) -> GeneratorSet:
    if args.generators:
        return _load_generators(args.generators, args.power_bound)
    if args.engine == "heisenberg":
        return heisenberg_set(args.power_bound)
    if args.engine == "autfree":
        return autfree_set(args.n, args.power_bound)
    if args.engine == "sl":
        return sl_set(args.n, args.power_bound)
    if args.engine == "thompson":
        return thompson_generators(args.m, args.power_bound)
    raise UsageError("give --engine or --generators")


def _load_generators(path: str, power_bound: int) -> GeneratorSet:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        items = []
        for entry in data["generators"]:
            items.append((entry["label"], element_from_key(bytes.fromhex(entry["key"]))))
        engine = items[0][1].engine if items else ""
        return GeneratorSet(engine, tuple(items), power_bound)
    except (OSError, ValueError, KeyError, TypeError, IndexError) as exc:
        raise UsageError(f"cannot read generators from {path}: {exc}") from exc


def _report_hypotheses(cert: dict, out, err) -> int:
    for h in cert["hypotheses"]:
        out.write(f"{'ok  ' if h['holds'] else 'FAIL'} {h['name']}: {h['detail']}\n")
    if cert["conclusions"]:
        out.write("conclusions: " + ", ".join(cert["conclusions"]) + "\n")
        return 0
    failed = [h["name"] for h in cert["hypotheses"] if not h["holds"] and h["kind"] != "observation"]
    err.write("no conclusions; failed hypotheses: " + ", ".join(failed) + "\n")
    return 1


def cmd_catalog(args, out, err) -> int:
    if args.action == "list":
        for case in list_cases():
            tag = " (documentation only)" if case.stub else ""
            out.write(f"{case.name}{tag}: {case.description}\n")
        return 0
    if not args.name:
        raise UsageError("catalog run needs a case name")
    try:
        case = get_case(args.name)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    if case.stub:
        out.write(f"{case.name} is documentation only: {case.description}\n")
        return 0
    result = run_case(args.name)
    _emit(args, result.certificate, result.dot(), out)
    for f in result.facts:
        out.write(f"{'ok  ' if f.holds else 'FAIL'} {f.name}" + (f": {f.detail}" if f.detail else "") + "\n")
    failed = [f.name for f in result.facts if not f.holds]
    if failed:
        err.write("failing facts: " + ", ".join(failed) + "\n")
        return 1
    return 0


def cmd_check(args, out, err) -> int:
    gens = _generator_set(args)
    cert = check_main_theorem(gens)
    _emit(args, cert, to_dot(build(gens)), out)
    return _report_hypotheses(cert, out, err)


def cmd_thompson_variant(args, out, err) -> int:
    cert = check_thompson_variant(args.m)
    _emit(args, cert, to_dot(build(thompson_generators(args.m)), f"thompson{args.m}"), out)
    code = _report_hypotheses(cert, out, err)
    for c in cert["caveats"]:
        out.write(f"caveat {c['code']}: {c['text']}\n")
    return code


def cmd_probe(args, out, err) -> int:
    if args.outer < args.inner:
        raise UsageError("--outer must be at least --inner")
    gens = _generator_set(args)
    try:
        report = ends_probe(gens, args.inner, args.outer, args.cap)
    except BallCapExceeded as exc:
        err.write(f"{exc}\n")
        return 1
    data = report.to_json()
    if args.json:
        write_atomic(args.json, dumps(data))
    out.write(dumps(data))
    return 0


def cmd_verify(args, out, err) -> int:
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            cert = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from exc
    report = verify_certificate(cert)
    if report.ok:
        out.write("certificate verified\n")
        return 0
    for d in report.discrepancies:
        err.write(f"discrepancy: {d}\n")
    return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="commgraph", description="Commutativity-graph certificates for finitely generated groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def outputs(sp):
        sp.add_argument("--json", help="write the certificate JSON here")
        sp.add_argument("--dot", help="write the graph in DOT format here")
        sp.add_argument("-v", "--verbose", action="store_true", help="also print the certificate")

    def group_args(sp):
        sp.add_argument("--engine", choices=["heisenberg", "autfree", "sl", "thompson"])
        sp.add_argument("--generators", help="JSON file with generators[{label,key}] (hex keys)")
        sp.add_argument("--n", type=_positive(2), default=5, help="rank for autfree / dimension for sl")
        sp.add_argument("--m", type=_positive(1), default=10, help="truncation for thompson")
        sp.add_argument("--power-bound", type=_positive(1), default=1)

    c = sub.add_parser("catalog", help="list or run built-in case studies")
    c.add_argument("action", choices=["list", "run"])
    c.add_argument("name", nargs="?")
    outputs(c)
    c.set_defaults(func=cmd_catalog)

    k = sub.add_parser("check", help="check the commutativity-graph criterion")
    group_args(k)
    outputs(k)
    k.set_defaults(func=cmd_check)

    t = sub.add_parser("thompson-variant", help="certificate for Thompson's F from S'_m")
    t.add_argument("--m", type=_positive(4), default=10)
    outputs(t)
    t.set_defaults(func=cmd_thompson_variant)

    pr = sub.add_parser("probe", help="annulus components in a finite Cayley ball (heuristic)")
    group_args(pr)
    pr.add_argument("--inner", type=_positive(0), required=True)
    pr.add_argument("--outer", type=_positive(0), required=True)
    pr.add_argument("--cap", type=_positive(1), help="element cap (default from COMMGRAPH_ELEMENT_CAP or 10^6)")
    pr.add_argument("--json", help="write the report here")
    pr.set_defaults(func=cmd_probe)

    v = sub.add_parser("verify", help="re-verify a certificate file")
    v.add_argument("certificate")
    v.set_defaults(func=cmd_verify)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err)
    except (UsageError, KeyDecodeError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
