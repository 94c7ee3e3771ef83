"""Command-line interface.

Commands that produce a document write it to ``--out`` (or stdout) and print
their verdict line and JSON report on stderr, so they compose in pipelines.
Commands that only decide something print the verdict and report on stdout.

Exit status: 0 success or true verdict, 1 false verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import __version__
from .bellpoly import enumerate_vertices, is_local, is_tight
from .boxspace import (
    DEFAULT_PARTY_LIMIT,
    Box,
    SubsetTable,
    correlations_of_box,
)
from .documents import DocumentError, format_rational, parse, serialize
from .duality import (
    Relabeling,
    StandardizationNotice,
    apply_relabeling,
    box_from_functional,
    functional_from_box,
    hardy_box,
)
from .errors import BellError, NotAnInequalityError
from .functional import (
    BellFunctional,
    correlation_coeffs,
    evaluate,
    hardy_functional,
    hardy_test,
    standard_form_defect,
    standardize,
    theta_value,
)
from .nsbox import is_extremal, is_nonsignaling, zeros

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class Context:
    def __init__(self, args, stdout, stderr, stdin):
        self.args = args
        self.stdout, self.stderr, self.stdin = stdout, stderr, stdin

    @property
    def limit(self) -> int:
        return self.args.limit

    def read(self, path: str, expect: tuple[type, ...]):
        if path == "-":
            text, source = self.stdin.read(), "<stdin>"
        else:
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"{path}: {exc.strerror}") from None
            source = path
        obj = parse(text, strict=self.args.strict, limit=self.limit, source=source)
        if not isinstance(obj, expect):
            names = " or ".join(t.__name__ for t in expect)
            raise InputError(f"{source}: expected a {names} document, got {type(obj).__name__}")
        if self.args.n is not None and obj.n != self.args.n:
            raise InputError(f"{source}: document has n={obj.n} but --n {self.args.n} was given")
        return obj

    def emit(self, obj, verdict: str, report: dict, status: int = EXIT_OK) -> int:
        text = serialize(obj)
        if self.args.out and self.args.out != "-":
            with open(self.args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            self.stdout.write(text)
        self._report(self.stderr, verdict, report)
        return status

    def verdict(self, verdict: str, report: dict, status: int) -> int:
        self._report(self.stdout, verdict, report)
        return status

    @staticmethod
    def _report(stream, verdict: str, report: dict) -> None:
        stream.write(verdict + "\n")
        stream.write(json.dumps(report, sort_keys=True) + "\n")


def _need_n(ctx: Context) -> int:
    if ctx.args.n is None:
        raise InputError("--n is required for this command")
    return ctx.args.n


def _same_n(*objs) -> None:
    ns = {o.n for o in objs}
    if len(ns) > 1:
        raise InputError(f"inputs have different party counts: {sorted(ns)}")


# --------------------------------------------------------------------------
# Commands


def cmd_hardy(ctx: Context) -> int:
    n = _need_n(ctx)
    h = hardy_functional(n, limit=ctx.limit)
    report = {"command": "hardy", "n": n, "theta": format_rational(theta_value(h))}
    if ctx.args.standardize:
        h = standardize(h)
        report["standardized"] = True
    return ctx.emit(h, f"hardy functional n={n}" + (" (standard form)" if ctx.args.standardize else ""), report)


def cmd_hardy_box(ctx: Context) -> int:
    n = _need_n(ctx)
    box = hardy_box(n, limit=ctx.limit)
    report = {"command": "hardy-box", "n": n, "zeros": len(zeros(box))}
    return ctx.emit(box, f"hardy box n={n}", report)


def cmd_vertices(ctx: Context) -> int:
    n = _need_n(ctx)
    verts = enumerate_vertices(n, limit=ctx.limit)
    report = {"command": "vertices", "n": n, "count": len(verts),
              "vertices": [{"a": str(d.a), "b": str(d.b)} for d in verts]}
    return ctx.verdict(f"{len(verts)} deterministic strategies for n={n}", report, EXIT_OK)


def cmd_standardize(ctx: Context) -> int:
    f = ctx.read(ctx.args.file, (BellFunctional,))
    theta = theta_value(f)
    out = standardize(f)
    report = {"command": "standardize", "n": f.n, "theta": format_rational(theta)}
    return ctx.emit(out, f"standardized (theta = {format_rational(theta)})", report)


def cmd_dualize(ctx: Context) -> int:
    f = ctx.read(ctx.args.file, (BellFunctional,))
    report = {"command": "dualize", "n": f.n, "standard_input": standard_form_defect(f) is None}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", StandardizationNotice)
        box = box_from_functional(f)
    for w in caught:
        ctx.stderr.write(f"notice: {w.message}\n")
    report["zeros"] = len(zeros(box))
    return ctx.emit(box, f"non-signaling box with {report['zeros']} zeros", report)


def cmd_undualize(ctx: Context) -> int:
    box = ctx.read(ctx.args.file, (Box,))
    f = functional_from_box(box)
    report = {"command": "undualize", "n": box.n, "theta": format_rational(theta_value(f))}
    return ctx.emit(f, "standard-form functional", report)


def cmd_eval(ctx: Context) -> int:
    f = ctx.read(ctx.args.functional, (BellFunctional,))
    box = ctx.read(ctx.args.box, (Box,))
    _same_n(f, box)
    value = evaluate(f, box)
    report = {"command": "eval", "n": f.n, "value": format_rational(value), "violated": value < 0}
    return ctx.verdict(f"value {format_rational(value)}", report, EXIT_OK)


def cmd_corr(ctx: Context) -> int:
    obj = ctx.read(ctx.args.file, (Box, BellFunctional))
    table: SubsetTable = correlations_of_box(obj) if isinstance(obj, Box) else correlation_coeffs(obj)
    report = {"command": "corr", "n": obj.n, "entries": len(table)}
    return ctx.emit(table, f"{len(table)} correlation coordinates", report)


def cmd_check_ns(ctx: Context) -> int:
    box = ctx.read(ctx.args.file, (Box,))
    res = is_nonsignaling(box)
    report = {"command": "check-ns", "n": box.n, "nonsignaling": res.nonsignaling,
              "signaling_parties": res.parties,
              "violations": [str(v) for v in res.violations[:20]]}
    if res:
        return ctx.verdict("non-signaling", report, EXIT_OK)
    return ctx.verdict(f"signaling (observers {', '.join(map(str, res.parties))})", report, EXIT_FALSE)


def cmd_check_tight(ctx: Context) -> int:
    f = ctx.read(ctx.args.file, (BellFunctional,))
    target = 3 ** f.n - 1
    try:
        res = is_tight(f)
    except NotAnInequalityError as exc:
        report = {"command": "check-tight", "n": f.n, "valid_inequality": False, "tight": False,
                  "target": target, "error": str(exc)}
        return ctx.verdict(f"not_tight: {exc}", report, EXIT_FALSE)
    report = {"command": "check-tight", "n": f.n, "valid_inequality": True, "tight": res.tight,
              "rank": res.rank, "target": target, "saturating": len(res.saturating),
              "theta": format_rational(theta_value(f))}
    word = "tight" if res.tight else "not_tight"
    return ctx.verdict(f"{word}: rank {res.rank} of required {target}", report,
                       EXIT_OK if res.tight else EXIT_FALSE)


def cmd_check_extremal(ctx: Context) -> int:
    box = ctx.read(ctx.args.file, (Box,))
    res = is_extremal(box)
    report = {"command": "check-extremal", "n": box.n, "extremal": res.extremal,
              "zero_rank": res.zero_rank, "target": res.target, "defect": res.defect,
              "zeros": res.zero_count}
    word = "extremal" if res.extremal else "not_extremal"
    return ctx.verdict(f"{word}: zero rank {res.zero_rank} of required {res.target}", report,
                       EXIT_OK if res.extremal else EXIT_FALSE)


def cmd_membership(ctx: Context) -> int:
    box = ctx.read(ctx.args.file, (Box,))
    cert = is_local(box)
    report = {"command": "membership", "n": box.n, "verdict": cert.verdict, "reason": cert.reason}
    if cert.local:
        report["support"] = len(cert.weights)
    else:
        report["separator_value"] = format_rational(cert.value)
    return ctx.emit(cert, cert.verdict, report, EXIT_OK if cert.local else EXIT_FALSE)


def cmd_hardy_test(ctx: Context) -> int:
    box = ctx.read(ctx.args.file, (Box,))
    res = hardy_test(box)
    report = {"command": "hardy-test", "n": box.n, "passed": res.passed, "failures": res.failures}
    verdict = "pass" if res.passed else "fail: " + "; ".join(res.failures)
    return ctx.verdict(verdict, report, EXIT_OK if res.passed else EXIT_FALSE)


def _bits(text: str | None, n: int, name: str) -> tuple[int, ...] | None:
    if text is None:
        return None
    if len(text) != n or any(ch not in "01" for ch in text):
        raise InputError(f"--{name} must be a bitstring of length {n}, got {text!r}")
    return tuple(int(ch) for ch in text)


def cmd_relabel(ctx: Context) -> int:
    obj = ctx.read(ctx.args.file, (Box, BellFunctional))
    n = obj.n
    perm = None
    if ctx.args.perm:
        try:
            perm = tuple(int(x) for x in ctx.args.perm.split(","))
        except ValueError:
            raise InputError(f"--perm must be comma-separated integers, got {ctx.args.perm!r}") from None
    r = Relabeling.build(n, perm=perm, swap=_bits(ctx.args.swap, n, "swap"),
                         alpha=_bits(ctx.args.alpha, n, "alpha"), beta=_bits(ctx.args.beta, n, "beta"))
    out = apply_relabeling(r, obj)
    report = {"command": "relabel", "n": n, "perm": list(r.perm),
              "swap": "".join(map(str, r.swap)), "alpha": "".join(map(str, r.alpha)),
              "beta": "".join(map(str, r.beta))}
    return ctx.emit(out, f"relabeled {type(obj).__name__.lower()}", report)


# --------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="party count")
    common.add_argument("--limit", type=int, default=DEFAULT_PARTY_LIMIT,
                        help="largest admissible party count (default %(default)s)")
    common.add_argument("--strict", action="store_true",
                        help="reject unreduced rationals and incomplete tables")
    common.add_argument("--out", default=None, metavar="FILE", help="write the document here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="bellhardy",
        description="Exact Bell-polytope and non-signaling-box tools for the (n,2,2) scenario.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, *files):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        for f in files:
            p.add_argument(f, help="document path, or - for stdin")
        p.set_defaults(func=fn)
        return p

    p = add("hardy", cmd_hardy, "emit the Hardy functional")
    p.add_argument("--standardize", action="store_true", help="emit the standard form")
    add("hardy-box", cmd_hardy_box, "emit the Hardy box")
    add("vertices", cmd_vertices, "list deterministic strategies")
    add("standardize", cmd_standardize, "standardize a functional", "file")
    add("dualize", cmd_dualize, "functional -> non-signaling box", "file")
    add("undualize", cmd_undualize, "non-signaling box -> standard functional", "file")
    add("eval", cmd_eval, "evaluate a functional on a box", "functional", "box")
    add("corr", cmd_corr, "correlation coordinates of a box or functional", "file")
    add("check-ns", cmd_check_ns, "non-signaling check", "file")
    add("check-tight", cmd_check_tight, "facet test for a functional", "file")
    add("check-extremal", cmd_check_extremal, "extremality test for a non-signaling box", "file")
    add("membership", cmd_membership, "Bell-polytope membership with certificate", "file")
    add("hardy-test", cmd_hardy_test, "Hardy's conditions on a box", "file")
    p = add("relabel", cmd_relabel, "apply a local relabeling", "file")
    p.add_argument("--perm", help="comma-separated image of each observer, e.g. 2,1")
    p.add_argument("--swap", help="setting swaps as a bitstring, observer 1 leftmost")
    p.add_argument("--alpha", help="constant outcome flips as a bitstring")
    p.add_argument("--beta", help="setting-dependent outcome flips as a bitstring")
    return parser


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    ctx = Context(args, stdout, stderr, stdin)
    try:
        return args.func(ctx)
    except (InputError, DocumentError, BellError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())

