"""Command-line interface.

Structured JSON goes to standard output (or ``--out``); human-readable
diagnostics go to standard error. Exit codes:

    0  success
    1  parse error or invalid arguments
    2  precondition violated (non-nilpotent, non-commuting, kernel dim != 1)
    3  internal reduction invariant failed
    4  a verification or self-test property failed
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

from .commutant import (commutant_basis, format_h_grid, format_k_matrix, h_pattern,
                        k_matrix)
from .exceptions import PreconditionError, ReductionError, StructureError
from .fields import Field
from .harness import conjugated_normal_pair, run_selftest
from .io import (DocumentError, dumps, loads, matrix_from_document, matrix_to_document,
                 pair_from_document, pair_to_document)
from .normal_form import reduce_pair, verify_normal_form
from .structure import SegreStructure, WeyrStructure, build_weyr_matrix, weyr_decomposition

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_INTERNAL = 3
EXIT_PROPERTY = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def _field_arg(text: str) -> Field:
    try:
        return Field.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _structure(args) -> SegreStructure:
    k = [x for chunk in args.k for x in chunk]
    p = [x for chunk in args.p for x in chunk] if args.p else [1] * len(k)
    try:
        return SegreStructure.from_lists(k, p)
    except StructureError as exc:
        raise UsageError(str(exc)) from None


def _structure_dict(w: WeyrStructure) -> dict:
    return {"r": list(w.r), "m": list(w.m), "segre": [list(x) for x in w.segre.parts]}


def _read_input(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- subcommands ------------------------------------------------------------

def cmd_weyr(args) -> int:
    m = matrix_from_document(loads(_read_input(args.input)))
    if args.field is not None and args.field != m.field:
        m = matrix_from_document({"field": str(args.field), "matrix": m.to_strings()})
    dec = weyr_decomposition(m)
    _emit(args, dumps({"structure": _structure_dict(dec.structure),
                       "W": matrix_to_document(dec.W),
                       "S": matrix_to_document(dec.S)}))
    return EXIT_OK


def commutant_document(j: SegreStructure, field: Field, with_basis: bool = False) -> dict:
    p = h_pattern(j)
    doc = {"k": list(j.sizes), "p": list(j.multiplicities),
           "K": k_matrix(j).to_lists(),
           "H": format_h_grid(p).split("\n"),
           "dimension": sum(sum(sum(row) for row in mask) for mask in p.entry_mask)}
    if with_basis:
        W = build_weyr_matrix(p.weyr, field)
        doc["basis"] = [matrix_to_document(b) for b in commutant_basis(W, p).basis]
    return doc


def cmd_commutant(args) -> int:
    j = _structure(args)
    field = args.field or Field.rational()
    if args.text:
        p = h_pattern(j)
        _emit(args, f"K =\n{format_k_matrix(k_matrix(j))}\n\nH =\n{format_h_grid(p)}\n")
        return EXIT_OK
    _emit(args, dumps(commutant_document(j, field, args.basis)))
    return EXIT_OK


def cmd_reduce(args) -> int:
    pair = pair_from_document(loads(_read_input(args.input)))
    t0 = time.perf_counter()
    res = reduce_pair(pair)
    report = verify_normal_form(res.W, res.B)
    _info(f"reduced {pair.size}x{pair.size} pair ({res.weyr.segre}) in {time.perf_counter() - t0:.3f}s")
    _emit(args, dumps({"structure": _structure_dict(res.weyr),
                       "W": matrix_to_document(res.W),
                       "B": matrix_to_document(res.B),
                       "S": matrix_to_document(res.S),
                       "verification": report.to_dict()}))
    return EXIT_OK if report.ok else EXIT_PROPERTY


def cmd_verify(args) -> int:
    pair = pair_from_document(loads(_read_input(args.input)))
    report = verify_normal_form(pair.m, pair.n)
    _emit(args, dumps(report.to_dict()))
    if not report.ok:
        _info(f"normal-form checks failed: {', '.join(report.failures)}")
    return EXIT_OK if report.ok else EXIT_PROPERTY


def cmd_gen(args) -> int:
    j = _structure(args)
    field = args.field or Field.rational()
    inst = conjugated_normal_pair(j, field, args.seed, nonzero=args.nonzero)
    doc = pair_to_document(inst.pair)
    doc["structure"] = [list(x) for x in j.parts]
    doc["seed"] = args.seed
    if j.t == 1:
        doc["ground_truth"] = {"W": inst.W.to_strings(), "B": inst.B.to_strings()}
    _emit(args, dumps(doc))
    return EXIT_OK


def cmd_selftest(args) -> int:
    failures = 0
    lines = []
    for report in run_selftest(args.max_dim, args.trials, args.seed, args.field,
                               inject_fault=args.inject_fault):
        failures += report.failed
        lines.append(report.to_json() + "\n")
        if report.failed:
            _info(f"FAIL {report.structure} seed={report.seed}: {report.detail}")
    _emit(args, "".join(lines))
    _info(f"selftest: {len(lines)} trials, {failures} failed")
    return EXIT_PROPERTY if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weyrform", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, with_input=False):
        if with_input:
            p.add_argument("input", nargs="?", help="document path (default: stdin)")
        p.add_argument("--field", type=_field_arg, default=None,
                       help="rational or prime:<p>")
        p.add_argument("--out", help="write output here instead of stdout")

    def structure(p):
        p.add_argument("--k", type=_int_list, action="append", required=True,
                       help="strictly decreasing Jordan block sizes, e.g. 7,4,2")
        p.add_argument("--p", type=_int_list, action="append",
                       help="multiplicities (default: all 1)")

    p = sub.add_parser("weyr", help="Weyr canonical form of a nilpotent matrix")
    common(p, with_input=True)
    p.set_defaults(func=cmd_weyr)

    p = sub.add_parser("commutant", help="K matrix, H pattern and commutant dimension")
    common(p)
    structure(p)
    p.add_argument("--basis", action="store_true", help="also emit a commutant basis")
    p.add_argument("--text", action="store_true", help="print K and H as plain text")
    p.set_defaults(func=cmd_commutant)

    p = sub.add_parser("reduce", help="normal form of a commuting nilpotent pair")
    common(p, with_input=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="check that a pair (m=W, n=B) is in normal form")
    common(p, with_input=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="random conjugated normal pair")
    common(p)
    structure(p)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--nonzero", action="store_true", help="draw nonzero stair values only")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("selftest", help="randomized property suites")
    common(p)
    p.add_argument("--max-dim", type=int, default=10)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, UsageError) as exc:
        _info(f"error: {exc}")
        return EXIT_USAGE
    except PreconditionError as exc:
        _info(f"precondition violated: {exc}")
        return EXIT_PRECONDITION
    except ReductionError as exc:
        _info(f"internal error: {exc}")
        return EXIT_INTERNAL


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
