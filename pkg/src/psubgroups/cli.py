"""Command-line entry point: ``psubgroups <command> ...``.

Exit codes: 0 success, 1 a refuted verdict, 2 usage or parse error,
3 capacity skip under ``--strict`` (or a capacity error in a command that
cannot produce partial output).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import group as grp
from .errors import CapacityError, ParseError, PSubgroupsError
from .groupspec import default_corpus_path, load_specs
from .posets import DEFAULT_SYLOW_BOUND, KINDS, build_poset, p_rank
from .topology import order_complex, read_complex_text, reduced_homology
from .verify import (
    ALL_CLAIMS,
    DEFAULT_FAMILY_BOUND,
    RunOptions,
    Verdict,
    _timed,
    brown_check,
    corpus_run,
    dimension_check,
    invariance_check,
    lemmaprank_check,
    normal_stab_check,
    normal_stabilizer_search,
    os_index_check,
    prank_check,
    quillen_check,
    retract_check,
    separating_check,
)

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
SINGLE_CLAIMS = ("brown", "quillen", "invariance", "prank", "separating", "os-index", "normal-stab",
                 "retract:H", "lemmaprank:N", "dimension:L1,L2")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not grp.is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="psubgroups", description="p-subgroup posets, their homology and claim checks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def bounds(p):
        p.add_argument("--element-bound", type=_positive, default=grp.DEFAULT_ELEMENT_BOUND)
        p.add_argument("--sylow-bound", type=_positive, default=DEFAULT_SYLOW_BOUND)
        p.add_argument("--strict", action="store_true", help="exit 3 when a capacity bound is hit")

    info = sub.add_parser("group-info", help="order, solvability and p-local data")
    info.add_argument("spec")
    info.add_argument("--group", help="group name inside the spec file (default: last)")
    info.add_argument("--prime", type=_prime)
    bounds(info)

    pos = sub.add_parser("poset", help="build and export a p-subgroup poset")
    pos.add_argument("spec")
    pos.add_argument("--group")
    pos.add_argument("--prime", type=_prime, required=True)
    pos.add_argument("--kind", choices=KINDS, default="Sp")
    pos.add_argument("--export", help="write the poset file here ('-' for stdout)")
    pos.add_argument("--export-complex", help="write the order complex file here")
    bounds(pos)

    hom = sub.add_parser("homology", help="reduced homology of a complex or poset file")
    hom.add_argument("file")

    ver = sub.add_parser("verify", help="check one claim on one group")
    ver.add_argument("spec")
    ver.add_argument("--group")
    ver.add_argument("--prime", type=_prime)
    ver.add_argument("--claim", required=True, help="one of " + ", ".join(SINGLE_CLAIMS))
    ver.add_argument("--kind", choices=KINDS, help="poset for normal-stab (default: automatic)")
    ver.add_argument("--family-bound", type=_positive, default=DEFAULT_FAMILY_BOUND)
    bounds(ver)

    cor = sub.add_parser("corpus", help="run the claim harness over a corpus file")
    cor.add_argument("corpus", help="corpus file, or 'default' for the shipped corpus")
    cor.add_argument("--claims", default="all", help="comma-separated claims or 'all'")
    cor.add_argument("--jobs", type=_positive, default=1)
    cor.add_argument("--stretch", action="store_true", help="include stretch entries")
    cor.add_argument("--out", help="text report path (default: stdout)")
    cor.add_argument("--json", help="JSON report path (default: next to --out)")
    cor.add_argument("--family-bound", type=_positive, default=DEFAULT_FAMILY_BOUND)
    bounds(cor)
    return parser


def _config(args, keys) -> str:
    return "config command=" + args.command + "".join(f" {k}={getattr(args, k.replace('-', '_'))}" for k in keys)


def _load_group(args):
    book = load_specs(args.spec)
    name = args.group or book.subject
    G = book.build(name, args.element_bound)
    G.name = name
    return book, G


def cmd_group_info(args) -> int:
    print(_config(args, ["spec", "group", "prime", "element-bound", "sylow-bound"]))
    _, G = _load_group(args)
    print(f"group {G.name} degree {G.degree} order {G.order}")
    G.table  # noqa: B018 - everything below needs the element table
    print(f"solvable {str(grp.is_solvable(G)).lower()}")
    primes = [args.prime] if args.prime else grp.prime_divisors(G.order)
    for p in primes:
        core = grp.p_core(G, p)
        sylow = grp.sylow_subgroup(G, p)
        rank = p_rank(G, p, args.sylow_bound).rank if G.order % p == 0 else 0
        print(f"p={p} sylow_order {sylow.order} op_order {core.order} p_rank {rank}")
    return EXIT_OK


def cmd_poset(args) -> int:
    print(_config(args, ["spec", "group", "prime", "kind", "element-bound", "sylow-bound"]))
    _, G = _load_group(args)
    X = build_poset(G, args.prime, args.kind, args.sylow_bound)
    print(f"poset kind {args.kind} elements {len(X)} covers {len(X.covers())} height {X.height()}")
    if args.export:
        _write(args.export, X.to_text())
    if args.export_complex:
        _write(args.export_complex, order_complex(X).to_text())
    return EXIT_OK


def _write(target: str, text: str) -> None:
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def cmd_homology(args) -> int:
    print(_config(args, ["file"]))
    path = Path(args.file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", 0, 0, str(path)) from None
    C = read_complex_text(text, str(path))
    print("f-vector " + " ".join(map(str, C.f_vector)))
    for line in reduced_homology(C).lines():
        print(line)
    return EXIT_OK


def _subgroup_arg(book, G, name: str):
    if name == "1":
        return G.trivial
    H = book.build(name, G.element_bound)
    return grp._within(G, H)[1]


def cmd_verify(args) -> int:
    print(_config(args, ["spec", "group", "prime", "claim", "kind", "element-bound", "sylow-bound", "family-bound"]))
    book, G = _load_group(args)
    claim, _, arg = args.claim.partition(":")
    needs_prime = claim not in ("separating", "os-index")
    if needs_prime and args.prime is None:
        raise _UsageError(f"claim {claim!r} needs --prime")
    p, sb = args.prime, args.sylow_bound
    runners = {
        "brown": lambda: brown_check(G, p, sb),
        "quillen": lambda: quillen_check(G, p, sb),
        "invariance": lambda: invariance_check(G, p, sb),
        "prank": lambda: prank_check(G, p, sb),
        "separating": lambda: separating_check(G, args.family_bound),
        "os-index": lambda: os_index_check(G, args.family_bound),
    }
    if claim in runners and not arg:
        run = runners[claim]
    elif claim == "normal-stab" and not arg:
        if args.kind:
            run = lambda: normal_stabilizer_search(G, build_poset(G, p, args.kind, sb), p=p)  # noqa: E731
        else:
            run = lambda: normal_stab_check(G, p, sb)  # noqa: E731
    elif claim == "retract":
        subs = [_subgroup_arg(book, G, n) for n in arg.split(",")] if arg else None
        run = lambda: retract_check(G, p, subs, sb)  # noqa: E731
    elif claim == "lemmaprank":
        subs = [_subgroup_arg(book, G, n) for n in arg.split(",")] if arg else None
        run = lambda: lemmaprank_check(G, p, subs, sb)  # noqa: E731
    elif claim == "dimension" and arg.count(",") == 1:
        a, b = arg.split(",")
        run = lambda: dimension_check(G, _subgroup_arg(book, G, a), _subgroup_arg(book, G, b), p, sb)  # noqa: E731
    else:
        raise _UsageError(f"unknown claim {args.claim!r}; expected one of {', '.join(SINGLE_CLAIMS)}")
    verdict: Verdict = _timed(run)
    verdict.claim = verdict.claim or claim
    verdict.group = verdict.group or G.name
    if verdict.prime is None and needs_prime:
        verdict.prime = p
    print(verdict.line())
    return _exit_for([verdict], args.strict)


def _exit_for(verdicts, strict: bool) -> int:
    if any(v.status == "refuted" for v in verdicts):
        return EXIT_REFUTED
    if strict and any(v.status == "skipped-capacity" for v in verdicts):
        return EXIT_CAPACITY
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.claims == "all":
        claims = ALL_CLAIMS
    else:
        claims = tuple(c.strip() for c in args.claims.split(",") if c.strip())
        unknown = [c for c in claims if c not in ALL_CLAIMS]
        if unknown:
            raise _UsageError(f"unknown claims {unknown}; choose from {', '.join(ALL_CLAIMS)}")
    path = default_corpus_path() if args.corpus == "default" else Path(args.corpus)
    options = RunOptions(tuple(c for c in ALL_CLAIMS if c in claims), args.jobs, args.stretch,
                         args.element_bound, args.sylow_bound, args.family_bound)
    report = corpus_run(path, options=options)
    if args.corpus == "default":
        report.config = report.config.replace(f"corpus={path}", "corpus=default", 1)
    report.config += f" strict={str(args.strict).lower()}"
    text = report.to_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        json_path = args.json or str(Path(args.out).with_suffix(".json"))
        Path(json_path).write_text(report.to_json(), encoding="utf-8")
        print(report.summary_line())
    else:
        sys.stdout.write(text)
        if args.json:
            Path(args.json).write_text(report.to_json(), encoding="utf-8")
    return _exit_for(report.verdicts, args.strict)


class _UsageError(Exception):
    pass


COMMANDS = {
    "group-info": cmd_group_info,
    "poset": cmd_poset,
    "homology": cmd_homology,
    "verify": cmd_verify,
    "corpus": cmd_corpus,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"psubgroups: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"psubgroups: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"psubgroups: capacity: {exc} (bound: {exc.bound})", file=sys.stderr)
        return EXIT_CAPACITY
    except PSubgroupsError as exc:
        print(f"psubgroups: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run_cli(argv: list[str] | None = None) -> int:
    """Like :func:`main` but also maps argparse exits to return codes."""
    try:
        return main(argv)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    raise SystemExit(main())
