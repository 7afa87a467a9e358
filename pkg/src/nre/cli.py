"""Command-line front end: ``nre eval | contain | translate | encode | sample``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from .a2fa import eliminate_epsilon, trim
from .containment import STRATEGIES, contains
from .evaluate import eval_check, eval_nre
from .graph import GraphFormatError, KBranchTree, load_graph, render_word, trans
from .oracle import EnumSpec, oracle_contains
from .syntax import NreSyntaxError, labels, nesting_depth, parse, render
from .translate import compile_gen, compile_sp, mark_gen, mark_se, symbols_for
from .corpus import random_nre
from .verdict import CONTAINED, NOT_CONTAINED, UNKNOWN

EXIT_CODES = {CONTAINED: 0, NOT_CONTAINED: 1, UNKNOWN: 3}
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _query(text: str, what: str = "query"):
    try:
        return parse(text)
    except NreSyntaxError as exc:
        raise InputError(f"bad {what} {text!r}: {exc}") from None


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


# -- eval ---------------------------------------------------------------------


def cmd_eval(args) -> int:
    e = _query(args.query)
    try:
        g = load_graph(_read(args.graph))
    except GraphFormatError as exc:
        raise InputError(f"{args.graph}: {exc}") from None
    if (args.source is None) != (args.target is None):
        raise InputError("--from and --to go together")
    if args.source is not None:
        try:
            ok = eval_check(e, g, args.source, args.target)
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
        print(json.dumps(ok) if args.format == "json" else str(ok).lower())
        return 0
    pairs = sorted(eval_nre(e, g))
    if args.format == "json":
        print(json.dumps([list(p) for p in pairs]))
    else:
        for u, v in pairs:
            print(f"{u}\t{v}")
    return 0


# -- contain --------------------------------------------------------------------


def _decide(lhs: str, rhs: str, mode: str, strategy: str, max_len, budget, k):
    e1, e2 = _query(lhs, "left-hand side"), _query(rhs, "right-hand side")
    opts = {"strategy": strategy, "budget": budget}
    if max_len is not None:
        opts["max_len"] = max_len
    if mode == "general" and k is not None:
        opts["k"] = k
    return contains(e1, e2, mode, **opts)


def _verdict_json(lhs, rhs, v) -> dict:
    out = {"lhs": lhs, "rhs": rhs, "verdict": v.outcome, "bounded": v.bounded, "note": v.note}
    if v.not_contained:
        out["counterexample"] = [list(e) for e in sorted(v.counterexample.edges)]
        out["nodes"] = sorted(v.counterexample.nodes)
        out["pair"] = list(v.pair)
        out["witness"] = v.witness
    return out


def _batch_line(job):
    lhs, rhs, mode, strategy, max_len, budget, k = job
    try:
        v = _decide(lhs, rhs, mode, strategy, max_len, budget, k)
    except InputError as exc:
        return f"{lhs}\t{rhs}\tERROR\t{exc}"
    return f"{lhs}\t{rhs}\t{v.describe()}"


def cmd_contain(args) -> int:
    if args.batch:
        jobs = []
        for lineno, line in enumerate(_read(args.batch).splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise InputError(f"{args.batch}: line {lineno}: expected lhs<TAB>rhs")
            jobs.append((parts[0], parts[1], args.mode, args.strategy, args.max_len, args.state_budget, args.k))
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                lines = list(pool.map(_batch_line, jobs))
        else:
            lines = [_batch_line(j) for j in jobs]
        for line in lines:
            print(line)
        return 0
    if args.lhs is None or args.rhs is None:
        raise InputError("--lhs and --rhs are required (or use --batch)")
    v = _decide(args.lhs, args.rhs, args.mode, args.strategy, args.max_len, args.state_budget, args.k)
    if args.format == "json":
        print(json.dumps(_verdict_json(args.lhs, args.rhs, v)))
    else:
        print(v.describe())
        if v.not_contained:
            sys.stdout.write(v.counterexample.to_tsv())
            print(f"({v.pair[0]},{v.pair[1]})")
        elif v.note:
            print(f"# {v.note}")
    return EXIT_CODES[v.outcome]


# -- translate / encode ------------------------------------------------------------


def cmd_translate(args) -> int:
    e = _query(args.query)
    if args.mode == "semipath":
        m = compile_sp(e)
        a = mark_se(m) if args.marked else m.automaton
    else:
        k = args.k if args.k is not None else nesting_depth(e)
        if k < 1:
            raise InputError("--k must be at least 1")
        m = compile_gen(e, k, symbols_for(labels(e)))
        a = mark_gen(m, k) if args.marked else m.automaton
    a = trim(eliminate_epsilon(a))
    print(a.to_dot() if args.format == "dot" else a.to_json(), end="")
    return 0


def cmd_encode(args) -> int:
    try:
        t = KBranchTree.from_json(_read(args.tree))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad tree: {exc}") from None
    print(render_word(trans(t)))
    return 0


def cmd_sample(args) -> int:
    rng = random.Random(args.seed)
    for _ in range(args.count):
        e1 = random_nre(rng, args.max_size, max_depth=args.max_depth)
        e2 = random_nre(rng, args.max_size, max_depth=args.max_depth)
        print(f"{render(e1)}\t{render(e2)}")
    return 0


def cmd_oracle(args) -> int:
    e1, e2 = _query(args.lhs, "left-hand side"), _query(args.rhs, "right-hand side")
    base = tuple(sorted(labels(e1) | labels(e2)))
    v = oracle_contains(e1, e2, EnumSpec(base, args.max_size, args.k), args.mode)
    print(v.describe())
    if v.not_contained:
        sys.stdout.write(v.counterexample.to_tsv())
        print(f"({v.pair[0]},{v.pair[1]})")
    return EXIT_CODES[v.outcome]


# -- wiring ------------------------------------------------------------------------


def _positive(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nre", description="Nested regular expressions over graph databases.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{eval,contain,translate,encode,sample}")

    p = sub.add_parser("eval", help="evaluate a query over a TSV edge list")
    p.add_argument("-g", "--graph", required=True, help="source<TAB>label<TAB>target file ('-' for stdin)")
    p.add_argument("-q", "--query", required=True)
    p.add_argument("--from", dest="source", help="check a single pair: source node")
    p.add_argument("--to", dest="target", help="check a single pair: target node")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("contain", help="decide whether LHS is contained in RHS")
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    p.add_argument("--mode", choices=("semipath", "general"), default="semipath")
    p.add_argument("--strategy", choices=STRATEGIES, default="exact")
    p.add_argument("--max-len", type=_positive, help="bound for the bounded strategy (letters, or tree edges)")
    p.add_argument("--state-budget", type=_positive, help="cap on explored product states (default $NRE_STATE_BUDGET)")
    p.add_argument("--k", type=int, help="branching bound for --mode general (default: nesting depth of LHS)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--batch", help="file of lhs<TAB>rhs lines; prints one verdict per line")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for --batch")
    p.set_defaults(func=cmd_contain)

    p = sub.add_parser("translate", help="dump the automaton compiled from a query")
    p.add_argument("-q", "--query", required=True)
    p.add_argument("--mode", choices=("semipath", "general"), default="semipath")
    p.add_argument("--k", type=int)
    p.add_argument("--marked", action="store_true", help="compile the S/E endpoint-marked variant")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("encode", help="encode a k-branch semipath given as JSON")
    p.add_argument("tree", help='JSON file ("-" for stdin): {"k": 1, "edges": [{"parent": "1", "child": "11", "label": "a"}]}')
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("sample", help="print seeded random expression pairs (input for contain --batch)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=_positive, default=10)
    p.add_argument("--max-size", type=_positive, default=8)
    p.add_argument("--max-depth", type=_positive, default=2)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("oracle-contain", help=argparse.SUPPRESS)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--mode", choices=("semipath", "kbranch"), default="semipath")
    p.add_argument("--max-size", type=_positive, default=4)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"nre: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
