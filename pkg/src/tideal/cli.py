"""Command-line entry point: ``tideal run | corpus | check | fmt``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import graded as gr
from .closure import DEFAULT_MAX_N
from .lang import parse
from .runner import CORPUS, EXIT_DIAG, EXIT_INVARIANT, EXIT_OK, RunFlags, load_corpus, run, to_json, to_text


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="search bound for witnesses")
    p.add_argument("--window", type=int, default=gr.MAX_RING_DEGREE,
                   help="largest degree searched for ring stabilization")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    p.add_argument("--no-timing", action="store_true", help="report 0 ms everywhere (stable output)")


def _flags(args) -> RunFlags:
    if args.max_n < 1:
        raise SystemExit("--max-n must be positive")
    return RunFlags(args.max_n, args.window, args.seed, not args.no_timing)


def _emit(report: dict, fmt: str) -> int:
    sys.stdout.write(to_json(report) + "\n" if fmt == "json" else to_text(report))
    return report["exit_code"]


def cmd_run(args) -> int:
    text = Path(args.script).read_text(encoding="utf-8")
    return _emit(run(text, _flags(args)), args.format)


def cmd_corpus(args) -> int:
    names = CORPUS if args.name == "all" else [args.name]
    worst = EXIT_OK
    for name in names:
        try:
            text = load_corpus(name)
        except ValueError as err:
            print(err, file=sys.stderr)
            return EXIT_DIAG
        if len(names) > 1:
            print(f"== {name}")
        worst = max(worst, _emit(run(text, _flags(args)), args.format))
    return worst


def cmd_check(args) -> int:
    from .props import run_all
    failed = 0
    for res in run_all(args.count, args.seed):
        status = "pass" if res.failures == 0 else "FAIL"
        print(f"{status} {res.name}: {res.instances} instances, {res.checked} checks, "
              f"{res.replayed} certificates replayed, {res.failures} failures")
        for note in res.notes:
            print(f"    {note}")
        failed += res.failures
    return EXIT_OK if failed == 0 else EXIT_INVARIANT


def cmd_fmt(args) -> int:
    script = parse(Path(args.script).read_text(encoding="utf-8"))
    for d in script.diagnostics:
        print(d, file=sys.stderr)
    if not script.ok:
        return EXIT_DIAG
    sys.stdout.write(script.pretty())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tideal", description="Exact t-closure and t-integral closure "
                                 "computations on graded subrings of K[x].")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a script file")
    p.add_argument("script")
    _add_run_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("corpus", help="run a bundled fixture script")
    p.add_argument("name", help=f"one of {', '.join(CORPUS)}, or all")
    _add_run_flags(p)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("check", help="run every randomized property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200, help="instances per suite")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fmt", help="parse a script and print its canonical form")
    p.add_argument("script")
    p.set_defaults(func=cmd_fmt)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except gr.InvariantError as err:
        print(f"internal invariant violated: {err}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as err:
        print(err, file=sys.stderr)
        return EXIT_DIAG


if __name__ == "__main__":
    sys.exit(main())
