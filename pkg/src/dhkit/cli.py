"""Command line front end: ``dhkit <subcommand>``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from typing import Iterator, TextIO

from . import workbench
from .classifier import certify, classify
from .graph import Graph, Graph6Error, is_connected, parse_graph6, to_graph6
from .modular import modular_decomposition, serialize_md
from .oracles import SizeLimitError
from .pruning import prune_dh
from .splittree import build_split_tree, serialize_tree

log = logging.getLogger("dhkit")

EXIT_OK, EXIT_OUT, EXIT_PARSE = 0, 1, 2


class _ParseFailure(Exception):
    def __init__(self, lineno: int, err: Graph6Error):
        super().__init__(f"line {lineno}: {err}")


def _open(path: str) -> TextIO:
    return sys.stdin if path == "-" else open(path, encoding="ascii")


def _graphs(path: str) -> Iterator[Graph]:
    stream = _open(path)
    try:
        for lineno, line in enumerate(stream, 1):
            line = line.strip()
            if not line:
                continue
            try:
                yield parse_graph6(line)
            except Graph6Error as exc:
                raise _ParseFailure(lineno, exc) from None
    finally:
        if stream is not sys.stdin:
            stream.close()


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def cmd_classify(args) -> int:
    code = EXIT_OK
    for g in _graphs(args.file):
        rep = classify(g)
        _emit(rep.to_dict())
        if not rep.in_class:
            code = EXIT_OUT
    return code


def cmd_certify(args) -> int:
    for g in _graphs(args.file):
        _emit(certify(g).to_dict())
    return EXIT_OK


def _split_text(g: Graph, fmt: str) -> str:
    if g.n == 0 or not is_connected(g):
        raise ValueError("split decomposition needs a connected graph")
    seq = prune_dh(g)
    if seq is None:
        raise ValueError("not distance-hereditary: pruning stalls")
    return serialize_tree(build_split_tree(g, seq), fmt)


def cmd_decompose(args) -> int:
    code = EXIT_OK
    for g in _graphs(args.file):
        try:
            if args.modular:
                text = serialize_md(modular_decomposition(g), args.format)
            else:
                text = _split_text(g, args.format)
        except ValueError as exc:
            log.error("%s: %s", to_graph6(g), exc)
            if args.format == "json":
                _emit({"graph6": to_graph6(g), "error": str(exc)})
            code = EXIT_OUT
            continue
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


def _sizes(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def cmd_census(args) -> int:
    rows = []
    if args.input:
        graphs = list(_graphs(args.input))
        ns = sorted({g.n for g in graphs})
        for n in ns:
            rows.append(workbench.census(n, (g for g in graphs if g.n == n)))
    else:
        for n in _sizes(args.n):
            rows.append(workbench.census(n))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(workbench.CENSUS_FIELDS)
    for r in rows:
        w.writerow(r.as_tuple())
    if args.plot:
        from .plotting import plot_census

        plot_census(rows, args.plot)
        log.info("wrote %s", args.plot)
    return EXIT_OK


def cmd_validate(args) -> int:
    rep = workbench.cross_validate(args.n, fault=args.fault_inject, threads=args.threads)
    for line in rep.lines():
        sys.stdout.write(line + "\n")
    summary = ", ".join(f"{k}={v}" for k, v in sorted(rep.failures.items())) or "none"
    log.info("n=%d graphs=%d discrepancies: %s", rep.n, rep.graphs, summary)
    for check, secs in sorted(rep.seconds.items()):
        log.debug("%-20s %.1fs", check, secs)
    return EXIT_OK if rep.empty else EXIT_OUT


def cmd_gen(args) -> int:
    for i in range(args.count):
        g = workbench.gen_instance(args.n, args.seed + i)
        sys.stdout.write(to_graph6(g) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = workbench.bench(_sizes(args.sizes), args.seed, args.repeats)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(workbench.BENCH_FIELDS)
    for r in rows:
        w.writerow(["" if x is None else (f"{x:.6g}" if isinstance(x, float) else x)
                    for x in r.as_tuple()])
    if args.plot:
        from .plotting import plot_bench

        plot_bench(rows, args.plot)
        log.info("wrote %s", args.plot)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dhkit", description=__doc__)
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="one JSON class report per graph6 line")
    s.add_argument("file", nargs="?", default="-")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("certify", help="one JSON certificate per graph6 line")
    s.add_argument("file", nargs="?", default="-")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("decompose", help="split or modular decomposition trees")
    which = s.add_mutually_exclusive_group(required=True)
    which.add_argument("--split", action="store_true")
    which.add_argument("--modular", action="store_true")
    s.add_argument("--format", choices=("json", "dot"), default="json")
    s.add_argument("file", nargs="?", default="-")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("census", help="CSV class counts up to isomorphism")
    s.add_argument("-n", default="1-6", help="N, a list 4,5 or a range 1-7 (enumeration needs N <= 7)")
    s.add_argument("--input", help="graph6 file of non-isomorphic graphs instead of enumerating")
    s.add_argument("--plot", metavar="PNG", help="also write a figure of the counts")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("validate", help="exhaustive cross-validation over labelled graphs")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--fault-inject", action="store_true", help="substitute a broken recognizer")
    s.add_argument("--threads", type=int, default=None, help="defaults to DHKIT_THREADS or the CPU count")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("gen", help="random in-class graphs as graph6 lines")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=1)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="CSV timing table for fast_recognize")
    s.add_argument("--sizes", required=True, help="comma separated vertex counts")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--repeats", type=int, default=1, help="keep the fastest of this many runs")
    s.add_argument("--plot", metavar="PNG", help="also write a log-log scaling figure")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    if args.command in ("validate", "census", "bench"):
        level = min(level, logging.INFO)
    logging.basicConfig(level=level, format="%(levelname)s %(message)s", stream=sys.stderr)
    code = EXIT_OK
    try:
        code = args.func(args)
        sys.stdout.flush()
        return code
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the exit-time flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return code
    except _ParseFailure as exc:
        log.error("parse error: %s", exc)
        return EXIT_PARSE
    except (SizeLimitError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
