"""Command-line interface: build, lookup, access, info, bench and gen-urls.

Exit codes: 0 ok, 1 usage error, 2 data error, 3 lookup found nothing.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as dio
from ._binary import FormatError
from .baseline import PfcDictionary
from .core import LCP_MODES, DISPLAY_NAMES, TERM_MODES, VARIANTS, BuildConfig, CorpusError, build
from .urlgen import UrlCorpusConfig, generate_urls

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NOT_FOUND = 0, 1, 2, 3
NOT_FOUND = "NOT_FOUND"
CSV_COLUMNS = ("variant", "bytes", "ratio", "lookup_ns", "access_ns", "queries", "iters", "seed")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _write_line(data: bytes) -> None:
    buf = getattr(sys.stdout, "buffer", None)
    if buf is None:
        sys.stdout.write(data.decode("utf-8", "backslashreplace") + "\n")
    else:
        sys.stdout.flush()
        buf.write(data + b"\n")
        buf.flush()


def _label(d) -> str:
    return d.label if isinstance(d, PfcDictionary) else d.config.label


# -- build ---------------------------------------------------------------------


def cmd_build(args) -> int:
    result = dio.ingest(args.input)
    if args.pfc_bucket is not None or args.variant == "pfc":
        d = PfcDictionary.build(result.corpus, args.pfc_bucket or 16)
    else:
        d = build(result.corpus, BuildConfig(args.variant, args.lcp, args.term, args.dac_width))
    size = dio.save(d, args.output)
    print(f"strings: {len(result.corpus)} (duplicates dropped: {result.duplicates}, blank lines: {result.blank_lines})")
    print(f"n: {d.n}")
    _print_sizes(d, size)
    return EXIT_OK


def _print_sizes(d, total: int) -> None:
    sizes = dio.section_sizes(d)
    header = total - sum(sizes.values())
    print(f"variant: {_label(d)}")
    print(f"  {'header':<8}{header:>12}")
    for tag, size in sizes.items():
        print(f"  {tag:<8}{size:>12}")
    ratio = total / d.raw_bytes if d.raw_bytes else float("nan")
    print(f"  {'total':<8}{total:>12}  ({100 * ratio:.2f}% of {d.raw_bytes} input bytes)")


# -- queries -------------------------------------------------------------------


def cmd_lookup(args) -> int:
    d = dio.load(args.dict)
    queries = [os.fsencode(s) for s in args.strings]
    if args.stdin:
        queries += [line for line in sys.stdin.buffer.read().split(b"\n") if line]
    missing = False
    for q in queries:
        pos = d.lookup(q)
        if pos is None:
            missing = True
            print(NOT_FOUND)
        else:
            print(pos - 1 if args.dense else pos)
    return EXIT_NOT_FOUND if missing else EXIT_OK


def cmd_access(args) -> int:
    d = dio.load(args.dict)
    for raw in args.ids:
        try:
            pos = int(raw) + (1 if args.dense else 0)
        except ValueError:
            raise UsageError(f"id {raw!r} is not an integer") from None
        if not 1 <= pos <= d.n - 2:
            print(f"error: id {raw} out of range", file=sys.stderr)
            return EXIT_DATA
        _write_line(d.access(pos))
    return EXIT_OK


# -- info ----------------------------------------------------------------------


def cmd_info(args) -> int:
    data = Path(args.dict).read_bytes()
    header = dio.read_header(data)
    d = dio.deserialize(data)
    print(f"variant: {header.label}", end="")
    if not isinstance(d, PfcDictionary):
        print(f" ({DISPLAY_NAMES[d.config.variant]})")
    else:
        print(" (PFC baseline)")
    print(f"n: {d.n} ({d.n - 2} strings + 2 sentinels)")
    print(f"input bytes: {d.raw_bytes}")
    print(f"file bytes: {len(data)}")
    print(f"header bytes: {header.size}")
    print("sections:")
    for tag, off, length in header.sections:
        print(f"  {tag:<6}{length:>12}  @{off}")
    print(f"sections total: {sum(length for _, _, length in header.sections)}")
    if isinstance(d, PfcDictionary):
        print(f"bucket size: {d.bucket} ({len(d.offsets)} buckets)")
        return EXIT_OK
    for name, store in (("llcp", d.llcp), ("rlcp", d.rlcp)):
        if store is None:
            continue
        values = [store[i] for i in range(d.n)]
        print(f"{name}: max {max(values)}, mean {sum(values) / len(values):.2f}"
              + (f", DAC width {d.config.dac_width}" if d.config.dac_lcp else f", fixed width {store.width}"))
    tail_bytes = sum(len(d.tail(i)) for i in range(d.n))
    print(f"tail bytes: {tail_bytes} logical, {d.tails.stored_bytes()} stored")
    grammar = getattr(d.tails, "grammar", None)
    if grammar is not None:
        print(f"grammar: sigma {grammar.sigma}, {len(grammar.rules)} rules")
    return EXIT_OK


# -- bench ---------------------------------------------------------------------


@dataclass
class QuerySet:
    positions: list[int]
    strings: list[bytes]
    seed: int

    @classmethod
    def sample(cls, d, count: int, seed: int) -> "QuerySet":
        rng = np.random.default_rng(seed)
        positions = rng.integers(1, d.n - 1, size=count).tolist() if count else []
        return cls(positions, [d.access(p) for p in positions], seed)


@dataclass
class BenchRow:
    variant: str
    bytes: int
    ratio: float
    lookup_ns: float | None
    access_ns: float | None
    queries: int
    iters: int
    seed: int

    def cells(self) -> list[str]:
        fmt = lambda v: "" if v is None else f"{v:.1f}"
        return [self.variant, str(self.bytes), f"{self.ratio:.6f}", fmt(self.lookup_ns), fmt(self.access_ns),
                str(self.queries), str(self.iters), str(self.seed)]


def check_answers(d, qs: QuerySet) -> None:
    for p, s in zip(qs.positions, qs.strings):
        got = d.access(p)
        if got != s:
            raise AnswerMismatch(f"{_label(d)}: access({p}) returned {got!r}, expected {s!r}")
        found = d.lookup(s)
        if found != p:
            raise AnswerMismatch(f"{_label(d)}: lookup({s!r}) returned {found}, expected {p}")


class AnswerMismatch(Exception):
    pass


def _time_per_query(fn, items, iters: int) -> float:
    start = time.perf_counter_ns()
    for _ in range(iters):
        for x in items:
            fn(x)
    return (time.perf_counter_ns() - start) / (len(items) * iters)


def run_bench(paths: list[str], queries: int, iters: int, seed: int, threads: int = 0) -> list[BenchRow]:
    loaded = []
    for path in paths:
        size = os.path.getsize(path)
        loaded.append((dio.load(path), size))
    first = loaded[0][0]
    for d, _ in loaded[1:]:
        if d.n != first.n or d.checksum != first.checksum:
            raise CorpusError(f"{_label(d)} was not built from the same corpus as {_label(first)}")
    qs = QuerySet.sample(first, queries, seed)
    rows = []
    for d, size in sorted(loaded, key=lambda item: _label(item[0])):
        check_answers(d, qs)
        if threads > 1 and queries:
            with ThreadPoolExecutor(threads) as pool:
                for fut in [pool.submit(check_answers, d, qs) for _ in range(threads)]:
                    fut.result()
        lookup_ns = access_ns = None
        if queries and iters:
            lookup_ns = _time_per_query(d.lookup, qs.strings, iters)
            access_ns = _time_per_query(d.access, qs.positions, iters)
        rows.append(BenchRow(_label(d), size, size / d.raw_bytes if d.raw_bytes else float("nan"),
                             lookup_ns, access_ns, queries, iters, seed))
    return rows


def cmd_bench(args) -> int:
    rows = run_bench(args.dicts, args.queries, args.iters, args.seed, args.threads)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.cells())
    return EXIT_OK


# -- corpus generator ------------------------------------------------------------


def cmd_gen_urls(args) -> int:
    urls = generate_urls(UrlCorpusConfig(count=args.count, seed=args.seed))
    Path(args.output).write_bytes(b"\n".join(urls) + b"\n")
    mean = sum(len(u) + 1 for u in urls) / len(urls)
    print(f"wrote {len(urls)} URLs to {args.output} (mean length {mean:.2f} incl. terminator)")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ibisdict", description="Compressed static string dictionaries.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build a dictionary from an LF-delimited file")
    b.add_argument("input")
    b.add_argument("output")
    b.add_argument("--variant", choices=VARIANTS + ("pfc",), default="rp-dac")
    b.add_argument("--lcp", choices=LCP_MODES, default="both")
    b.add_argument("--term", choices=TERM_MODES, default="strip")
    b.add_argument("--dac-width", type=int, default=7)
    b.add_argument("--pfc-bucket", type=int, default=None, help="build the PFC baseline with this bucket size")
    b.set_defaults(func=cmd_build)

    lk = sub.add_parser("lookup", help="print the id of each string")
    lk.add_argument("dict")
    lk.add_argument("strings", nargs="*")
    lk.add_argument("--stdin", action="store_true", help="also read LF-delimited queries from stdin")
    lk.add_argument("--dense", action="store_true", help="report 0-based dense ids")
    lk.set_defaults(func=cmd_lookup)

    ac = sub.add_parser("access", help="print the string of each id")
    ac.add_argument("dict")
    ac.add_argument("ids", nargs="+")
    ac.add_argument("--dense", action="store_true", help="ids are 0-based dense ids")
    ac.set_defaults(func=cmd_access)

    be = sub.add_parser("bench", help="time lookup/access over a random query set, CSV on stdout")
    be.add_argument("dicts", nargs="+")
    be.add_argument("--queries", type=int, default=10_000)
    be.add_argument("--iters", type=int, default=100)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--threads", type=int, default=0, help="re-check answers with this many reader threads")
    be.set_defaults(func=cmd_bench)

    inf = sub.add_parser("info", help="summarise a dictionary file")
    inf.add_argument("dict")
    inf.set_defaults(func=cmd_info)

    g = sub.add_parser("gen-urls", help="write a seeded synthetic URL corpus")
    g.add_argument("output")
    g.add_argument("--count", type=int, default=100_000)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_gen_urls)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        if getattr(args, "dac_width", 7) < 1 or getattr(args, "queries", 0) < 0:
            raise UsageError("numeric arguments must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, FormatError, AnswerMismatch, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
