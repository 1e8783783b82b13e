"""Space/time trade-off: build a handful of dictionaries and time them with the bench harness.

    python3 scripts/space_time.py --count 100000 --queries 2000 --iters 5 --out /tmp/st
"""

from __future__ import annotations

import argparse
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ibisdict import BuildConfig, Corpus, PfcDictionary, build, save
from ibisdict.cli import CSV_COLUMNS, run_bench
from ibisdict.urlgen import UrlCorpusConfig, generate_urls

CONFIGS = (
    BuildConfig("plain", "both"),
    BuildConfig("rp", "both"),
    BuildConfig("rp-dac", "both"),
    BuildConfig("rp-dac", "left"),
    BuildConfig("rp-dacvls", "both"),
    BuildConfig("rp-dac-dacvls", "left"),
)
PFC_BUCKETS = (4, 16, 64)


@dataclass(frozen=True)
class Experiment:
    count: int = 100_000
    seed: int = 0
    queries: int = 2000
    iters: int = 5


def run(exp: Experiment, out: Path) -> list[list[str]]:
    corpus = Corpus.from_strings(generate_urls(UrlCorpusConfig(exp.count, exp.seed)))[0]
    paths = []
    for cfg in CONFIGS:
        paths.append(out / f"{cfg.label.replace(':', '_')}.ibis")
        save(build(corpus, cfg), paths[-1])
    for b in PFC_BUCKETS:
        paths.append(out / f"pfc_{b}.ibis")
        save(PfcDictionary.build(corpus, b), paths[-1])
    return [row.cells() for row in run_bench([str(p) for p in paths], exp.queries, exp.iters, exp.seed)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=Experiment.count)
    ap.add_argument("--seed", type=int, default=Experiment.seed)
    ap.add_argument("--queries", type=int, default=Experiment.queries)
    ap.add_argument("--iters", type=int, default=Experiment.iters)
    ap.add_argument("--out", type=Path, help="keep the built dictionaries here")
    args = ap.parse_args()
    exp = Experiment(args.count, args.seed, args.queries, args.iters)
    with tempfile.TemporaryDirectory() as tmp:
        out = args.out or Path(tmp)
        out.mkdir(parents=True, exist_ok=True)
        rows = run(exp, out)
    print(",".join(CSV_COLUMNS))
    for cells in sorted(rows, key=lambda c: int(c[1])):
        print(",".join(cells))


if __name__ == "__main__":
    main()
