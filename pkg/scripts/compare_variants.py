"""Space table for every variant and mode on a synthetic URL corpus.

    python3 scripts/compare_variants.py --count 100000 --seed 0
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from itertools import product

from ibisdict import BuildConfig, Corpus, PfcDictionary, build_family, serialize
from ibisdict.baseline import BUCKET_SIZES
from ibisdict.core import LCP_MODES, TERM_MODES, VARIANTS
from ibisdict.urlgen import UrlCorpusConfig, generate_urls


@dataclass(frozen=True)
class Experiment:
    count: int = 100_000
    seed: int = 0
    dac_width: int = 7
    lcp_modes: tuple[str, ...] = LCP_MODES
    term_modes: tuple[str, ...] = TERM_MODES


def run(exp: Experiment) -> list[tuple[str, int, float]]:
    corpus = Corpus.from_strings(generate_urls(UrlCorpusConfig(exp.count, exp.seed)))[0]
    raw = corpus.raw_bytes()
    configs = [BuildConfig(v, lcp, term, exp.dac_width)
               for v, lcp, term in product(VARIANTS, exp.lcp_modes, exp.term_modes)]
    rows = [(d.config.label, len(serialize(d))) for d in build_family(corpus, configs)]
    rows += [(f"pfc:{b}", len(serialize(PfcDictionary.build(corpus, b)))) for b in BUCKET_SIZES]
    print(f"{len(corpus)} strings, {raw} raw bytes, mean length {raw / len(corpus):.2f}")
    return [(label, size, size / raw) for label, size in rows]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=Experiment.count)
    ap.add_argument("--seed", type=int, default=Experiment.seed)
    ap.add_argument("--dac-width", type=int, default=Experiment.dac_width)
    args = ap.parse_args()
    start = time.perf_counter()
    rows = run(Experiment(args.count, args.seed, args.dac_width))
    print(f"{'config':<28}{'bytes':>12}{'ratio':>9}")
    for label, size, ratio in sorted(rows, key=lambda r: r[1]):
        print(f"{label:<28}{size:>12}{ratio:>9.1%}")
    print(f"({time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    main()
