"""Seeded synthetic URL corpora for desk-scale experiments.

URLs share scheme and host prefixes, hosts own a small directory tree, and
path words follow a Zipf law, which gives the long shared prefixes typical of
web-crawl URL lists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SYLLABLES = ("ka", "re", "mi", "to", "lan", "sor", "ve", "dun", "pi", "chi", "ber", "gal", "no", "us",
              "ter", "ash", "fo", "qui", "za", "el", "win", "ton", "ham", "ley", "ford", "ing", "ex", "sta")
_TLDS = ("co.uk", "org.uk", "ac.uk", "gov.uk", "net", "com", "uk", "ltd.uk")
_TLD_WEIGHTS = (0.46, 0.16, 0.1, 0.05, 0.05, 0.1, 0.05, 0.03)
_LEAF_EXT = (".html", ".htm", ".php", ".asp", ".shtml", "/", ".pdf", ".jpg")
_LEAF_WEIGHTS = (0.38, 0.2, 0.12, 0.08, 0.04, 0.1, 0.04, 0.04)


@dataclass(frozen=True)
class UrlCorpusConfig:
    count: int = 100_000
    seed: int = 0
    vocabulary: int = 6000
    zipf_exponent: float = 1.1
    urls_per_host: int = 400
    dirs_per_host: int = 80
    max_depth: int = 4
    compound_leaf: float = 0.4
    long_query: float = 0.03


def _zipf_weights(k: int, s: float) -> np.ndarray:
    w = 1.0 / np.arange(1, k + 1) ** s
    return w / w.sum()


def _words(rng: np.random.Generator, count: int) -> list[str]:
    seen: dict[str, None] = {}
    while len(seen) < count:
        parts = rng.integers(0, len(_SYLLABLES), size=int(rng.integers(2, 5)))
        seen.setdefault("".join(_SYLLABLES[p] for p in parts))
    return list(seen)


def generate_urls(cfg: UrlCorpusConfig = UrlCorpusConfig()) -> list[bytes]:
    """Return ``cfg.count`` distinct URLs in generation order (unsorted)."""
    rng = np.random.default_rng(cfg.seed)
    vocab = _words(rng, cfg.vocabulary)
    word_p = _zipf_weights(len(vocab), cfg.zipf_exponent)

    pool: list[int] = []

    def word() -> str:
        if not pool:
            pool.extend(rng.choice(len(vocab), size=65536, p=word_p).tolist()[::-1])
        return vocab[pool.pop()]

    n_hosts = max(1, cfg.count // cfg.urls_per_host)
    hosts = []
    for _ in range(n_hosts):
        label = word() + (("-" + word()) if rng.random() < 0.3 else "")
        sub = "www." if rng.random() < 0.75 else word()[:6] + "."
        scheme = "http://" if rng.random() < 0.93 else "https://"
        tld = _TLDS[rng.choice(len(_TLDS), p=_TLD_WEIGHTS)]
        hosts.append(f"{scheme}{sub}{label}.{tld}")
    host_p = _zipf_weights(n_hosts, 0.6)

    dirs: dict[int, list[str]] = {}

    def host_dirs(h: int) -> list[str]:
        if h not in dirs:
            tree = [""]
            for _ in range(cfg.dirs_per_host):
                base = tree[int(len(tree) * rng.random() ** 0.5)]  # favour deep branches
                if base.count("/") < cfg.max_depth:
                    tree.append(base + "/" + word())
            dirs[h] = tree
        return dirs[h]

    templates: dict[int, list[str]] = {}

    def host_templates(h: int) -> list[str]:
        # long parameterised URLs whose siblings differ only in the last value
        if h not in templates:
            tree = host_dirs(h)
            made = []
            for _ in range(2):
                params = "&".join(f"{word()}={word()}{int(rng.integers(0, 10**6))}"
                                  for _ in range(int(rng.integers(3, 12))))
                made.append(f"{hosts[h]}{tree[-1]}/{word()}.cgi?{params}&page=")
            templates[h] = made
        return templates[h]

    out: dict[bytes, None] = {}
    while len(out) < cfg.count:
        h = int(rng.choice(n_hosts, p=host_p))
        if rng.random() < cfg.long_query:
            tpl = host_templates(h)
            out.setdefault(f"{tpl[int(rng.integers(0, 2))]}{int(rng.integers(1, 500))}".encode("ascii"))
            continue
        tree = host_dirs(h)
        d = tree[len(tree) - min(len(tree), int(rng.zipf(1.3)))]
        ext = _LEAF_EXT[rng.choice(len(_LEAF_EXT), p=_LEAF_WEIGHTS)]
        leaf = word() if ext != "/" else ""
        if leaf and rng.random() < cfg.compound_leaf:
            leaf += "_" + word()
        url = f"{hosts[h]}{d}/{leaf}{ext}"
        if ext in (".php", ".asp") and rng.random() < 0.7:
            url += f"?id={int(rng.integers(1, 50_000))}"
        out.setdefault(url.encode("ascii"))
    return list(out)
