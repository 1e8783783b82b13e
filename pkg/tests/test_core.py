import math
import random
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ibisdict.core import (BuildConfig, Corpus, CorpusError, Dictionary, ancestry, build, build_family,
                           decompose, lcp, parent_positions)

from _support import ALL_CONFIGS, WORKED_EXAMPLE, Oracle, absent_queries, adversarial_strings, corpus_of, mismatches


@pytest.fixture(scope="module")
def example():
    return corpus_of(WORKED_EXAMPLE)


# -- corpus ------------------------------------------------------------------


def test_corpus_validation():
    with pytest.raises(CorpusError):
        Corpus(())
    with pytest.raises(CorpusError):
        Corpus((b"b", b"a"))
    with pytest.raises(CorpusError):
        Corpus((b"a", b"a"))
    with pytest.raises(CorpusError):
        Corpus((b"a\x00",))
    with pytest.raises(CorpusError):
        Corpus((b"a\nb",))
    with pytest.raises(CorpusError):
        Corpus((b"",))


def test_from_strings_sorts_and_counts_duplicates():
    corpus, dups = Corpus.from_strings([b"b", b"a", b"a"])
    assert corpus.strings == (b"a", b"b")
    assert dups == 1
    assert corpus.n == 4
    assert corpus.at(0) == b"" and corpus.at(3) is None
    assert corpus.raw_bytes() == 4


# -- helpers -------------------------------------------------------------------


def test_lcp_examples():
    assert lcp(b"clamp", b"clam") == 4
    assert lcp(b"abc", b"abc") == 3
    assert lcp(b"", b"xyz") == 0
    assert lcp(b"abc", None) == 0


def test_parent_positions():
    assert parent_positions(17, 8) == (0, 16)
    assert parent_positions(17, 12) == (8, 16)
    for n in range(3, 40):
        assert parent_positions(n, (n - 1) // 2) == (0, n - 1)
    with pytest.raises(IndexError):
        parent_positions(17, 0)
    with pytest.raises(IndexError):
        parent_positions(17, 16)


def test_ancestry_matches_parent_positions():
    for n in (3, 4, 17, 100):
        for i in range(1, n - 1):
            anc = ancestry(n, i)
            assert anc[i] == parent_positions(n, i)
            assert all(parent_positions(n, p) == pp for p, pp in anc.items())


# -- construction ----------------------------------------------------------------


def test_three_string_construction():
    dec = decompose(corpus_of([b"alpha", b"alphabet", b"beta"]))
    assert dec.n == 5
    assert dec.llcp == [0, 0, 0, 0, 0]
    assert dec.rlcp == [0, 5, 0, 0, 0]
    assert dec.tails == [b"", b"", b"alphabet", b"beta", b""]


def test_single_string_stored_in_full():
    d = build(corpus_of([b"solo"]), BuildConfig("plain"))
    assert d.n == 3
    assert d.tail(1) == b"solo"
    assert d.access(1) == b"solo"
    assert d.lookup(b"solo") == 1
    assert d.lookup(b"sol") is None


def test_worked_example_construction(example):
    dec = decompose(example)
    assert dec.n == 17
    assert example.at(7) == b"clam" and example.at(8) == b"clamp" and example.at(9) == b"clean"
    assert example.at(12) == b"climate"
    assert dec.llcp[12] == 2 and dec.rlcp[12] == 0
    assert dec.tails[12] == b"imate"
    assert dec.rlcp[9] == 4
    assert dec.llcp[10] == dec.rlcp[10] == 2
    assert dec.tails[5] == b""


# -- worked-example traces -----------------------------------------------------------------


@pytest.mark.parametrize("variant", ["plain", "rp", "rp-dac", "rp-dacvls", "rp-dac-dacvls"])
def test_worked_example_lookup_trace(example, variant):
    d = build(example, BuildConfig(variant, "both"))
    trace = []
    assert d.lookup(b"clam", trace) == 7
    assert [s.pm for s in trace] == [8, 4, 6, 7]
    assert [s.pm for s in trace if s.compared] == [8, 7]
    first, last = trace[0], trace[-1]
    assert (first.cmp, first.o) == (-1, 4)  # "clam" < "clamp", sharing 4 bytes
    assert (last.offset, last.cmp, last.o) == (4, 0, 4)


@pytest.mark.parametrize("variant", ["plain", "rp-dac", "rp-dacvls"])
def test_worked_example_access_walk(example, variant):
    d = build(example, BuildConfig(variant, "both"))
    trace = []
    assert d.access(9, trace) == b"clean"
    assert [s.pos for s in trace] == [9, 10, 8]
    assert [s.copied for s in trace] == [1, 2, 2]  # "n", then "ea", then "cl"


def test_compare_from_examples(example):
    d = build(example, BuildConfig("plain"))
    assert d.compare_from(b"clam", 4, 7) == (0, 4)
    assert d.compare_from(b"clam", 0, 8) == (-1, 4)
    assert d.compare_from(b"clea", 4, 9)[0] == -1  # query exhausted before tail "n"


def test_global_midpoint_needs_one_comparison(example):
    for variant in ("plain", "rp-dac"):
        d = build(example, BuildConfig(variant))
        mid = (d.n - 1) // 2
        trace = []
        assert d.lookup(example.at(mid), trace) == mid
        assert len(trace) == 1 and trace[0].compared
        walk = []
        assert d.access(mid, walk) == example.at(mid)
        assert len(walk) == 1


# -- invariants over random corpora -----------------------------------------------------


corpora = st.integers(0, 2**32).map(lambda seed: adversarial_strings(random.Random(seed), 60))


@settings(max_examples=40)
@given(corpora)
def test_every_combination_matches_oracle(strings):
    rng = random.Random(len(strings))
    absent = absent_queries(rng, strings, 20)
    oracle = Oracle(strings)
    for d in build_family(corpus_of(strings), ALL_CONFIGS):
        assert mismatches(d, oracle, absent) == []


@settings(max_examples=60)
@given(corpora, st.sampled_from(["both", "left", "right"]))
def test_reconstruction_and_parent_consistency(strings, mode):
    corpus = corpus_of(strings)
    d = build(corpus, BuildConfig("rp", mode))
    for i in range(1, d.n - 1):
        s = corpus.at(i)
        assert d.maxlcp(i) + len(d.tail(i)) == len(s)
        pl, pr = parent_positions(d.n, i)
        if mode != "right":
            assert d.llcp[i] == lcp(s, corpus.at(pl))
        if mode != "left":
            assert d.rlcp[i] == lcp(s, corpus.at(pr))


@settings(max_examples=40)
@given(corpora)
def test_left_tails_never_shorter_and_strip_saves_bytes(strings):
    corpus = corpus_of(strings)
    both, left, keep = build_family(corpus, [BuildConfig("plain", "both"), BuildConfig("plain", "left"),
                                             BuildConfig("plain", "both", "keep")])
    total = lambda d: sum(len(d.tail(i)) for i in range(d.n))
    assert total(left) >= total(both)
    if any(both.tail(i) for i in range(both.n)):
        assert both.tails.stored_bytes() < keep.tails.stored_bytes()


@settings(max_examples=40)
@given(corpora, st.sampled_from(["both", "left"]))
def test_access_walk_is_logarithmic(strings, mode):
    d = build(corpus_of(strings), BuildConfig("plain", mode))
    bound = math.ceil(math.log2(d.n))
    for i in range(1, d.n - 1):
        walk = []
        d.access(i, walk)
        assert len(walk) <= bound


def test_access_out_of_range(example):
    d = build(example)
    for bad in (0, 16, -1):
        with pytest.raises(IndexError):
            d.access(bad)


def test_strings_iterates_in_order(example):
    assert list(build(example, BuildConfig("rp-dacvls", "left", "keep")).strings()) == WORKED_EXAMPLE


def test_build_config_validation():
    for bad in (dict(variant="x"), dict(lcp_mode="x"), dict(term_mode="x"), dict(dac_width=0)):
        with pytest.raises(ValueError):
            BuildConfig(**bad)
    assert BuildConfig("rp-dac", "left", "strip").label == "rp-dac:left:strip"


def test_concurrent_readers_agree():
    strings = adversarial_strings(random.Random(7), 400)
    d = build(corpus_of(strings), BuildConfig("rp-dac-dacvls"))
    errors = []

    def reader(offset):
        for k in range(len(strings)):
            pos = (k + offset) % len(strings) + 1
            if d.access(pos) != strings[pos - 1] or d.lookup(strings[pos - 1]) != pos:
                errors.append(pos)

    threads = [threading.Thread(target=reader, args=(t * 37,)) for t in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []


def test_dictionary_is_plain_object():
    # no global state: two dictionaries over different corpora coexist
    a = build(corpus_of([b"a", b"b"]))
    b = build(corpus_of([b"x", b"y", b"z"]))
    assert isinstance(a, Dictionary) and a.lookup(b"b") == 2 and b.lookup(b"b") is None
