from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ibisdict._binary import FormatError, Reader, Writer
from ibisdict.repair import Grammar, compress_regions, repair_compress

A, B = 1, 2  # codes of b"a" and b"b" when those are the only bytes


def nonoverlapping_pair_counts(regions):
    """Pair counts as greedy left-to-right replacement would see them."""
    counts = Counter()
    for reg in regions:
        last = {}
        for i in range(len(reg) - 1):
            pair = (reg[i], reg[i + 1])
            if last.get(pair) == i - 1:
                continue  # overlaps the occurrence just counted
            counts[pair] += 1
            last[pair] = i
    return counts


def test_abab_twice():
    g, t = repair_compress(b"abababab", [0, 4])
    assert g.alphabet == b"\x00ab"
    assert g.rules == [(A, B), (3, 3)]
    assert t.regions == [[4], [4]]
    assert g.expand(4) == b"abab"
    assert g.expand(A) == b"a"


def test_distinct_bytes_make_no_rules():
    g, t = repair_compress(b"abcd", [0])
    assert g.rules == []
    assert g.expand_sequence(t.flat()) == b"abcd"


def test_run_is_paired_left_to_right_without_overlap():
    g, t = repair_compress(b"aaaa", [0])
    # (a,a) occurs twice without overlap; afterwards (R1,R1) occurs once, so no R2
    assert g.rules == [(A, A)]
    assert t.regions == [[g.sigma, g.sigma]]


def test_odd_run_keeps_trailing_symbol():
    g, t = compress_regions([b"aaaaa", b"aaaaa"])
    assert g.expand_sequence(t.regions[0]) == b"aaaaa"
    assert t.regions[0] == t.regions[1]


def test_ties_broken_by_smallest_pair():
    g, _ = compress_regions([b"xyab", b"abxy"])
    a, b, x, y = (g.alphabet.index(c) for c in b"abxy")
    assert g.rules == [(a, b), (x, y)]


def test_pairs_never_cross_regions():
    # "ab" only ever appears across the boundary, so it must not become a rule
    g, t = compress_regions([b"xa", b"bx", b"xa", b"bx"])
    assert all(g.expand(s) in (b"x", b"a", b"b", b"xa", b"bx") for s in t.flat())
    assert (g.alphabet.index(ord("a")), g.alphabet.index(ord("b"))) not in g.rules


def test_incremental_expansion():
    g, _ = repair_compress(b"abababab", [0, 4])
    it = g.expand_incremental(4)
    assert next(it) == ord("a")
    it.close()
    assert bytes(g.expand_incremental(4)) == b"abab"
    assert list(g.expand_incremental(B)) == [ord("b")]


def test_unknown_symbol_is_an_error():
    g, _ = repair_compress(b"abab", [0])
    with pytest.raises(ValueError):
        g.expand(g.n_symbols)
    with pytest.raises(ValueError):
        list(g.expand_incremental(-1))


def test_grammar_validates_rules():
    with pytest.raises(ValueError):
        Grammar(b"\x00a", [(1, 2)])  # rule 2 refers to itself
    with pytest.raises(ValueError):
        Grammar(b"a", [])


def test_terminator_byte_rejected_in_regions():
    with pytest.raises(ValueError):
        compress_regions([b"a\x00b"])


def test_empty_regions_survive():
    g, t = compress_regions([b"", b"abab", b""])
    assert t.regions[0] == [] and t.regions[2] == []
    assert g.expand_sequence(t.regions[1]) == b"abab"


def test_grammar_serialization():
    g, _ = compress_regions([b"the cat", b"the hat", b"that cat"])
    w = Writer()
    g.write(w)
    data = w.getvalue()
    again = Grammar.read(Reader(data))
    assert again.alphabet == g.alphabet and again.rules == g.rules
    bad = bytearray(data)
    bad[0] += 1  # sigma no longer matches the alphabet length
    with pytest.raises(FormatError):
        Grammar.read(Reader(bytes(bad)))


regions_strategy = st.lists(st.binary(max_size=40).map(lambda b: b.replace(b"\x00", b"\x01")), max_size=12)


@given(regions_strategy)
def test_roundtrip_boundaries_and_exhaustion(regions):
    g, t = compress_regions(regions)
    assert len(t.regions) == len(regions)
    for reg, symbols in zip(regions, t.regions):
        # each region decodes on its own, so no symbol straddles a boundary
        assert g.expand_sequence(symbols) == reg
    assert max(nonoverlapping_pair_counts(t.regions).values(), default=0) < 2
    for k, (left, right) in enumerate(g.rules):
        assert left < g.sigma + k and right < g.sigma + k


@given(st.binary(max_size=60).map(lambda b: b.replace(b"\x00", b"\x02")), st.sets(st.integers(0, 60)))
def test_repair_compress_with_boundary_index(text, cuts):
    cuts = sorted(c for c in cuts if c <= len(text))
    g, t = repair_compress(text, cuts)
    assert g.expand_sequence(t.flat()) == text
    starts = t.boundaries()
    assert len(starts) == len(t.regions)
