"""Re-Pair grammar compression over a set of independent regions.

Pairs are only formed inside a region, so no grammar symbol ever expands
across two regions. Terminal symbols are codes into a sorted alphabet whose
code 0 is always the terminator byte 0x00.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ._binary import FormatError, Reader, Writer
from .bitseq import PackedArray

TERMINATOR = 0
_SEP = -1
_HOLE = -2
_LOW = 0xFFFFFFFF


@dataclass
class Grammar:
    alphabet: bytes
    rules: list[tuple[int, int]]
    _expansions: list[bytes] = field(default=None, repr=False, compare=False)
    _lengths: list[int] = field(default=None, repr=False, compare=False)
    n_symbols: int = field(default=0, init=False, compare=False)

    def __post_init__(self) -> None:
        if not self.alphabet or self.alphabet[0] != 0:
            raise ValueError("alphabet must start with the terminator byte 0x00")
        exps = [bytes([c]) for c in self.alphabet]
        sigma = len(exps)
        for k, (left, right) in enumerate(self.rules):
            if not (0 <= left < sigma + k and 0 <= right < sigma + k):
                raise ValueError(f"rule {sigma + k} references an undefined symbol")
            exps.append(exps[left] + exps[right])
        self._expansions = exps
        self._lengths = [len(e) for e in exps]
        self.n_symbols = len(exps)

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    def _check(self, symbol: int) -> None:
        if not 0 <= symbol < self.n_symbols:
            raise ValueError(f"unknown symbol {symbol} (grammar has {self.n_symbols})")

    def expand(self, symbol: int) -> bytes:
        self._check(symbol)
        return self._expansions[symbol]

    def length(self, symbol: int) -> int:
        self._check(symbol)
        return self._lengths[symbol]

    def expand_incremental(self, symbol: int) -> Iterator[int]:
        """Yield the expansion of ``symbol`` byte by byte via an explicit stack."""
        self._check(symbol)
        sigma = self.sigma
        stack = [symbol]
        while stack:
            s = stack.pop()
            while s >= sigma:
                left, right = self.rules[s - sigma]
                stack.append(right)
                s = left
            yield self.alphabet[s]

    def expand_sequence(self, symbols: Sequence[int]) -> bytes:
        return b"".join(self.expand(s) for s in symbols)

    def encode_terminals(self, data: bytes) -> list[int]:
        table = self.code_table()
        try:
            return [table[b] for b in data]
        except KeyError as exc:
            raise ValueError(f"byte {exc.args[0]!r} is not in the grammar alphabet") from None

    def code_table(self) -> dict[int, int]:
        return {b: i for i, b in enumerate(self.alphabet)}

    def write(self, w: Writer) -> None:
        w.u32(self.sigma)
        w.u32(len(self.rules))
        w.raw(self.alphabet)
        width = max(1, (self.n_symbols - 1).bit_length())
        PackedArray.from_values([s for pair in self.rules for s in pair], width).write(w)

    @classmethod
    def read(cls, r: Reader) -> "Grammar":
        sigma = r.u32()
        n_rules = r.u32()
        alphabet = r.raw()
        flat = PackedArray.read(r)
        if len(alphabet) != sigma or len(flat) != 2 * n_rules:
            raise FormatError("grammar header disagrees with its payload")
        values = flat.tolist()
        return cls(alphabet, list(zip(values[0::2], values[1::2])))


@dataclass
class CompressedText:
    """Per-region symbol sequences; region k's symbols expand to region k."""

    regions: list[list[int]]

    def flat(self) -> list[int]:
        return [s for reg in self.regions for s in reg]

    def boundaries(self) -> list[int]:
        """Index in ``flat()`` of the first symbol of every region."""
        out, pos = [], 0
        for reg in self.regions:
            out.append(pos)
            pos += len(reg)
        return out


def repair_compress(text: bytes, boundaries: Sequence[int]) -> tuple[Grammar, CompressedText]:
    """Compress ``text`` split into regions starting at each boundary index."""
    cuts = sorted(set(boundaries) | {0})
    if cuts and cuts[-1] > len(text):
        raise ValueError("boundary beyond end of text")
    ends = cuts[1:] + [len(text)]
    return compress_regions([text[a:b] for a, b in zip(cuts, ends)])


def compress_regions(regions: Sequence[bytes]) -> tuple[Grammar, CompressedText]:
    """Build one shared grammar for a list of byte strings (regions may be empty)."""
    present = set()
    for reg in regions:
        present.update(reg)
    if 0 in present:
        raise ValueError("regions may not contain the terminator byte 0x00")
    alphabet = bytes([0] + sorted(present))
    table = {b: i for i, b in enumerate(alphabet)}
    coded = [[table[b] for b in reg] for reg in regions]
    rules, out = _pair_regions(coded, len(alphabet))
    return Grammar(alphabet, rules), CompressedText(out)


def _pair_regions(regions: list[list[int]], first_symbol: int) -> tuple[list[tuple[int, int]], list[list[int]]]:
    seq = [_SEP]
    for reg in regions:
        seq.extend(reg)
        seq.append(_SEP)
    size = len(seq)
    nxt = list(range(1, size + 1))
    prv = list(range(-1, size - 1))

    # counts hold overlapping occurrence counts: exact for a != b, an upper
    # bound for a == b (runs), which is corrected when such a pair is popped
    counts: dict[int, int] = {}
    occ: dict[int, list[int]] = {}
    for i in range(1, size - 2):
        a = seq[i]
        b = seq[i + 1]
        if a < 0 or b < 0:
            continue
        key = (a << 32) | b
        if key in counts:
            counts[key] += 1
            occ[key].append(i)
        else:
            counts[key] = 1
            occ[key] = [i]

    heap = [(-c, key, c) for key, c in counts.items() if c >= 2]
    heapq.heapify(heap)
    rules: list[tuple[int, int]] = []
    new = first_symbol

    while heap:
        neg, key, stamp = heapq.heappop(heap)
        if counts.get(key, 0) != stamp:
            continue
        a = key >> 32
        b = key & _LOW
        value = -neg
        if a == b and value == stamp:
            exact = _nonoverlapping(seq, nxt, occ[key], a)
            if exact != value:
                if exact >= 2:
                    heapq.heappush(heap, (-exact, key, stamp))
                continue
        if value < 2:
            continue

        touched = set()
        for i in occ.pop(key):
            if seq[i] != a:
                continue
            j = nxt[i]
            if seq[j] != b:
                continue
            h = prv[i]
            k = nxt[j]
            x = seq[h]
            y = seq[k]
            if x >= 0:
                old = (x << 32) | a
                counts[old] -= 1
                fresh = (x << 32) | new
                counts[fresh] = counts.get(fresh, 0) + 1
                occ.setdefault(fresh, []).append(h)
                touched.add(old)
                touched.add(fresh)
            if y >= 0:
                old = (b << 32) | y
                counts[old] -= 1
                fresh = (new << 32) | y
                counts[fresh] = counts.get(fresh, 0) + 1
                occ.setdefault(fresh, []).append(i)
                touched.add(old)
                touched.add(fresh)
            seq[i] = new
            seq[j] = _HOLE
            nxt[i] = k
            prv[k] = i
        del counts[key]
        touched.discard(key)
        for t in touched:
            c = counts[t]
            if c >= 2:
                heapq.heappush(heap, (-c, t, c))
            elif c == 0:
                del counts[t]
                occ.pop(t, None)
        rules.append((a, b))
        new += 1

    out: list[list[int]] = []
    current: list[int] = []
    for s in seq[1:]:
        if s == _SEP:
            out.append(current)
            current = []
        elif s != _HOLE:
            current.append(s)
    return rules, out


def _nonoverlapping(seq: list[int], nxt: list[int], positions: list[int], a: int) -> int:
    """Occurrences of (a, a) that a greedy left-to-right replacement would take."""
    count = 0
    consumed = -1
    for i in positions:
        if i == consumed or seq[i] != a:
            continue
        j = nxt[i]
        if seq[j] != a:
            continue
        count += 1
        consumed = j
    return count
