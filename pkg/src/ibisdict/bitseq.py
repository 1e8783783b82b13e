"""Bit sequences with rank/select support.

Conventions: positions are 0-based, ``rank1(i)`` counts set bits strictly
below ``i`` and ``select1(j)`` takes a 1-based rank and returns the position
of the j-th set bit.
"""

from __future__ import annotations

from array import array
from bisect import bisect_left
from itertools import accumulate
from typing import Iterable, Sequence

from ._binary import Reader, Writer

WORD = 64
BLOCK_WORDS = 8  # 512-bit rank blocks


def _byte_select_table() -> list[int]:
    table = [-1] * (256 * 9)
    for byte in range(256):
        k, b = 0, byte
        while b:
            k += 1
            table[byte * 9 + k] = (b & -b).bit_length() - 1
            b &= b - 1
    return table


_BYTE_SELECT = _byte_select_table()


def _select_in_word(word: int, k: int) -> int:
    """Offset of the k-th (1-based) set bit of ``word``."""
    pos = 0
    c = (word & 0xFFFFFFFF).bit_count()
    if c < k:
        k -= c
        word >>= 32
        pos = 32
    c = (word & 0xFFFF).bit_count()
    if c < k:
        k -= c
        word >>= 16
        pos += 16
    c = (word & 0xFF).bit_count()
    if c < k:
        k -= c
        word >>= 8
        pos += 8
    return pos + _BYTE_SELECT[(word & 0xFF) * 9 + k]


class PackedArray:
    """Fixed-width unsigned integers bit-packed into 64-bit words."""

    __slots__ = ("width", "size", "words", "_mask")

    def __init__(self, width: int, size: int, words: array) -> None:
        if not 1 <= width <= 64:
            raise ValueError(f"width must be in [1, 64], got {width}")
        self.width = width
        self.size = size
        self.words = words
        self._mask = (1 << width) - 1

    @classmethod
    def from_values(cls, values: Sequence[int], width: int | None = None) -> "PackedArray":
        if width is None:
            width = max(1, max(values, default=0).bit_length())
        limit = 1 << width
        words = array("Q")
        acc = 0
        filled = 0
        for v in values:
            if v < 0 or v >= limit:
                raise ValueError(f"value {v} does not fit in {width} bits")
            acc |= v << filled
            filled += width
            while filled >= WORD:
                words.append(acc & 0xFFFFFFFFFFFFFFFF)
                acc >>= WORD
                filled -= WORD
        if filled:
            words.append(acc)
        return cls(width, len(values), words)

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.size:
            raise IndexError(i)
        width = self.width
        bit = i * width
        off = bit & 63
        if off + width > WORD:
            words = self.words
            wi = bit >> 6
            return ((words[wi] >> off) | (words[wi + 1] << (WORD - off))) & self._mask
        return (self.words[bit >> 6] >> off) & self._mask

    def __iter__(self):
        for i in range(self.size):
            yield self[i]

    def tolist(self) -> list[int]:
        return list(self)

    def write(self, w: Writer) -> None:
        w.u8(self.width)
        w.u64(self.size)
        w.words(self.words)

    @classmethod
    def read(cls, r: Reader) -> "PackedArray":
        width = r.u8()
        size = r.u64()
        words = r.words()
        if len(words) * WORD < size * width:
            raise ValueError("packed array payload shorter than declared size")
        return cls(width, size, words)


class PlainBitvector:
    """Uncompressed bitvector with a sampled rank directory.

    Only the 512-bit block directory is serialized. A per-word directory is
    rebuilt in memory on load and serves rank and select in O(1) word scans.
    """

    __slots__ = ("n_bits", "words", "_blocks", "_word_ranks", "ones")

    def __init__(self, n_bits: int, words: array) -> None:
        if len(words) != (n_bits + WORD - 1) // WORD:
            raise ValueError("word count does not match bit length")
        self.n_bits = n_bits
        self.words = words
        ranks = array("Q", accumulate((w.bit_count() for w in words), initial=0))
        self._word_ranks = ranks
        self._blocks = array("Q", ranks[::BLOCK_WORDS])
        if len(words) % BLOCK_WORDS:
            self._blocks.append(ranks[-1])
        self.ones = ranks[-1]

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "PlainBitvector":
        bits = list(bits)
        return cls.from_positions([i for i, b in enumerate(bits) if b], len(bits))

    @classmethod
    def from_positions(cls, positions: Iterable[int], n_bits: int) -> "PlainBitvector":
        words = array("Q", bytes(8 * ((n_bits + WORD - 1) // WORD)))
        for p in positions:
            if not 0 <= p < n_bits:
                raise ValueError(f"position {p} outside [0, {n_bits})")
            words[p >> 6] |= 1 << (p & 63)
        return cls(n_bits, words)

    def __len__(self) -> int:
        return self.n_bits

    def access(self, i: int) -> int:
        if not 0 <= i < self.n_bits:
            raise IndexError(i)
        return (self.words[i >> 6] >> (i & 63)) & 1

    __getitem__ = access

    def rank1(self, i: int) -> int:
        if not 0 <= i <= self.n_bits:
            raise IndexError(i)
        wi = i >> 6
        count = self._word_ranks[wi]
        off = i & 63
        if off:
            count += (self.words[wi] & ((1 << off) - 1)).bit_count()
        return count

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def select1(self, j: int) -> int:
        if not 1 <= j <= self.ones:
            raise IndexError(j)
        ranks = self._word_ranks
        wi = bisect_left(ranks, j) - 1
        return wi * WORD + _select_in_word(self.words[wi], j - ranks[wi])

    def select0(self, j: int) -> int:
        ranks = self._word_ranks
        if not 1 <= j <= self.n_bits - self.ones:
            raise IndexError(j)
        wi = bisect_left(range(len(ranks)), j, key=lambda k: k * WORD - ranks[k]) - 1
        inv = ~self.words[wi] & 0xFFFFFFFFFFFFFFFF
        return wi * WORD + _select_in_word(inv, j - (wi * WORD - ranks[wi]))

    def write(self, w: Writer) -> None:
        w.u64(self.n_bits)
        w.u64(self.ones)
        w.words(self.words)
        w.words(self._blocks)

    @classmethod
    def read(cls, r: Reader) -> "PlainBitvector":
        n_bits = r.u64()
        ones = r.u64()
        words = r.words()
        blocks = r.words()
        bv = cls(n_bits, words)
        if bv.ones != ones or bv._blocks != blocks:
            raise ValueError("bitvector directory does not match its payload")
        return bv


class SparseBitvector:
    """SDArray-style bitvector: set positions split into packed low bits and
    a unary-coded high part."""

    __slots__ = ("n_bits", "ones", "low_width", "low", "high")

    def __init__(self, n_bits: int, ones: int, low_width: int, low: PackedArray, high: PlainBitvector) -> None:
        self.n_bits = n_bits
        self.ones = ones
        self.low_width = low_width
        self.low = low
        self.high = high

    @staticmethod
    def low_width_for(n_bits: int, ones: int) -> int:
        if ones == 0 or n_bits <= ones:
            return 1
        return max(1, (n_bits // ones).bit_length() - 1)

    @classmethod
    def from_positions(cls, positions: Sequence[int], n_bits: int) -> "SparseBitvector":
        m = len(positions)
        l = cls.low_width_for(n_bits, m)
        mask = (1 << l) - 1
        prev = -1
        for p in positions:
            if p <= prev or p >= n_bits:
                raise ValueError("positions must be strictly increasing and below n_bits")
            prev = p
        low = PackedArray.from_values([p & mask for p in positions], l)
        high = PlainBitvector.from_positions(
            ((p >> l) + k for k, p in enumerate(positions)), m + (n_bits >> l) + 1
        )
        return cls(n_bits, m, l, low, high)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "SparseBitvector":
        bits = list(bits)
        return cls.from_positions([i for i, b in enumerate(bits) if b], len(bits))

    def __len__(self) -> int:
        return self.n_bits

    def select1(self, j: int) -> int:
        if not 1 <= j <= self.ones:
            raise IndexError(j)
        high = self.high
        ranks = high._word_ranks
        wi = bisect_left(ranks, j) - 1
        hi = wi * WORD + _select_in_word(high.words[wi], j - ranks[wi]) - (j - 1)
        return (hi << self.low_width) | self.low[j - 1]

    def select_pair(self, j: int) -> tuple[int, int]:
        """Positions of the j-th and (j+1)-th set bits; requires j < ones."""
        if not 1 <= j < self.ones:
            raise IndexError(j)
        high = self.high
        words = high.words
        ranks = high._word_ranks
        wi = bisect_left(ranks, j) - 1
        word = words[wi]
        off = _select_in_word(word, j - ranks[wi])
        first = wi * WORD + off
        word >>= off + 1
        if word:
            second = first + (word & -word).bit_length()
        else:
            wi += 1
            while not words[wi]:
                wi += 1
            word = words[wi]
            second = wi * WORD + (word & -word).bit_length() - 1
        l, low = self.low_width, self.low
        return ((first - j + 1) << l) | low[j - 1], ((second - j) << l) | low[j]

    def rank1(self, i: int) -> int:
        if not 0 <= i <= self.n_bits:
            raise IndexError(i)
        if i == self.n_bits:
            return self.ones
        h = i >> self.low_width
        target = i & ((1 << self.low_width) - 1)
        pos = self.high.select0(h) + 1 if h else 0
        k = pos - h
        high = self.high
        while pos < high.n_bits and high.access(pos) and self.low[k] < target:
            pos += 1
            k += 1
        return k

    def access(self, i: int) -> int:
        if not 0 <= i < self.n_bits:
            raise IndexError(i)
        return self.rank1(i + 1) - self.rank1(i)

    __getitem__ = access

    def positions(self) -> list[int]:
        return [self.select1(j) for j in range(1, self.ones + 1)]

    def write(self, w: Writer) -> None:
        w.u64(self.n_bits)
        w.u64(self.ones)
        w.u8(self.low_width)
        self.low.write(w)
        self.high.write(w)

    @classmethod
    def read(cls, r: Reader) -> "SparseBitvector":
        n_bits = r.u64()
        ones = r.u64()
        l = r.u8()
        low = PackedArray.read(r)
        high = PlainBitvector.read(r)
        if low.size != ones or high.ones != ones:
            raise ValueError("sparse bitvector parts disagree on population count")
        return cls(n_bits, ones, l, low, high)


def serialized_size(obj) -> int:
    w = Writer()
    obj.write(w)
    return len(w.getvalue())
