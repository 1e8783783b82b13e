"""Plain Front-Coding (PFC) over fixed-size buckets, used as a benchmark baseline.

Ids follow the same convention as :class:`ibisdict.core.Dictionary`: the k-th
string (0-based) of the sorted corpus has id k + 1.
"""

from __future__ import annotations

from typing import Sequence

from .bitseq import PackedArray
from .core import Corpus, lcp
from .intcodes import vbyte_decode, vbyte_encode

BUCKET_SIZES = (4, 8, 16, 32)


class PfcDictionary:
    def __init__(self, bucket: int, count: int, data: bytes, offsets: PackedArray, *,
                 checksum: bytes = b"\0" * 8, raw_bytes: int = 0) -> None:
        self.bucket = bucket
        self.count = count
        self.data = data
        self.offsets = offsets
        self.checksum = checksum
        self.raw_bytes = raw_bytes

    @property
    def n(self) -> int:
        # same position arithmetic as the binary-decomposition dictionaries
        return self.count + 2

    @property
    def label(self) -> str:
        return f"pfc:{self.bucket}"

    @classmethod
    def build(cls, corpus: Corpus | Sequence[bytes], bucket: int = 16) -> "PfcDictionary":
        if bucket < 1:
            raise ValueError("bucket size must be positive")
        strings = corpus.strings if isinstance(corpus, Corpus) else tuple(corpus)
        out = bytearray()
        offsets = []
        prev = b""
        for k, s in enumerate(strings):
            if k % bucket == 0:
                offsets.append(len(out))
                out += s + b"\0"
            else:
                shared = lcp(prev, s)
                out += vbyte_encode(shared) + s[shared:] + b"\0"
            prev = s
        extra = {}
        if isinstance(corpus, Corpus):
            extra = dict(checksum=corpus.checksum(), raw_bytes=corpus.raw_bytes())
        return cls(bucket, len(strings), bytes(out), PackedArray.from_values(offsets), **extra)

    def __len__(self) -> int:
        return self.count

    def _header(self, k: int) -> bytes:
        start = self.offsets[k]
        return self.data[start:self.data.index(0, start)]

    def _scan(self, k: int):
        """Yield (position, string) for every entry of bucket ``k``."""
        data = self.data
        pos = self.offsets[k]
        end = data.index(0, pos)
        current = data[pos:end]
        first = k * self.bucket
        yield first + 1, current
        pos = end + 1
        for j in range(1, min(self.bucket, self.count - first)):
            shared, used = vbyte_decode(data, pos)
            pos += used
            end = data.index(0, pos)
            current = current[:shared] + data[pos:end]
            pos = end + 1
            yield first + j + 1, current

    def lookup(self, query: bytes) -> int | None:
        lo, hi = 0, len(self.offsets) - 1
        # rightmost bucket whose header is <= query
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if self._header(mid) <= query:
                lo = mid
            else:
                hi = mid - 1
        if not self.offsets.size:
            return None
        for pos, s in self._scan(lo):
            if s == query:
                return pos
            if s > query:
                return None
        return None

    def access(self, pos: int) -> bytes:
        if not 1 <= pos <= self.count:
            raise IndexError(f"id {pos} outside [1, {self.count}]")
        k, j = divmod(pos - 1, self.bucket)
        if j == 0:
            return self._header(k)
        for p, s in self._scan(k):
            if p == pos:
                return s
        raise AssertionError("unreachable")

    def buckets(self) -> list[list[bytes]]:
        return [[s for _, s in self._scan(k)] for k in range(len(self.offsets))]
