"""Integer codes: Vbyte, Directly Addressable Codes and DAC-VLS."""

from __future__ import annotations

from typing import Iterator, Sequence

from ._binary import Reader, Writer
from .bitseq import PackedArray, PlainBitvector


class CorruptStreamError(ValueError):
    pass


def vbyte_encode(x: int) -> bytes:
    """Little-endian 7-bit chunks; a set high bit means more chunks follow."""
    if x < 0:
        raise ValueError("vbyte encodes non-negative integers only")
    out = bytearray()
    while x >= 0x80:
        out.append((x & 0x7F) | 0x80)
        x >>= 7
    out.append(x)
    return bytes(out)


def vbyte_decode(data: bytes, start: int = 0) -> tuple[int, int]:
    """Decode one integer at ``start``; returns ``(value, bytes_consumed)``."""
    value = 0
    shift = 0
    pos = start
    end = len(data)
    while pos < end:
        b = data[pos]
        pos += 1
        value |= (b & 0x7F) << shift
        if b < 0x80:
            return value, pos - start
        shift += 7
    raise CorruptStreamError(f"vbyte stream ends inside a code starting at {start}")


def vbyte_encode_all(values: Sequence[int]) -> bytes:
    return b"".join(vbyte_encode(v) for v in values)


def vbyte_decode_all(data: bytes, start: int = 0, end: int | None = None) -> list[int]:
    end = len(data) if end is None else end
    out = []
    pos = start
    while pos < end:
        v, used = vbyte_decode(data, pos)
        out.append(v)
        pos += used
    if pos != end:
        raise CorruptStreamError("vbyte code crosses the requested range end")
    return out


class DacSequence:
    """Integers split into ``chunk_width``-bit chunks, reordered by level.

    Level k stores the k-th chunk of every value that has one; the bitvector of
    level k marks which of those values continue into level k+1.
    """

    def __init__(self, chunk_width: int, size: int, chunks: list[PackedArray], flags: list[PlainBitvector]) -> None:
        self.chunk_width = chunk_width
        self.size = size
        self.chunks = chunks
        self.flags = flags

    @classmethod
    def build(cls, values: Sequence[int], chunk_width: int = 7) -> "DacSequence":
        if not 1 <= chunk_width <= 32:
            raise ValueError("chunk width must be in [1, 32]")
        mask = (1 << chunk_width) - 1
        chunks: list[PackedArray] = []
        flags: list[PlainBitvector] = []
        current = list(values)
        if any(v < 0 for v in current):
            raise ValueError("DACs store non-negative integers")
        while current:
            chunks.append(PackedArray.from_values([v & mask for v in current], chunk_width))
            rest = [v >> chunk_width for v in current]
            flags.append(PlainBitvector.from_bits(1 if v else 0 for v in rest))
            current = [v for v in rest if v]
        return cls(chunk_width, len(values), chunks, flags)

    @property
    def levels(self) -> int:
        return len(self.chunks)

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.size:
            raise IndexError(i)
        value = 0
        shift = 0
        pos = i
        width = self.chunk_width
        for chunks, flags in zip(self.chunks, self.flags):
            value |= chunks[pos] << shift
            # flags.access and flags.rank1, inlined
            wi = pos >> 6
            word = flags.words[wi]
            off = pos & 63
            if not (word >> off) & 1:
                break
            pos = flags._word_ranks[wi] + (word & ((1 << off) - 1)).bit_count()
            shift += width
        return value

    access = __getitem__

    def total_chunks(self) -> int:
        return sum(len(c) for c in self.chunks)

    def tolist(self) -> list[int]:
        return [self[i] for i in range(self.size)]

    def write(self, w: Writer) -> None:
        w.u8(self.chunk_width)
        w.u64(self.size)
        w.u32(self.levels)
        for chunks, flags in zip(self.chunks, self.flags):
            chunks.write(w)
            flags.write(w)

    @classmethod
    def read(cls, r: Reader) -> "DacSequence":
        width = r.u8()
        size = r.u64()
        levels = r.u32()
        chunks, flags = [], []
        for _ in range(levels):
            chunks.append(PackedArray.read(r))
            flags.append(PlainBitvector.read(r))
        return cls(width, size, chunks, flags)


class DacVlsStore:
    """Collection of non-empty integer sequences with direct access by index.

    Element j of every sequence long enough lives at level j; integers are
    stored whole at a per-level fixed width.
    """

    def __init__(self, size: int, values: list[PackedArray], more: list[PlainBitvector]) -> None:
        self.size = size
        self.values = values
        self.more = more

    @classmethod
    def build(cls, sequences: Sequence[Sequence[int]]) -> "DacVlsStore":
        for k, seq in enumerate(sequences):
            if not seq:
                raise ValueError(f"sequence {k} is empty; DAC-VLS cannot store zero-length sequences")
        values: list[PackedArray] = []
        more: list[PlainBitvector] = []
        active = list(sequences)
        depth = 0
        while active:
            values.append(PackedArray.from_values([s[depth] for s in active]))
            more.append(PlainBitvector.from_bits(1 if len(s) > depth + 1 else 0 for s in active))
            depth += 1
            active = [s for s in active if len(s) > depth]
        return cls(len(sequences), values, more)

    def __len__(self) -> int:
        return self.size

    def iter_sequence(self, i: int) -> Iterator[int]:
        """Yield the elements of sequence ``i`` one level at a time."""
        if not 0 <= i < self.size:
            raise IndexError(i)
        pos = i
        for values, more in zip(self.values, self.more):
            yield values[pos]
            wi = pos >> 6
            word = more.words[wi]
            off = pos & 63
            if not (word >> off) & 1:
                return
            pos = more._word_ranks[wi] + (word & ((1 << off) - 1)).bit_count()

    def __getitem__(self, i: int) -> list[int]:
        return list(self.iter_sequence(i))

    access = __getitem__

    def write(self, w: Writer) -> None:
        w.u64(self.size)
        w.u32(len(self.values))
        for values, more in zip(self.values, self.more):
            values.write(w)
            more.write(w)

    @classmethod
    def read(cls, r: Reader) -> "DacVlsStore":
        size = r.u64()
        levels = r.u32()
        values, more = [], []
        for _ in range(levels):
            values.append(PackedArray.read(r))
            more.append(PlainBitvector.read(r))
        return cls(size, values, more)
