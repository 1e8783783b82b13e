"""Little-endian read/write helpers shared by the serializers."""

from __future__ import annotations

import struct
import sys
from array import array


class FormatError(ValueError):
    """Malformed serialized data."""


class TruncatedError(FormatError):
    """A buffer ended before a complete field could be read."""


class Writer:
    def __init__(self) -> None:
        self._parts: list[bytes] = []

    def u8(self, v: int) -> None:
        self._parts.append(struct.pack("<B", v))

    def u32(self, v: int) -> None:
        self._parts.append(struct.pack("<I", v))

    def u64(self, v: int) -> None:
        self._parts.append(struct.pack("<Q", v))

    def raw(self, data: bytes) -> None:
        self.u64(len(data))
        self._parts.append(bytes(data))

    def words(self, words: array) -> None:
        self.u64(len(words))
        self._parts.append(_le_words(words).tobytes())

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    def __init__(self, buf: bytes, pos: int = 0) -> None:
        self.buf = memoryview(buf)
        self.pos = pos

    def _take(self, size: int) -> memoryview:
        end = self.pos + size
        if end > len(self.buf):
            raise TruncatedError(f"need {size} bytes at offset {self.pos}, buffer has {len(self.buf)}")
        view = self.buf[self.pos:end]
        self.pos = end
        return view

    def u8(self) -> int:
        return self._take(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def raw(self) -> bytes:
        return bytes(self._take(self.u64()))

    def words(self) -> array:
        count = self.u64()
        out = array("Q")
        out.frombytes(self._take(8 * count))
        return _le_words(out)

    def at_end(self) -> bool:
        return self.pos == len(self.buf)


def _le_words(words: array) -> array:
    if sys.byteorder == "little":
        return words
    swapped = array("Q", words)
    swapped.byteswap()
    return swapped
