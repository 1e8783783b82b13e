"""Corpus ingestion and the on-disk container format.

Container layout (all integers little-endian)::

    magic "IBIS" | version u8 | kind u8 | lcp mode u8 | term mode u8 | dac width u8
    n u64 | raw input bytes u64 | corpus checksum 8B | parameter u32 | section count u32
    section table: (tag 4B, offset u64, length u64) per section
    section payloads

``kind`` is the variant index (0-4) or 5 for the PFC baseline, whose bucket
size is kept in ``parameter``. Offsets are absolute file positions.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from pathlib import Path

from ._binary import FormatError, Reader, TruncatedError, Writer
from .baseline import PfcDictionary
from .bitseq import PackedArray, SparseBitvector
from .core import (LCP_MODES, TERM_MODES, VARIANTS, BuildConfig, Corpus, CorpusError, Dictionary,
                   PlainTails, RePairDacVlsTails, RePairVbyteTails)
from .intcodes import DacSequence, DacVlsStore
from .repair import Grammar

MAGIC = b"IBIS"
VERSION = 1
PFC_KIND = len(VARIANTS)
_FIXED = struct.Struct("<4sBBBBBQQ8sII")
_ENTRY = struct.Struct("<4sQQ")

__all__ = [
    "BadMagicError", "FormatError", "TruncatedError", "UnknownVariantError", "UnsupportedVersionError",
    "IngestResult", "ingest", "serialize", "deserialize", "save", "load", "read_header", "Header",
]


class BadMagicError(FormatError):
    pass


class UnsupportedVersionError(FormatError):
    pass


class UnknownVariantError(FormatError):
    pass


@dataclass
class IngestResult:
    corpus: Corpus
    duplicates: int
    blank_lines: int
    lines: int


def ingest(path: str | os.PathLike) -> IngestResult:
    """Read LF-delimited strings, sort them byte-wise and drop duplicates."""
    data = Path(path).read_bytes()
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    strings = []
    blank = 0
    for lineno, line in enumerate(lines, 1):
        if not line:
            blank += 1
            continue
        if 0 in line:
            raise CorpusError(f"{path}:{lineno}: line contains a 0x00 byte")
        strings.append(line)
    if not strings:
        raise CorpusError(f"{path}: no strings to index")
    corpus, dups = Corpus.from_strings(strings)
    return IngestResult(corpus, dups, blank, len(lines))


@dataclass
class Header:
    version: int
    kind: int
    lcp_mode: str
    term_mode: str
    dac_width: int
    n: int
    raw_bytes: int
    checksum: bytes
    parameter: int
    sections: list[tuple[str, int, int]]

    @property
    def size(self) -> int:
        return _FIXED.size + _ENTRY.size * len(self.sections)

    @property
    def label(self) -> str:
        if self.kind == PFC_KIND:
            return f"pfc:{self.parameter}"
        return f"{VARIANTS[self.kind]}:{self.lcp_mode}:{self.term_mode}"


def _payload(obj) -> bytes:
    w = Writer()
    obj.write(w)
    return w.getvalue()


def _sections(d) -> list[tuple[str, bytes]]:
    if isinstance(d, PfcDictionary):
        return [("PFCD", d.data), ("PFCO", _payload(d.offsets))]
    out = []
    if d.llcp is not None:
        out.append(("LLCP", _payload(d.llcp)))
    if d.rlcp is not None:
        out.append(("RLCP", _payload(d.rlcp)))
    t = d.tails
    if isinstance(t, PlainTails):
        out += [("TSTR", t.text), ("TBMP", _payload(t.starts))]
    elif isinstance(t, RePairVbyteTails):
        out += [("GRAM", _payload(t.grammar)), ("TSYM", t.data), ("TBMP", _payload(t.starts))]
    else:
        out += [("GRAM", _payload(t.grammar)), ("TVLS", _payload(t.store))]
    return out


def section_sizes(d) -> dict[str, int]:
    return {tag: len(body) for tag, body in _sections(d)}


def serialize(d: Dictionary | PfcDictionary) -> bytes:
    sections = _sections(d)
    if isinstance(d, PfcDictionary):
        fields = (PFC_KIND, 0, 0, 0, d.n, d.raw_bytes, d.checksum, d.bucket)
    else:
        c = d.config
        fields = (VARIANTS.index(c.variant), LCP_MODES.index(c.lcp_mode), TERM_MODES.index(c.term_mode),
                  c.dac_width, d.n, d.raw_bytes, d.checksum, 0)
    kind, lcp_i, term_i, width, n, raw, checksum, param = fields
    head = _FIXED.pack(MAGIC, VERSION, kind, lcp_i, term_i, width, n, raw, checksum, param, len(sections))
    offset = len(head) + _ENTRY.size * len(sections)
    table = []
    for tag, body in sections:
        table.append(_ENTRY.pack(tag.encode(), offset, len(body)))
        offset += len(body)
    return b"".join([head, *table, *(body for _, body in sections)])


def read_header(buf: bytes) -> Header:
    if len(buf) < 4 or bytes(buf[:4]) != MAGIC:
        raise BadMagicError("not an IBIS dictionary file (bad magic)")
    if len(buf) < _FIXED.size:
        raise TruncatedError("file shorter than the fixed header")
    magic, version, kind, lcp_i, term_i, width, n, raw, checksum, param, count = _FIXED.unpack_from(buf)
    if version != VERSION:
        raise UnsupportedVersionError(f"container version {version} is not supported (expected {VERSION})")
    if kind > PFC_KIND or lcp_i >= len(LCP_MODES) or term_i >= len(TERM_MODES):
        raise UnknownVariantError(f"unknown variant tag {kind}/{lcp_i}/{term_i}")
    if len(buf) < _FIXED.size + _ENTRY.size * count:
        raise TruncatedError("file shorter than its section table")
    sections = []
    for k in range(count):
        tag, off, length = _ENTRY.unpack_from(buf, _FIXED.size + _ENTRY.size * k)
        if off + length > len(buf):
            raise TruncatedError(f"section {tag.decode(errors='replace')} runs past end of file")
        sections.append((tag.decode("ascii"), off, length))
    return Header(version, kind, LCP_MODES[lcp_i], TERM_MODES[term_i], width, n, raw, checksum, param, sections)


def deserialize(buf: bytes) -> Dictionary | PfcDictionary:
    h = read_header(buf)
    view = memoryview(buf)
    body = {tag: view[off:off + length] for tag, off, length in h.sections}

    def need(tag: str) -> memoryview:
        if tag not in body:
            raise FormatError(f"missing section {tag}")
        return body[tag]

    def parse(tag: str, cls):
        r = Reader(need(tag))
        try:
            obj = cls.read(r)
        except FormatError:
            raise
        except (ValueError, IndexError, struct.error) as exc:
            raise FormatError(f"corrupt section {tag}: {exc}") from exc
        if not r.at_end():
            raise FormatError(f"trailing bytes in section {tag}")
        return obj

    if h.kind == PFC_KIND:
        return PfcDictionary(h.parameter, h.n - 2, bytes(need("PFCD")), parse("PFCO", PackedArray),
                             checksum=h.checksum, raw_bytes=h.raw_bytes)

    cfg = BuildConfig(VARIANTS[h.kind], h.lcp_mode, h.term_mode, h.dac_width)
    lcp_cls = DacSequence if cfg.dac_lcp else PackedArray
    llcp = parse("LLCP", lcp_cls) if cfg.lcp_mode != "right" else None
    rlcp = parse("RLCP", lcp_cls) if cfg.lcp_mode != "left" else None
    keep = cfg.term_mode == "keep"
    if cfg.tail_kind == "plain":
        tails = PlainTails(bytes(need("TSTR")), parse("TBMP", SparseBitvector), keep)
    elif cfg.tail_kind == "vbyte":
        tails = RePairVbyteTails(parse("GRAM", Grammar), bytes(need("TSYM")), parse("TBMP", SparseBitvector), keep)
    else:
        tails = RePairDacVlsTails(parse("GRAM", Grammar), parse("TVLS", DacVlsStore), keep)
    if tails.count != h.n:
        raise FormatError(f"tail store holds {tails.count} entries, header says n={h.n}")
    return Dictionary(cfg, h.n, llcp, rlcp, tails, checksum=h.checksum, raw_bytes=h.raw_bytes)


def save(d: Dictionary | PfcDictionary, path: str | os.PathLike) -> int:
    data = serialize(d)
    Path(path).write_bytes(data)
    return len(data)


def load(path: str | os.PathLike) -> Dictionary | PfcDictionary:
    return deserialize(Path(path).read_bytes())
