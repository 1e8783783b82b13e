"""Binary-decomposition Front-coded string dictionary.

Positions 0 and n-1 hold the boundary sentinels: the empty string and a
virtual string greater than every input. Every other position p is the
midpoint of exactly one interval [pl, pr] of the decomposition; its string is
stored without the prefix it shares with the more similar of C[pl] and C[pr].
Real strings occupy positions 1..n-2, and those positions are the ids.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .bitseq import PackedArray, SparseBitvector
from .intcodes import DacSequence, DacVlsStore, vbyte_decode, vbyte_encode
from .repair import TERMINATOR, Grammar, compress_regions

VARIANTS = ("plain", "rp", "rp-dac", "rp-dacvls", "rp-dac-dacvls")
LCP_MODES = ("both", "left", "right")
TERM_MODES = ("keep", "strip")
FORBIDDEN_BYTES = (0x00, 0x0A)
DISPLAY_NAMES = {
    "plain": "IBiS",
    "rp": "IBiS^RP",
    "rp-dac": "IBiS^RP+DAC",
    "rp-dacvls": "IBiS^RP+DAC-VLS",
    "rp-dac-dacvls": "IBiS^RP+DAC+DAC-VLS",
}


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class BuildConfig:
    variant: str = "rp-dac"
    lcp_mode: str = "both"
    term_mode: str = "strip"
    dac_width: int = 7

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.lcp_mode not in LCP_MODES:
            raise ValueError(f"unknown lcp mode {self.lcp_mode!r}")
        if self.term_mode not in TERM_MODES:
            raise ValueError(f"unknown terminator mode {self.term_mode!r}")
        if not 1 <= self.dac_width <= 32:
            raise ValueError("dac width must be in [1, 32]")

    @property
    def dac_lcp(self) -> bool:
        return self.variant in ("rp-dac", "rp-dac-dacvls")

    @property
    def tail_kind(self) -> str:
        if self.variant == "plain":
            return "plain"
        return "dacvls" if self.variant.endswith("dacvls") else "vbyte"

    @property
    def label(self) -> str:
        return f"{self.variant}:{self.lcp_mode}:{self.term_mode}"


@dataclass(frozen=True)
class Corpus:
    """Sorted, duplicate-free byte strings; sentinels are implicit."""

    strings: tuple[bytes, ...]

    def __post_init__(self) -> None:
        if not self.strings:
            raise CorpusError("a dictionary needs at least one string")
        prev = None
        for k, s in enumerate(self.strings):
            if not s:
                raise CorpusError(f"string {k} is empty")
            for bad in FORBIDDEN_BYTES:
                if bad in s:
                    raise CorpusError(f"string {k} contains forbidden byte 0x{bad:02x}")
            if prev is not None and s <= prev:
                raise CorpusError(f"strings not strictly increasing at index {k}")
            prev = s

    @classmethod
    def from_strings(cls, strings: Iterable[bytes]) -> tuple["Corpus", int]:
        """Sort and deduplicate; returns the corpus and the duplicate count."""
        items = list(strings)
        unique = sorted(set(items))
        return cls(tuple(unique)), len(items) - len(unique)

    @property
    def n(self) -> int:
        return len(self.strings) + 2

    def __len__(self) -> int:
        return len(self.strings)

    def at(self, pos: int) -> bytes | None:
        """String at a position; ``None`` stands for the virtual high sentinel."""
        if pos == 0:
            return b""
        if pos == self.n - 1:
            return None
        return self.strings[pos - 1]

    def raw_bytes(self) -> int:
        return sum(len(s) + 1 for s in self.strings)

    def checksum(self) -> bytes:
        h = hashlib.blake2b(digest_size=8)
        for s in self.strings:
            h.update(s)
            h.update(b"\n")
        return h.digest()


def lcp(a: bytes | None, b: bytes | None) -> int:
    if a is None or b is None:
        return 0
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def parent_positions(n: int, i: int) -> tuple[int, int]:
    """Interval endpoints of the decomposition step whose midpoint is ``i``."""
    if not 0 < i < n - 1:
        raise IndexError(f"position {i} is a sentinel or out of range for n={n}")
    pl, pr = 0, n - 1
    while True:
        pm = (pl + pr) >> 1
        if pm == i:
            return pl, pr
        if i < pm:
            pr = pm
        else:
            pl = pm


def ancestry(n: int, i: int) -> dict[int, tuple[int, int]]:
    """Parents of every position on the root-to-``i`` path, computed top-down."""
    if not 0 < i < n - 1:
        raise IndexError(f"position {i} is a sentinel or out of range for n={n}")
    out = {}
    pl, pr = 0, n - 1
    while True:
        pm = (pl + pr) >> 1
        out[pm] = (pl, pr)
        if pm == i:
            return out
        if i < pm:
            pr = pm
        else:
            pl = pm


@dataclass
class Decomposition:
    n: int
    llcp: list[int]
    rlcp: list[int]
    tails: list[bytes]
    lcp_mode: str

    def maxlcp(self, i: int) -> int:
        if self.lcp_mode == "left":
            return self.llcp[i]
        if self.lcp_mode == "right":
            return self.rlcp[i]
        return max(self.llcp[i], self.rlcp[i])


def decompose(corpus: Corpus, lcp_mode: str = "both") -> Decomposition:
    n = corpus.n
    llcp = [0] * n
    rlcp = [0] * n
    tails = [b""] * n
    stack = [(0, n - 1)]
    while stack:
        pl, pr = stack.pop()
        if pr - pl <= 1:
            continue
        pm = (pl + pr) >> 1
        s = corpus.at(pm)
        lv = lcp(s, corpus.at(pl)) if lcp_mode != "right" else 0
        rv = lcp(s, corpus.at(pr)) if lcp_mode != "left" else 0
        llcp[pm] = lv
        rlcp[pm] = rv
        tails[pm] = s[max(lv, rv):]
        stack.append((pm, pr))
        stack.append((pl, pm))
    return Decomposition(n, llcp, rlcp, tails, lcp_mode)


# -- tail stores ---------------------------------------------------------------


class PlainTails:
    """Concatenated raw tails plus a sparse bitmap of tail starts."""

    kind = "plain"

    def __init__(self, text: bytes, starts: SparseBitvector, keep: bool) -> None:
        self.text = text
        self.starts = starts
        self.keep = keep
        self.count = starts.ones

    @classmethod
    def build(cls, tails: Sequence[bytes], keep: bool) -> "PlainTails":
        pieces = [t + b"\0" if keep else (t or b"\0") for t in tails]
        positions, pos = [], 0
        for p in pieces:
            positions.append(pos)
            pos += len(p)
        return cls(b"".join(pieces), SparseBitvector.from_positions(positions, pos), keep)

    def get(self, i: int) -> bytes:
        if self.keep:
            start = self.starts.select1(i + 1)
            return self.text[start:self.text.index(0, start)]
        if i + 1 < self.count:
            start, end = self.starts.select_pair(i + 1)
        else:
            start, end = self.starts.select1(i + 1), len(self.text)
        return b"" if self.text[start] == 0 else self.text[start:end]

    def chunks(self, i: int) -> Iterator[bytes]:
        t = self.get(i)
        return iter((t,) if t else ())

    def stored_bytes(self) -> int:
        return len(self.text)


class RePairVbyteTails:
    """Re-Pair symbols of each tail, Vbyte-coded, with a bitmap of tail starts."""

    kind = "vbyte"

    def __init__(self, grammar: Grammar, data: bytes, starts: SparseBitvector, keep: bool) -> None:
        self.grammar = grammar
        self.data = data
        self.starts = starts
        self.keep = keep
        self.count = starts.ones

    @classmethod
    def build(cls, grammar: Grammar, regions: Sequence[Sequence[int]], keep: bool) -> "RePairVbyteTails":
        parts, positions, pos = [], [], 0
        for reg in regions:
            seq = list(reg) + [TERMINATOR] if keep else (list(reg) or [TERMINATOR])
            code = b"".join(vbyte_encode(s) for s in seq)
            positions.append(pos)
            parts.append(code)
            pos += len(code)
        return cls(grammar, b"".join(parts), SparseBitvector.from_positions(positions, pos), keep)

    def _span(self, i: int) -> tuple[int, int]:
        if self.keep or i + 1 == self.count:
            return self.starts.select1(i + 1), len(self.data)
        return self.starts.select_pair(i + 1)

    def symbols(self, i: int) -> Iterator[int]:
        data = self.data
        pos, end = self._span(i)
        while pos < end:
            s, used = vbyte_decode(data, pos)
            if s == TERMINATOR:
                return
            yield s
            pos += used

    def chunks(self, i: int) -> Iterator[bytes]:
        # vbyte decoding inlined: this loop is the hot path of lookup
        exps = self.grammar._expansions
        data = self.data
        pos, end = self._span(i)
        while pos < end:
            b = data[pos]
            pos += 1
            s = b & 0x7F
            shift = 7
            while b & 0x80:
                b = data[pos]
                pos += 1
                s |= (b & 0x7F) << shift
                shift += 7
            if s == TERMINATOR:
                return
            yield exps[s]

    def get(self, i: int) -> bytes:
        return b"".join(self.chunks(i))

    def stored_bytes(self) -> int:
        return len(self.data)


class RePairDacVlsTails:
    """Re-Pair symbols of each tail in a DAC-VLS store (no start bitmap)."""

    kind = "dacvls"

    def __init__(self, grammar: Grammar, store: DacVlsStore, keep: bool) -> None:
        self.grammar = grammar
        self.store = store
        self.keep = keep
        self.count = store.size

    @classmethod
    def build(cls, grammar: Grammar, regions: Sequence[Sequence[int]], keep: bool) -> "RePairDacVlsTails":
        seqs = [list(reg) + [TERMINATOR] if keep else (list(reg) or [TERMINATOR]) for reg in regions]
        return cls(grammar, DacVlsStore.build(seqs), keep)

    def symbols(self, i: int) -> Iterator[int]:
        for s in self.store.iter_sequence(i):
            if s == TERMINATOR:
                return
            yield s

    def chunks(self, i: int) -> Iterator[bytes]:
        exps = self.grammar._expansions
        for s in self.store.iter_sequence(i):
            if s == TERMINATOR:
                return
            yield exps[s]

    def get(self, i: int) -> bytes:
        return b"".join(self.chunks(i))

    def stored_bytes(self) -> int:
        return sum(len(v) for v in self.store.values)


# -- dictionary ------------------------------------------------------------------


@dataclass
class Step:
    """One iteration of a lookup, recorded when a trace list is supplied."""

    pl: int
    pr: int
    pm: int
    l: int
    r: int
    compared: bool
    offset: int = -1
    o: int = -1
    cmp: int = 0


@dataclass
class AccessStep:
    pos: int
    o: int
    limit: int
    copied: int


class Dictionary:
    """Immutable dictionary answering lookup (string -> id) and access (id -> string)."""

    def __init__(self, config: BuildConfig, n: int, llcp, rlcp, tails, *, checksum: bytes = b"\0" * 8,
                 raw_bytes: int = 0) -> None:
        self.config = config
        self.n = n
        self.llcp = llcp
        self.rlcp = rlcp
        self.tails = tails
        self.checksum = checksum
        self.raw_bytes = raw_bytes
        self._mode = config.lcp_mode

    def __len__(self) -> int:
        return self.n - 2

    def maxlcp(self, i: int) -> int:
        if self._mode == "left":
            return self.llcp[i]
        if self._mode == "right":
            return self.rlcp[i]
        return max(self.llcp[i], self.rlcp[i])

    def tail(self, i: int) -> bytes:
        return self.tails.get(i)

    def compare_from(self, query: bytes, offset: int, pos: int) -> tuple[int, int]:
        """Compare ``query[offset:]`` with the tail at ``pos``.

        Returns the sign of (query - C[pos]) and the absolute offset of the
        first mismatch. Only valid when the tail at ``pos`` starts at ``offset``.
        """
        at = offset
        for chunk in self.tails.chunks(pos):
            m = len(chunk)
            seg = query[at:at + m]
            if seg == chunk:
                at += m
                continue
            k = 0
            short = len(seg)
            while k < short and seg[k] == chunk[k]:
                k += 1
            at += k
            if k == short:
                return -1, at
            return (1 if seg[k] > chunk[k] else -1), at
        return (0 if at == len(query) else 1), at

    def lookup(self, query: bytes, trace: list | None = None) -> int | None:
        """Position of ``query``, or ``None`` when it is not stored."""
        llcp, rlcp, mode = self.llcp, self.rlcp, self._mode
        both = mode == "both"
        left_only = mode == "left"
        chunks = self.tails.chunks
        qlen = len(query)
        pl, pr = 0, self.n - 1
        l = r = 0
        while pr - pl > 1:
            pm = (pl + pr) >> 1
            if both:
                if l > r:
                    left_side = True
                    lv = llcp[pm]
                elif l < r:
                    left_side = False
                    rv = rlcp[pm]
                else:
                    lv = llcp[pm]
                    rv = rlcp[pm]
                    left_side = lv >= rv
            elif left_only:
                left_side = True
                lv = llcp[pm]
            else:
                left_side = False
                rv = rlcp[pm]

            if left_side:
                if lv != l:
                    if trace is not None:
                        trace.append(Step(pl, pr, pm, l, r, False))
                    if lv > l:
                        pl = pm
                    else:
                        pr, r = pm, lv
                    continue
                bound = l
            else:
                if rv != r:
                    if trace is not None:
                        trace.append(Step(pl, pr, pm, l, r, False))
                    if rv > r:
                        pr = pm
                    else:
                        pl, l = pm, rv
                    continue
                bound = r

            # compare_from(query, bound, pm), inlined
            o = bound
            cmp = 2
            for chunk in chunks(pm):
                m = len(chunk)
                seg = query[o:o + m]
                if seg == chunk:
                    o += m
                    continue
                k = 0
                short = len(seg)
                while k < short and seg[k] == chunk[k]:
                    k += 1
                o += k
                cmp = -1 if k == short or seg[k] < chunk[k] else 1
                break
            if cmp == 2:
                cmp = 0 if o == qlen else 1
            if trace is not None:
                trace.append(Step(pl, pr, pm, l, r, True, bound, o, cmp))
            if cmp > 0:
                pl, l = pm, o
            elif cmp < 0:
                pr, r = pm, o
            else:
                return pm
        return None

    def access(self, pos: int, trace: list | None = None) -> bytes:
        """String stored at position ``pos`` (1 <= pos <= n-2)."""
        if not 1 <= pos <= self.n - 2:
            raise IndexError(f"id {pos} outside [1, {self.n - 2}]")
        parents = ancestry(self.n, pos)
        llcp, rlcp, mode = self.llcp, self.rlcp, self._mode
        pieces = []
        limit = -1  # unbounded until the first tail is copied
        p = pos
        while limit != 0:
            if mode == "left":
                o, up = llcp[p], 0
            elif mode == "right":
                o, up = rlcp[p], 1
            else:
                lv, rv = llcp[p], rlcp[p]
                o, up = (lv, 0) if lv >= rv else (rv, 1)
            copied = 0
            if limit < 0:
                piece = self.tails.get(p)
                pieces.append(piece)
                copied = len(piece)
                limit_before, limit = limit, o
            elif o < limit:
                want = limit - o
                got = bytearray()
                for chunk in self.tails.chunks(p):
                    got += chunk
                    if len(got) >= want:
                        break
                pieces.append(bytes(got[:want]))
                copied = want
                limit_before, limit = limit, o
            else:
                limit_before = limit
            if trace is not None:
                trace.append(AccessStep(p, o, limit_before, copied))
            p = parents[p][up]
        return b"".join(reversed(pieces))

    def strings(self) -> Iterator[bytes]:
        for i in range(1, self.n - 1):
            yield self.access(i)


def _lcp_store(values: list[int], dac: bool, width: int):
    if dac:
        return DacSequence.build(values, width)
    return PackedArray.from_values(values)


def build_family(corpus: Corpus, configs: Sequence[BuildConfig]) -> list[Dictionary]:
    """Build several configurations, sharing decompositions and grammars."""
    decomps: dict[str, Decomposition] = {}
    grammars: dict[str, tuple[Grammar, list[list[int]]]] = {}
    out = []
    for cfg in configs:
        dec = decomps.get(cfg.lcp_mode)
        if dec is None:
            dec = decomps[cfg.lcp_mode] = decompose(corpus, cfg.lcp_mode)
        keep = cfg.term_mode == "keep"
        if cfg.tail_kind == "plain":
            tails = PlainTails.build(dec.tails, keep)
        else:
            if cfg.lcp_mode not in grammars:
                grammar, text = compress_regions(dec.tails)
                grammars[cfg.lcp_mode] = (grammar, text.regions)
            grammar, regions = grammars[cfg.lcp_mode]
            cls = RePairDacVlsTails if cfg.tail_kind == "dacvls" else RePairVbyteTails
            tails = cls.build(grammar, regions, keep)
        llcp = _lcp_store(dec.llcp, cfg.dac_lcp, cfg.dac_width) if cfg.lcp_mode != "right" else None
        rlcp = _lcp_store(dec.rlcp, cfg.dac_lcp, cfg.dac_width) if cfg.lcp_mode != "left" else None
        out.append(Dictionary(cfg, dec.n, llcp, rlcp, tails,
                              checksum=corpus.checksum(), raw_bytes=corpus.raw_bytes()))
    return out


def build(corpus: Corpus, config: BuildConfig | None = None) -> Dictionary:
    return build_family(corpus, [config or BuildConfig()])[0]
