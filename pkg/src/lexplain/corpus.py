"""Token store for vertical-format corpora.

A corpus is held as one integer id array per attribute (word, lemma, tag)
plus a lexicon mapping ids to strings.  Postings lists are CSR-encoded:
``offsets[v]:offsets[v+1]`` slices the sorted positions of value ``v``.
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence

import numpy as np

ATTRIBUTES = ("word", "lemma", "tag")
COARSE_POS = ("N", "J", "V", "A", "other")
OTHER = COARSE_POS.index("other")

MAGIC = b"LXPC"
FORMAT_VERSION = 1

DEFAULT_POS_MAP = (
    ("NN.*", "N"),
    ("JJ.*", "J"),
    ("VB.*", "V"),
    ("RB.*", "A"),
)


class CorpusError(Exception):
    """Malformed corpus input or index file."""


class IngestError(CorpusError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Token:
    word: str
    lemma: str
    tag: str


class Lexicon:
    """Dense value <-> id mapping for one attribute."""

    def __init__(self, values: Sequence[str] = ()):
        self.values: list[str] = list(values)
        self.ids: dict[str, int] = {v: i for i, v in enumerate(self.values)}

    def add(self, value: str) -> int:
        i = self.ids.get(value)
        if i is None:
            i = len(self.values)
            self.ids[value] = i
            self.values.append(value)
        return i

    def get(self, value: str, default: int = -1) -> int:
        return self.ids.get(value, default)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> str:
        return self.values[i]

    def __iter__(self):
        return iter(self.values)


def compile_pos_map(pos_map: Iterable[tuple[str, str]]) -> list[tuple[re.Pattern, str]]:
    out = []
    for regex, coarse in pos_map:
        if coarse not in COARSE_POS:
            raise ValueError(f"unknown coarse POS {coarse!r} for {regex!r}")
        out.append((re.compile(regex), coarse))
    return out


class Corpus:
    """Immutable annotated corpus.  Build with :func:`ingest_vertical` or :func:`load_index`."""

    def __init__(self, ids: dict[str, np.ndarray], lexicons: dict[str, Lexicon],
                 sentences: np.ndarray, pos_map: Sequence[tuple[str, str]]):
        self.ids = {a: np.ascontiguousarray(ids[a], dtype=np.int32) for a in ATTRIBUTES}
        self.lexicons = lexicons
        self.sentences = np.asarray(sentences, dtype=np.int64).reshape(-1, 2)
        self.pos_map = tuple((str(r), str(c)) for r, c in pos_map)
        self._compiled_pos_map = compile_pos_map(self.pos_map)
        for arr in self.ids.values():
            arr.setflags(write=False)
        self.sentences.setflags(write=False)

        n = len(self)
        self._postings = {}
        for attr in ATTRIBUTES:
            arr = self.ids[attr]
            order = np.argsort(arr, kind="stable").astype(np.int64)
            counts = np.bincount(arr, minlength=len(lexicons[attr])) if n else np.zeros(len(lexicons[attr]), np.int64)
            offsets = np.zeros(len(counts) + 1, dtype=np.int64)
            np.cumsum(counts, out=offsets[1:])
            self._postings[attr] = (offsets, order)

        # end of the enclosing sentence for every position
        self.sent_end = np.empty(n, dtype=np.int64)
        for start, end in self.sentences:
            self.sent_end[start:end] = end
        self.sent_end.setflags(write=False)

        tag_coarse = np.array([COARSE_POS.index(self._coarse(t)) for t in lexicons["tag"]],
                              dtype=np.int8)
        self.coarse = tag_coarse[self.ids["tag"]] if n else np.zeros(0, np.int8)
        self.coarse.setflags(write=False)

    def __len__(self) -> int:
        return len(self.ids["lemma"])

    def __getitem__(self, pos: int) -> Token:
        return Token(*(self.lexicons[a][int(self.ids[a][pos])] for a in ATTRIBUTES))

    @property
    def tokens(self) -> list[Token]:
        return [self[i] for i in range(len(self))]

    def value(self, attr: str, pos: int) -> str:
        return self.lexicons[attr][int(self.ids[attr][pos])]

    def _check_attr(self, attr: str) -> None:
        if attr not in ATTRIBUTES:
            raise ValueError(f"unknown attribute {attr!r}; expected one of {ATTRIBUTES}")

    def postings(self, attr: str, value: str) -> np.ndarray:
        """Sorted positions whose ``attr`` equals ``value``."""
        self._check_attr(attr)
        i = self.lexicons[attr].get(value)
        if i < 0:
            return np.zeros(0, dtype=np.int64)
        offsets, order = self._postings[attr]
        return order[offsets[i]:offsets[i + 1]]

    def freq(self, attr: str, value: str) -> int:
        self._check_attr(attr)
        i = self.lexicons[attr].get(value)
        if i < 0:
            return 0
        offsets, _ = self._postings[attr]
        return int(offsets[i + 1] - offsets[i])

    def _coarse(self, tag: str) -> str:
        for regex, coarse in self._compiled_pos_map:
            if regex.fullmatch(tag):
                return coarse
        return "other"

    def coarse_pos(self, tag: str) -> str:
        return self._coarse(tag)

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            write_index(self, fh)


def freq(corpus: Corpus, attr: str, value: str) -> int:
    return corpus.freq(attr, value)


def coarse_pos(corpus: Corpus, tag: str) -> str:
    """Map a tag to N/J/V/A/other; the first matching regex in the POS map wins."""
    return corpus.coarse_pos(tag)


def ingest_vertical(lines: Iterable[str], pos_map: Sequence[tuple[str, str]] = DEFAULT_POS_MAP) -> Corpus:
    """Read a vertical corpus (one ``word<TAB>lemma<TAB>tag`` token per line).

    ``<s>``/``</s>`` delimit sentences.  Tokens outside an explicit sentence
    form implicit sentences which are closed by any other structural line
    (``<doc>``, ``</doc>``, ...) and at end of input.
    """
    lexicons = {a: Lexicon() for a in ATTRIBUTES}
    cols: dict[str, list[int]] = {a: [] for a in ATTRIBUTES}
    sentences: list[tuple[int, int]] = []
    sent_start = 0
    explicit = False

    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("<"):
            tag = line.strip()
            opening = tag == "<s>" or tag.startswith("<s ")
            closing = tag == "</s>"
            # other structural lines inside an explicit sentence are ignored
            if opening or closing or not explicit:
                n = len(cols["word"])
                if n > sent_start:
                    sentences.append((sent_start, n))
                sent_start = n
                explicit = opening
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise IngestError(lineno, f"expected 3 tab-separated fields, got {len(fields)}")
        if not all(fields):
            raise IngestError(lineno, "empty field")
        for attr, value in zip(ATTRIBUTES, fields):
            cols[attr].append(lexicons[attr].add(value))
    n = len(cols["word"])
    if n > sent_start:
        sentences.append((sent_start, n))

    ids = {a: np.array(cols[a], dtype=np.int32) for a in ATTRIBUTES}
    return Corpus(ids, lexicons, np.array(sentences, dtype=np.int64).reshape(-1, 2), pos_map)


def read_vertical(path, pos_map: Sequence[tuple[str, str]] = DEFAULT_POS_MAP) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return ingest_vertical(fh, pos_map)


# On-disk index, all integers little-endian:
#
#   header    "LXPC" | u8 version | 3 zero bytes | u64 n_tokens | u64 n_sentences
#   pos map   u32 n_entries, then per entry: str regex, str coarse
#   sentences n_sentences x (u64 start, u64 end)
#   per attribute in word, lemma, tag order:
#     lexicon   u32 n_values, then n_values x str
#     ids       n_tokens x u32
#     postings  (n_values + 1) x u64 offsets, then n_tokens x u32 positions
#
# where str is u32 byte length followed by UTF-8 bytes.

def _write_str(fh: BinaryIO, s: str) -> None:
    b = s.encode("utf-8")
    fh.write(struct.pack("<I", len(b)))
    fh.write(b)


def _read_exact(fh: BinaryIO, n: int) -> bytes:
    b = fh.read(n)
    if len(b) != n:
        raise CorpusError("truncated index file")
    return b


def _read_str(fh: BinaryIO) -> str:
    (n,) = struct.unpack("<I", _read_exact(fh, 4))
    return _read_exact(fh, n).decode("utf-8")


def _read_array(fh: BinaryIO, dtype: str, count: int) -> np.ndarray:
    return np.frombuffer(_read_exact(fh, np.dtype(dtype).itemsize * count), dtype=dtype)


def write_index(corpus: Corpus, fh: BinaryIO) -> None:
    n = len(corpus)
    fh.write(MAGIC + struct.pack("<B3xQQ", FORMAT_VERSION, n, len(corpus.sentences)))
    fh.write(struct.pack("<I", len(corpus.pos_map)))
    for regex, coarse in corpus.pos_map:
        _write_str(fh, regex)
        _write_str(fh, coarse)
    fh.write(corpus.sentences.astype("<u8").tobytes())
    for attr in ATTRIBUTES:
        lex = corpus.lexicons[attr]
        fh.write(struct.pack("<I", len(lex)))
        for v in lex:
            _write_str(fh, v)
        fh.write(corpus.ids[attr].astype("<u4").tobytes())
        offsets, order = corpus._postings[attr]
        fh.write(offsets.astype("<u8").tobytes())
        fh.write(order.astype("<u4").tobytes())


def read_index(fh: BinaryIO) -> Corpus:
    if _read_exact(fh, 4) != MAGIC:
        raise CorpusError("not a corpus index (bad magic)")
    version, n, n_sent = struct.unpack("<B3xQQ", _read_exact(fh, 20))
    if version != FORMAT_VERSION:
        raise CorpusError(f"unsupported index version {version}")
    (n_map,) = struct.unpack("<I", _read_exact(fh, 4))
    pos_map = [(_read_str(fh), _read_str(fh)) for _ in range(n_map)]
    sentences = _read_array(fh, "<u8", 2 * n_sent).astype(np.int64).reshape(-1, 2)
    ids, lexicons = {}, {}
    for attr in ATTRIBUTES:
        (n_values,) = struct.unpack("<I", _read_exact(fh, 4))
        lexicons[attr] = Lexicon([_read_str(fh) for _ in range(n_values)])
        ids[attr] = _read_array(fh, "<u4", n).astype(np.int32)
        # postings are rebuilt on load; skip the stored copy
        _read_exact(fh, 8 * (n_values + 1) + 4 * n)
    return Corpus(ids, lexicons, sentences, pos_map)


def load_index(path) -> Corpus:
    with open(Path(path), "rb") as fh:
        return read_index(fh)
