"""Text normalization, tokenization and n-gram extraction.

Every other module goes through :func:`tokenize` so that the language
models, the lexicon and the candidate translations all agree on what a
token is.  The rules are deliberately small:

* NFC normalization (Devanagari has several encodings of the same glyphs),
* split on Unicode whitespace,
* ``. ! ? ,`` and the danda ``।`` are peeled off the edges of each
  whitespace fragment and become tokens of their own; everything else,
  including those characters in the middle of a fragment (``3.5``,
  ``1,000``), stays attached,
* no case folding.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InputFormatError, InvalidOrderError

DETACHED_PUNCTUATION = frozenset(".!?,।")
ORDERS = (1, 2, 3)


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    sentence_id: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)

    def __getitem__(self, idx):
        return self.tokens[idx]


def ngram_key(gram: Sequence[str]) -> str:
    """Canonical string form of an n-gram: words joined by one ASCII space."""
    return " ".join(gram)


def split_key(key: str) -> tuple[str, ...]:
    return tuple(key.split(" "))


def _split_fragment(fragment: str) -> list[str]:
    head: list[str] = []
    tail: list[str] = []
    start, end = 0, len(fragment)
    while start < end and fragment[start] in DETACHED_PUNCTUATION:
        head.append(fragment[start])
        start += 1
    while end > start and fragment[end - 1] in DETACHED_PUNCTUATION:
        tail.append(fragment[end - 1])
        end -= 1
    core = [fragment[start:end]] if start < end else []
    return head + core + tail[::-1]


def tokenize(raw: str, sentence_id: str = "") -> TokenSequence:
    """Split a raw sentence into tokens.

    >>> tokenize("स्थापित किया गया था।").tokens
    ('स्थापित', 'किया', 'गया', 'था', '।')
    """
    text = unicodedata.normalize("NFC", raw)
    tokens: list[str] = []
    for fragment in text.split():
        for piece in _split_fragment(fragment):
            # a piece of an NFC string is not guaranteed to be NFC itself
            piece = unicodedata.normalize("NFC", piece)
            if piece:
                tokens.append(piece)
    return TokenSequence(tuple(tokens), sentence_id)


def extract_ngrams(seq: Sequence[str], order: int) -> list[tuple[str, ...]]:
    """All contiguous windows of width ``order``, in sentence order, unpadded."""
    if type(order) is not int or order not in ORDERS:
        raise InvalidOrderError(f"n-gram order must be one of {ORDERS}, got {order!r}")
    tokens = tuple(seq)
    return [tokens[i:i + order] for i in range(len(tokens) - order + 1)]


def read_lines(path) -> list[str]:
    """Read a UTF-8 text file, raising InputFormatError on bad encoding."""
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as exc:
        raise InputFormatError(f"cannot read file: {exc.strerror}", path) from exc
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line_no = data[:exc.start].count(b"\n") + 1
        raise InputFormatError("invalid UTF-8", path, line_no) from exc
    if text.startswith("\ufeff"):
        text = text[1:]
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line[:-1] if line.endswith("\r") else line for line in lines]


def read_corpus(path) -> list[TokenSequence]:
    """One sentence per line; the 1-based line number is the sentence id."""
    return [tokenize(line, str(i)) for i, line in enumerate(read_lines(path), 1)]


def iter_tokenized(lines: Iterable[str]) -> Iterator[TokenSequence]:
    for i, line in enumerate(lines, 1):
        yield tokenize(line, str(i))
