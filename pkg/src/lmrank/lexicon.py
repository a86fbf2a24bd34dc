"""Source-to-target word lexicon used to project source trigrams.

The file format is the usual word-alignment dictionary dump::

    # comment
    park<TAB>पार्क
    park<TAB>उद्यान<TAB>0.31

An optional weight column is kept on the entry but plays no part in
ranking.  A ``#lexicon`` comment line may carry the language tags and is
written back by :func:`save_lexicon`.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import read_lines
from .errors import InputFormatError, ValidationError

LEXICON_TAG = "#lexicon"


@dataclass
class ParallelLexicon:
    """Maps a source word to an ordered, duplicate-free set of target words.

    ``entries[src]`` is a dict ``target -> weight`` (``None`` when the file
    had no weight column); dict order is the registration order.
    """

    entries: dict[str, dict[str, float | None]] = field(default_factory=dict)
    source_language: str = ""
    target_language: str = ""

    def add(self, source: str, target: str, weight: float | None = None) -> None:
        source = unicodedata.normalize("NFC", source)
        target = unicodedata.normalize("NFC", target)
        for word in (source, target):
            if not word or any(ch.isspace() for ch in word):
                raise ValidationError(f"lexicon words must be non-empty single tokens: {word!r}")
        targets = self.entries.setdefault(source, {})
        if target not in targets:
            targets[target] = weight

    def lookup(self, source_word: str) -> tuple[str, ...]:
        return tuple(self.entries.get(source_word, ()))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, source_word) -> bool:
        return source_word in self.entries

    def pair_count(self) -> int:
        return sum(len(t) for t in self.entries.values())

    def merge(self, other: "ParallelLexicon") -> "ParallelLexicon":
        """Union of two lexicons.

        Targets already known keep their order; targets contributed only by
        ``other`` are appended in lexicographic order.
        """
        merged = ParallelLexicon({s: dict(t) for s, t in self.entries.items()},
                                 self.source_language, self.target_language)
        for source, targets in other.entries.items():
            mine = merged.entries.setdefault(source, {})
            for target in sorted(set(targets) - set(mine)):
                mine[target] = targets[target]
        return merged


def lookup(lex: ParallelLexicon, source_word: str) -> tuple[str, ...]:
    return lex.lookup(source_word)


def project(lex: ParallelLexicon, retained: Iterable[Sequence[str]]) -> tuple[str, ...]:
    """Register the targets of every word of every retained n-gram.

    Result is duplicate-free, in first-registration order.
    """
    registered: dict[str, None] = {}
    for gram in retained:
        for word in gram:
            for target in lex.entries.get(word, ()):
                registered[target] = None
    return tuple(registered)


def _parse_tag_line(line: str) -> dict[str, str]:
    tags = {}
    for part in line.split("\t")[1:]:
        key, _, value = part.partition("=")
        tags[key] = value
    return tags


def parse_lexicon(lines: Sequence[str], path=None, source_language: str = "",
                  target_language: str = "") -> ParallelLexicon:
    lex = ParallelLexicon(source_language=source_language, target_language=target_language)
    for line_no, line in enumerate(lines, 1):
        if line.startswith(LEXICON_TAG + "\t"):
            tags = _parse_tag_line(line)
            lex.source_language = source_language or tags.get("source", "")
            lex.target_language = target_language or tags.get("target", "")
            continue
        if line.startswith("#") or not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) not in (2, 3):
            raise InputFormatError(
                f"expected source<TAB>target[<TAB>weight], got {len(cols)} columns",
                path, line_no)
        source, target = cols[0].strip(), cols[1].strip()
        if not source or not target:
            raise InputFormatError("empty source or target field", path, line_no)
        weight = None
        if len(cols) == 3:
            try:
                weight = float(cols[2])
            except ValueError:
                raise InputFormatError(f"bad weight {cols[2]!r}", path, line_no) from None
        try:
            lex.add(source, target, weight)
        except ValidationError as exc:
            raise InputFormatError(str(exc), path, line_no) from None
    return lex


def load_lexicon(path, source_language: str = "", target_language: str = "") -> ParallelLexicon:
    return parse_lexicon(read_lines(path), path, source_language, target_language)


def dumps_lexicon(lex: ParallelLexicon) -> str:
    lines = []
    if lex.source_language or lex.target_language:
        lines.append(f"{LEXICON_TAG}\tsource={lex.source_language}\ttarget={lex.target_language}")
    for source, targets in lex.entries.items():
        for target, weight in targets.items():
            if weight is None:
                lines.append(f"{source}\t{target}")
            else:
                lines.append(f"{source}\t{target}\t{weight!r}")
    return "".join(line + "\n" for line in lines)


def save_lexicon(lex: ParallelLexicon, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_lexicon(lex))
