"""Maximum-likelihood n-gram language models (orders 1 to 3).

Counts are exact integers and are the only stored state; probabilities are
computed on request::

    P(w)          = count(w) / total_tokens        (or / vocab_size)
    P(w2 | w1)    = count(w1 w2) / count(w1 *)
    P(w3 | w1 w2) = count(w1 w2 w3) / count(w1 w2 *)

``count(h *)`` is the number of times the history ``h`` is followed by some
word, i.e. ``count(h)`` minus its sentence-final occurrences.  Without
sentence boundary markers this is what makes every conditional
distribution sum to one.  There is no smoothing and no backoff: anything
unseen has probability 0.

Model files are UTF-8 TSV, one section per order, records sorted by
descending count and then ascending key so that output is byte-stable::

    #lmrank-model<TAB>language=hi<TAB>max_order=3<TAB>total_tokens=...<TAB>...
    \\1-grams:<TAB>2
    a<TAB>2<TAB>0.666666666667
    b<TAB>1<TAB>0.333333333333
    \\2-grams:<TAB>2
    ...
"""

from __future__ import annotations

import io
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .corpus import ORDERS, extract_ngrams, ngram_key, read_lines, split_key
from .errors import EmptyModelError, InputFormatError, InvalidOrderError, ValidationError

DENOMINATOR_MODES = ("tokens", "vocab")
FORMAT_TAG = "#lmrank-model"
_SECTION_RE = re.compile(r"^\\([123])-grams:\t(\d+)$")


def _check_mode(mode: str) -> str:
    if mode not in DENOMINATOR_MODES:
        raise ValidationError(
            f"unigram denominator must be one of {DENOMINATOR_MODES}, got {mode!r}")
    return mode


def _check_tag(tag: str) -> str:
    if any(ch.isspace() for ch in tag) or "=" in tag:
        raise ValidationError(f"language tag may not contain whitespace or '=': {tag!r}")
    return tag


@dataclass(frozen=True)
class CorpusStats:
    sentence_count: int
    distinct_unigrams: int
    distinct_bigrams: int
    distinct_trigrams: int
    total_tokens: int
    total_bigrams: int = 0
    total_trigrams: int = 0

    def as_rows(self) -> list[tuple[str, int]]:
        return [
            ("sentences", self.sentence_count),
            ("distinct_unigrams", self.distinct_unigrams),
            ("distinct_bigrams", self.distinct_bigrams),
            ("distinct_trigrams", self.distinct_trigrams),
            ("total_tokens", self.total_tokens),
            ("total_bigrams", self.total_bigrams),
            ("total_trigrams", self.total_trigrams),
        ]


class NgramModel:
    """Counts for orders 1..3 over one language's corpus.

    Treat instances as immutable once built; :func:`train` and
    :meth:`merge` return new models.
    """

    def __init__(self, counts: Sequence[dict] | None = None, language_tag: str = "",
                 unigram_denominator: str = "tokens", sentence_count: int = 0):
        if counts is None:
            counts = ({}, {}, {})
        if len(counts) != len(ORDERS):
            raise ValidationError("expected one count map per order 1..3")
        self.counts: tuple[dict, dict, dict] = tuple(dict(c) for c in counts)
        self.language_tag = _check_tag(language_tag)
        self.unigram_denominator = _check_mode(unigram_denominator)
        self.sentence_count = sentence_count
        self.total_tokens = sum(self.counts[0].values())
        self.vocab_size = len(self.counts[0])
        self._histories = (_history_counts(self.counts[1]), _history_counts(self.counts[2]))

    def __repr__(self):
        return (f"NgramModel(language_tag={self.language_tag!r}, "
                f"vocab_size={self.vocab_size}, total_tokens={self.total_tokens})")

    def __eq__(self, other):
        if not isinstance(other, NgramModel):
            return NotImplemented
        return (self.counts == other.counts
                and self.language_tag == other.language_tag
                and self.unigram_denominator == other.unigram_denominator
                and self.sentence_count == other.sentence_count)

    __hash__ = None

    def count(self, gram: Sequence[str]) -> int:
        gram = tuple(gram)
        if len(gram) not in ORDERS:
            raise InvalidOrderError(f"n-gram order must be one of {ORDERS}, got {len(gram)}")
        return self.counts[len(gram) - 1].get(gram, 0)

    def contains(self, gram: Sequence[str]) -> bool:
        return self.count(gram) > 0

    def _require_tokens(self):
        if self.total_tokens == 0:
            raise EmptyModelError("model has no tokens")

    def unigram_denominator_value(self, mode: str | None = None) -> int:
        mode = _check_mode(mode or self.unigram_denominator)
        return self.total_tokens if mode == "tokens" else self.vocab_size

    def prob_unigram(self, w: str, mode: str | None = None, exact: bool = False):
        self._require_tokens()
        p = Fraction(self.counts[0].get((w,), 0), self.unigram_denominator_value(mode))
        return p if exact else float(p)

    def prob_bigram(self, w1: str, w2: str, exact: bool = False):
        self._require_tokens()
        return _ratio(self.counts[1].get((w1, w2), 0), self._histories[0].get((w1,), 0), exact)

    def prob_trigram(self, w1: str, w2: str, w3: str, exact: bool = False):
        self._require_tokens()
        return _ratio(self.counts[2].get((w1, w2, w3), 0),
                      self._histories[1].get((w1, w2), 0), exact)

    def history_count(self, history: Sequence[str]) -> int:
        """How often ``history`` (1 or 2 words) is followed by another word."""
        history = tuple(history)
        if len(history) not in (1, 2):
            raise InvalidOrderError(f"history must have 1 or 2 words, got {len(history)}")
        return self._histories[len(history) - 1].get(history, 0)

    def prob(self, gram: Sequence[str], exact: bool = False):
        """Dispatch to the unigram/bigram/trigram estimate by length."""
        gram = tuple(gram)
        if len(gram) == 1:
            return self.prob_unigram(gram[0], exact=exact)
        if len(gram) == 2:
            return self.prob_bigram(*gram, exact=exact)
        if len(gram) == 3:
            return self.prob_trigram(*gram, exact=exact)
        raise InvalidOrderError(f"n-gram order must be one of {ORDERS}, got {len(gram)}")

    def merge(self, other: "NgramModel") -> "NgramModel":
        """Sum the counts of two models (e.g. trained on corpus shards)."""
        if self.language_tag != other.language_tag:
            raise ValidationError(
                f"cannot merge models for {self.language_tag!r} and {other.language_tag!r}")
        merged = []
        for mine, theirs in zip(self.counts, other.counts):
            c = Counter(mine)
            c.update(theirs)
            merged.append(c)
        return NgramModel(merged, self.language_tag, self.unigram_denominator,
                          self.sentence_count + other.sentence_count)

    def with_denominator(self, mode: str) -> "NgramModel":
        return NgramModel(self.counts, self.language_tag, mode, self.sentence_count)

    def invariant_violations(self) -> list[str]:
        problems = []
        for gram, c in self.counts[1].items():
            if c > self.counts[0].get(gram[:1], 0):
                problems.append(f"bigram {ngram_key(gram)!r} outnumbers its first word")
            if (gram[-1],) not in self.counts[0]:
                problems.append(f"bigram {ngram_key(gram)!r} uses unknown word {gram[1]!r}")
        for gram, c in self.counts[2].items():
            if c > self.counts[1].get(gram[:2], 0):
                problems.append(f"trigram {ngram_key(gram)!r} outnumbers its prefix")
            for w in gram:
                if (w,) not in self.counts[0]:
                    problems.append(f"trigram {ngram_key(gram)!r} uses unknown word {w!r}")
        for order, table in zip(ORDERS, self.counts):
            for gram, c in table.items():
                if len(gram) != order or c < 0:
                    problems.append(f"bad {order}-gram entry {gram!r}: {c}")
        return problems


def _history_counts(table: dict) -> dict:
    hist: Counter = Counter()
    for gram, c in table.items():
        hist[gram[:-1]] += c
    return dict(hist)


def _ratio(num: int, den: int, exact: bool):
    if den == 0:
        return Fraction(0) if exact else 0.0
    p = Fraction(num, den)
    return p if exact else float(p)


def train(sentences: Iterable[Sequence[str]], language_tag: str = "",
          unigram_denominator: str = "tokens") -> NgramModel:
    """Tally unigrams, bigrams and trigrams sentence by sentence.

    N-grams never cross sentence boundaries and no boundary markers are added.
    """
    tables = [Counter(), Counter(), Counter()]
    n_sentences = 0
    for sent in sentences:
        n_sentences += 1
        tokens = tuple(sent)
        for order in ORDERS:
            tables[order - 1].update(extract_ngrams(tokens, order))
    return NgramModel(tables, language_tag, unigram_denominator, n_sentences)


def prob_unigram(model: NgramModel, w: str, mode: str | None = None):
    return model.prob_unigram(w, mode)


def prob_bigram(model: NgramModel, w1: str, w2: str):
    return model.prob_bigram(w1, w2)


def prob_trigram(model: NgramModel, w1: str, w2: str, w3: str):
    return model.prob_trigram(w1, w2, w3)


def contains(model: NgramModel, gram: Sequence[str]) -> bool:
    return model.contains(gram)


def stats(model: NgramModel, sentence_count: int | None = None) -> CorpusStats:
    """Type and token counts per order, the shape of a corpus statistics table."""
    if sentence_count is None:
        sentence_count = model.sentence_count
    return CorpusStats(
        sentence_count=sentence_count,
        distinct_unigrams=len(model.counts[0]),
        distinct_bigrams=len(model.counts[1]),
        distinct_trigrams=len(model.counts[2]),
        total_tokens=model.total_tokens,
        total_bigrams=sum(model.counts[1].values()),
        total_trigrams=sum(model.counts[2].values()),
    )


# -- serialization ---------------------------------------------------------

def sorted_records(model: NgramModel, order: int) -> list[tuple[tuple[str, ...], int]]:
    """Descending count, ties by ascending canonical key."""
    table = model.counts[order - 1]
    return sorted(table.items(), key=lambda kv: (-kv[1], ngram_key(kv[0])))


def format_header(model: NgramModel) -> str:
    fields = [
        FORMAT_TAG,
        f"language={model.language_tag}",
        f"max_order={len(ORDERS)}",
        f"total_tokens={model.total_tokens}",
        f"vocab_size={model.vocab_size}",
        f"sentences={model.sentence_count}",
        f"denominator={model.unigram_denominator}",
    ]
    return "\t".join(fields)


def write_model(model: NgramModel, out, comments: Sequence[str] = ()) -> None:
    """Write ``model`` to the text stream ``out``.

    ``comments`` are extra ``#`` lines placed right after the header.
    """
    out.write(format_header(model) + "\n")
    for line in comments:
        out.write("# " + line + "\n")
    empty = model.total_tokens == 0
    for order in ORDERS:
        records = sorted_records(model, order)
        out.write(f"\\{order}-grams:\t{len(records)}\n")
        for gram, c in records:
            p = 0.0 if empty else model.prob(gram)
            out.write(f"{ngram_key(gram)}\t{c}\t{p:.12g}\n")


def dumps_model(model: NgramModel, comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    write_model(model, buf, comments)
    return buf.getvalue()


def save_model(model: NgramModel, path, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_model(model, f, comments)


def _parse_header(line: str, path) -> dict[str, str]:
    parts = line.split("\t")
    if parts[0] != FORMAT_TAG:
        raise InputFormatError(f"not an lmrank model file (expected {FORMAT_TAG!r} header)",
                               path, 1)
    header = {}
    for part in parts[1:]:
        key, sep, value = part.partition("=")
        if not sep:
            raise InputFormatError(f"bad header field {part!r}", path, 1)
        header[key] = value
    for key in ("language", "total_tokens", "vocab_size", "denominator"):
        if key not in header:
            raise InputFormatError(f"header lacks {key!r}", path, 1)
    return header


def parse_model(lines: Sequence[str], path=None) -> NgramModel:
    if not lines:
        raise InputFormatError("empty model file", path)
    header = _parse_header(lines[0], path)
    tables: list[dict] = [{}, {}, {}]
    declared: dict[int, int] = {}
    order = None
    for line_no, line in enumerate(lines[1:], 2):
        if order is None and line.startswith("#"):
            continue
        m = _SECTION_RE.match(line)
        if m:
            order = int(m.group(1))
            if order in declared:
                raise InputFormatError(f"duplicate {order}-gram section", path, line_no)
            declared[order] = int(m.group(2))
            continue
        if order is None:
            raise InputFormatError("record before first section header", path, line_no)
        cols = line.split("\t")
        if len(cols) != 3:
            raise InputFormatError(f"expected 3 tab-separated columns, got {len(cols)}",
                                   path, line_no)
        gram = split_key(cols[0])
        if len(gram) != order or not all(gram):
            raise InputFormatError(f"key {cols[0]!r} is not a {order}-gram", path, line_no)
        try:
            c = int(cols[1])
        except ValueError:
            raise InputFormatError(f"bad count {cols[1]!r}", path, line_no) from None
        if c <= 0:
            raise InputFormatError(f"count must be positive, got {c}", path, line_no)
        if gram in tables[order - 1]:
            raise InputFormatError(f"duplicate n-gram {cols[0]!r}", path, line_no)
        tables[order - 1][gram] = c
    for o, n in declared.items():
        if len(tables[o - 1]) != n:
            raise InputFormatError(
                f"{o}-gram section declares {n} records but holds {len(tables[o - 1])}", path)
    try:
        model = NgramModel(tables, header["language"], header["denominator"],
                           int(header.get("sentences", "0")))
    except (ValidationError, ValueError) as exc:
        raise InputFormatError(str(exc), path, 1) from exc
    if str(model.total_tokens) != header["total_tokens"] or \
            str(model.vocab_size) != header["vocab_size"]:
        raise InputFormatError("header totals disagree with the stored counts", path, 1)
    problems = model.invariant_violations()
    if problems:
        raise InputFormatError(f"inconsistent counts: {problems[0]}", path)
    return model


def loads_model(text: str) -> NgramModel:
    return parse_model(text.split("\n")[:-1] if text.endswith("\n") else text.split("\n"))


def load_model(path) -> NgramModel:
    return parse_model(read_lines(path), path)
