"""Rank the translations of one source sentence by projected trigram mass.

For a source sentence and its candidate translations:

1. take the source sentence's trigrams and keep those the source LM has seen;
2. look every word of the kept trigrams up in the parallel lexicon and
   register the target words found;
3. for each candidate, sum the target-LM trigram probabilities
   P(w3 | w1 w2) of its trigrams that the target LM has seen and that are
   covered by the registered words;
4. sort candidates by that sum, highest first, ties in input order.

The sum is not a sentence probability; it lies in [0, #trigrams].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .corpus import TokenSequence, extract_ngrams, tokenize
from .errors import InputFormatError, ValidationError
from .lexicon import ParallelLexicon, project
from .lm import NgramModel

COVERAGE_MODES = ("any", "majority", "all")
_COVERAGE_MIN = {"any": 1, "majority": 2, "all": 3}


def check_coverage(mode: str) -> str:
    if mode not in COVERAGE_MODES:
        raise ValidationError(f"coverage must be one of {COVERAGE_MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class Candidate:
    engine_id: str
    text: str
    sentence_id: str = ""

    @property
    def tokens(self) -> TokenSequence:
        return tokenize(self.text, self.sentence_id)


@dataclass(frozen=True)
class CandidateScore:
    engine_id: str
    unigram_count: int
    bigram_count: int
    trigram_count: int
    matched_trigram_count: int
    prob_sum: float
    exact_sum: Fraction = field(default=Fraction(0), compare=False, repr=False)


@dataclass(frozen=True)
class RankedList:
    sentence_id: str
    scores: tuple[CandidateScore, ...]
    retained_trigrams: tuple[tuple[str, str, str], ...] = ()
    registered: tuple[str, ...] = ()

    @property
    def engines(self) -> tuple[str, ...]:
        return tuple(s.engine_id for s in self.scores)

    def rank_of(self, engine_id: str) -> int:
        return self.engines.index(engine_id) + 1

    def __iter__(self):
        return iter(self.scores)

    def __len__(self):
        return len(self.scores)


def retain_source_trigrams(source: Sequence[str], source_lm: NgramModel) -> list[tuple]:
    """Source trigrams, in order and with repeats, that the source LM contains."""
    return [g for g in extract_ngrams(source, 3) if source_lm.contains(g)]


def score_candidate(candidate: Candidate | Sequence[str], registered: Iterable[str],
                    target_lm: NgramModel, coverage: str = "any") -> CandidateScore:
    """Sum P(w3 | w1 w2) over the candidate's LM-known, lexicon-covered trigrams.

    ``candidate`` may also be a bare token sequence, in which case the
    engine id is left empty.
    """
    need = _COVERAGE_MIN[check_coverage(coverage)]
    if isinstance(candidate, Candidate):
        engine_id, tokens = candidate.engine_id, tuple(candidate.tokens)
    else:
        engine_id, tokens = "", tuple(candidate)
    registered = frozenset(registered)
    trigrams = extract_ngrams(tokens, 3)
    total = Fraction(0)
    matched = 0
    for gram in trigrams:
        if not target_lm.contains(gram):
            continue
        if sum(w in registered for w in gram) < need:
            continue
        matched += 1
        total += target_lm.prob_trigram(*gram, exact=True)
    return CandidateScore(
        engine_id=engine_id,
        unigram_count=len(tokens),
        bigram_count=max(0, len(tokens) - 1),
        trigram_count=len(trigrams),
        matched_trigram_count=matched,
        prob_sum=float(total),
        exact_sum=total,
    )


def sort_scores(scores: Iterable[CandidateScore]) -> tuple[CandidateScore, ...]:
    """Descending by score; Python's sort is stable so ties keep input order."""
    return tuple(sorted(scores, key=lambda s: s.exact_sum or Fraction(s.prob_sum),
                        reverse=True))


def rank(source: Sequence[str], candidates: Sequence[Candidate], source_lm: NgramModel,
         target_lm: NgramModel, lex: ParallelLexicon, coverage: str = "any",
         sentence_id: str | None = None) -> RankedList:
    """Run the full ranking pipeline for one source sentence."""
    check_coverage(coverage)
    if not candidates:
        raise ValidationError("rank() needs at least one candidate")
    seen = set()
    for c in candidates:
        if c.engine_id in seen:
            raise ValidationError(f"duplicate engine id {c.engine_id!r}")
        seen.add(c.engine_id)
    if sentence_id is None:
        sentence_id = getattr(source, "sentence_id", "") or candidates[0].sentence_id
    retained = retain_source_trigrams(source, source_lm)
    registered = project(lex, retained)
    scores = [score_candidate(c, registered, target_lm, coverage) for c in candidates]
    return RankedList(sentence_id, sort_scores(scores), tuple(retained), registered)


# -- files -----------------------------------------------------------------

RANKED_FIELDS = ("sentence_id", "rank", "engine_id", "unigram_count", "bigram_count",
                 "trigram_count", "matched_trigram_count", "prob_sum")


def parse_sources(lines: Sequence[str], path=None) -> dict[str, str]:
    """``sentence_id<TAB>source text``, one sentence per line."""
    sources: dict[str, str] = {}
    for line_no, line in enumerate(lines, 1):
        if line.startswith("#") or not line.strip():
            continue
        sid, sep, text = line.partition("\t")
        sid = sid.strip()
        if not sep or not sid:
            raise InputFormatError("expected sentence_id<TAB>text", path, line_no)
        if sid in sources:
            raise InputFormatError(f"sentence id {sid!r} repeated", path, line_no)
        sources[sid] = text
    return sources


def parse_candidates(lines: Sequence[str], path=None) -> dict[str, list[Candidate]]:
    """``sentence_id<TAB>engine_id<TAB>translation``; engines kept in file order."""
    by_sentence: dict[str, list[Candidate]] = {}
    for line_no, line in enumerate(lines, 1):
        if line.startswith("#") or not line.strip():
            continue
        cols = line.split("\t", 2)
        if len(cols) != 3 or not cols[0].strip() or not cols[1].strip():
            raise InputFormatError("expected sentence_id<TAB>engine_id<TAB>text", path, line_no)
        sid, eid, text = cols[0].strip(), cols[1].strip(), cols[2]
        group = by_sentence.setdefault(sid, [])
        if any(c.engine_id == eid for c in group):
            raise InputFormatError(f"engine {eid!r} repeated for sentence {sid!r}",
                                   path, line_no)
        group.append(Candidate(eid, text, sid))
    return by_sentence


def ranked_records(ranked: RankedList) -> list[dict]:
    return [
        {
            "sentence_id": ranked.sentence_id,
            "rank": i,
            "engine_id": s.engine_id,
            "unigram_count": s.unigram_count,
            "bigram_count": s.bigram_count,
            "trigram_count": s.trigram_count,
            "matched_trigram_count": s.matched_trigram_count,
            "prob_sum": s.prob_sum,
        }
        for i, s in enumerate(ranked.scores, 1)
    ]


def dumps_ranked(rankings: Iterable[RankedList], comments: Sequence[str] = ()) -> str:
    lines = ["# " + c for c in comments]
    for ranked in rankings:
        for rec in ranked_records(ranked):
            lines.append(json.dumps(rec, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


def parse_ranked(lines: Sequence[str], path=None) -> list[RankedList]:
    """Inverse of :func:`dumps_ranked` (diagnostic trigram/lexicon sets are not stored)."""
    rows: dict[str, list[tuple[int, CandidateScore]]] = {}
    for line_no, line in enumerate(lines, 1):
        if line.startswith("#") or not line.strip():
            continue
        try:
            rec = json.loads(line)
            missing = [f for f in RANKED_FIELDS if f not in rec]
            if missing:
                raise ValueError(f"missing fields {missing}")
            score = CandidateScore(
                engine_id=str(rec["engine_id"]),
                unigram_count=int(rec["unigram_count"]),
                bigram_count=int(rec["bigram_count"]),
                trigram_count=int(rec["trigram_count"]),
                matched_trigram_count=int(rec["matched_trigram_count"]),
                prob_sum=float(rec["prob_sum"]),
            )
            rows.setdefault(str(rec["sentence_id"]), []).append((int(rec["rank"]), score))
        except (ValueError, TypeError, AttributeError) as exc:
            raise InputFormatError(f"bad ranked record: {exc}", path, line_no) from None
    out = []
    for sid, entries in rows.items():
        entries.sort(key=lambda e: e[0])
        ranks = [r for r, _ in entries]
        if ranks != list(range(1, len(entries) + 1)):
            raise InputFormatError(f"sentence {sid!r} has ranks {ranks}, expected 1..n", path)
        out.append(RankedList(sid, tuple(s for _, s in entries)))
    return out
