"""Human judgments and LM-versus-human ranking agreement.

Human scores use a 5-point scale where 1 is ideal and 5 is not acceptable,
given on ten parameters and averaged; lower averages rank higher.  LM
rankings sort the other way (higher probability sums first).  Both are
turned into a :class:`Ranking` of engines, best first, and compared on rank
positions only.

Per category (a subset of engines) the report gives

* top-rank tallies: for each engine, the number of sentences it wins,
* top-1 agreement: fraction of sentences with the same winner on both sides,
* mean Spearman rho over sentences, ties given average ranks.

The last two are additions of this toolkit; tallies alone cannot say
whether two rankings are "similar".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import fmean
from typing import Iterable, Mapping, Sequence

from .corpus import read_lines
from .errors import ConsistencyError, InputFormatError, ValidationError

N_PARAMETERS = 10
SCALE = {
    1: "Ideal",
    2: "Perfect",
    3: "Acceptable",
    4: "Partially Acceptable",
    5: "Not Acceptable",
}
PARAMETERS = (
    "gender and number of nouns",
    "proper nouns",
    "adjectives and adverbs",
    "lexical choice",
    "phrase and clause order",
    "punctuation",
    "tense",
    "voice",
    "semantics",
    "fluency",
)


@dataclass(frozen=True)
class HumanScoreSheet:
    sentence_id: str
    engine_id: str
    scores: tuple[int, ...]

    def __post_init__(self):
        validate_scores(self.scores)


@dataclass(frozen=True)
class CategorySpec:
    name: str
    engine_ids: tuple[str, ...]

    def __post_init__(self):
        if not self.engine_ids:
            raise ValidationError(f"category {self.name!r} has no engines")
        if len(set(self.engine_ids)) != len(self.engine_ids):
            raise ValidationError(f"category {self.name!r} lists an engine twice")


@dataclass(frozen=True)
class Ranking:
    """Engines of one sentence, best first.

    ``goodness`` runs parallel to ``engines`` and is non-increasing; equal
    values mark ties for rank correlation.
    """

    sentence_id: str
    engines: tuple[str, ...]
    goodness: tuple[float, ...]

    def __post_init__(self):
        if len(self.engines) != len(self.goodness):
            raise ValidationError("engines and goodness differ in length")
        if len(set(self.engines)) != len(self.engines):
            raise ValidationError(f"sentence {self.sentence_id!r} lists an engine twice")

    @property
    def top(self) -> str:
        return self.engines[0]

    def restrict(self, engine_ids: Iterable[str]) -> "Ranking":
        keep = set(engine_ids)
        pairs = [(e, g) for e, g in zip(self.engines, self.goodness) if e in keep]
        return Ranking(self.sentence_id, tuple(e for e, _ in pairs), tuple(g for _, g in pairs))

    def average_ranks(self) -> dict[str, float]:
        """1-based ranks, tied engines sharing the mean of their positions."""
        ranks = {}
        i = 0
        n = len(self.engines)
        while i < n:
            j = i
            while j + 1 < n and self.goodness[j + 1] == self.goodness[i]:
                j += 1
            shared = (i + j) / 2 + 1
            for k in range(i, j + 1):
                ranks[self.engines[k]] = shared
            i = j + 1
        return ranks


@dataclass(frozen=True)
class AgreementReport:
    category: str
    engine_ids: tuple[str, ...]
    sentence_count: int
    lm_tally: dict[str, int]
    human_tally: dict[str, int]
    top1_agreement: float
    mean_spearman: float | None
    spearman_defined: int


def validate_scores(scores: Sequence[int]) -> None:
    if len(scores) != N_PARAMETERS:
        raise ValidationError(f"expected {N_PARAMETERS} scores, got {len(scores)}")
    for s in scores:
        if isinstance(s, bool) or not isinstance(s, int) or s not in SCALE:
            raise ValidationError(f"score {s!r} is not an integer in 1..5")


def average_score(sheet: HumanScoreSheet | Sequence[int]) -> float:
    scores = sheet.scores if isinstance(sheet, HumanScoreSheet) else tuple(sheet)
    validate_scores(scores)
    return sum(scores) / N_PARAMETERS


def human_rank(sheets: Sequence[HumanScoreSheet],
               expected_engines: Iterable[str] | None = None) -> Ranking:
    """Rank engines by ascending average score; ties keep input order."""
    if not sheets:
        raise ValidationError("human_rank() needs at least one sheet")
    sentence_ids = {s.sentence_id for s in sheets}
    if len(sentence_ids) != 1:
        raise ValidationError(f"sheets span several sentences: {sorted(sentence_ids)}")
    engines = [s.engine_id for s in sheets]
    dup = sorted({e for e in engines if engines.count(e) > 1})
    if dup:
        raise ValidationError(f"duplicate sheets for engines {dup}")
    if expected_engines is not None:
        missing = sorted(set(expected_engines) - set(engines))
        if missing:
            raise ValidationError(f"no sheet for engines {missing}")
    order = sorted(sheets, key=average_score)
    return Ranking(sheets[0].sentence_id, tuple(s.engine_id for s in order),
                   tuple(-average_score(s) for s in order))


def as_ranking(ranked) -> Ranking:
    """Accept a :class:`Ranking` or a ranker ``RankedList``."""
    if isinstance(ranked, Ranking):
        return ranked
    return Ranking(ranked.sentence_id, tuple(s.engine_id for s in ranked.scores),
                   tuple(s.prob_sum for s in ranked.scores))


def top_rank_tally(rankings: Iterable, category: CategorySpec) -> dict[str, int]:
    """Count, per engine, the sentences it wins within ``category``."""
    tally = dict.fromkeys(category.engine_ids, 0)
    for ranked in rankings:
        sub = as_ranking(ranked).restrict(category.engine_ids)
        if not sub.engines:
            raise ConsistencyError(
                f"sentence {ranked.sentence_id!r} has none of the engines of "
                f"category {category.name!r}")
        tally[sub.top] += 1
    return tally


def spearman(a: Ranking, b: Ranking) -> float | None:
    """Spearman rho between two rankings of the same engines.

    Pearson correlation of average-rank vectors; None when either side is
    constant (all tied, or fewer than two engines).
    """
    if set(a.engines) != set(b.engines):
        raise ConsistencyError(f"sentence {a.sentence_id!r}: rankings cover different engines")
    ra, rb = a.average_ranks(), b.average_ranks()
    engines = a.engines
    xs = [Fraction(ra[e]) for e in engines]
    ys = [Fraction(rb[e]) for e in engines]
    n = len(engines)
    if n < 2:
        return None
    mx, my = sum(xs) / n, sum(ys) / n
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0 or syy == 0:
        return None
    # exact rho**2 keeps identical/reversed rankings at exactly +1/-1
    magnitude = math.sqrt(sxy * sxy / (sxx * syy))
    return math.copysign(magnitude, sxy) if sxy else 0.0


def _by_sentence(rankings: Iterable) -> dict[str, Ranking]:
    out = {}
    for r in rankings:
        r = as_ranking(r)
        if r.sentence_id in out:
            raise ConsistencyError(f"sentence {r.sentence_id!r} ranked twice")
        out[r.sentence_id] = r
    return out


def agreement(lm_rankings: Iterable, human_rankings: Iterable,
              categories: Sequence[CategorySpec]) -> list[AgreementReport]:
    lm = _by_sentence(lm_rankings)
    human = _by_sentence(human_rankings)
    if lm.keys() != human.keys():
        diff = sorted(lm.keys() ^ human.keys(), key=sentence_sort_key)
        raise ConsistencyError(f"LM and human rankings cover different sentences: {diff}")
    sentence_ids = sorted(lm, key=sentence_sort_key)
    reports = []
    for cat in categories:
        lm_sub = [lm[s].restrict(cat.engine_ids) for s in sentence_ids]
        hu_sub = [human[s].restrict(cat.engine_ids) for s in sentence_ids]
        agree = 0
        rhos = []
        for a, b in zip(lm_sub, hu_sub):
            if set(a.engines) != set(b.engines):
                raise ConsistencyError(
                    f"sentence {a.sentence_id!r}: LM ranks {sorted(a.engines)} but "
                    f"human ranks {sorted(b.engines)} in category {cat.name!r}")
            if a.engines and a.top == b.top:
                agree += 1
            rho = spearman(a, b)
            if rho is not None:
                rhos.append(rho)
        n = len(sentence_ids)
        reports.append(AgreementReport(
            category=cat.name,
            engine_ids=cat.engine_ids,
            sentence_count=n,
            lm_tally=top_rank_tally(lm_sub, cat),
            human_tally=top_rank_tally(hu_sub, cat),
            top1_agreement=agree / n if n else 0.0,
            mean_spearman=fmean(rhos) if rhos else None,
            spearman_defined=len(rhos),
        ))
    return reports


def sentence_sort_key(sentence_id: str):
    """Numeric ids in numeric order, then everything else lexicographically."""
    if sentence_id.isdigit():
        return (0, int(sentence_id), sentence_id)
    return (1, 0, sentence_id)


# -- files -----------------------------------------------------------------

def parse_score_sheets(lines: Sequence[str], path=None) -> list[HumanScoreSheet]:
    """``sentence_id<TAB>engine_id<TAB>s1 .. s10``; ``#`` lines are comments."""
    sheets = []
    seen = set()
    for line_no, line in enumerate(lines, 1):
        if line.startswith("#") or not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 2 + N_PARAMETERS:
            raise InputFormatError(f"expected {2 + N_PARAMETERS} columns, got {len(cols)}",
                                   path, line_no)
        sid, eid = cols[0].strip(), cols[1].strip()
        if not sid or not eid:
            raise InputFormatError("empty sentence or engine id", path, line_no)
        try:
            sheet = HumanScoreSheet(sid, eid, tuple(int(c) for c in cols[2:]))
        except (ValueError, ValidationError) as exc:
            raise InputFormatError(f"bad scores: {exc}", path, line_no) from None
        if (sid, eid) in seen:
            raise InputFormatError(f"second sheet for ({sid}, {eid})", path, line_no)
        seen.add((sid, eid))
        sheets.append(sheet)
    return sheets


def load_score_sheets(path) -> list[HumanScoreSheet]:
    return parse_score_sheets(read_lines(path), path)


def human_rankings(sheets: Iterable[HumanScoreSheet]) -> list[Ranking]:
    """Group sheets by sentence (file order within a sentence) and rank each."""
    groups: dict[str, list[HumanScoreSheet]] = {}
    for sheet in sheets:
        groups.setdefault(sheet.sentence_id, []).append(sheet)
    return [human_rank(groups[s]) for s in sorted(groups, key=sentence_sort_key)]


def format_report(reports: Sequence[AgreementReport]) -> str:
    """Plain-text tally tables, one per category, plus an agreement block."""
    out = []
    for rep in reports:
        out.append(f"== Ranking at {rep.category} category ==")
        width = max([len("Engine")] + [len(e) for e in rep.engine_ids])
        out.append(f"{'Engine':<{width}}\tLM Ranking\tHuman Ranking")
        for e in rep.engine_ids:
            out.append(f"{e:<{width}}\t{rep.lm_tally[e]}\t{rep.human_tally[e]}")
        out.append(f"{'Total':<{width}}\t{sum(rep.lm_tally.values())}\t"
                   f"{sum(rep.human_tally.values())}")
        out.append("")
    out.append("== Agreement (toolkit additions, not part of the tally tables) ==")
    out.append("category\tsentences\ttop1_agreement\tmean_spearman\trho_defined")
    for rep in reports:
        rho = "n/a" if rep.mean_spearman is None else f"{rep.mean_spearman:.6f}"
        out.append(f"{rep.category}\t{rep.sentence_count}\t{rep.top1_agreement:.6f}\t"
                   f"{rho}\t{rep.spearman_defined}")
    return "\n".join(out) + "\n"


def report_dict(rep: AgreementReport) -> Mapping:
    return {
        "category": rep.category,
        "engines": list(rep.engine_ids),
        "sentence_count": rep.sentence_count,
        "lm_tally": rep.lm_tally,
        "human_tally": rep.human_tally,
        "top1_agreement": rep.top1_agreement,
        "mean_spearman": rep.mean_spearman,
        "spearman_defined": rep.spearman_defined,
    }
