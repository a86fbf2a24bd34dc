from pathlib import Path

import pytest
from hypothesis import given, strategies as st
from scipy.stats import spearmanr

from lmrank.errors import ConsistencyError, InputFormatError, ValidationError
from lmrank.evaluation import (CategorySpec, HumanScoreSheet, Ranking, agreement,
                               average_score, format_report, human_rank, human_rankings,
                               load_score_sheets, parse_score_sheets, spearman,
                               top_rank_tally)
from lmrank.ranker import CandidateScore, RankedList
from oracle import oracle_spearman, oracle_tally
from synth import make_rng

FIXTURES = Path(__file__).parent / "fixtures"

# hand-computed from fixtures/human10.tsv: (E1, E2, E3) averages and best-first order
HUMAN10 = {
    "1": ((1.4, 2.0, 3.0), ("E1", "E2", "E3")),
    "2": ((3.0, 2.5, 1.5), ("E3", "E2", "E1")),
    "3": ((4.0, 4.0, 5.0), ("E1", "E2", "E3")),
    "4": ((2.5, 1.0, 2.0), ("E2", "E3", "E1")),
    "5": ((1.0, 5.0, 3.1), ("E1", "E3", "E2")),
    "6": ((4.9, 5.0, 4.5), ("E3", "E1", "E2")),
    "7": ((2.1, 2.2, 2.0), ("E3", "E1", "E2")),
    "8": ((2.0, 2.0, 2.0), ("E1", "E2", "E3")),
    "9": ((3.0, 1.9, 3.0), ("E2", "E1", "E3")),
    "10": ((4.0, 3.0, 1.1), ("E3", "E2", "E1")),
}


def sheet(sid, eid, scores):
    return HumanScoreSheet(sid, eid, tuple(scores))


def ranking(sid, engines, goodness=None):
    if goodness is None:
        goodness = list(range(len(engines), 0, -1))
    return Ranking(sid, tuple(engines), tuple(goodness))


def test_average_score_examples():
    assert average_score(sheet("1", "E1", [2] * 10)) == 2.0
    assert average_score(sheet("1", "E1", [1] * 5 + [5] * 5)) == 3.0


@pytest.mark.parametrize("scores", [[2] * 9, [2] * 11, [0] + [2] * 9, [6] + [2] * 9,
                                    [2.5] + [2] * 9, [True] + [2] * 9])
def test_sheet_validation(scores):
    with pytest.raises(ValidationError):
        sheet("1", "E1", scores)
    with pytest.raises(ValidationError):
        average_score(scores)


scores10 = st.lists(st.integers(1, 5), min_size=10, max_size=10)


@given(scores10, st.randoms(use_true_random=False))
def test_average_bounds_and_permutation(scores, rnd):
    avg = average_score(scores)
    assert min(scores) <= avg <= max(scores)
    shuffled = list(scores)
    rnd.shuffle(shuffled)
    assert average_score(shuffled) == avg


def test_human_rank_lower_is_better():
    r = human_rank([sheet("1", "E2", [2] * 10), sheet("1", "E1", [1] * 6 + [2] * 4)])
    assert r.engines == ("E1", "E2")


def test_human_rank_ties_keep_input_order():
    r = human_rank([sheet("1", "B", [3] * 10), sheet("1", "A", [3] * 10)])
    assert r.engines == ("B", "A")


def test_human_rank_errors():
    with pytest.raises(ValidationError, match="duplicate"):
        human_rank([sheet("1", "E1", [3] * 10), sheet("1", "E1", [2] * 10)])
    with pytest.raises(ValidationError, match="no sheet"):
        human_rank([sheet("1", "E1", [3] * 10)], expected_engines=["E1", "E2"])
    with pytest.raises(ValidationError):
        human_rank([])


def test_human_rank_matches_oracle_sort():
    rng = make_rng(9)
    for _ in range(100):
        sheets = [sheet("s", f"E{k}", [rng.randint(1, 5) for _ in range(10)])
                  for k in range(rng.randint(1, 6))]
        means = [sum(s.scores) / 10 for s in sheets]
        # oracle: repeatedly pick the lowest mean, earliest on ties
        remaining = list(range(len(sheets)))
        expected = []
        while remaining:
            best = min(remaining, key=lambda i: (means[i], i))
            expected.append(sheets[best].engine_id)
            remaining.remove(best)
        assert human_rank(sheets).engines == tuple(expected)


@given(st.lists(scores10, min_size=1, max_size=6), st.integers(-4, 4))
def test_shift_keeps_winner(all_scores, shift):
    if not all(1 <= s + shift <= 5 for scores in all_scores for s in scores):
        return
    sheets = [sheet("1", f"E{k}", sc) for k, sc in enumerate(all_scores)]
    moved = [sheet("1", f"E{k}", [s + shift for s in sc]) for k, sc in enumerate(all_scores)]
    assert human_rank(sheets).top == human_rank(moved).top


def test_human10_fixture_by_hand():
    sheets = load_score_sheets(FIXTURES / "human10.tsv")
    assert len(sheets) == 30
    by_key = {(s.sentence_id, s.engine_id): s for s in sheets}
    for sid, (avgs, order) in HUMAN10.items():
        for eid, avg in zip(("E1", "E2", "E3"), avgs):
            assert average_score(by_key[sid, eid]) == pytest.approx(avg, abs=1e-12)
    ranked = {r.sentence_id: r for r in human_rankings(sheets)}
    assert {sid: r.engines for sid, r in ranked.items()} == \
        {sid: order for sid, (_, order) in HUMAN10.items()}
    tally = top_rank_tally(ranked.values(), CategorySpec("all", ("E1", "E2", "E3")))
    assert tally == {"E1": 4, "E2": 2, "E3": 4}


def test_score_file_errors():
    with pytest.raises(InputFormatError, match="12 columns"):
        parse_score_sheets(["1\tE1\t1\t2"])
    with pytest.raises(InputFormatError, match="bad scores"):
        parse_score_sheets(["1\tE1\t" + "\t".join(["7"] * 10)])
    with pytest.raises(InputFormatError, match="second sheet"):
        parse_score_sheets(["1\tE1\t" + "\t".join(["2"] * 10)] * 2)


def test_restrict_preserves_order():
    r = ranking("1", ["E3", "E1", "E5", "E2"])
    assert r.restrict({"E1", "E2", "E3"}).engines == ("E3", "E1", "E2")


def test_tally_examples():
    cat = CategorySpec("web", ("E1", "E2", "E3"))
    rankings = [ranking("1", ["E4", "E2", "E1", "E3"]), ranking("2", ["E1", "E3", "E2"]),
                ranking("3", ["E3", "E1", "E2", "E6"])]
    assert top_rank_tally(rankings, cat) == {"E1": 1, "E2": 1, "E3": 1}
    solo = CategorySpec("solo", ("E2",))
    assert top_rank_tally(rankings, solo) == {"E2": 3}
    with pytest.raises(ConsistencyError, match="'4'"):
        top_rank_tally([ranking("4", ["E5", "E6"])], cat)


def test_tally_matches_argmax_oracle():
    rng = make_rng(12)
    engines = ["E1", "E2", "E3"]
    orders = []
    for i in range(300):
        order = list(engines)
        rng.shuffle(order)
        orders.append(order)
    cat = CategorySpec("three", tuple(engines))
    assert top_rank_tally([ranking(str(i), o) for i, o in enumerate(orders)], cat) == \
        oracle_tally(orders, engines)


def test_tally_accepts_ranked_lists():
    rl = RankedList("1", (CandidateScore("E2", 3, 2, 1, 1, 0.9),
                          CandidateScore("E1", 3, 2, 1, 0, 0.0)))
    assert top_rank_tally([rl], CategorySpec("c", ("E1", "E2"))) == {"E1": 0, "E2": 1}


def test_category_validation():
    with pytest.raises(ValidationError):
        CategorySpec("empty", ())
    with pytest.raises(ValidationError):
        CategorySpec("dup", ("E1", "E1"))


def test_agreement_identical_streams():
    rng = make_rng(2)
    lm = []
    for i in range(20):
        order = ["E1", "E2", "E3", "E4"]
        rng.shuffle(order)
        lm.append(ranking(str(i), order))
    cats = [CategorySpec("combined", ("E1", "E2", "E3", "E4")), CategorySpec("pair", ("E1", "E2"))]
    for rep in agreement(lm, lm, cats):
        assert rep.top1_agreement == 1.0
        assert rep.mean_spearman == 1.0
        assert rep.lm_tally == rep.human_tally
        assert sum(rep.lm_tally.values()) == 20


def test_agreement_reversed_streams():
    lm = [ranking(str(i), ["E1", "E2", "E3"]) for i in range(10)]
    human = [ranking(str(i), ["E3", "E2", "E1"]) for i in range(10)]
    rep, = agreement(lm, human, [CategorySpec("all", ("E1", "E2", "E3"))])
    assert rep.top1_agreement == 0.0
    assert rep.mean_spearman == -1.0
    assert rep.lm_tally == {"E1": 10, "E2": 0, "E3": 0}
    assert rep.human_tally == {"E1": 0, "E2": 0, "E3": 10}


def test_agreement_sentence_mismatch():
    with pytest.raises(ConsistencyError, match=r"\['2', '3'\]"):
        agreement([ranking("1", ["E1"]), ranking("2", ["E1"])],
                  [ranking("1", ["E1"]), ranking("3", ["E1"])],
                  [CategorySpec("c", ("E1",))])


def test_spearman_with_ties_matches_oracle_and_scipy():
    rng = make_rng(31)
    for _ in range(200):
        k = rng.randint(2, 6)
        engines = [f"E{i}" for i in range(k)]
        ga = sorted((rng.randint(0, 3) for _ in range(k)), reverse=True)
        gb = sorted((rng.randint(0, 3) for _ in range(k)), reverse=True)
        ea, eb = list(engines), list(engines)
        rng.shuffle(ea)
        rng.shuffle(eb)
        a, b = Ranking("s", tuple(ea), tuple(ga)), Ranking("s", tuple(eb), tuple(gb))
        got = spearman(a, b)
        want = oracle_spearman(ea, ga, eb, gb)
        if want is None:
            assert got is None
            continue
        assert got == pytest.approx(want, abs=1e-12)
        ra, rb = a.average_ranks(), b.average_ranks()
        ref = spearmanr([ra[e] for e in engines], [rb[e] for e in engines]).statistic
        assert got == pytest.approx(ref, abs=1e-9)


def test_spearman_undefined_cases():
    assert spearman(ranking("1", ["E1"]), ranking("1", ["E1"])) is None
    flat = Ranking("1", ("E1", "E2"), (0.0, 0.0))
    assert spearman(flat, ranking("1", ["E1", "E2"])) is None


def test_average_ranks_ties():
    r = Ranking("1", ("A", "B", "C", "D"), (0.9, 0.5, 0.5, 0.0))
    assert r.average_ranks() == {"A": 1.0, "B": 2.5, "C": 2.5, "D": 4.0}


def test_report_text_shape():
    lm = [ranking(str(i), ["E1", "E2", "E3"]) for i in range(4)]
    human = [ranking(str(i), ["E2", "E1", "E3"]) for i in range(4)]
    reps = agreement(lm, human, [CategorySpec("Web-Based", ("E1", "E2", "E3"))])
    text = format_report(reps)
    assert "== Ranking at Web-Based category ==" in text
    assert "E1    \t4\t0" in text
    assert "Total \t4\t4" in text
    assert "Web-Based\t4\t0.000000\t0.500000\t4" in text
