"""Regenerate fixtures/expected_ranked.jsonl from the brute-force oracle.

    python tests/regen_fixture.py

Review the diff by hand before committing.
"""

import json
from pathlib import Path

from oracle import oracle_rank

FIXTURES = Path(__file__).parent / "fixtures"


def oracle_split(text):
    # fixture text is space-separated except for sentence-final dandas
    return text.replace("।", " ।").split()


def read_tsv(name):
    lines = (FIXTURES / name).read_text(encoding="utf-8").splitlines()
    return [line.split("\t") for line in lines if line and not line.startswith("#")]


def expected_records(coverage="any"):
    src_corpus = [oracle_split(l) for l in (FIXTURES / "en.txt").read_text("utf-8").splitlines()]
    tgt_corpus = [oracle_split(l) for l in (FIXTURES / "hi.txt").read_text("utf-8").splitlines()]
    pairs = [(row[0], row[1]) for row in read_tsv("lexicon.tsv")]
    sources = {row[0]: oracle_split(row[1]) for row in read_tsv("sources.tsv")}
    cands = {}
    for sid, eid, text in read_tsv("candidates.tsv"):
        cands.setdefault(sid, []).append((eid, oracle_split(text)))
    records = []
    for sid in sorted(cands, key=int):
        for row in oracle_rank(sources[sid], cands[sid], src_corpus, tgt_corpus, pairs, coverage):
            records.append({
                "sentence_id": sid,
                "rank": row["rank"],
                "engine_id": row["engine_id"],
                "unigram_count": row["unigram_count"],
                "bigram_count": row["bigram_count"],
                "trigram_count": row["trigram_count"],
                "matched_trigram_count": row["matched_trigram_count"],
                "prob_sum": row["prob_sum"],
            })
    return records


if __name__ == "__main__":
    with open(FIXTURES / "expected_ranked.jsonl", "w", encoding="utf-8") as f:
        for rec in expected_records():
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")
