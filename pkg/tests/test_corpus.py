import unicodedata

import pytest
from hypothesis import given, strategies as st

from lmrank.corpus import extract_ngrams, read_corpus, tokenize
from lmrank.errors import InputFormatError, InvalidOrderError

DANDA = "।"


def test_whitespace_split():
    assert tokenize("Jim Corbett National Park").tokens == ("Jim", "Corbett", "National", "Park")


def test_empty_input():
    assert tokenize("").tokens == ()
    assert tokenize("   \t  ").tokens == ()


def test_danda_detaches():
    toks = tokenize("स्थापित किया गया था।").tokens
    assert toks == ("स्थापित", "किया", "गया", "था", "।")
    # character-class check: the last token is exactly the Devanagari danda
    assert unicodedata.name(toks[-1]) == "DEVANAGARI DANDA"
    assert unicodedata.category(toks[-1]) == "Po"
    assert all(DANDA not in t for t in toks[:-1])


def test_attached_and_spaced_danda_agree():
    assert tokenize("बचाना था ।").tokens == tokenize("बचाना था।").tokens


@pytest.mark.parametrize("raw, expected", [
    ("Hello, world!", ("Hello", ",", "world", "!")),
    ("Really?!", ("Really", "?", "!")),
    ("in 1936.", ("in", "1936", ".")),
    ("3.5 and 1,000", ("3.5", "and", "1,000")),
    ("U.S.", ("U.S", ".")),
    ("...", (".", ".", ".")),
    ("(Hailey)", ("(Hailey)",)),
    ("don't", ("don't",)),
])
def test_punctuation_policy(raw, expected):
    assert tokenize(raw).tokens == expected


def test_no_case_folding():
    assert tokenize("Park park").tokens == ("Park", "park")


def test_nfc_normalization():
    decomposed = "क़"  # KA + NUKTA
    composed = unicodedata.normalize("NFC", decomposed)
    assert tokenize(decomposed).tokens == tokenize(composed).tokens
    assert tokenize("é").tokens == ("é",)


def test_unicode_whitespace_split():
    assert tokenize("a b c　d").tokens == ("a", "b", "c", "d")


def test_sentence_id_carried():
    assert tokenize("a b", "7").sentence_id == "7"


def test_extract_ngrams_examples():
    assert extract_ngrams(["a"], 3) == []
    assert extract_ngrams(["a", "b", "c", "d"], 2) == [("a", "b"), ("b", "c"), ("c", "d")]
    assert extract_ngrams([], 1) == []


def test_26_token_candidate_counts():
    seq = [f"w{i}" for i in range(26)]
    assert [len(extract_ngrams(seq, n)) for n in (1, 2, 3)] == [26, 25, 24]


@pytest.mark.parametrize("order", [0, 4, -1, 2.0])
def test_invalid_order(order):
    with pytest.raises(InvalidOrderError):
        extract_ngrams(["a", "b"], order)


text = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=60)
mixed = st.lists(st.sampled_from(["park", "था", "।", ".", ",", "!", "?", " ", "\t", " ",
                                  "é", "1,5", "a.b", "क़"]), max_size=20).map("".join)


@given(st.one_of(text, mixed))
def test_token_invariants(raw):
    seq = tokenize(raw)
    for tok in seq:
        assert tok
        assert not any(ch.isspace() for ch in tok)
        assert unicodedata.normalize("NFC", tok) == tok


@given(st.one_of(text, mixed))
def test_tokenize_is_idempotent_on_its_output(raw):
    once = tokenize(raw).tokens
    assert tokenize(" ".join(once)).tokens == once


@given(st.lists(st.sampled_from("abcde"), max_size=15), st.sampled_from([1, 2, 3]))
def test_ngram_count_law(words, order):
    grams = extract_ngrams(words, order)
    assert len(grams) == max(0, len(words) - order + 1)
    assert all(len(g) == order for g in grams)
    assert all(w in words for g in grams for w in g)


def test_read_corpus_line_ids(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("a b\n\nc d e\n", encoding="utf-8")
    seqs = read_corpus(p)
    assert [s.sentence_id for s in seqs] == ["1", "2", "3"]
    assert [s.tokens for s in seqs] == [("a", "b"), (), ("c", "d", "e")]


def test_read_corpus_rejects_bad_utf8(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_bytes(b"fine\nbad \xff here\n")
    with pytest.raises(InputFormatError, match=":2:"):
        read_corpus(p)
