"""Maximum-likelihood n-gram language models and LM-based ranking of MT outputs."""

__version__ = "0.1.0"

from .corpus import TokenSequence, extract_ngrams, ngram_key, read_corpus, tokenize
from .errors import (ConfigError, ConsistencyError, EmptyModelError, InputFormatError,
                     InvalidOrderError, LmrankError, ValidationError)
from .evaluation import (AgreementReport, CategorySpec, HumanScoreSheet, Ranking, agreement,
                         average_score, human_rank, spearman, top_rank_tally)
from .lexicon import ParallelLexicon, load_lexicon, lookup, project, save_lexicon
from .lm import CorpusStats, NgramModel, load_model, save_model, stats, train
from .ranker import (Candidate, CandidateScore, RankedList, rank, retain_source_trigrams,
                     score_candidate, sort_scores)

__all__ = [
    "AgreementReport", "Candidate", "CandidateScore", "CategorySpec", "ConfigError",
    "ConsistencyError", "CorpusStats", "EmptyModelError", "HumanScoreSheet",
    "InputFormatError", "InvalidOrderError", "LmrankError", "NgramModel", "ParallelLexicon",
    "RankedList", "Ranking", "TokenSequence", "ValidationError", "agreement", "average_score",
    "extract_ngrams", "human_rank", "load_lexicon", "load_model", "lookup", "ngram_key",
    "project", "rank", "read_corpus", "retain_source_trigrams", "save_lexicon", "save_model",
    "score_candidate", "sort_scores", "spearman", "stats", "tokenize", "top_rank_tally", "train",
]
