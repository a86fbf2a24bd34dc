"""Command-line interface.

Subcommands::

    lmrank build-lm CORPUS --lang hi --out hi.lm
    lmrank stats CORPUS | --model hi.lm
    lmrank rank --config run.cfg [overrides] --out ranked.jsonl
    lmrank evaluate --config run.cfg [overrides] --out reportdir
    lmrank lexicon-check LEXICON [--corpus CORPUS]

A config file holds ``key = value`` lines (``#`` comments); command-line
flags override it.  Categories are given as ``category.<name> = E1,E2,E3``
in the file or ``--category name=E1,E2,E3`` on the command line.

Exit status: 0 success, 2 usage/config error, 3 unparsable input,
4 inputs that parse but disagree with each other.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .corpus import iter_tokenized, read_lines, tokenize
from .errors import ConfigError, ConsistencyError, EmptyModelError, InputFormatError, ValidationError
from .evaluation import (CategorySpec, agreement, format_report, human_rankings,
                         load_score_sheets, report_dict, sentence_sort_key)
from .lexicon import load_lexicon
from .lm import DENOMINATOR_MODES, dumps_model, load_model, stats, train
from .ranker import COVERAGE_MODES, dumps_ranked, parse_candidates, parse_ranked, parse_sources, rank

log = logging.getLogger("lmrank")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CONSISTENCY = 4

PATH_KEYS = ("sources", "candidates", "source_lm", "target_lm", "lexicon",
             "ranked", "human_scores")


@dataclass
class RunConfig:
    sources: str | None = None
    candidates: str | None = None
    source_lm: str | None = None
    target_lm: str | None = None
    lexicon: str | None = None
    ranked: str | None = None
    human_scores: str | None = None
    out: str | None = None
    source_language: str | None = None
    target_language: str | None = None
    unigram_denominator: str = "tokens"
    coverage: str = "any"
    categories: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def require(self, *keys: str) -> None:
        for key in keys:
            value = getattr(self, key)
            if not value:
                raise ConfigError(f"missing required setting {key!r}")
            if key in PATH_KEYS and not os.path.isfile(value):
                raise ConfigError(f"{key}: no such file {value!r}")

    def digest(self) -> str:
        items = {k: v for k, v in sorted(vars(self).items()) if k != "out"}
        blob = json.dumps(items, sort_keys=True, ensure_ascii=False, default=list)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def validate(self) -> "RunConfig":
        if self.unigram_denominator not in DENOMINATOR_MODES:
            raise ConfigError(f"unigram_denominator must be one of {DENOMINATOR_MODES}")
        if self.coverage not in COVERAGE_MODES:
            raise ConfigError(f"coverage must be one of {COVERAGE_MODES}")
        return self


def _parse_category(spec: str) -> tuple[str, tuple[str, ...]]:
    name, sep, engines = spec.partition("=")
    ids = tuple(e.strip() for e in engines.split(",") if e.strip())
    if not sep or not name.strip() or not ids:
        raise ConfigError(f"bad category {spec!r}, expected name=E1,E2,...")
    return name.strip(), ids


def read_config_file(path: str) -> dict:
    try:
        lines = read_lines(path)
    except InputFormatError as exc:
        raise ConfigError(str(exc)) from None
    settings: dict = {"categories": {}}
    known = set(RunConfig.__dataclass_fields__) - {"categories"}
    for line_no, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"{path}:{line_no}: expected key = value")
        if not key.startswith("category."):
            key = key.replace("-", "_")
        if key.startswith("category."):
            name, ids = _parse_category(key[len("category."):] + "=" + value)
            settings["categories"][name] = ids
        elif key in known:
            value = value.strip()
            if key in PATH_KEYS or key == "out":
                value = os.path.join(os.path.dirname(path), value)
            settings[key] = value
        else:
            raise ConfigError(f"{path}:{line_no}: unknown setting {key!r}")
    return settings


def build_config(args) -> RunConfig:
    settings = read_config_file(args.config) if getattr(args, "config", None) else {}
    cfg = RunConfig(**settings)
    for key in RunConfig.__dataclass_fields__:
        if key == "categories":
            continue
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    for spec in getattr(args, "category", None) or ():
        name, ids = _parse_category(spec)
        cfg.categories[name] = ids
    return cfg.validate()


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def provenance(config_hash: str, inputs: list[str]) -> list[str]:
    lines = [f"tool=lmrank {__version__}", f"config={config_hash}"]
    for path in inputs:
        lines.append(f"input={os.path.basename(path)} sha256={file_digest(path)}")
    return lines


def _write_text(path: str, text: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _print_stats(st, out=None) -> None:
    out = out or sys.stdout
    for name, value in st.as_rows():
        print(f"{name}\t{value}", file=out)


# -- commands --------------------------------------------------------------

def cmd_build_lm(args) -> int:
    lines = read_lines(args.corpus)
    mode = args.unigram_denominator or "tokens"
    try:
        model = train(iter_tokenized(lines), args.lang, mode)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from None
    if model.total_tokens == 0:
        log.warning("corpus %s has no tokens; writing an empty model", args.corpus)
    config_hash = hashlib.sha256(f"{args.lang}\t{mode}".encode()).hexdigest()[:16]
    _write_text(args.out, dumps_model(model, provenance(config_hash, [args.corpus])))
    _print_stats(stats(model))
    return EXIT_OK


def cmd_stats(args) -> int:
    if args.model:
        model = load_model(args.model)
    elif args.corpus:
        model = train(iter_tokenized(read_lines(args.corpus)))
    else:
        raise ConfigError("give a corpus file or --model")
    _print_stats(stats(model))
    return EXIT_OK


def _check_language(name: str, actual: str, expected: str | None) -> None:
    if expected and actual != expected:
        raise ConsistencyError(f"{name} is tagged {actual!r}, configured {expected!r}")


def cmd_rank(args) -> int:
    cfg = build_config(args)
    cfg.require("sources", "candidates", "source_lm", "target_lm", "lexicon", "out")
    sources = parse_sources(read_lines(cfg.sources), cfg.sources)
    candidates = parse_candidates(read_lines(cfg.candidates), cfg.candidates)
    source_lm = load_model(cfg.source_lm).with_denominator(cfg.unigram_denominator)
    target_lm = load_model(cfg.target_lm).with_denominator(cfg.unigram_denominator)
    lex = load_lexicon(cfg.lexicon)

    _check_language("source LM", source_lm.language_tag, cfg.source_language)
    _check_language("target LM", target_lm.language_tag, cfg.target_language)
    if source_lm.language_tag and source_lm.language_tag == target_lm.language_tag:
        raise ConsistencyError(
            f"source and target LMs are both tagged {source_lm.language_tag!r}")
    if lex.source_language:
        _check_language("source LM", source_lm.language_tag, lex.source_language)
    if lex.target_language:
        _check_language("target LM", target_lm.language_tag, lex.target_language)

    missing = sorted(set(candidates) - set(sources), key=sentence_sort_key)
    if missing:
        raise ConsistencyError(f"candidate sentences missing from sources: {missing}")
    for sid in sorted(set(sources) - set(candidates), key=sentence_sort_key):
        log.warning("source sentence %s has no candidates; skipped", sid)

    results = []
    for sid in sorted(candidates, key=sentence_sort_key):
        source = tokenize(sources[sid], sid)
        results.append(rank(source, candidates[sid], source_lm, target_lm, lex,
                            cfg.coverage, sid))
    inputs = [cfg.sources, cfg.candidates, cfg.source_lm, cfg.target_lm, cfg.lexicon]
    _write_text(cfg.out, dumps_ranked(results, provenance(cfg.digest(), inputs)))
    log.info("ranked %d sentences into %s", len(results), cfg.out)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    cfg = build_config(args)
    cfg.require("ranked", "human_scores", "out")
    lm_rankings = parse_ranked(read_lines(cfg.ranked), cfg.ranked)
    sheets = load_score_sheets(cfg.human_scores)

    lm_pairs = {(r.sentence_id, s.engine_id) for r in lm_rankings for s in r.scores}
    human_pairs = {(s.sentence_id, s.engine_id) for s in sheets}
    if lm_pairs != human_pairs:
        def fmt(pairs):
            return ", ".join(f"{s}/{e}" for s, e in
                             sorted(pairs, key=lambda p: (sentence_sort_key(p[0]), p[1])))
        parts = []
        if lm_pairs - human_pairs:
            parts.append(f"no human score for: {fmt(lm_pairs - human_pairs)}")
        if human_pairs - lm_pairs:
            parts.append(f"no LM rank for: {fmt(human_pairs - lm_pairs)}")
        raise ConsistencyError("; ".join(parts))

    categories = [CategorySpec(n, ids) for n, ids in cfg.categories.items()]
    if not categories:
        engines = sorted({e for _, e in lm_pairs}, key=sentence_sort_key)
        categories = [CategorySpec("combined", tuple(engines))]
    reports = agreement(lm_rankings, human_rankings(sheets), categories)

    text = format_report(reports)
    header = "".join(f"# {line}\n" for line in
                     provenance(cfg.digest(), [cfg.ranked, cfg.human_scores]))
    _write_text(os.path.join(cfg.out, "report.txt"), header + text)
    payload = {"provenance": provenance(cfg.digest(), [cfg.ranked, cfg.human_scores]),
               "categories": [report_dict(r) for r in reports]}
    _write_text(os.path.join(cfg.out, "report.json"),
                json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    sys.stdout.write(text)
    return EXIT_OK


def cmd_lexicon_check(args) -> int:
    lex = load_lexicon(args.lexicon)
    print(f"source_words\t{len(lex)}")
    print(f"pairs\t{lex.pair_count()}")
    if args.corpus:
        types: dict[str, int] = {}
        for seq in iter_tokenized(read_lines(args.corpus)):
            for tok in seq:
                types[tok] = types.get(tok, 0) + 1
        covered = [w for w in types if w in lex]
        n_tokens = sum(types.values())
        covered_tokens = sum(types[w] for w in covered)
        print(f"corpus_types\t{len(types)}")
        print(f"covered_types\t{len(covered)}")
        print(f"type_coverage\t{len(covered) / len(types) if types else 0.0:.6f}")
        print(f"corpus_tokens\t{n_tokens}")
        print(f"covered_tokens\t{covered_tokens}")
        print(f"token_coverage\t{covered_tokens / n_tokens if n_tokens else 0.0:.6f}")
    return EXIT_OK


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--out", help="output path")
    p.add_argument("--source-language", dest="source_language")
    p.add_argument("--target-language", dest="target_language")
    p.add_argument("--unigram-denominator", dest="unigram_denominator",
                   choices=DENOMINATOR_MODES)
    p.add_argument("--coverage", choices=COVERAGE_MODES)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lmrank", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"lmrank {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-lm", help="train an n-gram model from a corpus")
    p.add_argument("corpus")
    p.add_argument("--lang", required=True, help="language tag stored in the model")
    p.add_argument("--out", required=True)
    p.add_argument("--unigram-denominator", dest="unigram_denominator",
                   choices=DENOMINATOR_MODES)
    p.set_defaults(func=cmd_build_lm)

    p = sub.add_parser("stats", help="type/token counts of a corpus or model")
    p.add_argument("corpus", nargs="?")
    p.add_argument("--model")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("rank", help="rank candidate translations")
    _add_run_flags(p)
    p.add_argument("--sources")
    p.add_argument("--candidates")
    p.add_argument("--source-lm", dest="source_lm")
    p.add_argument("--target-lm", dest="target_lm")
    p.add_argument("--lexicon")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("evaluate", help="compare LM ranks with human judgments")
    _add_run_flags(p)
    p.add_argument("--ranked")
    p.add_argument("--human-scores", dest="human_scores")
    p.add_argument("--category", action="append", help="name=E1,E2,... (repeatable)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("lexicon-check", help="validate a lexicon, report corpus coverage")
    p.add_argument("lexicon")
    p.add_argument("--corpus")
    p.set_defaults(func=cmd_lexicon_check)

    for p in sub.choices.values():
        p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="lmrank: %(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"lmrank: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputFormatError as exc:
        print(f"lmrank: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConsistencyError, ValidationError, EmptyModelError) as exc:
        print(f"lmrank: inconsistent data: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
