"""Command-line interface: one binary, thirteen subcommands.

Every subcommand is deterministic: all randomness flows from an explicit
``--seed`` flag, environment variables are never consulted, and worker
counts (``--threads``) cannot change any output byte.  Each run logs its
resolved configuration to stderr.

Exit codes: 0 success, 1 operation error (the error name is printed),
2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import __version__
from .bpe import apply_bpe, learn_bpe, read_codes, sample_concat, write_codes
from .corpus import (
    Corpus,
    corpus_from_labeled,
    load_corpus,
    parse_language_tag,
    read_labeled_sentences,
    write_labeled_sentences,
)
from .errors import MissingFile, PipelineError
from .filtering import (
    DEFAULT_FOREIGN,
    DEFAULT_THRESHOLD,
    ForeignFilterConfig,
    filter_foreign,
    format_filter_report,
)
from .lid import (
    LidFeatureConfig,
    evaluate_lid,
    identify,
    load_lid_model,
    save_lid_model,
    train_lid,
)
from .metrics import (
    aggregate_runs,
    benchmark_score,
    classification_report,
    extract_spans,
    read_conll,
    read_label_pairs,
    span_prf_dataset,
)
from .reporting import (
    format_aggregate,
    render_confusion_csv,
    render_prf_table,
    render_score_rows,
)
from .similarity import (
    HIGHLIGHT_THRESHOLD,
    format_highlight_pairs,
    format_matrix_csv,
    similarity_matrix,
)
from .splits import SplitSpec, make_splits, write_split_assignment
from .text import clean_text, whitespace_tokenize
from .wordpiece import build_wordpiece_vocab, read_vocab, wordpiece_encode, write_vocab

DEFAULT_MERGES = 100_000
DEFAULT_TRAIN = 5_000
DEFAULT_DEV = 50
DEFAULT_TEST = 100
DEFAULT_VOCAB_SIZE = 250_000
VOCAB_SIZE_PRESETS = (110_000, 250_000)


def _write_text(path: str, content: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(content)


def _read_lines(path: str) -> list[str]:
    p = Path(path)
    if not p.is_file():
        raise MissingFile(f"input file not found: {p}")
    return p.read_text(encoding="utf-8").splitlines()


def _parallel_map(fn: Callable, items: Sequence, threads: int) -> list:
    """Order-preserving map; results are independent of the thread count."""
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _load_input_corpus(args) -> Corpus:
    if getattr(args, "manifest", None):
        return load_corpus(args.manifest, workers=getattr(args, "threads", 1))
    if getattr(args, "corpus", None):
        return corpus_from_labeled(args.corpus)
    raise MissingFile("one of --manifest or --corpus is required")


def _parse_tag_list(raw: str):
    return [parse_language_tag(part) for part in raw.split(",") if part.strip()]


def _log_config(args) -> None:
    skip = {"func"}
    pairs = sorted(
        (key, value) for key, value in vars(args).items() if key not in skip and value is not None
    )
    rendered = " ".join(f"{key}={value}" for key, value in pairs)
    print(f"config: {rendered}", file=sys.stderr)


def cmd_ingest(args) -> int:
    corpus = _load_input_corpus(args)
    pairs = [(lang, s.text) for lang, sents in corpus for s in sents]
    write_labeled_sentences(pairs, args.out)
    print(f"ingested {corpus.total_count} sentences across {len(corpus.languages)} languages")
    for lang in corpus.languages:
        print(f"{lang.code}\t{corpus.count(lang)}")
    return 0


def cmd_split(args) -> int:
    corpus = _load_input_corpus(args)
    spec = SplitSpec(train_n=args.train, dev_n=args.dev, test_n=args.test, seed=args.seed)
    assignment = make_splits(corpus, spec, proportional=args.proportional)
    write_split_assignment(assignment, args.out)
    sizes = [
        (lang, *(len(part) for part in assignment.by_lang[lang]))
        for lang in assignment.languages
    ]
    print(f"split {len(sizes)} languages -> {args.out}")
    for lang, n_train, n_dev, n_test in sizes:
        print(f"{lang.code}\ttrain={n_train}\tdev={n_dev}\ttest={n_test}")
    return 0


def cmd_filter_foreign(args) -> int:
    corpus = _load_input_corpus(args)
    model = load_lid_model(args.model)
    config = ForeignFilterConfig(
        foreign_set=frozenset(_parse_tag_list(args.foreign)),
        threshold=args.threshold,
        model_ref=str(args.model),
    )
    kept, report = filter_foreign(corpus, model, config, sample_limit=args.samples)
    pairs = [(lang, s.text) for lang, sents in kept for s in sents]
    write_labeled_sentences(pairs, args.out)
    if args.report:
        _write_text(args.report, format_filter_report(report))
    total_removed = sum(report.removed_count.values())
    print(f"kept {kept.total_count} sentences, removed {total_removed} -> {args.out}")
    print(format_filter_report(report), end="")
    return 0


def _bpe_training_sentences(args) -> list[str]:
    if args.input:
        return [clean_text(line) for line in _read_lines(args.input) if clean_text(line)]
    corpus = _load_input_corpus(args)
    if args.sample_per_lang:
        return sample_concat(corpus, args.sample_per_lang, args.seed)
    return [text for lang in corpus.languages for text in corpus.texts(lang)]


def cmd_learn_bpe(args) -> int:
    sentences = _bpe_training_sentences(args)
    model = learn_bpe(sentences, num_merges=args.merges)
    write_codes(model, args.out)
    print(f"learned {len(model.merges)} merges from {len(sentences)} sentences -> {args.out}")
    return 0


def cmd_apply_bpe(args) -> int:
    model = read_codes(args.codes)

    def segment(line: str) -> str:
        pieces = []
        for token in whitespace_tokenize(clean_text(line)):
            pieces.extend(apply_bpe(model, token))
        return " ".join(pieces)

    lines = _read_lines(args.input)
    segmented = _parallel_map(segment, lines, args.threads)
    content = "\n".join(segmented) + "\n" if segmented else ""
    if args.output:
        _write_text(args.output, content)
        print(f"segmented {len(lines)} lines -> {args.output}")
    else:
        sys.stdout.write(content)
    return 0


def cmd_wordpiece(args) -> int:
    vocab = None
    if args.vocab_out:
        if not args.codes:
            raise MissingFile("--codes is required to build a vocabulary")
        model = read_codes(args.codes)
        sentences = _bpe_training_sentences(args)
        vocab = build_wordpiece_vocab(model, sentences, size_cap=args.vocab_size)
        write_vocab(vocab, args.vocab_out)
        print(f"built vocabulary of {len(vocab)} pieces -> {args.vocab_out}")
    if args.encode:
        if vocab is None:
            if not args.vocab:
                raise MissingFile("--vocab is required to encode")
            vocab = read_vocab(args.vocab)

        def encode(line: str) -> str:
            pieces = []
            for token in whitespace_tokenize(clean_text(line)):
                pieces.extend(wordpiece_encode(vocab, token))
            return " ".join(pieces)

        lines = _read_lines(args.encode)
        encoded = [encode(line) for line in lines]
        content = "\n".join(encoded) + "\n" if encoded else ""
        if args.output:
            _write_text(args.output, content)
            print(f"encoded {len(lines)} lines -> {args.output}")
        else:
            sys.stdout.write(content)
    if not args.vocab_out and not args.encode:
        raise MissingFile("nothing to do: pass --vocab-out to build and/or --encode to encode")
    return 0


def cmd_train_lid(args) -> int:
    pairs = read_labeled_sentences(args.train)
    config = LidFeatureConfig(
        n_min=args.n_min,
        n_max=args.n_max,
        max_features=args.max_features,
        min_df=args.min_df,
    )
    model = train_lid(pairs, config=config, alpha=args.alpha)
    save_lid_model(model, args.out)
    print(
        f"trained on {len(pairs)} sentences, {len(model.labels)} labels, "
        f"{len(model.features)} features -> {args.out}"
    )
    return 0


def cmd_identify(args) -> int:
    model = load_lid_model(args.model)
    if args.text is not None:
        texts = [args.text]
    elif args.input:
        texts = [line for line in _read_lines(args.input) if line.strip()]
    else:
        raise MissingFile("one of --text or --input is required")

    def rank(text: str) -> str:
        prediction = identify(model, text)
        top = prediction.ranking[: args.top_k]
        return "\t".join(f"{lang.code}\t{score:.6f}" for lang, score in top)

    rows = _parallel_map(rank, texts, args.threads)
    content = "\n".join(rows) + "\n" if rows else ""
    if args.output:
        _write_text(args.output, content)
        print(f"identified {len(texts)} texts -> {args.output}")
    else:
        sys.stdout.write(content)
    return 0


def cmd_eval_lid(args) -> int:
    model = load_lid_model(args.model)
    pairs = read_labeled_sentences(args.test)
    report = evaluate_lid(model, pairs)
    per_class = {lang.code: score for lang, score in report.per_language.items()}
    support = {lang.code: count for lang, count in report.support.items()}
    table = render_prf_table(per_class, support, fmt="tsv")
    table += f"macro_f1\t{report.macro_f1:.2f}\n"
    if args.report:
        _write_text(args.report, table)
        print(f"evaluated {report.total} sentences -> {args.report}")
    else:
        sys.stdout.write(table)
    print(f"macro F1: {report.macro_f1:.4f}")
    return 0


def cmd_jaccard(args) -> int:
    corpus = _load_input_corpus(args)
    langs = _parse_tag_list(args.langs) if args.langs else None
    matrix = similarity_matrix(corpus, langs, highlight_threshold=args.bold_threshold)
    csv = format_matrix_csv(matrix)
    if args.out:
        _write_text(args.out, csv)
        print(f"{len(matrix.labels)}x{len(matrix.labels)} matrix -> {args.out}")
    else:
        sys.stdout.write(csv)
    if args.bold_out:
        _write_text(args.bold_out, format_highlight_pairs(matrix))
        print(f"pairs >= {args.bold_threshold} -> {args.bold_out}")
    return 0


def cmd_score_seq(args) -> int:
    gold_seqs = read_conll(args.gold)
    pred_seqs = read_conll(args.pred)
    if len(gold_seqs) != len(pred_seqs):
        from .errors import LengthMismatch

        raise LengthMismatch(
            f"{len(gold_seqs)} gold sequences vs {len(pred_seqs)} predicted"
        )
    pairs = [
        (extract_spans(g, strict=args.strict), extract_spans(p, strict=args.strict))
        for g, p in zip(gold_seqs, pred_seqs)
    ]
    score = span_prf_dataset(pairs)
    rows = [
        ("precision", f"{score.precision:.2f}"),
        ("recall", f"{score.recall:.2f}"),
        ("f1", f"{score.f1:.2f}"),
        ("tp", str(score.tp)),
        ("fp", str(score.fp)),
        ("fn", str(score.fn)),
    ]
    content = render_score_rows(rows, fmt="tsv")
    if args.report:
        _write_text(args.report, content)
        print(f"scored {len(pairs)} sequences -> {args.report}")
    sys.stdout.write(render_score_rows(rows, fmt="human"))
    return 0


def cmd_score_cls(args) -> int:
    gold, pred = read_label_pairs(args.input)
    report = classification_report(gold, pred)
    table = render_prf_table(report.per_class, report.support, fmt="tsv")
    table += f"macro_f1\t{report.macro_f1:.2f}\n"
    if args.report:
        _write_text(args.report, table)
        print(f"scored {len(gold)} labels -> {args.report}")
    else:
        sys.stdout.write(table)
    if args.confusion:
        _write_text(args.confusion, render_confusion_csv(report))
        print(f"confusion matrix -> {args.confusion}")
    print(f"macro F1: {report.macro_f1:.4f}")
    return 0


def _parse_values(raw: str) -> list[float]:
    return [float(part) for part in raw.split(",") if part.strip()]


def cmd_aggregate(args) -> int:
    rows = []
    if args.values:
        aggregate = aggregate_runs(_parse_values(args.values))
        print(format_aggregate(aggregate))
        rows.append(("runs", format_aggregate(aggregate)))
    if args.table:
        means = []
        for line in _read_lines(args.table):
            if not line.strip():
                continue
            name, _, rest = line.partition("\t")
            values = [float(v) for v in rest.split("\t") if v.strip()]
            aggregate = aggregate_runs(values)
            means.append((name, aggregate.mean))
            cell = f"{aggregate.mean:.2f}" if len(values) == 1 else format_aggregate(aggregate)
            rows.append((name, cell))
        average = benchmark_score(means)
        rows.append(("average", f"{average:.2f}"))
        sys.stdout.write(render_score_rows(rows, fmt="human"))
    if args.report:
        _write_text(args.report, render_score_rows(rows, fmt="tsv"))
    if not args.values and not args.table:
        raise MissingFile("one of --values or --table is required")
    return 0


def _add_corpus_inputs(parser, with_threads: bool = True) -> None:
    parser.add_argument("--manifest", help="corpus manifest (path<TAB>lang<TAB>domain<TAB>script)")
    parser.add_argument("--corpus", help="labeled-sentence file (lang<TAB>text)")
    if with_threads:
        parser.add_argument(
            "--threads", type=int, default=1, help="worker count; never changes results (default: %(default)s)"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corpuskit",
        description="Corpus curation, subword learning, language identification, and evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    p = sub.add_parser("ingest", help="load a manifest into a labeled-sentence file")
    _add_corpus_inputs(p)
    p.add_argument("--out", required=True, help="output labeled-sentence file")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("split", help="deterministic per-language train/dev/test split")
    _add_corpus_inputs(p, with_threads=False)
    p.add_argument("--train", type=int, default=DEFAULT_TRAIN, help="train sentences per language (default: %(default)s)")
    p.add_argument("--dev", type=int, default=DEFAULT_DEV, help="dev sentences per language (default: %(default)s)")
    p.add_argument("--test", type=int, default=DEFAULT_TEST, help="test sentences per language (default: %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="split seed (default: %(default)s)")
    p.add_argument(
        "--proportional",
        action="store_true",
        help="scale sizes down for small languages instead of failing",
    )
    p.add_argument("--out", required=True, help="output split-assignment file")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("filter-foreign", help="remove sentences identified as foreign")
    _add_corpus_inputs(p)
    p.add_argument("--model", required=True, help="trained LID model file")
    p.add_argument(
        "--foreign",
        default=",".join(DEFAULT_FOREIGN),
        help="comma-separated foreign language tags (default: %(default)s)",
    )
    p.add_argument(
        "--threshold",
        type=float,
        default=DEFAULT_THRESHOLD,
        help="posterior needed to remove (default: %(default)s)",
    )
    p.add_argument("--samples", type=int, default=20, help="removed-sample cap in the report (default: %(default)s)")
    p.add_argument("--out", required=True, help="output labeled-sentence file of kept sentences")
    p.add_argument("--report", help="per-language kept/removed TSV")
    p.set_defaults(func=cmd_filter_foreign)

    p = sub.add_parser("learn-bpe", help="learn BPE merge operations")
    _add_corpus_inputs(p, with_threads=False)
    p.add_argument("--input", help="plain text file, one sentence per line")
    p.add_argument("--merges", type=int, default=DEFAULT_MERGES, help="merge operations to learn (default: %(default)s)")
    p.add_argument(
        "--sample-per-lang",
        type=int,
        help="sample this many sentences per language before learning",
    )
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default: %(default)s)")
    p.add_argument("--out", required=True, help="output codes file (subword-NMT format)")
    p.set_defaults(func=cmd_learn_bpe)

    p = sub.add_parser("apply-bpe", help="segment text with learned codes")
    p.add_argument("--codes", required=True, help="codes file from learn-bpe")
    p.add_argument("--input", required=True, help="plain text file, one sentence per line")
    p.add_argument("--output", help="output file (default: stdout)")
    p.add_argument("--threads", type=int, default=1, help="worker count; never changes results (default: %(default)s)")
    p.set_defaults(func=cmd_apply_bpe)

    p = sub.add_parser(
        "wordpiece",
        aliases=["wordpiece-encode"],
        help="build a WordPiece vocabulary and/or encode text",
    )
    _add_corpus_inputs(p, with_threads=False)
    p.add_argument("--input", help="plain text training file, one sentence per line")
    p.add_argument("--codes", help="codes file (needed to build a vocabulary)")
    p.add_argument(
        "--vocab-size",
        type=int,
        default=DEFAULT_VOCAB_SIZE,
        help=f"vocabulary cap; common presets {VOCAB_SIZE_PRESETS[0]} and {VOCAB_SIZE_PRESETS[1]} (default: %(default)s)",
    )
    p.add_argument("--vocab-out", help="write the built vocabulary here")
    p.add_argument("--vocab", help="existing vocabulary file for encoding")
    p.add_argument("--encode", help="text file to encode, one sentence per line")
    p.add_argument("--output", help="encoded output file (default: stdout)")
    p.add_argument("--sample-per-lang", type=int, help="sample this many sentences per language")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default: %(default)s)")
    p.set_defaults(func=cmd_wordpiece)

    p = sub.add_parser("train-lid", help="train the character n-gram language identifier")
    p.add_argument("--train", required=True, help="labeled-sentence file (lang<TAB>text)")
    p.add_argument("--n-min", type=int, default=1, help="smallest n-gram order (default: %(default)s)")
    p.add_argument("--n-max", type=int, default=4, help="largest n-gram order (default: %(default)s)")
    p.add_argument("--max-features", type=int, default=500_000, help="feature cap (default: %(default)s)")
    p.add_argument("--min-df", type=int, default=2, help="minimum document frequency (default: %(default)s)")
    p.add_argument("--alpha", type=float, default=0.1, help="add-alpha smoothing (default: %(default)s)")
    p.add_argument("--out", required=True, help="output model file")
    p.set_defaults(func=cmd_train_lid)

    p = sub.add_parser("identify", help="rank languages for input text")
    p.add_argument("--model", required=True, help="trained LID model file")
    p.add_argument("--text", help="classify this text")
    p.add_argument("--input", help="classify each line of this file")
    p.add_argument("--top-k", type=int, default=1, help="ranks to print per text (default: %(default)s)")
    p.add_argument("--output", help="output file (default: stdout)")
    p.add_argument("--threads", type=int, default=1, help="worker count; never changes results (default: %(default)s)")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("eval-lid", help="evaluate a LID model on a labeled test set")
    p.add_argument("--model", required=True, help="trained LID model file")
    p.add_argument("--test", required=True, help="labeled-sentence file (lang<TAB>text)")
    p.add_argument("--report", help="per-language P/R/F1 TSV")
    p.set_defaults(func=cmd_eval_lid)

    p = sub.add_parser("jaccard", help="vocabulary-overlap similarity matrix")
    _add_corpus_inputs(p, with_threads=False)
    p.add_argument("--langs", help="comma-separated tags (default: all corpus languages)")
    p.add_argument("--out", help="matrix CSV output (default: stdout)")
    p.add_argument(
        "--bold-threshold",
        type=float,
        default=HIGHLIGHT_THRESHOLD,
        help="highlight pairs at or above this score (default: %(default)s)",
    )
    p.add_argument("--bold-out", help="write highlighted pairs here")
    p.set_defaults(func=cmd_jaccard)

    p = sub.add_parser("score-seq", help="span-level F1 for BIO sequence files")
    p.add_argument("--gold", required=True, help="gold CoNLL file (token<TAB>tag)")
    p.add_argument("--pred", required=True, help="predicted CoNLL file")
    p.add_argument("--strict", action="store_true", help="reject BIO violations instead of repairing")
    p.add_argument("--report", help="score TSV output")
    p.set_defaults(func=cmd_score_seq)

    p = sub.add_parser("score-cls", help="classification report from gold/pred labels")
    p.add_argument("--input", required=True, help="label file (gold<TAB>pred per line)")
    p.add_argument("--report", help="per-class P/R/F1 TSV")
    p.add_argument("--confusion", help="confusion matrix CSV")
    p.set_defaults(func=cmd_score_cls)

    p = sub.add_parser("aggregate", help="mean ±std over runs, benchmark averages")
    p.add_argument("--values", help="comma-separated run scores, e.g. 84,85,86")
    p.add_argument("--table", help="TSV of name<TAB>score[<TAB>score...] rows")
    p.add_argument("--report", help="aggregate TSV output")
    p.set_defaults(func=cmd_aggregate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _log_config(args)
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, UnicodeDecodeError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
