"""Evaluation protocol: span-level F1 for sequence labeling, macro F1 and
confusion matrices for classification, multi-run aggregation, and the
benchmark-average score.

Span matching is exact boundary and exact label (CoNLL criterion) with
micro-averaged counts.  Classification reports use one-vs-rest counts per
class and an unweighted macro F1 over the classes present in the gold
labels.  Run aggregation reports the arithmetic mean and the sample
standard deviation (n-1 denominator, zero for a single run).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    EmptyList,
    EmptyRuns,
    FormatError,
    LengthMismatch,
    MalformedTag,
    MissingFile,
)


@dataclass(frozen=True)
class BioSequence:
    tokens: tuple[str, ...]
    tags: tuple[str, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.tags):
            raise LengthMismatch(
                f"{len(self.tokens)} tokens vs {len(self.tags)} tags"
            )


@dataclass(frozen=True)
class Span:
    start: int
    end: int  # exclusive
    label: str

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid span bounds [{self.start}, {self.end})")


@dataclass(frozen=True)
class PrfScore:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "PrfScore":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(precision=precision, recall=recall, f1=f1, tp=tp, fp=fp, fn=fn)


def _split_tag(tag: str, position: int) -> tuple[str, str]:
    if tag == "O":
        return "O", ""
    prefix, sep, label = tag.partition("-")
    if not sep or not label or prefix not in ("B", "I"):
        raise MalformedTag(f"position {position}: {tag!r} is not a BIO tag")
    return prefix, label


def extract_spans(seq: BioSequence, strict: bool = False) -> list[Span]:
    """Recover maximal labeled spans from BIO tags.

    An I tag following O or a different type is repaired by treating it as B
    (common evaluation-tool leniency); ``strict=True`` raises instead.
    """
    spans = []
    start = None
    current = None

    def close(end: int):
        nonlocal start, current
        if start is not None:
            spans.append(Span(start=start, end=end, label=current))
        start, current = None, None

    for i, tag in enumerate(seq.tags):
        prefix, label = _split_tag(tag, i)
        if prefix == "O":
            close(i)
        elif prefix == "B":
            close(i)
            start, current = i, label
        else:  # I
            if start is None or current != label:
                if strict:
                    raise MalformedTag(f"position {i}: {tag!r} continues no open span")
                close(i)
                start, current = i, label
    close(len(seq.tags))
    return spans


def spans_to_bio(spans: Iterable[Span], length: int) -> tuple[str, ...]:
    """Render non-overlapping spans back to a BIO tag sequence."""
    tags = ["O"] * length
    for span in sorted(spans, key=lambda s: s.start):
        if span.end > length:
            raise ValueError(f"span {span} exceeds sequence length {length}")
        tags[span.start] = f"B-{span.label}"
        for i in range(span.start + 1, span.end):
            tags[i] = f"I-{span.label}"
    return tuple(tags)


def span_counts(gold: Sequence[Span], pred: Sequence[Span]) -> tuple[int, int, int]:
    """Exact-match tp/fp/fn; each gold span is matchable at most once."""
    gold_counts = Counter(gold)
    pred_counts = Counter(pred)
    tp = sum(min(count, pred_counts[span]) for span, count in gold_counts.items())
    return tp, len(pred) - tp, len(gold) - tp


def span_prf(gold: Sequence[Span], pred: Sequence[Span]) -> PrfScore:
    tp, fp, fn = span_counts(gold, pred)
    return PrfScore.from_counts(tp, fp, fn)


def span_prf_dataset(
    pairs: Iterable[tuple[Sequence[Span], Sequence[Span]]]
) -> PrfScore:
    """Micro P/R/F1 over a dataset of per-sequence span lists."""
    tp = fp = fn = 0
    for gold, pred in pairs:
        t, p, n = span_counts(gold, pred)
        tp, fp, fn = tp + t, fp + p, fn + n
    return PrfScore.from_counts(tp, fp, fn)


@dataclass(frozen=True)
class ClassificationReport:
    classes: tuple[str, ...]  # sorted union of gold and predicted classes
    per_class: Mapping[str, PrfScore]
    macro_f1: float
    confusion: Mapping[tuple[str, str], int]  # (gold, pred) -> count
    support: Mapping[str, int]


def classification_report(gold: Sequence[str], pred: Sequence[str]) -> ClassificationReport:
    if len(gold) != len(pred):
        raise LengthMismatch(f"{len(gold)} gold labels vs {len(pred)} predictions")
    confusion: Counter = Counter(zip(gold, pred))
    support = Counter(gold)
    classes = tuple(sorted(set(gold) | set(pred)))
    per_class = {}
    for cls in classes:
        tp = confusion[(cls, cls)]
        fp = sum(count for (g, p), count in confusion.items() if p == cls and g != cls)
        fn = sum(count for (g, p), count in confusion.items() if g == cls and p != cls)
        per_class[cls] = PrfScore.from_counts(tp, fp, fn)
    gold_classes = [cls for cls in classes if support[cls] > 0]
    macro_f1 = sum(per_class[c].f1 for c in gold_classes) / len(gold_classes) if gold_classes else 0.0
    return ClassificationReport(
        classes=classes,
        per_class=per_class,
        macro_f1=macro_f1,
        confusion=dict(confusion),
        support=dict(support),
    )


@dataclass(frozen=True)
class RunAggregate:
    mean: float
    std: float
    runs: tuple[float, ...]


def aggregate_runs(scores: Sequence[float]) -> RunAggregate:
    if not scores:
        raise EmptyRuns("no run scores to aggregate")
    n = len(scores)
    mean = sum(scores) / n
    std = math.sqrt(sum((x - mean) ** 2 for x in scores) / (n - 1)) if n > 1 else 0.0
    return RunAggregate(mean=mean, std=std, runs=tuple(scores))


def benchmark_score(dataset_scores: Sequence[tuple[str, float]]) -> float:
    """Unweighted arithmetic mean over named dataset scores."""
    if not dataset_scores:
        raise EmptyList("no dataset scores to average")
    return sum(score for _, score in dataset_scores) / len(dataset_scores)


def read_conll(path: str | Path) -> list[BioSequence]:
    """Read ``token<TAB>tag`` lines, blank line between sequences."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"sequence file not found: {path}")
    sequences = []
    tokens: list[str] = []
    tags: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                if tokens:
                    sequences.append(BioSequence(tuple(tokens), tuple(tags)))
                    tokens, tags = [], []
                continue
            token, sep, tag = line.partition("\t")
            if not sep:
                raise FormatError(f"{path}:{lineno}: expected token<TAB>tag")
            tokens.append(token)
            tags.append(tag)
    if tokens:
        sequences.append(BioSequence(tuple(tokens), tuple(tags)))
    return sequences


def read_label_pairs(path: str | Path) -> tuple[list[str], list[str]]:
    """Read ``gold<TAB>pred`` lines into parallel label lists."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"label file not found: {path}")
    gold, pred = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            g, sep, p = line.partition("\t")
            if not sep:
                raise FormatError(f"{path}:{lineno}: expected gold<TAB>pred")
            gold.append(g)
            pred.append(p)
    return gold, pred
