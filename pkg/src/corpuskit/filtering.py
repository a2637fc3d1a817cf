"""Foreign-language sentence filtering.

A sentence is removed when the identifier's top prediction is one of the
configured foreign languages and its posterior clears the threshold; the
whole sentence is the unit of decision.  The kept corpus preserves original
order, and for every language kept + removed equals the input count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .corpus import Corpus, LanguageTag
from .errors import LabelMismatch
from .lid import LidModel, identify

DEFAULT_FOREIGN = ("eng", "fra", "por", "ara")
DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class ForeignFilterConfig:
    foreign_set: frozenset[LanguageTag]
    threshold: float = DEFAULT_THRESHOLD
    model_ref: str = ""

    def __post_init__(self):
        if not self.foreign_set:
            raise ValueError("foreign_set must not be empty")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must be in [0, 1]")
        object.__setattr__(self, "foreign_set", frozenset(self.foreign_set))


@dataclass(frozen=True)
class RemovedSample:
    text: str
    predicted: LanguageTag
    score: float


@dataclass(frozen=True)
class FilterReport:
    kept_count: Mapping[LanguageTag, int]
    removed_count: Mapping[LanguageTag, int]
    removed_samples: tuple[RemovedSample, ...]


def filter_foreign(
    corpus: Corpus,
    model: LidModel,
    config: ForeignFilterConfig,
    sample_limit: int = 20,
) -> tuple[Corpus, FilterReport]:
    missing = sorted(config.foreign_set - model.label_set)
    if missing:
        raise LabelMismatch(f"foreign language {missing[0].code!r} not in model labels")
    if not (model.label_set - config.foreign_set):
        raise LabelMismatch("model has no non-foreign label")

    kept_by_lang = {}
    kept_count = {}
    removed_count = {}
    samples = []
    for lang, sentences in corpus:
        kept = []
        removed = 0
        for sentence in sentences:
            prediction = identify(model, sentence.text)
            predicted, score = prediction.top
            if predicted in config.foreign_set and score >= config.threshold:
                removed += 1
                if len(samples) < sample_limit:
                    samples.append(
                        RemovedSample(text=sentence.text, predicted=predicted, score=score)
                    )
            else:
                kept.append(sentence)
        kept_by_lang[lang] = tuple(kept)
        kept_count[lang] = len(kept)
        removed_count[lang] = removed

    report = FilterReport(
        kept_count=kept_count,
        removed_count=removed_count,
        removed_samples=tuple(samples),
    )
    return Corpus(kept_by_lang), report


def format_filter_report(report: FilterReport) -> str:
    """Tab-separated per-language summary: lang, kept, removed."""
    lines = ["lang\tkept\tremoved"]
    for lang in sorted(report.kept_count):
        lines.append(f"{lang.code}\t{report.kept_count[lang]}\t{report.removed_count[lang]}")
    return "\n".join(lines) + "\n"
