"""Character n-gram language identification.

The classifier is multinomial naive Bayes over character n-grams with
add-alpha smoothing: deterministic to train, cheap to apply to hundreds of
labels, and fully inspectable.  Texts are wrapped in boundary symbols before
extraction so short inputs still carry positional signal; n-grams consisting
solely of boundary symbols are not counted.

Model file layout (version ``corpuskit-lid-v1``):

* line 1: ``corpuskit-lid-v1`` magic/version
* line 2: JSON header — alpha, feature config, label codes, per-label log
  priors (float64), feature count
* line 3: JSON array of feature n-grams, in column order
* remainder: the label-by-feature log-likelihood matrix as raw
  little-endian 32-bit floats, row-major

Log likelihoods are quantized to 32-bit floats at training time so that a
saved-and-reloaded model reproduces bit-identical posteriors.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import LanguageTag
from .errors import (
    EmptyLabel,
    EmptyText,
    FormatError,
    MissingFile,
    TooFewLabels,
    UnknownLabel,
)
from .metrics import PrfScore
from .text import clean_text

MODEL_MAGIC = "corpuskit-lid-v1"

LabeledSentences = Sequence[tuple[LanguageTag, str]]


@dataclass(frozen=True)
class LidFeatureConfig:
    n_min: int = 1
    n_max: int = 4
    max_features: int = 500_000
    min_df: int = 2
    boundary_start: str = "^"
    boundary_end: str = "$"

    def __post_init__(self):
        if not 1 <= self.n_min <= self.n_max <= 8:
            raise ValueError("require 1 <= n_min <= n_max <= 8")
        if self.max_features < 1_000:
            raise ValueError("max_features must be >= 1000")
        if self.min_df < 1:
            raise ValueError("min_df must be >= 1")
        if len(self.boundary_start) != 1 or len(self.boundary_end) != 1:
            raise ValueError("boundary symbols must be single characters")

    def to_dict(self) -> dict:
        return {
            "n_min": self.n_min,
            "n_max": self.n_max,
            "max_features": self.max_features,
            "min_df": self.min_df,
            "boundary_start": self.boundary_start,
            "boundary_end": self.boundary_end,
        }


def extract_ngram_features(text: str, config: LidFeatureConfig) -> dict[str, int]:
    """Count character n-grams of all configured orders over marked text.

    The injected boundary symbols are never counted on their own; with
    non-empty text they sit alone at the two edges, so only the two order-1
    edge grams need skipping.
    """
    if not text:
        return {}
    marked = config.boundary_start + text + config.boundary_end
    length = len(marked)
    counts: dict[str, int] = {}
    get = counts.get
    for n in range(config.n_min, config.n_max + 1):
        if n == 1:
            for ch in text:
                counts[ch] = get(ch, 0) + 1
        else:
            for i in range(length - n + 1):
                gram = marked[i : i + n]
                counts[gram] = get(gram, 0) + 1
    return counts


@dataclass(frozen=True)
class LidModel:
    """Immutable trained model; arrays are read-only after construction."""

    labels: tuple[LanguageTag, ...]
    features: tuple[str, ...]
    log_likelihood: np.ndarray  # float32, shape (labels, features)
    log_prior: np.ndarray  # float64, shape (labels,)
    alpha: float
    config: LidFeatureConfig

    def __post_init__(self):
        self.log_likelihood.setflags(write=False)
        self.log_prior.setflags(write=False)

    @cached_property
    def feature_index(self) -> dict[str, int]:
        return {gram: i for i, gram in enumerate(self.features)}

    @cached_property
    def label_set(self) -> frozenset:
        return frozenset(self.labels)


@dataclass(frozen=True)
class LidPrediction:
    """Full posterior ranking, best first; ties broken by tag."""

    ranking: tuple[tuple[LanguageTag, float], ...]

    @property
    def top(self) -> tuple[LanguageTag, float]:
        return self.ranking[0]


def train_lid(
    train_split: LabeledSentences,
    config: LidFeatureConfig | None = None,
    alpha: float = 0.1,
    labels: Sequence[LanguageTag] | None = None,
) -> LidModel:
    """Fit the multinomial model.

    ``labels``, when given, fixes the expected label set: a declared label
    with no sentences raises EmptyLabel and a sentence outside the set
    raises UnknownLabel.  Feature columns are the n-grams with document
    frequency >= min_df, ranked by total frequency (ties lexicographic).
    """
    config = config or LidFeatureConfig()
    if alpha <= 0:
        raise ValueError("smoothing alpha must be > 0")

    declared = frozenset(labels) if labels is not None else None
    per_label_grams: dict[LanguageTag, Counter] = {}
    per_label_sentences: Counter = Counter()
    doc_freq: Counter = Counter()
    for lang, text in train_split:
        if declared is not None and lang not in declared:
            raise UnknownLabel(f"sentence labeled {lang.code!r} outside declared labels")
        grams = extract_ngram_features(text, config)
        per_label_grams.setdefault(lang, Counter()).update(grams)
        per_label_sentences[lang] += 1
        doc_freq.update(grams.keys())

    if declared is not None:
        empty = sorted(declared - per_label_grams.keys())
        if empty:
            raise EmptyLabel(f"no sentences for label {empty[0].code!r}")
    if len(per_label_grams) < 2:
        raise TooFewLabels(f"need >= 2 labels, got {len(per_label_grams)}")

    total_freq: Counter = Counter()
    for grams in per_label_grams.values():
        total_freq.update(grams)
    eligible = [g for g in total_freq if doc_freq[g] >= config.min_df]
    eligible.sort(key=lambda g: (-total_freq[g], g))
    features = tuple(eligible[: config.max_features])
    index = {g: i for i, g in enumerate(features)}

    ordered_labels = tuple(sorted(per_label_grams))
    counts = np.zeros((len(ordered_labels), len(features)), dtype=np.float64)
    for row, lang in enumerate(ordered_labels):
        for gram, count in per_label_grams[lang].items():
            col = index.get(gram)
            if col is not None:
                counts[row, col] = count

    smoothed = counts + alpha
    log_likelihood = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    total_sentences = sum(per_label_sentences.values())
    log_prior = np.array(
        [math.log(per_label_sentences[lang] / total_sentences) for lang in ordered_labels],
        dtype=np.float64,
    )
    return LidModel(
        labels=ordered_labels,
        features=features,
        log_likelihood=log_likelihood.astype(np.float32),
        log_prior=log_prior,
        alpha=alpha,
        config=config,
    )


def _scores(model: LidModel, grams: Mapping[str, int]) -> np.ndarray:
    scores = model.log_prior.copy()
    cols = []
    counts = []
    index = model.feature_index
    for gram, count in grams.items():
        col = index.get(gram)
        if col is not None:
            cols.append(col)
            counts.append(count)
    if cols:
        scores += model.log_likelihood[:, cols].astype(np.float64) @ np.array(
            counts, dtype=np.float64
        )
    return scores


def identify(model: LidModel, text: str) -> LidPrediction:
    """Rank every model label by posterior probability for one text."""
    cleaned = clean_text(text)
    if not cleaned:
        raise EmptyText("no text left after cleaning")
    scores = _scores(model, extract_ngram_features(cleaned, model.config))
    shifted = scores - scores.max()
    posteriors = np.exp(shifted)
    posteriors /= posteriors.sum()
    ranking = sorted(
        zip(model.labels, posteriors.tolist()), key=lambda pair: (-pair[1], pair[0])
    )
    return LidPrediction(ranking=tuple(ranking))


@dataclass(frozen=True)
class LidEvalReport:
    per_language: Mapping[LanguageTag, PrfScore]
    macro_f1: float
    support: Mapping[LanguageTag, int]
    confusion: Mapping[tuple[LanguageTag, LanguageTag], int]
    total: int = field(default=0)


def evaluate_lid(model: LidModel, test_split: LabeledSentences) -> LidEvalReport:
    test_labels = {lang for lang, _ in test_split}
    unknown = sorted(test_labels - model.label_set)
    if unknown:
        raise UnknownLabel(f"test label {unknown[0].code!r} not in model labels")

    confusion: Counter = Counter()
    for gold, text in test_split:
        pred, _ = identify(model, text).top
        confusion[(gold, pred)] += 1

    support = Counter(gold for gold, _ in confusion.elements())
    predicted = {pred for _, pred in confusion}
    rows = sorted(test_labels | predicted)
    per_language = {}
    for lang in rows:
        tp = confusion[(lang, lang)]
        fp = sum(c for (g, p), c in confusion.items() if p == lang and g != lang)
        fn = sum(c for (g, p), c in confusion.items() if g == lang and p != lang)
        per_language[lang] = PrfScore.from_counts(tp, fp, fn)
    gold_rows = [lang for lang in rows if support[lang] > 0]
    macro_f1 = (
        sum(per_language[lang].f1 for lang in gold_rows) / len(gold_rows) if gold_rows else 0.0
    )
    return LidEvalReport(
        per_language=per_language,
        macro_f1=macro_f1,
        support=dict(support),
        confusion=dict(confusion),
        total=sum(confusion.values()),
    )


def save_lid_model(model: LidModel, path: str | Path) -> None:
    header = {
        "alpha": model.alpha,
        "config": model.config.to_dict(),
        "labels": [lang.code for lang in model.labels],
        "log_prior": model.log_prior.tolist(),
        "num_features": len(model.features),
    }
    header_line = json.dumps(header, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    features_line = json.dumps(list(model.features), separators=(",", ":"), ensure_ascii=False)
    matrix = np.ascontiguousarray(model.log_likelihood, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC.encode("utf-8") + b"\n")
        fh.write(header_line.encode("utf-8") + b"\n")
        fh.write(features_line.encode("utf-8") + b"\n")
        fh.write(matrix.tobytes())


def load_lid_model(path: str | Path) -> LidModel:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"model file not found: {path}")
    blob = path.read_bytes()
    try:
        magic_end = blob.index(b"\n")
        header_end = blob.index(b"\n", magic_end + 1)
        features_end = blob.index(b"\n", header_end + 1)
    except ValueError:
        raise FormatError(f"{path}: truncated model file") from None
    if blob[:magic_end].decode("utf-8", errors="replace") != MODEL_MAGIC:
        raise FormatError(f"{path}: not a {MODEL_MAGIC} file")
    try:
        header = json.loads(blob[magic_end + 1 : header_end])
        features = json.loads(blob[header_end + 1 : features_end])
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: bad model header: {exc}") from None

    labels = tuple(LanguageTag(code) for code in header["labels"])
    num_features = header["num_features"]
    if num_features != len(features):
        raise FormatError(f"{path}: feature count mismatch")
    expected = len(labels) * num_features * 4
    matrix_bytes = blob[features_end + 1 :]
    if len(matrix_bytes) != expected:
        raise FormatError(
            f"{path}: likelihood matrix is {len(matrix_bytes)} bytes, expected {expected}"
        )
    matrix = np.frombuffer(matrix_bytes, dtype="<f4").reshape(len(labels), num_features)
    return LidModel(
        labels=labels,
        features=tuple(features),
        log_likelihood=matrix.astype(np.float32),
        log_prior=np.array(header["log_prior"], dtype=np.float64),
        alpha=header["alpha"],
        config=LidFeatureConfig(**header["config"]),
    )
