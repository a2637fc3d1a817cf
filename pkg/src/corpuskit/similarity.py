"""Jaccard vocabulary-similarity matrices between per-language corpora.

The unit of comparison is the set of distinct token types per language.
Before building the set, digits (Unicode Nd), punctuation (P*), and emoji
(Extended_Pictographic) are stripped character-wise from each token; tokens
left empty are dropped.  Similarity of two empty vocabularies is 1.0 by
convention, 0.0 when exactly one side is empty.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from pathlib import Path

import regex

from .corpus import Corpus, LanguageTag
from .errors import UnknownLanguage
from .text import whitespace_tokenize

HIGHLIGHT_THRESHOLD = 0.4

_PICTOGRAPHIC = regex.compile(r"\p{Extended_Pictographic}")


def _strip_char(ch: str) -> bool:
    category = unicodedata.category(ch)
    if category == "Nd" or category.startswith("P"):
        return True
    return bool(_PICTOGRAPHIC.match(ch))


def clean_token_for_similarity(token: str) -> str:
    return "".join(ch for ch in token if not _strip_char(ch))


@dataclass(frozen=True)
class VocabSet:
    lang: LanguageTag
    types: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "types", frozenset(self.types))


def build_vocab_set(corpus: Corpus, lang: LanguageTag) -> VocabSet:
    if lang not in corpus:
        raise UnknownLanguage(f"language {lang.code!r} not in corpus")
    types = set()
    for text in corpus.texts(lang):
        for token in whitespace_tokenize(text):
            cleaned = clean_token_for_similarity(token)
            if cleaned:
                types.add(cleaned)
    return VocabSet(lang=lang, types=frozenset(types))


def jaccard(a: VocabSet, b: VocabSet) -> float:
    union = a.types | b.types
    if not union:
        return 1.0  # both empty, by convention
    return len(a.types & b.types) / len(union)


@dataclass(frozen=True)
class SimilarityMatrix:
    labels: tuple[LanguageTag, ...]
    values: tuple[tuple[float, ...], ...]
    highlight_threshold: float = HIGHLIGHT_THRESHOLD

    def value(self, a: LanguageTag, b: LanguageTag) -> float:
        i = self.labels.index(a)
        j = self.labels.index(b)
        return self.values[i][j]


def similarity_matrix(
    corpus: Corpus,
    langs: list[LanguageTag] | None = None,
    highlight_threshold: float = HIGHLIGHT_THRESHOLD,
) -> SimilarityMatrix:
    """Pairwise Jaccard scores, computed once per unordered pair and mirrored."""
    labels = tuple(langs) if langs is not None else corpus.languages
    vocabs = [build_vocab_set(corpus, lang) for lang in labels]
    n = len(labels)
    grid = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            score = jaccard(vocabs[i], vocabs[j])
            grid[i][j] = score
            grid[j][i] = score
    return SimilarityMatrix(
        labels=labels,
        values=tuple(tuple(row) for row in grid),
        highlight_threshold=highlight_threshold,
    )


def format_matrix_csv(matrix: SimilarityMatrix) -> str:
    """CSV with tag header row/column, two-decimal values."""
    header = "," + ",".join(lang.code for lang in matrix.labels)
    lines = [header]
    for lang, row in zip(matrix.labels, matrix.values):
        lines.append(lang.code + "," + ",".join(f"{v:.2f}" for v in row))
    return "\n".join(lines) + "\n"


def write_matrix_csv(matrix: SimilarityMatrix, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_matrix_csv(matrix))


def highlight_pairs(matrix: SimilarityMatrix) -> list[tuple[LanguageTag, LanguageTag, float]]:
    """Unordered off-diagonal pairs scoring at or above the threshold."""
    pairs = []
    for i, a in enumerate(matrix.labels):
        for j in range(i + 1, len(matrix.labels)):
            score = matrix.values[i][j]
            if score >= matrix.highlight_threshold:
                pairs.append((a, matrix.labels[j], score))
    return pairs


def format_highlight_pairs(matrix: SimilarityMatrix) -> str:
    lines = [f"{a.code}\t{b.code}\t{score:.2f}" for a, b, score in highlight_pairs(matrix)]
    return "\n".join(lines) + "\n" if lines else ""
