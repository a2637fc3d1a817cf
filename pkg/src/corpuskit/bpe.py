"""Byte-pair encoding: learning, application, decoding, and codes-file IO.

Words are whitespace tokens with an end-of-word marker ``</w>`` appended as
a separate final symbol.  Learning repeatedly merges the most frequent
adjacent symbol pair over the word-frequency table, stopping after the
requested number of merges or once no pair occurs at least twice.  Ties are
broken by lexicographic order of the (left, right) pair so training is fully
deterministic.

Pair counts are updated incrementally after each merge; equivalence with a
full recount is enforced by a test-suite oracle.

Codes files are compatible with the subword-NMT format: a ``#version: 0.2``
header, then one merge per line as ``left right`` (single space), in learned
order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Corpus
from .errors import EmptyCorpus, EmptyInput, FormatError, MissingFile
from .rng import Xoshiro256StarStar, derive_seed
from .text import whitespace_tokenize

END_OF_WORD = "</w>"
CODES_VERSION = "0.2"

MIN_PAIR_FREQUENCY = 2


@dataclass(frozen=True)
class BpeModel:
    """Learned merge operations; list position is the merge rank."""

    merges: tuple[tuple[str, str], ...]
    eow_marker: str = END_OF_WORD
    version: str = CODES_VERSION

    def __post_init__(self):
        if len(set(self.merges)) != len(self.merges):
            raise ValueError("duplicate merge pair")

    @cached_property
    def ranks(self) -> dict[tuple[str, str], int]:
        return {pair: rank for rank, pair in enumerate(self.merges)}


def sample_concat(corpus: Corpus, per_lang_n: int, seed: int) -> list[str]:
    """Sample up to ``per_lang_n`` sentences per language, without replacement.

    Languages are concatenated in lexicographic tag order; within a language
    sentences appear in the order the seeded sampler drew them.
    """
    if per_lang_n < 1:
        raise ValueError("per_lang_n must be >= 1")
    if corpus.total_count == 0:
        raise EmptyCorpus("cannot sample from an empty corpus")
    sampled = []
    for lang in corpus.languages:
        texts = corpus.texts(lang)
        rng = Xoshiro256StarStar(derive_seed(seed, f"sample:{lang.code}"))
        perm = rng.permutation(len(texts))
        sampled.extend(texts[i] for i in perm[:per_lang_n])
    return sampled


def word_frequencies(sentences: Iterable[str]) -> Counter:
    counts: Counter = Counter()
    for sentence in sentences:
        counts.update(whitespace_tokenize(sentence))
    return counts


def _word_pairs(symbols: Sequence[str]) -> Counter:
    pairs: Counter = Counter()
    for left, right in zip(symbols, symbols[1:]):
        pairs[(left, right)] += 1
    return pairs


def _merge_word(symbols: list[str], pair: tuple[str, str], merged: str) -> list[str]:
    """Replace occurrences of ``pair`` left to right, non-overlapping."""
    left, right = pair
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        if i < n - 1 and symbols[i] == left and symbols[i + 1] == right:
            out.append(merged)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def learn_bpe(sentences: Iterable[str], num_merges: int) -> BpeModel:
    if num_merges < 1:
        raise ValueError("num_merges must be >= 1")
    word_freqs = word_frequencies(sentences)
    if not word_freqs:
        raise EmptyInput("no tokens to learn from")

    words: list[list[str]] = []
    freqs: list[int] = []
    for word, freq in word_freqs.items():
        words.append(list(word) + [END_OF_WORD])
        freqs.append(freq)

    pair_counts: Counter = Counter()
    pair_words: dict[tuple[str, str], set[int]] = {}
    for wi, symbols in enumerate(words):
        for pair, count in _word_pairs(symbols).items():
            pair_counts[pair] += count * freqs[wi]
            pair_words.setdefault(pair, set()).add(wi)

    merges: list[tuple[str, str]] = []
    while len(merges) < num_merges:
        best_pair = None
        best_count = 0
        for pair, count in pair_counts.items():
            if count > best_count or (count == best_count and best_pair is not None and pair < best_pair):
                best_pair, best_count = pair, count
        if best_pair is None or best_count < MIN_PAIR_FREQUENCY:
            break

        merged_symbol = best_pair[0] + best_pair[1]
        for wi in sorted(pair_words[best_pair]):
            old_symbols = words[wi]
            new_symbols = _merge_word(old_symbols, best_pair, merged_symbol)
            freq = freqs[wi]
            old_pairs = _word_pairs(old_symbols)
            new_pairs = _word_pairs(new_symbols)
            for pair in old_pairs.keys() - new_pairs.keys():
                pair_words[pair].discard(wi)
            for pair in new_pairs.keys() - old_pairs.keys():
                pair_words.setdefault(pair, set()).add(wi)
            for pair in old_pairs.keys() | new_pairs.keys():
                delta = (new_pairs[pair] - old_pairs[pair]) * freq
                if delta:
                    pair_counts[pair] += delta
                    if pair_counts[pair] == 0:
                        del pair_counts[pair]
            words[wi] = new_symbols
        pair_words.pop(best_pair, None)
        pair_counts.pop(best_pair, None)
        merges.append(best_pair)

    return BpeModel(merges=tuple(merges))


def apply_bpe(model: BpeModel, token: str) -> list[str]:
    """Segment one whitespace token with the learned merges.

    The lowest-ranked applicable merge is applied to all its occurrences,
    repeatedly, until no learned merge applies.  Symbols never seen in
    training simply stay as single characters.
    """
    if not token:
        return []
    symbols = list(token) + [model.eow_marker]
    ranks = model.ranks
    while len(symbols) > 1:
        best_rank = None
        best_pair = None
        for pair in zip(symbols, symbols[1:]):
            rank = ranks.get(pair)
            if rank is not None and (best_rank is None or rank < best_rank):
                best_rank, best_pair = rank, pair
        if best_pair is None:
            break
        symbols = _merge_word(symbols, best_pair, best_pair[0] + best_pair[1])
    return symbols


def bpe_decode(pieces: Sequence[str], eow_marker: str = END_OF_WORD) -> str:
    """Undo segmentation: each end-of-word marker becomes a token boundary."""
    parts = []
    for piece in pieces:
        if piece.endswith(eow_marker):
            parts.append(piece[: -len(eow_marker)])
            parts.append(" ")
        else:
            parts.append(piece)
    out = "".join(parts)
    return out[:-1] if out.endswith(" ") else out


def format_codes(model: BpeModel) -> str:
    lines = [f"#version: {model.version}"]
    for left, right in model.merges:
        if " " in left or " " in right or "\n" in left or "\n" in right:
            raise ValueError(f"merge symbols contain whitespace: {(left, right)!r}")
        lines.append(f"{left} {right}")
    return "\n".join(lines) + "\n"


def write_codes(model: BpeModel, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_codes(model))


def parse_codes(content: str, source: str = "<codes>") -> BpeModel:
    lines = content.splitlines()
    if not lines or not lines[0].startswith("#version:"):
        raise FormatError(f"{source}: missing '#version:' header")
    version = lines[0].partition(":")[2].strip()
    merges = []
    for lineno, line in enumerate(lines[1:], 2):
        if not line:
            continue
        fields = line.split(" ")
        if len(fields) != 2:
            raise FormatError(f"{source}:{lineno}: expected 'left right'")
        merges.append((fields[0], fields[1]))
    try:
        return BpeModel(merges=tuple(merges), version=version)
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None


def read_codes(path: str | Path) -> BpeModel:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"codes file not found: {path}")
    return parse_codes(path.read_text(encoding="utf-8"), source=str(path))
