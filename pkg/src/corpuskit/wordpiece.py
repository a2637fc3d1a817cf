"""WordPiece vocabulary derivation and greedy longest-match encoding.

The vocabulary is derived from a trained BPE model rather than from a
likelihood objective: the reserved unknown piece and every single character
seen in training are always included, then the most frequent subword units
produced by segmenting the training sentences fill the remaining space, in
WordPiece convention (word-initial pieces plain, continuations prefixed
``##``, the end-of-word marker dropped).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .bpe import BpeModel, apply_bpe, word_frequencies
from .errors import CapTooSmall, EmptyInput, FormatError, MissingFile

CONTINUATION_PREFIX = "##"
UNK_PIECE = "[UNK]"


@dataclass(frozen=True)
class WordPieceVocab:
    """Ordered piece inventory; a piece's position is its id."""

    pieces: tuple[str, ...]
    size_cap: int
    continuation_prefix: str = CONTINUATION_PREFIX
    unk_piece: str = UNK_PIECE

    def __post_init__(self):
        if len(set(self.pieces)) != len(self.pieces):
            raise ValueError("duplicate vocabulary piece")
        if self.unk_piece not in self.pieces:
            raise ValueError("unknown piece missing from vocabulary")
        if len(self.pieces) > self.size_cap:
            raise ValueError("vocabulary exceeds its size cap")

    @cached_property
    def _lookup(self) -> frozenset:
        return frozenset(self.pieces)

    def __contains__(self, piece: str) -> bool:
        return piece in self._lookup

    def __len__(self) -> int:
        return len(self.pieces)


def _piece_candidates(model: BpeModel, word_freqs: Counter) -> Counter:
    """Frequency of every WordPiece-form unit over the training words."""
    counts: Counter = Counter()
    for word, freq in word_freqs.items():
        for position, piece in enumerate(apply_bpe(model, word)):
            core = piece[: -len(model.eow_marker)] if piece.endswith(model.eow_marker) else piece
            if not core:
                continue  # bare end-of-word symbol
            name = core if position == 0 else CONTINUATION_PREFIX + core
            counts[name] += freq
    return counts


def build_wordpiece_vocab(
    model: BpeModel, training_sentences: Iterable[str], size_cap: int
) -> WordPieceVocab:
    word_freqs = word_frequencies(training_sentences)
    if not word_freqs:
        raise EmptyInput("no tokens to build a vocabulary from")

    chars = sorted({ch for word in word_freqs for ch in word})
    if size_cap < len(chars) + 2:
        raise CapTooSmall(
            f"cap {size_cap} below character inventory {len(chars)} + 2 specials"
        )

    mandatory = [UNK_PIECE, *chars]
    taken = set(mandatory)
    remaining = size_cap - len(mandatory)

    candidates = _piece_candidates(model, word_freqs)
    ordered = sorted(
        (piece for piece in candidates if piece not in taken),
        key=lambda piece: (-candidates[piece], piece),
    )
    pieces = tuple(mandatory + ordered[:remaining])
    return WordPieceVocab(pieces=pieces, size_cap=size_cap)


def wordpiece_encode(vocab: WordPieceVocab, token: str) -> list[str]:
    """Greedy longest-match-first encoding of one whitespace token.

    Never fails: if no vocabulary piece matches at some position the whole
    token encodes as the unknown piece.
    """
    if not token:
        return []
    pieces = []
    start = 0
    while start < len(token):
        end = len(token)
        match = None
        while start < end:
            candidate = token[start:end]
            if start > 0:
                candidate = vocab.continuation_prefix + candidate
            if candidate in vocab:
                match = candidate
                break
            end -= 1
        if match is None:
            return [vocab.unk_piece]
        pieces.append(match)
        start = end
    return pieces


def format_vocab(vocab: WordPieceVocab) -> str:
    for piece in vocab.pieces:
        if "\n" in piece:
            raise ValueError(f"piece contains a newline: {piece!r}")
    return "\n".join(vocab.pieces) + "\n"


def write_vocab(vocab: WordPieceVocab, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_vocab(vocab))


def read_vocab(path: str | Path, size_cap: int | None = None) -> WordPieceVocab:
    """Read a one-piece-per-line vocabulary; line number is the piece id."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"vocabulary file not found: {path}")
    pieces = tuple(path.read_text(encoding="utf-8").splitlines())
    if not pieces:
        raise FormatError(f"{path}: empty vocabulary file")
    try:
        return WordPieceVocab(pieces=pieces, size_cap=size_cap if size_cap else len(pieces))
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
