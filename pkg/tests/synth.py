"""Synthetic language harness for the test suite.

Each synthetic language owns a disjoint character inventory and a seeded
character-bigram Markov generator:

* Inventory: a contiguous slice of ``INVENTORY_SIZE`` codepoints.  Indigenous
  languages draw from the CJK unified ideograph block (NFC-stable letters,
  no whitespace, one codepoint each); "foreign" languages draw from ASCII
  lowercase letters so they look script-distinct from everything else.
* Generator: a per-language transition table ``weights[prev][next]`` with
  integer weights in [1, 9] drawn from the pipeline's own portable RNG,
  stream ``synthlang:<index>``; the first character of a word follows the
  uniform start row.  Words are 2-6 characters, sentences 3-7 words.

Everything is fully determined by (language index, master seed).
"""

from __future__ import annotations

from corpuskit.corpus import Corpus, LanguageTag, Sentence
from corpuskit.rng import Xoshiro256StarStar, derive_seed

INVENTORY_SIZE = 8
CJK_BASE = 0x4E00
ASCII_BASE = ord("a")


def synth_tag(index: int) -> LanguageTag:
    if not 0 <= index < 676:
        raise ValueError("index out of range for synthetic tags")
    return LanguageTag(f"z{chr(97 + index // 26)}{chr(97 + index % 26)}")


def inventory(index: int, ascii_block: bool = False) -> str:
    base = ASCII_BASE if ascii_block else CJK_BASE
    start = base + index * INVENTORY_SIZE
    return "".join(chr(start + k) for k in range(INVENTORY_SIZE))


class BigramGenerator:
    """Seeded character-bigram sentence generator over one inventory."""

    def __init__(self, index: int, master_seed: int, ascii_block: bool = False):
        self.chars = inventory(index, ascii_block=ascii_block)
        self.rng = Xoshiro256StarStar(derive_seed(master_seed, f"synthlang:{index}"))
        size = len(self.chars)
        self.weights = [
            [1 + self.rng.randbelow(9) for _ in range(size)] for _ in range(size)
        ]
        self.totals = [sum(row) for row in self.weights]

    def _next_char(self, prev: int) -> int:
        draw = self.rng.randbelow(self.totals[prev])
        acc = 0
        for nxt, weight in enumerate(self.weights[prev]):
            acc += weight
            if draw < acc:
                return nxt
        return len(self.chars) - 1

    def word(self) -> str:
        length = 2 + self.rng.randbelow(5)
        current = self.rng.randbelow(len(self.chars))
        out = [self.chars[current]]
        for _ in range(length - 1):
            current = self._next_char(current)
            out.append(self.chars[current])
        return "".join(out)

    def sentence(self) -> str:
        return " ".join(self.word() for _ in range(3 + self.rng.randbelow(5)))

    def sentences(self, count: int) -> list[str]:
        return [self.sentence() for _ in range(count)]


def synth_corpus(
    num_languages: int,
    sentences_per_language: int,
    master_seed: int,
    first_index: int = 0,
    ascii_block: bool = False,
    tags: list[LanguageTag] | None = None,
) -> Corpus:
    sentences = []
    for offset in range(num_languages):
        index = first_index + offset
        tag = tags[offset] if tags else synth_tag(index)
        generator = BigramGenerator(index, master_seed, ascii_block=ascii_block)
        for text in generator.sentences(sentences_per_language):
            sentences.append(Sentence(text=text, lang=tag, source_id=f"synth:{index}"))
    return Corpus.from_sentences(sentences)
