"""Deterministic per-language train/dev/test splits.

Per language, a seeded permutation of sentence indices is drawn (xoshiro
stream seeded from ``derive_seed(seed, "split:" + tag)``); the first
``train_n`` indices go to train, the next ``dev_n`` to dev, the next
``test_n`` to test.  Identical (corpus, spec) inputs give identical
assignments on every platform.

File format, languages in lexicographic tag order::

    lang: hau
    train: 4 0 17 ...
    dev: 9 ...
    test: 2 ...

Indices are zero-based positions into the language's sentence list, written
in draw order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .corpus import Corpus, LanguageTag, parse_language_tag
from .errors import FormatError, InsufficientSentences, MissingFile
from .rng import Xoshiro256StarStar, derive_seed

_MAX_SEED = (1 << 64) - 1


@dataclass(frozen=True)
class SplitSpec:
    train_n: int
    dev_n: int
    test_n: int
    seed: int

    def __post_init__(self):
        if min(self.train_n, self.dev_n, self.test_n) < 0:
            raise ValueError("split sizes must be non-negative")
        if self.train_n + self.dev_n + self.test_n < 1:
            raise ValueError("at least one split must be non-empty")
        if not 0 <= self.seed <= _MAX_SEED:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def total(self) -> int:
        return self.train_n + self.dev_n + self.test_n


@dataclass(frozen=True)
class SplitAssignment:
    """Per-language index lists for train/dev/test."""

    by_lang: Mapping[LanguageTag, tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]

    def train(self, lang: LanguageTag) -> tuple[int, ...]:
        return self.by_lang[lang][0]

    def dev(self, lang: LanguageTag) -> tuple[int, ...]:
        return self.by_lang[lang][1]

    def test(self, lang: LanguageTag) -> tuple[int, ...]:
        return self.by_lang[lang][2]

    @property
    def languages(self) -> tuple[LanguageTag, ...]:
        return tuple(sorted(self.by_lang))


def _scaled_sizes(spec: SplitSpec, have: int) -> tuple[int, int, int]:
    """Proportional-mode sizes: same factor, floor division, >=1 test kept."""
    need = spec.total
    if have >= need:
        return spec.train_n, spec.dev_n, spec.test_n
    train_n = spec.train_n * have // need
    dev_n = spec.dev_n * have // need
    test_n = spec.test_n * have // need
    if spec.test_n >= 1 and test_n == 0:
        test_n = 1
    return train_n, dev_n, test_n


def make_splits(corpus: Corpus, spec: SplitSpec, proportional: bool = False) -> SplitAssignment:
    assignment = {}
    for lang in corpus.languages:
        have = corpus.count(lang)
        if proportional:
            train_n, dev_n, test_n = _scaled_sizes(spec, have)
        else:
            if have < spec.total:
                raise InsufficientSentences(lang, have, spec.total)
            train_n, dev_n, test_n = spec.train_n, spec.dev_n, spec.test_n
        rng = Xoshiro256StarStar(derive_seed(spec.seed, f"split:{lang.code}"))
        perm = rng.permutation(have)
        assignment[lang] = (
            tuple(perm[:train_n]),
            tuple(perm[train_n : train_n + dev_n]),
            tuple(perm[train_n + dev_n : train_n + dev_n + test_n]),
        )
    return SplitAssignment(assignment)


def _format_indices(name: str, indices: tuple[int, ...]) -> str:
    if not indices:
        return f"{name}:"
    return f"{name}: " + " ".join(str(i) for i in indices)


def format_split_assignment(assignment: SplitAssignment) -> str:
    lines = []
    for lang in assignment.languages:
        train, dev, test = assignment.by_lang[lang]
        lines.append(f"lang: {lang.code}")
        lines.append(_format_indices("train", train))
        lines.append(_format_indices("dev", dev))
        lines.append(_format_indices("test", test))
    return "\n".join(lines) + "\n" if lines else ""


def write_split_assignment(assignment: SplitAssignment, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_split_assignment(assignment))


def read_split_assignment(path: str | Path) -> SplitAssignment:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"split file not found: {path}")
    by_lang = {}
    current: LanguageTag | None = None
    sections: dict[str, tuple[int, ...]] = {}

    def flush():
        if current is None:
            return
        missing = {"train", "dev", "test"} - sections.keys()
        if missing:
            raise FormatError(f"{path}: language {current.code!r} is missing {sorted(missing)}")
        by_lang[current] = (sections["train"], sections["dev"], sections["test"])

    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            name, sep, rest = line.partition(":")
            if not sep:
                raise FormatError(f"{path}:{lineno}: expected 'name: values'")
            rest = rest.strip()
            if name == "lang":
                flush()
                current = parse_language_tag(rest)
                sections = {}
            elif name in ("train", "dev", "test"):
                if current is None:
                    raise FormatError(f"{path}:{lineno}: {name!r} before any 'lang:' line")
                try:
                    sections[name] = tuple(int(v) for v in rest.split()) if rest else ()
                except ValueError:
                    raise FormatError(f"{path}:{lineno}: non-integer index") from None
            else:
                raise FormatError(f"{path}:{lineno}: unknown section {name!r}")
    flush()
    return SplitAssignment(by_lang)


def select_pairs(
    corpus: Corpus, assignment: SplitAssignment, section: str
) -> list[tuple[LanguageTag, str]]:
    """Materialize one split section as (lang, text) pairs, language-ordered."""
    index = {"train": 0, "dev": 1, "test": 2}[section]
    pairs = []
    for lang in assignment.languages:
        sents = corpus.sentences(lang)
        for i in assignment.by_lang[lang][index]:
            pairs.append((lang, sents[i].text))
    return pairs
