"""Domain types and manifest-driven corpus ingestion.

A corpus manifest is UTF-8, one record per line, tab-separated:

    path<TAB>lang<TAB>domain<TAB>script

``#``-prefixed lines are comments; blank lines are skipped.  Relative paths
resolve against the manifest's directory.  Referenced files are UTF-8 text,
one sentence per line; every line is cleaned, empty-after-cleaning lines are
dropped, and exact duplicate (lang, text) pairs are dropped keeping the
first occurrence in manifest order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import FormatError, InvalidTag, ManifestParse, MissingFile
from .text import clean_text

log = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class LanguageTag:
    """ISO 639-3 code: exactly three lowercase ASCII letters."""

    code: str

    def __post_init__(self):
        normalized = self.code.strip().lower()
        if len(normalized) != 3 or not all("a" <= c <= "z" for c in normalized):
            raise InvalidTag(f"not a three-letter ISO 639-3 code: {self.code!r}")
        object.__setattr__(self, "code", normalized)

    def __str__(self) -> str:
        return self.code


def parse_language_tag(raw: str) -> LanguageTag:
    return LanguageTag(raw)


class DomainTag(Enum):
    RELIGIOUS = "religious"
    NEWS = "news"
    GOVERNMENT = "government"
    HEALTH = "health"
    EXISTING = "existing"
    WIKI = "wiki"
    OTHER = "other"


def parse_domain_tag(raw: str) -> DomainTag:
    """Unknown domain values map to OTHER with a warning."""
    value = raw.strip().lower()
    try:
        return DomainTag(value)
    except ValueError:
        log.warning("unknown domain %r, using 'other'", raw)
        return DomainTag.OTHER


class ScriptTag(Enum):
    ARABIC = "arabic"
    COPTIC = "coptic"
    ETHIOPIC = "ethiopic"
    LATIN = "latin"
    VAI = "vai"
    OTHER = "other"


def parse_script_tag(raw: str) -> ScriptTag:
    value = raw.strip().lower()
    try:
        return ScriptTag(value)
    except ValueError:
        valid = ", ".join(s.value for s in ScriptTag)
        raise ManifestParse(f"unknown script {raw!r} (expected one of: {valid})") from None


@dataclass(frozen=True)
class Sentence:
    """One cleaned sentence with its provenance."""

    text: str
    lang: LanguageTag
    domain: DomainTag = DomainTag.OTHER
    source_id: str = ""

    def __post_init__(self):
        if not self.text:
            raise ValueError("sentence text is empty")
        if clean_text(self.text) != self.text:
            raise ValueError(f"sentence text is not in cleaned form: {self.text!r}")


@dataclass(frozen=True)
class Corpus:
    """Sentences grouped by language, immutable after construction."""

    by_lang: Mapping[LanguageTag, tuple[Sentence, ...]] = field(default_factory=dict)

    @classmethod
    def from_sentences(cls, sentences: Iterable[Sentence]) -> "Corpus":
        grouped: dict[LanguageTag, list[Sentence]] = {}
        for sent in sentences:
            grouped.setdefault(sent.lang, []).append(sent)
        return cls({lang: tuple(sents) for lang, sents in grouped.items()})

    @property
    def languages(self) -> tuple[LanguageTag, ...]:
        return tuple(sorted(self.by_lang))

    def sentences(self, lang: LanguageTag) -> tuple[Sentence, ...]:
        return self.by_lang.get(lang, ())

    def texts(self, lang: LanguageTag) -> list[str]:
        return [s.text for s in self.sentences(lang)]

    def count(self, lang: LanguageTag) -> int:
        return len(self.by_lang.get(lang, ()))

    @property
    def total_count(self) -> int:
        return sum(len(sents) for sents in self.by_lang.values())

    def __contains__(self, lang: LanguageTag) -> bool:
        return lang in self.by_lang

    def __iter__(self) -> Iterator[tuple[LanguageTag, tuple[Sentence, ...]]]:
        for lang in self.languages:
            yield lang, self.by_lang[lang]


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    lang: LanguageTag
    domain: DomainTag
    script: ScriptTag
    source_id: str


def parse_manifest(manifest_path: str | Path) -> list[ManifestEntry]:
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise MissingFile(f"manifest not found: {manifest_path}")
    base = manifest_path.parent
    entries = []
    with open(manifest_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ManifestParse(
                    f"{manifest_path}:{lineno}: expected 4 tab-separated fields, got {len(fields)}"
                )
            raw_path, raw_lang, raw_domain, raw_script = fields
            try:
                script = parse_script_tag(raw_script)
            except ManifestParse as exc:
                raise ManifestParse(f"{manifest_path}:{lineno}: {exc}") from None
            path = Path(raw_path)
            if not path.is_absolute():
                path = base / path
            entries.append(
                ManifestEntry(
                    path=path,
                    lang=parse_language_tag(raw_lang),
                    domain=parse_domain_tag(raw_domain),
                    script=script,
                    source_id=raw_path,
                )
            )
    return entries


def _load_entry(entry: ManifestEntry) -> list[Sentence]:
    sentences = []
    with open(entry.path, encoding="utf-8") as fh:
        for line in fh:
            text = clean_text(line)
            if not text:
                continue
            sentences.append(
                Sentence(text=text, lang=entry.lang, domain=entry.domain, source_id=entry.source_id)
            )
    return sentences


def load_corpus(manifest_path: str | Path, workers: int = 1) -> Corpus:
    """Ingest every file in the manifest into a deduplicated corpus.

    Files may be read in parallel; results are merged in manifest order so
    the corpus is identical for any worker count.
    """
    entries = parse_manifest(manifest_path)
    for entry in entries:
        if not entry.path.is_file():
            raise MissingFile(f"corpus file not found: {entry.path}")

    if workers > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_file = list(pool.map(_load_entry, entries))
    else:
        per_file = [_load_entry(entry) for entry in entries]

    seen: set[tuple[LanguageTag, str]] = set()
    merged = []
    for sentences in per_file:
        for sent in sentences:
            key = (sent.lang, sent.text)
            if key in seen:
                continue
            seen.add(key)
            merged.append(sent)
    return Corpus.from_sentences(merged)


def read_labeled_sentences(path: str | Path) -> list[tuple[LanguageTag, str]]:
    """Read a ``lang<TAB>text`` file into (tag, cleaned text) pairs.

    Empty-after-cleaning lines are dropped; duplicates are kept (splits and
    training count every line).
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"labeled-sentence file not found: {path}")
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            lang_field, sep, text_field = line.partition("\t")
            if not sep:
                raise FormatError(f"{path}:{lineno}: expected lang<TAB>text")
            text = clean_text(text_field)
            if not text:
                continue
            pairs.append((parse_language_tag(lang_field), text))
    return pairs


def corpus_from_labeled(path: str | Path) -> Corpus:
    """Build a corpus from a ``lang<TAB>text`` file, deduplicating pairs."""
    seen: set[tuple[LanguageTag, str]] = set()
    sentences = []
    for lang, text in read_labeled_sentences(path):
        key = (lang, text)
        if key in seen:
            continue
        seen.add(key)
        sentences.append(Sentence(text=text, lang=lang, source_id=str(path)))
    return Corpus.from_sentences(sentences)


def write_labeled_sentences(pairs: Iterable[tuple[LanguageTag, str]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for lang, text in pairs:
            fh.write(f"{lang.code}\t{text}\n")
