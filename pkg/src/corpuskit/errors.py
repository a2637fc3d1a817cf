"""Exception types raised across the pipeline.

Class names are the stable, user-facing error identifiers: the CLI prints
``<ClassName>: <message>`` and exits 1, so the names deliberately omit the
conventional ``Error`` suffix.
"""


class PipelineError(Exception):
    """Base class for all pipeline errors."""


class InvalidTag(PipelineError):
    """Language tag is not three ASCII letters."""


class ManifestParse(PipelineError):
    """Manifest record is malformed."""


class MissingFile(PipelineError):
    """A referenced input file does not exist."""


class InsufficientSentences(PipelineError):
    """A language has too few sentences for the requested split sizes."""

    def __init__(self, lang, have: int, need: int):
        self.lang = lang
        self.have = have
        self.need = need
        super().__init__(f"language {lang.code!r} has {have} sentences, split needs {need}")


class LabelMismatch(PipelineError):
    """Filter configuration is incompatible with the model's label set."""


class EmptyCorpus(PipelineError):
    """Operation requires a corpus with at least one sentence."""


class EmptyInput(PipelineError):
    """Training input contains no usable tokens."""


class CapTooSmall(PipelineError):
    """Vocabulary cap cannot hold the mandatory pieces."""


class TooFewLabels(PipelineError):
    """Classifier training needs at least two labels."""


class EmptyLabel(PipelineError):
    """A declared label has no training sentences."""


class EmptyText(PipelineError):
    """Classification input is empty after cleaning."""


class UnknownLabel(PipelineError):
    """A label is outside the model's label set."""


class UnknownLanguage(PipelineError):
    """A language tag is not present in the corpus."""


class LengthMismatch(PipelineError):
    """Paired sequences have different lengths."""


class MalformedTag(PipelineError):
    """A sequence tag does not follow the BIO grammar."""


class EmptyRuns(PipelineError):
    """Run aggregation needs at least one score."""


class EmptyList(PipelineError):
    """Benchmark averaging needs at least one dataset score."""


class FormatError(PipelineError):
    """A serialized artifact (codes, vocab, model, split file) is malformed."""
