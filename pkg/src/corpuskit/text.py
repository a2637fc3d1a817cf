"""Text cleaning and the two baseline tokenizers (whitespace, character).

Cleaning contract: output is NFC-normalized, contains no control or format
characters (ZWJ/ZWNJ are kept because Ethiopic- and Arabic-script text can
depend on them), has whitespace runs collapsed to single ASCII spaces, and
carries no leading or trailing whitespace.  Cleaning is idempotent.
"""

from __future__ import annotations

import re
import unicodedata

# U+200C ZERO WIDTH NON-JOINER, U+200D ZERO WIDTH JOINER
_PRESERVED_FORMAT_CHARS = frozenset({"‌", "‍"})

_WHITESPACE_RUN = re.compile(r"\s+")

#: Symbol standing in for the space character in character tokenization.
SPACE_SYMBOL = "␣"  # ␣ OPEN BOX


def _keep(ch: str) -> bool:
    if ch in _PRESERVED_FORMAT_CHARS:
        return True
    if ch.isspace():
        # whitespace controls (\t, \n, ...) collapse instead of vanishing
        return True
    return unicodedata.category(ch) not in ("Cc", "Cf")


def clean_text(raw: str) -> str:
    """Clean one line of raw UTF-8 text.

    Control/format characters are removed before NFC normalization so that
    deleting them cannot leave a non-normalized combining sequence behind;
    whitespace collapsing runs last.
    """
    kept = "".join(ch for ch in raw if _keep(ch))
    normalized = unicodedata.normalize("NFC", kept)
    return _WHITESPACE_RUN.sub(" ", normalized).strip()


def whitespace_tokenize(sentence: str) -> list[str]:
    """Split cleaned text into maximal non-whitespace runs."""
    return sentence.split()


def char_tokenize(sentence: str) -> list[str]:
    """Split cleaned text into Unicode scalar values.

    The ASCII space (the only whitespace cleaned text can contain) is
    rendered as :data:`SPACE_SYMBOL` so downstream consumers see an explicit
    symbol rather than a separator.
    """
    return [SPACE_SYMBOL if ch == " " else ch for ch in sentence]
