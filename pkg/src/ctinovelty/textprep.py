"""Text normalization for tweets and CVE descriptions.

Raw text is reduced to a list of lowercase alphabetic terms: hyperlinks and
mentions are removed, hashtag markers dropped, everything that is not a
letter becomes whitespace, and stopwords are filtered out. No stemming or
lemmatization is applied.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import FormatError

__all__ = ["StopwordSet", "load_stopwords", "normalize", "bundled_stopwords_text"]

_URL_PREFIXES = ("http://", "https://", "www.")
_DEFAULT_RESOURCE = "stopwords_en.txt"


@dataclass(frozen=True)
class StopwordSet:
    words: frozenset
    source: str = "bundled-default"

    def __contains__(self, term):
        return term in self.words

    def __len__(self):
        return len(self.words)


def bundled_stopwords_text() -> str:
    """Return the bundled English stopword resource verbatim."""
    return resources.files("ctinovelty").joinpath("data", _DEFAULT_RESOURCE).read_text("utf-8")


def _parse_stopwords(text: str, source: str) -> StopwordSet:
    words = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        term = line.strip()
        if not term:
            continue
        if any(ch.isspace() for ch in term):
            raise FormatError(f"{source}: line {lineno}: stopword contains whitespace: {term!r}")
        words.add(term.lower())
    return StopwordSet(frozenset(words), source)


def load_stopwords(path: str | Path | None = None) -> StopwordSet:
    """Load a one-term-per-line stopword file, or the bundled list if `path` is None.

    Entries are lowercased and deduplicated. Blank lines are skipped; a line
    holding more than one term raises :class:`FormatError`.
    """
    if path is None:
        return _parse_stopwords(bundled_stopwords_text(), "bundled-default")
    text = Path(path).read_text(encoding="utf-8")
    return _parse_stopwords(text, str(path))


def _is_url(token: str) -> bool:
    return token.lower().startswith(_URL_PREFIXES)


def normalize(text: str, stopwords: StopwordSet, keep_hashtag_words: bool = True) -> list[str]:
    """Turn raw text into a list of lowercase alphabetic, non-stopword terms.

    With ``keep_hashtag_words=False`` a hashtag token is dropped entirely
    instead of keeping the word after the ``#``.
    """
    kept = []
    for token in text.split():
        if _is_url(token) or token.startswith("@"):
            continue
        if token.startswith("#"):
            if not keep_hashtag_words:
                continue
            token = token.lstrip("#")
        kept.append(token)

    lowered = " ".join(kept).lower()
    letters_only = "".join(ch if ch.isalpha() else " " for ch in lowered)
    return [t for t in letters_only.split() if t not in stopwords]
