"""Seeded synthetic corpora for tests, demos and reproducible CLI runs."""
from __future__ import annotations

import datetime as dt
import string

import numpy as np

from .ingest import NEGATIVE, POSITIVE, CveEntry, Document
from .textprep import load_stopwords

__all__ = ["pseudo_words", "separable_corpus", "cve_corpus", "baseline_corpus"]

_LETTERS = np.array(list(string.ascii_lowercase))


def pseudo_words(rng: np.random.Generator, n: int, length: int = 8, exclude=()) -> list[str]:
    """`n` distinct random lowercase words that are neither stopwords nor in `exclude`."""
    stop = load_stopwords()
    banned = set(exclude)
    words = []
    while len(words) < n:
        w = "".join(rng.choice(_LETTERS, size=length))
        if w in banned or w in stop:
            continue
        banned.add(w)
        words.append(w)
    return words


def _text(rng, vocab, lo, hi):
    return " ".join(rng.choice(vocab, size=int(rng.integers(lo, hi + 1))))


def cve_corpus(rng, vocab, n, year=2017, doc_len=(8, 16), start_seq=1000) -> list[CveEntry]:
    """`n` CVE entries with descriptions drawn from `vocab`, published in `year`."""
    base = dt.date(year, 1, 1)
    return [
        CveEntry(
            f"CVE-{year}-{start_seq + i:04d}",
            _text(rng, vocab, *doc_len),
            base + dt.timedelta(days=int(rng.integers(0, 365))),
        )
        for i in range(n)
    ]


def separable_corpus(
    seed: int = 0,
    n_train: int = 100,
    n_pos: int = 200,
    n_neg: int = 200,
    vocab_size: int = 50,
    doc_len: tuple[int, int] = (8, 16),
):
    """Threat/non-threat corpora drawn from two disjoint vocabularies.

    Returns ``(training CVE entries, labelled documents)``; the labelled
    documents are shuffled.
    """
    rng = np.random.default_rng(seed)
    threat = pseudo_words(rng, vocab_size)
    other = pseudo_words(rng, vocab_size, exclude=threat)
    train = cve_corpus(rng, threat, n_train, doc_len=doc_len)
    docs = [Document(f"pos-{i:04d}", _text(rng, threat, *doc_len), POSITIVE) for i in range(n_pos)]
    docs += [Document(f"neg-{i:04d}", _text(rng, other, *doc_len), NEGATIVE) for i in range(n_neg)]
    order = rng.permutation(len(docs))
    return train, [docs[i] for i in order]


def baseline_corpus(seed: int = 0, pos_with_id=53, neg_with_id=8, pos_total=232, neg_total=300):
    """Labelled documents where only some cite a CVE identifier.

    With the defaults, the CVE-id rule yields tp=53, fp=8, fn=179.
    """
    rng = np.random.default_rng(seed)
    words = pseudo_words(rng, 40)
    docs = []

    def cited():
        return f"CVE-{int(rng.integers(2015, 2020))}-{int(rng.integers(1000, 30000))}"

    for i in range(pos_total):
        text = _text(rng, words, 5, 12)
        if i < pos_with_id:
            text = f"{text} ({cited()})"
        docs.append(Document(f"p{i:04d}", text, POSITIVE))
    for i in range(neg_total):
        text = _text(rng, words, 5, 12)
        if i < neg_with_id:
            text = f"{cited()} {text}"
        docs.append(Document(f"n{i:04d}", text, NEGATIVE))
    order = rng.permutation(len(docs))
    return [docs[i] for i in order]
