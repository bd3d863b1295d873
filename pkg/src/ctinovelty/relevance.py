"""Relevance-weight ranking of candidate documents against the training vocabulary.

A term's weight grows with the number of training documents containing it,
``rw(t) = ln(1 + n_t / (N - n_t + 1))``, and a document's weight is the
occurrence-weighted sum over its terms.
"""
from __future__ import annotations

import math
from collections import Counter
from typing import Callable, Sequence

from .ingest import Document
from .vectorspace import Vocabulary

__all__ = ["term_weight", "doc_weight", "relevance_table", "top_k"]


def term_weight(term: str, vocab: Vocabulary) -> float:
    n_t = vocab.df(term)
    return math.log1p(n_t / (vocab.corpus_size - n_t + 1))


def relevance_table(vocab: Vocabulary) -> dict[str, float]:
    return {t: term_weight(t, vocab) for t in vocab.terms}


def doc_weight(doc: Sequence[str], vocab: Vocabulary) -> float:
    return math.fsum(f * term_weight(t, vocab) for t, f in sorted(Counter(doc).items()))


def top_k(
    docs: Sequence[Document],
    vocab: Vocabulary,
    k: int,
    tokenize: Callable[[str], list[str]],
) -> list[tuple[Document, float]]:
    """The `k` documents with the highest relevance weight, best first.

    Equal weights are ordered by document id.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    scored = [(doc, doc_weight(tokenize(doc.text), vocab)) for doc in docs]
    scored.sort(key=lambda pair: (-pair[1], pair[0].id))
    return scored[:k]
