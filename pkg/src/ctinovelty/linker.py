"""Suggest CVE identifiers for a document by TF-IDF cosine retrieval."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import FitError
from .ingest import CveEntry, Document
from .vectorspace import SparseVector, Vocabulary, embed, fit, stack

__all__ = ["LinkIndex", "LinkResult", "build_link_index", "link", "DEFAULT_K"]

DEFAULT_K = 10


@dataclass(frozen=True)
class LinkResult:
    doc_id: str
    matches: list[tuple[str, float]]

    def to_json(self) -> dict:
        return {"id": self.doc_id, "matches": [{"cve_id": c, "score": s} for c, s in self.matches]}


@dataclass(frozen=True, eq=False)
class LinkIndex:
    entries: tuple[CveEntry, ...]
    vocab: Vocabulary
    vectors: tuple[SparseVector, ...]
    tokenize: Callable[[str], list[str]]

    def __post_init__(self):
        matrix = stack(self.vectors, len(self.vocab))
        norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel())
        object.__setattr__(self, "_matrix", matrix)
        object.__setattr__(self, "_norms", norms)
        # position of each entry in cve_id order, the tie-break for equal scores
        rank = np.empty(len(self.entries), dtype=np.int64)
        rank[np.argsort([e.cve_id for e in self.entries], kind="stable")] = np.arange(len(self.entries))
        object.__setattr__(self, "_id_rank", rank)

    def __len__(self):
        return len(self.entries)

    @property
    def empty_entries(self) -> list[str]:
        """CVE ids whose description normalizes to nothing (zero vectors)."""
        return [e.cve_id for e, v in zip(self.entries, self.vectors) if v.nnz == 0]

    def similarities(self, query: SparseVector) -> np.ndarray:
        qn = query.norm()
        sims = np.zeros(len(self.entries))
        if qn == 0.0:
            return sims
        dots = np.asarray(self._matrix @ query.to_dense(len(self.vocab))).ravel()
        ok = self._norms > 0
        sims[ok] = dots[ok] / (self._norms[ok] * qn)
        return np.clip(sims, 0.0, 1.0)


def build_link_index(entries: Sequence[CveEntry], tokenize: Callable[[str], list[str]]) -> LinkIndex:
    """Fit a vocabulary on the CVE descriptions and embed every entry."""
    if len(entries) == 0:
        raise FitError("cannot build a link index from an empty CVE corpus")
    tokens = [tokenize(e.description) for e in entries]
    vocab = fit(tokens)
    vectors = tuple(embed(t, vocab) for t in tokens)
    return LinkIndex(tuple(entries), vocab, vectors, tokenize)


def link(doc: Document, index: LinkIndex, k: int = DEFAULT_K) -> LinkResult:
    """Top-`k` CVE entries by cosine similarity; ties go to the smaller cve_id."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sims = index.similarities(embed(index.tokenize(doc.text), index.vocab))
    order = np.lexsort((index._id_rank, -sims))[:k]
    return LinkResult(doc.id, [(index.entries[i].cve_id, float(sims[i])) for i in order])
