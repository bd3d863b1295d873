"""TF-IDF vocabulary fitting, sparse embeddings and cosine similarity.

Weights follow ``f(t, d) * ln(N / n_t)`` with no smoothing and no length
normalization; cosine takes care of document length.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import FitError, FormatError

__all__ = ["Vocabulary", "SparseVector", "fit", "embed", "cosine", "stack"]


class SparseVector:
    """Sorted ``(index, weight)`` pairs with strictly increasing indices and nonzero weights."""

    __slots__ = ("indices", "values")

    def __init__(self, indices=(), values=()):
        idx = np.asarray(indices, dtype=np.int64)
        val = np.asarray(values, dtype=np.float64)
        if idx.shape != val.shape or idx.ndim != 1:
            raise ValueError("indices and values must be 1-D sequences of equal length")
        if idx.size:
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing")
            if not np.all(np.isfinite(val)):
                raise ValueError("weights must be finite")
            keep = val != 0.0
            idx, val = idx[keep], val[keep]
        idx.flags.writeable = False
        val.flags.writeable = False
        self.indices = idx
        self.values = val

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "SparseVector":
        pairs = sorted(pairs)
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    @classmethod
    def from_dense(cls, dense) -> "SparseVector":
        dense = np.asarray(dense, dtype=np.float64)
        nz = np.flatnonzero(dense)
        return cls(nz, dense[nz])

    def pairs(self) -> list[tuple[int, float]]:
        return list(zip(self.indices.tolist(), self.values.tolist()))

    def to_dense(self, size: int) -> np.ndarray:
        out = np.zeros(size)
        out[self.indices] = self.values
        return out

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def dot(self, other: "SparseVector") -> float:
        _, ia, ib = np.intersect1d(self.indices, other.indices, assume_unique=True, return_indices=True)
        return float(np.dot(self.values[ia], other.values[ib]))

    def scale(self, c: float) -> "SparseVector":
        return SparseVector(self.indices, self.values * c)

    def __len__(self):
        return self.nnz

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return np.array_equal(self.indices, other.indices) and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"SparseVector({self.pairs()!r})"


@dataclass(frozen=True, eq=False)
class Vocabulary:
    """Term -> index mapping with document frequencies over a corpus of size N."""

    terms: tuple[str, ...]
    doc_freq: np.ndarray
    corpus_size: int

    def __post_init__(self):
        if self.corpus_size < 1:
            raise FormatError("vocabulary corpus_size must be >= 1")
        if len(self.terms) != len(self.doc_freq):
            raise FormatError("vocabulary terms and doc_freq differ in length")
        df = np.asarray(self.doc_freq, dtype=np.int64)
        if df.size and (df.min() < 1 or df.max() > self.corpus_size):
            raise FormatError("document frequencies must lie in [1, corpus_size]")
        df.flags.writeable = False
        object.__setattr__(self, "doc_freq", df)
        object.__setattr__(self, "term_index", {t: i for i, t in enumerate(self.terms)})
        if len(self.term_index) != len(self.terms):
            raise FormatError("duplicate terms in vocabulary")
        with np.errstate(divide="ignore"):
            idf = np.log(self.corpus_size / df) if df.size else np.zeros(0)
        idf.flags.writeable = False
        object.__setattr__(self, "idf", idf)

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self.term_index

    def df(self, term: str) -> int:
        """Document frequency of `term`, 0 when out of vocabulary."""
        i = self.term_index.get(term)
        return 0 if i is None else int(self.doc_freq[i])

    def to_json(self) -> dict:
        return {
            "corpus_size": int(self.corpus_size),
            "terms": [
                {"term": t, "index": i, "doc_freq": int(n)}
                for i, (t, n) in enumerate(zip(self.terms, self.doc_freq))
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Vocabulary":
        try:
            rows = sorted(obj["terms"], key=lambda r: r["index"])
            if [r["index"] for r in rows] != list(range(len(rows))):
                raise FormatError("vocabulary indices must be 0..V-1 without gaps")
            return cls(
                tuple(r["term"] for r in rows),
                np.array([r["doc_freq"] for r in rows], dtype=np.int64),
                int(obj["corpus_size"]),
            )
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed vocabulary: {exc}") from None


def fit(corpus: Sequence[Sequence[str]]) -> Vocabulary:
    """Fit a vocabulary on tokenized documents; terms are indexed lexicographically."""
    if len(corpus) == 0:
        raise FitError("cannot fit a vocabulary on an empty corpus")
    df = Counter()
    for doc in corpus:
        df.update(set(doc))
    terms = tuple(sorted(df))
    return Vocabulary(terms, np.array([df[t] for t in terms], dtype=np.int64), len(corpus))


def embed(doc: Sequence[str], vocab: Vocabulary) -> SparseVector:
    """TF-IDF embedding of a token list; OOV terms and terms in every document vanish."""
    counts = Counter(t for t in doc if t in vocab.term_index)
    if not counts:
        return SparseVector()
    idx = np.array(sorted(vocab.term_index[t] for t in counts), dtype=np.int64)
    tf = np.array([counts[vocab.terms[i]] for i in idx], dtype=np.float64)
    return SparseVector(idx, tf * vocab.idf[idx])


def cosine(a: SparseVector, b: SparseVector) -> float:
    """Cosine similarity; 0 when either vector has zero norm."""
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, max(-1.0, a.dot(b) / (na * nb)))


def stack(vectors: Sequence[SparseVector], size: int) -> sp.csr_matrix:
    """Rows of a CSR matrix with `size` columns."""
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([v.nnz for v in vectors])
    if vectors:
        indices = np.concatenate([v.indices for v in vectors])
        data = np.concatenate([v.values for v in vectors])
    else:
        indices, data = np.zeros(0, dtype=np.int64), np.zeros(0)
    return sp.csr_matrix((data, indices, indptr), shape=(len(vectors), size))
