"""Centroid novelty classifier.

The model is the mean TF-IDF vector of the positive (threat) class. A
document's novelty score is ``1 - cosine(doc, centroid)``; it is anomalous
when the score is strictly larger than the threshold.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FitError, FormatError
from .ingest import ANOMALOUS, NORMAL
from .vectorspace import SparseVector, Vocabulary

__all__ = ["CentroidModel", "fit_centroid", "novelty_score", "classify", "verdict_for"]


def verdict_for(score: float, threshold: float) -> str:
    # a tie counts as normal: only a strictly larger distance is anomalous
    return NORMAL if score <= threshold else ANOMALOUS


def fit_centroid(vectors: Sequence[SparseVector], size: int | None = None) -> np.ndarray:
    """Component-wise mean of sparse vectors as a dense array of length `size`."""
    if len(vectors) == 0:
        raise FitError("cannot fit a centroid on an empty set of vectors")
    if size is None:
        size = max((int(v.indices[-1]) + 1 for v in vectors if v.nnz), default=0)
    total = np.zeros(size)
    for v in vectors:
        np.add.at(total, v.indices, v.values)
    return total / len(vectors)


@dataclass(frozen=True, eq=False)
class CentroidModel:
    centroid: np.ndarray
    threshold: float
    vocab: Vocabulary

    def __post_init__(self):
        c = np.asarray(self.centroid, dtype=np.float64)
        if c.ndim != 1 or c.size != len(self.vocab):
            raise FormatError(
                f"centroid length {c.size} does not match vocabulary size {len(self.vocab)}"
            )
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold}")
        c.flags.writeable = False
        object.__setattr__(self, "centroid", c)
        object.__setattr__(self, "_centroid_norm", float(np.sqrt(np.dot(c, c))))

    @classmethod
    def fit(cls, vectors: Sequence[SparseVector], vocab: Vocabulary, threshold: float = 0.5):
        return cls(fit_centroid(vectors, len(vocab)), threshold, vocab)

    def with_threshold(self, threshold: float) -> "CentroidModel":
        return CentroidModel(self.centroid, threshold, self.vocab)

    def score(self, doc: SparseVector) -> float:
        return novelty_score(doc, self)

    def predict(self, doc: SparseVector) -> str:
        return classify(doc, self)

    def to_json(self) -> dict:
        return {
            "kind": "centroid",
            "threshold": float(self.threshold),
            "vocabulary": self.vocab.to_json(),
            "centroid": self.centroid.tolist(),
        }

    @classmethod
    def from_json(cls, obj) -> "CentroidModel":
        try:
            vocab = Vocabulary.from_json(obj["vocabulary"])
            return cls(np.array(obj["centroid"], dtype=np.float64), float(obj["threshold"]), vocab)
        except KeyError as exc:
            raise FormatError(f"centroid model: missing field {exc.args[0]}") from None


def novelty_score(doc: SparseVector, model: CentroidModel) -> float:
    """``1 - cosine(doc, centroid)``; a zero document scores 1."""
    doc_norm = doc.norm()
    if doc_norm == 0.0 or model._centroid_norm == 0.0:
        return 1.0
    cos = float(np.dot(doc.values, model.centroid[doc.indices])) / (doc_norm * model._centroid_norm)
    return 1.0 - min(1.0, max(-1.0, cos))


def classify(doc: SparseVector, model: CentroidModel) -> str:
    return verdict_for(novelty_score(doc, model), model.threshold)
