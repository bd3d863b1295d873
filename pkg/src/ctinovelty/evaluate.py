"""Precision/recall/F1, threshold sweeps and the CVE-identifier baseline."""
from __future__ import annotations

import csv
import io
import re
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError
from .ingest import ANOMALOUS, NEGATIVE, NORMAL, POSITIVE, Document

__all__ = [
    "Confusion",
    "PrPoint",
    "metrics",
    "confusion_from",
    "sweep",
    "pick_threshold",
    "extract_cve_ids",
    "cve_baseline",
    "report",
    "curve_to_csv",
]

_CVE_RE = re.compile(r"CVE-[0-9]{4}-[0-9]{4,}", re.IGNORECASE)


@dataclass(frozen=True)
class Confusion:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class PrPoint:
    threshold: float
    precision: float
    recall: float
    f1: float


def _ratio(num, den):
    return num / den if den else 0.0


def f1_score(precision: float, recall: float) -> float:
    return _ratio(2.0 * precision * recall, precision + recall)


def metrics(c: Confusion) -> tuple[float, float, float]:
    """(precision, recall, f1), each 0 where its denominator is 0."""
    p = _ratio(c.tp, c.tp + c.fp)
    r = _ratio(c.tp, c.tp + c.fn)
    return p, r, f1_score(p, r)


def confusion_from(verdicts: Iterable[tuple[Document, str]]) -> Confusion:
    """Tally labelled documents against verdicts; "normal" means predicted threat-relevant."""
    tp = fp = fn = tn = 0
    for doc, verdict in verdicts:
        if doc.label not in (POSITIVE, NEGATIVE):
            raise DataError(f"document {doc.id!r} has no label")
        if verdict not in (NORMAL, ANOMALOUS):
            raise ValueError(f"unknown verdict {verdict!r} for {doc.id!r}")
        positive = doc.label == POSITIVE
        if verdict == NORMAL:
            tp, fp = tp + positive, fp + (not positive)
        else:
            fn, tn = fn + positive, tn + (not positive)
    return Confusion(tp, fp, fn, tn)


def sweep(scored: Sequence[tuple[str, float]]) -> list[PrPoint]:
    """Precision/recall at every observed score (and 0) used as threshold.

    A document counts as normal when its score is <= the threshold. Points
    are returned in increasing threshold order.
    """
    labels = np.array([lab == POSITIVE for lab, _ in scored], dtype=bool)
    scores = np.array([s for _, s in scored], dtype=np.float64)
    n_pos = int(labels.sum())
    if n_pos == 0:
        raise DataError("sweep needs at least one positive document")

    thresholds = np.unique(np.append(scores, 0.0))
    order = np.argsort(scores, kind="stable")
    sorted_scores = scores[order]
    cum_pos = np.concatenate([[0], np.cumsum(labels[order])])
    # number of documents with score <= tau
    n_normal = np.searchsorted(sorted_scores, thresholds, side="right")
    points = []
    for tau, k in zip(thresholds.tolist(), n_normal.tolist()):
        tp = int(cum_pos[k])
        fp = k - tp
        p, r, f = metrics(Confusion(tp, fp, n_pos - tp, len(scores) - n_pos - fp))
        points.append(PrPoint(tau, p, r, f))
    return points


def pick_threshold(curve: Sequence[PrPoint]) -> float:
    """Threshold of the best-F1 point, the smallest one on ties."""
    if not curve:
        raise ValueError("empty PR curve")
    best = max(curve, key=lambda pt: (pt.f1, -pt.threshold))
    return best.threshold


def extract_cve_ids(text: str) -> list[str]:
    """CVE identifiers in raw text, uppercased, deduplicated, in order of appearance."""
    seen = {}
    for m in _CVE_RE.finditer(text):
        seen.setdefault(m.group(0).upper(), None)
    return list(seen)


def cve_baseline(docs: Sequence[Document]) -> Confusion:
    """Confusion of the rule "threat-relevant iff the text cites a CVE id"."""
    return confusion_from((d, NORMAL if extract_cve_ids(d.text) else ANOMALOUS) for d in docs)


def report(c: Confusion) -> dict:
    p, r, f = metrics(c)
    return {"precision": p, "recall": r, "f1": f, "confusion": asdict(c)}


def curve_to_csv(curve: Sequence[PrPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["threshold", "precision", "recall", "f1"])
    for pt in curve:
        w.writerow([repr(pt.threshold), repr(pt.precision), repr(pt.recall), repr(pt.f1)])
    return buf.getvalue()
