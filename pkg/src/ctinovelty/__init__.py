"""Novelty detection of cyber-threat-relevant short texts against CVE descriptions.

Train a centroid or one-class SVM model on CVE descriptions (positives only),
score incoming documents by how far they sit from that class, rank candidate
documents by relevance weight, and link relevant documents to their most
similar CVE entries.
"""
from .centroid import CentroidModel, classify, fit_centroid, novelty_score
from .errors import DataError, FitError, FormatError, IngestError
from .evaluate import (
    Confusion,
    PrPoint,
    confusion_from,
    cve_baseline,
    extract_cve_ids,
    metrics,
    pick_threshold,
    sweep,
)
from .ingest import CveEntry, Document, filter_by_date, load_cve_feed, load_jsonl, write_results
from .linker import LinkIndex, LinkResult, build_link_index, link
from .models import load_model, save_model
from .ocsvm import KernelSpec, OcsvmModel, decision_value, kernel_eval, train_ocsvm
from .relevance import doc_weight, term_weight, top_k
from .textprep import StopwordSet, load_stopwords, normalize
from .vectorspace import SparseVector, Vocabulary, cosine, embed, fit

__version__ = "0.1.0"
