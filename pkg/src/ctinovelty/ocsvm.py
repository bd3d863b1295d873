"""One-class SVM (nu formulation) with a two-coordinate descent solver.

Training solves the dual problem::

    min_a  1/2 a^T Q a     s.t.  0 <= a_i <= 1/(nu*l),  sum_i a_i = 1

where ``Q_ij = k(x_i, x_j)``. Each step picks the maximal KKT-violating pair
and moves mass from one coordinate to the other, so the equality constraint
is kept throughout. The decision function is ``f(x) = sum_i a_i k(x_i, x) - rho``;
``f(x) >= 0`` is normal.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import FitError, FormatError
from .ingest import ANOMALOUS, NORMAL
from .vectorspace import SparseVector, Vocabulary, stack

__all__ = [
    "KernelSpec",
    "OcsvmModel",
    "kernel_eval",
    "kernel_rows",
    "train_ocsvm",
    "decision_value",
    "classify",
]

logger = logging.getLogger(__name__)

MAX_PAIR_UPDATES = 100_000
_TAU = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "rbf"
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("linear", "rbf"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf" and not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"rbf gamma must be positive, got {self.gamma}")

    def to_json(self) -> dict:
        if self.kind == "linear":
            return {"kind": "linear"}
        return {"kind": "rbf", "gamma": float(self.gamma)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "KernelSpec":
        try:
            return cls(obj["kind"], float(obj.get("gamma", 1.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed kernel spec: {exc}") from None


def kernel_rows(X: sp.csr_matrix, x: SparseVector, kernel: KernelSpec) -> np.ndarray:
    """``k(X[r], x)`` for every row r of X.

    RBF distances are taken from the explicit difference ``X[r] - x`` rather
    than from norms, so ``k(a, a)`` is exactly 1.
    """
    n, dim = X.shape
    if x.nnz and x.indices[-1] >= dim:
        dim = int(x.indices[-1]) + 1
        X = sp.csr_matrix((X.data, X.indices, X.indptr), shape=(n, dim))
    if kernel.kind == "linear":
        return np.asarray(X @ x.to_dense(dim)).ravel()
    reps = sp.csr_matrix(
        (np.tile(x.values, n), np.tile(x.indices, n), np.arange(n + 1) * x.nnz),
        shape=(n, dim),
    )
    diff = X - reps
    sq = np.asarray(diff.multiply(diff).sum(axis=1)).ravel()
    return np.exp(-kernel.gamma * sq)


def kernel_eval(a: SparseVector, b: SparseVector, kernel: KernelSpec) -> float:
    dim = 1 + max(int(a.indices[-1]) if a.nnz else 0, int(b.indices[-1]) if b.nnz else 0)
    return float(kernel_rows(stack([a], dim), b, kernel)[0])


class _KernelColumns:
    """Lazily computed, cached columns of the Gram matrix."""

    def __init__(self, X, vectors, kernel):
        self.X = X
        self.vectors = vectors
        self.kernel = kernel
        self._cache = {}

    def __getitem__(self, j: int) -> np.ndarray:
        col = self._cache.get(j)
        if col is None:
            col = kernel_rows(self.X, self.vectors[j], self.kernel)
            self._cache[j] = col
        return col


@dataclass(frozen=True, eq=False)
class OcsvmModel:
    """A trained one-class SVM restricted to its support vectors."""

    alphas: np.ndarray
    support_vectors: tuple
    rho: float
    nu: float
    kernel: KernelSpec
    n_train: int
    vocab: Vocabulary | None = None
    converged: bool = True
    iterations: int = 0
    kkt_residual: float = 0.0
    objective: float = float("nan")
    threshold: float = 0.0
    _X: sp.csr_matrix = field(init=False, repr=False)

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=np.float64)
        if a.ndim != 1 or a.size != len(self.support_vectors):
            raise FormatError("one alpha per support vector is required")
        if not 0.0 < self.nu <= 1.0:
            raise FormatError(f"nu must lie in (0, 1], got {self.nu}")
        if not math.isfinite(self.rho):
            raise FormatError("rho must be finite")
        upper = 1.0 / (self.nu * self.n_train)
        if a.size and (a.min() <= 0.0 or a.max() > upper * (1 + 1e-12)):
            raise FormatError(f"alphas must lie in (0, {upper}]")
        if abs(a.sum() - 1.0) > 1e-8:
            raise FormatError(f"alphas must sum to 1, got {a.sum()!r}")
        a.flags.writeable = False
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "support_vectors", tuple(self.support_vectors))
        dim = len(self.vocab) if self.vocab is not None else 0
        dim = max([dim] + [int(v.indices[-1]) + 1 for v in self.support_vectors if v.nnz])
        object.__setattr__(self, "_X", stack(self.support_vectors, dim))

    def decision_value(self, doc: SparseVector) -> float:
        return decision_value(doc, self)

    def score(self, doc: SparseVector) -> float:
        """Novelty score: the negated decision value."""
        return -decision_value(doc, self)

    def predict(self, doc: SparseVector) -> str:
        return classify(doc, self)

    def with_threshold(self, threshold: float) -> "OcsvmModel":
        kwargs = {f: getattr(self, f) for f in self.__dataclass_fields__ if f != "_X"}
        kwargs["threshold"] = threshold
        return OcsvmModel(**kwargs)

    def to_json(self) -> dict:
        out = {
            "kind": "ocsvm",
            "nu": float(self.nu),
            "kernel": self.kernel.to_json(),
            "rho": float(self.rho),
            "threshold": float(self.threshold),
            "n_train": int(self.n_train),
            "converged": bool(self.converged),
            "support": [
                {"alpha": float(a), "vector": [[i, w] for i, w in v.pairs()]}
                for a, v in zip(self.alphas, self.support_vectors)
            ],
        }
        if self.vocab is not None:
            out["vocabulary"] = self.vocab.to_json()
        return out

    @classmethod
    def from_json(cls, obj) -> "OcsvmModel":
        try:
            support = obj["support"]
            vocab = Vocabulary.from_json(obj["vocabulary"]) if "vocabulary" in obj else None
            n_train = int(obj.get("n_train", len(support)))
            return cls(
                alphas=np.array([s["alpha"] for s in support], dtype=np.float64),
                support_vectors=tuple(SparseVector.from_pairs(map(tuple, s["vector"])) for s in support),
                rho=float(obj["rho"]),
                nu=float(obj["nu"]),
                kernel=KernelSpec.from_json(obj["kernel"]),
                n_train=n_train,
                vocab=vocab,
                converged=bool(obj.get("converged", True)),
                threshold=float(obj.get("threshold", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed ocsvm model: {exc}") from None


def _select_pair(alpha, grad, upper):
    """Maximal violating pair (i, j) and the violation ``-G_i + G_j``.

    i may grow (alpha_i < upper), j may shrink (alpha_j > 0). argmax/argmin
    return the lowest index on ties.
    """
    neg_grad = -grad
    up = np.where(alpha < upper, neg_grad, -np.inf)
    low = np.where(alpha > 0.0, neg_grad, np.inf)
    i = int(np.argmax(up))
    j = int(np.argmin(low))
    return i, j, float(up[i] - low[j])


def _compute_rho(alpha, grad, upper):
    free = (alpha > 0.0) & (alpha < upper)
    if free.any():
        return float(grad[free].mean())
    # f(x_i) = G_i - rho must be <= 0 at the upper bound and >= 0 at zero
    at_upper = grad[alpha >= upper]
    at_zero = grad[alpha <= 0.0]
    lo = float(at_upper.max()) if at_upper.size else None
    hi = float(at_zero.min()) if at_zero.size else None
    if lo is None:
        return hi
    if hi is None:
        return lo
    return 0.5 * (lo + hi)


def kkt_residuals(alpha, grad, rho, upper) -> np.ndarray:
    """Per-point violation of the optimality conditions for a given rho."""
    f = grad - rho
    res = np.abs(f)
    res = np.where(alpha <= 0.0, np.maximum(0.0, -f), res)
    res = np.where(alpha >= upper, np.maximum(0.0, f), res)
    return res


def train_ocsvm(
    vectors: Sequence[SparseVector],
    nu: float = 0.5,
    kernel: KernelSpec = KernelSpec(),
    tol: float = 1e-6,
    vocab: Vocabulary | None = None,
    max_iter: int = MAX_PAIR_UPDATES,
) -> OcsvmModel:
    """Train a one-class SVM on sparse vectors.

    Parameters
    ----------
    vectors : sequence of SparseVector
        Training points (all of the positive class).
    nu : float
        Upper bound on the fraction of margin errors and lower bound on the
        fraction of support vectors, in (0, 1].
    kernel : KernelSpec
        Linear or RBF kernel.
    tol : float
        Stop once the maximal pair violation is at most `tol`.
    vocab : Vocabulary, optional
        Carried on the model for embedding new documents.
    max_iter : int
        Cap on pair updates. Reaching it returns a model flagged
        ``converged=False`` instead of raising.
    """
    n = len(vectors)
    if n < 1:
        raise FitError("one-class SVM needs at least one training vector")
    if not (0.0 < nu <= 1.0):
        raise ValueError(f"nu must lie in (0, 1], got {nu}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")

    dim = len(vocab) if vocab is not None else 0
    dim = max([dim] + [int(v.indices[-1]) + 1 for v in vectors if v.nnz])
    X = stack(vectors, dim)
    Q = _KernelColumns(X, vectors, kernel)
    upper = 1.0 / (nu * n)

    # feasible start: fill the first floor(nu*l) coordinates to the bound
    alpha = np.zeros(n)
    n_full = min(int(nu * n), n)
    alpha[:n_full] = upper
    if n_full < n:
        alpha[n_full] = max(0.0, 1.0 - upper * n_full)
    grad = np.zeros(n)
    for k in np.flatnonzero(alpha):
        grad += alpha[k] * Q[k]

    converged = False
    it = 0
    while True:
        i, j, gap = _select_pair(alpha, grad, upper)
        if gap <= tol:
            converged = True
            break
        if it >= max_iter:
            break
        Qi, Qj = Q[i], Q[j]
        eta = max(Qi[i] + Qj[j] - 2.0 * Qi[j], _TAU)
        step = (grad[j] - grad[i]) / eta
        room_i, room_j = upper - alpha[i], alpha[j]
        step = min(step, room_i, room_j)
        alpha[i] = upper if step == room_i else alpha[i] + step
        alpha[j] = 0.0 if step == room_j else alpha[j] - step
        grad += step * (Qi - Qj)
        it += 1

    if not converged:
        logger.warning("one-class SVM stopped after %d pair updates (violation %.3g > tol %.3g)", it, gap, tol)

    rho = _compute_rho(alpha, grad, upper)
    residual = float(kkt_residuals(alpha, grad, rho, upper).max())
    objective = 0.5 * float(alpha @ grad)
    sv = np.flatnonzero(alpha > 0.0)
    return OcsvmModel(
        alphas=alpha[sv],
        support_vectors=tuple(vectors[k] for k in sv),
        rho=rho,
        nu=nu,
        kernel=kernel,
        n_train=n,
        vocab=vocab,
        converged=converged,
        iterations=it,
        kkt_residual=residual,
        objective=objective,
    )


def decision_value(doc: SparseVector, model: OcsvmModel) -> float:
    """``sum_i alpha_i k(x_i, doc) - rho``."""
    k = kernel_rows(model._X, doc, model.kernel)
    return float(np.dot(model.alphas, k)) - model.rho


def classify(doc: SparseVector, model: OcsvmModel) -> str:
    # novelty score is -f(x); the boundary f(x) = 0 counts as normal
    return NORMAL if -decision_value(doc, model) <= model.threshold else ANOMALOUS
