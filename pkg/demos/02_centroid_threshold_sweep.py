# %% [markdown]
# # Centroid novelty detection and threshold selection
#
# Train on CVE-like descriptions only (positives), then pick the decision
# threshold on a labelled dev split by best F1.

# %%
import functools

import numpy as np

from ctinovelty import (
    CentroidModel,
    confusion_from,
    embed,
    fit,
    load_stopwords,
    metrics,
    normalize,
    pick_threshold,
    sweep,
)
from ctinovelty.synth import separable_corpus

tok = functools.partial(normalize, stopwords=load_stopwords())
train, docs = separable_corpus(seed=0)
tokens = [tok(e.description) for e in train]
vocab = fit(tokens)
model = CentroidModel.fit([embed(t, vocab) for t in tokens], vocab)
print(f"N={vocab.corpus_size}, V={len(vocab)}")

# %% [markdown]
# Novelty score = 1 - cosine(document, centroid). Positives should sit low,
# negatives (disjoint vocabulary) at exactly 1.

# %%
dev, test = docs[:200], docs[200:]
scored = [(d.label, model.score(embed(tok(d.text), vocab))) for d in dev]
for label in ("positive", "negative"):
    s = np.array([x for lab, x in scored if lab == label])
    print(f"{label}: mean {s.mean():.3f}  min {s.min():.3f}  max {s.max():.3f}")

# %%
curve = sweep(scored)
tau = pick_threshold(curve)
print(f"{len(curve)} thresholds, best at {tau:.4f}")
tuned = model.with_threshold(tau)
conf = confusion_from((d, tuned.predict(embed(tok(d.text), vocab))) for d in test)
print(conf, "P/R/F1 = %.3f / %.3f / %.3f" % metrics(conf))
