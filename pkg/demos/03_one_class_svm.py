# %% [markdown]
# # One-class SVM
#
# The nu parameter bounds the fraction of training points left outside the
# boundary from above and the fraction of support vectors from below.

# %%
import numpy as np

from ctinovelty import KernelSpec, SparseVector, decision_value, train_ocsvm

rng = np.random.default_rng(0)
P = rng.normal(size=(40, 2)) + 3.0
vecs = [SparseVector.from_dense(p) for p in P]

for nu in (0.1, 0.3, 0.5, 0.9):
    m = train_ocsvm(vecs, nu, KernelSpec("rbf", 1.0), tol=1e-8)
    f = np.array([decision_value(v, m) for v in vecs])
    print(
        f"nu={nu:.1f}  outside={np.mean(f < -1e-8):.3f}  support={len(m.alphas) / len(vecs):.3f}  "
        f"rho={m.rho:.4f}  updates={m.iterations}"
    )

# %% [markdown]
# Far away from every training point the RBF kernel vanishes and the
# decision value tends to -rho.

# %%
far = SparseVector([0, 1], [50.0, -50.0])
print(decision_value(far, m), -m.rho)
