"""Documents as unit vectors, one 2-d basis per relevance dimension."""
# %%
import numpy as np

from dimrel import DIMENSIONS, ScoreMatrix, build_document_vectors, normalize_scores, project

# raw scores from seven per-dimension rankers for four retrieved documents
raw = np.array([
    [2.1, 0.3, 5.0, 1.2, 0.9, 3.3, 0.1],
    [1.0, 0.8, 2.0, 4.4, 0.9, 2.7, 0.4],
    [3.7, 0.1, 4.0, 0.2, 0.9, 0.5, 0.3],
    [0.4, 0.6, 1.0, 2.9, 0.9, 1.9, 0.2],
])
matrix = ScoreMatrix("q1", ("a", "b", "c", "d"), raw)

# %% min-max per dimension; the constant Scope column is uninformative and maps to 0.5
norm = normalize_scores(matrix)
print("dimensions:", [d.label for d in DIMENSIONS])
print(np.round(norm.norm, 3))

# %% alpha = sqrt(p), beta = sqrt(1 - p)
vectors = build_document_vectors(norm)
for v in vectors:
    alpha, beta = v.coeffs[DIMENSIONS[3]]
    print(f"{v.doc_id}: |d> = {alpha:.3f}|reliability> + {beta:.3f}|~reliability>")

# %% projecting back onto the relevance axis recovers the normalized score
b = vectors[1]
for d in DIMENSIONS:
    print(f"{d.label:18s} |<{d.value}|b>|^2 = {project(b, d):.4f}   normalized = {norm.row('b')[d.index]:.4f}")
