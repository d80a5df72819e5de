"""Capture weights from SAT clicks on one query and use them on the next."""
# %%
import numpy as np

from dimrel import (
    DIMENSIONS,
    ScoreMatrix,
    capture_weights,
    normalize_scores,
    single_dimension_rerank,
    weighted_rerank,
)

rng = np.random.default_rng(0)
first = ScoreMatrix("q1", tuple(f"d{i}" for i in range(8)), rng.random((8, 7)))

# the user SAT-clicked two documents
weights = capture_weights(first, {"d2", "d5"})
for d in weights.ranked_dimensions():
    print(f"{d.label:18s} {weights[d]:.3f}")

# %% re-rank the next query by the weighted combination
nxt = normalize_scores(ScoreMatrix("q2", tuple(f"e{i}" for i in range(8)), rng.random((8, 7))))
ranked = weighted_rerank(nxt, weights)
for doc, score in zip(ranked.doc_ids, ranked.combined_scores):
    print(doc, round(score, 3))

# %% compare with the seven single-dimension rankings
for d in DIMENSIONS:
    print(f"{d.label:18s}", " ".join(single_dimension_rerank(nxt, d).doc_ids[:4]))
