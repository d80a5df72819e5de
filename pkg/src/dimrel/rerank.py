"""Rank documents by a weighted combination of their normalized dimension scores."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .model import N_DIMS, Dimension, DimensionWeights, NormalizedScores

__all__ = ["RankedList", "combine_scores", "weighted_rerank", "single_dimension_rerank"]


@dataclass(frozen=True)
class RankedList:
    query_id: str
    doc_ids: tuple[str, ...]
    combined_scores: tuple[float, ...]

    def __len__(self):
        return len(self.doc_ids)


def _weight_vector(weights) -> np.ndarray:
    if isinstance(weights, DimensionWeights):
        return weights.weights
    if isinstance(weights, dict):
        return DimensionWeights.from_mapping(weights).weights
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (N_DIMS,):
        raise InvalidInput(f"expected a weight for each of the {N_DIMS} dimensions")
    if np.any(~np.isfinite(w)) or np.any(w < 0.0) or np.any(w > 1.0):
        raise InvalidInput("weights must lie in [0, 1]")
    return w


def combine_scores(norm: NormalizedScores, weights) -> np.ndarray:
    """``sum_r weights[r] * norm[:, r]`` per document."""
    w = _weight_vector(weights)
    combined = np.zeros(norm.n_docs)
    # Column-by-column accumulation: identical rows always get identical totals,
    # and a one-hot weight vector reproduces its column bit for bit.
    for j in range(N_DIMS):
        combined += w[j] * norm.norm[:, j]
    return combined


def _ranked(norm: NormalizedScores, scores: np.ndarray) -> RankedList:
    order = sorted(range(norm.n_docs), key=lambda i: (-scores[i], norm.doc_ids[i]))
    return RankedList(
        norm.query_id,
        tuple(norm.doc_ids[i] for i in order),
        tuple(float(scores[i]) for i in order),
    )


def weighted_rerank(norm: NormalizedScores, weights) -> RankedList:
    """Sort documents by weighted combined score, descending; ties by ascending doc_id.

    ``weights`` may be a :class:`DimensionWeights`, a mapping with an entry for
    every dimension, or a length-7 sequence in ``DIMENSIONS`` order.
    """
    return _ranked(norm, combine_scores(norm, weights))


def single_dimension_rerank(norm: NormalizedScores, dim: Dimension | str) -> RankedList:
    return _ranked(norm, norm.column(Dimension.parse(dim)).copy())
