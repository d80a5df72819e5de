"""Capture a user's per-dimension weights from the documents they SAT-clicked."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidInput
from .model import (
    DIMENSIONS,
    N_DIMS,
    DimensionWeights,
    Provenance,
    ScoreMatrix,
    build_document_vectors,
    normalize_scores,
    project,
)

__all__ = ["SatClickSet", "capture_weights"]


@dataclass(frozen=True)
class SatClickSet:
    query_id: str
    sat_doc_ids: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "sat_doc_ids", frozenset(str(d) for d in self.sat_doc_ids))


def capture_weights(
    matrix: ScoreMatrix, sat: SatClickSet | Iterable[str]
) -> DimensionWeights:
    """Average projection of the SAT-clicked documents onto each dimension.

    Scores are min-max normalized over all retrieved documents, turned into
    per-dimension unit vectors, and each SAT document's vector is projected
    onto the relevance axis of every dimension.  The weight of a dimension
    is the mean of those projections.

    With no SAT clicks the result is uniform (1/7 each, provenance
    ``UNIFORM``).  Weights are not rescaled to sum to one.

    Raises
    ------
    InvalidInput
        If a SAT document is not among the retrieved documents.
    """
    sat_ids = sat.sat_doc_ids if isinstance(sat, SatClickSet) else frozenset(map(str, sat))
    unknown = sat_ids.difference(matrix.doc_ids)
    if unknown:
        raise InvalidInput(
            f"SAT doc(s) not retrieved for query {matrix.query_id!r}: {sorted(unknown)}"
        )
    if not sat_ids:
        return DimensionWeights.uniform()

    vectors = {v.doc_id: v for v in build_document_vectors(normalize_scores(matrix))}
    # Fixed summation order keeps the result independent of input ordering.
    sat_vectors = [vectors[d] for d in sorted(sat_ids)]
    total = np.zeros(N_DIMS)
    for r in DIMENSIONS:
        for vec in sat_vectors:
            total[r.index] += project(vec, r)
    avg = np.clip(total / len(sat_vectors), 0.0, 1.0)
    return DimensionWeights(avg, Provenance.CAPTURED)
