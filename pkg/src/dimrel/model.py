"""Relevance dimensions and the per-document two-dimensional Hilbert-space model.

Every document retrieved for a query is represented, for each relevance
dimension, as a unit vector

    |d> = alpha |rel_r> + beta |nonrel_r>

in a real 2-d space whose basis is the (relevance, non-relevance) pair of
that dimension.  ``alpha ** 2`` is the min-max normalized score of the
document in that dimension, so projecting back onto ``|rel_r>`` recovers it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidInput

__all__ = [
    "Dimension",
    "DIMENSIONS",
    "N_DIMS",
    "ScoreMatrix",
    "NormalizedScores",
    "DocumentVector",
    "Provenance",
    "DimensionWeights",
    "normalize_scores",
    "build_document_vectors",
    "project",
]


class Dimension(enum.Enum):
    HABIT = "habit"
    INTEREST = "interest"
    NOVELTY = "novelty"
    RELIABILITY = "reliability"
    SCOPE = "scope"
    TOPICALITY = "topicality"
    UNDERSTANDABILITY = "understandability"

    @property
    def index(self) -> int:
        return _DIM_INDEX[self]

    @property
    def label(self) -> str:
        return self.value.capitalize()

    @classmethod
    def parse(cls, name: str | Dimension) -> Dimension:
        """Look up a dimension by case-insensitive name."""
        if isinstance(name, Dimension):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            valid = ", ".join(d.value for d in DIMENSIONS)
            raise InvalidInput(f"unknown dimension {name!r} (expected one of: {valid})") from None


# Alphabetical; every serialized 7-vector uses this order.
DIMENSIONS: tuple[Dimension, ...] = tuple(Dimension)
N_DIMS = len(DIMENSIONS)
_DIM_INDEX = {d: i for i, d in enumerate(DIMENSIONS)}


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


def _check_doc_ids(doc_ids: Sequence[str]) -> tuple[str, ...]:
    doc_ids = tuple(str(d) for d in doc_ids)
    if not doc_ids:
        raise InvalidInput("document list is empty")
    if len(set(doc_ids)) != len(doc_ids):
        raise InvalidInput("duplicate doc_ids")
    return doc_ids


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """Raw per-dimension scores for the documents retrieved for one query.

    ``raw`` has shape ``(n_docs, 7)`` with columns in ``DIMENSIONS`` order.
    """

    query_id: str
    doc_ids: tuple[str, ...]
    raw: np.ndarray = field(repr=False)

    def __post_init__(self):
        doc_ids = _check_doc_ids(self.doc_ids)
        raw = np.asarray(self.raw, dtype=np.float64)
        if raw.ndim != 2 or raw.shape != (len(doc_ids), N_DIMS):
            raise InvalidInput(
                f"score matrix must have shape ({len(doc_ids)}, {N_DIMS}), got {raw.shape}"
            )
        if not np.all(np.isfinite(raw)):
            raise InvalidInput(f"non-finite score in query {self.query_id!r}")
        object.__setattr__(self, "doc_ids", doc_ids)
        object.__setattr__(self, "raw", _frozen(raw))

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def column(self, dim: Dimension | str) -> np.ndarray:
        return self.raw[:, Dimension.parse(dim).index]

    def __eq__(self, other):
        if not isinstance(other, ScoreMatrix):
            return NotImplemented
        return (
            self.query_id == other.query_id
            and self.doc_ids == other.doc_ids
            and np.array_equal(self.raw, other.raw)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class NormalizedScores:
    """Min-max normalized scores, every entry in ``[0, 1]``."""

    query_id: str
    doc_ids: tuple[str, ...]
    norm: np.ndarray = field(repr=False)

    def __post_init__(self):
        doc_ids = _check_doc_ids(self.doc_ids)
        norm = np.asarray(self.norm, dtype=np.float64)
        if norm.ndim != 2 or norm.shape != (len(doc_ids), N_DIMS):
            raise InvalidInput(
                f"normalized matrix must have shape ({len(doc_ids)}, {N_DIMS}), got {norm.shape}"
            )
        if not np.all((norm >= 0.0) & (norm <= 1.0)):
            raise InvalidInput("normalized scores must lie in [0, 1]")
        object.__setattr__(self, "doc_ids", doc_ids)
        object.__setattr__(self, "norm", _frozen(norm))

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def row(self, doc_id: str) -> np.ndarray:
        return self.norm[self.doc_ids.index(doc_id)]

    def column(self, dim: Dimension | str) -> np.ndarray:
        return self.norm[:, Dimension.parse(dim).index]

    def __eq__(self, other):
        if not isinstance(other, NormalizedScores):
            return NotImplemented
        return (
            self.query_id == other.query_id
            and self.doc_ids == other.doc_ids
            and np.array_equal(self.norm, other.norm)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class DocumentVector:
    """Superposition coefficients of one document in each dimension's basis."""

    doc_id: str
    alpha: np.ndarray = field(repr=False)
    beta: np.ndarray = field(repr=False)

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.float64)
        beta = np.asarray(self.beta, dtype=np.float64)
        if alpha.shape != (N_DIMS,) or beta.shape != (N_DIMS,):
            raise InvalidInput("alpha and beta must each have one entry per dimension")
        object.__setattr__(self, "alpha", _frozen(alpha))
        object.__setattr__(self, "beta", _frozen(beta))

    @property
    def coeffs(self) -> dict[Dimension, tuple[float, float]]:
        return {d: (float(self.alpha[i]), float(self.beta[i])) for i, d in enumerate(DIMENSIONS)}

    def ket(self, dim: Dimension | str) -> np.ndarray:
        """The vector in the (relevant, non-relevant) basis of ``dim``."""
        i = Dimension.parse(dim).index
        return np.array([self.alpha[i], self.beta[i]])


class Provenance(enum.Enum):
    CAPTURED = "captured"
    UNIFORM = "uniform"
    CARRIED_FORWARD = "carried_forward"
    FIXED = "fixed"


@dataclass(frozen=True)
class DimensionWeights:
    """A user's importance weight for each dimension, each in ``[0, 1]``.

    Weights are not required to sum to one; rankings only depend on their
    ratios.
    """

    weights: np.ndarray
    provenance: Provenance = Provenance.CAPTURED

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (N_DIMS,):
            raise InvalidInput(f"expected {N_DIMS} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise InvalidInput("weights must be finite")
        if np.any(w < 0.0) or np.any(w > 1.0):
            raise InvalidInput("weights must lie in [0, 1]")
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    @classmethod
    def uniform(cls) -> DimensionWeights:
        return cls(np.full(N_DIMS, 1.0 / N_DIMS), Provenance.UNIFORM)

    @classmethod
    def one_hot(cls, dim: Dimension | str) -> DimensionWeights:
        w = np.zeros(N_DIMS)
        w[Dimension.parse(dim).index] = 1.0
        return cls(w, Provenance.FIXED)

    @classmethod
    def from_mapping(
        cls, mapping: Mapping[Dimension | str, float], provenance=Provenance.CAPTURED
    ) -> DimensionWeights:
        w = np.full(N_DIMS, np.nan)
        for key, value in mapping.items():
            w[Dimension.parse(key).index] = float(value)
        missing = [d.value for d in DIMENSIONS if np.isnan(w[d.index])]
        if missing:
            raise InvalidInput(f"weights missing for dimension(s): {', '.join(missing)}")
        return cls(w, provenance)

    def with_provenance(self, provenance: Provenance) -> DimensionWeights:
        return DimensionWeights(self.weights, provenance)

    def as_dict(self) -> dict[Dimension, float]:
        return {d: float(self.weights[d.index]) for d in DIMENSIONS}

    def __getitem__(self, dim: Dimension | str) -> float:
        return float(self.weights[Dimension.parse(dim).index])

    def ranked_dimensions(self) -> list[Dimension]:
        """Dimensions by descending weight, ties in ``DIMENSIONS`` order."""
        return sorted(DIMENSIONS, key=lambda d: (-self.weights[d.index], d.index))

    def __eq__(self, other):
        if not isinstance(other, DimensionWeights):
            return NotImplemented
        return self.provenance is other.provenance and np.array_equal(self.weights, other.weights)


def normalize_scores(matrix: ScoreMatrix) -> NormalizedScores:
    """Min-max normalize each dimension across the documents of one query.

    Each score becomes ``(x - min) / (max - min)`` within its column.  A
    column whose scores are all equal carries no information for the
    query and maps to 0.5 throughout.
    """
    raw = matrix.raw
    if raw.shape[0] == 0:
        raise InvalidInput("cannot normalize an empty score matrix")
    if not np.all(np.isfinite(raw)):
        raise InvalidInput("non-finite score")
    lo, hi = raw.min(axis=0), raw.max(axis=0)
    with np.errstate(over="ignore"):
        span = hi - lo
    # Halve columns whose range overflows float64; the result is unchanged.
    scale = np.where(np.isfinite(span), 1.0, 0.5)
    lo, span = lo * scale, hi * scale - lo * scale
    degenerate = span == 0.0
    norm = np.clip((raw * scale - lo) / np.where(degenerate, 1.0, span), 0.0, 1.0)
    # Uninformative column: keep every document neutral.
    norm[:, degenerate] = 0.5
    return NormalizedScores(matrix.query_id, matrix.doc_ids, norm)


def build_document_vectors(norm: NormalizedScores) -> list[DocumentVector]:
    """One unit vector per document and dimension: alpha = sqrt(p), beta = sqrt(1 - p)."""
    p = np.asarray(norm.norm, dtype=np.float64)
    if not np.all((p >= 0.0) & (p <= 1.0)):
        raise InvalidInput("normalized scores must lie in [0, 1]")
    alpha = np.sqrt(p)
    beta = np.sqrt(1.0 - p)
    return [DocumentVector(doc_id, alpha[i], beta[i]) for i, doc_id in enumerate(norm.doc_ids)]


# |rel_r> in the basis of its own dimension r.
_RELEVANT = (1.0, 0.0)


def relevance_basis(dim: Dimension | str) -> np.ndarray:
    """``|rel_r>`` expressed in the basis of ``dim`` itself."""
    Dimension.parse(dim)
    return np.array(_RELEVANT)


def project(doc: DocumentVector, dim: Dimension | str) -> float:
    """Probability that ``doc`` is relevant along ``dim``: ``|<rel_dim|d>|^2``."""
    i = Dimension.parse(dim).index
    rel, non_rel = _RELEVANT
    amplitude = rel * float(doc.alpha[i]) + non_rel * float(doc.beta[i])
    return amplitude * amplitude

