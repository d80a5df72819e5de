"""Multidimensional user relevance: capture per-dimension weights from SAT clicks
and re-rank later queries by the weighted combination of dimension scores."""

from .capture import SatClickSet, capture_weights
from .errors import ConfigError, DimrelError, EmptyAnalysis, IngestError, InvalidInput
from .evaluation import ALL, EvalReport, RelevanceLabels, evaluate_strategies, ndcg_at_k
from .model import (
    DIMENSIONS,
    N_DIMS,
    Dimension,
    DimensionWeights,
    DocumentVector,
    NormalizedScores,
    Provenance,
    ScoreMatrix,
    build_document_vectors,
    normalize_scores,
    project,
)
from .rerank import RankedList, single_dimension_rerank, weighted_rerank
from .scorers import DocumentRecord, UserProfile, build_score_matrix, score_dimension
from .session import (
    QueryRecord,
    SessionLog,
    StabilityReport,
    Strategy,
    replay_cross_session,
    replay_within_session,
    stability_analysis,
)
from .synth import GeneratorConfig, generate

__version__ = "0.1.0"
