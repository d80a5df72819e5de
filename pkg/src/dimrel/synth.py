"""Synthetic session corpora with planted dimension preferences.

Each session owns a hidden preference vector on the simplex.  For every
query, raw scores are i.i.d. uniform per (document, dimension) cell, so the
dimensions are independent and a planted preference is identifiable from
clicks.  The user's utility for a document is the preference-weighted sum
of its normalized scores; SAT clicks go to the documents with the highest
utility after Gaussian click noise, and graded labels quantize the
noiseless utility into {0, 1, 2}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .model import N_DIMS, Dimension, ScoreMatrix, normalize_scores
from .scorers import DocumentRecord
from .session import QueryRecord, SessionLog

__all__ = ["GeneratorConfig", "generate", "draw_preferences", "planted_one_hot"]

# Min-max scaled utility at or above these gets grade 1 / grade 2.
GRADE_THRESHOLDS = (0.5, 0.8)


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of a synthetic corpus.

    ``planted_weights`` fixes the same preference for every session.  When it
    is None, each session draws ``softmax(concentration * z)`` with standard
    normal ``z``: 0 gives uniform preferences, large values put nearly all
    mass on one or two dimensions.  ``drift`` multiplies the preference by
    ``exp(drift * z)`` afresh for every query; ``redraw_per_query`` replaces it
    with an independent draw for every query.
    """

    seed: int = 0
    n_sessions: int = 100
    queries_per_session: tuple[int, int] = (5, 10)
    docs_per_query: tuple[int, int] = (20, 20)
    planted_weights: tuple[float, ...] | None = None
    concentration: float = 2.0
    click_noise: float = 0.05
    drift: float = 0.0
    redraw_per_query: bool = False
    clicks_per_query: int = 1

    def __post_init__(self):
        for name in ("queries_per_session", "docs_per_query"):
            lo, hi = getattr(self, name)
            if not (1 <= lo <= hi):
                raise ConfigError(f"{name} must satisfy 1 <= min <= max, got {(lo, hi)}")
            object.__setattr__(self, name, (int(lo), int(hi)))
        if self.n_sessions < 1:
            raise ConfigError("n_sessions must be >= 1")
        if self.planted_weights is not None:
            w = np.asarray(self.planted_weights, dtype=np.float64)
            if w.shape != (N_DIMS,) or np.any(~np.isfinite(w)) or np.any(w < 0):
                raise ConfigError(f"planted weights must be {N_DIMS} non-negative numbers")
            if not np.isclose(w.sum(), 1.0, atol=1e-9):
                raise ConfigError("planted weights must sum to 1")
            object.__setattr__(self, "planted_weights", tuple(float(x) for x in w))
        if self.concentration < 0:
            raise ConfigError("concentration must be >= 0")
        if not 0.0 <= self.click_noise <= 1.0:
            raise ConfigError("click_noise must lie in [0, 1]")
        if self.drift < 0:
            raise ConfigError("drift must be >= 0")
        if self.clicks_per_query < 1:
            raise ConfigError("clicks_per_query must be >= 1")
        if self.clicks_per_query > self.docs_per_query[0]:
            raise ConfigError("clicks_per_query exceeds the smallest document count")


def planted_one_hot(dim) -> tuple[float, ...]:
    w = [0.0] * N_DIMS
    w[Dimension.parse(dim).index] = 1.0
    return tuple(w)


def draw_preferences(rng: np.random.Generator, concentration: float) -> np.ndarray:
    z = concentration * rng.standard_normal(N_DIMS)
    e = np.exp(z - z.max())
    return e / e.sum()


def _grades(utility: np.ndarray) -> np.ndarray:
    lo, hi = utility.min(), utility.max()
    scaled = (utility - lo) / (hi - lo) if hi > lo else np.zeros_like(utility)
    return (scaled >= GRADE_THRESHOLDS[0]).astype(int) + (scaled >= GRADE_THRESHOLDS[1]).astype(int)


def _query(rng, config, session_id, q_index, prefs) -> QueryRecord:
    n_docs = int(rng.integers(config.docs_per_query[0], config.docs_per_query[1] + 1))
    query_id = f"{session_id}-q{q_index:02d}"
    doc_ids = tuple(f"d{j:03d}" for j in range(n_docs))
    raw = rng.random((n_docs, N_DIMS))
    matrix = ScoreMatrix(query_id, doc_ids, raw)
    norm = normalize_scores(matrix).norm

    utility = norm @ prefs
    noisy = utility + config.click_noise * rng.standard_normal(n_docs)
    clicked = np.argsort(-noisy, kind="stable")[: config.clicks_per_query]
    grades = _grades(utility)

    publish = rng.permutation(n_docs)
    docs = tuple(
        DocumentRecord(
            doc_id=doc_ids[j],
            url_host=f"host{int(rng.integers(0, 25)):02d}.example",
            title=f"synthetic document {j}",
            length_tokens=int(rng.integers(50, 3000)),
            publish_rank=int(publish[j]),
            sentence_avg_len=float(rng.integers(6, 40)),
        )
        for j in range(n_docs)
    )
    return QueryRecord(
        query_id=query_id,
        query_terms=("synthetic", session_id, f"q{q_index}"),
        docs=docs,
        scores=matrix,
        sat_doc_ids=frozenset(doc_ids[i] for i in clicked),
        graded_relevance={doc_ids[j]: int(grades[j]) for j in range(n_docs)},
        ts=q_index,
        query=f"synthetic query {session_id} {q_index}",
    )


def generate(config: GeneratorConfig | None = None):
    """Build a corpus.

    Returns ``(sessions, truth)`` where ``truth`` maps session_id to the
    session's planted preference vector (``DIMENSIONS`` order).
    Identical configs give identical corpora.
    """
    config = config or GeneratorConfig()
    rng = np.random.default_rng(config.seed)
    sessions, truth = [], {}
    for s in range(config.n_sessions):
        session_id = f"s{s:05d}"
        if config.planted_weights is not None:
            base = np.array(config.planted_weights)
        else:
            base = draw_preferences(rng, config.concentration)
        n_queries = int(rng.integers(config.queries_per_session[0], config.queries_per_session[1] + 1))
        queries = []
        for q in range(n_queries):
            prefs = base
            if config.redraw_per_query:
                prefs = draw_preferences(rng, config.concentration)
            if config.drift > 0:
                prefs = prefs * np.exp(config.drift * rng.standard_normal(N_DIMS))
                prefs = prefs / prefs.sum()
            queries.append(_query(rng, config, session_id, q, prefs))
        sessions.append(SessionLog(session_id, tuple(queries), user_id=f"u{s:05d}"))
        truth[session_id] = base
    return sessions, truth


def truth_to_json(truth) -> dict[str, list[float]]:
    return {sid: [float(x) for x in w] for sid, w in truth.items()}

