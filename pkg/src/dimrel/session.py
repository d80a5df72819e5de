"""Search sessions and the replay protocols that carry captured weights forward.

Two protocols are supported:

* within-session: weights captured on query ``i`` re-rank query ``i + 1`` of
  the same session (every query of a session is logged);
* cross-session: only the last query of each session is available, and the
  weights captured on session ``i``'s last query re-rank session ``i + 1``'s.

The first query (or session) has no feedback yet and is ranked with uniform
weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .capture import capture_weights
from .errors import EmptyAnalysis, InvalidInput
from .model import (
    DIMENSIONS,
    N_DIMS,
    Dimension,
    DimensionWeights,
    NormalizedScores,
    Provenance,
    ScoreMatrix,
    normalize_scores,
)
from .rerank import RankedList, weighted_rerank
from .scorers import DocumentRecord, UserProfile, build_score_matrix

__all__ = [
    "QueryRecord",
    "SessionLog",
    "Strategy",
    "ReplayStep",
    "StabilityReport",
    "replay_within_session",
    "replay_cross_session",
    "replay",
    "stability_analysis",
]

WITHIN = "within-session"
CROSS = "cross-session"
PROTOCOLS = (WITHIN, CROSS)


@dataclass(frozen=True)
class QueryRecord:
    """One query with its retrieved documents and feedback.

    Either ``docs`` (scored by the registered scorers) or ``scores`` (a
    pre-computed matrix) must be supplied.  ``graded_relevance`` maps doc_id
    to an integer grade; documents missing from it have grade 0.
    """

    query_id: str
    query_terms: tuple[str, ...] = ()
    docs: tuple[DocumentRecord, ...] = ()
    scores: ScoreMatrix | None = None
    sat_doc_ids: frozenset[str] = frozenset()
    graded_relevance: Mapping[str, int] | None = None
    ts: int = 0
    query: str = ""

    def __post_init__(self):
        object.__setattr__(self, "query_terms", tuple(self.query_terms))
        object.__setattr__(self, "docs", tuple(self.docs))
        object.__setattr__(self, "sat_doc_ids", frozenset(self.sat_doc_ids))
        if self.scores is None and not self.docs:
            raise InvalidInput(f"query {self.query_id!r} has no documents")
        if self.scores is not None and self.docs:
            if tuple(d.doc_id for d in self.docs) != self.scores.doc_ids:
                raise InvalidInput(f"query {self.query_id!r}: docs and score rows disagree")
        ids = self.doc_ids
        if len(set(ids)) != len(ids):
            raise InvalidInput(f"query {self.query_id!r} has duplicate doc_ids")
        stray = self.sat_doc_ids.difference(ids)
        if stray:
            raise InvalidInput(f"query {self.query_id!r}: SAT clicks on unretrieved docs {sorted(stray)}")
        if self.graded_relevance is not None:
            grades = dict(self.graded_relevance)
            bad = [d for d, g in grades.items() if d not in ids or int(g) != g or g < 0]
            if bad:
                raise InvalidInput(f"query {self.query_id!r}: invalid grades for {sorted(bad)}")
            object.__setattr__(self, "graded_relevance", {d: int(g) for d, g in grades.items()})

    @property
    def doc_ids(self) -> tuple[str, ...]:
        if self.scores is not None:
            return self.scores.doc_ids
        return tuple(d.doc_id for d in self.docs)

    @property
    def passthrough(self) -> bool:
        return self.scores is not None

    def score_matrix(self, scorers=None, profile: UserProfile | None = None) -> ScoreMatrix:
        if self.scores is not None:
            return self.scores
        return build_score_matrix(self.query_id, self.query_terms, self.docs, profile, scorers)

    def normalized(self, scorers=None, profile=None) -> NormalizedScores:
        return normalize_scores(self.score_matrix(scorers, profile))

    def labels(self) -> dict[str, int]:
        """Graded labels for every retrieved doc; SAT click counts as grade 1 without grades."""
        if self.graded_relevance is not None:
            return {d: self.graded_relevance.get(d, 0) for d in self.doc_ids}
        return {d: int(d in self.sat_doc_ids) for d in self.doc_ids}

    @property
    def has_labels(self) -> bool:
        return self.graded_relevance is not None or bool(self.sat_doc_ids)


@dataclass(frozen=True)
class SessionLog:
    session_id: str
    queries: tuple[QueryRecord, ...]
    user_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "queries", tuple(self.queries))
        if not self.queries:
            raise InvalidInput(f"session {self.session_id!r} has no queries")
        qids = [q.query_id for q in self.queries]
        if len(set(qids)) != len(qids):
            raise InvalidInput(f"session {self.session_id!r} has duplicate query_ids")

    def resolved(self, scorers=None, profile=None) -> SessionLog:
        """Copy with every query's score matrix computed (pass-through form)."""
        if all(q.passthrough for q in self.queries):
            return self
        queries = tuple(replace(q, scores=q.score_matrix(scorers, profile)) for q in self.queries)
        return replace(self, queries=queries)


@dataclass(frozen=True)
class Strategy:
    """How the weights for a query are chosen.

    ``captured``: weights captured from the previous query's SAT clicks.
    ``uniform``: 1/7 for every dimension.
    ``fixed``: one-hot on ``dim`` (single-dimension ranking).
    """

    kind: str
    dim: Dimension | None = None

    def __post_init__(self):
        if self.kind not in ("captured", "uniform", "fixed"):
            raise InvalidInput(f"unknown mode {self.kind!r}")
        if (self.kind == "fixed") != (self.dim is not None):
            raise InvalidInput("a dimension is required for (and only for) fixed mode")

    @classmethod
    def parse(cls, text: str | Strategy) -> Strategy:
        if isinstance(text, Strategy):
            return text
        kind, _, dim = str(text).strip().lower().partition(":")
        if kind == "fixed" or dim:
            if kind != "fixed" or not dim:
                raise InvalidInput(f"cannot parse mode {text!r}; use captured, uniform or fixed:<dimension>")
            return cls("fixed", Dimension.parse(dim))
        return cls(kind)

    @classmethod
    def fixed(cls, dim) -> Strategy:
        return cls("fixed", Dimension.parse(dim))

    @property
    def name(self) -> str:
        return f"fixed:{self.dim.value}" if self.dim else self.kind

    @property
    def label(self) -> str:
        if self.kind == "captured":
            return "Weighted Combination"
        return self.dim.label if self.dim else "Uniform"

    def __str__(self):
        return self.name


CAPTURED = Strategy("captured")
UNIFORM = Strategy("uniform")


def default_strategies() -> list[Strategy]:
    """The seven single-dimension rankings followed by the weighted combination."""
    return [Strategy.fixed(d) for d in DIMENSIONS] + [CAPTURED]


@dataclass(frozen=True)
class ReplayStep:
    session_id: str
    query_id: str
    ranking: RankedList
    weights: DimensionWeights
    # False for the opening query/session, which has no prior feedback.
    evaluated: bool = True


def _thread(
    items: Sequence[tuple[str, QueryRecord]], mode, scorers, profile, carry_forward
) -> list[ReplayStep]:
    strategy = Strategy.parse(mode)
    steps = []
    prev = None
    for i, (session_id, query) in enumerate(items):
        matrix = query.score_matrix(scorers, profile)
        if strategy.kind == "fixed":
            weights = DimensionWeights.one_hot(strategy.dim)
        elif strategy.kind == "uniform" or prev is None:
            weights = DimensionWeights.uniform()
        else:
            weights = prev
        ranking = weighted_rerank(normalize_scores(matrix), weights)
        steps.append(ReplayStep(session_id, query.query_id, ranking, weights, evaluated=i > 0))
        if strategy.kind == "captured":
            captured = capture_weights(matrix, query.sat_doc_ids)
            if carry_forward and not query.sat_doc_ids and prev is not None:
                captured = prev.with_provenance(Provenance.CARRIED_FORWARD)
            prev = captured
    return steps


def replay_within_session(
    session: SessionLog, mode="captured", scorers=None, profile=None, carry_forward=False
) -> list[ReplayStep]:
    """Rank every query of ``session``; query ``i + 1`` uses weights captured on query ``i``.

    ``mode`` is a :class:`Strategy` or its string form (``captured``,
    ``uniform``, ``fixed:<dimension>``).  A query without SAT clicks yields
    uniform weights for its successor, unless ``carry_forward`` is set, in
    which case the previous weights are reused.
    """
    if not isinstance(session, SessionLog):
        raise InvalidInput("expected a SessionLog")
    return _thread([(session.session_id, q) for q in session.queries], mode, scorers, profile, carry_forward)


def replay_cross_session(
    sessions: Sequence[SessionLog], mode="captured", scorers=None, profile=None, carry_forward=False
) -> list[ReplayStep]:
    """Rank the last query of each session with weights from the previous session's last query."""
    sessions = list(sessions)
    if not sessions or not all(isinstance(s, SessionLog) for s in sessions):
        raise InvalidInput("expected a non-empty sequence of SessionLog")
    return _thread([(s.session_id, s.queries[-1]) for s in sessions], mode, scorers, profile, carry_forward)


def replay(sessions, mode="captured", protocol=WITHIN, scorers=None, profile=None) -> list[ReplayStep]:
    """Run either protocol over a corpus, in session then query order."""
    if protocol == WITHIN:
        return [
            step
            for s in sessions
            for step in replay_within_session(s, mode, scorers, profile)
        ]
    if protocol == CROSS:
        return replay_cross_session(sessions, mode, scorers, profile)
    raise InvalidInput(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")


@dataclass(frozen=True)
class StabilityReport:
    """Share of sessions whose opening top-k dimensions keep a member in every query's top-k.

    ``per_session`` maps session_id to True/False, or None when the session
    was excluded (fewer than two queries, or a query without SAT clicks).
    ``n_boundary_ties`` counts queries whose k-th and (k+1)-th weights were
    equal, resolved by the fixed dimension order.
    """

    top_k: int
    fraction_stable: float
    n_stable: int
    n_eligible: int
    n_excluded: int
    n_boundary_ties: int
    per_session: dict[str, bool | None] = field(default_factory=dict)
    tie_break: str = "dimension order"


def stability_analysis(sessions, top_k: int = 3, scorers=None, profile=None) -> StabilityReport:
    if not isinstance(top_k, int) or not 1 <= top_k <= N_DIMS:
        raise InvalidInput(f"top_k must be in 1..{N_DIMS}")
    per_session: dict[str, bool | None] = {}
    n_stable = n_eligible = ties = 0
    for session in sessions:
        queries = session.queries
        if len(queries) < 2 or any(not q.sat_doc_ids for q in queries):
            per_session[session.session_id] = None
            continue
        tops = []
        for q in queries:
            w = capture_weights(q.score_matrix(scorers, profile), q.sat_doc_ids)
            ranked = w.ranked_dimensions()
            if top_k < N_DIMS and w[ranked[top_k - 1]] == w[ranked[top_k]]:
                ties += 1
            tops.append(set(ranked[:top_k]))
        stable = any(all(d in t for t in tops[1:]) for d in tops[0])
        per_session[session.session_id] = stable
        n_eligible += 1
        n_stable += stable
    if n_eligible == 0:
        raise EmptyAnalysis("no session has two or more queries with SAT clicks on every query")
    return StabilityReport(
        top_k=top_k,
        fraction_stable=n_stable / n_eligible,
        n_stable=n_stable,
        n_eligible=n_eligible,
        n_excluded=len(per_session) - n_eligible,
        n_boundary_ties=ties,
        per_session=per_session,
    )
