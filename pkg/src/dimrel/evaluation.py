"""NDCG and strategy comparison reports."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import EmptyAnalysis, InvalidInput
from .rerank import RankedList
from .session import WITHIN, Strategy, default_strategies, replay

__all__ = [
    "ALL",
    "RelevanceLabels",
    "dcg",
    "ndcg_at_k",
    "StrategyResult",
    "EvalReport",
    "evaluate_strategies",
    "parse_cutoffs",
]

ALL = "ALL"
DEFAULT_CUTOFFS = (1, 5, 10, ALL)


@dataclass(frozen=True)
class RelevanceLabels:
    query_id: str
    labels: Mapping[str, int]

    def __post_init__(self):
        labels = dict(self.labels)
        if any(int(g) != g or g < 0 for g in labels.values()):
            raise InvalidInput("grades must be integers >= 0")
        object.__setattr__(self, "labels", {d: int(g) for d, g in labels.items()})

    def grade(self, doc_id: str) -> int:
        return self.labels.get(doc_id, 0)

    def relevant(self, min_grade: int = 1) -> set[str]:
        return {d for d, g in self.labels.items() if g >= min_grade}


def dcg(grades: Sequence[int], k: int | None = None) -> float:
    """``sum (2**g - 1) / log2(i + 1)`` over the first ``k`` positions (1-based i)."""
    g = np.asarray(grades, dtype=np.float64)[:k]
    if g.size == 0:
        return 0.0
    discounts = np.log2(np.arange(2, g.size + 2))
    return float(np.sum((2.0 ** g - 1.0) / discounts))


def _cutoff(k, n: int) -> int:
    if k is None or (isinstance(k, str) and k.upper() == ALL):
        return n
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidInput(f"cutoff must be a positive integer or ALL, got {k!r}")
    return min(int(k), n)


def ndcg_at_k(ranking: RankedList | Sequence[str], labels, k=ALL) -> float:
    """NDCG at cutoff ``k`` (an int >= 1, or ``ALL`` for the full list).

    ``labels`` is a :class:`RelevanceLabels` or a doc_id -> grade mapping;
    unlabeled documents have grade 0.  The ideal ordering is computed over
    the grades of the ranked documents.  A query with no relevant document
    scores 0.
    """
    doc_ids = ranking.doc_ids if isinstance(ranking, RankedList) else tuple(ranking)
    if not doc_ids:
        raise InvalidInput("ranking is empty")
    if isinstance(labels, RelevanceLabels):
        labels = labels.labels
    cut = _cutoff(k, len(doc_ids))
    grades = [labels.get(d, 0) for d in doc_ids]
    ideal = dcg(sorted(grades, reverse=True), cut)
    if ideal == 0.0:
        return 0.0
    return dcg(grades, cut) / ideal


def _col(k) -> str:
    return f"NDCG@{k}"


def parse_cutoffs(text: str) -> tuple:
    """``"1,5,10,all"`` -> ``(1, 5, 10, "ALL")``."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if part.upper() == ALL:
            out.append(ALL)
            continue
        try:
            k = int(part)
        except ValueError:
            raise InvalidInput(f"bad cutoff {part!r}") from None
        if k < 1:
            raise InvalidInput(f"cutoff must be >= 1, got {k}")
        out.append(k)
    if not out:
        raise InvalidInput("no cutoffs given")
    return tuple(dict.fromkeys(out))


@dataclass
class StrategyResult:
    strategy: str
    label: str
    means: dict[str, float]
    n_queries: int
    n_zero_relevant: int
    per_query: list[tuple[str, str, dict[str, float]]] = field(default_factory=list, repr=False)


@dataclass
class EvalReport:
    cutoffs: tuple
    protocol: str
    rows: list[StrategyResult]

    @property
    def columns(self) -> list[str]:
        return [_col(k) for k in self.cutoffs]

    def __getitem__(self, strategy) -> StrategyResult:
        name = Strategy.parse(strategy).name
        for row in self.rows:
            if row.strategy == name:
                return row
        raise KeyError(name)

    def mean(self, strategy, k) -> float:
        return self[strategy].means[_col(k)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["strategy", *self.columns, "n_queries"])
        for row in self.rows:
            writer.writerow([row.label, *(f"{row.means[c]:.4f}" for c in self.columns), row.n_queries])
        return buf.getvalue()

    def to_table(self) -> str:
        header = ["Strategy", *self.columns, "n_queries"]
        body = [
            [row.label, *(f"{row.means[c]:.4f}" for c in self.columns), str(row.n_queries)]
            for row in self.rows
        ]
        widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]

        def fmt(cells):
            return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

        rule = "+-" + "-+-".join("-" * w for w in widths) + "-+"
        return "\n".join([rule, fmt(header), rule, *map(fmt, body), rule])


def evaluate_strategies(
    sessions,
    strategies=None,
    cutoffs=DEFAULT_CUTOFFS,
    protocol: str = WITHIN,
    scorers=None,
    profile=None,
    include_first: bool = False,
) -> EvalReport:
    """Replay every strategy over ``sessions`` and average NDCG over the evaluated queries.

    By default the opening query of each session (within-session) or the
    first session (cross-session) is left out for every strategy, since it
    carries no feedback for the weighted combination.  Queries without any
    relevant document count as NDCG 0 and are included in the means.
    """
    strategies = [Strategy.parse(s) for s in (strategies or default_strategies())]
    cutoffs = tuple(ALL if isinstance(k, str) else k for k in cutoffs)
    for k in cutoffs:
        _cutoff(k, 1)
    sessions = [s.resolved(scorers, profile) for s in sessions]
    labels = {
        (s.session_id, q.query_id): q for s in sessions for q in s.queries
    }

    rows = []
    for strategy in strategies:
        per_query = []
        zero = 0
        labeled = False
        for step in replay(sessions, strategy, protocol):
            if not (step.evaluated or include_first):
                continue
            query = labels[(step.session_id, step.query_id)]
            labeled = labeled or query.has_labels
            grades = query.labels()
            if not any(grades.values()):
                zero += 1
            per_query.append(
                (step.session_id, step.query_id, {_col(k): ndcg_at_k(step.ranking, grades, k) for k in cutoffs})
            )
        if not labeled:
            raise EmptyAnalysis("no labeled queries to evaluate")
        means = {_col(k): math.fsum(p[2][_col(k)] for p in per_query) / len(per_query) for k in cutoffs}
        rows.append(StrategyResult(strategy.name, strategy.label, means, len(per_query), zero, per_query))
    return EvalReport(cutoffs, protocol, rows)
