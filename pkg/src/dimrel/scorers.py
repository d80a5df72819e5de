"""Baseline per-dimension scorers and score-matrix assembly.

The scorers here are simple deterministic heuristics standing in for
trained per-dimension rankers.  Anything with the signature

    scorer(query_terms, docs, profile) -> sequence of floats (one per doc)

can be registered for a dimension instead, and pre-scored matrices can skip
scoring entirely.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, InvalidInput
from .model import DIMENSIONS, Dimension, ScoreMatrix

__all__ = [
    "DocumentRecord",
    "UserProfile",
    "tokenize",
    "BM25",
    "tfidf_cosine",
    "topicality",
    "habit",
    "interest",
    "novelty",
    "reliability",
    "scope",
    "understandability",
    "BASELINE_SCORERS",
    "NAMED_SCORERS",
    "score_dimension",
    "build_score_matrix",
]

_TOKEN_RE = re.compile(r"\w+")
_SENTENCE_RE = re.compile(r"[.!?]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class DocumentRecord:
    doc_id: str
    url_host: str = ""
    body_text: str = ""
    title: str = ""
    length_tokens: int = 0
    publish_rank: int = 0
    # Used when body_text is absent (pre-extracted logs).
    sentence_avg_len: float | None = None

    def __post_init__(self):
        if self.length_tokens < 0:
            raise InvalidInput(f"{self.doc_id}: length_tokens must be >= 0")
        if self.publish_rank < 0:
            raise InvalidInput(f"{self.doc_id}: publish_rank must be >= 0")

    @property
    def terms(self) -> list[str]:
        return tokenize(f"{self.title} {self.body_text}")


@dataclass(frozen=True)
class UserProfile:
    host_click_counts: Mapping[str, float] = field(default_factory=dict)
    interest_terms: Mapping[str, float] = field(default_factory=dict)
    trusted_hosts: frozenset[str] = frozenset()

    def __post_init__(self):
        if any(c < 0 for c in self.host_click_counts.values()):
            raise InvalidInput("host click counts must be >= 0")
        if any(w < 0 for w in self.interest_terms.values()):
            raise InvalidInput("interest term weights must be >= 0")
        object.__setattr__(self, "trusted_hosts", frozenset(self.trusted_hosts))

    @classmethod
    def from_dict(cls, data: Mapping | None) -> UserProfile:
        data = data or {}
        return cls(
            host_click_counts=dict(data.get("host_click_counts", {})),
            interest_terms=dict(data.get("interest_terms", {})),
            trusted_hosts=frozenset(data.get("trusted_hosts", ())),
        )

    def clicks(self, host: str) -> float:
        return float(self.host_click_counts.get(host, 0.0))


class BM25:
    """Okapi BM25 over a small in-memory corpus.

    Uses the non-negative idf ``log(1 + (N - df + 0.5) / (df + 0.5))``.
    """

    def __init__(self, corpus: Sequence[Sequence[str]], k1: float = 1.2, b: float = 0.75):
        self.k1, self.b = k1, b
        self.tfs = [Counter(doc) for doc in corpus]
        self.lengths = np.array([len(doc) for doc in corpus], dtype=np.float64)
        self.n = len(corpus)
        self.avgdl = self.lengths.mean() if self.n else 0.0
        df = Counter()
        for tf in self.tfs:
            df.update(tf.keys())
        self.idf = {t: math.log(1.0 + (self.n - c + 0.5) / (c + 0.5)) for t, c in df.items()}

    def score(self, query_terms: Sequence[str]) -> np.ndarray:
        scores = np.zeros(self.n)
        if self.avgdl == 0:
            return scores
        for i, tf in enumerate(self.tfs):
            norm = self.k1 * (1.0 - self.b + self.b * self.lengths[i] / self.avgdl)
            s = 0.0
            for t in query_terms:
                f = tf.get(t, 0)
                if f:
                    s += self.idf[t] * f * (self.k1 + 1.0) / (f + norm)
            scores[i] = s
        return scores


def _cosine(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    dot = sum(w * b.get(t, 0.0) for t, w in a.items())
    if dot == 0.0:
        return 0.0
    na = math.sqrt(sum(w * w for w in a.values()))
    nb = math.sqrt(sum(w * w for w in b.values()))
    return dot / (na * nb)


def tfidf_cosine(query_terms: Sequence[str], corpus: Sequence[Sequence[str]]) -> np.ndarray:
    """Cosine between tf-idf vectors of the query and each document (smoothed idf)."""
    n = len(corpus)
    df = Counter()
    for doc in corpus:
        df.update(set(doc))

    def idf(t):
        return math.log((1.0 + n) / (1.0 + df.get(t, 0))) + 1.0

    q = {t: c * idf(t) for t, c in Counter(query_terms).items()}
    return np.array(
        [_cosine(q, {t: c * idf(t) for t, c in Counter(doc).items()}) for doc in corpus]
    )


def topicality(query_terms, docs, profile=None, k1=1.2, b=0.75):
    """Equal blend of tf-idf cosine and BM25 against the query."""
    corpus = [d.terms for d in docs]
    query_terms = [t for q in query_terms for t in tokenize(q)]
    return 0.5 * tfidf_cosine(query_terms, corpus) + 0.5 * BM25(corpus, k1, b).score(query_terms)


def habit(query_terms, docs, profile):
    return np.array([math.log1p(profile.clicks(d.url_host)) for d in docs])


def interest(query_terms, docs, profile):
    return np.array([_cosine(Counter(tokenize(d.body_text)), profile.interest_terms) for d in docs])


def novelty(query_terms, docs, profile=None):
    return np.array([1.0 / (1.0 + d.publish_rank) for d in docs])


def reliability(query_terms, docs, profile):
    # Trust indicator, with past clicks on the host as a small tiebreak.
    return np.array(
        [
            (1.0 if d.url_host in profile.trusted_hosts else 0.0)
            + 0.1 * math.log1p(profile.clicks(d.url_host))
            for d in docs
        ]
    )


def scope(query_terms, docs, profile=None):
    return np.array([min(1.0, d.length_tokens / 1000.0) for d in docs])


def _avg_sentence_length(doc: DocumentRecord) -> float:
    if doc.body_text.strip():
        sentences = [s for s in _SENTENCE_RE.split(doc.body_text) if tokenize(s)]
        if sentences:
            return sum(len(tokenize(s)) for s in sentences) / len(sentences)
    return float(doc.sentence_avg_len or 0.0)


def understandability(query_terms, docs, profile=None):
    """Shorter sentences read more easily: ``1 / (1 + avg_sentence_len / 10)``."""
    return np.array([1.0 / (1.0 + _avg_sentence_length(d) / 10.0) for d in docs])


Scorer = Callable[[Sequence[str], Sequence[DocumentRecord], UserProfile], Sequence[float]]

BASELINE_SCORERS: dict[Dimension, Scorer] = {
    Dimension.HABIT: habit,
    Dimension.INTEREST: interest,
    Dimension.NOVELTY: novelty,
    Dimension.RELIABILITY: reliability,
    Dimension.SCOPE: scope,
    Dimension.TOPICALITY: topicality,
    Dimension.UNDERSTANDABILITY: understandability,
}

# Names usable from a scorer config file.
NAMED_SCORERS: dict[str, Scorer] = {
    "habit": habit,
    "interest": interest,
    "novelty": novelty,
    "reliability": reliability,
    "scope": scope,
    "topicality": topicality,
    "understandability": understandability,
    "bm25": lambda q, docs, p=None: BM25([d.terms for d in docs]).score(
        [t for x in q for t in tokenize(x)]
    ),
    "tfidf": lambda q, docs, p=None: tfidf_cosine(
        [t for x in q for t in tokenize(x)], [d.terms for d in docs]
    ),
}


def score_dimension(dim, query_terms, docs, profile=None, scorer: Scorer | None = None):
    """Raw scores for one dimension, one finite float per document."""
    if not docs:
        raise InvalidInput("cannot score an empty document list")
    dim = Dimension.parse(dim)
    scorer = scorer or BASELINE_SCORERS[dim]
    scores = np.asarray(scorer(list(query_terms), list(docs), profile or UserProfile()), dtype=np.float64)
    if scores.shape != (len(docs),):
        raise ConfigError(f"{dim.value} scorer returned {scores.shape}, expected ({len(docs)},)")
    return scores


def build_score_matrix(
    query_id: str,
    query_terms: Sequence[str],
    docs: Sequence[DocumentRecord],
    profile: UserProfile | None = None,
    scorers: Mapping[Dimension | str, Scorer] | None = None,
) -> ScoreMatrix:
    """Score every document in every dimension; columns in ``DIMENSIONS`` order.

    Raises ``ConfigError`` if a dimension has no scorer or a scorer produces
    a non-finite value.
    """
    if not docs:
        raise InvalidInput(f"query {query_id!r} has no documents")
    if scorers is None:
        registry = dict(BASELINE_SCORERS)
    else:
        registry = {Dimension.parse(k): v for k, v in scorers.items()}
    missing = [d.value for d in DIMENSIONS if d not in registry]
    if missing:
        raise ConfigError(f"no scorer registered for: {', '.join(missing)}")

    columns = []
    for dim in DIMENSIONS:
        col = score_dimension(dim, query_terms, docs, profile, registry[dim])
        if not np.all(np.isfinite(col)):
            raise ConfigError(f"{dim.value} scorer produced a non-finite score for query {query_id!r}")
        columns.append(col)
    return ScoreMatrix(query_id, tuple(d.doc_id for d in docs), np.column_stack(columns))
