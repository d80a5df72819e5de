"""Session logs as JSON Lines.

One object per query::

    {"session_id": "s1", "query_id": "q1", "ts": 0, "query": "cheap flights",
     "docs": [{"doc_id": "d1", "host": "a.com", "title": "...", "body_len": 512,
               "sentence_avg_len": 14.0, "publish_rank": 3, "text": "...",
               "scores": [7 floats, habit..understandability]}],
     "sat_clicks": ["d1"], "grades": {"d1": 2}}

``scores`` on every document puts the query in pass-through mode; otherwise
the documents are scored by the configured scorers.  Queries are grouped by
session in order of first appearance and ordered by ``ts`` within a session
(ties keep file order).
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .errors import IngestError, InvalidInput
from .model import N_DIMS, ScoreMatrix
from .scorers import DocumentRecord, tokenize
from .session import QueryRecord, SessionLog

__all__ = ["parse_lines", "read_sessions", "query_to_record", "dump_sessions", "write_sessions"]


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_num(x) -> bool:
    return (_is_int(x) or isinstance(x, float)) and math.isfinite(x)


def _doc(obj, lineno: int) -> tuple[DocumentRecord, list[float] | None]:
    if not isinstance(obj, dict):
        raise IngestError("each doc must be an object", lineno)
    doc_id = obj.get("doc_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise IngestError("doc_id must be a non-empty string", lineno)

    def field(name, check, default, kind):
        value = obj.get(name, default)
        if value is None:
            return default
        if not check(value):
            raise IngestError(f"doc {doc_id!r}: {name} must be {kind}", lineno)
        return value

    scores = obj.get("scores")
    if scores is not None:
        if not isinstance(scores, list) or len(scores) != N_DIMS or not all(map(_is_num, scores)):
            raise IngestError(f"doc {doc_id!r}: scores must be {N_DIMS} finite numbers", lineno)
    body_len = field("body_len", lambda v: _is_int(v) and v >= 0, 0, "an integer >= 0")
    publish_rank = field("publish_rank", lambda v: _is_int(v) and v >= 0, 0, "an integer >= 0")
    sentence_avg_len = field("sentence_avg_len", lambda v: _is_num(v) and v >= 0, None, "a number >= 0")
    text = field("text", lambda v: isinstance(v, str), "", "a string")
    record = DocumentRecord(
        doc_id=doc_id,
        url_host=field("host", lambda v: isinstance(v, str), "", "a string"),
        body_text=text,
        title=field("title", lambda v: isinstance(v, str), "", "a string"),
        length_tokens=body_len,
        publish_rank=publish_rank,
        sentence_avg_len=None if sentence_avg_len is None else float(sentence_avg_len),
    )
    return record, scores


def _record(obj, lineno: int) -> tuple[str, str | None, QueryRecord]:
    if not isinstance(obj, dict):
        raise IngestError("expected a JSON object", lineno)
    for name in ("session_id", "query_id"):
        if not isinstance(obj.get(name), str) or not obj[name]:
            raise IngestError(f"{name} must be a non-empty string", lineno)
    if not _is_int(obj.get("ts")):
        raise IngestError("ts must be an integer", lineno)
    query = obj.get("query", "")
    if not isinstance(query, str):
        raise IngestError("query must be a string", lineno)
    docs_raw = obj.get("docs")
    if not isinstance(docs_raw, list) or not docs_raw:
        raise IngestError("docs must be a non-empty array", lineno)
    parsed = [_doc(d, lineno) for d in docs_raw]
    docs = tuple(p[0] for p in parsed)
    scored = [p[1] is not None for p in parsed]
    if any(scored) and not all(scored):
        raise IngestError("mixing scored and unscored docs within one query", lineno)

    sat = obj.get("sat_clicks", [])
    if not isinstance(sat, list) or not all(isinstance(d, str) for d in sat):
        raise IngestError("sat_clicks must be an array of doc_id strings", lineno)
    grades = obj.get("grades")
    if grades is not None:
        if not isinstance(grades, dict) or not all(_is_int(g) and g >= 0 for g in grades.values()):
            raise IngestError("grades must map doc_id to an integer >= 0", lineno)
    user_id = obj.get("user_id")

    try:
        matrix = None
        if all(scored):
            matrix = ScoreMatrix(obj["query_id"], tuple(d.doc_id for d in docs), np.array([p[1] for p in parsed]))
        record = QueryRecord(
            query_id=obj["query_id"],
            query_terms=tuple(tokenize(query)),
            docs=docs,
            scores=matrix,
            sat_doc_ids=frozenset(sat),
            graded_relevance=grades,
            ts=obj["ts"],
            query=query,
        )
    except InvalidInput as exc:
        raise IngestError(str(exc), lineno) from None
    return obj["session_id"], user_id if isinstance(user_id, str) else None, record


def parse_lines(lines: Iterable[str]) -> list[SessionLog]:
    """Parse JSONL text lines into sessions.  Blank lines are skipped."""
    grouped: dict[str, list[tuple[int, QueryRecord]]] = {}
    users: dict[str, str | None] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"invalid JSON ({exc.msg})", lineno) from None
        session_id, user_id, record = _record(obj, lineno)
        entries = grouped.setdefault(session_id, [])
        if any(r.query_id == record.query_id for _, r in entries):
            raise IngestError(f"duplicate query_id {record.query_id!r} in session {session_id!r}", lineno)
        entries.append((lineno, record))
        users.setdefault(session_id, user_id)

    sessions = []
    for session_id, entries in grouped.items():
        entries.sort(key=lambda e: (e[1].ts, e[0]))
        sessions.append(SessionLog(session_id, tuple(r for _, r in entries), users[session_id]))
    return sessions


def read_sessions(source: str | Path | IO[str]) -> list[SessionLog]:
    if hasattr(source, "read"):
        return parse_lines(source)
    with open(source, encoding="utf-8") as fh:
        return parse_lines(fh)


def query_to_record(session_id: str, query: QueryRecord) -> dict:
    docs = []
    for i, d in enumerate(query.docs or [DocumentRecord(doc_id) for doc_id in query.doc_ids]):
        item = {
            "doc_id": d.doc_id,
            "host": d.url_host,
            "title": d.title,
            "body_len": d.length_tokens,
            "sentence_avg_len": d.sentence_avg_len,
            "publish_rank": d.publish_rank,
        }
        if d.body_text:
            item["text"] = d.body_text
        if query.scores is not None:
            item["scores"] = [float(x) for x in query.scores.raw[i]]
        docs.append(item)
    record = {
        "session_id": session_id,
        "query_id": query.query_id,
        "ts": query.ts,
        "query": query.query,
        "docs": docs,
        "sat_clicks": sorted(query.sat_doc_ids),
    }
    if query.graded_relevance is not None:
        record["grades"] = {d: query.graded_relevance[d] for d in query.doc_ids if d in query.graded_relevance}
    return record


def dump_sessions(sessions: Iterable[SessionLog], fh: IO[str]) -> int:
    n = 0
    for session in sessions:
        for query in session.queries:
            fh.write(json.dumps(query_to_record(session.session_id, query), ensure_ascii=False))
            fh.write("\n")
            n += 1
    return n


def write_sessions(sessions: Iterable[SessionLog], path: str | Path) -> int:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        return dump_sessions(sessions, fh)
