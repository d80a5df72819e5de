import io
import json

import numpy as np
import pytest

from dimrel import IngestError, generate, GeneratorConfig, replay_within_session
from dimrel.logio import dump_sessions, parse_lines, read_sessions

SCORED_DOC = {"doc_id": "d1", "host": "a.com", "title": "t", "body_len": 10, "sentence_avg_len": 12.0,
              "publish_rank": 0, "scores": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]}


def line(**overrides):
    rec = {
        "session_id": "s1",
        "query_id": "q1",
        "ts": 0,
        "query": "cheap flights",
        "docs": [SCORED_DOC, dict(SCORED_DOC, doc_id="d2", scores=[0.7] * 7)],
        "sat_clicks": ["d2"],
    }
    rec.update(overrides)
    return json.dumps(rec)


def test_parse_passthrough_and_ordering():
    lines = [
        line(query_id="late", ts=5),
        line(session_id="s2", query_id="x"),
        line(query_id="early", ts=1, grades={"d1": 2}),
    ]
    sessions = parse_lines(lines)
    assert [s.session_id for s in sessions] == ["s1", "s2"]
    assert [q.query_id for q in sessions[0].queries] == ["early", "late"]
    q = sessions[0].queries[0]
    assert q.passthrough
    assert q.scores.raw[0].tolist() == SCORED_DOC["scores"]
    assert q.query_terms == ("cheap", "flights")
    assert q.labels() == {"d1": 2, "d2": 0}
    assert sessions[1].queries[0].labels() == {"d1": 0, "d2": 1}


def test_unscored_docs_use_scorer_mode():
    docs = [{"doc_id": "a", "host": "x.org", "text": "cheap flights to rome", "body_len": 4},
            {"doc_id": "b", "host": "y.org", "text": "gardening tips", "body_len": 2}]
    (s,) = parse_lines([line(docs=docs, sat_clicks=["a"])])
    q = s.queries[0]
    assert not q.passthrough
    m = q.score_matrix()
    assert m.raw.shape == (2, 7)
    assert m.column("topicality")[0] > m.column("topicality")[1]


@pytest.mark.parametrize(
    "bad, msg",
    [
        ('{"session_id": ', "invalid JSON"),
        (line(ts="0"), "ts"),
        (line(session_id=3), "session_id"),
        (line(docs=[]), "docs"),
        (line(docs=[SCORED_DOC, {"doc_id": "d2"}]), "mixing"),
        (line(docs=[dict(SCORED_DOC, scores=[1, 2])]), "scores"),
        (line(sat_clicks=["zzz"]), "SAT"),
        (line(grades={"d1": -1}), "grades"),
        (line(docs=[SCORED_DOC, SCORED_DOC]), "duplicate"),
        (line(docs=[dict(SCORED_DOC, body_len=-3)]), "body_len"),
    ],
)
def test_ingestion_errors_name_the_line(bad, msg):
    with pytest.raises(IngestError, match=msg) as err:
        parse_lines([line(), "", bad])
    assert err.value.line == 3
    assert "line 3" in str(err.value)


def test_duplicate_query_id_in_session():
    with pytest.raises(IngestError, match="duplicate query_id"):
        parse_lines([line(), line()])


def test_round_trip_through_jsonl():
    sessions, _ = generate(GeneratorConfig(seed=3, n_sessions=4, queries_per_session=(2, 4)))
    buf = io.StringIO()
    n = dump_sessions(sessions, buf)
    assert n == sum(len(s.queries) for s in sessions)
    back = read_sessions(io.StringIO(buf.getvalue()))
    assert [s.session_id for s in back] == [s.session_id for s in sessions]
    for a, b in zip(sessions, back):
        for qa, qb in zip(a.queries, b.queries):
            assert qa.query_id == qb.query_id
            assert np.array_equal(qa.scores.raw, qb.scores.raw)
            assert qa.sat_doc_ids == qb.sat_doc_ids
            assert qa.graded_relevance == qb.graded_relevance
        assert replay_within_session(a) == replay_within_session(b)
    buf2 = io.StringIO()
    dump_sessions(back, buf2)
    assert buf2.getvalue() == buf.getvalue()


def test_emitted_records_have_exactly_the_documented_fields():
    sessions, _ = generate(GeneratorConfig(seed=1, n_sessions=1, queries_per_session=(1, 1), docs_per_query=(3, 3)))
    buf = io.StringIO()
    dump_sessions(sessions, buf)
    rec = json.loads(buf.getvalue())
    assert list(rec) == ["session_id", "query_id", "ts", "query", "docs", "sat_clicks", "grades"]
    assert set(rec["docs"][0]) == {"doc_id", "host", "title", "body_len", "sentence_avg_len", "publish_rank", "scores"}
