import numpy as np
import pytest

from dimrel import DIMENSIONS, QueryRecord, ScoreMatrix, SessionLog


def make_matrix(raw, query_id="q", doc_ids=None):
    raw = np.asarray(raw, dtype=float)
    if doc_ids is None:
        doc_ids = [f"d{i}" for i in range(raw.shape[0])]
    return ScoreMatrix(query_id, tuple(doc_ids), raw)


def make_query(raw, sat=(), query_id="q", grades=None, doc_ids=None):
    m = make_matrix(raw, query_id, doc_ids)
    return QueryRecord(query_id=query_id, scores=m, sat_doc_ids=frozenset(sat), graded_relevance=grades)


def make_session(session_id, queries):
    return SessionLog(session_id, tuple(queries))


def column_fixture(col, dim, fill=0.0):
    """n x 7 matrix whose ``dim`` column is ``col`` and the rest constant."""
    raw = np.full((len(col), len(DIMENSIONS)), fill)
    raw[:, dim.index] = col
    return raw


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
