import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import column_fixture, make_matrix
from dimrel import (
    DIMENSIONS,
    Dimension,
    DimensionWeights,
    DocumentVector,
    InvalidInput,
    NormalizedScores,
    Provenance,
    ScoreMatrix,
    build_document_vectors,
    normalize_scores,
    project,
)


def test_dimension_order_is_alphabetical_and_complete():
    names = [d.value for d in DIMENSIONS]
    assert names == sorted(names)
    assert names == [
        "habit", "interest", "novelty", "reliability", "scope", "topicality", "understandability",
    ]
    assert [d.index for d in DIMENSIONS] == list(range(7))


def test_dimension_parse():
    assert Dimension.parse("Reliability") is Dimension.RELIABILITY
    assert Dimension.parse(" topicality ") is Dimension.TOPICALITY
    with pytest.raises(InvalidInput):
        Dimension.parse("freshness")


@pytest.mark.parametrize(
    "col, expected",
    [
        ([2, 4, 6], [0.0, 0.5, 1.0]),
        ([7, 7, 7], [0.5, 0.5, 0.5]),
        ([3], [0.5]),
        ([0, 10], [0.0, 1.0]),
    ],
)
def test_normalize_examples(col, expected):
    norm = normalize_scores(make_matrix(column_fixture(col, Dimension.INTEREST, fill=1.0)))
    assert norm.column(Dimension.INTEREST).tolist() == expected


def test_normalize_degenerate_columns_are_neutral():
    norm = normalize_scores(make_matrix(column_fixture([2, 4, 6], Dimension.NOVELTY, fill=3.0)))
    for d in DIMENSIONS:
        if d is not Dimension.NOVELTY:
            assert np.all(norm.column(d) == 0.5)


def test_score_matrix_rejects_bad_input():
    with pytest.raises(InvalidInput):
        make_matrix(np.zeros((0, 7)), doc_ids=[])
    with pytest.raises(InvalidInput):
        make_matrix([[np.nan] * 7])
    with pytest.raises(InvalidInput):
        make_matrix([[np.inf] * 7])
    with pytest.raises(InvalidInput):
        make_matrix(np.zeros((2, 7)), doc_ids=["a", "a"])
    with pytest.raises(InvalidInput):
        make_matrix(np.zeros((2, 6)))


def test_build_document_vector_examples():
    norm = NormalizedScores("q", ("a", "b", "c"), np.array([[0.25] * 7, [1.0] * 7, [0.0] * 7]))
    a, b, c = build_document_vectors(norm)
    assert a.coeffs[Dimension.HABIT][0] == 0.5
    assert a.coeffs[Dimension.HABIT][1] == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
    assert b.coeffs[Dimension.SCOPE] == (1.0, 0.0)
    assert c.coeffs[Dimension.SCOPE] == (0.0, 1.0)
    assert [v.doc_id for v in (a, b, c)] == ["a", "b", "c"]


def test_build_rejects_out_of_range():
    with pytest.raises(InvalidInput):
        NormalizedScores("q", ("a",), np.array([[1.5] * 7]))


def test_project_examples():
    v = DocumentVector("x", np.full(7, 0.5), np.full(7, 0.8660254))
    assert project(v, Dimension.TOPICALITY) == 0.25
    v = DocumentVector("x", np.ones(7), np.zeros(7))
    assert project(v, "habit") == 1.0
    norm = NormalizedScores("q", ("a",), np.full((1, 7), 0.37))
    (v,) = build_document_vectors(norm)
    assert abs(project(v, Dimension.INTEREST) - 0.37) <= 1e-12


def test_ket_is_unit_vector_in_own_basis():
    norm = NormalizedScores("q", ("a",), np.array([[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]]))
    (v,) = build_document_vectors(norm)
    for d in DIMENSIONS:
        assert np.linalg.norm(v.ket(d)) == pytest.approx(1.0, abs=1e-12)


def test_weights_types():
    u = DimensionWeights.uniform()
    assert u.provenance is Provenance.UNIFORM
    assert np.all(u.weights == 1 / 7)
    h = DimensionWeights.one_hot("reliability")
    assert h["reliability"] == 1.0 and h.weights.sum() == 1.0
    assert h.ranked_dimensions()[0] is Dimension.RELIABILITY
    with pytest.raises(InvalidInput):
        DimensionWeights(np.full(7, 1.5))
    with pytest.raises(InvalidInput):
        DimensionWeights.from_mapping({"habit": 0.1})
    m = DimensionWeights.from_mapping({d.value: 0.1 * i for i, d in enumerate(DIMENSIONS)})
    assert m[Dimension.SCOPE] == pytest.approx(0.4)


def test_types_are_immutable():
    m = make_matrix(np.ones((2, 7)))
    with pytest.raises(ValueError):
        m.raw[0, 0] = 3.0
    with pytest.raises(Exception):
        m.query_id = "other"


# -- properties ----------------------------------------------------------------

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def score_matrices(draw, max_docs=12):
    n = draw(st.integers(1, max_docs))
    return ScoreMatrix("q", tuple(f"d{i}" for i in range(n)), draw(arrays(float, (n, 7), elements=finite)))


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0))
def test_round_trip(x):
    (v,) = build_document_vectors(NormalizedScores("q", ("a",), np.full((1, 7), x)))
    for d in DIMENSIONS:
        assert abs(project(v, d) - x) <= 1e-12
        a, b = v.coeffs[d]
        assert a >= 0 and b >= 0
        assert abs(a * a + b * b - 1.0) <= 1e-9


@settings(max_examples=200, deadline=None)
@given(score_matrices())
def test_normalized_range_and_endpoints(m):
    norm = normalize_scores(m).norm
    assert np.all((norm >= 0) & (norm <= 1))
    for j in range(7):
        col = m.raw[:, j]
        if col.max() > col.min():
            assert 1.0 in norm[:, j] and 0.0 in norm[:, j]


@settings(max_examples=200, deadline=None)
@given(score_matrices())
def test_order_preservation(m):
    norm = normalize_scores(m).norm
    for j in range(7):
        order = np.argsort(m.raw[:, j], kind="stable")
        assert np.all(np.diff(norm[order, j]) >= 0)


moderate = st.floats(min_value=-100, max_value=100, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12).flatmap(lambda n: arrays(float, (n, 7), elements=moderate)),
       st.floats(0.1, 10.0), st.floats(-100.0, 100.0))
def test_affine_invariance(raw, a, b):
    m = make_matrix(raw)
    transformed = make_matrix(a * raw + b)
    span = raw.max(axis=0) - raw.min(axis=0)
    # well-conditioned columns only: constant, or spread at least 1
    keep = (span == 0) | (span >= 1.0)
    np.testing.assert_allclose(
        normalize_scores(transformed).norm[:, keep], normalize_scores(m).norm[:, keep], atol=1e-9, rtol=0
    )


@settings(max_examples=100, deadline=None)
@given(score_matrices())
def test_idempotent_on_normalized_columns(m):
    once = normalize_scores(m)
    twice = normalize_scores(ScoreMatrix(m.query_id, m.doc_ids, once.norm))
    for j in range(7):
        col = once.norm[:, j]
        if 0.0 in col and 1.0 in col:
            assert np.array_equal(twice.norm[:, j], col)


def test_huge_span_does_not_overflow():
    m = make_matrix(column_fixture([-1.5e308, 0.0, 1.5e308], Dimension.SCOPE))
    assert normalize_scores(m).column("scope").tolist() == [0.0, 0.5, 1.0]
