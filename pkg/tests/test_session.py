from dataclasses import replace

import numpy as np
import pytest

from conftest import column_fixture, make_query, make_session
from dimrel import (
    DIMENSIONS,
    Dimension,
    DimensionWeights,
    EmptyAnalysis,
    InvalidInput,
    Provenance,
    Strategy,
    capture_weights,
    normalize_scores,
    replay_cross_session,
    replay_within_session,
    single_dimension_rerank,
    stability_analysis,
)
from dimrel.session import CROSS, WITHIN, replay


def random_session(rng, session_id="s", n_queries=4, n_docs=8, clicks=1):
    queries = []
    for i in range(n_queries):
        raw = rng.random((n_docs, 7))
        sat = {f"d{j}" for j in rng.choice(n_docs, clicks, replace=False)}
        queries.append(make_query(raw, sat=sat, query_id=f"{session_id}-{i}"))
    return make_session(session_id, queries)


def test_strategy_parse():
    assert Strategy.parse("captured").kind == "captured"
    assert Strategy.parse("fixed:Reliability") == Strategy.fixed(Dimension.RELIABILITY)
    assert Strategy.parse("fixed:reliability").name == "fixed:reliability"
    assert Strategy.parse("fixed:interest").label == "Interest"
    for bad in ("fixed", "fixed:", "captured:x", "best", "fixed:colour"):
        with pytest.raises(InvalidInput):
            Strategy.parse(bad)


def test_second_query_uses_reliability_weight_one():
    q1 = make_query(column_fixture([1.0, 5.0, 3.0], Dimension.RELIABILITY), sat={"d1"}, query_id="q1")
    rng = np.random.default_rng(0)
    q2 = make_query(rng.random((5, 7)), query_id="q2")
    steps = replay_within_session(make_session("s", [q1, q2]))
    assert steps[0].weights == DimensionWeights.uniform()
    assert not steps[0].evaluated and steps[1].evaluated
    w = steps[1].weights
    assert w.provenance is Provenance.CAPTURED
    assert w[Dimension.RELIABILITY] == 1.0
    # other columns of q1 are constant -> 0.5
    assert all(abs(w[d] - 0.5) <= 1e-12 for d in DIMENSIONS if d is not Dimension.RELIABILITY)


def test_single_query_session_is_uniform():
    rng = np.random.default_rng(1)
    steps = replay_within_session(random_session(rng, n_queries=1))
    assert len(steps) == 1
    assert steps[0].weights.provenance is Provenance.UNIFORM


@pytest.mark.parametrize("dim", [Dimension.TOPICALITY, Dimension.INTEREST])
def test_fixed_mode_matches_single_dimension(dim):
    rng = np.random.default_rng(2)
    session = random_session(rng, n_queries=5)
    steps = replay_within_session(session, Strategy.fixed(dim))
    for step, q in zip(steps, session.queries):
        assert step.ranking == single_dimension_rerank(normalize_scores(q.scores), dim)
        assert step.weights.provenance is Provenance.FIXED


def test_uniform_mode():
    rng = np.random.default_rng(3)
    steps = replay_within_session(random_session(rng), "uniform")
    assert all(s.weights == DimensionWeights.uniform() for s in steps)


def test_captured_weights_come_from_previous_query():
    rng = np.random.default_rng(4)
    session = random_session(rng, n_queries=5, clicks=2)
    steps = replay_within_session(session)
    for i in range(1, 5):
        prev = session.queries[i - 1]
        assert steps[i].weights == capture_weights(prev.scores, prev.sat_doc_ids)


def test_weights_depend_only_on_previous_query():
    rng = np.random.default_rng(5)
    session = random_session(rng, n_queries=4)
    base = replay_within_session(session)
    queries = list(session.queries)
    # mutate query 3 (index 2): weights used for query 2 must not change
    queries[2] = make_query(rng.random((8, 7)), sat={"d3"}, query_id=queries[2].query_id)
    mutated = replay_within_session(make_session("s", queries))
    assert mutated[1].weights == base[1].weights
    assert mutated[1].ranking == base[1].ranking


def test_carry_forward_option():
    rng = np.random.default_rng(6)
    q = [make_query(rng.random((6, 7)), sat=s, query_id=f"q{i}") for i, s in enumerate([{"d0"}, (), {"d1"}])]
    session = make_session("s", q)
    default = replay_within_session(session)
    assert default[2].weights.provenance is Provenance.UNIFORM
    carried = replay_within_session(session, carry_forward=True)
    assert carried[2].weights.provenance is Provenance.CARRIED_FORWARD
    assert np.array_equal(carried[2].weights.weights, carried[1].weights.weights)


def test_replay_is_deterministic():
    rng = np.random.default_rng(7)
    session = random_session(rng)
    assert replay_within_session(session) == replay_within_session(session)


def test_cross_session_uses_last_query():
    rng = np.random.default_rng(8)
    s1 = random_session(rng, "a", n_queries=3)
    s2 = random_session(rng, "b", n_queries=2)
    steps = replay_cross_session([s1, s2])
    assert [s.query_id for s in steps] == ["a-2", "b-1"]
    assert steps[0].weights.provenance is Provenance.UNIFORM
    last = s1.queries[-1]
    (sat,) = last.sat_doc_ids
    np.testing.assert_allclose(steps[1].weights.weights, normalize_scores(last.scores).row(sat), atol=1e-12, rtol=0)


def test_cross_session_single_and_fixed():
    rng = np.random.default_rng(9)
    (step,) = replay_cross_session([random_session(rng, "only")])
    assert step.weights.provenance is Provenance.UNIFORM
    sessions = [random_session(rng, f"s{i}") for i in range(3)]
    for step, s in zip(replay_cross_session(sessions, "fixed:interest"), sessions):
        assert step.ranking == single_dimension_rerank(normalize_scores(s.queries[-1].scores), "interest")


def test_replay_dispatch_and_errors():
    rng = np.random.default_rng(10)
    sessions = [random_session(rng, f"s{i}", n_queries=2) for i in range(2)]
    assert len(replay(sessions, "captured", WITHIN)) == 4
    assert len(replay(sessions, "captured", CROSS)) == 2
    with pytest.raises(InvalidInput):
        replay(sessions, "captured", "sideways")
    with pytest.raises(InvalidInput):
        replay_cross_session([])
    with pytest.raises(InvalidInput):
        make_session("s", [])
    with pytest.raises(InvalidInput):
        make_query(np.zeros((2, 7)), sat={"nope"})


def constant_reliability_session(sid, n_queries=3):
    qs = [
        make_query(column_fixture([0.0, 2.0, 1.0], Dimension.RELIABILITY), sat={"d1"}, query_id=f"{sid}{i}")
        for i in range(n_queries)
    ]
    return make_session(sid, qs)


def top3_session(sid, tops):
    """Each query's single SAT doc scores 1 on the listed dims and 0 elsewhere."""
    qs = []
    for i, dims in enumerate(tops):
        raw = np.zeros((2, 7))
        for d in dims:
            raw[0, d.index] = 1.0
        raw[1] = 1.0 - raw[0]
        qs.append(make_query(raw, sat={"d0"}, query_id=f"{sid}{i}"))
    return make_session(sid, qs)


def test_stability_constant_top_dimension():
    for k in range(1, 8):
        report = stability_analysis([constant_reliability_session("a")], k)
        assert report.fraction_stable == 1.0


def test_stability_disjoint_top3_is_unstable():
    D = Dimension
    s = top3_session("x", [(D.HABIT, D.INTEREST, D.NOVELTY), (D.RELIABILITY, D.SCOPE, D.TOPICALITY)])
    report = stability_analysis([s], 3)
    assert report.per_session == {"x": False}
    assert report.fraction_stable == 0.0
    assert report.n_boundary_ties == 0


def test_stability_exclusions_and_empty():
    rng = np.random.default_rng(11)
    single = random_session(rng, "single", n_queries=1)
    no_sat = make_session("nosat", [make_query(rng.random((4, 7)), query_id=f"n{i}") for i in range(2)])
    report = stability_analysis([single, no_sat, constant_reliability_session("ok")], 3)
    assert report.per_session == {"single": None, "nosat": None, "ok": True}
    assert (report.n_eligible, report.n_excluded) == (1, 2)
    with pytest.raises(EmptyAnalysis):
        stability_analysis([single, no_sat], 3)
    with pytest.raises(InvalidInput):
        stability_analysis([single], 0)
    with pytest.raises(InvalidInput):
        stability_analysis([single], 8)


def test_stability_monotone_in_top_k():
    rng = np.random.default_rng(12)
    sessions = [random_session(rng, f"s{i}", n_queries=int(rng.integers(2, 6))) for i in range(60)]
    fractions = [stability_analysis(sessions, k).fraction_stable for k in range(1, 8)]
    assert all(a <= b for a, b in zip(fractions, fractions[1:]))
    assert fractions[-1] == 1.0


def test_stability_reports_boundary_ties():
    # every query's SAT doc is max in all dims -> all weights 1.0 -> tie at every k < 7
    qs = [make_query(np.vstack([np.ones(7), np.zeros(7)]), sat={"d0"}, query_id=f"q{i}") for i in range(3)]
    report = stability_analysis([make_session("t", qs)], 3)
    assert report.n_boundary_ties == 3
    assert report.fraction_stable == 1.0
    assert report.tie_break == "dimension order"


def test_resolved_sessions_keep_identity_when_passthrough():
    rng = np.random.default_rng(13)
    s = random_session(rng)
    assert s.resolved() is s
    q = replace(s.queries[0], graded_relevance={"d0": 2})
    assert q.labels()["d0"] == 2 and q.labels()["d1"] == 0
