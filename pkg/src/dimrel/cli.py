"""Command-line interface: ``dimrel {rerank,eval,analyze-stability,generate}``.

Exit codes: 0 success, 2 unparsable input, 3 bad configuration,
4 nothing to evaluate or analyze, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from .errors import ConfigError, EmptyAnalysis, IngestError, InvalidInput
from .evaluation import evaluate_strategies, parse_cutoffs
from .logio import read_sessions, write_sessions
from .model import DIMENSIONS, Dimension
from .scorers import BASELINE_SCORERS, NAMED_SCORERS, UserProfile
from .session import PROTOCOLS, WITHIN, Strategy, default_strategies, replay, stability_analysis
from .synth import GeneratorConfig, generate, planted_one_hot, truth_to_json

EXIT_OK, EXIT_PARSE, EXIT_CONFIG, EXIT_EMPTY, EXIT_IO = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def load_scorer_config(path):
    """Read a JSON scorer config.

    ``{"scorers": {"topicality": "bm25", ...}, "profile": {"host_click_counts": {...},
    "interest_terms": {...}, "trusted_hosts": [...]}}``.  Dimensions left out of
    ``scorers`` use their baseline scorer.
    """
    if path is None:
        return None, None
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scorer config {path}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"scorer config {path}: expected an object")
    registry = dict(BASELINE_SCORERS)
    for dim, name in (data.get("scorers") or {}).items():
        try:
            dim = Dimension.parse(dim)
        except InvalidInput as exc:
            raise ConfigError(str(exc)) from None
        if name not in NAMED_SCORERS:
            raise ConfigError(f"unknown scorer {name!r} for {dim.value}; known: {', '.join(NAMED_SCORERS)}")
        registry[dim] = NAMED_SCORERS[name]
    try:
        profile = UserProfile.from_dict(data.get("profile"))
    except (InvalidInput, TypeError, ValueError) as exc:
        raise ConfigError(f"scorer config {path}: bad profile ({exc})") from None
    return registry, profile


def _load(paths):
    sessions = []
    for path in paths:
        try:
            sessions.extend(read_sessions(path))
        except IngestError as exc:
            raise CliError(f"{path}: {exc}", EXIT_PARSE) from None
    ids = [s.session_id for s in sessions]
    if len(set(ids)) != len(ids):
        raise CliError("a session_id appears in more than one input file", EXIT_PARSE)
    return sessions


def _strategy(text):
    try:
        return Strategy.parse(text)
    except InvalidInput as exc:
        raise ConfigError(str(exc)) from None


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        yield fh


def cmd_rerank(args) -> int:
    mode = _strategy(args.mode)
    scorers, profile = load_scorer_config(args.scorer_config)
    sessions = _load(args.inputs)
    steps = replay(sessions, mode, args.protocol, scorers, profile) if sessions else []
    with _output(args.output) as out:
        for step in steps:
            if not (step.evaluated or args.include_first):
                continue
            record = {
                "session_id": step.session_id,
                "query_id": step.query_id,
                "protocol": args.protocol,
                "mode": mode.name,
                "weights": [float(x) for x in step.weights.weights],
                "weights_provenance": step.weights.provenance.value,
                "ranking": list(step.ranking.doc_ids),
                "scores": list(step.ranking.combined_scores),
            }
            out.write(json.dumps(record) + "\n")
    return EXIT_OK


def cmd_eval(args) -> int:
    cutoffs = parse_cutoffs(args.k)
    if args.strategies:
        strategies = [_strategy(s) for s in args.strategies.split(",") if s.strip()]
    else:
        strategies = default_strategies()
    scorers, profile = load_scorer_config(args.scorer_config)
    sessions = _load(args.inputs)
    if not sessions:
        raise EmptyAnalysis("input contains no queries")
    report = evaluate_strategies(
        sessions, strategies, cutoffs, args.protocol, scorers, profile, include_first=args.include_first
    )
    if args.output:
        with _output(args.output) as out:
            out.write(report.to_csv())
        print(report.to_table())
    else:
        sys.stdout.write(report.to_csv())
    return EXIT_OK


def cmd_analyze_stability(args) -> int:
    scorers, profile = load_scorer_config(args.scorer_config)
    sessions = _load(args.inputs)
    report = stability_analysis(sessions, args.top_k, scorers, profile)
    print(f"fraction_stable: {report.fraction_stable:.4f}")
    print(f"top_k: {report.top_k}")
    print(f"stable: {report.n_stable}  eligible: {report.n_eligible}  excluded: {report.n_excluded}")
    print(f"boundary_ties: {report.n_boundary_ties}  (tie-break: {report.tie_break})")
    if args.per_session:
        for sid, flag in report.per_session.items():
            print(f"{sid}\t{'excluded' if flag is None else 'stable' if flag else 'unstable'}")
    if args.output:
        with _output(args.output) as out:
            json.dump(
                {
                    "top_k": report.top_k,
                    "fraction_stable": report.fraction_stable,
                    "n_stable": report.n_stable,
                    "n_eligible": report.n_eligible,
                    "n_excluded": report.n_excluded,
                    "n_boundary_ties": report.n_boundary_ties,
                    "tie_break": report.tie_break,
                    "per_session": report.per_session,
                },
                out,
                indent=2,
            )
            out.write("\n")
    return EXIT_OK


def _range(text, name):
    lo, sep, hi = str(text).partition("-")
    try:
        lo = int(lo)
        hi = int(hi) if sep else lo
    except ValueError:
        raise ConfigError(f"--{name} expects N or MIN-MAX, got {text!r}") from None
    return lo, hi


def _planted(text):
    if text is None:
        return None
    text = text.strip().lower()
    if text.startswith("one-hot:"):
        try:
            return planted_one_hot(text.split(":", 1)[1])
        except InvalidInput as exc:
            raise ConfigError(str(exc)) from None
    if text == "uniform":
        return tuple([1.0 / len(DIMENSIONS)] * len(DIMENSIONS))
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError("--planted expects one-hot:<dim>, uniform or 7 comma-separated weights") from None


def cmd_generate(args) -> int:
    config = GeneratorConfig(
        seed=args.seed,
        n_sessions=args.sessions,
        queries_per_session=_range(args.queries, "queries"),
        docs_per_query=_range(args.docs, "docs"),
        planted_weights=_planted(args.planted),
        concentration=args.concentration,
        click_noise=args.noise,
        drift=args.drift,
        redraw_per_query=args.redraw_per_query,
        clicks_per_query=args.clicks,
    )
    sessions, truth = generate(config)
    output = Path(args.output)
    truth_path = Path(args.truth) if args.truth else output.with_name(output.stem + ".truth.json")
    n_queries = write_sessions(sessions, output)
    with open(truth_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(truth_to_json(truth), fh, indent=1)
        fh.write("\n")
    n_docs = sum(len(q.doc_ids) for s in sessions for q in s.queries)
    n_sat = sum(len(q.sat_doc_ids) for s in sessions for q in s.queries)
    print(f"sessions: {len(sessions)}  queries: {n_queries}  docs: {n_docs}  sat_clicks: {n_sat}")
    print(f"corpus: {output}")
    print(f"truth: {truth_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimrel", description="Multidimensional relevance weight capture and re-ranking."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("inputs", nargs="+", help="session log(s) in JSONL format")
        p.add_argument("--scorer-config", help="JSON scorer config for logs without pre-computed scores")

    def protocol(p):
        p.add_argument("--protocol", choices=PROTOCOLS, default=WITHIN)
        p.add_argument(
            "--include-first", action="store_true",
            help="also emit/evaluate the opening query (or session), ranked with uniform weights",
        )

    p = sub.add_parser("rerank", help="re-rank queries and write one JSON ranking record per query")
    common(p)
    protocol(p)
    p.add_argument("--mode", default="captured", help="captured | uniform | fixed:<dimension>")
    p.add_argument("-o", "--output", help="output JSONL (default stdout)")
    p.set_defaults(func=cmd_rerank)

    p = sub.add_parser("eval", help="NDCG comparison of ranking strategies (CSV)")
    common(p)
    protocol(p)
    p.add_argument("--k", default="1,5,10,all", help="comma-separated cutoffs; 'all' for the full list")
    p.add_argument("--strategies", help="comma-separated modes (default: 7 fixed dimensions + captured)")
    p.add_argument("-o", "--output", help="CSV path; the table is printed to stdout (default: CSV to stdout)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("analyze-stability", help="top-k dimension stability across session queries")
    common(p)
    p.add_argument("--top-k", type=int, default=3)
    p.add_argument("--per-session", action="store_true", help="list each session's flag")
    p.add_argument("-o", "--output", help="also write the report as JSON")
    p.set_defaults(func=cmd_analyze_stability)

    p = sub.add_parser("generate", help="write a synthetic corpus and its planted-weights sidecar")
    p.add_argument("--sessions", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--queries", default="5-10", help="queries per session, N or MIN-MAX")
    p.add_argument("--docs", default="20", help="documents per query, N or MIN-MAX")
    p.add_argument("--planted", help="one-hot:<dim>, uniform, or 7 comma-separated weights (default: random per session)")
    p.add_argument("--concentration", type=float, default=2.0)
    p.add_argument("--noise", type=float, default=0.05, help="click noise standard deviation")
    p.add_argument("--drift", type=float, default=0.0)
    p.add_argument("--redraw-per-query", action="store_true")
    p.add_argument("--clicks", type=int, default=1, help="SAT clicks per query")
    p.add_argument("-o", "--output", default="corpus.jsonl")
    p.add_argument("--truth", help="truth sidecar path (default: <output stem>.truth.json)")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except IngestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EmptyAnalysis as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (ConfigError, InvalidInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
