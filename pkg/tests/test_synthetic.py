from geodiv import run_pipeline
from geodiv.synthetic import (
    KIND_SCORED,
    KIND_SINGLE_GEOPATH,
    KIND_SINGLE_ROUTE,
    generate_corpus,
)


def test_generation_is_deterministic():
    a = generate_corpus(n_pairs=25, seed=5)
    b = generate_corpus(n_pairs=25, seed=5)
    assert a.trace_lines == b.trace_lines
    assert a.geodb_lines == b.geodb_lines
    assert a.planted == b.planted
    c = generate_corpus(n_pairs=25, seed=6)
    assert c.trace_lines != a.trace_lines


def test_min_lines_mode():
    corpus = generate_corpus(min_lines=400, seed=1)
    assert corpus.line_count >= 400


def test_pipeline_recovers_planted_structure(tmp_path):
    corpus = generate_corpus(n_pairs=50, seed=77)
    traces, geodb = tmp_path / "traces.jsonl", tmp_path / "geodb.csv"
    corpus.write(traces, geodb)
    summary = run_pipeline(traces, geodb)

    by_kind = {KIND_SINGLE_ROUTE: 0, KIND_SINGLE_GEOPATH: 0, KIND_SCORED: 0}
    for pair in corpus.planted:
        by_kind[pair.kind] += 1
    assert summary.total_pairs == len(corpus.planted)
    assert summary.pairs_removed_stage1 == by_kind[KIND_SINGLE_ROUTE]
    assert summary.pairs_removed_stage2 == by_kind[KIND_SINGLE_GEOPATH]
    assert summary.pairs_scored == by_kind[KIND_SCORED]

    planted = {(p.src, p.dst): p for p in corpus.planted}
    for report in summary.per_pair:
        truth = planted[(report.src, report.dst)]
        assert report.ip_route_count == truth.ip_route_count
        assert report.geo_path_count == truth.geo_path_count
        assert report.cluster_count == truth.cluster_count
