import json

from geodiv.cli import main

REPORT_FILES = ("report.json", "pairs.csv", "compression_ecdf.csv", "gdi_ratio_ecdf.csv")


def test_pipeline_subcommand(seven_route_corpus, tmp_path, capsys):
    traces, geodb, expected = seven_route_corpus
    out = tmp_path / "out"
    rc = main(
        ["pipeline", "--traces", str(traces), "--geodb", str(geodb), "--out", str(out), "--jobs", "1"]
    )
    assert rc == 0
    for name in REPORT_FILES:
        assert (out / name).exists()
    assert "1 scored" in capsys.readouterr().out
    row = (out / "pairs.csv").read_text().splitlines()[1].split(",")
    assert row[2] == str(expected["ip_routes"])
    assert row[4] == str(expected["clusters"])
    assert row[5] == "2.333333"


def test_pipeline_threshold_flag_changes_clustering(seven_route_corpus, tmp_path):
    traces, geodb, _ = seven_route_corpus
    out = tmp_path / "wide"
    rc = main(
        [
            "pipeline",
            "--traces", str(traces),
            "--geodb", str(geodb),
            "--out", str(out),
            "--threshold-km", "5000",
            "--jobs", "1",
        ]
    )
    assert rc == 0
    row = (out / "pairs.csv").read_text().splitlines()[1].split(",")
    assert row[4] == "1"  # everything merges at a continental threshold


def test_cluster_then_gdi_matches_pipeline(seven_route_corpus, tmp_path):
    traces, geodb, _ = seven_route_corpus
    direct = tmp_path / "direct"
    staged = tmp_path / "staged"
    assert main(
        ["pipeline", "--traces", str(traces), "--geodb", str(geodb), "--out", str(direct), "--jobs", "1"]
    ) == 0
    assert main(
        ["cluster", "--traces", str(traces), "--geodb", str(geodb), "--out", str(staged), "--jobs", "1"]
    ) == 0
    clusters_file = staged / "clusters.json"
    assert clusters_file.exists()
    payload = json.loads(clusters_file.read_text())
    assert len(payload["pairs"]) == 1
    assert len(payload["pairs"][0]["clusters"]) == 3
    assert main(
        ["gdi", "--clusters", str(clusters_file), "--out", str(staged / "scored"), "--jobs", "1"]
    ) == 0
    for name in REPORT_FILES:
        assert (direct / name).read_bytes() == (staged / "scored" / name).read_bytes()


def test_missing_traces_file_is_input_error(tmp_path, capsys):
    geodb = tmp_path / "geodb.csv"
    geodb.write_text("10.0.0.0/8,0.0,0.0\n", encoding="utf-8")
    rc = main(
        [
            "pipeline",
            "--traces", str(tmp_path / "missing.jsonl"),
            "--geodb", str(geodb),
            "--out", str(tmp_path / "out"),
        ]
    )
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_malformed_trace_line_reports_location(tmp_path, capsys):
    traces = tmp_path / "traces.jsonl"
    geodb = tmp_path / "geodb.csv"
    traces.write_text('{"src":"10.0.0.1","dst":"10.9.0.1","hops":[]}\n{broken\n', encoding="utf-8")
    geodb.write_text("10.0.0.0/8,0.0,0.0\n", encoding="utf-8")
    rc = main(
        ["pipeline", "--traces", str(traces), "--geodb", str(geodb), "--out", str(tmp_path / "out")]
    )
    assert rc == 1
    err = capsys.readouterr().err
    assert "traces.jsonl:2" in err


def test_malformed_geodb_is_input_error(seven_route_corpus, tmp_path, capsys):
    traces, _, _ = seven_route_corpus
    geodb = tmp_path / "bad.csv"
    geodb.write_text("10.0.0.0/33,0,0\n", encoding="utf-8")
    rc = main(
        ["pipeline", "--traces", str(traces), "--geodb", str(geodb), "--out", str(tmp_path / "out")]
    )
    assert rc == 1


def test_malformed_clusters_file_is_input_error(tmp_path, capsys):
    clusters = tmp_path / "clusters.json"
    clusters.write_text("{\n", encoding="utf-8")
    rc = main(["gdi", "--clusters", str(clusters), "--out", str(tmp_path / "out")])
    assert rc == 1


def test_unexpected_failure_is_internal_error(seven_route_corpus, tmp_path, monkeypatch, capsys):
    traces, geodb, _ = seven_route_corpus
    import geodiv.cli as cli_module

    def boom(*args, **kwargs):
        raise RuntimeError("surprise")

    monkeypatch.setattr(cli_module, "run_pipeline", boom)
    rc = main(
        ["pipeline", "--traces", str(traces), "--geodb", str(geodb), "--out", str(tmp_path / "out")]
    )
    assert rc == 2
    assert "internal error" in capsys.readouterr().err
