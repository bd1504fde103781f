"""End-to-end command-line behavior: artifacts, determinism, exit codes."""
import hashlib
import json

import pytest

from conftest import KARATE, KARATE_DIVISIONS
from overlapnet import compute_influence, import_matrix, load_edge_list
from overlapnet.cli import main
from oracles import overlap_oracle


def run(*argv):
    return main([str(a) for a in argv])


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_graph(tmp_path, name="toy.txt"):
    """Two 5-cliques bridged by a weak tie, 1-based external ids."""
    lines = []
    for base in (1, 6):
        for i in range(5):
            for j in range(i + 1, 5):
                lines.append(f"{base + i} {base + j} 0.5")
    lines.append("5 6 0.05")
    p = tmp_path / name
    p.write_text("\n".join(lines) + "\n")
    return p


# ---------------------------------------------------------------------------
# influence
# ---------------------------------------------------------------------------

def test_influence_writes_matching_csv(tmp_path, capsys):
    out = tmp_path / "karate.csv"
    assert run("influence", "--graph", KARATE, "--weight", "0.5",
               "-L", "4", "--out", out) == 0
    assert "34x34" in capsys.readouterr().out
    g = load_edge_list(KARATE, default_weight=0.5)
    assert import_matrix(out) == compute_influence(g, 4)


def test_influence_requires_a_graph(tmp_path, capsys):
    assert run("influence", "--out", tmp_path / "m.csv") == 2
    assert "graph" in capsys.readouterr().err


def test_missing_graph_file_exits_2(tmp_path, capsys):
    assert run("influence", "--graph", tmp_path / "nope.txt",
               "--out", tmp_path / "m.csv") == 2
    assert "error:" in capsys.readouterr().err


def test_invalid_edge_weight_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 3.5\n")
    assert run("influence", "--graph", bad, "--out", tmp_path / "m.csv") == 2
    assert "[0, 1]" in capsys.readouterr().err


def test_matrix_cache_round_trip(tmp_path, monkeypatch):
    cache = tmp_path / "cache"
    monkeypatch.setenv("OVERLAPNET_CACHE", str(cache))
    g = write_graph(tmp_path)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("influence", "--graph", g, "--out", out1) == 0
    cached = list(cache.glob("influence-*.csv"))
    assert len(cached) == 1
    assert run("influence", "--graph", g, "--out", out2) == 0
    assert list(cache.glob("influence-*.csv")) == cached
    assert out1.read_bytes() == out2.read_bytes()


# ---------------------------------------------------------------------------
# detect
# ---------------------------------------------------------------------------

def test_detect_writes_divisions_and_report(tmp_path, capsys):
    g = write_graph(tmp_path)
    out = tmp_path / "toy.div"
    report = tmp_path / "toy.json"
    assert run("detect", "--graph", g, "-L", "3", "--seeds", "8",
               "--out", out, "--report", report) == 0
    assert "distinct divisions" in capsys.readouterr().out
    rows = out.read_text().splitlines()
    assert len(rows) >= 2 and all(set(r) <= {"x", "o"} for r in rows)
    # clique split is the global optimum and must surface first
    assert rows[0] == "xxxxxooooo"
    payload = json.loads(report.read_text())
    qs = [d["q_value"] for d in payload["divisions"]]
    assert qs == sorted(qs, reverse=True)
    assert payload["n_nodes"] == 10
    assert payload["t_divisions"] == len(rows)


# ---------------------------------------------------------------------------
# blocks
# ---------------------------------------------------------------------------

def test_blocks_full_segment_fixture_golden(tmp_path):
    out = tmp_path / "blocks.json"
    assert run("blocks", "--divisions", KARATE_DIVISIONS, "--out", out) == 0
    payload = json.loads(out.read_text())
    assert payload["scores"] is None        # nothing was ranked
    (rep,) = payload["reports"]
    assert (rep["anchor"], rep["segment"], rep["t1"], rep["t2"]) == (0, 0, 1, 7)
    assert [b["size"] for b in rep["blocks"]] == [10, 1, 5, 4, 10, 4]
    assert [b["signature"] for b in rep["blocks"]] == [
        "xxxxxxx", "xxxxoxx", "oxxxooo", "xooxoox", "xoooooo", "xoxxoxx"]
    assert rep["blocks"][1]["members"] == [3]


def test_blocks_table_mirrors_signature_layout(tmp_path):
    out = tmp_path / "blocks.json"
    table = tmp_path / "table.txt"
    assert run("blocks", "--divisions", KARATE_DIVISIONS,
               "--out", out, "--table", table) == 0
    lines = table.read_text().splitlines()
    assert len(lines) == 35
    assert lines[3].split("\t") == ["3", "x", "x", "x", "x", "o", "x", "x",
                                    "xxxxoxx"]


def test_blocks_ranked_mode_reports_scores(tmp_path):
    out = tmp_path / "blocks.json"
    assert run("blocks", "--graph", KARATE, "--weight", "0.5",
               "--divisions", KARATE_DIVISIONS,
               "--segment-length", "2", "-K", "2", "--out", out) == 0
    payload = json.loads(out.read_text())
    sc = payload["scores"]
    assert len(sc["s"]) == 6
    assert sorted(sc["pi"]) == [1, 2, 3, 4, 5, 6]
    anchors = {rep["anchor"] for rep in payload["reports"]}
    assert anchors == {1, 2}
    for rep in payload["reports"]:
        assert 1 <= rep["t1"] <= rep["t2"] == 7


# ---------------------------------------------------------------------------
# overlap / sweep
# ---------------------------------------------------------------------------

def test_overlap_single_threshold(tmp_path, capsys):
    out = tmp_path / "o.json"
    assert run("overlap", "--divisions", KARATE_DIVISIONS,
               "--thr", "0", "--out", out) == 0
    assert "|O|=9" in capsys.readouterr().out
    (point,) = json.loads(out.read_text())
    assert point["n_overlapping"] == 9
    assert point["overlapping_external_ids"] == [3, 9, 10, 25, 26, 28, 29,
                                                 31, 32]
    assert point["gamma"] == [1, -1, 1, -1, 1, -1]


def test_sweep_two_thresholds(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert run("sweep", "--divisions", KARATE_DIVISIONS,
               "--thr", "0,0.5", "--out", out) == 0
    assert capsys.readouterr().out.splitlines() == [
        "thr=0\t|O|=9", "thr=0.5\t|O|=1"]
    points = json.loads(out.read_text())
    assert [(p["thr"], p["n_overlapping"]) for p in points] == [
        (0.0, 9), (0.5, 1)]
    assert points[1]["overlapping_external_ids"] == [3]


def test_sweep_rejects_descending_thresholds(tmp_path, capsys):
    assert run("sweep", "--divisions", KARATE_DIVISIONS,
               "--thr", "0.5,0", "--out", tmp_path / "s.json") == 2
    assert "ascending" in capsys.readouterr().err


def test_overlap_with_community_file(tmp_path):
    # hand-rolled 17/17 split; cross-check the rule oracle on the fixture
    comms = tmp_path / "c.txt"
    comms.write_text("\n".join(["1"] * 17 + ["2"] * 17) + "\n")
    out = tmp_path / "o.json"
    assert run("overlap", "--divisions", KARATE_DIVISIONS,
               "--communities", comms, "--thr", "0.7", "--out", out) == 0
    (point,) = json.loads(out.read_text())
    from overlapnet import blocks_for_segment, import_divisions
    ba = blocks_for_segment(import_divisions(KARATE_DIVISIONS), 1, 7)
    gamma, O = overlap_oracle(34, [set(p.members) for p in ba.blocks],
                              [17, 17], 0.7)
    assert point["gamma"] == gamma
    assert point["overlapping_external_ids"] == sorted(j + 1 for j in O)


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

BUNDLE = ["config.json", "influence.csv", "divisions.div", "divisions.json",
          "blocks.json", "sweep.json", "dot/overlap_thr_0.dot",
          "dot/overlap_thr_0.5.dot"]


def run_karate_pipeline(outdir):
    return run("pipeline", "--graph", KARATE, "--weight", "0.5",
               "--divisions", KARATE_DIVISIONS, "--thr", "0,0.5",
               "--outdir", outdir)


def test_pipeline_emits_full_bundle(tmp_path, capsys):
    outdir = tmp_path / "bundle"
    assert run_karate_pipeline(outdir) == 0
    assert "bundle written" in capsys.readouterr().out
    for rel in BUNDLE:
        assert (outdir / rel).is_file(), rel
    sweep = json.loads((outdir / "sweep.json").read_text())
    assert [p["n_overlapping"] for p in sweep] == [9, 1]
    cfg = json.loads((outdir / "config.json").read_text())
    assert cfg["weight"] == 0.5
    assert cfg["thresholds"] == [0.0, 0.5]


def test_pipeline_reruns_byte_identically(tmp_path):
    outdir = tmp_path / "bundle"
    assert run_karate_pipeline(outdir) == 0
    before = {rel: sha(outdir / rel) for rel in BUNDLE}
    assert run_karate_pipeline(outdir) == 0
    after = {rel: sha(outdir / rel) for rel in BUNDLE}
    assert before == after


def test_pipeline_failure_removes_partial_outputs(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "graph": str(KARATE), "weight": 0.5,
        "divisions": str(KARATE_DIVISIONS),
        "thresholds": [0.5, 0.0],           # not ascending: sweep stage fails
        "outdir": str(tmp_path / "broken"),
    }))
    assert run("pipeline", "--config", cfg) == 2
    err = capsys.readouterr().err
    assert "pipeline stage 'threshold sweep' failed" in err
    leftovers = [p for p in (tmp_path / "broken").rglob("*") if p.is_file()]
    assert leftovers == []


def test_pipeline_requires_outdir(capsys):
    assert run("pipeline", "--graph", KARATE, "--weight", "0.5",
               "--divisions", KARATE_DIVISIONS) == 2
    assert "outdir" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# export-dot
# ---------------------------------------------------------------------------

def test_export_dot_highlights_the_single_overlapper(tmp_path):
    outdir = tmp_path / "bundle"
    assert run_karate_pipeline(outdir) == 0
    dot = tmp_path / "redrawn.dot"
    assert run("export-dot", "--graph", KARATE, "--weight", "0.5",
               "--blocks", outdir / "blocks.json",
               "--sweep", outdir / "sweep.json",
               "--thr", "0.5", "--out", dot) == 0
    text = dot.read_text()
    # node 3 sits in block 2 -> second palette entry; everyone else white
    assert '"3" [fillcolor="#377eb8"];' in text
    assert text.count("fillcolor=") == 2  # default attr + node 3
    assert text == (outdir / "dot" / "overlap_thr_0.5.dot").read_text()


def test_export_dot_unknown_threshold_exits_2(tmp_path, capsys):
    outdir = tmp_path / "bundle"
    assert run_karate_pipeline(outdir) == 0
    assert run("export-dot", "--graph", KARATE, "--weight", "0.5",
               "--blocks", outdir / "blocks.json",
               "--sweep", outdir / "sweep.json",
               "--thr", "0.25", "--out", tmp_path / "x.dot") == 2
    assert "not present in sweep" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# configuration file handling
# ---------------------------------------------------------------------------

def test_flags_override_config_file(tmp_path):
    g = tmp_path / "pair.txt"
    g.write_text("1 2\n")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"graph": str(g), "weight": 0.25,
                               "max_path_length": 2}))
    out_file = tmp_path / "file.csv"
    out_flag = tmp_path / "flag.csv"
    assert run("influence", "--config", cfg, "--out", out_file) == 0
    assert import_matrix(out_file).values[0, 1] == 0.25
    assert run("influence", "--config", cfg, "--weight", "0.5",
               "--out", out_flag) == 0
    assert import_matrix(out_flag).values[0, 1] == 0.5


def test_unknown_config_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"graph": "x.txt", "wieght": 0.3}))
    assert run("influence", "--config", cfg, "--out", tmp_path / "m.csv") == 2
    assert "wieght" in capsys.readouterr().err


def test_ignore_weights_flag_applies_default_weight(tmp_path):
    g = tmp_path / "counts.txt"
    g.write_text("1 2 4\n2 3 9\n")  # co-occurrence counts, not probabilities
    out = tmp_path / "m.csv"
    assert run("influence", "--graph", g, "--ignore-weights",
               "--weight", "0.25", "--out", out) == 0
    m = import_matrix(out)
    assert m.values[0, 1] == 0.25
    # without the flag the counts are rejected as out-of-range weights
    assert run("influence", "--graph", g, "--weight", "0.25",
               "--out", out) == 2
