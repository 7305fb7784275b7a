"""Shim acceptance: annotation validity and the raw-to-analytics smoke run.

The smoke run drives the scoring engine exclusively through its installed
command line and file formats; the only Python-level imports of the engine
here are read-side oracles (its parser and subtree enumerator).
"""

import json
import shutil
import subprocess

import pytest

from icscore.conllu import parse_conllu_file
from icscore.syntax import enumerate_subtree_paths, path_key

from rawfixture import make_records, make_train_records, write_jsonl

_CAPSYS = None


@pytest.fixture(autouse=True)
def _pass_line_capture(capsys):
    global _CAPSYS
    _CAPSYS = capsys
    yield
    _CAPSYS = None


def _pass(line):
    # Criterion lines must stay visible in default (captured) pytest runs.
    text = f"PASS  {line}"
    if _CAPSYS is not None:
        with _CAPSYS.disabled():
            print(text)
    else:
        print(text)


def run_cli(*argv):
    exe = shutil.which(argv[0])
    assert exe is not None, f"{argv[0]} not on PATH"
    return subprocess.run(
        [exe, *argv[1:]], capture_output=True, text=True, timeout=600
    )


def test_shim_validity_100_records(tmp_path):
    records = make_records(100)
    raw = tmp_path / "raw.jsonl"
    write_jsonl(raw, records)
    out = tmp_path / "fixture.conllu"

    proc = run_cli("icshim", "annotate", "--input", str(raw), "--output", str(out))
    assert proc.returncode == 0, proc.stderr
    assert not (tmp_path / "fixture.conllu.skipped").exists()

    docs = parse_conllu_file(str(out))  # zero tolerance: any error raises
    assert len(docs) == 100
    assert [d.doc_id for d in docs] == [r["id"] for r in records]
    for doc, rec in zip(docs, records):
        sentiment = float(doc.meta["sentiment"])
        assert -1.0 <= sentiment <= 1.0
        assert doc.label == rec.get("ic")
        if rec["text"] == "":
            assert doc.word_count == 0

    cat = docs[0]
    paths = {path_key(p) for p in enumerate_subtree_paths(cat, 5)}
    assert "nsubj_det" in paths
    _pass(
        "shim validity: 100 records annotated, parsed with zero errors,"
        " ids ordered, sentiment in [-1, 1]"
    )


def test_end_to_end_smoke(tmp_path):
    raw_train = tmp_path / "train.jsonl"
    raw_fixture = tmp_path / "fixture.jsonl"
    write_jsonl(raw_train, make_train_records(35))
    write_jsonl(raw_fixture, make_records(100))

    train_conllu = tmp_path / "train.conllu"
    fixture_conllu = tmp_path / "fixture.conllu"
    for src, dst in ((raw_train, train_conllu), (raw_fixture, fixture_conllu)):
        proc = run_cli("icshim", "annotate", "--input", str(src), "--output", str(dst))
        assert proc.returncode == 0, proc.stderr

    run_dir = tmp_path / "run"
    proc = run_cli(
        "icscore", "train", "--train", str(train_conllu), "--out", str(run_dir),
        "--rounds", "15", "--max-depth", "3", "--min-freq", "2",
        "--subsample", "1.0",
    )
    assert proc.returncode == 0, proc.stderr

    scored_dir = tmp_path / "scored"
    proc = run_cli(
        "icscore", "score", "--model", str(run_dir / "model.json"),
        "--space", str(run_dir / "space.json"),
        "--input", str(fixture_conllu), "--out", str(scored_dir),
    )
    assert proc.returncode == 0, proc.stderr
    scored_lines = (scored_dir / "scored.jsonl").read_text().splitlines()
    assert len(scored_lines) == 100

    analysis_dir = tmp_path / "analysis"
    proc = run_cli(
        "icscore", "analyze", "--scored", str(scored_dir / "scored.jsonl"),
        "--out", str(analysis_dir), "--by", "community",
    )
    assert proc.returncode == 0, proc.stderr

    manifest = json.loads((analysis_dir / "manifest.json").read_text())
    assert manifest["counts"]["records"] == 100

    # distribution bin totals: per-community masses sum to 1, and the
    # per-band record tallies recomputed from scored.jsonl sum to 100
    mass_by_group: dict[str, float] = {}
    for row in (analysis_dir / "distribution.csv").read_text().splitlines()[1:]:
        community, _band, mass = row.split(",")
        mass_by_group[community] = mass_by_group.get(community, 0.0) + float(mass)
    assert mass_by_group, "empty distribution table"
    for community, total in mass_by_group.items():
        assert abs(total - 1.0) < 1e-9, (community, total)

    band_counts: dict[int, int] = {}
    for line in scored_lines:
        band = json.loads(line)["ic"]
        band_counts[band] = band_counts.get(band, 0) + 1
    assert sum(band_counts.values()) == 100
    assert set(band_counts) <= set(range(1, 8))
    _pass(
        "end-to-end smoke: raw -> shim -> train/score/analyze,"
        f" bin totals {sum(band_counts.values())} == 100 records"
    )
