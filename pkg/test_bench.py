# test_bench.py
"""
Seeded benchmark against the PPT oracle
"""
import json

import pandas as pd
import pytest

from src.cli import BenchRunner, main
from src.cli.bench import RECORD_FIELDS
from src.config import Settings


def test_report_is_deterministic(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for path in (first, second):
        assert main(["bench", "--dims", "2", "2", "--instances", "20", "--seed", "3",
                     "--out", str(path)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_worker_count_does_not_change_report():
    serial = BenchRunner((2, 2), 10, seed=5, settings=Settings(n_jobs=1)).run()
    parallel = BenchRunner((2, 2), 10, seed=5, settings=Settings(n_jobs=2)).run()
    assert serial.to_json() == parallel.to_json()


def test_counts_and_fields():
    report = BenchRunner((2, 3), 15, seed=1).run()
    document = report.to_dict()
    assert list(document) == ["seed", "instances", "dims", "counts", "ppt_agreement_rate",
                              "k1_agreement_rate", "records"]
    assert sum(document["counts"].values()) == 15
    assert all(list(record) == RECORD_FIELDS for record in document["records"])
    assert 0.0 <= report.ppt_agreement_rate <= 1.0


def test_pure_boundary_instances_agree_with_oracle():
    report = BenchRunner((2, 2), 40, seed=11).run()
    assert any(record["K"] == 1 for record in report.records)
    assert report.k1_agreement_rate == 1.0


def test_csv_table(tmp_path):
    report = BenchRunner((2, 2), 5, seed=2).run()
    path = tmp_path / "bench.csv"
    report.write_csv(path)
    frame = pd.read_csv(path)
    assert list(frame.columns) == RECORD_FIELDS
    assert len(frame) == 5
    assert set(frame["dims"]) == {"2x2"}


def test_cli_summary(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["bench", "--dims", "2", "2", "--instances", "4", "--seed", "0", "--out", str(out),
                 "--csv", str(tmp_path / "table.csv")]) == 0
    assert capsys.readouterr().out.startswith("instances: 4 (")
    assert json.loads(out.read_text())["instances"] == 4
    assert (tmp_path / "table.csv").exists()


def test_runner_validation():
    with pytest.raises(ValueError):
        BenchRunner((2, 2), 0, seed=0)
    with pytest.raises(ValueError):
        BenchRunner((2, 2, 2), 3, seed=0)
