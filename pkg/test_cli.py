# test_cli.py
"""
Command-line surface: outputs, exit codes and StateFile handling
"""
import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.cli import main
from src.cli.state_io import StateFileHandler
from src.states import DemoStates, MixedState
from src.utils.errors import StateFileError


@pytest.fixture
def write_state(tmp_path):
    def _write(name, state, **kwargs):
        path = tmp_path / f"{name}.json"
        StateFileHandler.write(path, state, **kwargs)
        return str(path)
    return _write


def _stdout_lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


def test_schmidt_bell(write_state, capsys):
    path = write_state("bell", DemoStates.bell())
    assert main(["schmidt", "--in", path]) == 0
    assert _stdout_lines(capsys)[-1] == "0.70710678 0.70710678, rank 2, entangled"


def test_schmidt_product(write_state, capsys):
    path = write_state("basis", DemoStates.basis((2, 3), (1, 2)))
    assert main(["schmidt", "--in", path]) == 0
    assert _stdout_lines(capsys)[-1] == "1.00000000, rank 1, separable"


def test_schmidt_multipartite_cut(write_state, capsys):
    path = write_state("ghz", DemoStates.ghz(3))
    assert main(["schmidt", "--in", path, "--cut", "0", "2"]) == 0
    assert _stdout_lines(capsys)[-1] == "0.70710678 0.70710678, rank 2, entangled"


def test_schmidt_with_metrics(write_state, capsys):
    path = write_state("bell", DemoStates.bell())
    metric = write_state("metric", 2 * np.eye(2), dims=[2])
    assert main(["schmidt", "--in", path, "--metrics", metric, metric]) == 0
    assert _stdout_lines(capsys)[-1] == "0.70710678 0.70710678, rank 2, entangled"


@pytest.mark.parametrize("state, code, status", [
    (DemoStates.isotropic(0.3), 0, "separable"),
    (DemoStates.isotropic(0.5), 3, "entangled"),
    (DemoStates.harmonic_gap(0.6), 4, "inconclusive"),
])
def test_check_exit_codes(write_state, capsys, state, code, status):
    path = write_state("rho", state)
    assert main(["check", "--in", path]) == code
    lines = _stdout_lines(capsys)
    assert lines[0] == f"status: {status}"
    assert any(line.startswith("criterion: ") for line in lines)


def test_check_with_marginals(write_state, capsys):
    path = write_state("rho", DemoStates.isotropic(0.3))
    half = write_state("half", np.eye(2) / 2, dims=[2])
    assert main(["check", "--in", path, "--marginals", half, half]) == 0
    assert "lambda_star: 0.33333333" in _stdout_lines(capsys)


def test_check_rejects_multipartite(write_state):
    path = write_state("ghz", DemoStates.ghz(3))
    assert main(["check", "--in", path]) == 2


def test_genuine_ghz3(write_state, capsys):
    path = write_state("ghz", DemoStates.ghz(3))
    assert main(["genuine", "--in", path, "--lam", "0.25"]) == 3
    lines = _stdout_lines(capsys)
    assert "min cut: 0|12" in lines
    assert "lambda_star: 0.20000000" in lines
    assert lines[-1].endswith("genuinely entangled")

    assert main(["genuine", "--in", path, "--lam", "0.2"]) == 0
    assert _stdout_lines(capsys)[-1].endswith("not detected")


def test_werner_writes_ensemble(tmp_path, capsys):
    out = tmp_path / "ensemble.json"
    assert main(["werner", "--sigma", "1", "1", "--dims", "2", "2", "--out", str(out)]) == 0
    lines = _stdout_lines(capsys)
    assert lines[0] == "lambda_star: 0.33333333"
    document = json.loads(out.read_text())
    assert document["kind"] == "product_ensemble"
    assert f"terms: {len(document['terms'])}" in lines
    assert all(term["weight"] > 0 for term in document["terms"])


def test_werner_rejects_rank_one(tmp_path):
    out = tmp_path / "ensemble.json"
    assert main(["werner", "--sigma", "1", "--dims", "2", "2", "--out", str(out)]) == 2


def test_decompose_isotropic(write_state, tmp_path, capsys):
    path = write_state("iso", DemoStates.isotropic(0.2))
    out = tmp_path / "E.json"
    assert main(["decompose", "--in", path, "--out", str(out)]) == 0
    lines = _stdout_lines(capsys)
    assert "lambda: 0.20000000" in lines
    assert "K: 1" in lines
    E = StateFileHandler.read_state(out)
    assert_allclose(E.matrix, DemoStates.bell().projector(), atol=1e-9)


def test_decompose_with_search(write_state, capsys):
    path = write_state("iso", DemoStates.isotropic(0.2))
    assert main(["decompose", "--in", path, "--search-trials", "3", "--seed", "7"]) == 0
    assert _stdout_lines(capsys)[0].startswith("search: best rank(E)")


def test_demo_round_trip(tmp_path, capsys):
    out = tmp_path / "w.json"
    assert main(["demo", "--name", "w", "--n", "4", "--out", str(out)]) == 0
    state = StateFileHandler.read_state(out)
    assert state.dims.dims == (2, 2, 2, 2)
    assert_allclose(state.amplitudes, DemoStates.w(4).amplitudes)


def test_parse_error_exits_with_usage():
    with pytest.raises(SystemExit) as excinfo:
        main(["check"])
    assert excinfo.value.code == 2


def test_malformed_state_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"dims": [2, 2], "kind": "mixed", "data": [[1, 0]]}')
    assert main(["check", "--in", str(path)]) == 2
    path.write_text("not json")
    assert main(["check", "--in", str(path)]) == 2


def test_missing_file_is_io_error(tmp_path):
    assert main(["check", "--in", str(tmp_path / "missing.json")]) == 5


def test_bench_rejects_zero_instances(tmp_path):
    assert main(["bench", "--dims", "2", "2", "--instances", "0", "--out", str(tmp_path / "r.json")]) == 2


def test_malformed_environment(write_state, monkeypatch):
    path = write_state("bell", DemoStates.bell())
    monkeypatch.setenv("SEPCONE_RANK_TOL", "tiny")
    assert main(["schmidt", "--in", path]) == 2


def test_statefile_round_trip(tmp_path, rng):
    matrix = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = MixedState((2, 2), matrix @ matrix.conj().T / np.trace(matrix @ matrix.conj().T).real)
    path = tmp_path / "rho.json"
    StateFileHandler.write(path, rho, metadata={"note": "random"})
    loaded = StateFileHandler.read(path)
    assert loaded.kind == "mixed" and loaded.metadata == {"note": "random"}
    assert_allclose(loaded.to_state().matrix, rho.matrix)


def test_statefile_accepts_flat_pairs():
    document = {"dims": [2, 2], "kind": "mixed",
                "data": [[0.25, 0.0] if i % 5 == 0 else [0.0, 0.0] for i in range(16)]}
    state = StateFileHandler.parse(document).to_state()
    assert_allclose(state.matrix, np.eye(4) / 4)


def test_statefile_validation():
    with pytest.raises(StateFileError):
        StateFileHandler.parse({"dims": [2, 2], "kind": "pure"})
    with pytest.raises(StateFileError):
        StateFileHandler.parse({"dims": [2, 2], "kind": "vector", "data": []})
    with pytest.raises(StateFileError):
        StateFileHandler.parse({"dims": [2, 2], "kind": "pure", "data": [[1, 0]] * 4}).to_state()


def test_demo_basis_indices(tmp_path):
    out = tmp_path / "basis.json"
    assert main(["demo", "--name", "basis", "--dims", "2", "3", "--indices", "1", "2",
                 "--out", str(out)]) == 0
    state = StateFileHandler.read_state(out)
    assert_allclose(state.amplitudes, DemoStates.basis((2, 3), (1, 2)).amplitudes)
    assert json.loads(out.read_text())["metadata"]["indices"] == [1, 2]

    assert main(["demo", "--name", "basis", "--dims", "2", "3", "--indices", "1",
                 "--out", str(out)]) == 2
