import pytest

from qcut_figures import EmptyData, SchemaMismatch, aggregate, load_rows, render
from qcut_figures.cli import main


def test_single_param_csv_gives_one_image(small_csv, tmp_path):
    out = tmp_path / "charts"
    charts = render(small_csv, out)
    assert sorted(charts) == ["num_qubits"]
    assert (out / "num_qubits.png").exists()


def test_all_rows_invalid_is_empty(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(
        "param,value,algorithm,seed,total_cost,migration_cost,teleport_cost,num_cuts,runtime_ms,valid\n"
        "num_qubits,4,dqcm,0,,,,,,false\n"
    )
    with pytest.raises(EmptyData):
        render(path, tmp_path / "charts")


def test_schema_mismatch_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(SchemaMismatch):
        render(path, tmp_path / "charts")


def test_aggregate_means_and_stderr(small_csv):
    rows, excluded = load_rows(small_csv)
    assert excluded == 1
    charts = aggregate(rows)
    points = dict((v, (m, e)) for v, m, e in charts["num_qubits"]["dqcm"])
    assert points[4.0][0] == 11.0
    assert points[8.0][0] == 28.0
    assert points[4.0][1] == pytest.approx(1.0)  # stdev 2 / sqrt(2) over two seeds


def test_cli_exit_codes(small_csv, tmp_path, capsys):
    assert main(["--csv", str(small_csv), "--out", str(tmp_path / "charts")]) == 0
    assert "num_qubits.png" in capsys.readouterr().out
    missing = tmp_path / "missing.csv"
    assert main(["--csv", str(missing), "--out", str(tmp_path / "x")]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n")
    assert main(["--csv", str(bad), "--out", str(tmp_path / "y")]) == 3
