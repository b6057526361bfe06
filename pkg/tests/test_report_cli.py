import json
import math

import numpy as np
import pytest

from sparselab import (
    BoostingConfig,
    read_matrix,
    read_vector,
    write_csv,
    write_json,
    write_matrix,
    write_vector,
)
from sparselab.cli import main
from sparselab.report import (
    PATH_HEADER,
    TRAJECTORY_HEADER,
    boosting_trajectory,
    cone_split,
    detect_cone_exit,
    reproduce,
    thin_rows,
    verdict_failures,
)


# --- file formats -----------------------------------------------------------


def test_matrix_round_trip(tmp_path):
    path = str(tmp_path / "X.txt")
    X = np.array([[1.0, -2.5e-17], [3.0, 7e12]])
    write_matrix(path, X)
    header = open(path).readline()
    assert header == "2 2\n"
    np.testing.assert_array_equal(read_matrix(path), X)


def test_matrix_reader_validates_count(tmp_path):
    path = str(tmp_path / "bad.txt")
    with open(path, "w") as fh:
        fh.write("2 2\n1.0 2.0 3.0\n")
    with pytest.raises(ValueError):
        read_matrix(path)


def test_vector_round_trip(tmp_path):
    path = str(tmp_path / "v.txt")
    v = np.array([0.1, -3.0, 2e-300])
    write_vector(path, v)
    np.testing.assert_array_equal(read_vector(path), v)


def test_csv_cell_conventions(tmp_path):
    path = str(tmp_path / "t.csv")
    write_csv(path, ["a", "b", "c"], [[1, None, True], [0.5, "x", False]])
    lines = open(path).read().splitlines()
    assert lines == ["a,b,c", "1,,true", "0.5,x,false"]


def test_json_conventions(tmp_path):
    path = str(tmp_path / "o.json")
    write_json(path, {"b": math.inf, "a": math.nan, "v": np.array([1.0])})
    text = open(path).read()
    obj = json.loads(text)
    assert obj == {"a": "nan", "b": "inf", "v": [1.0]}
    # keys are sorted so rewrites are byte-identical
    assert text.index('"a"') < text.index('"b"')
    write_json(path, {"b": math.inf, "a": math.nan, "v": np.array([1.0])})
    assert open(path).read() == text


# --- report helpers ---------------------------------------------------------


def test_cone_split_conventions():
    assert cone_split(np.zeros(3), (0,)) == (0.0, 0.0, pytest.approx(math.nan, nan_ok=True))
    on, off, ratio = cone_split(np.array([0.0, 2.0]), (0,))
    assert (on, off, ratio) == (0.0, 2.0, math.inf)
    on, off, ratio = cone_split(np.array([1.0, -2.0, 3.0]), (0, 2))
    assert (on, off, ratio) == (4.0, 2.0, 0.5)


def test_detect_cone_exit():
    assert detect_cone_exit([0.0] * 5 + [3.0] * 100, 2.1, 100) == 5
    assert detect_cone_exit([3.0, 0.0] * 100, 2.1, 2) is None
    assert detect_cone_exit([3.0] * 99, 2.1, 100) is None
    assert detect_cone_exit([], 2.1, 1) is None


class _Row:
    def __init__(self, k):
        self.k = k


def test_thin_rows():
    rows = [_Row(k) for k in range(1501)]
    kept = [r.k for r in thin_rows(rows)]
    assert kept[:1001] == list(range(1001))
    assert kept[1001:] == list(range(1010, 1501, 10))
    # a final row off the stride is appended anyway
    rows = [_Row(k) for k in range(1502)]
    assert [r.k for r in thin_rows(rows)][-1] == 1501


def test_trajectory_initial_row(inst9):
    config = BoostingConfig(nu=1.0, max_iterations=3, residual_stop=0.0)
    rows = boosting_trajectory(inst9.X, inst9.Y, config, truth=inst9.beta, S=inst9.S)
    assert rows[0].k == 0
    assert rows[0].j is None
    assert rows[0].dist_l1 == 3.0
    assert rows[0].cone_ratio == 0.0
    assert len(rows) == 4


def test_trajectory_without_truth(inst9):
    config = BoostingConfig(nu=1.0, max_iterations=2, residual_stop=0.0)
    rows = boosting_trajectory(inst9.X, inst9.Y, config)
    assert math.isnan(rows[-1].dist_l1)
    assert math.isnan(rows[-1].cone_ratio)


# --- the full pipeline ------------------------------------------------------


@pytest.fixture(scope="module")
def report9():
    return reproduce(c=1.0, nu=1.0, iterations=400)


def test_reproduce_grades_clean(report9):
    assert verdict_failures(report9) == []
    assert report9.n == 9 and report9.p == 10 and report9.s == 3
    assert report9.critical_c == pytest.approx(7.0 / 3.0, abs=1e-12)
    assert report9.cone_exit_k == 4
    assert report9.limit_cone_ratio == pytest.approx(7.0 / 3.0, abs=1e-9)
    assert report9.lambda_max == 486.0
    assert len(report9.rows) == 401


def test_verdict_failures_reports_diffs(report9):
    report9.verdicts["rn_holds"] = False
    try:
        assert verdict_failures(report9) == [
            "rn_holds: expected True, observed False"
        ]
    finally:
        report9.verdicts["rn_holds"] = True


# --- command line -----------------------------------------------------------


def test_cli_construct_round_trip(tmp_path, capsys, inst9):
    out = str(tmp_path / "inst")
    assert main(["construct", "--c", "1", "--out", out]) == 0
    stdout = capsys.readouterr().out
    assert "n=9 p=10 s=3" in stdout
    np.testing.assert_array_equal(read_matrix(f"{out}/X.txt"), inst9.X)
    meta = json.load(open(f"{out}/instance.json"))
    assert meta["n"] == 9 and meta["s"] == 3
    assert meta["S"] == [0, 1, 2]


def test_cli_reproduce_writes_artifacts(tmp_path, capsys):
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    argv = ["reproduce", "--c", "1", "--nu", "0.5", "--iters", "300"]
    assert main(argv + ["--out", out_a]) == 0
    assert main(argv + ["--out", out_b]) == 0
    capsys.readouterr()
    for name in ("X.txt", "instance.json", "boosting_trajectory.csv", "lasso_path.csv", "report.json"):
        assert open(f"{out_a}/{name}").read() == open(f"{out_b}/{name}").read()
    trajectory = open(f"{out_a}/boosting_trajectory.csv").read().splitlines()
    assert trajectory[0] == ",".join(TRAJECTORY_HEADER)
    assert trajectory[1].startswith("0,,")
    path_csv = open(f"{out_a}/lasso_path.csv").read().splitlines()
    assert path_csv[0] == ",".join(PATH_HEADER)
    summary = json.load(open(f"{out_a}/report.json"))
    assert summary["verdicts"] == summary["expected"]


def test_cli_reproduce_flags_contradiction(tmp_path, capsys):
    # 50 iterations cannot sustain a 100-wide cone window, so the
    # cone_exit_found verdict contradicts its expectation
    rc = main(["reproduce", "--c", "1", "--iters", "50"])
    captured = capsys.readouterr()
    assert rc == 1
    assert "CONTRADICTIONS" in captured.err
    assert "cone_exit_found" in captured.err


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0, 4.0])
@pytest.mark.parametrize("nu", [0.1, 0.5, 1.0])
def test_cli_reproduce_grid_is_clean(c, nu, capsys):
    # the shipped instances must grade clean at every step length
    assert main(["reproduce", "--c", str(c), "--nu", str(nu)]) == 0
    assert "CONTRADICTIONS" not in capsys.readouterr().err


def test_cli_certify_rn_uniform(tmp_path, capsys, inst9):
    matrix = str(tmp_path / "X.txt")
    write_matrix(matrix, inst9.X)
    cert_path = str(tmp_path / "cert.json")
    rc = main(
        [
            "certify",
            "--matrix",
            matrix,
            "--property",
            "rn_uniform",
            "--t",
            "3",
            "--c",
            "2",
            "--out",
            cert_path,
        ]
    )
    assert rc == 0
    printed = json.loads(capsys.readouterr().out)
    stored = json.load(open(cert_path))
    assert printed == stored
    assert stored["holds"] is True
    assert stored["critical_c"] == pytest.approx(7.0 / 3.0)
    assert stored["worst_T"] == [0, 1, 2]


def test_cli_certify_unique_sparsest_needs_inputs(tmp_path, capsys, inst9):
    matrix = str(tmp_path / "X.txt")
    write_matrix(matrix, inst9.X)
    rc = main(["certify", "--matrix", matrix, "--property", "unique_sparsest"])
    assert rc == 2
    assert "requires --y and --s" in capsys.readouterr().err


def test_cli_certify_budget_refusal(tmp_path, capsys, inst9):
    matrix = str(tmp_path / "X.txt")
    write_matrix(matrix, inst9.X)
    rc = main(
        [
            "certify",
            "--matrix",
            matrix,
            "--property",
            "rip",
            "--t",
            "3",
            "--budget",
            "10",
        ]
    )
    assert rc == 3
    assert "budget" in capsys.readouterr().err


def test_cli_missing_file_is_usage_error(capsys):
    rc = main(["certify", "--matrix", "/nonexistent/X.txt", "--property", "spark"])
    assert rc == 2
    capsys.readouterr()


def test_cli_compare(tmp_path, capsys, inst9):
    matrix = str(tmp_path / "X.txt")
    y_path = str(tmp_path / "y.txt")
    out = str(tmp_path / "cmp")
    write_matrix(matrix, inst9.X)
    write_vector(y_path, inst9.Y)
    rc = main(
        [
            "compare",
            "--matrix",
            matrix,
            "--y",
            y_path,
            "--nu",
            "1.0",
            "--lambda-min",
            "1e-4",
            "--iters",
            "200",
            "--out",
            out,
        ]
    )
    assert rc == 0
    capsys.readouterr()
    trajectory = open(f"{out}/boosting_trajectory.csv").read().splitlines()
    assert trajectory[0] == ",".join(TRAJECTORY_HEADER)
    # no truth vector: distance and cone cells are not applicable
    assert trajectory[1].endswith(",nan,nan")


def test_cli_compare_validates_lengths(tmp_path, capsys, inst9):
    matrix = str(tmp_path / "X.txt")
    y_path = str(tmp_path / "y.txt")
    write_matrix(matrix, inst9.X)
    write_vector(y_path, inst9.Y[:-1])
    rc = main(
        ["compare", "--matrix", matrix, "--y", y_path, "--lambda-min", "1e-4"]
    )
    assert rc == 2
    capsys.readouterr()
