import json
import subprocess
import sys

import pytest

from sumround.cli import main, parse_instance
from sumround.errors import RoundingError


@pytest.fixture
def run(capsys, tmp_path):
    def _run(content, *args):
        path = tmp_path / "instance.txt"
        path.write_text(content)
        code = main([args[0], str(path), *args[1:]])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def test_parse_csv_variants():
    assert parse_instance("1.5, 2.5\n") == ["1.5", "2.5"]
    assert parse_instance("1.5\n2.5\n\n") == ["1.5", "2.5"]
    assert parse_instance('[1.5, "2.50", 3]') == [1.5, "2.50", 3]
    for bad in ["", "[1, -2]", '{"a": 1}', "1,abc", "[true]", "1e5"]:
        with pytest.raises(RoundingError):
            parse_instance(bad)


def test_round_paper_instance(run):
    code, out, _ = run("2.25,3.4,4.35", "round")
    report = json.loads(out)
    assert code == 0
    assert report["allocation"] == [2, 4, 4]
    assert report["shortfall"] == 1
    assert report["target"] == sum(report["allocation"])
    assert report["order"] == [1, 2, 0]
    assert list(report) == ["allocation", "target", "shortfall", "errors", "order"]
    assert report["errors"]["l1"] == pytest.approx(1.2)


def test_round_integer_file(run):
    code, out, _ = run("3\n4\n5\n", "round")
    report = json.loads(out)
    assert report["allocation"] == [3, 4, 5] and report["shortfall"] == 0


def test_round_with_zero_reports_null_relative(run):
    code, out, _ = run("[0, 1.5, 1.5]", "round")
    errors = json.loads(out)["errors"]
    assert errors["relative_sum"] is None and errors["relative_product"] is None


def test_round_sum_not_integer(run):
    code, out, err = run("0.5,0.6", "round")
    assert code == 2 and out == ""
    assert "SumNotInteger" in err


def test_round_explicit_target(run):
    code, out, _ = run("0.5,0.6", "round", "--target", "1")
    assert code == 0 and json.loads(out)["allocation"] == [0, 1]


def test_round_infeasible_target(run):
    code, _, err = run("0.5,0.6", "round", "--target", "5")
    assert code == 3 and "InfeasibleTarget" in err


def test_output_is_deterministic(run):
    first = run("0.1,0.2,0.7,1.9,2.1", "round", "--q", "3")[1]
    second = run("0.1,0.2,0.7,1.9,2.1", "round", "--q", "3")[1]
    assert first == second
    # floats carry 17 significant digits
    assert '"l1": 1.1999999999999997' in run("2.25,3.4,4.35", "round")[1]


def test_decimal(run):
    code, out, _ = run("0.333,0.333,0.334", "decimal", "--precision", "1")
    assert code == 0
    assert json.loads(out)["values"] == ["0.3", "0.3", "0.4"]


def test_decimal_echo(run):
    code, out, _ = run("1.25\n0.10\n", "decimal", "--precision", "2")
    assert json.loads(out)["values"] == ["1.25", "0.10"]


def test_decimal_precision_overflow(run):
    code, _, err = run("1.5", "decimal", "--precision", "15")
    assert code == 2 and "PrecisionOverflow" in err


def test_apportion(run):
    code, out, _ = run("1,1,1,1", "apportion", "--seats", "8")
    assert json.loads(out)["allocation"] == [2, 2, 2, 2]
    code, out, _ = run("47000,16000,15800,12000,6100,3100", "apportion", "--seats", "10")
    report = json.loads(out)
    assert report["allocation"] == [5, 2, 1, 1, 1, 0]
    assert report["quotas"] == pytest.approx([4.7, 1.6, 1.58, 1.2, 0.61, 0.31])
    assert report["remainders"] == pytest.approx([0.7, 0.6, 0.58, 0.2, 0.61, 0.31])


def test_apportion_rejects_zero_votes(run):
    code, _, err = run("0,1", "apportion", "--seats", "3")
    assert code == 2 and "NonPositiveVotes" in err


def test_compare_paper_instance(run):
    code, out, _ = run("2.25,3.4,4.35", "compare", "--trials", "2000")
    report = json.loads(out)
    assert report["optimal"] == [2, 4, 4]
    assert report["fractional"]["sum_deviation"] == -1
    assert report["feasible_threshold"] == pytest.approx(0.35)


def test_compare_integer_input(run):
    code, out, _ = run("1,2,3", "compare", "--trials", "500")
    report = json.loads(out)
    assert report["fractional"]["allocation"] == report["optimal"] == [1, 2, 3]
    assert report["monte_carlo"]["bias_signs"] == ["0", "0", "0"]
    assert report["monte_carlo"]["optimality_rate"] == 1


def test_compare_example_exact(run):
    code, out, _ = run("0.4,0.35,0.25", "compare", "--trials", "1000", "--seed", "3")
    exact = json.loads(out)["exact"]
    assert exact["optimality_probability"] == pytest.approx(0.195, abs=1e-12)
    assert exact["expected_wrong_roundups"] == pytest.approx(0.6, abs=1e-12)


def test_oracle(run):
    code, out, _ = run("2.25,3.4,4.35", "oracle", "--q", "1")
    report = json.loads(out)
    assert report["min_value"] == pytest.approx(1.2) and report["argmins"] == [[2, 4, 4]]
    code, out, _ = run("0.4,2.4,0.2", "oracle", "--q", "2")
    assert sorted(json.loads(out)["argmins"]) == [[0, 3, 0], [1, 2, 0]]
    code, out, _ = run("3,4", "oracle")
    assert json.loads(out)["min_value"] == 0


def test_pretty_table(run):
    code, out, _ = run("2.25,3.4,4.35", "round", "--pretty")
    assert code == 0 and "rounded" in out and "shortfall 1" in out


def test_missing_file(capsys):
    assert main(["round", "/nonexistent/file.csv"]) == 2


def test_module_entry_point_reads_stdin():
    proc = subprocess.run(
        [sys.executable, "-m", "sumround", "round", "-"],
        input="2.25,3.4,4.35",
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["allocation"] == [2, 4, 4]
