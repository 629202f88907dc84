"""Tests for the locc command line."""

import hashlib
import json
import math
from pathlib import Path

import pytest

from local_occupancy.cli import SCHEMAS, CommandOutput, PolynomialReport, main
from local_occupancy.colouring import ColouringCertificate

C5_TEXT = "p 5 5\ne 0 1\ne 0 4\ne 1 2\ne 2 3\ne 3 4\n"
K2_TEXT = "p 2 1\ne 0 1\n"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def error_line(err: str) -> dict:
    return json.loads(err.strip().splitlines()[-1])


def test_ipoly_on_c5(capsys, graph_file):
    """Test coefficients, exact Z and the input hash in the envelope."""
    path = graph_file(C5_TEXT)
    code, out, _ = run(capsys, "ipoly", path)
    assert code == 0
    output = CommandOutput.model_validate(json.loads(out))
    assert output.command == "ipoly"
    assert output.inputs == {path: hashlib.sha256(C5_TEXT.encode()).hexdigest()}
    report = PolynomialReport.model_validate(output.result)
    assert report.coefficients == [1, 5, 5]
    assert report.z_exact == "11"
    assert report.z_prime_exact == "15"


def test_ipoly_exact_fugacity(capsys, graph_file):
    """Test a rational lambda is kept exact."""
    code, out, _ = run(capsys, "ipoly", graph_file(C5_TEXT), "--lambda", "1/2")
    assert code == 0
    result = json.loads(out)["result"]
    assert result["lam"] == "1/2"
    assert result["zExact"] == "19/4"
    assert result["zPrimeExact"] == "10"
    assert result["occupancyFraction"] == pytest.approx(4 / 19)


def test_ipoly_tsv_format(capsys, graph_file):
    """Test the tab-separated output lists envelope and result keys."""
    code, out, _ = run(capsys, "ipoly", graph_file(C5_TEXT), "--format", "tsv")
    assert code == 0
    rows = dict(line.split("\t", 1) for line in out.splitlines())
    assert rows["command"] == "ipoly"
    assert json.loads(rows["coefficients"]) == [1, 5, 5]


def test_empty_graph_is_an_input_error(capsys, graph_file):
    """Test an empty graph file exits 1 with a JSON error."""
    code, _, err = run(capsys, "ipoly", graph_file("p 0 0\n"))
    assert code == 1
    error = error_line(err)
    assert error["error"] == "GraphError"
    assert error["message"] == "empty graph"
    assert error["exitCode"] == 1


def test_malformed_graph_names_the_line(capsys, graph_file):
    """Test parse errors carry their line number."""
    code, _, err = run(capsys, "ipoly", graph_file("p 3 1\ne 0 5\n"))
    assert code == 1
    error = error_line(err)
    assert error["error"] == "GraphFormatError"
    assert error["message"].startswith("line 2:")


def test_missing_file_exits_1(capsys, tmp_path):
    """Test an unreadable input is a usage error."""
    code, _, err = run(capsys, "ipoly", str(tmp_path / "missing.txt"))
    assert code == 1
    assert error_line(err)["error"] == "FileNotFoundError"


@pytest.mark.parametrize("argv", [
    ["ipoly"],
    ["ipoly", "g.txt", "--lambda", "0"],
    ["ipoly", "g.txt", "--lambda", "abc"],
    ["colour", "g.txt", "--ell", "3"],
    ["nope"],
])
def test_usage_errors_exit_1(argv):
    """Test argument errors exit with code 1."""
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_cap_exceeded_exits_3(capsys, graph_file):
    """Test the enumeration cap maps to exit code 3."""
    code, _, err = run(capsys, "ipoly", graph_file(C5_TEXT), "--cap", "3")
    assert code == 3
    assert error_line(err)["error"] == "CapExceededError"


def test_occupancy_on_c5(capsys, graph_file):
    """Test the triangle-free certificate verifies on C5."""
    code, out, _ = run(capsys, "occupancy", graph_file(C5_TEXT))
    assert code == 0
    result = json.loads(out)["result"]
    assert result["report"]["verified"]
    assert result["report"]["subgraphsChecked"] == 20
    assert len(result["params"]["beta"]) == 5


def test_occupancy_beta_gamma_go_together(capsys, graph_file):
    """Test a lone --beta is refused."""
    code, _, err = run(capsys, "occupancy", graph_file(C5_TEXT), "--beta", "2")
    assert code == 1
    assert "--gamma" in error_line(err)["message"]


@pytest.mark.parametrize("beta,gamma", [("0", "1"), ("2", "-1")])
def test_occupancy_non_positive_parameters_exit_1(capsys, graph_file, beta, gamma):
    """Test invalid --beta/--gamma give a JSON error line, not a traceback."""
    code, out, err = run(capsys, "occupancy", graph_file(C5_TEXT), "--beta", beta,
                         "--gamma", gamma)
    assert code == 1
    assert out == ""
    error = error_line(err)
    assert error["error"] == "ValidationError"
    assert error["exitCode"] == 1
    assert "positive" in error["message"]


def test_bounds_triangle_free(capsys):
    """Test the occupancy bound and an optional budget."""
    code, out, _ = run(capsys, "bounds", "triangle-free", "--delta", "100", "--delta0", "10")
    assert code == 0
    result = json.loads(out)["result"]
    assert result["occupancy"]["value"] > 0
    assert result["budget"]["value"] == pytest.approx(100 / math.log(100))


def test_bounds_regime_error_exits_3(capsys):
    """Test a clique bound below its threshold exits 3."""
    code, _, err = run(capsys, "bounds", "clique:4", "--delta", "2")
    assert code == 3
    assert error_line(err)["error"] == "RegimeError"


def test_bounds_unknown_setting_exits_1(capsys):
    """Test an unknown sparsity setting is a usage error."""
    code, _, err = run(capsys, "bounds", "sparse-ish", "--delta", "10")
    assert code == 1
    assert error_line(err)["error"] == "SpecError"


def test_colour_c5_from_lists(capsys, graph_file, tmp_path):
    """Test nine colours per vertex colours C5 and exits 0."""
    lists = tmp_path / "lists.txt"
    lists.write_text("".join(f"{v}: " + " ".join(map(str, range(9))) + "\n" for v in range(5)))
    code, out, _ = run(capsys, "colour", graph_file(C5_TEXT), "--lists", str(lists),
                       "--ell", "3", "--factor", "1", "--seed", "4")
    assert code == 0
    output = json.loads(out)
    certificate = ColouringCertificate.model_validate(output["result"])
    assert certificate.verified
    colours = {int(k): v for k, v in output["result"]["colours"].items()}
    assert all(colours[v] != colours[(v + 1) % 5] for v in range(5))
    assert str(lists) in output["inputs"]


def test_colour_is_deterministic(capsys, graph_file):
    """Test equal seeds print equal certificates."""
    path = graph_file(C5_TEXT)
    argv = ["colour", path, "--random-cover", "9", "--ell", "3", "--factor", "1", "--seed", "11"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_colour_failure_exits_2(capsys, graph_file, tmp_path):
    """Test a list shorter than the target yields a phase-attributed failure."""
    lists = tmp_path / "lists.txt"
    lists.write_text("0: 0 1\n1: 0 1\n")
    code, out, _ = run(capsys, "colour", graph_file(K2_TEXT), "--lists", str(lists),
                       "--ell", "3")
    assert code == 2
    failure = json.loads(out)["result"]["failure"]
    assert failure["phase"] == "resample"
    assert failure["vertex"] == 0


def test_fractional_on_edgeless_graph(capsys, graph_file):
    """Test the greedy fractional colouring succeeds when budgets are generous."""
    code, out, _ = run(capsys, "fractional", graph_file("p 3 0\n"), "--beta", "2",
                       "--gamma", "1", "--lambda", "1000000")
    assert code == 0
    assert json.loads(out)["result"]["colouring"] is not None


def test_gen_kneser(capsys):
    """Test generating K(5,2), the Petersen graph."""
    code, out, _ = run(capsys, "gen", "kneser(5,2)")
    assert code == 0
    assert out.splitlines()[0] == "p 10 15"


def test_gen_unknown_family_exits_1(capsys):
    """Test an unknown generator is a usage error."""
    code, _, err = run(capsys, "gen", "hypercube(3)")
    assert code == 1
    assert error_line(err)["error"] == "SpecError"


def test_out_writes_file(capsys, tmp_path):
    """Test --out redirects output to a file."""
    target = tmp_path / "c5.txt"
    code, out, _ = run(capsys, "gen", "cycle(5)", "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text() == C5_TEXT


def test_split_trivial_level(capsys, graph_file):
    """Test a large f needs no splitting."""
    code, out, _ = run(capsys, "split", graph_file(C5_TEXT), "--f", "100")
    assert code == 0
    output = json.loads(out)
    assert output["lam"] is None
    assert output["result"]["j"] == 0
    assert output["result"]["parts"] == [[0, 1, 2, 3, 4]]


def test_schema_single_and_all(capsys):
    """Test schema output for one model and for all of them."""
    code, out, _ = run(capsys, "schema", "PolynomialReport")
    assert code == 0
    schema = json.loads(out)["PolynomialReport"]
    assert "zExact" in schema["properties"]
    code, out, _ = run(capsys, "schema")
    assert sorted(json.loads(out)) == sorted(SCHEMAS)
    code, _, err = run(capsys, "schema", "Nope")
    assert code == 1
    assert "unknown model" in error_line(err)["message"]


def test_sweep_list(capsys):
    """Test listing the shipped sweeps."""
    code, out, _ = run(capsys, "sweep", "--list")
    assert code == 0
    assert json.loads(out)["result"]["sweeps"] == ["splitting", "triangle-free-colouring"]


def test_sweep_requires_a_name(capsys, tmp_path):
    """Test a missing or unknown sweep name exits 1."""
    code, _, _ = run(capsys, "sweep")
    assert code == 1
    code, _, err = run(capsys, "sweep", "ghost", "--config-dir", str(tmp_path))
    assert code == 1
    assert "ghost" in error_line(err)["message"]


def test_version_flag(capsys):
    """Test --version prints and exits 0."""
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("locc ")


def test_console_script_is_declared():
    """Test pyproject exposes the locc entry point."""
    text = (Path(__file__).resolve().parents[1] / "pyproject.toml").read_text()
    assert 'locc = "local_occupancy.cli:main"' in text
