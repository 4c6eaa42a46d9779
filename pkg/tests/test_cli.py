import json

import pytest

from conftest import EXTENDED, GOLDEN
from solvqi import main as cli
from solvqi.schemas.report import Report


def run_json(capsys, *argv):
    code = cli.run([*argv, "--json", "--quiet"])
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize(
    "command,sample,golden",
    [
        ("cdim", "g3_3", "cdim_g3_3"),
        ("series", "heis", "series_heis"),
        ("conedim", "g5_19_half", "conedim_g5_19_half"),
        ("validate", "heis", "validate_heis"),
    ],
)
def test_golden_results(capsys, sample_path, command, sample, golden):
    code, report = run_json(capsys, command, sample_path(sample))
    assert code == 0
    expected = json.loads((GOLDEN / f"{golden}.json").read_text(encoding="utf-8"))
    assert report["results"] == expected
    assert report["command"] == command
    assert report["schema_version"] == 1


def test_json_report_parses_back(capsys, sample_path):
    cli.run(["heintze", sample_path("g3_5"), "--json", "--quiet"])
    report = Report.from_json(capsys.readouterr().out)
    assert report.results["cdim"] == "3"
    assert report.results["spsp"] == {"value": "true", "rule": "spsp-abelian"}
    assert [c.rule for c in report.citations] == ["spsp-abelian"]


def test_text_output(capsys, sample_path):
    assert cli.run(["conedim", sample_path("g4_9_0"), "--quiet"]) == 0
    out = capsys.readouterr().out
    assert "cone_dim: 2" in out


def test_syntax_error_exit_code(capsys, tmp_path):
    path = tmp_path / "decimal.lie"
    path.write_text("algebra g dim 3\n[e3,e1] = 0.5 e1\n", encoding="utf-8")
    code, report = run_json(capsys, "print", str(path))
    assert code == 1
    diagnostic = report["results"]["error"]["diagnostic"]
    assert (diagnostic["line"], diagnostic["column"]) == (2, 11)
    assert diagnostic["hint"] == "1/2"


def test_jacobi_violation_exit_code(capsys, tmp_path):
    path = tmp_path / "broken.lie"
    path.write_text("algebra broken dim 3\n[e1,e2] = e3\n[e3,e1] = e1\n", encoding="utf-8")
    code, report = run_json(capsys, "validate", str(path))
    assert code == 1
    assert report["results"]["valid"] is False
    assert report["results"]["violation"]["triple"] == ["e1", "e2", "e3"]


def test_unsupported_instance_exit_code(capsys, sample_path):
    code, report = run_json(capsys, "cdim", sample_path("g4_9_0"))
    assert code == 2
    assert report["results"]["error"]["type"] == "UnsupportedInstanceError"


def test_wrong_number_of_files(capsys, sample_path):
    code, report = run_json(capsys, "compare", sample_path("g3_3"))
    assert code == 1
    assert "takes 2 file argument(s)" in report["results"]["error"]["message"]


def test_rho1(capsys, sample_path):
    code, report = run_json(capsys, "rho1", sample_path("g4_9_0"))
    assert code == 0
    results = report["results"]
    assert results["image"] == "R x g3_3"
    assert results["image_complete"] is True
    assert results["construction_log"][0] == "exponential radical has dimension 2"
    assert results["document"][0].startswith("algebra ")



def test_rho0(capsys):
    code, report = run_json(capsys, "rho0", str(EXTENDED / "g5_37.lie"))
    assert code == 0
    results = report["results"]
    assert results["modified"] is True
    assert results["cartan_dim"] == 2
    assert len(results["output"]["brackets"]) == 4
    assert not any("e5" in line for line in results["output"]["brackets"])
    assert results["construction_log"][0].startswith("Cartan subalgebra of dimension 2")


def test_rho0_of_completely_solvable_input(capsys, sample_path):
    code, report = run_json(capsys, "rho0", sample_path("g4_9_0"))
    assert code == 0
    assert report["results"]["modified"] is False
    assert report["results"]["cartan_dim"] is None


def test_match(capsys, sample_path):
    code, report = run_json(capsys, "match", sample_path("g4_9"))
    assert code == 0
    assert report["results"]["match"] == "g4_9"


def test_split(capsys, sample_path):
    code, report = run_json(capsys, "split", sample_path("r2_x_g3_3"))
    assert code == 0
    assert report["results"]["euclidean_dim"] == 2
    assert [f["match"] for f in report["results"]["factors"]] == ["g3_3"]


def test_compare(capsys, sample_path):
    code, report = run_json(capsys, "compare", sample_path("g3_5"), sample_path("g3_3"))
    assert code == 0
    results = report["results"]
    assert results["verdict"] == "NotQuasiisometric"
    assert [c["rule"] for c in results["certificate"]] == [
        "R0-growth", "R1-cone-dimension", "R2-conformal-dimension"
    ]
    assert {c["rule"] for c in report["citations"]} >= {"R0-growth", "R2-conformal-dimension"}


def test_catalog(capsys):
    code, report = run_json(capsys, "catalog", "--extended", str(EXTENDED))
    assert code == 0
    assert [e["name"] for e in report["results"]["builtin"]][:3] == ["a2", "heis", "g3_3"]
    assert all(e["accepted"] for e in report["results"]["extended"])
    g5_16 = next(e for e in report["results"]["extended"] if e["name"] == "g5_16")
    assert g5_16["param_range"] == "tau>0"
    assert g5_16["range_external"] is True
    assert g5_16["through_rho0"] is True


def test_missing_extended_directory(capsys, tmp_path):
    code, report = run_json(capsys, "catalog", "--extended", str(tmp_path / "absent"))
    assert code == 1
    assert report["results"]["error"]["type"] == "ConfigError"


def test_console_entry_point(monkeypatch, capsys, sample_path):
    monkeypatch.setattr("sys.argv", ["solvqi", "conedim", sample_path("g3_3"), "--quiet"])
    with pytest.raises(SystemExit) as excinfo:
        cli.main()
    assert excinfo.value.code == 0
    assert "cone_dim: 1" in capsys.readouterr().out
