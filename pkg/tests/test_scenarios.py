import json
from pathlib import Path

import pytest

from dicriticals.cli import main
from dicriticals.errors import ScenarioError
from dicriticals.fixtures import FIXTURES, load_fixture, three_points_line_explicit
from dicriticals.jsonio import canonical_dumps
from dicriticals.scenario import scenario_from_json, scenario_to_json
from dicriticals.verify import run_verify

DATA = Path(__file__).parent / "data"


def test_every_fixture_round_trips_through_json():
    for name in FIXTURES:
        sc = load_fixture(name)
        data = scenario_to_json(sc)
        again = scenario_from_json(json.loads(json.dumps(data)))
        assert scenario_to_json(again) == data


def test_scenario_json_rejects_bad_schema():
    sc = scenario_to_json(load_fixture("three-points"))
    sc["schema_version"] = 99
    with pytest.raises(ScenarioError):
        scenario_from_json(sc)


def test_every_fixture_verifies():
    for name in FIXTURES:
        report = run_verify(load_fixture(name))
        assert report.overall, f"fixture {name} failed verification"


def test_verify_is_deterministic():
    a = run_verify(load_fixture("two-dicriticals"))
    b = run_verify(load_fixture("two-dicriticals"))
    assert canonical_dumps(a.to_json()) == canonical_dumps(b.to_json())


def test_verify_golden_bytes():
    report = run_verify(load_fixture("three-points"))
    golden = (DATA / "three-points.verify.json").read_text()
    assert canonical_dumps(report.to_json()) == golden


def test_fault_injection_pole_power_flags_last_divisor():
    sc = three_points_line_explicit(20)
    report = run_verify(sc)
    assert not report.overall
    bad = {row.divisor for row in report.rows if not row.ok}
    assert 4 in bad  # the divisor whose window the oversized pole power violates


def test_support_request_verifies_end_to_end():
    from dicriticals.candidates import Bindings
    from dicriticals.scenario import Scenario, SupportRequest
    from dicriticals.fixtures import point_point_line

    base = point_point_line()
    sc = Scenario(
        name="support-middle",
        descriptor=base.descriptor,
        request=SupportRequest(targets=(2,), offsets={1: 1, 3: 1}),
        tower=base.tower,
        equations=base.equations,
        bindings=Bindings(bundles={1: ("C1",), 2: ("C2",), 3: ("C3",)}),
        seed=42,
    )
    report = run_verify(sc)
    assert report.overall
    rows = {row.divisor: row for row in report.rows}
    assert rows[2].status == "dicritical" and rows[2].symbolic_order == 0
    assert rows[1].status == "constant" and rows[3].status == "constant"


def test_cli_matrix(capsys):
    assert main(["matrix", "--scenario", "point-point-line", "--out", ""]) == 0
    out = capsys.readouterr().out
    assert "[ 1  1  1 ]" in out and "minors: [1, 1, 1]" in out
    assert main(["matrix", "--scenario", "three-points", "--out", ""]) == 0
    out = capsys.readouterr().out
    assert "[ 2  4  7 ]" in out and "[ 3  5  9 ]" in out


def test_cli_solve_verify_report(tmp_path, capsys):
    out = str(tmp_path)
    assert main(["solve", "--scenario", "three-points", "--out", out]) == 0
    cert_path = tmp_path / "three-points.solve.json"
    assert cert_path.exists()
    assert json.loads(cert_path.read_text())["bundle_exponents"] == [2, 4]

    assert main(["verify", "--scenario", "three-points", "--out", out]) == 0
    report_path = tmp_path / "three-points.verify.json"
    first = report_path.read_text()
    assert main(["verify", "--scenario", "three-points", "--out", out]) == 0
    assert report_path.read_text() == first  # byte-stable under the fixed seed

    assert main(["report", "--scenario", "three-points", "--out", out]) == 0
    text = capsys.readouterr().out
    assert "overall: PASS" in text
    assert (tmp_path / "three-points.report.txt").exists()


def test_cli_verify_from_stored_certificate(tmp_path, capsys):
    out = str(tmp_path)
    assert main(["solve", "--scenario", "three-points-line", "--out", out]) == 0
    cert = str(tmp_path / "three-points-line.solve.json")
    assert main(["verify", "--scenario", "three-points-line", "--out", out, "--certificate", cert]) == 0
    capsys.readouterr()
    # a certificate for the wrong request is rejected as bad input
    assert main(["solve", "--scenario", "three-points", "--out", out]) == 0
    wrong = str(tmp_path / "three-points.solve.json")
    assert main(["verify", "--scenario", "three-points-line", "--out", out, "--certificate", wrong]) == 2


def test_cli_detects_drift(tmp_path, capsys):
    out = str(tmp_path)
    assert main(["verify", "--scenario", "three-points", "--out", out]) == 0
    path = tmp_path / "three-points.verify.json"
    path.write_text(path.read_text().replace("PASS", "FAIL"))
    assert main(["verify", "--scenario", "three-points", "--out", out]) == 1


def test_cli_input_errors(tmp_path):
    assert main(["matrix", "--scenario", "no-such-fixture", "--out", str(tmp_path)]) == 2
    assert main(["report", "--scenario", "three-points", "--out", str(tmp_path)]) == 2
    assert main(["solve", "--scenario", "point-point-line", "--out", str(tmp_path)]) == 2


def test_cli_scenario_file_and_list(tmp_path, capsys):
    sc = load_fixture("three-points")
    path = tmp_path / "scenario.json"
    path.write_text(canonical_dumps(scenario_to_json(sc)))
    assert main(["verify", "--scenario", str(path), "--out", str(tmp_path / "out")]) == 0
    capsys.readouterr()
    assert main(["list"]) == 0
    assert "two-dicriticals" in capsys.readouterr().out
