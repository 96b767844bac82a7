"""Batch command line: matrices, certificates, symbolic verification, reports.

Artifacts land under ``--out`` as ``<scenario>.<command>.json`` and are
append-only: rewriting an artifact with different bytes is reported as drift
and fails the run.  Exit codes: 0 pass, 1 invariant violation or drift,
2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .descriptor import leading_principal_minors, special_matrix, valuation_matrix
from .errors import DicriticalError, ScenarioError
from .fixtures import FIXTURES, load_fixture
from .jsonio import canonical_dumps
from .scenario import LastRequest, Scenario, SingleRequest, scenario_from_json
from .verify import VerifyReport, render_report, run_verify, solve_scenario

PASS, VIOLATION, INPUT_ERROR = 0, 1, 2


def load_scenario(ref: str) -> Scenario:
    if ref in FIXTURES:
        return load_fixture(ref)
    path = Path(ref)
    if not path.exists():
        raise ScenarioError(f"scenario {ref!r} is neither a fixture name nor a file")
    return scenario_from_json(json.loads(path.read_text()))


def write_artifact(out_dir: Path, name: str, payload: str) -> bool:
    """Write an append-only artifact; returns False on drift."""
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / name
    if target.exists():
        if target.read_text() == payload:
            return True
        print(f"drift: {target} already exists with different content", file=sys.stderr)
        return False
    target.write_text(payload)
    return True


def _format_matrix(rows) -> str:
    width = max(len(str(v)) for row in rows for v in row)
    return "\n".join("[ " + "  ".join(str(v).rjust(width) for v in row) + " ]" for row in rows)


def cmd_matrix(args) -> int:
    scenario = load_scenario(args.scenario)
    matrix = valuation_matrix(scenario.descriptor)
    minors = leading_principal_minors(matrix)
    print(f"valuation matrix of {scenario.name}:")
    print(_format_matrix(matrix.rows))
    stacked = None
    request = scenario.request
    if isinstance(request, (LastRequest, SingleRequest)) and scenario.descriptor.special_mults:
        contacts = request.contact_orders or {j: 1 for j in scenario.descriptor.parents(request.s)}
        stacked = special_matrix(scenario.descriptor, request.s, contacts)
        print("special hypersurface rows:")
        print(_format_matrix(stacked.special_rows))
    print(f"leading principal minors: {list(minors)}")
    payload = canonical_dumps(
        {
            "command": "matrix",
            "scenario": scenario.name,
            "rows": [list(r) for r in matrix.rows],
            "special_rows": [list(r) for r in stacked.special_rows] if stacked else [],
            "minors": list(minors),
        }
    )
    if args.out and not write_artifact(Path(args.out), f"{scenario.name}.matrix.json", payload):
        return VIOLATION
    if any(v != 1 for v in minors):
        print("unimodularity violated", file=sys.stderr)
        return VIOLATION
    return PASS


def cmd_solve(args) -> int:
    scenario = load_scenario(args.scenario)
    cert = solve_scenario(scenario)
    payload = canonical_dumps(cert.to_json())
    print(f"certificate for {scenario.name}:")
    _print_profile(cert)
    if not write_artifact(Path(args.out), f"{scenario.name}.solve.json", payload):
        return VIOLATION
    return PASS


def _print_profile(cert) -> None:
    data = cert.to_json()
    kind = data["kind"]
    if kind == "support":
        print(f"  exponents: {data['exponents']}")
        print(f"  orders:    {data['orders']}")
        if data["needs_split"]:
            print(f"  nonconstant bundles required at: {data['needs_split']}")
    elif kind == "last":
        print(f"  bundle exponents: {data['bundle_exponents']}")
        print(f"  orders:           {data['orders']}")
    elif kind == "single":
        print(f"  later exponents: {data['later_exponents']}")
        print(f"  pole power:      {data['pole_power']}")
        print(f"  orders:          {data['orders']}")
    elif kind == "profile":
        print(f"  degrees: {data['degrees']}")
        for j, part in sorted(data["parts"].items(), key=lambda kv: int(kv[0])):
            print(f"  part {j}: pole power {part['pole_power']}, orders {part['orders']}")


def cmd_verify(args) -> int:
    scenario = load_scenario(args.scenario)
    certificate = None
    if args.certificate:
        from .solver import certificate_from_json

        path = Path(args.certificate)
        if not path.exists():
            raise ScenarioError(f"no certificate at {path}")
        certificate = certificate_from_json(json.loads(path.read_text()))
    report = run_verify(scenario, seed=args.seed, retries=args.retries, certificate=certificate)
    text = render_report(report)
    print(text, end="")
    payload = canonical_dumps(report.to_json())
    ok = True
    if args.out:
        ok = write_artifact(Path(args.out), f"{scenario.name}.verify.json", payload)
    if not report.overall or not ok:
        return VIOLATION
    return PASS


def cmd_report(args) -> int:
    scenario = load_scenario(args.scenario)
    path = Path(args.out) / f"{scenario.name}.verify.json"
    if not path.exists():
        raise ScenarioError(f"no verification artifact at {path}; run verify first")
    data = json.loads(path.read_text())
    report = VerifyReport(scenario=data["scenario"], seed=data["seed"])
    from .verify import VerifyRow

    for row in data["rows"]:
        report.rows.append(VerifyRow(**row))
    report.notes = list(data.get("notes", []))
    text = render_report(report)
    print(text, end="")
    if not write_artifact(Path(args.out), f"{scenario.name}.report.txt", text):
        return VIOLATION
    return PASS if report.overall else VIOLATION


def cmd_list(_args) -> int:
    for name in sorted(FIXTURES):
        print(name)
    return PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dicriticals",
        description="exact construction and verification of prescribed dicritical profiles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", required=True, help="fixture name or scenario JSON path")
        p.add_argument("--out", default="out", help="artifact directory (default: out)")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        p.add_argument("--retries", type=int, default=4, help="redraw cap for genericity checks")

    p_matrix = sub.add_parser("matrix", help="print the valuation matrix and its minors")
    common(p_matrix)
    p_matrix.set_defaults(func=cmd_matrix)

    p_solve = sub.add_parser("solve", help="run the requested solver and store the certificate")
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="verify the certificate symbolically on charts")
    common(p_verify)
    p_verify.add_argument(
        "--certificate", default=None, help="verify this stored certificate instead of re-solving"
    )
    p_verify.set_defaults(func=cmd_verify)

    p_report = sub.add_parser("report", help="render a stored verification as a text table")
    common(p_report)
    p_report.set_defaults(func=cmd_report)

    p_list = sub.add_parser("list", help="list built-in scenarios")
    p_list.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except DicriticalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VIOLATION


if __name__ == "__main__":
    sys.exit(main())
