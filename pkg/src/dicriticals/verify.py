"""Symbolic verification of solver certificates against chart towers.

For every divisor in scope the report compares the certificate's predicted
order with the order computed by exact pullback, then checks the restriction
status (constant or dominant) and, where a line template is available, the
restriction degree.  The combinatorial solver and the symbolic engine share
no code path for these numbers, so agreement is a real cross-check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .candidates import build_last, build_profile, build_single, build_support
from .charts import dicritical_degree, divisor_order, restrict, status_of
from .descriptor import valuation_matrix
from .errors import DicriticalError, ScenarioError
from .jsonio import SCHEMA_VERSION
from .poly import Polynomial
from .ratfunc import RationalFunction
from .scenario import (
    ExplicitRequest,
    LastRequest,
    ProfileRequest,
    Scenario,
    SingleRequest,
    SupportRequest,
    validate_scenario,
)
from .solver import (
    combine_profile,
    solve_last_dicritical,
    solve_single_dicritical,
    solve_support,
)

CONSTANT = "constant"
DICRITICAL = "dicritical"


@dataclass(frozen=True)
class VerifyRow:
    item: str
    divisor: int
    predicted_order: int | None
    symbolic_order: int
    status: str | None
    value: str | None
    degree: int | None
    expected: str
    ok: bool
    restriction: str | None = None

    def to_json(self) -> dict:
        return {
            "item": self.item,
            "divisor": self.divisor,
            "predicted_order": self.predicted_order,
            "symbolic_order": self.symbolic_order,
            "status": self.status,
            "value": self.value,
            "degree": self.degree,
            "expected": self.expected,
            "ok": self.ok,
            "restriction": self.restriction,
        }


@dataclass
class VerifyReport:
    scenario: str
    seed: int
    rows: list[VerifyRow] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(row.ok for row in self.rows)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "scenario": self.scenario,
            "seed": self.seed,
            "overall": "PASS" if self.overall else "FAIL",
            "rows": [row.to_json() for row in self.rows],
            "notes": list(self.notes),
        }


def solve_scenario(sc: Scenario):
    """Dispatch the scenario's request to the matching solver."""
    req = sc.request
    if req is None or isinstance(req, ExplicitRequest):
        raise ScenarioError("scenario carries no solver request")
    if isinstance(req, SupportRequest):
        return solve_support(valuation_matrix(sc.descriptor), req.targets, req.offsets or None)
    if isinstance(req, LastRequest):
        return solve_last_dicritical(
            sc.descriptor,
            req.s,
            req.degree,
            special_exponents=req.special_exponents,
            contact_orders=req.contact_orders,
            target_orders=req.target_orders,
        )
    if isinstance(req, SingleRequest):
        return _solve_single(sc.descriptor, req)
    if isinstance(req, ProfileRequest):
        parts = [_solve_single(sc.descriptor, part) for part in req.parts.values()]
        return combine_profile(parts, req.degrees)
    raise ScenarioError(f"unknown request type {type(req).__name__}")


def _solve_single(descriptor, req: SingleRequest):
    return solve_single_dicritical(
        descriptor,
        req.s,
        req.degree,
        special_exponents=req.special_exponents,
        contact_orders=req.contact_orders,
        target_orders=req.target_orders,
        tail=req.tail,
    )


def explicit_function(sc: Scenario) -> RationalFunction:
    req = sc.request
    assert isinstance(req, ExplicitRequest)
    if sc.tower is None:
        raise ScenarioError("an explicit scenario needs a chart tower")
    variables = sc.tower.variables
    num = Polynomial.one(variables)
    for name, exp in req.num_factors:
        num = num * _equation(sc, name) ** exp
    den = Polynomial.zero(variables)
    for term in req.den_terms:
        part = Polynomial.one(variables)
        for name, exp in term:
            part = part * _equation(sc, name) ** exp
        den = den + part
    return RationalFunction(num, den)


def _equation(sc: Scenario, name: str) -> Polynomial:
    if name not in sc.equations:
        raise ScenarioError(f"missing equation {name!r}")
    return sc.equations[name]


def run_verify(
    sc: Scenario,
    seed: int | None = None,
    retries: int = 4,
    certificate=None,
) -> VerifyReport:
    """Full symbolic verification; figures out scope from the request kind.

    With ``certificate`` given, that stored certificate is verified instead
    of solving again (the two agree for deterministic solves, but a tampered
    or stale artifact will be caught here).
    """
    validate_scenario(sc)
    if sc.tower is None:
        raise ScenarioError("verification needs a chart tower")
    report = VerifyReport(scenario=sc.name, seed=sc.seed if seed is None else seed)
    rng = random.Random(report.seed)
    req = sc.request

    if req is None:
        if certificate is not None:
            raise ScenarioError("matrix-only scenarios take no certificate")
        _verify_matrix_rows(sc, report)
        return report

    if isinstance(req, ExplicitRequest):
        if sc.expect is None:
            raise ScenarioError("an explicit scenario needs expected outcomes")
        h = explicit_function(sc)
        predicted = sc.expect.orders
        expected = dict(sc.expect.statuses)
        scope = range(1, sc.descriptor.m + 1)
        _verify_function(sc, report, "h", h, scope, predicted, expected, rng, retries)
        return report

    cert = certificate if certificate is not None else solve_scenario(sc)
    _check_certificate_matches(req, cert)
    if isinstance(req, SupportRequest):
        h = build_support(cert, sc.equations, sc.bindings)
        expected = {
            i: ((DICRITICAL, None) if i in cert.targets else (CONSTANT, None))
            for i in range(1, sc.descriptor.m + 1)
        }
        _verify_function(
            sc, report, "h", h, range(1, sc.descriptor.m + 1), cert.orders, expected, rng, retries
        )
    elif isinstance(req, LastRequest):
        h = build_last(cert, sc.equations, sc.bindings)
        expected = {i: (CONSTANT, None) for i in range(1, req.s)}
        expected[req.s] = (DICRITICAL, cert.degree)
        _verify_function(sc, report, "h", h, range(1, req.s + 1), cert.orders, expected, rng, retries)
    elif isinstance(req, SingleRequest):
        h = build_single(cert, sc.equations, sc.bindings)
        expected = {i: (CONSTANT, None) for i in range(1, sc.descriptor.m + 1)}
        expected[req.s] = (DICRITICAL, cert.degree)
        _verify_function(
            sc, report, "h", h, range(1, sc.descriptor.m + 1), cert.orders, expected, rng, retries
        )
    elif isinstance(req, ProfileRequest):
        h, twists = build_profile(cert, sc.equations, sc.bindings, rng)
        report.notes.append(
            "twists: " + ", ".join(f"{t.target}: a={t.a}, b={t.b}" for t in twists)
        )
        expected = {i: (CONSTANT, None) for i in range(1, sc.descriptor.m + 1)}
        for j, degree in cert.degrees.items():
            expected[j] = (DICRITICAL, degree)
        predicted = tuple(0 for _ in range(sc.descriptor.m))
        _verify_function(
            sc, report, "h", h, range(1, sc.descriptor.m + 1), predicted, expected, rng, retries
        )
    else:
        raise ScenarioError(f"unknown request type {type(req).__name__}")
    return report


def _check_certificate_matches(req, cert) -> None:
    from .solver import (
        LastDicriticalCertificate,
        ProfileCertificate,
        SingleDicriticalCertificate,
        SupportCertificate,
    )

    expected_type = {
        SupportRequest: SupportCertificate,
        LastRequest: LastDicriticalCertificate,
        SingleRequest: SingleDicriticalCertificate,
        ProfileRequest: ProfileCertificate,
    }[type(req)]
    if not isinstance(cert, expected_type):
        raise ScenarioError(
            f"certificate kind {type(cert).__name__} does not match the {req.kind} request"
        )
    if isinstance(req, (LastRequest, SingleRequest)) and (cert.s, cert.degree) != (req.s, req.degree):
        raise ScenarioError("certificate target or degree disagrees with the request")
    if isinstance(req, ProfileRequest) and set(cert.parts) != set(req.parts):
        raise ScenarioError("certificate target set disagrees with the request")


def _verify_matrix_rows(sc: Scenario, report: VerifyReport) -> None:
    """Matrix-only scenarios: check every bound hypercurvette row symbolically."""
    matrix = valuation_matrix(sc.descriptor)
    if not sc.bindings.rows:
        raise ScenarioError("matrix verification needs row bindings")
    for j in sorted(sc.bindings.rows):
        h = RationalFunction(_equation(sc, sc.bindings.rows[j]))
        for i in range(1, sc.descriptor.m + 1):
            charts, _ = sc.chart_path(i)
            symbolic = divisor_order(h, sc.tower, i, charts=charts)
            predicted = matrix.entry(j, i)
            report.rows.append(
                VerifyRow(
                    item=f"curvette {j}",
                    divisor=i,
                    predicted_order=predicted,
                    symbolic_order=symbolic,
                    status=None,
                    value=None,
                    degree=None,
                    expected="order",
                    ok=symbolic == predicted,
                )
            )


def _verify_function(sc, report, item, h, scope, predicted, expected, rng, retries) -> None:
    for i in scope:
        charts, blowups = sc.chart_path(i)
        symbolic = divisor_order(h, sc.tower, i, charts=charts)
        want = None if predicted is None else predicted[i - 1]
        ok = want is None or symbolic == want

        want_kind, want_degree = expected.get(i, (None, None))
        status = None
        value = None
        degree = None
        restriction_str = None
        if want_kind is not None:
            restriction = restrict(h, sc.tower, i, charts=charts, blowups=blowups)
            st = status_of(restriction)
            status = st.kind
            if st.kind == CONSTANT:
                value = "inf" if st.infinite else str(st.value)
            else:
                restriction_str = restriction.render()
            ok = ok and st.kind == want_kind
            if want_kind == DICRITICAL and st.kind == DICRITICAL and want_degree is not None:
                line = sc.lines.get(i)
                if line is None:
                    raise ScenarioError(f"divisor {i} needs a line template for its degree check")
                try:
                    degree = dicritical_degree(
                        h, sc.tower, i, line, rng, charts=charts, blowups=blowups, retries=retries
                    )
                except DicriticalError as exc:
                    report.notes.append(f"degree check failed at divisor {i}: {exc}")
                    ok = False
                else:
                    ok = ok and degree == want_degree
        expected_str = "order"
        if want_kind == CONSTANT:
            expected_str = CONSTANT
        elif want_kind == DICRITICAL:
            expected_str = DICRITICAL if want_degree is None else f"dicritical:{want_degree}"
        report.rows.append(
            VerifyRow(
                item=item,
                divisor=i,
                predicted_order=want,
                symbolic_order=symbolic,
                status=status,
                value=value,
                degree=degree,
                expected=expected_str,
                ok=ok,
                restriction=restriction_str,
            )
        )


def render_report(report: VerifyReport) -> str:
    """Fixed-width text table; stable for golden comparisons."""
    headers = ("item", "divisor", "predicted", "symbolic", "status", "degree", "expected", "ok")
    lines = []
    rows = []
    for row in report.rows:
        status = row.status or "-"
        if row.status == CONSTANT and row.value is not None:
            status = f"constant({row.value})"
        rows.append(
            (
                row.item,
                f"E_{row.divisor}",
                "-" if row.predicted_order is None else str(row.predicted_order),
                str(row.symbolic_order),
                status,
                "-" if row.degree is None else str(row.degree),
                row.expected,
                "ok" if row.ok else "MISMATCH",
            )
        )
    widths = [max(len(h), *(len(r[k]) for r in rows)) if rows else len(h) for k, h in enumerate(headers)]
    lines.append("  ".join(h.ljust(widths[k]) for k, h in enumerate(headers)))
    for r in rows:
        lines.append("  ".join(r[k].ljust(widths[k]) for k in range(len(headers))))
    for note in report.notes:
        lines.append(f"note: {note}")
    restrictions = [
        f"restriction at E_{row.divisor}: {row.restriction}" for row in report.rows if row.restriction
    ]
    lines.extend(restrictions)
    lines.append(f"overall: {'PASS' if report.overall else 'FAIL'}")
    return "\n".join(lines) + "\n"
