"""Certificate-producing solvers for prescribed dicritical profiles.

Three construction problems are solved here, in increasing strength:

* ``solve_support``: choose bundle exponents so the candidate product of
  hypercurvettes has order zero exactly on a prescribed set of divisors.
* ``solve_last_dicritical``: force a chosen divisor s to carry a dominant
  restriction of prescribed degree while every earlier divisor gets a
  nonzero order, by playing hypercurvette bundles against special
  hypersurfaces with prescribed contact orders.
* ``solve_single_dicritical``: additionally silence every divisor after s by
  twisting with powers of later hypercurvettes and one extra power in the
  denominator whose exponent must land in an explicit rational window.

All systems are square with unimodular matrices, so the solutions are exact
integers; each certificate carries the full predicted order vector, which is
recomputed independently through the order recursion before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .descriptor import (
    ModificationDescriptor,
    TailData,
    ValuationMatrix,
    low_sets,
    pullback_orders,
    require_valid,
    special_matrix,
    valuation_matrix,
)
from .errors import BoundViolation, SolverError
from .jsonio import SCHEMA_VERSION, fraction_from_json, fraction_to_json, require_int
from .linalg import solve_row_system

NON_DICRITICAL = "non_dicritical"
DICRITICAL_POS = "dicritical_pos"
DICRITICAL_IF_SPLIT = "dicritical_if_split"


# -- linear forms -------------------------------------------------------------


@dataclass(frozen=True)
class LinearForm:
    """Exact affine-linear form in integer-indexed unknowns."""

    const: Fraction = Fraction(0)
    coeffs: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def make(cls, const=0, coeffs: Mapping[int, Fraction | int] | None = None) -> "LinearForm":
        items = []
        for idx in sorted(coeffs or {}):
            c = Fraction(coeffs[idx])
            if c:
                items.append((idx, c))
        return cls(Fraction(const), tuple(items))

    def coeff(self, idx: int) -> Fraction:
        for k, c in self.coeffs:
            if k == idx:
                return c
        return Fraction(0)

    def variables(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.coeffs)

    def __add__(self, other: "LinearForm | int | Fraction") -> "LinearForm":
        if not isinstance(other, LinearForm):
            return LinearForm(self.const + Fraction(other), self.coeffs)
        merged = dict(self.coeffs)
        for k, c in other.coeffs:
            merged[k] = merged.get(k, Fraction(0)) + c
        return LinearForm.make(self.const + other.const, merged)

    def __sub__(self, other: "LinearForm | int | Fraction") -> "LinearForm":
        if not isinstance(other, LinearForm):
            return self + (-Fraction(other))
        return self + other.scale(-1)

    def scale(self, factor: Fraction | int) -> "LinearForm":
        f = Fraction(factor)
        return LinearForm.make(self.const * f, {k: c * f for k, c in self.coeffs})

    def evaluate(self, assignment: Mapping[int, int | Fraction]) -> Fraction:
        total = self.const
        for k, c in self.coeffs:
            total += c * Fraction(assignment[k])
        return total

    def is_constant(self) -> bool:
        return not self.coeffs

    def render(self, prefix: str = "k") -> str:
        parts = [str(self.const)] if self.const or not self.coeffs else []
        for k, c in self.coeffs:
            parts.append(f"{c}*{prefix}{k}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "const": fraction_to_json(self.const),
            "coeffs": {str(k): fraction_to_json(c) for k, c in self.coeffs},
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearForm":
        coeffs = {int(k): fraction_from_json(v, "coefficient") for k, v in data.get("coeffs", {}).items()}
        return cls.make(fraction_from_json(data["const"], "constant"), coeffs)


# -- support certificates ------------------------------------------------------


@dataclass(frozen=True)
class SupportCertificate:
    exponents: tuple[int, ...]
    orders: tuple[int, ...]
    targets: tuple[int, ...]
    offsets: Mapping[int, int] = field(default_factory=dict)
    needs_split: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "support",
            "exponents": list(self.exponents),
            "orders": list(self.orders),
            "targets": list(self.targets),
            "offsets": {str(k): v for k, v in sorted(self.offsets.items())},
            "needs_split": list(self.needs_split),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SupportCertificate":
        return cls(
            exponents=tuple(require_int(v, "exponent") for v in data["exponents"]),
            orders=tuple(require_int(v, "order") for v in data["orders"]),
            targets=tuple(require_int(v, "target") for v in data["targets"]),
            offsets={int(k): require_int(v, "offset") for k, v in data.get("offsets", {}).items()},
            needs_split=tuple(require_int(v, "split index") for v in data.get("needs_split", [])),
        )


def solve_support(
    matrix: ValuationMatrix,
    targets: Iterable[int],
    offsets: Mapping[int, int] | None = None,
) -> SupportCertificate:
    """Exponents making the product of hypercurvette bundles vanish to order
    zero exactly on the target divisors.

    Off-target divisors receive the given nonzero orders (default +1).  A
    target whose solved exponent is zero is flagged: its bundle must then be
    a nonconstant ratio of two hypercurvettes of the same divisor.
    """
    m = matrix.size
    target_set = set(targets)
    if not target_set:
        raise SolverError("the target set must be nonempty")
    if not target_set <= set(range(1, m + 1)):
        raise SolverError(f"targets must lie in 1..{m}")
    offsets = dict(offsets or {})
    for j in offsets:
        if j in target_set:
            raise SolverError(f"divisor {j} is a target; it cannot carry an off-target order")
    orders = []
    for j in range(1, m + 1):
        if j in target_set:
            orders.append(0)
        else:
            value = offsets.setdefault(j, 1)
            if value == 0:
                raise SolverError(f"off-target order for divisor {j} must be nonzero")
            orders.append(value)
    exponents = solve_row_system([list(row) for row in matrix.rows], orders)
    needs_split = tuple(j for j in sorted(target_set) if exponents[j - 1] == 0)
    return SupportCertificate(
        exponents=exponents,
        orders=tuple(orders),
        targets=tuple(sorted(target_set)),
        offsets=offsets,
        needs_split=needs_split,
    )


def classify(orders: Sequence[int], exponents: Sequence[int]) -> tuple[str, ...]:
    """Status of each divisor from its order and bundle exponent."""
    if len(orders) != len(exponents):
        raise SolverError("orders and exponents must have equal length")
    out = []
    for n, r in zip(orders, exponents):
        if n != 0:
            out.append(NON_DICRITICAL)
        elif r != 0:
            out.append(DICRITICAL_POS)
        else:
            out.append(DICRITICAL_IF_SPLIT)
    return tuple(out)


# -- last-divisor certificates -------------------------------------------------


@dataclass(frozen=True)
class LastDicriticalCertificate:
    s: int
    degree: int
    special_owners: tuple[int, ...]
    special_exponents: Mapping[int, int]
    contact_orders: Mapping[int, int]
    bundle_exponents: tuple[int, ...]
    target_orders: Mapping[int, int]
    orders: tuple[int, ...]
    matrix_a: tuple[tuple[int, ...], ...]
    matrix_b: tuple[tuple[int, ...], ...]
    matrix_c: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "last",
            "s": self.s,
            "degree": self.degree,
            "special_owners": list(self.special_owners),
            "special_exponents": {str(k): v for k, v in sorted(self.special_exponents.items())},
            "contact_orders": {str(k): v for k, v in sorted(self.contact_orders.items())},
            "bundle_exponents": list(self.bundle_exponents),
            "target_orders": {str(k): v for k, v in sorted(self.target_orders.items())},
            "orders": list(self.orders),
            "matrix_a": [list(r) for r in self.matrix_a],
            "matrix_b": [list(r) for r in self.matrix_b],
            "matrix_c": [list(r) for r in self.matrix_c],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LastDicriticalCertificate":
        return cls(
            s=require_int(data["s"], "s"),
            degree=require_int(data["degree"], "degree"),
            special_owners=tuple(require_int(v, "owner") for v in data["special_owners"]),
            special_exponents={int(k): require_int(v, "exponent") for k, v in data["special_exponents"].items()},
            contact_orders={int(k): require_int(v, "contact") for k, v in data["contact_orders"].items()},
            bundle_exponents=tuple(require_int(v, "exponent") for v in data["bundle_exponents"]),
            target_orders={int(k): require_int(v, "target") for k, v in data["target_orders"].items()},
            orders=tuple(require_int(v, "order") for v in data["orders"]),
            matrix_a=tuple(tuple(require_int(v, "entry") for v in r) for r in data["matrix_a"]),
            matrix_b=tuple(tuple(require_int(v, "entry") for v in r) for r in data["matrix_b"]),
            matrix_c=tuple(tuple(require_int(v, "entry") for v in r) for r in data["matrix_c"]),
        )


def solve_last_dicritical(
    d: ModificationDescriptor,
    s: int,
    degree: int,
    special_exponents: Mapping[int, int] | None = None,
    contact_orders: Mapping[int, int] | None = None,
    target_orders: Mapping[int, int] | None = None,
    tail: TailData | None = None,
) -> LastDicriticalCertificate:
    """Solve the reduced square system for the bundle exponents below s.

    The divisor s gets order zero and restriction degree ``degree``; each
    parent j of s gets order (special exponent) * (contact order); every
    other divisor below s gets a prescribed nonzero order (default +1).
    """
    require_valid(d)
    if not (1 <= s <= d.m):
        raise SolverError(f"index {s} out of range 1..{d.m}")
    if degree < 1:
        raise SolverError("the prescribed degree must be >= 1")
    owners = sorted(d.parents(s))
    special_exponents = {j: 1 for j in owners} | dict(special_exponents or {})
    contact_orders = {j: 1 for j in owners} | dict(contact_orders or {})
    if set(special_exponents) != set(owners) or set(contact_orders) != set(owners):
        raise SolverError("special exponents and contact orders must be indexed by the parents of s")
    if any(v < 1 for v in special_exponents.values()):
        raise SolverError("special exponents must be positive")
    if any(v < 1 for v in contact_orders.values()):
        raise SolverError("contact orders must be positive")
    free = [i for i in range(1, s) if i not in owners]
    target_orders = {i: 1 for i in free} | dict(target_orders or {})
    if set(target_orders) != set(free):
        raise SolverError("target orders must be indexed by the divisors below s outside the parents of s")
    if any(v == 0 for v in target_orders.values()):
        raise SolverError("target orders must be nonzero")

    matrix = valuation_matrix(d)
    _check_order_identity(d, matrix, s, owners)

    if owners:
        special = special_matrix(d, s, contact_orders, tail=tail)
        b_rows = special.special_rows
    else:
        b_rows = ()

    a_sub = tuple(tuple(matrix.entry(i, t) for t in range(1, s)) for i in range(1, s))
    b_sub = tuple(tuple(row[t - 1] for t in range(1, s)) for row in b_rows)
    c_sub = tuple(
        tuple(contact_orders[j] if t == j else 0 for t in range(1, s)) for j in owners
    )

    rhs = []
    for t in range(1, s):
        value = target_orders.get(t, 0)
        for idx, j in enumerate(owners):
            value += special_exponents[j] * (b_sub[idx][t - 1] + c_sub[idx][t - 1])
        rhs.append(value)
    exponents = solve_row_system([list(r) for r in a_sub], rhs) if s > 1 else ()

    orders = tuple(
        target_orders.get(i, 0)
        if i not in owners and i != s
        else (special_exponents[i] * contact_orders[i] if i in owners else 0)
        for i in range(1, s + 1)
    )
    _verify_last_certificate(d, matrix, b_rows, owners, s, exponents, special_exponents, orders)
    return LastDicriticalCertificate(
        s=s,
        degree=degree,
        special_owners=tuple(owners),
        special_exponents=special_exponents,
        contact_orders=contact_orders,
        bundle_exponents=exponents,
        target_orders=target_orders,
        orders=orders,
        matrix_a=a_sub,
        matrix_b=b_sub,
        matrix_c=c_sub,
    )


def _check_order_identity(d, matrix, s, owners):
    """The column at s must decompose through the parents of s (order identity)."""
    for i in range(1, s + 1):
        expected = sum(matrix.entry(i, j) for j in owners) + (1 if i == s else 0)
        if matrix.entry(i, s) != expected:
            raise SolverError(
                f"hypercurvette orders violate the recursion at column {s}, row {i}; descriptor is inconsistent"
            )


def _verify_last_certificate(d, matrix, b_rows, owners, s, exponents, special_exponents, orders):
    """Substitute the solution into all s equations, including the eliminated one,
    and recompute the order vector through the order recursion."""
    for t in range(1, s + 1):
        value = sum(exponents[i - 1] * matrix.entry(i, t) for i in range(1, s))
        value -= sum(special_exponents[j] * b_rows[idx][t - 1] for idx, j in enumerate(owners))
        expected = orders[t - 1] if t < s else 0
        if value != expected:
            raise SolverError(f"solved exponents do not satisfy equation {t}: {value} != {expected}")
    # Independent route: weighted multiplicity tables through the recursion.
    plus = [0] * d.m
    minus = [0] * d.m
    for i in range(1, s):
        r = exponents[i - 1]
        row = d.curvette_mults[i - 1]
        for t in range(i):
            if r > 0:
                plus[t] += r * row[t]
            else:
                minus[t] += (-r) * row[t]
    n_plus = pullback_orders(d, plus)
    n_minus = pullback_orders(d, minus)
    for t in range(1, s + 1):
        via_tables = n_plus[t - 1] - n_minus[t - 1]
        via_rows = sum(exponents[i - 1] * matrix.entry(i, t) for i in range(1, s))
        if via_tables != via_rows:
            raise SolverError("order recursion disagrees with the matrix rows; internal error")


# -- single-dicritical certificates ---------------------------------------------


@dataclass(frozen=True)
class SingleDicriticalCertificate:
    base: LastDicriticalCertificate
    s: int
    degree: int
    later_exponents: Mapping[int, int]
    pole_power: int
    numer_orders: tuple[int, ...]
    denom_orders: tuple[int, ...]
    aux_orders: tuple[int, ...]
    orders: tuple[int, ...]
    threshold_form: LinearForm
    window_forms: Mapping[int, LinearForm]
    weights: Mapping[int, int]
    aux_floor: int | None
    doublings: int

    def window(self, i: int) -> tuple[LinearForm, LinearForm]:
        """Lower and upper bounding forms for the pole power at divisor i."""
        return self.threshold_form, self.threshold_form + self.window_forms[i]

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "single",
            "base": self.base.to_json(),
            "s": self.s,
            "degree": self.degree,
            "later_exponents": {str(k): v for k, v in sorted(self.later_exponents.items())},
            "pole_power": self.pole_power,
            "numer_orders": list(self.numer_orders),
            "denom_orders": list(self.denom_orders),
            "aux_orders": list(self.aux_orders),
            "orders": list(self.orders),
            "threshold_form": self.threshold_form.to_json(),
            "window_forms": {str(k): v.to_json() for k, v in sorted(self.window_forms.items())},
            "weights": {str(k): v for k, v in sorted(self.weights.items())},
            "aux_floor": self.aux_floor,
            "doublings": self.doublings,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SingleDicriticalCertificate":
        return cls(
            base=LastDicriticalCertificate.from_json(data["base"]),
            s=require_int(data["s"], "s"),
            degree=require_int(data["degree"], "degree"),
            later_exponents={int(k): require_int(v, "exponent") for k, v in data["later_exponents"].items()},
            pole_power=require_int(data["pole_power"], "pole power"),
            numer_orders=tuple(require_int(v, "order") for v in data["numer_orders"]),
            denom_orders=tuple(require_int(v, "order") for v in data["denom_orders"]),
            aux_orders=tuple(require_int(v, "order") for v in data["aux_orders"]),
            orders=tuple(require_int(v, "order") for v in data["orders"]),
            threshold_form=LinearForm.from_json(data["threshold_form"]),
            window_forms={int(k): LinearForm.from_json(v) for k, v in data["window_forms"].items()},
            weights={int(k): require_int(v, "weight") for k, v in data["weights"].items()},
            aux_floor=None if data.get("aux_floor") is None else require_int(data["aux_floor"], "floor"),
            doublings=require_int(data.get("doublings", 0), "doublings"),
        )


def aux_order_bounds(m: int, s: int, special_exponents: Mapping[int, int], n: int) -> tuple[int, dict[int, int]]:
    """Smallest auxiliary orders that survive the worst-case doubling of
    special-hypersurface multiplicities under the later blow-ups.

    Returns the common floor for free divisors below s and the per-parent
    minimal contact orders.
    """
    k = len(special_exponents)
    r_max = max(special_exponents.values(), default=1)
    bound = (2 ** (m - s)) * r_max * k * n
    floor = bound + 1
    contacts = {}
    for j, r in special_exponents.items():
        contacts[j] = bound // r + 1
    return floor, contacts


class SingleDicriticalWorkspace:
    """Intermediate state for the single-dicritical pipeline.

    Orders of the candidate's numerator and denominator along every divisor
    are affine-linear forms in the exponents of the later hypercurvette
    powers; the workspace builds them, derives the auxiliary orders, the
    rational window forms, and finally picks integer exponents.
    """

    def __init__(
        self,
        d: ModificationDescriptor,
        s: int,
        degree: int,
        base: LastDicriticalCertificate,
        tail: TailData,
    ):
        self.descriptor = d
        self.s = s
        self.degree = degree
        self.base = base
        self.tail = tail
        self.matrix = valuation_matrix(d)
        self.later = tuple(range(s + 1, d.m + 1))
        self.lows = low_sets(d, s)
        self._build_tables()

    # -- tables and forms ----------------------------------------------------

    def _build_tables(self) -> None:
        d, s = self.descriptor, self.s
        base = self.base
        owners = base.special_owners
        deg = base.degree

        def weighted(rows: Mapping[int, int]) -> list[int]:
            table = [0] * d.m
            for i, w in rows.items():
                row = d.curvette_mults[i - 1]
                for t in range(i):
                    table[t] += w * row[t]
            return table

        plus: dict[int, int] = {s: deg}
        minus: dict[int, int] = {s: deg}
        for i in range(1, s):
            r = base.bundle_exponents[i - 1]
            if r > 0:
                plus[i] = plus.get(i, 0) + r
            elif r < 0:
                minus[i] = minus.get(i, 0) - r
        table_f = weighted(plus)
        table_g = weighted(minus)
        self.special_tables: dict[int, list[int]] = {}
        for j in owners:
            mu = list(d.special_mults[j]) + [base.contact_orders[j]]
            for i in range(s + 1, d.m + 1):
                mu.append(self.tail.mu_specials.get(i, {}).get(j, 0))
            self.special_tables[j] = mu
            r = base.special_exponents[j]
            for t, v in enumerate(mu):
                table_g[t] += r * v
        self.nu_f = pullback_orders(d, table_f)
        self.nu_g = pullback_orders(d, table_g)

        # Order vector of each later hypercurvette, with tail multiplicities.
        self.later_rows: dict[int, tuple[int, ...]] = {}
        for j in self.later:
            table = [d.curvette_mult(j, t) if t <= s else self.tail.mu_curvettes.get(t, {}).get(j, 0) for t in range(1, d.m + 1)]
            self.later_rows[j] = pullback_orders(d, table)

        k_part = {
            i: {j: Fraction(self.later_rows[j][i - 1]) for j in self.later}
            for i in range(1, d.m + 1)
        }
        self.numer_forms = tuple(
            LinearForm.make(self.nu_f[i - 1], k_part[i]) for i in range(1, d.m + 1)
        )
        self.denom_forms = tuple(
            LinearForm.make(self.nu_g[i - 1], k_part[i]) for i in range(1, d.m + 1)
        )

    def order_forms(self) -> tuple[tuple[LinearForm, ...], tuple[LinearForm, ...]]:
        """Numerator and denominator order forms along every divisor."""
        return self.numer_forms, self.denom_forms

    # -- auxiliary orders ----------------------------------------------------

    def aux_orders(self) -> tuple[int, ...]:
        """Orders of the untwisted candidate; checked against the descent sets.

        A later divisor must have auxiliary order zero exactly when the image
        of its center avoids every divisor strictly below s.  A negative or
        unexpectedly zero value means the chosen orders were too small.
        """
        d, s = self.descriptor, self.s
        aux = tuple(self.nu_f[i] - self.nu_g[i] for i in range(d.m))
        for i in range(1, s):
            if aux[i - 1] <= 0:
                raise BoundViolation(f"auxiliary order at divisor {i} must be positive", index=i)
        if aux[s - 1] != 0:
            raise SolverError(f"auxiliary order at divisor {s} must vanish, got {aux[s - 1]}")
        for i in self.later:
            below = self.lows[i] & set(range(1, s))
            if below:
                if aux[i - 1] <= 0:
                    raise BoundViolation(
                        f"auxiliary order at divisor {i} is {aux[i - 1]}; chosen orders are too small",
                        index=i,
                    )
            elif aux[i - 1] != 0:
                raise SolverError(
                    f"auxiliary order at divisor {i} should vanish by the descent rule, got {aux[i - 1]}"
                )
        # Recursion cross-check through parents and special multiplicities.
        for i in self.later:
            expected = sum(aux[a - 1] for a in d.parents(i))
            for j, mu in self.tail.mu_specials.get(i, {}).items():
                expected -= self.base.special_exponents[j] * mu
            if aux[i - 1] != expected:
                raise SolverError(f"auxiliary order recursion failed at divisor {i}")
        self._aux = aux
        return aux

    # -- window forms ----------------------------------------------------------

    def window_forms(self) -> tuple[dict[int, int], dict[int, LinearForm]]:
        """Weights and window forms for the later divisors with zero auxiliary order.

        Each such divisor imposes that the pole power be less than the
        threshold plus its window form; the identity
        numerator_form(i) = weight(i) * (numerator_form(s) + a_ss * window(i))
        is verified symbolically.
        """
        d, s = self.descriptor, self.s
        a_ss = self.matrix.entry(s, s)
        weights: dict[int, int] = {s: 1}
        windows: dict[int, LinearForm] = {s: LinearForm.make(0)}
        for i in self.later:
            if self._aux[i - 1] != 0:
                continue
            parents = sorted(d.parents(i))
            if any(p < s or (p > s and p not in windows) for p in parents):
                raise SolverError(f"window recursion hit a divisor with nonzero auxiliary order at {i}")
            weight = sum(weights[p] for p in parents)
            form = LinearForm.make(0)
            for p in parents:
                form = form + windows[p].scale(Fraction(weights[p], weight))
            mu_row = self.tail.mu_curvettes.get(i, {})
            form = form + LinearForm.make(
                0, {j: Fraction(mu, weight * a_ss) for j, mu in mu_row.items()}
            )
            if any(c <= 0 for _, c in form.coeffs):
                raise SolverError(f"window form at divisor {i} has a nonpositive coefficient")
            identity = self.numer_forms[s - 1] + form.scale(a_ss)
            if identity.scale(weight) != self.numer_forms[i - 1]:
                raise SolverError(f"window identity failed at divisor {i}")
            weights[i] = weight
            windows[i] = form
        weights.pop(s)
        windows.pop(s)
        self._weights, self._windows = weights, windows
        return weights, windows

    # -- choosing exponents -----------------------------------------------------

    def choose(self, cap: int = 1_000_000) -> tuple[dict[int, int], int]:
        """Pick the later exponents and the pole power.

        All later exponents share one value, raised until every window form
        exceeds 1 there; the pole power is then the smallest integer above
        the threshold, which the window length guarantees admissible.
        """
        s = self.s
        a_ss = self.matrix.entry(s, s)
        uniform = 1
        while uniform <= cap:
            assign = {j: uniform for j in self.later}
            if all(w.evaluate(assign) > 1 for w in self._windows.values()):
                threshold = self.numer_forms[s - 1].evaluate(assign) / a_ss
                pole = threshold.numerator // threshold.denominator + 1
                upper_ok = all(
                    pole < threshold + w.evaluate(assign) for w in self._windows.values()
                )
                if pole > threshold and upper_ok:
                    return assign, pole
            uniform += 1
        raise SolverError("no admissible exponents found below the search cap")

    # -- final evaluation ---------------------------------------------------------

    def evaluate(self, assign: Mapping[int, int], pole: int) -> tuple[tuple[int, ...], ...]:
        """Final order vector at chosen exponents, with the independent recompute."""
        d, s = self.descriptor, self.s
        numer = tuple(int(f.evaluate(assign)) for f in self.numer_forms)
        denom = tuple(int(f.evaluate(assign)) for f in self.denom_forms)
        orders = tuple(
            numer[i - 1] - min(denom[i - 1], pole * self.matrix.entry(s, i))
            for i in range(1, d.m + 1)
        )
        if orders[s - 1] != 0:
            raise SolverError(f"order at divisor {s} must vanish, got {orders[s - 1]}")
        threshold = Fraction(numer[s - 1], self.matrix.entry(s, s))
        if not pole > threshold:
            raise SolverError("pole power does not exceed the vanishing threshold")
        for i in range(1, d.m + 1):
            if i != s and orders[i - 1] <= 0:
                raise SolverError(f"order at divisor {i} must be positive, got {orders[i - 1]}")
            if orders[i - 1] < self._aux[i - 1]:
                raise SolverError(f"order at divisor {i} dropped below the auxiliary order")
        self._check_by_tables(assign, pole, numer, denom, orders)
        return numer, denom, orders

    def _check_by_tables(self, assign, pole, numer, denom, orders) -> None:
        """Recompute every order through weighted multiplicity tables."""
        d, s = self.descriptor, self.s
        base = self.base

        table_num = [0] * d.m
        table_den = [0] * d.m

        def add(table, i, weight):
            row = d.curvette_mults[i - 1]
            for t in range(i):
                table[t] += weight * row[t]

        add(table_num, s, base.degree)
        add(table_den, s, base.degree)
        for i in range(1, s):
            r = base.bundle_exponents[i - 1]
            if r > 0:
                add(table_num, i, r)
            elif r < 0:
                add(table_den, i, -r)
        for j in base.special_owners:
            for t, mu in enumerate(self.special_tables[j]):
                table_den[t] += base.special_exponents[j] * mu
        for j in self.later:
            mu = [
                d.curvette_mult(j, t) if t <= s else self.tail.mu_curvettes.get(t, {}).get(j, 0)
                for t in range(1, d.m + 1)
            ]
            for t in range(d.m):
                table_num[t] += assign[j] * mu[t]
                table_den[t] += assign[j] * mu[t]
        pole_table = [pole * v for v in d.curvette_mults[s - 1]]
        nu_num = pullback_orders(d, table_num)
        nu_den = pullback_orders(d, table_den)
        nu_pole = pullback_orders(d, pole_table)
        for i in range(d.m):
            if numer[i] != nu_num[i] or denom[i] != nu_den[i]:
                raise SolverError("table recompute disagrees with the linear forms; internal error")
            if orders[i] != nu_num[i] - min(nu_den[i], nu_pole[i]):
                raise SolverError("final orders disagree with the table recompute; internal error")


def _resolve_tail(d: ModificationDescriptor, s: int, tail: TailData | None) -> TailData:
    if tail is None:
        tail = d.tail
    if tail is None:
        if s == d.m:
            return TailData(s=s)
        raise SolverError("multiplicity data for the centers beyond s is required")
    if tail.s != s:
        raise SolverError(f"tail data is for index {tail.s}, not {s}")
    return tail


def solve_single_dicritical(
    d: ModificationDescriptor,
    s: int,
    degree: int,
    special_exponents: Mapping[int, int] | None = None,
    contact_orders: Mapping[int, int] | None = None,
    target_orders: Mapping[int, int] | None = None,
    tail: TailData | None = None,
    retry_cap: int = 4,
) -> SingleDicriticalCertificate:
    """Full pipeline: divisor s dicritical of the given degree, all others not.

    When contact and target orders are not supplied they start at the safe
    floors from ``aux_order_bounds``.  If the auxiliary orders still come out
    too small (heavy special-hypersurface multiplicities), all chosen orders
    are doubled and the pipeline retries, up to ``retry_cap`` doublings.
    """
    require_valid(d)
    if not (1 <= s <= d.m):
        raise SolverError(f"index {s} out of range 1..{d.m}")
    tail = _resolve_tail(d, s, tail)
    d = ModificationDescriptor(
        n=d.n,
        m=d.m,
        centers=d.centers,
        curvette_mults=d.curvette_mults,
        special_mults=d.special_mults,
        tail=tail,
    )
    require_valid(d)
    owners = sorted(d.parents(s))
    special_exponents = {j: 1 for j in owners} | dict(special_exponents or {})
    free = [i for i in range(1, s) if i not in owners]

    explicit = contact_orders is not None or target_orders is not None
    if explicit:
        contacts = dict(contact_orders) if contact_orders is not None else {j: 1 for j in owners}
        floor = None
        targets = dict(target_orders) if target_orders is not None else {i: 1 for i in free}
        # below s the construction needs positive orders, not merely nonzero ones
        if any(v < 1 for v in targets.values()):
            raise SolverError("target orders must be positive for a single-divisor construction")
    else:
        floor, contacts = aux_order_bounds(d.m, s, special_exponents, d.n)
        targets = {i: floor for i in free}

    doublings = 0
    while True:
        base = solve_last_dicritical(
            d,
            s,
            degree,
            special_exponents=special_exponents,
            contact_orders=contacts,
            target_orders=targets,
            tail=tail,
        )
        ws = SingleDicriticalWorkspace(d, s, degree, base, tail)
        try:
            ws.aux_orders()
        except BoundViolation:
            if doublings >= retry_cap:
                raise
            doublings += 1
            contacts = {j: 2 * v for j, v in contacts.items()}
            targets = {i: 2 * v for i, v in targets.items()}
            continue
        break

    ws.window_forms()
    assign, pole = ws.choose()
    numer, denom, orders = ws.evaluate(assign, pole)
    a_ss = ws.matrix.entry(s, s)
    return SingleDicriticalCertificate(
        base=base,
        s=s,
        degree=degree,
        later_exponents=assign,
        pole_power=pole,
        numer_orders=numer,
        denom_orders=denom,
        aux_orders=ws._aux,
        orders=orders,
        threshold_form=ws.numer_forms[s - 1].scale(Fraction(1, a_ss)),
        window_forms=ws._windows,
        weights=ws._weights,
        aux_floor=floor,
        doublings=doublings,
    )


# -- combined profiles ----------------------------------------------------------


@dataclass(frozen=True)
class ProfileCertificate:
    """Plan for a product of fraction-twisted single-dicritical functions."""

    degrees: Mapping[int, int]
    parts: Mapping[int, SingleDicriticalCertificate]
    mobius_note: str = (
        "pick distinct generic constants a_j, b_j avoiding the finitely many "
        "constant values of the non-dicritical restrictions"
    )

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "profile",
            "degrees": {str(k): v for k, v in sorted(self.degrees.items())},
            "parts": {str(k): v.to_json() for k, v in sorted(self.parts.items())},
            "mobius": {
                str(k): {"a": f"generic a_{k}", "b": f"generic b_{k}"} for k in sorted(self.parts)
            },
            "mobius_note": self.mobius_note,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ProfileCertificate":
        return cls(
            degrees={int(k): require_int(v, "degree") for k, v in data["degrees"].items()},
            parts={int(k): SingleDicriticalCertificate.from_json(v) for k, v in data["parts"].items()},
            mobius_note=data.get("mobius_note", ""),
        )


def combine_profile(
    parts: Sequence[SingleDicriticalCertificate],
    degrees: Mapping[int, int] | None = None,
) -> ProfileCertificate:
    """Combine one certificate per target divisor into a product plan."""
    if not parts:
        raise SolverError("at least one target divisor is required")
    seen: dict[int, SingleDicriticalCertificate] = {}
    for cert in parts:
        if cert.s in seen:
            raise SolverError(f"duplicate target divisor {cert.s}")
        seen[cert.s] = cert
    degs = {cert.s: cert.degree for cert in parts}
    if degrees is not None:
        if dict(degrees) != degs:
            raise SolverError("requested degrees disagree with the certificates")
    return ProfileCertificate(degrees=degs, parts=seen)


def certificate_from_json(data: dict):
    kinds = {
        "support": SupportCertificate,
        "last": LastDicriticalCertificate,
        "single": SingleDicriticalCertificate,
        "profile": ProfileCertificate,
    }
    kind = data.get("kind")
    if kind not in kinds:
        raise SolverError(f"unknown certificate kind {kind!r}")
    return kinds[kind].from_json(data)
