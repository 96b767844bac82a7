"""Symbolic chart towers: blow-ups with coordinate centers, plus shears.

A tower is a list of steps over a fixed ambient coordinate ring.  A blow-up
step names a coordinate subspace (two or more variables) as its center and
one of those variables as the default chart; pulling a function back into the
chart substitutes center variables by (chart variable) * (variable).  A shear
renames coordinates by an invertible triangular translation, which is how
non-coordinate centers (a conic inside a divisor, a translated line) are
brought into coordinate position.

Each walk through the tower tracks the local equation of every exceptional
divisor still visible in the current chart.  Orders along a divisor are read
off at its creating step, where its local equation is the chart variable,
so they never depend on later chart choices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .descriptor import ModificationDescriptor
from .errors import ChartError, GenericityError, PolynomialError
from .poly import Polynomial, univariate_int_gcd
from .ratfunc import RationalFunction

PARAM = "param"
CONST = "const"
ZERO = "zero"


@dataclass(frozen=True)
class BlowupStep:
    center: tuple[str, ...]
    chart: str

    def __post_init__(self):
        if len(set(self.center)) != len(self.center) or len(self.center) < 2:
            raise ChartError("a blow-up center needs at least two distinct variables")
        if self.chart not in self.center:
            raise ChartError("the chart variable must belong to the center")


@dataclass(frozen=True)
class ShearStep:
    target: str
    shift: Polynomial  # new target = old target - shift(other variables)

    def __post_init__(self):
        if self.shift.degree_in(self.target) > 0:
            raise ChartError("a shear must be triangular: the shift cannot involve its target")


Step = BlowupStep | ShearStep


@dataclass(frozen=True)
class ChartTower:
    variables: tuple[str, ...]
    steps: tuple[Step, ...]

    def __post_init__(self):
        for step in self.steps:
            names = step.center if isinstance(step, BlowupStep) else (step.target,)
            for name in names:
                if name not in self.variables:
                    raise ChartError(f"step uses unknown variable {name!r}")

    @property
    def blowup_count(self) -> int:
        return sum(1 for s in self.steps if isinstance(s, BlowupStep))

    def ring(self) -> tuple[str, ...]:
        return self.variables


@dataclass(frozen=True)
class LineClassSpec:
    """Parametrized representative of a curve class inside one divisor.

    Each chart variable is a parameter, a generic constant, or zero; the
    divisor's own local equation must be assigned zero so the curve lies in
    the divisor.  Which curve class this template represents is the
    scenario author's choice; genericity of the constants is checked by
    double drawing, never assumed.
    """

    divisor: int
    assign: Mapping[str, str]

    def __post_init__(self):
        for name, role in self.assign.items():
            if role not in (PARAM, CONST, ZERO):
                raise ChartError(f"line template role must be param/const/zero, got {role!r}")
        if sum(1 for r in self.assign.values() if r == PARAM) != 1:
            raise ChartError("a line template needs exactly one parameter variable")


@dataclass
class WalkState:
    variables: tuple[str, ...]
    polys: list[Polynomial]
    divisor_eqs: dict[int, Polynomial]
    blowups_done: int


def _apply_blowup(poly: Polynomial, center: tuple[str, ...], chart: str) -> Polynomial:
    chart_idx = poly.variables.index(chart)
    other_idx = [poly.variables.index(u) for u in center if u != chart]
    terms: dict[tuple[int, ...], Fraction] = {}
    for exps, coeff in poly.terms():
        lst = list(exps)
        lst[chart_idx] += sum(exps[i] for i in other_idx)
        key = tuple(lst)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return Polynomial(poly.variables, terms)


def _apply_shear(poly: Polynomial, step: ShearStep) -> Polynomial:
    image = Polynomial.variable(poly.variables, step.target) + step.shift
    return poly.substitute({step.target: image})


def walk_tower(
    tower: ChartTower,
    polys: Sequence[Polynomial],
    charts: Sequence[str] | None = None,
    blowups: int | None = None,
) -> WalkState:
    """Push polynomials through the tower, one chart per blow-up step.

    ``charts`` overrides the default chart variable per blow-up; ``blowups``
    stops the walk right after that many blow-ups (shears in between are
    applied, trailing shears are not).
    """
    limit = tower.blowup_count if blowups is None else blowups
    if limit > tower.blowup_count:
        raise ChartError(f"tower has only {tower.blowup_count} blow-ups")
    state = WalkState(
        variables=tower.variables,
        polys=[p for p in polys],
        divisor_eqs={},
        blowups_done=0,
    )
    for poly in state.polys:
        if poly.variables != tower.variables:
            raise PolynomialError("polynomial does not live in the tower's coordinate ring")
    for step in tower.steps:
        if state.blowups_done >= limit:
            break
        if isinstance(step, ShearStep):
            state.polys = [_apply_shear(p, step) for p in state.polys]
            state.divisor_eqs = {i: _apply_shear(e, step) for i, e in state.divisor_eqs.items()}
            continue
        chart = step.chart
        if charts is not None and state.blowups_done < len(charts):
            chart = charts[state.blowups_done]
        if chart not in step.center:
            raise ChartError(f"chart variable {chart!r} is not in the center {step.center}")
        state.polys = [_apply_blowup(p, step.center, chart) for p in state.polys]
        new_eqs: dict[int, Polynomial] = {}
        for idx, eq in state.divisor_eqs.items():
            moved = _apply_blowup(eq, step.center, chart)
            drop = moved.order_in(chart)
            if drop:
                moved = moved.divide_by_monomial(
                    tuple(drop if v == chart else 0 for v in tower.variables)
                )
            if moved.is_constant():
                continue  # divisor not visible in this chart
            new_eqs[idx] = moved
        state.blowups_done += 1
        new_eqs[state.blowups_done] = Polynomial.variable(tower.variables, chart)
        state.divisor_eqs = new_eqs
    if state.blowups_done < limit:
        raise ChartError("tower ended before the requested blow-up count")
    return state


def check_tower(d: ModificationDescriptor, tower: ChartTower) -> None:
    """Verify the tower realizes the descriptor's center structure.

    Per blow-up: the center codimension matches the recorded dimension, and a
    visible divisor's local equation vanishes on the center exactly when the
    descriptor lists it as containing the center.  Invisible divisors cannot
    contain a center that lives in the current chart.
    """
    if tower.blowup_count != d.m:
        raise ChartError(f"tower has {tower.blowup_count} blow-ups, descriptor has {d.m}")
    if len(tower.variables) != d.n:
        raise ChartError(f"tower has {len(tower.variables)} variables, descriptor ambient dimension is {d.n}")
    state = WalkState(variables=tower.variables, polys=[], divisor_eqs={}, blowups_done=0)
    for step in tower.steps:
        if isinstance(step, ShearStep):
            state.divisor_eqs = {i: _apply_shear(e, step) for i, e in state.divisor_eqs.items()}
            continue
        j = state.blowups_done + 1
        center = d.centers[j - 1]
        if d.n - len(step.center) != center.dim:
            raise ChartError(
                f"blow-up {j}: center {step.center} has dimension {d.n - len(step.center)}, "
                f"descriptor says {center.dim}"
            )
        zeroed = {name: 0 for name in step.center}
        contains = set()
        for idx, eq in state.divisor_eqs.items():
            if eq.substitute(zeroed).is_zero():
                contains.add(idx)
        if contains != set(center.parents):
            raise ChartError(
                f"blow-up {j}: chart says the center lies in divisors {sorted(contains)}, "
                f"descriptor says {sorted(center.parents)}"
            )
        new_eqs = {}
        for idx, eq in state.divisor_eqs.items():
            moved = _apply_blowup(eq, step.center, step.chart)
            drop = moved.order_in(step.chart)
            if drop:
                moved = moved.divide_by_monomial(
                    tuple(drop if v == step.chart else 0 for v in tower.variables)
                )
            if moved.is_constant():
                continue
            new_eqs[idx] = moved
        state.blowups_done += 1
        new_eqs[state.blowups_done] = Polynomial.variable(tower.variables, step.chart)
        state.divisor_eqs = new_eqs


def _creation_walk(
    h: RationalFunction,
    tower: ChartTower,
    divisor: int,
    charts: Sequence[str] | None,
) -> tuple[WalkState, str]:
    if not (1 <= divisor <= tower.blowup_count):
        raise ChartError(f"divisor {divisor} out of range 1..{tower.blowup_count}")
    state = walk_tower(tower, [h.num, h.den], charts=charts, blowups=divisor)
    eq = state.divisor_eqs[divisor]
    chart_var = next(name for name in tower.variables if eq == Polynomial.variable(tower.variables, name))
    return state, chart_var


def pullback(
    h: RationalFunction,
    tower: ChartTower,
    charts: Sequence[str] | None = None,
    blowups: int | None = None,
) -> RationalFunction:
    """Total transform of h in the selected chart, fully reduced."""
    state = walk_tower(tower, [h.num, h.den], charts=charts, blowups=blowups)
    return RationalFunction(state.polys[0], state.polys[1])


def divisor_order(
    h: RationalFunction,
    tower: ChartTower,
    divisor: int,
    charts: Sequence[str] | None = None,
) -> int:
    """Vanishing order of h along an exceptional divisor.

    Computed at the divisor's creating step, where its local equation is the
    chart variable; the value does not depend on the chart path because the
    numerator and denominator orders are read off together.
    """
    state, chart_var = _creation_walk(h, tower, divisor, charts)
    num, den = state.polys
    if num.is_zero():
        raise ChartError("cannot take the order of the zero function")
    return num.order_in(chart_var) - den.order_in(chart_var)


@dataclass(frozen=True)
class Restriction:
    """Restriction of a pulled-back function to one exceptional divisor."""

    divisor: int
    num: Polynomial
    den: Polynomial
    order: int
    chart_var: str

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_infinite(self) -> bool:
        return self.den.is_zero()

    def as_fraction(self) -> RationalFunction:
        if self.is_infinite():
            raise ChartError("restriction is infinite")
        return RationalFunction(self.num, self.den)

    def render(self) -> str:
        if self.is_infinite():
            return "inf"
        return self.as_fraction().render()


def restrict(
    h: RationalFunction,
    tower: ChartTower,
    divisor: int,
    charts: Sequence[str] | None = None,
    blowups: int | None = None,
) -> Restriction:
    """Restrict the pullback of h to a divisor, in a chart where it is visible.

    The shared power of the divisor's local equation is cleared from the
    numerator and denominator, then the equation is set to zero.  A nonzero
    order therefore yields the constant 0 or infinity.
    """
    state = walk_tower(tower, [h.num, h.den], charts=charts, blowups=blowups)
    eq = state.divisor_eqs.get(divisor)
    if eq is None:
        raise ChartError(f"divisor {divisor} is not visible in the selected chart")
    chart_var = None
    for name in tower.variables:
        if eq == Polynomial.variable(tower.variables, name):
            chart_var = name
            break
    if chart_var is None:
        raise ChartError(
            f"divisor {divisor} has local equation {eq.render()}; restriction needs a coordinate chart"
        )
    num, den = state.polys
    if num.is_zero():
        return Restriction(divisor, num, Polynomial.one(tower.variables), 0, chart_var)
    a = num.order_in(chart_var)
    b = den.order_in(chart_var)
    common = min(a, b)
    clear = tuple(common if v == chart_var else 0 for v in tower.variables)
    num0 = num.divide_by_monomial(clear).set_to_zero(chart_var)
    den0 = den.divide_by_monomial(clear).set_to_zero(chart_var)
    if num0.is_zero() and den0.is_zero():
        raise ChartError("numerator and denominator both vanish on the divisor; input was not reduced")
    if den0.is_zero():
        return Restriction(divisor, num0, den0, a - b, chart_var)
    reduced = RationalFunction(num0, den0)
    return Restriction(divisor, reduced.num, reduced.den, a - b, chart_var)


@dataclass(frozen=True)
class Status:
    kind: str  # "constant" | "dicritical"
    value: Fraction | None = None
    infinite: bool = False

    def render(self) -> str:
        if self.kind == "dicritical":
            return "dicritical"
        if self.infinite:
            return "constant(inf)"
        return f"constant({self.value})"


def status_of(restriction: Restriction) -> Status:
    """Constant iff the restriction's numerator and denominator are proportional."""
    if restriction.is_infinite():
        return Status("constant", None, True)
    if restriction.is_zero():
        return Status("constant", Fraction(0))
    num, den = restriction.num, restriction.den
    ratio = None
    if num.terms() and [e for e, _ in num.terms()] == [e for e, _ in den.terms()]:
        ratios = {nc / dc for (_, nc), (_, dc) in zip(num.terms(), den.terms())}
        if len(ratios) == 1:
            ratio = ratios.pop()
    if ratio is not None:
        return Status("constant", ratio)
    return Status("dicritical")


def dicritical_status(
    h: RationalFunction,
    tower: ChartTower,
    divisor: int,
    charts: Sequence[str] | None = None,
    blowups: int | None = None,
) -> Status:
    return status_of(restrict(h, tower, divisor, charts=charts, blowups=blowups))


def draw_fraction(rng: random.Random, nonzero: bool = True) -> Fraction:
    num = rng.randint(-19, 19)
    while nonzero and num == 0:
        num = rng.randint(-19, 19)
    return Fraction(num, rng.randint(1, 7))


def _line_degree(restriction: Restriction, line: LineClassSpec, rng: random.Random) -> int | None:
    """Degree along one concrete draw of the template, or None when degenerate."""
    mapping: dict[str, Polynomial | Fraction | int] = {}
    target = ("t",)
    for name in restriction.num.variables:
        role = line.assign.get(name, ZERO if name == restriction.chart_var else CONST)
        if name == restriction.chart_var and role != ZERO:
            raise ChartError("the divisor's own chart variable must be assigned zero")
        if role == PARAM:
            mapping[name] = Polynomial.variable(target, "t")
        elif role == ZERO:
            mapping[name] = 0
        else:
            mapping[name] = draw_fraction(rng)
    num_t = restriction.num.substitute(mapping, target)
    den_t = restriction.den.substitute(mapping, target)
    if den_t.is_zero():
        return None
    if num_t.is_zero():
        return 0
    coeffs_n = _dense_coeffs(num_t)
    coeffs_d = _dense_coeffs(den_t)
    g = univariate_int_gcd(coeffs_n, coeffs_d)
    gdeg = len(g) - 1
    return max(len(coeffs_n) - 1 - gdeg, len(coeffs_d) - 1 - gdeg)


def _dense_coeffs(p: Polynomial) -> list[int]:
    deg = p.degree_in("t")
    dens = 1
    for _, c in p.terms():
        dens = dens * c.denominator // _int_gcd(dens, c.denominator)
    out = [0] * (deg + 1)
    for exps, c in p.terms():
        out[exps[0]] = int(c * dens)
    return out


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def dicritical_degree(
    h: RationalFunction,
    tower: ChartTower,
    divisor: int,
    line: LineClassSpec,
    rng: random.Random,
    charts: Sequence[str] | None = None,
    blowups: int | None = None,
    retries: int = 4,
) -> int:
    """Degree of the restricted map against the template's curve class.

    The template's generic constants are drawn twice independently; the two
    degrees must agree, otherwise the pair is redrawn up to the retry cap.
    """
    restriction = restrict(h, tower, divisor, charts=charts, blowups=blowups)
    if status_of(restriction).kind != "dicritical":
        raise ChartError("degree is only defined for dicritical restrictions")
    if line.divisor != divisor:
        raise ChartError("line template belongs to a different divisor")
    for _ in range(max(1, retries)):
        first = _line_degree(restriction, line, rng)
        second = _line_degree(restriction, line, rng)
        if first is not None and first == second:
            return first
    raise GenericityError(
        f"line template for divisor {divisor} kept giving disagreeing degrees; it is not generic"
    )


@dataclass(frozen=True)
class CrossCheckRow:
    divisor: int
    predicted: int
    symbolic: int

    @property
    def ok(self) -> bool:
        return self.predicted == self.symbolic


def cross_check(
    d: ModificationDescriptor,
    tower: ChartTower,
    h: RationalFunction,
    predicted: Sequence[int],
    charts: Mapping[int, Sequence[str]] | None = None,
) -> list[CrossCheckRow]:
    """Compare predicted orders with symbolic orders divisor by divisor."""
    check_tower(d, tower)
    if len(predicted) > tower.blowup_count:
        raise ChartError("more predictions than divisors")
    rows = []
    for i, value in enumerate(predicted, start=1):
        path = None if charts is None else charts.get(i)
        rows.append(CrossCheckRow(i, value, divisor_order(h, tower, i, charts=path)))
    return rows
