import random
from fractions import Fraction

import pytest

from dicriticals.charts import (
    BlowupStep,
    ChartTower,
    LineClassSpec,
    ShearStep,
    check_tower,
    cross_check,
    dicritical_degree,
    dicritical_status,
    divisor_order,
    pullback,
    restrict,
    status_of,
)
from dicriticals.descriptor import valuation_matrix
from dicriticals.errors import ChartError, GenericityError
from dicriticals.fixtures import (
    RING,
    conic_center,
    point_line_fiber,
    point_point_line,
    three_points,
    three_points_line,
)
from dicriticals.poly import Polynomial
from dicriticals.ratfunc import RationalFunction
from dicriticals.verify import explicit_function
from dicriticals.candidates import build_last, build_single


def xyz():
    return (
        Polynomial.variable(RING, "x"),
        Polynomial.variable(RING, "y"),
        Polynomial.variable(RING, "z"),
    )


def single_blowup():
    return ChartTower(RING, (BlowupStep(("x", "y", "z"), "z"),))


def test_pullback_identity_tower():
    x, y, _ = xyz()
    tower = ChartTower(RING, ())
    h = RationalFunction(x + y, x - y)
    assert pullback(h, tower) == h


def test_pullback_one_step_reduces():
    x, y, _ = xyz()
    h = RationalFunction(x, y)
    assert pullback(h, single_blowup()) == h  # the shared exceptional factor cancels
    assert divisor_order(h, single_blowup(), 1) == 0


def test_pullback_keeps_exceptional_order():
    x, y, z = xyz()
    g = RationalFunction(x * y, z)  # orders 2 and 1 along the first divisor
    assert divisor_order(g, single_blowup(), 1) == 1


def test_divisor_orders_match_valuation_rows():
    for fixture in (point_point_line(), point_line_fiber()):
        matrix = valuation_matrix(fixture.descriptor)
        for j, name in fixture.bindings.rows.items():
            h = RationalFunction(fixture.equations[name])
            for i in range(1, fixture.descriptor.m + 1):
                assert divisor_order(h, fixture.tower, i) == matrix.entry(j, i)


def test_special_hypersurface_orders():
    sc = three_points()
    h1 = RationalFunction(sc.equations["H1"])
    h2 = RationalFunction(sc.equations["H2"])
    assert [divisor_order(h1, sc.tower, i) for i in (1, 2, 3)] == [2, 4, 7]
    assert [divisor_order(h2, sc.tower, i) for i in (1, 2, 3)] == [3, 5, 9]


def test_numerator_order_of_twisted_candidate():
    sc = three_points()
    f = sc.equations["C3p"] * sc.equations["C1"] ** 2 * sc.equations["C2"] ** 4
    assert divisor_order(RationalFunction(f), sc.tower, 3) == 20


def test_chart_independence_of_orders():
    sc = three_points()
    h1 = RationalFunction(sc.equations["H1"])
    assert divisor_order(h1, sc.tower, 2, charts=("z", "y")) == 4
    assert divisor_order(h1, sc.tower, 2, charts=("z", "x")) == 4
    assert divisor_order(h1, sc.tower, 1, charts=("x",)) == 2


def test_restriction_of_last_candidate():
    sc = three_points()
    from dicriticals.verify import solve_scenario

    cert = solve_scenario(sc)
    h = build_last(cert, sc.equations, sc.bindings)
    x, y, z = xyz()
    r = restrict(h, sc.tower, 3)
    assert r.as_fraction() == RationalFunction(1 + z, 1 - z)
    assert r.num == 1 + z and r.den == 1 - z
    assert status_of(r).kind == "dicritical"
    # positive order means the restriction collapses to the constant zero
    r1 = restrict(h, sc.tower, 1)
    assert r1.is_zero() and status_of(r1).value == 0


def test_restriction_constant_value():
    x, y, z = xyz()
    h = RationalFunction(3 * x, 2 * x + 0 * y)
    r = restrict(h, single_blowup(), 1)
    st = status_of(r)
    assert st.kind == "constant" and st.value == Fraction(3, 2)


def test_restriction_infinite():
    x, y, _ = xyz()
    r = restrict(RationalFunction(x, y * y), single_blowup(), 1)
    assert r.is_infinite()
    assert status_of(r).infinite


def test_degree_identity_line():
    x, y, _ = xyz()
    h = RationalFunction(x, y)
    line = LineClassSpec(1, {"x": "param", "y": "const", "z": "zero"})
    rng = random.Random(1)
    assert dicritical_degree(h, single_blowup(), 1, line, rng, charts=("z",)) == 1


def test_degree_zero_on_ruling():
    sc = conic_center(1, 5)
    x, y, _ = xyz()
    h = RationalFunction(x, y)
    # depends only on the base coordinate of the ruled divisor
    line = LineClassSpec(2, {"x": "param", "y": "const", "z": "zero"})
    assert dicritical_degree(h, sc.tower, 2, line, random.Random(3)) == 0
    assert dicritical_status(h, sc.tower, 2).kind == "dicritical"


def test_conic_window_statuses():
    sc = conic_center(2, 6)
    h = explicit_function(sc)
    assert divisor_order(h, sc.tower, 1) == 0
    assert divisor_order(h, sc.tower, 2) == 1
    assert dicritical_status(h, sc.tower, 1).kind == "dicritical"
    st2 = dicritical_status(h, sc.tower, 2)
    assert st2.kind == "constant" and st2.value == 0
    deg = dicritical_degree(h, sc.tower, 1, sc.lines[1], random.Random(9))
    assert deg == 1


def test_status_agrees_across_charts():
    sc = three_points()
    from dicriticals.verify import solve_scenario

    cert = solve_scenario(sc)
    h = build_last(cert, sc.equations, sc.bindings)
    for path in (("z", "y", "x"), ("z", "y", "y"), ("z", "y", "z")):
        assert dicritical_status(h, sc.tower, 3, charts=path).kind == "dicritical"
    st_a = dicritical_status(h, sc.tower, 2, charts=("z", "y"), blowups=2)
    st_b = dicritical_status(h, sc.tower, 2, charts=("z", "x"), blowups=2)
    assert st_a == st_b


def test_nonzero_order_means_constant_zero_or_infinite():
    sc = three_points()
    h1 = RationalFunction(sc.equations["H1"])
    st = dicritical_status(h1, sc.tower, 1)
    assert st.kind == "constant" and st.value == 0
    inv = RationalFunction(Polynomial.one(RING), sc.equations["H1"])
    assert divisor_order(inv, sc.tower, 1) == -2
    st_inv = dicritical_status(inv, sc.tower, 1)
    assert st_inv.kind == "constant" and st_inv.infinite


def test_shear_invariance():
    x, y, z = xyz()
    h = RationalFunction(x + y + z, x - y)
    plain = single_blowup()
    sheared = ChartTower(RING, (ShearStep("z", 3 * x**2 + y**2), BlowupStep(("x", "y", "z"), "z")))
    assert divisor_order(h, plain, 1) == divisor_order(h, sheared, 1)
    assert restrict(h, plain, 1).as_fraction() == restrict(h, sheared, 1).as_fraction()


def test_restrict_needs_coordinate_equation():
    sc = three_points_line()
    h = RationalFunction(sc.equations["C1"])
    # after the shear the second divisor's local equation is no longer a variable
    with pytest.raises(ChartError):
        restrict(h, sc.tower, 2)
    # but it still works at the depth where the equation is a coordinate
    assert restrict(h, sc.tower, 2, blowups=3) is not None


def test_nongeneric_line_template_errors():
    x, y, _ = xyz()
    h = RationalFunction(x, y)
    # the template collapses the denominator to zero on every draw
    bad = LineClassSpec(1, {"x": "param", "y": "zero", "z": "zero"})
    with pytest.raises(GenericityError):
        dicritical_degree(h, single_blowup(), 1, bad, random.Random(2), charts=("z",))


def test_check_tower_rejects_wrong_parents():
    sc_pts = three_points()
    wrong = point_point_line().tower  # third center only inside the first divisor
    with pytest.raises(ChartError):
        check_tower(sc_pts.descriptor, wrong)


def test_cross_check_flags_corruption():
    sc = three_points()
    h = RationalFunction(sc.equations["H1"])
    rows = cross_check(sc.descriptor, sc.tower, h, (2, 4, 7))
    assert all(row.ok for row in rows)
    rows = cross_check(sc.descriptor, sc.tower, h, (2, 5, 7))
    assert [row.ok for row in rows] == [True, False, True]


def test_cross_check_flags_corrupted_multiplicity_table():
    from dicriticals.descriptor import make_descriptor, valuation_matrix

    sc = three_points()
    corrupted = make_descriptor(
        3, [[], [1], [1, 2]], curvette_mults=[(1,), (0, 1), (1, 1, 1)]
    )
    h = RationalFunction(sc.equations["C2"])  # true orders are (1, 2, 3)
    predicted = valuation_matrix(corrupted).rows[1]
    rows = cross_check(corrupted, sc.tower, h, predicted)
    first_bad = next(row.divisor for row in rows if not row.ok)
    assert first_bad == 1  # the first affected index is reported


def test_single_candidate_orders_match_certificate():
    sc = three_points_line()
    from dicriticals.verify import solve_scenario

    cert = solve_scenario(sc)
    h = build_single(cert, sc.equations, sc.bindings)
    for i in range(1, 5):
        assert divisor_order(h, sc.tower, i) == cert.orders[i - 1]
    r4 = restrict(h, sc.tower, 4)
    assert status_of(r4).kind == "constant"
