import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dicriticals.descriptor import (
    TailData,
    column_recurrence_holds,
    default_curvette_mults,
    descriptor_from_json,
    descriptor_to_json,
    leading_principal_minors,
    low_sets,
    make_descriptor,
    pullback_orders,
    special_matrix,
    validate_descriptor,
    valuation_matrix,
)
from dicriticals.errors import DescriptorError, ScenarioError
from helpers import random_descriptor

THREE_POINTS = dict(parent_sets=[[], [1], [1, 2]])


def three_points():
    return make_descriptor(3, **THREE_POINTS, special_mults={1: (2, 2), 2: (3, 2)})


def test_validate_accepts_three_points():
    assert validate_descriptor(three_points()) == []


def test_validate_minimal_chain():
    assert validate_descriptor(make_descriptor(3, [[]])) == []


def test_validate_flags_empty_parents():
    d = make_descriptor(3, [[], [1], []])
    codes = {v.code for v in validate_descriptor(d)}
    assert "empty-parents" in codes


def test_validate_flags_bad_self_multiplicity():
    d = make_descriptor(3, [[], [1]], curvette_mults=[(1,), (1, 2)])
    codes = {v.code for v in validate_descriptor(d)}
    assert "unit-self-mult" in codes


def test_validate_tail_requirements():
    tail = TailData(s=1, mu_curvettes={2: {}}, mu_specials={})
    d = make_descriptor(3, [[], [1]], tail=tail)
    codes = {v.code for v in validate_descriptor(d)}
    assert "tail-self" in codes


def test_pullback_orders_three_points():
    assert pullback_orders(three_points(), (2, 2, 1)) == (2, 4, 7)
    assert pullback_orders(three_points(), (3, 2, 1)) == (3, 5, 9)


def test_pullback_orders_star_chain():
    # every later center only on the first divisor
    d = make_descriptor(3, [[], [1], [1], [1], [1]])
    assert pullback_orders(d, (1,)) == (1, 1, 1, 1, 1)


def test_pullback_orders_zero():
    assert pullback_orders(three_points(), (0, 0, 0)) == (0, 0, 0)


def test_pullback_orders_linear():
    rng = random.Random(3)
    d = random_descriptor(rng, max_m=7)
    a = [rng.randint(0, 4) for _ in range(d.m)]
    b = [rng.randint(0, 4) for _ in range(d.m)]
    lhs = pullback_orders(d, [x + y for x, y in zip(a, b)])
    rhs = tuple(x + y for x, y in zip(pullback_orders(d, a), pullback_orders(d, b)))
    assert lhs == rhs


def test_pullback_orders_rejects_long_table():
    with pytest.raises(DescriptorError):
        pullback_orders(three_points(), (1, 1, 1, 1))


def test_valuation_matrix_orderings():
    # two orderings of the same modification give different matrices
    a = valuation_matrix(make_descriptor(3, [[], [1], [1]], dims=[0, 0, 1]))
    assert a.rows == ((1, 1, 1), (1, 2, 1), (1, 2, 2))
    abar = valuation_matrix(
        make_descriptor(
            3, [[], [1], [2]], dims=[0, 1, 1], curvette_mults=[(1,), (1, 1), (2, 1, 1)]
        )
    )
    assert abar.rows == ((1, 1, 1), (1, 2, 2), (2, 3, 4))
    assert leading_principal_minors(a) == (1, 1, 1)
    assert leading_principal_minors(abar) == (1, 1, 1)


def test_default_mults_reproduce_first_ordering():
    # the nested-tower default is exactly the table of the first ordering;
    # the second ordering needs the single documented override
    assert default_curvette_mults([[], [1], [1]]) == ((1,), (1, 1), (1, 1, 1))


def test_valuation_matrix_single_blowup():
    assert valuation_matrix(make_descriptor(2, [[]])).rows == ((1,),)


def test_column_recurrence():
    rng = random.Random(11)
    for _ in range(25):
        d = random_descriptor(rng)
        assert column_recurrence_holds(d, valuation_matrix(d))


def test_special_matrix_three_points():
    sm = special_matrix(three_points(), 3, {1: 1, 2: 1})
    assert sm.special_rows == ((2, 4, 7), (3, 5, 9))
    assert sm.special_owners == (1, 2)


def test_special_matrix_chain_row():
    d = make_descriptor(3, [[], [1], [2]], special_mults={2: (0, 0)})
    sm = special_matrix(d, 3, {2: 1})
    assert sm.special_rows == ((0, 0, 1),)


def test_special_matrix_requires_parents():
    with pytest.raises(DescriptorError):
        special_matrix(three_points(), 1, {})


def test_special_matrix_requires_rows():
    d = make_descriptor(3, [[], [1]])
    with pytest.raises(DescriptorError):
        special_matrix(d, 2, {1: 1})


def test_low_sets():
    d4 = make_descriptor(3, [[], [1], [1, 2], [3]], dims=[0, 0, 0, 1])
    assert low_sets(d4, 3) == {4: frozenset({3})}
    chain = make_descriptor(3, [[], [1], [2]])
    assert low_sets(chain, 1) == {2: frozenset({1}), 3: frozenset({1})}
    assert low_sets(chain, 2) == {3: frozenset({2})}


def test_json_roundtrip():
    d = make_descriptor(
        3,
        [[], [1], [1, 2], [3]],
        dims=[0, 0, 0, 1],
        curvette_mults=[(1,), (1, 1), (1, 1, 1), (2, 1, 1, 1)],
        special_mults={1: (2, 2), 2: (3, 2)},
        tail=TailData(s=3, mu_curvettes={4: {4: 1}}, mu_specials={}),
    )
    again = descriptor_from_json(descriptor_to_json(d))
    assert again == d


def test_json_rejects_floats_and_bools():
    data = descriptor_to_json(three_points())
    data["centers"][0]["dim"] = 0.0
    with pytest.raises(ScenarioError):
        descriptor_from_json(data)
    data["centers"][0]["dim"] = False
    with pytest.raises(ScenarioError):
        descriptor_from_json(data)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_minors_always_one(seed):
    d = random_descriptor(random.Random(seed))
    assert set(leading_principal_minors(valuation_matrix(d))) == {1}
