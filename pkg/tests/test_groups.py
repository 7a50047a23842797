"""Group coordinates, pairing, halving, set algebra, serialization."""

import json
import math
import random

import numpy as np
import pytest

from addcomb.groups import (
    GSet,
    build_group,
    char_eval,
    dilate_set,
    gset_from_json,
    gset_to_json,
    half_character,
    parse_group_spec,
)


def test_build_group_basic():
    g = build_group([2, 3, 5])
    assert g.factors == (2, 3, 5)
    assert g.order == 30
    assert g.rank == 3
    assert not g.odd_order
    assert build_group([2001]).odd_order


def test_build_group_rejects_bad_input():
    with pytest.raises(ValueError):
        build_group([])
    with pytest.raises(ValueError):
        build_group([0, 3])
    with pytest.raises(ValueError):
        build_group([1, 7])
    with pytest.raises(ValueError):
        build_group([2] * 25)  # order 2^25 over the cap
    build_group([2] * 24)  # exactly at the cap is fine


def test_parse_group_spec():
    assert parse_group_spec("zn:2001").factors == (2001,)
    assert parse_group_spec("f2:8").factors == (2,) * 8
    assert parse_group_spec("f3:4").factors == (3,) * 4
    assert parse_group_spec("factors:2,3,5").factors == (2, 3, 5)
    for bad in ("zn", "zn:x", "q:5", "factors:", "zn:-3"):
        with pytest.raises(ValueError):
            parse_group_spec(bad)


def test_digit_convention_row_major():
    # index = x1*15 + x2*5 + x3 for factors (2, 3, 5): C-order reshape
    g = build_group([2, 3, 5])
    d = g.digits(1 * 15 + 2 * 5 + 4)
    assert list(d) == [1, 2, 4]
    assert g.index([1, 2, 4]) == 29
    table = g.digit_table()
    assert table.shape == (3, 30)
    assert list(table[:, 7]) == [0, 1, 2]


def test_arithmetic_matches_digitwise_model():
    rng = random.Random(42)
    for factors in ([7], [2, 3, 5], [4, 9], [2, 2, 2, 2]):
        g = build_group(factors)
        for _ in range(200):
            x = rng.randrange(g.order)
            y = rng.randrange(g.order)
            dx, dy = g.digits(x), g.digits(y)
            expect = [int((a + b) % n) for a, b, n in zip(dx, dy, factors)]
            assert list(g.digits(g.add(x, y))) == expect
            assert g.add(x, g.neg(x)) == 0
            assert g.sub(x, y) == g.add(x, g.neg(y))
            k = rng.randrange(-5, 9)
            expect = [int((k * a) % n) for a, n in zip(dx, factors)]
            assert list(g.digits(g.scale(k, x))) == expect


def test_arithmetic_vectorized_agrees_with_scalar():
    g = build_group([3, 4, 5])
    rng = np.random.default_rng(42)
    x = rng.integers(0, g.order, size=50)
    y = rng.integers(0, g.order, size=50)
    added = g.add(x, y)
    for i in range(50):
        assert added[i] == g.add(int(x[i]), int(y[i]))
    assert np.array_equal(g.neg(x), [g.neg(int(v)) for v in x])
    assert np.array_equal(g.scale(3, x), [g.scale(3, int(v)) for v in x])


def test_pairing_is_bilinear_character():
    rng = random.Random(42)
    for factors in ([11], [2, 3, 5], [3, 3, 3]):
        g = build_group(factors)
        for _ in range(100):
            gamma = rng.randrange(g.order)
            x = rng.randrange(g.order)
            y = rng.randrange(g.order)
            # gamma(x + y) = gamma(x) gamma(y), as exact phase arithmetic
            kxy = g.pairing_phase(gamma, g.add(x, y))
            assert kxy == (g.pairing_phase(gamma, x) + g.pairing_phase(gamma, y)) % g.order
            # symmetry of the pairing under the self-duality
            assert g.pairing_phase(gamma, x) == g.pairing_phase(x, gamma)


def test_char_eval_values():
    g = build_group([4])
    assert char_eval(g, 1, 1) == pytest.approx(1j)
    assert char_eval(g, 1, 2) == pytest.approx(-1)
    assert char_eval(g, 2, 3) == pytest.approx(-1)
    g2 = build_group([2, 2])
    # gamma = (1,0) pairs nontrivially with x = (1,1)
    assert char_eval(g2, 2, 3) == pytest.approx(-1)
    assert char_eval(g2, 2, 1) == pytest.approx(1)


def test_char_column_matches_scalar():
    g = build_group([3, 5])
    for gamma in range(g.order):
        col = g.char_matrix_column(gamma)
        for x in range(g.order):
            assert col[x] == pytest.approx(char_eval(g, gamma, x), abs=1e-12)


def test_half_character_frozen_values():
    # 2 * 3 = 6 = 1 mod 5, and 2 * 2 = 4 mod 9
    assert half_character(build_group([5]), 1) == 3
    assert half_character(build_group([9]), 4) == 2


def test_half_character_doubles_back():
    rng = random.Random(42)
    for factors in ([5], [9], [3, 5, 7], [2001]):
        g = build_group(factors)
        for _ in range(50):
            gamma = rng.randrange(g.order)
            assert g.scale(2, half_character(g, gamma)) == gamma
    with pytest.raises(ValueError):
        half_character(build_group([6]), 1)


def test_gset_basics():
    g = build_group([10])
    s = GSet.from_indices(g, [1, 3, 3, 7])
    assert s.size == 3
    assert s.density == pytest.approx(0.3)
    assert 3 in s and 2 not in s
    assert sorted(s) == [1, 3, 7]
    with pytest.raises(ValueError):
        GSet.from_indices(g, [10])
    assert GSet.empty(g).size == 0
    assert GSet.full(g).size == 10


def test_gset_algebra():
    g = build_group([12])
    a = GSet.from_indices(g, [0, 1, 2])
    b = GSet.from_indices(g, [2, 3])
    assert sorted(a.union(b)) == [0, 1, 2, 3]
    assert sorted(a.intersect(b)) == [2]
    assert sorted(a.difference(b)) == [0, 1]
    assert a.intersect(b).issubset(a)
    assert sorted(a.translate(5)) == [5, 6, 7]
    assert sorted(a.negate()) == [0, 10, 11]
    assert not a.is_symmetric()
    assert GSet.from_indices(g, [0, 1, 11]).is_symmetric()


def test_gset_sumsets():
    g = build_group([20])
    a = GSet.from_indices(g, [0, 1])
    assert sorted(a.sumset(a)) == [0, 1, 2]
    assert sorted(a.iterated_sumset(3)) == [0, 1, 2, 3]
    assert sorted(a.iterated_sumset(0)) == [0]
    # wraps around the cyclic group
    b = GSet.from_indices(g, [18, 19])
    assert sorted(b.sumset(b)) == [16, 17, 18]


def test_dilate_set():
    g = build_group([9])
    s = GSet.from_indices(g, [0, 3])
    assert sorted(dilate_set(s, 2)) == [0, 6]
    # non-invertible dilation collapses the set unless strict
    t = GSet.from_indices(g, [0, 1, 4, 7])
    assert sorted(dilate_set(t, 3)) == [0, 3]
    with pytest.raises(ValueError):
        dilate_set(t, 3, strict=True)
    assert sorted(dilate_set(t, 2, strict=True)) == [0, 2, 5, 8]


def test_gset_json_round_trip_small_and_large():
    g = build_group([3, 5])
    s = GSet.from_indices(g, [0, 2, 14])
    obj = gset_to_json(s)
    assert obj["factors"] == [3, 5]
    assert obj["set"] == [0, 2, 14]
    assert gset_from_json(json.loads(json.dumps(obj))) == s

    g2 = build_group([1600])
    big = GSet.from_indices(g2, range(0, 1600, 2))
    obj2 = gset_to_json(big)
    assert isinstance(obj2["set"], str)
    back = gset_from_json(json.loads(json.dumps(obj2)), group=g2)
    assert back == big


def test_gset_json_errors():
    with pytest.raises(ValueError):
        gset_from_json({"set": [1]})
    with pytest.raises(ValueError):
        gset_from_json({"factors": [5], "set": [0]}, group=build_group([7]))
    with pytest.raises(ValueError):
        gset_from_json({"factors": [5], "set": [9]})
