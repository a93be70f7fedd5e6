from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from lengthlab.errors import ResourceError, UsageError, ValidationError
from lengthlab.groups import F2, Z, GroupModel, free_reduce, word_ball

letters2 = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=8)


def f2(word):
    return F2.element(word)


def test_free_inverse_cancels():
    assert F2.multiply(f2("g0"), f2("G0")) == F2.identity


def test_free_abelian_addition():
    assert Z.multiply(Z.element(3), Z.element(4)) == Z.element(7)


def test_free_reduction_by_hand():
    # (ab)(b^-1 a) = aa
    assert F2.multiply(f2("g0 g1"), f2("G1 g0")) == f2("g0^2")


def test_word_ball_sizes():
    assert [Z.format(g) for g in word_ball(Z, 3)] == ["identity", "G0", "g0", "G0^2", "g0^2", "G0^3", "g0^3"]
    assert len(word_ball(F2, 2)) == 17
    assert word_ball(F2, 0) == [F2.identity]
    assert len(word_ball(GroupModel.free_abelian(2), 2)) == 13


def test_word_ball_cap():
    with pytest.raises(ResourceError) as exc:
        word_ball(F2, 6, cap=100)
    assert exc.value.cap == 100


def test_parse_and_format():
    g = f2("g0^3 G1^2")
    assert F2.format(g) == "g0^3G1^2"
    assert F2.parse("identity") == F2.identity == F2.parse("1")
    with pytest.raises(ValidationError):
        F2.parse("g2")
    with pytest.raises(ValidationError):
        F2.parse("h0")


def test_model_mismatch_is_usage_error():
    with pytest.raises(UsageError):
        F2.multiply(f2("g0"), Z.element(1))


def test_finite_table_validation():
    z3 = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    C3 = GroupModel.finite(z3)
    g = C3.element(1)
    assert C3.power(g, 3) == C3.identity
    bad = [[0, 1, 2], [1, 1, 0], [2, 0, 1]]
    with pytest.raises(ValidationError):
        GroupModel.finite(bad)


def test_generated_by():
    assert F2.generated_by([f2("g0"), f2("g1")])
    assert not F2.generated_by([f2("g0"), f2("g1^2")])
    assert F2.generated_by([f2("g0 g1"), f2("g1")])
    assert Z.generated_by([Z.element(2), Z.element(3)])
    assert not Z.generated_by([Z.element(2), Z.element(4)])
    Z2 = GroupModel.free_abelian(2)
    assert Z2.generated_by([Z2.element([1, 1]), Z2.element([0, 1])])
    assert not Z2.generated_by([Z2.element([2, 0]), Z2.element([0, 1])])


@given(letters2, letters2, letters2)
def test_free_group_axioms(a, b, c):
    x, y, z = (F2.element(list(w)) for w in (a, b, c))
    assert F2.multiply(F2.multiply(x, y), z) == F2.multiply(x, F2.multiply(y, z))
    assert F2.multiply(x, F2.inverse(x)) == F2.identity
    assert F2.multiply(F2.identity, x) == x
    assert F2.word_length(x) == len(free_reduce(a))


@given(letters2)
def test_format_parse_roundtrip(a):
    g = F2.element(list(a))
    assert F2.parse(F2.format(g)) == g


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_z_word_length(a, b):
    assert Z.word_length(Z.multiply(Z.element(a), Z.element(b))) == abs(a + b)


def test_spec_roundtrip():
    for m in (Z, F2, GroupModel.free_abelian(3)):
        assert GroupModel.from_spec(m.to_spec()) == m
