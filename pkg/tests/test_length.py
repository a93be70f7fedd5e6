from __future__ import annotations

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from lengthlab.axioms import check_A123, gromov
from lengthlab.errors import DomainError, ValidationError
from lengthlab.groups import F2, Z, word_ball
from lengthlab.length import (
    additive_eps,
    epsilon_deformation,
    log_deformation,
    table_length,
    weighted_word_length,
    word_length,
)
from lengthlab.numeric import Approx

z = Z.element


def test_word_length_on_z_and_f2():
    assert word_length(Z)(z(5)) == 5
    assert word_length(F2)(F2.element("g0g1g0g1")) == 4


def test_weighted_z_example():
    l = weighted_word_length(Z, {1: F(5, 4), 2: 2, 3: 3})
    assert l(z(1)) == F(5, 4)
    assert l(z(2)) == 2
    assert l(z(-1)) == F(5, 4)
    # 4 = 2 + 2 beats 1 + 3
    assert l(z(4)) == 4
    assert l(z(6)) == 6


def test_weighted_unit_weights_match_word_length():
    l = weighted_word_length(Z, {1: 1})
    assert l(z(5)) == 5
    lf = weighted_word_length(F2, {"g0": 1, "g1": 1})
    assert lf(F2.element("g0g1g0g1")) == 4


def test_weighted_rejects_asymmetric_or_nonpositive():
    with pytest.raises(ValidationError):
        weighted_word_length(Z, {1: 1, -1: 2})
    with pytest.raises(ValidationError):
        weighted_word_length(Z, {1: 0})


def test_weighted_matches_bruteforce_dijkstra():
    # every element of the word ball of radius 6 against a direct DP over sums
    w = {1: F(5, 4), 2: F(2), 3: F(3)}
    l = weighted_word_length(Z, w)
    best = {0: F(0)}
    for _ in range(12):
        for n, v in list(best.items()):
            for s, c in w.items():
                for t in (n + s, n - s):
                    if abs(t) <= 12 and (t not in best or v + c < best[t]):
                        best[t] = v + c
    for n in range(-6, 7):
        assert l(z(n)) == best[n]


def test_epsilon_deformation_values():
    l = epsilon_deformation(F(1, 2))
    assert [l(z(n)) for n in range(4)] == [0, F(3, 2), F(9, 4), F(25, 8)]
    assert gromov(l, z(1), z(-1)) == F(3, 8)
    l0 = epsilon_deformation(0)
    assert all(l0(z(n)) == abs(n) for n in range(-5, 6))


@pytest.mark.parametrize("eps", [-1, 1, F(3, 2)])
def test_epsilon_domain(eps):
    with pytest.raises(DomainError):
        epsilon_deformation(eps)
    with pytest.raises(DomainError):
        additive_eps(eps)


def test_additive_eps_values():
    l = additive_eps(F(1, 2))
    assert l(z(1)) == F(3, 2) and l(z(-4)) == F(9, 2) and l(z(0)) == 0
    # 1/2 (5/2 + 7/2 - l(5)) = 1/2 (6 - 11/2)
    assert gromov(l, z(2), z(-3)) == F(1, 4)
    assert all(additive_eps(0)(z(n)) == abs(n) for n in range(-4, 5))


def test_log_values():
    l = log_deformation()
    assert l(Z.identity) == Approx(0.0)
    assert l(z(1)) == Approx(math.log(2))
    assert abs(gromov(l, z(1), z(3)).value - 0.490415) < 1e-6
    assert not l.exact


def test_log_ball_enumeration():
    l = log_deformation()
    # ln(n + 1) <= ln 11  <=>  |n| <= 10
    assert len(l.ball(math.log(11))) == 21


def test_table_overrides():
    base = word_length(Z)
    same = table_length(Z, {}, base)
    assert all(same(z(n)) == base(z(n)) for n in range(-5, 6))
    t = table_length(Z, {2: F(1, 4), -2: F(1, 4)}, base)
    assert t(z(2)) == F(1, 4) and t(z(3)) == 3
    with pytest.raises(ValidationError):
        table_length(Z, {2: 1}, base)


def test_table_a3_failure_witness():
    t = table_length(Z, {2: F(1, 4), -2: F(1, 4)}, word_length(Z))
    rep = check_A123(t, word_ball(Z, 4))
    a3 = rep.verdicts["A3"]
    assert a3.status == "fails"
    g, h, c = a3.witness
    assert {Z.format(g), Z.format(h)} == {"g0^2", "G0^2"}
    assert c == F(-7, 4)


def test_balls_are_canonical_and_sound():
    l = epsilon_deformation(F(1, 2))
    b = l.ball(F(25, 8))
    assert [Z.format(g) for g in b] == ["identity", "G0", "g0", "G0^2", "g0^2", "G0^3", "g0^3"]
    assert len(l.ball(3)) == 5


def test_approx_demotion():
    l = epsilon_deformation(F(1, 2)).approx()
    assert isinstance(l(z(1)), Approx) and not l.exact


eps_st = st.fractions(min_value=0, max_value=F(19, 20), max_denominator=20)
ints = st.integers(-30, 30)


@given(eps_st, ints, ints)
def test_deformations_satisfy_a2_a3(eps, a, b):
    for l in (epsilon_deformation(eps), additive_eps(eps)):
        g, h = z(a), z(b)
        assert l(g) == l(Z.inverse(g))
        assert gromov(l, g, h) >= 0
        assert (l(g) == 0) == (a == 0)


WEIGHTED_F2 = weighted_word_length(F2, {"g0": F(3, 2), "g1": 1, "g0g1": F(2)})


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=4), st.lists(st.sampled_from([1, -1, 2, -2]), max_size=4))
def test_weighted_f2_triangle(a, b):
    l = WEIGHTED_F2
    g, h = F2.element(a), F2.element(b)
    assert l(F2.multiply(g, h)) <= l(g) + l(h)
    assert l(g) <= F(3, 2) * F2.word_length(g)
