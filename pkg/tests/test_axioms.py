from __future__ import annotations

import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from lengthlab.axioms import (
    A5Constants,
    check_A4,
    check_A5,
    check_A123,
    check_generates,
    check_geodesic_A5,
    discreteness_mu,
    estimate_delta,
    gromov,
    log_proof_inequalities,
    minimal_eps,
)
from lengthlab.errors import DegenerateError, ValidationError
from lengthlab.ggraph import based_length_function
from lengthlab.groups import F2, Z, word_ball
from lengthlab.length import epsilon_deformation, log_deformation, weighted_word_length, word_length
from lengthlab.specs import BUNDLED_GRAPHS, load_graph

z = Z.element
L_HALF = epsilon_deformation(F(1, 2))


def brute_delta(l, ball):
    items = l.model.sorted(ball)
    best, arg = F(0), None
    for a, b, c in itertools.product(range(len(items)), repeat=3):
        g1, g2, g3 = items[a], items[b], items[c]
        v = min(gromov(l, g1, g2), gromov(l, g2, g3)) - gromov(l, g1, g3)
        if v > best:
            best, arg = v, (g1, g2, g3)
    return best, arg


# -- A1-A4 --------------------------------------------------------------


def test_a123_examples():
    assert check_A123(word_length(Z), word_ball(Z, 5)).holds
    rep = check_A123(L_HALF, word_ball(Z, 10))
    assert all(rep.verdicts[k].status == "holds" for k in ("A1", "A2", "A3"))
    assert rep.elements == 21 and rep.pairs == 441


def test_a123_needs_identity():
    with pytest.raises(ValidationError):
        check_A123(word_length(Z), [z(1)])


def test_a4_reports_ball_sizes():
    sizes = check_A4(L_HALF, [F(3, 2), 10])
    assert sizes == {"3/2": 3, "10": 19}


# -- delta ----------------------------------------------------------------


def test_delta_of_the_line_is_zero():
    est = estimate_delta(word_length(Z), word_ball(Z, 6))
    assert est.delta_hat == 0


def test_delta_tree_is_zero():
    assert estimate_delta(word_length(F2), word_ball(F2, 2)).delta_hat == 0


@pytest.mark.parametrize("eps", [F(1, 4), F(1, 2), F(3, 4)])
def test_delta_matches_bruteforce_and_bound(eps):
    l = epsilon_deformation(eps)
    ball = word_ball(Z, 5)
    est = estimate_delta(l, ball)
    best, arg = brute_delta(l, ball)
    assert est.delta_hat == best
    assert est.witness == arg
    assert est.delta_hat <= 3 * eps / 2


def test_delta_threads_do_not_change_result():
    ball = word_ball(Z, 12)
    one = estimate_delta(L_HALF, ball, threads=1)
    four = estimate_delta(L_HALF, ball, threads=4)
    assert (one.delta_hat, one.witness) == (four.delta_hat, four.witness)
    assert one.triples == 25**3


def test_log_delta_and_inequalities_small_ball():
    l = log_deformation()
    ball = word_ball(Z, 30)
    est = estimate_delta(l, ball)
    assert est.delta_hat.value <= 0.5 * math.log(32) + 1e-9
    rep = log_proof_inequalities(l, word_length(Z), ball)
    assert rep.holds and rep.pairs == 61 * 61


@settings(max_examples=25)
@given(st.fractions(min_value=0, max_value=F(19, 20), max_denominator=20))
def test_epsilon_family_delta_bound(eps):
    est = estimate_delta(epsilon_deformation(eps), word_ball(Z, 6))
    assert est.delta_hat <= 3 * eps / 2


# -- A5 ---------------------------------------------------------------------


def test_a5_line_with_k1_eps0():
    l = word_length(Z)
    rep = check_A5(l, A5Constants.for_length(l, 1, 0), word_ball(Z, 8))
    assert rep.holds
    for w in rep.witnesses:
        assert w.x == z(1 if w.g.payload[0] > 0 else -1)
        assert w.lambdashort


def test_a5_l_half():
    rep = check_A5(L_HALF, A5Constants.for_length(L_HALF, F(3, 2), F(1, 2)), word_ball(Z, 10))
    assert rep.holds
    assert all(w.x in (z(1), z(-1)) for w in rep.witnesses)


@pytest.mark.parametrize("K", [3, 5, 7])
def test_a5_three_edge_fails_with_eps0(K):
    l = based_length_function(load_graph("f2_three_edge"))
    # l(g_n) = n + 2, so n must exceed K - 2 for the test set to reach past B_K
    tests = [F2.power(F2.element("g1"), n) for n in range(1, max(4, K) + 1)]
    rep = check_A5(l, A5Constants.for_length(l, K, 0), tests)
    assert not rep.holds


def test_minimal_eps_examples():
    assert minimal_eps(word_length(Z), 1, word_ball(Z, 8)).eps == 0
    l = based_length_function(load_graph("f2_three_edge"))
    r = minimal_eps(l, 3, [F2.element("g1^2")])
    assert r.eps == F(2, 3) and r.x == F2.element("g1")
    r = minimal_eps(L_HALF, F(3, 2), word_ball(Z, 10))
    assert r.eps == F(1, 2) and r.g in (z(2), z(-2)) and r.x in (z(1), z(-1))


def test_minimal_eps_is_tight():
    # A5 holds at the returned eps and fails just below it
    r = minimal_eps(L_HALF, F(3, 2), word_ball(Z, 10))
    assert check_A5(L_HALF, A5Constants.for_length(L_HALF, F(3, 2), r.eps), word_ball(Z, 10)).holds
    below = A5Constants.for_length(L_HALF, F(3, 2), r.eps - F(1, 1000))
    assert not check_A5(L_HALF, below, word_ball(Z, 10)).holds


def test_discreteness_mu():
    assert discreteness_mu(word_length(Z), 3) == 1
    assert discreteness_mu(L_HALF, 3) == F(3, 2)
    assert discreteness_mu(weighted_word_length(Z, {1: F(5, 4), 2: 2, 3: 3}), 3) == F(5, 4)


def test_generation():
    assert check_generates(word_length(Z), 1, word_ball(Z, 10)).status == "holds"
    assert check_generates(L_HALF, F(3, 2), word_ball(Z, 10), eps=F(1, 2)).status == "holds"
    with pytest.raises(DegenerateError):
        check_generates(weighted_word_length(Z, {1: 2}), 1, word_ball(Z, 3))
    # unit weights on {2, 3} are not degenerate at K = 1: B_1 = {0, +-2, +-3}
    assert check_generates(weighted_word_length(Z, {2: 1, 3: 1}), 1, word_ball(Z, 6)).status == "holds"


def test_generation_unknown_when_capped():
    v = check_generates(word_length(Z), 1, word_ball(Z, 10), depth_cap=3)
    assert v.status == "unknown"


def test_constants_validation():
    with pytest.raises(ValidationError):
        A5Constants(0, 0)
    with pytest.raises(ValidationError):
        A5Constants(1, 1)
    assert A5Constants(1, F(1, 2)).lam == 2


@pytest.mark.parametrize("name, K", [("z_standard", F(3, 2)), ("z_spur", F(9, 4)), ("f2_three_edge", F(9, 2))])
def test_geodesic_a5_examples(name, K):
    rep = check_geodesic_A5(load_graph(name), radius=6)
    assert rep.a5.consts.K == K and rep.a5.consts.eps == F(4, 5)
    assert rep.holds


@pytest.mark.parametrize("name", BUNDLED_GRAPHS)
def test_geodesic_a5_all_bundled(name):
    qg = load_graph(name)
    assert check_geodesic_A5(qg, word_ball(qg.model, 4)).holds
