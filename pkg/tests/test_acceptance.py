"""Acceptance suite.

One test per criterion; ``pytest tests/test_acceptance.py`` ends with one
PASS/FAIL line per criterion (see the hook in conftest.py).  Command-line
reports produced here are cached so the determinism criterion can re-run the
same commands with more threads and compare bytes.
"""
from __future__ import annotations

import contextlib
import io
import json
import math
import time
from fractions import Fraction as F

import pytest

from lengthlab import chiswell
from lengthlab.axioms import A5Constants, check_A123, estimate_delta, log_proof_inequalities
from lengthlab.cli import run
from lengthlab.decomp import greedy_decompose, verify_decomposition
from lengthlab.ggraph import based_length_function, covering_radius
from lengthlab.groups import F2, Z, word_ball
from lengthlab.length import epsilon_deformation, log_deformation, word_length
from lengthlab.numeric import DEFAULT_TAU, parse_scalar, submonoid_member
from lengthlab.rebuild import certify_not_cyclic, fit_bilipschitz
from lengthlab.specs import BUNDLED_GRAPHS, load_graph

TAU = DEFAULT_TAU
EPSILONS = ("1/4", "1/2", "3/4")
THREE_EDGE_TESTS = {K: [f"g1^{n}" for n in range(1, max(4, K) + 1)] for K in (3, 5, 7)}

_reports: dict[tuple, tuple[int, str]] = {}


def cli(*argv, threads=1):
    """Run one command in-process; returns (status, parsed report).  Single-thread
    outputs are cached for the determinism criterion."""
    key = tuple(argv)
    if threads == 1 and key in _reports:
        status, text = _reports[key]
    else:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            status = run([*argv, "--threads", str(threads)])
        text = buf.getvalue()
        if threads == 1:
            _reports[key] = (status, text)
    return status, json.loads(text)


def scalar(text):
    return parse_scalar(text)


# -- 1 --------------------------------------------------------------------------


@pytest.mark.criterion(1, "eps-deformation: delta_hat <= 3 eps/2 on |n| <= 12, A1-A3 hold, < 5 s")
def test_c1_epsilon_deformation_hyperbolicity():
    t0 = time.perf_counter()
    for text in EPSILONS:
        eps = F(text)
        l = epsilon_deformation(eps)
        ball = word_ball(Z, 12)
        est = estimate_delta(l, ball)
        assert isinstance(est.delta_hat, F) and est.delta_hat <= 3 * eps / 2
        assert check_A123(l, ball).holds
        status, rep = cli("estimate-delta", "--length", f"eps_deform:{text}", "--radius", "12", "--mode", "exact",
                          "--claim", str(3 * eps / 2))
        assert status == 0 and scalar(rep["result"]["delta_hat"]) == est.delta_hat
        status, rep = cli("check-axioms", "--length", f"eps_deform:{text}", "--radius", "12", "--mode", "exact")
        assert status == 0
    assert time.perf_counter() - t0 < 5


# -- 2 --------------------------------------------------------------------------


@pytest.mark.criterion(2, "log deformation: delta_hat <= 1/2 ln 32 on |n| <= 200, proof inequalities hold, < 60 s")
def test_c2_log_deformation_hyperbolicity():
    t0 = time.perf_counter()
    l = log_deformation()
    ball = word_ball(Z, 200)
    est = estimate_delta(l, ball)
    assert est.triples == 401**3
    assert est.delta_hat.value <= 0.5 * math.log(32) + 1e-9
    ineq = log_proof_inequalities(l, word_length(Z), ball, tol=TAU)
    assert ineq.holds and ineq.pairs == 401**2
    assert time.perf_counter() - t0 < 60


# -- 3 --------------------------------------------------------------------------


@pytest.mark.criterion(3, "A5 baseline: word lengths of Z and F2 pass K=1, eps=0 on radius 8; min-eps = 0")
def test_c3_a5_baseline():
    for group in ("Z", "F2"):
        status, rep = cli("check-a5", "--length", "word", "--group", group, "--K", "1", "--eps", "0", "--radius", "8")
        assert status == 0 and rep["result"]["holds"] and rep["result"]["checked"] > 0
        status, rep = cli("min-eps", "--length", "word", "--group", group, "--K", "1", "--radius", "8")
        assert status == 0 and abs(scalar(rep["result"]["eps"])) <= TAU


# -- 4 --------------------------------------------------------------------------


@pytest.mark.criterion(4, "A5 obstruction: three-edge F2 graph fails eps=0 for K in {3,5,7}; min-eps(K=3) >= 2/3 at g_2")
def test_c4_a5_obstruction():
    for K, tests in THREE_EDGE_TESTS.items():
        status, rep = cli("check-a5", "--length", "ggraph:f2_three_edge", "--K", str(K), "--eps", "0", "--elements", *tests)
        assert status == 1 and not rep["result"]["holds"] and rep["result"]["failures"]
    status, rep = cli("min-eps", "--length", "ggraph:f2_three_edge", "--K", "3", "--elements", *THREE_EDGE_TESTS[3][:4])
    assert status == 0
    assert scalar(rep["result"]["eps"]) >= F(2, 3) - F(TAU)
    assert rep["result"]["witness_g"] == "g1^2"


# -- 5 --------------------------------------------------------------------------


@pytest.mark.criterion(5, "geodesic A5: every bundled graph holds with K = 3 R_cov, eps = 4/5 on radius 8")
def test_c5_geodesic_a5():
    for name in BUNDLED_GRAPHS:
        status, rep = cli("geodesic-a5", "--graph", name, "--l-radius", "8")
        assert status == 0, name
        r_cov = covering_radius(load_graph(name))
        consts = rep["result"]["constants"]
        assert scalar(consts["K"]) == 3 * r_cov and consts["eps"] == "4/5"
        assert scalar(rep["result"]["covering_radius"]) == r_cov


# -- 6 --------------------------------------------------------------------------


@pytest.mark.criterion(6, "decomposition: l_1/2, K=3/2, eps=1/2, every g with l(g) <= 10 verifies exactly")
def test_c6_decomposition():
    l = epsilon_deformation(F(1, 2))
    c = A5Constants.for_length(l, F(3, 2), F(1, 2))
    targets = [g for g in l.ball(10) if g != Z.identity]
    assert len(targets) == 18
    for g in targets:
        d = greedy_decompose(l, c, g)
        assert all(isinstance(v, F) for v in d.lengths)
        v = verify_decomposition(l, c, d, g)
        assert v.ok, (Z.format(g), v)
        s = d.total()
        assert s / c.lam <= l(g) <= s
        assert d.k <= c.lam * l(g) / c.mu
    status, _ = cli("decompose", "--length", "eps_deform:1/2", "--K", "3/2", "--eps", "1/2", "--l-radius", "10")
    assert status == 0


# -- 7 --------------------------------------------------------------------------


@pytest.mark.criterion(7, "reconstruction: weighted Cayley graph sandwiches l for Z word, l_1/2 and the weighted example")
def test_c7_reconstruction():
    status, rep = cli("rebuild-verify", "--length", "word", "--K", "1", "--eps", "0", "--radius", "10", "--mode", "exact")
    b = rep["result"]["bilipschitz"]
    assert status == 0 and b["worst_ratio_low"] == b["worst_ratio_high"] == "1"

    status, rep = cli("rebuild-verify", "--length", "eps_deform:1/2", "--K", "3/2", "--eps", "1/2", "--radius", "10",
                      "--mode", "exact")
    b = rep["result"]["bilipschitz"]
    assert status == 0 and b["holds"] and sorted(b["equalities"]) == ["G0", "g0"]
    assert rep["result"]["graph"]["edges"][0]["length"] == "3/2"

    status, rep = cli("rebuild-verify", "--length", "z_weighted", "--K", "3", "--eps", "1/4", "--radius", "10", "--mode", "exact")
    assert status == 0 and rep["result"]["bilipschitz"]["holds"]
    lengths = sorted(scalar(e["length"]) for e in rep["result"]["graph"]["edges"])
    assert lengths == [F(5, 4), 2, 3]
    status, rep = cli("min-eps", "--length", "z_weighted", "--K", "3", "--radius", "10")
    assert status == 0 and rep["result"]["eps"] == "0"


# -- 8 --------------------------------------------------------------------------


@pytest.mark.criterion(8, "Chiswell tree: Z radius 4 and F2 radius 3 pass metric, four-point and based-length checks, < 30 s")
def test_c8_chiswell():
    t0 = time.perf_counter()
    lz = word_length(Z)
    ball = word_ball(Z, 4)
    tz = chiswell.build_tree(lz, ball)
    vz = chiswell.verify_tree(tz, lz, ball)
    assert vz.ok and vz.four_point_mode == "exhaustive" and len(tz) < 200

    lf = word_length(F2)
    ball = word_ball(F2, 3)
    tf = chiswell.build_tree(lf, ball)
    assert chiswell.verify_tree(tf, lf, ball).ok
    sampled = chiswell.verify_tree(tf, lf, ball, exhaustive_limit=0)
    assert sampled.ok and sampled.four_point_mode == "sampled" and sampled.quadruples == chiswell.SAMPLES
    for t, l, b in ((tz, lz, word_ball(Z, 4)), (tf, lf, ball)):
        for g in b:
            assert t.dist[t.base][t.point_class[(g, l(g))]] == l(g)
    status, _ = cli("chiswell-tree", "--length", "word", "--radius", "4")
    assert status == 0
    status, _ = cli("chiswell-tree", "--length", "word", "--group", "F2", "--radius", "3")
    assert status == 0
    assert time.perf_counter() - t0 < 30


# -- 9 --------------------------------------------------------------------------


@pytest.mark.criterion(9, "non-cyclicity: l_1/2 certificate total for M <= 1024 with n <= 12, witnesses re-verified")
def test_c9_certificate():
    cert = certify_not_cyclic(epsilon_deformation(F(1, 2)), 1024, 12)
    assert cert.total and sorted(cert.witnesses) == list(range(1, 1025))
    for M, (n, value, scaled) in cert.witnesses.items():
        independent = n + F(1, 2**n)
        assert value == independent and scaled == M * independent
        assert (M * independent).denominator != 1
    status, rep = cli("certify-not-cyclic", "--length", "eps_deform:1/2", "--M-max", "1024", "--n-max", "12")
    assert status == 0 and rep["result"]["total"]


# -- 10 -------------------------------------------------------------------------


@pytest.mark.criterion(10, "submonoid realization: based lengths on radius 6 lie in the monoid of edge lengths")
def test_c10_submonoid():
    for name in BUNDLED_GRAPHS:
        qg = load_graph(name)
        assert qg.exact
        l = based_length_function(qg)
        basis = qg.edge_lengths()
        ball = l.ball(6)
        assert len(ball) > 1
        for g in ball:
            m = submonoid_member(l(g), basis)
            assert m.status == "yes", (name, qg.model.format(g))
            assert sum((c * b for c, b in zip(m.coefficients, basis)), F(0)) == l(g)


# -- 11 -------------------------------------------------------------------------


@pytest.mark.criterion(11, "divergence: A_low(word, log) at radius 100 is below A_low at radius 10 divided by 5")
def test_c11_divergence():
    lows = {}
    for radius in (10, 100):
        status, rep = cli("fit-bilip", "--length", "word", "--length2", "log", "--radius", str(radius))
        assert status == 0
        lows[radius] = scalar(rep["result"]["a_low"]).value
        direct = fit_bilipschitz(word_length(Z), log_deformation(), word_ball(Z, radius)).a_low.value
        assert lows[radius] == direct
    assert abs(lows[10] - math.log(11) / 10) <= TAU
    assert abs(lows[100] - math.log(101) / 100) <= TAU
    assert lows[100] < lows[10] / 5


# -- 12 -------------------------------------------------------------------------

COMMANDS = [
    *[("estimate-delta", "--length", f"eps_deform:{e}", "--radius", "12", "--mode", "exact", "--claim", str(3 * F(e) / 2))
      for e in EPSILONS],
    *[("check-axioms", "--length", f"eps_deform:{e}", "--radius", "12", "--mode", "exact") for e in EPSILONS],
    ("estimate-delta", "--length", "log", "--radius", "200"),
    *[("check-a5", "--length", "word", "--group", g, "--K", "1", "--eps", "0", "--radius", "8") for g in ("Z", "F2")],
    *[("min-eps", "--length", "word", "--group", g, "--K", "1", "--radius", "8") for g in ("Z", "F2")],
    *[("check-a5", "--length", "ggraph:f2_three_edge", "--K", str(K), "--eps", "0", "--elements", *t)
      for K, t in THREE_EDGE_TESTS.items()],
    ("min-eps", "--length", "ggraph:f2_three_edge", "--K", "3", "--elements", *THREE_EDGE_TESTS[3][:4]),
    *[("geodesic-a5", "--graph", name, "--l-radius", "8") for name in BUNDLED_GRAPHS],
    ("decompose", "--length", "eps_deform:1/2", "--K", "3/2", "--eps", "1/2", "--l-radius", "10"),
    ("rebuild-verify", "--length", "word", "--K", "1", "--eps", "0", "--radius", "10", "--mode", "exact"),
    ("rebuild-verify", "--length", "eps_deform:1/2", "--K", "3/2", "--eps", "1/2", "--radius", "10", "--mode", "exact"),
    ("rebuild-verify", "--length", "z_weighted", "--K", "3", "--eps", "1/4", "--radius", "10", "--mode", "exact"),
    ("chiswell-tree", "--length", "word", "--radius", "4"),
    ("chiswell-tree", "--length", "word", "--group", "F2", "--radius", "3"),
    ("certify-not-cyclic", "--length", "eps_deform:1/2", "--M-max", "1024", "--n-max", "12"),
    *[("fit-bilip", "--length", "word", "--length2", "log", "--radius", str(r)) for r in (10, 100)],
    ("export-dot", "--graph", "f2_three_edge", "--l-radius", "4"),
]


def _raw(argv, threads):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        status = run([*argv, "--threads", str(threads)])
    return status, buf.getvalue()


@pytest.mark.criterion(12, "determinism: every command above is byte-identical with --threads 4 and --threads 1")
def test_c12_determinism():
    for argv in COMMANDS:
        if argv in _reports:
            one = _reports[argv]
        else:
            one = _raw(argv, 1)
            _reports[argv] = one
        four = _raw(argv, 4)
        assert one == four, argv[0]
