"""Checkers for the length-function axioms, hyperbolicity and A5.

Every check runs on a finite ball and says so: a verdict that "holds" is a
statement about the scanned elements, never about the whole group.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import DegenerateError, ResourceError, ValidationError
from .groups import GroupElement
from .length import LengthFunction
from .numeric import DEFAULT_TAU, Approx, as_scalar, format_scalar


def gromov(l: LengthFunction, g: GroupElement, h: GroupElement):
    """``c(g, h) = (l(g) + l(h) - l(g h^-1)) / 2``."""
    m = l.model
    return (l(g) + l(h) - l(m.multiply(g, m.inverse(h)))) / 2


def gromov_matrix(l: LengthFunction, ball: list) -> list[list]:
    m = l.model
    lens = [l(g) for g in ball]
    invs = [m.inverse(h) for h in ball]
    rows = []
    for g, lg in zip(ball, lens):
        rows.append([(lg + lh - l(m.multiply(g, hi))) / 2 for lh, hi in zip(lens, invs)])
    return rows


def _fmt(m, g):
    return m.format(g)


@dataclass
class Verdict:
    status: str  # "holds" | "fails" | "not_checked"
    witness: tuple | None = None
    detail: str = ""

    def to_dict(self, m) -> dict:
        out: dict = {"status": self.status}
        if self.witness is not None:
            out["witness"] = [_fmt(m, g) if isinstance(g, GroupElement) else format_scalar(g) for g in self.witness]
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class AxiomReport:
    verdicts: dict
    radius: object
    elements: int
    pairs: int

    @property
    def holds(self) -> bool:
        return all(v.status != "fails" for v in self.verdicts.values())

    def to_dict(self, m) -> dict:
        return {
            "verdicts": {k: v.to_dict(m) for k, v in sorted(self.verdicts.items())},
            "radius": None if self.radius is None else format_scalar(self.radius),
            "elements": self.elements,
            "pairs": self.pairs,
            "holds": self.holds,
        }


def _ball_list(l: LengthFunction, ball) -> list:
    items = l.model.sorted(set(ball))
    if l.model.identity not in items:
        raise ValidationError("ball must contain the identity")
    return items


def check_A123(l: LengthFunction, ball, radius=None) -> AxiomReport:
    m = l.model
    items = _ball_list(l, ball)
    verdicts = {}

    a1 = Verdict("holds")
    if l(m.identity) != 0:
        a1 = Verdict("fails", (m.identity,), "l(identity) != 0")
    else:
        for g in items:
            if g != m.identity and not l(g) > 0:
                a1 = Verdict("fails", (g,), "non-trivial element of length 0")
                break
    verdicts["A1"] = a1

    a2 = Verdict("holds")
    for g in items:
        if l(g) != l(m.inverse(g)):
            a2 = Verdict("fails", (g,), "l(g) != l(g^-1)")
            break
    verdicts["A2"] = a2

    M = kernels.to_matrix(gromov_matrix(l, items))
    flat = int(np.argmin(M.data))
    worst = M.data.flat[flat]
    bad = worst < 0 if M.exact else worst < -M.tol
    n = len(items)
    if bad:
        g, h = items[flat // n], items[flat % n]
        verdicts["A3"] = Verdict("fails", (g, h, M.unscale(worst)), "negative Gromov product")
    else:
        verdicts["A3"] = Verdict("holds")
    verdicts["A4"] = Verdict("not_checked")
    return AxiomReport(verdicts, radius, n, n * n)


def check_A4(l: LengthFunction, radii) -> dict:
    """Enumerate each ``B_R``; finiteness is witnessed by the enumeration finishing."""
    out = {}
    for R in radii:
        try:
            out[format_scalar(R)] = len(l.ball(R))
        except ResourceError:
            out[format_scalar(R)] = None
    return out


@dataclass
class HyperbolicityEstimate:
    delta_hat: object
    witness: tuple
    triples: int
    radius: object = None
    raw: object = None  # min(c12, c23) - c13 at the witness, before clamping at 0

    def to_dict(self, m) -> dict:
        return {
            "delta_hat": format_scalar(self.delta_hat),
            "witness": [_fmt(m, g) for g in self.witness],
            "triples": self.triples,
            "radius": None if self.radius is None else format_scalar(self.radius),
            "scope": "exact on the scanned ball; a lower bound for the group",
        }


def estimate_delta(l: LengthFunction, ball, threads: int = 1, radius=None) -> HyperbolicityEstimate:
    """Least delta for which H_delta holds on every triple of the ball."""
    items = _ball_list(l, ball)
    M = kernels.to_matrix(gromov_matrix(l, items))
    best, (i, j, k) = kernels.delta_scan(M, threads=threads)
    zero = Fraction(0) if M.exact else Approx(0.0, M.tol)
    delta = best if best > 0 else zero
    if isinstance(delta, Approx) and delta.value < 0:
        delta = zero
    n = len(items)
    return HyperbolicityEstimate(delta, (items[i], items[j], items[k]), n**3, radius, best)


@dataclass
class LogInequalityReport:
    pairs: int
    first_checked: int
    second_checked: int
    violation: tuple | None = None

    @property
    def holds(self) -> bool:
        return self.violation is None


def log_proof_inequalities(l: LengthFunction, base: LengthFunction, ball, tol: float = DEFAULT_TAU) -> LogInequalityReport:
    """Check, with ``d(g,h) = exp(2 c(g,h))`` computed from ``l``:

    (1) ``|g| >= 2|h|  =>  2(|h|+1) >= d(g,h)``
    (2) ``d(g,h) >= min((|g|+1)/2, (|h|+1)/2)``
    where ``|.|`` is the integer-valued ``base``.
    """
    items = _ball_list(l, ball)
    C = np.array([[float(x) if not isinstance(x, Approx) else x.value for x in row] for row in gromov_matrix(l, items)])
    D = np.exp(2 * C)
    W = np.array([float(base(g)) for g in items])
    Wg, Wh = W[:, None], W[None, :]
    first = Wg >= 2 * Wh
    bad1 = first & (2 * (Wh + 1) < D - tol)
    bad2 = D < np.minimum((Wg + 1) / 2, (Wh + 1) / 2) - tol
    n = len(items)
    violation = None
    for label, bad in (("(1)", bad1), ("(2)", bad2)):
        hit = np.flatnonzero(bad)
        if hit.size and violation is None:
            violation = (label, items[hit[0] // n], items[hit[0] % n])
    return LogInequalityReport(n * n, int(first.sum()), n * n, violation)


# -- A5 ------------------------------------------------------------------


@dataclass
class A5Constants:
    K: object
    eps: object
    mu: object = None

    def __post_init__(self):
        self.K = as_scalar(self.K)
        self.eps = as_scalar(self.eps)
        if not self.K > 0:
            raise ValidationError("K must be positive")
        if not (self.eps >= 0 and self.eps < 1):
            raise ValidationError("eps must lie in [0, 1)")

    @property
    def lam(self):
        return 1 / (1 - self.eps)

    @classmethod
    def for_length(cls, l: LengthFunction, K, eps) -> "A5Constants":
        c = cls(K, eps)
        c.mu = discreteness_mu(l, c.K)
        return c

    def to_dict(self) -> dict:
        out = {"K": format_scalar(self.K), "eps": format_scalar(self.eps), "lambda": format_scalar(self.lam)}
        if self.mu is not None:
            out["mu"] = format_scalar(self.mu)
        return out


def short_elements(l: LengthFunction, K) -> list:
    """``B_K \\ {1}`` in increasing length, ties by canonical order."""
    m = l.model
    xs = [x for x in l.ball(K) if x != m.identity]
    return sorted(xs, key=lambda x: (_num(l(x)), m.sort_key(x)))


def _num(x):
    return x.value if isinstance(x, Approx) else x


@dataclass
class A5Witness:
    g: GroupElement
    x: GroupElement
    c: object
    bound: object
    lambdashort: bool


@dataclass
class A5Report:
    consts: A5Constants
    witnesses: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    checked: int = 0
    skipped_short: int = 0
    bk_size: int = 0

    @property
    def holds(self) -> bool:
        return not self.failures

    def to_dict(self, m) -> dict:
        return {
            "constants": self.consts.to_dict(),
            "holds": self.holds,
            "checked": self.checked,
            "skipped_short": self.skipped_short,
            "bk_size": self.bk_size,
            "witnesses": [
                {"g": _fmt(m, w.g), "x": _fmt(m, w.x), "c": format_scalar(w.c), "bound": format_scalar(w.bound)}
                for w in self.witnesses
            ],
            "failures": [_fmt(m, g) for g in self.failures],
        }


def check_A5(l: LengthFunction, consts: A5Constants, test_ball) -> A5Report:
    """For each tested g with l(g) > K find the first x in B_K with
    ``c(g x^-1, x^-1) <= eps * l(x) / 2``; equality counts as satisfied."""
    m = l.model
    xs = short_elements(l, consts.K)
    report = A5Report(consts, bk_size=len(xs) + 1)
    lam = consts.lam
    for g in m.sorted(set(test_ball)):
        lg = l(g)
        if not lg > consts.K:
            report.skipped_short += 1
            continue
        report.checked += 1
        for x in xs:
            xi = m.inverse(x)
            gx = m.multiply(g, xi)
            c = gromov(l, gx, xi)
            bound = consts.eps * l(x) / 2
            if c <= bound:
                ok = l(gx) <= lg - l(x) / lam
                report.witnesses.append(A5Witness(g, x, c, bound, ok))
                break
        else:
            report.failures.append(g)
    return report


@dataclass
class EpsSearch:
    eps: object
    g: GroupElement | None
    x: GroupElement | None
    checked: int

    def to_dict(self, m) -> dict:
        return {
            "eps": format_scalar(self.eps),
            "witness_g": None if self.g is None else _fmt(m, self.g),
            "witness_x": None if self.x is None else _fmt(m, self.x),
            "checked": self.checked,
        }


def minimal_eps(l: LengthFunction, K, test_ball) -> EpsSearch:
    """Smallest eps for which A5 holds with this K on the test ball.

    ``max_g min_x 2 c(g x^-1, x^-1) / l(x)``, clamped at 0.
    """
    m = l.model
    K = as_scalar(K)
    xs = short_elements(l, K)
    zero = Fraction(0) if l.exact else Approx(0.0)
    if not xs:
        raise DegenerateError(f"B_K contains only the identity for K={format_scalar(K)}")
    best, best_g, best_x, checked = None, None, None, 0
    for g in m.sorted(set(test_ball)):
        if not l(g) > K:
            continue
        checked += 1
        low, low_x = None, None
        for x in xs:
            xi = m.inverse(x)
            r = 2 * gromov(l, m.multiply(g, xi), xi) / l(x)
            if low is None or _num(r) < _num(low):
                low, low_x = r, x
        if best is None or _num(low) > _num(best):
            best, best_g, best_x = low, g, low_x
    if best is None or _num(best) < 0:
        best = zero
    return EpsSearch(best, best_g, best_x, checked)


def discreteness_mu(l: LengthFunction, K):
    """Least positive length on ``B_K``."""
    xs = short_elements(l, K)
    if not xs:
        raise DegenerateError(f"B_K contains only the identity for K={format_scalar(as_scalar(K))}")
    return l(xs[0])


@dataclass
class GenerationVerdict:
    status: str  # "holds" | "unknown"
    reached: int
    targets: int
    depth: int
    depth_cap: int | None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "reached": self.reached,
            "targets": self.targets,
            "depth": self.depth,
            "depth_cap": self.depth_cap,
            "detail": self.detail,
        }


def check_generates(l: LengthFunction, K, target_ball, eps=None, depth_cap: int | None = None) -> GenerationVerdict:
    """Does ``B_K`` generate every element of ``target_ball``?

    Breadth-first closure of right products by ``B_K``, keeping only elements
    no longer than the longest target (the greedy decomposition never leaves
    that region).  With ``eps`` the product count is capped at
    ``floor(lambda * R / mu) + 1``.
    """
    m = l.model
    K = as_scalar(K)
    xs = short_elements(l, K)
    if not xs:
        raise DegenerateError(f"B_K contains only the identity for K={format_scalar(K)}")
    targets = set(target_ball)
    R = max((l(g) for g in targets), key=_num, default=Fraction(0))
    if eps is not None:
        lam = 1 / (1 - as_scalar(eps))
        depth_cap = math.floor(_num(lam * R / l(xs[0]))) + 1
    seen = {m.identity}
    frontier = [m.identity]
    depth = 0
    while not targets <= seen:
        if depth_cap is not None and depth >= depth_cap:
            missing = len(targets - seen)
            return GenerationVerdict("unknown", len(targets & seen), len(targets), depth, depth_cap,
                                     f"depth cap reached with {missing} targets missing")
        nxt = []
        for h in frontier:
            for x in xs:
                y = m.multiply(h, x)
                if y not in seen and l(y) <= R:
                    seen.add(y)
                    nxt.append(y)
        depth += 1
        if not nxt:
            missing = len(targets - seen)
            return GenerationVerdict("unknown", len(targets & seen), len(targets), depth, depth_cap,
                                     f"closure below the target radius misses {missing} targets")
        frontier = nxt
    return GenerationVerdict("holds", len(targets), len(targets), depth, depth_cap)


@dataclass
class GeodesicA5Report:
    covering_radius: object
    a5: A5Report
    eps0: Fraction = Fraction(1, 5)

    @property
    def holds(self) -> bool:
        return self.a5.holds

    def to_dict(self, m) -> dict:
        return {"covering_radius": format_scalar(self.covering_radius), "eps0": format_scalar(self.eps0), **self.a5.to_dict(m)}


def check_geodesic_A5(qg, test_ball=None, radius=None) -> GeodesicA5Report:
    """A5 for a based length on a developed graph with ``K = 3 R_cov`` and
    ``eps = 1 - 1/5``; these constants always suffice for geodesic co-bounded
    actions, so a failure here indicates a bug."""
    from .ggraph import based_length_function, covering_radius

    r_cov = covering_radius(qg)
    l = based_length_function(qg)
    if test_ball is None:
        if radius is None:
            raise ValidationError("give a test ball or a radius")
        test_ball = l.ball(radius)
    consts = A5Constants.for_length(l, 3 * r_cov, 1 - Fraction(1, 5))
    return GeodesicA5Report(r_cov, check_A5(l, consts, test_ball))

