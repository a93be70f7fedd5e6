"""Weighted Cayley graphs from graph-like length functions, bi-Lipschitz
verification and fitting, and the non-cyclicity certificate."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .axioms import A5Constants, _num, short_elements
from .errors import DegenerateError, ModeError, ValidationError
from .ggraph import QuotientGGraph, based_length
from .groups import GroupElement
from .length import LengthFunction
from .numeric import format_scalar, is_exact


def build_weighted_cayley(l: LengthFunction, K) -> QuotientGGraph:
    """One vertex; a loop of length ``l(y)`` for each pair ``{y, y^-1}`` in ``B_K \\ {1}``."""
    m = l.model
    xs = short_elements(l, K)
    if not xs:
        raise DegenerateError("B_K contains only the identity")
    loops = {}
    for y in m.sorted(xs):
        yi = m.inverse(y)
        if y not in loops and yi not in loops:
            loops[y] = l(y)
    return QuotientGGraph.cayley(m, loops)


@dataclass
class BiLipschitzVerdict:
    lam: object
    holds: bool
    worst_ratio_low: object
    low_witness: GroupElement | None
    worst_ratio_high: object
    high_witness: GroupElement | None
    tested: int
    equalities: list = field(default_factory=list)  # g with l(g) == l_p(g)
    radius: object = None

    def to_dict(self, m) -> dict:
        return {
            "lambda": format_scalar(self.lam),
            "holds": self.holds,
            "worst_ratio_low": format_scalar(self.worst_ratio_low),
            "low_witness": m.format(self.low_witness) if self.low_witness is not None else None,
            "worst_ratio_high": format_scalar(self.worst_ratio_high),
            "high_witness": m.format(self.high_witness) if self.high_witness is not None else None,
            "tested": self.tested,
            "equalities": [m.format(g) for g in self.equalities],
            "radius": None if self.radius is None else format_scalar(self.radius),
        }


def verify_graphlike(l: LengthFunction, consts: A5Constants, test_ball, radius=None) -> BiLipschitzVerdict:
    """Check ``l_p / lambda <= l <= l_p`` on the test ball, where ``l_p`` is
    the based length of the weighted Cayley graph on ``B_K``."""
    m = l.model
    qg = build_weighted_cayley(l, consts.K)
    lam = consts.lam
    holds = True
    low = high = None
    low_g = high_g = None
    equal = []
    tested = 0
    for g in m.sorted(set(test_ball)):
        if g == m.identity:
            continue
        tested += 1
        lp = based_length(qg, g)
        lg = l(g)
        if not (lp / lam <= lg and lg <= lp):
            holds = False
        if lg == lp:
            equal.append(g)
        r = lg / lp
        if low is None or _num(r) < _num(low):
            low, low_g = r, g
        if high is None or _num(r) > _num(high):
            high, high_g = r, g
    return BiLipschitzVerdict(lam, holds, low, low_g, high, high_g, tested, equal, radius)


@dataclass
class BiLipschitzFit:
    a_low: object
    low_witness: GroupElement | None
    a_high: object
    high_witness: GroupElement | None
    tested: int
    radius: object = None

    def to_dict(self, m) -> dict:
        return {
            "a_low": format_scalar(self.a_low),
            "low_witness": m.format(self.low_witness) if self.low_witness is not None else None,
            "a_high": format_scalar(self.a_high),
            "high_witness": m.format(self.high_witness) if self.high_witness is not None else None,
            "tested": self.tested,
            "radius": None if self.radius is None else format_scalar(self.radius),
            "scope": "tight on the scanned ball only",
        }


def fit_bilipschitz(l1: LengthFunction, l2: LengthFunction, test_ball, radius=None) -> BiLipschitzFit:
    """Tightest ``a_low * l1 <= l2 <= a_high * l1`` on the test ball."""
    m = l1.model
    if l2.model != m:
        raise ValidationError("length functions live on different groups")
    low = high = None
    low_g = high_g = None
    tested = 0
    for g in m.sorted(set(test_ball)):
        if g == m.identity:
            continue
        v1 = l1(g)
        if not v1 > 0:
            raise ValidationError(f"A1 fails for the first length function at {m.format(g)}")
        tested += 1
        r = l2(g) / v1
        if low is None or _num(r) < _num(low):
            low, low_g = r, g
        if high is None or _num(r) > _num(high):
            high, high_g = r, g
    if low is None:
        low = high = Fraction(1)
    return BiLipschitzFit(low, low_g, high, high_g, tested, radius)


@dataclass
class NonRealizabilityCertificate:
    m_max: int
    n_max: int
    witnesses: dict  # M -> (n, l(n), M*l(n))
    inconclusive: list

    @property
    def total(self) -> bool:
        return not self.inconclusive

    def to_dict(self) -> dict:
        return {
            "M_max": self.m_max,
            "n_max": self.n_max,
            "total": self.total,
            "witnesses": {
                str(M): {"n": n, "value": format_scalar(v), "scaled": format_scalar(s), "reason": "M*l(n) is not an integer"}
                for M, (n, v, s) in sorted(self.witnesses.items())
            },
            "inconclusive": self.inconclusive,
        }


def certify_not_cyclic(l: LengthFunction, m_max: int, n_max: int) -> NonRealizabilityCertificate:
    """For each ``1 <= M <= m_max`` find ``1 <= n <= n_max`` with ``M * l(n)``
    not an integer, i.e. the values of ``l`` on Z escape ``(1/M) Z``."""
    model = l.model
    if model.kind != "free_abelian" or model.rank != 1:
        raise ValidationError("the certificate is defined for length functions on Z")
    if m_max < 1 or n_max < 1:
        raise ValidationError("M_max and n_max must be positive")
    values = []
    for n in range(1, n_max + 1):
        v = l(model.element(n))
        if not is_exact(v):
            raise ModeError("certify_not_cyclic needs exact values")
        values.append((n, Fraction(v)))
    witnesses, inconclusive = {}, []
    for M in range(1, m_max + 1):
        for n, v in values:
            s = M * v
            if s.denominator != 1:
                witnesses[M] = (n, v, s)
                break
        else:
            inconclusive.append(M)
    return NonRealizabilityCertificate(m_max, n_max, witnesses, inconclusive)
