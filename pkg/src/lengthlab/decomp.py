"""Greedy factorisation of an element over the short ball ``B_K``."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .axioms import A5Constants, _num, discreteness_mu, gromov, short_elements
from .errors import A5ViolationError, InternalInvariantError, ValidationError
from .groups import GroupElement
from .length import LengthFunction
from .numeric import format_scalar


@dataclass
class Decomposition:
    g: GroupElement
    factors: list  # x_0, ..., x_k with x_k ... x_1 x_0 = g
    lengths: list
    residuals: list = field(default_factory=list)  # (g_i, l(g_i)) before each step

    @property
    def k(self) -> int:
        return len(self.factors) - 1

    def total(self):
        return sum(self.lengths[1:], self.lengths[0])

    def to_dict(self, m) -> dict:
        return {
            "g": m.format(self.g),
            "factors": [m.format(x) for x in self.factors],
            "lengths": [format_scalar(v) for v in self.lengths],
            "sum": format_scalar(self.total()),
            "residuals": [{"element": m.format(h), "length": format_scalar(v)} for h, v in self.residuals],
        }


def _mu(l, consts):
    return consts.mu if consts.mu is not None else discreteness_mu(l, consts.K)


def step_budget(l: LengthFunction, consts: A5Constants, g: GroupElement) -> int:
    return math.ceil(_num(consts.lam * l(g) / _mu(l, consts))) + 1


def greedy_decompose(l: LengthFunction, consts: A5Constants, g: GroupElement) -> Decomposition:
    """Peel off admissible short elements until the residual lies in ``B_K``.

    At each step the admissible x (those with ``c(g x^-1, x^-1) <= eps l(x)/2``)
    minimising ``c / l(x)`` is taken; ties go to the longer x, then to the
    canonical order.
    """
    m = l.model
    if g == m.identity:
        raise ValidationError("cannot decompose the identity")
    xs = short_elements(l, consts.K)
    budget = step_budget(l, consts, g)
    factors, lengths, residuals = [], [], []
    cur = g
    while True:
        lc = l(cur)
        residuals.append((cur, lc))
        if lc <= consts.K:
            factors.append(cur)
            lengths.append(lc)
            break
        if len(factors) >= budget:
            raise InternalInvariantError(f"step budget {budget} exhausted decomposing {m.format(g)}")
        best = None
        for x in xs:
            xi = m.inverse(x)
            h = m.multiply(cur, xi)
            c = gromov(l, h, xi)
            lx = l(x)
            if not c <= consts.eps * lx / 2:
                continue
            key = (_num(c / lx), -_num(lx))
            if best is None or key < best[0]:
                best = (key, x, h, lx)
        if best is None:
            raise A5ViolationError(
                f"no admissible x for residual {m.format(cur)} with K={format_scalar(consts.K)}, eps={format_scalar(consts.eps)}",
                witness=cur,
            )
        _, x, cur, lx = best
        factors.append(x)
        lengths.append(lx)
    return Decomposition(g, factors, lengths, residuals)


@dataclass
class DecompositionVerdict:
    ok: bool
    clause: str | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"ok": self.ok, "clause": self.clause, "detail": self.detail}


def verify_decomposition(l: LengthFunction, consts: A5Constants, d: Decomposition, g: GroupElement) -> DecompositionVerdict:
    """Re-check a decomposition from scratch, independent of how it was made."""
    m = l.model
    if not d.factors:
        return DecompositionVerdict(False, "ii", "empty factor list")
    lens = [l(x) for x in d.factors]
    for x, v in zip(d.factors, lens):
        if not (v > 0 and v <= consts.K):
            return DecompositionVerdict(False, "i", f"l({m.format(x)}) = {format_scalar(v)} outside (0, K]")
    prod = m.identity
    for x in d.factors:
        prod = m.multiply(x, prod)
    if prod != g or l(m.multiply(g, m.inverse(prod))) != 0:
        return DecompositionVerdict(False, "ii", "factors do not multiply back to g")
    total = sum(lens[1:], lens[0])
    lg = l(g)
    if not (total / consts.lam <= lg and lg <= total):
        return DecompositionVerdict(False, "iii", f"sandwich fails: sum={format_scalar(total)}, l(g)={format_scalar(lg)}")
    mu = _mu(l, consts)
    if not d.k <= consts.lam * lg / mu:
        return DecompositionVerdict(False, "k-bound", f"k={d.k} exceeds lambda*l(g)/mu")
    return DecompositionVerdict(True)
