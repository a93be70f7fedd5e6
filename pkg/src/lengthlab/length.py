"""Length functions on group models and the built-in families."""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Callable, Mapping

from .errors import DomainError, PreconditionError, ValidationError
from .groups import GroupElement, GroupModel, Z, word_ball
from .numeric import DEFAULT_TAU, Approx, as_scalar, format_scalar, is_exact, to_approx


class LengthFunction:
    """An evaluator ``g -> Scalar`` with the metadata needed to enumerate balls.

    ``lower_bound = (c_low, b)`` promises ``l(g) >= c_low * |g| - b`` where
    ``|g|`` is word length in the model's standard generators; it is what makes
    ``B_R = {g : l(g) <= R}`` enumerable.  Families whose balls are easier to
    get another way pass ``ball_enumerator`` or ``word_radius`` instead.
    """

    def __init__(
        self,
        model: GroupModel,
        evaluator: Callable[[GroupElement], object],
        *,
        exact: bool,
        label: str,
        lower_bound=(1, 0),
        word_radius: Callable[[object], int] | None = None,
        ball_enumerator: Callable[[object], list] | None = None,
        spec: dict | None = None,
    ):
        self.model = model
        self._evaluator = evaluator
        self.exact = exact
        self.label = label
        self.lower_bound = (as_scalar(lower_bound[0]), as_scalar(lower_bound[1]))
        if not self.lower_bound[0] > 0:
            raise ValidationError("lower-bound coefficient must be positive")
        self._word_radius = word_radius
        self._ball_enumerator = ball_enumerator
        self.spec = spec if spec is not None else {"family": "custom", "label": label}
        self._memo: dict[GroupElement, object] = {}
        self._lock = threading.Lock()

    def __call__(self, g: GroupElement):
        try:
            return self._memo[g]
        except KeyError:
            pass
        self.model._check(g)
        v = as_scalar(self._evaluator(g))
        with self._lock:
            self._memo.setdefault(g, v)
        return v

    def __repr__(self):
        return f"LengthFunction({self.label})"

    def word_radius(self, R) -> int:
        """A word-length radius W with B_R contained in the word ball of radius W."""
        if self._word_radius is not None:
            return self._word_radius(R)
        c_low, b = self.lower_bound
        w = (as_scalar(R) + b) / c_low
        return max(0, math.floor(float(w.value) + w.tol) if isinstance(w, Approx) else math.floor(w))

    def ball(self, R, cap: int | None = None) -> list[GroupElement]:
        """``B_R = {g : l(g) <= R}`` in canonical (word length, payload) order."""
        R = as_scalar(R)
        if self._ball_enumerator is not None:
            return self.model.sorted(self._ball_enumerator(R))
        candidates = word_ball(self.model, self.word_radius(R), cap=cap)
        c_low, b = self.lower_bound
        out = []
        for g in candidates:
            v = self(g)
            if self._word_radius is None and v < c_low * self.model.word_length(g) - b:
                raise PreconditionError(f"lower bound of {self.label} is unsound at {self.model.format(g)}", witness=g)
            if v <= R:
                out.append(g)
        return out

    def approx(self, tol: float = DEFAULT_TAU) -> "LengthFunction":
        """The same function with every value demoted to :class:`Approx`."""
        return LengthFunction(
            self.model,
            lambda g: to_approx(self(g), tol),
            exact=False,
            label=self.label,
            lower_bound=self.lower_bound,
            word_radius=self._word_radius,
            ball_enumerator=self._ball_enumerator,
            spec=self.spec,
        )


def _scalar_param(x, name: str):
    x = as_scalar(x)
    if not (x >= 0 and x < 1):
        raise DomainError(f"{name} must lie in [0, 1), got {format_scalar(x)}")
    return x


def _is_standard_generating_set(model: GroupModel, gens) -> bool:
    return model.kind in ("free", "free_abelian") and set(gens) == set(model.generators)


def _symmetrize(model: GroupModel, weights: Mapping) -> dict[GroupElement, object]:
    out: dict[GroupElement, object] = {}
    for s, w in weights.items():
        s = model.element(s)
        w = as_scalar(w)
        if s == model.identity:
            raise ValidationError("the identity cannot carry a weight")
        if not w > 0:
            raise ValidationError(f"weight of {model.format(s)} must be positive")
        out[s] = w
    for s, w in list(out.items()):
        inv = model.inverse(s)
        if inv in out and out[inv] != w:
            raise ValidationError(f"weights of {model.format(s)} and its inverse differ")
        out.setdefault(inv, w)
    return out


def word_length(model: GroupModel) -> LengthFunction:
    """Standard word length in the model's generators."""
    lf = weighted_word_length(model, {s: 1 for s in model.generators})
    lf.label = f"word[{model.model_id}]"
    lf.spec = {"family": "word", "group": model.to_spec()}
    return lf


def weighted_word_length(model: GroupModel, weights: Mapping) -> LengthFunction:
    """Minimal total weight of a word over the weighted generators.

    For the standard generators of a free or free abelian group the Cayley
    graph is a tree (resp. a product of lines) and the value has a closed
    form.  Any other generating set is evaluated by shortest paths on the
    one-vertex quotient graph.
    """
    w = _symmetrize(model, weights)
    spec = {
        "family": "word",
        "group": model.to_spec(),
        "weights": {model.format(s): format_scalar(v) for s, v in sorted(w.items(), key=lambda kv: model.sort_key(kv[0]))},
    }
    exact = all(is_exact(v) for v in w.values())
    c_low = min(w.values())
    label = f"weighted[{model.model_id}]"
    if _is_standard_generating_set(model, w):
        if model.kind == "free":
            letter_w = {}
            for s, v in w.items():
                letter_w[s.payload[0]] = v

            def evaluate(g):
                return sum((letter_w[x] for x in g.payload), Fraction(0))
        else:
            axis_w = [w[model.base_generators[i]] for i in range(model.rank)]

            def evaluate(g):
                return sum((abs(x) * axis_w[i] for i, x in enumerate(g.payload)), Fraction(0))

        return LengthFunction(model, evaluate, exact=exact, label=label, lower_bound=(c_low, 0), spec=spec)

    from .ggraph import QuotientGGraph, based_length_function

    qg = QuotientGGraph.cayley(model, {s: v for s, v in w.items() if model.sort_key(s) <= model.sort_key(model.inverse(s))})
    lf = based_length_function(qg)
    lf.label = label
    lf.spec = spec
    return lf


def epsilon_deformation(eps) -> LengthFunction:
    """``l(n) = |n| + eps^|n|`` for ``n != 0`` on Z."""
    eps = _scalar_param(eps, "eps")

    def evaluate(g):
        n = abs(g.payload[0])
        return Fraction(0) if n == 0 else n + eps**n

    return LengthFunction(
        Z, evaluate, exact=is_exact(eps), label=f"eps_deform({format_scalar(eps)})",
        lower_bound=(1, 0), spec={"family": "eps_deform", "eps": format_scalar(eps)},
    )


def additive_eps(eps) -> LengthFunction:
    """``l(0) = 0`` and ``l(n) = |n| + eps`` otherwise, on Z."""
    eps = _scalar_param(eps, "eps")

    def evaluate(g):
        n = abs(g.payload[0])
        return Fraction(0) if n == 0 else n + eps

    return LengthFunction(
        Z, evaluate, exact=is_exact(eps), label=f"additive_eps({format_scalar(eps)})",
        lower_bound=(1, 0), spec={"family": "additive_eps", "eps": format_scalar(eps)},
    )


def log_deformation(base: LengthFunction | None = None, tol: float = DEFAULT_TAU) -> LengthFunction:
    """``l(g) = ln(base(g) + 1)`` for an integer-valued base (default: word length on Z)."""
    if base is None:
        base = word_length(Z)

    def evaluate(g):
        v = base(g)
        if not (is_exact(v) and v.denominator == 1):
            raise ValidationError(f"log deformation needs an integer-valued base, got {format_scalar(v)} at {base.model.format(g)}")
        return Approx(math.log(int(v) + 1), tol)

    def ball(R):
        R = float(R.value) if isinstance(R, Approx) else float(R)
        if R > 60:
            raise ValidationError("log-deformation ball radius too large to enumerate")
        # ln(b + 1) <= R  <=>  b <= e^R - 1, then filter to undo float rounding
        limit = math.ceil(math.exp(R) - 1)
        return [g for g in base.ball(limit) if math.log(int(base(g)) + 1) <= R + tol]

    return LengthFunction(
        base.model, evaluate, exact=False, label=f"log({base.label})",
        ball_enumerator=ball, spec={"family": "log", "base": base.spec},
    )


def table_length(model: GroupModel, table: Mapping, fallback: LengthFunction) -> LengthFunction:
    """Override finitely many values of ``fallback``."""
    t: dict[GroupElement, object] = {}
    for g, v in table.items():
        t[model.element(g)] = as_scalar(v)
    for g, v in t.items():
        inv = model.inverse(g)
        if inv not in t or t[inv] != v:
            raise ValidationError(f"table is not symmetric at {model.format(g)}")
    if model.identity in t and t[model.identity] != 0:
        raise ValidationError("table must send the identity to 0")

    def evaluate(g):
        return t[g] if g in t else fallback(g)

    def ball(R):
        inside = [g for g in fallback.ball(R) if g not in t]
        inside += [g for g, v in t.items() if v <= R]
        return inside

    exact = fallback.exact and all(is_exact(v) for v in t.values())
    spec = {
        "family": "table",
        "table": {model.format(g): format_scalar(v) for g, v in sorted(t.items(), key=lambda kv: model.sort_key(kv[0]))},
        "fallback": fallback.spec,
    }
    return LengthFunction(model, evaluate, exact=exact, label=f"table({fallback.label})", ball_enumerator=ball, spec=spec)
