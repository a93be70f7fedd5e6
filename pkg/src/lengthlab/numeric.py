"""Two-mode scalars: exact rationals and tolerance-bearing floats.

Exact values are plain :class:`fractions.Fraction` instances (ints are
accepted wherever a scalar is expected and treated as exact).  Approximate
values are :class:`Approx`, a float paired with a comparison tolerance.
Mixing the two promotes to :class:`Approx`.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

from .errors import ModeError, ValidationError

DEFAULT_TAU = 1e-9


class Approx:
    """A float compared up to an absolute tolerance ``tol``.

    ``a == b`` iff ``|a - b| <= tol``; ``<`` and ``>`` are strict beyond the
    tolerance band.  Arithmetic keeps the larger tolerance of the operands.
    """

    __slots__ = ("value", "tol")

    def __init__(self, value, tol: float = DEFAULT_TAU):
        self.value = float(value)
        self.tol = float(tol)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Approx):
            return other.value, other.tol
        if isinstance(other, (int, float, Rational)):
            return float(other), 0.0
        return None

    def _binop(self, other, fn):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Approx(fn(self.value, o[0]), max(self.tol, o[1]))

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binop(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binop(other, lambda a, b: b * a)

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __neg__(self):
        return Approx(-self.value, self.tol)

    def __abs__(self):
        return Approx(abs(self.value), self.tol)

    def __float__(self):
        return self.value

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        tol = max(self.tol, o[1])
        diff = self.value - o[0]
        if abs(diff) <= tol:
            return 0
        return -1 if diff < 0 else 1

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __ne__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c != 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    # tolerance-equality is not transitive, so hashing by value would lie
    __hash__ = None

    def __repr__(self):
        return f"Approx({self.value!r}, tol={self.tol!r})"


Scalar = Union[Fraction, Approx]


class Ordering(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def as_scalar(x) -> Scalar:
    """Normalise ints to Fraction, floats to Approx, pass the rest through."""
    if isinstance(x, Approx):
        return x
    if isinstance(x, bool):
        raise ValidationError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Approx(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise ValidationError(f"not a scalar: {x!r}")


def to_approx(x, tol: float = DEFAULT_TAU) -> Approx:
    if isinstance(x, Approx):
        return Approx(x.value, max(x.tol, tol))
    return Approx(float(x), tol)


def compare(a, b, tol: float | None = None) -> Ordering:
    """Total order on exact values, tolerance-collapsed order otherwise."""
    a, b = as_scalar(a), as_scalar(b)
    if is_exact(a) and is_exact(b):
        return Ordering((a > b) - (a < b))
    a = to_approx(a) if tol is None else to_approx(a, tol)
    b = to_approx(b) if tol is None else to_approx(b, tol)
    return Ordering(a._cmp(b))


def to_float(x) -> float:
    return float(x.value) if isinstance(x, Approx) else float(x)


_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_FRACTION_RE = re.compile(r"^[+-]?\d+\s*/\s*\d+$")


def parse_scalar(text: str, tol: float = DEFAULT_TAU) -> Scalar:
    """Parse ``"3/2"``, ``"1.5"`` (both exact) or ``"~0.693147"`` (approx)."""
    s = str(text).strip()
    if s.startswith("~"):
        try:
            return Approx(float(s[1:]), tol)
        except ValueError:
            raise ValidationError(f"bad approximate scalar {text!r}") from None
    if _FRACTION_RE.match(s) or _DECIMAL_RE.match(s):
        try:
            return Fraction(s.replace(" ", ""))
        except ZeroDivisionError:
            raise ValidationError(f"zero denominator in {text!r}") from None
    raise ValidationError(f"bad scalar {text!r}")


def format_scalar(x) -> str:
    x = as_scalar(x)
    if isinstance(x, Approx):
        return "~" + repr(x.value)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def common_denominator(values: Sequence[Fraction]) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return d


@dataclass(frozen=True)
class Membership:
    status: str  # "yes" | "no" | "unknown"
    coefficients: tuple[int, ...] | None = None

    def __bool__(self):
        return self.status == "yes"


def submonoid_member(v, basis: Sequence, depth_cap: int = 10_000) -> Membership:
    """Decide whether ``v`` is a non-negative integer combination of ``basis``.

    Works on the common-denominator lattice: everything is scaled to
    integers and a bounded knapsack over multiplicities ``0..depth_cap`` is
    run.  Returns ``unknown`` only when the multiplicity cap cut off part of
    the search space below ``v``.
    """
    values = [as_scalar(b) for b in basis]
    v = as_scalar(v)
    if not is_exact(v) or not all(is_exact(b) for b in values):
        raise ModeError("submonoid membership requires exact scalars")
    if any(b <= 0 for b in values):
        raise ValidationError("basis entries must be positive")
    if depth_cap < 0:
        raise ValidationError("depth_cap must be non-negative")
    k = len(values)
    if v == 0:
        return Membership("yes", (0,) * k)
    if v < 0 or k == 0:
        return Membership("no")
    den = common_denominator([v, *values])
    target = int(v * den)
    steps = [int(b * den) for b in values]

    truncated = False
    reach: dict[int, tuple[int, ...]] = {0: ()}
    for a in steps:
        limit = target // a
        if limit > depth_cap:
            truncated = True
            limit = depth_cap
        nxt: dict[int, tuple[int, ...]] = {}
        for s in sorted(reach):
            coeffs = reach[s]
            for j in range(limit + 1):
                t = s + j * a
                if t > target:
                    break
                if t not in nxt:
                    nxt[t] = coeffs + (j,)
        reach = nxt
    if target in reach:
        return Membership("yes", reach[target])
    return Membership("unknown" if truncated else "no")
