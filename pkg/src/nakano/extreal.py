"""Extended reals with a total order and no NaN.

``ExtReal`` is a ``float`` subclass so it drops into numeric code, but the
operations that would produce NaN under IEEE rules (``0 * inf``,
``inf - inf``, ``inf / inf``) raise instead of propagating silently.
"""

from __future__ import annotations

import math

__all__ = ["ExtReal", "INF", "IndeterminateForm"]


class IndeterminateForm(ArithmeticError):
    """Raised for 0·∞, ∞ − ∞ and ∞/∞."""


def _check(x: float, op: str) -> "ExtReal":
    if math.isnan(x):
        raise IndeterminateForm(f"indeterminate form in {op}")
    return ExtReal(x)


class ExtReal(float):
    __slots__ = ()

    def __new__(cls, x=0.0):
        value = float(x)
        if math.isnan(value):
            raise ValueError("ExtReal does not admit NaN")
        return super().__new__(cls, value)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self)

    def __add__(self, other):
        return _check(float(self) + float(other), "+")

    __radd__ = __add__

    def __sub__(self, other):
        return _check(float(self) - float(other), "-")

    def __rsub__(self, other):
        return _check(float(other) - float(self), "-")

    def __mul__(self, other):
        a, b = float(self), float(other)
        if (a == 0.0 and math.isinf(b)) or (b == 0.0 and math.isinf(a)):
            raise IndeterminateForm("0·∞ is not defined")
        return ExtReal(a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = float(other)
        if b == 0.0:
            raise ZeroDivisionError("division by zero")
        return _check(float(self) / b, "/")

    def __rtruediv__(self, other):
        if float(self) == 0.0:
            raise ZeroDivisionError("division by zero")
        return _check(float(other) / float(self), "/")

    def __neg__(self):
        return ExtReal(-float(self))

    def __abs__(self):
        return ExtReal(abs(float(self)))

    def __repr__(self) -> str:
        if math.isinf(self):
            return "inf" if self > 0 else "-inf"
        return float.__repr__(self)

    __str__ = __repr__


INF = ExtReal(math.inf)
