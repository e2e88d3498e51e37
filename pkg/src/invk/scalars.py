"""Exact scalars: rationals by default, with an optional prime-field type.

Every coefficient in the package is either a :class:`fractions.Fraction`
or a :class:`ModP` element.  Plain ``int`` values are accepted on input and
promoted with :func:`as_scalar`; floats are rejected outright.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["Fraction", "ModP", "as_scalar", "inverse", "parse_rational", "format_scalar"]


class ModP:
    """Element of the prime field GF(p)."""

    __slots__ = ("value", "p")

    def __init__(self, value, p: int):
        if isinstance(value, ModP):
            value = value.value
        elif isinstance(value, Fraction):
            value = value.numerator * pow(value.denominator, -1, p)
        self.value = int(value) % p
        self.p = p

    def _coerce(self, other) -> "ModP | None":
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError(f"mixing GF({self.p}) and GF({other.p})")
            return other
        if isinstance(other, (int, Fraction)):
            return ModP(other, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else ModP(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else ModP(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else ModP(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else ModP(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.value == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return ModP(self.value * pow(o.value, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o / self

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self.value == o.value

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"ModP({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


def as_scalar(x, modulus: int | None = None):
    """Promote ``x`` (int, str, Fraction, ModP) to an exact scalar."""
    if isinstance(x, float):
        raise TypeError("floating point scalars are not allowed")
    if isinstance(x, str):
        x = parse_rational(x)
    if modulus is not None:
        return ModP(x, modulus)
    if isinstance(x, ModP):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def inverse(c):
    if isinstance(c, int):
        return Fraction(1, c)
    return 1 / c


def parse_rational(text: str) -> Fraction:
    """Parse ``"3"``, ``"-2/3"`` into a Fraction; decimals are refused."""
    s = text.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    num, _, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if den else 1
    except ValueError:
        raise ValueError(f"not an exact rational: {text!r}") from None
    if d <= 0:
        raise ValueError(f"denominator must be positive: {text!r}")
    return Fraction(n, d)


def format_scalar(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)
