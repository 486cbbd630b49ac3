"""Exact coefficient fields: the rationals and prime fields F_p.

Scalars are stored as python-flint objects (``fmpq`` for Q, ``nmod`` for
F_p) so that the same arithmetic operators work for both and matrices can be
handed to flint's exact elimination routines without conversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from flint import fmpq, nmod


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """Q when ``p == 0``, otherwise the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``"Q"`` or ``"Fp:<prime>"``."""
        t = text.strip()
        if t in ("Q", "QQ"):
            return cls(0)
        if t.startswith("Fp:"):
            try:
                p = int(t[3:])
            except ValueError:
                raise ValueError(f"bad field descriptor {text!r}") from None
            return cls(p)
        raise ValueError(f"bad field descriptor {text!r}")

    @property
    def label(self) -> str:
        return "Q" if self.p == 0 else f"Fp:{self.p}"

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x):
        """Coerce an int, Fraction, fmpq or nmod into this field."""
        if self.p == 0:
            if isinstance(x, fmpq):
                return x
            if isinstance(x, Fraction):
                return fmpq(x.numerator, x.denominator)
            if isinstance(x, nmod):
                raise TypeError("cannot coerce an F_p element into Q")
            return fmpq(int(x))
        if isinstance(x, nmod):
            if x.modulus() != self.p:
                raise TypeError(f"element of F_{x.modulus()} used in F_{self.p}")
            return x
        if isinstance(x, (Fraction, fmpq)):
            num, den = (x.numerator, x.denominator) if isinstance(x, Fraction) else (int(x.p), int(x.q))
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes in F_{self.p}")
            return nmod(num, self.p) / nmod(den, self.p)
        return nmod(int(x), self.p)

    @cached_property
    def zero(self):
        return self(0)

    @cached_property
    def one(self):
        return self(1)

    def __repr__(self):
        return f"Field({self.label})"


QQ = Field(0)


def to_python(x):
    """Plain python value of a field scalar (Fraction/int for Q, int for F_p)."""
    if isinstance(x, nmod):
        return int(x)
    if isinstance(x, fmpq):
        if x.q == 1:
            return int(x.p)
        return Fraction(int(x.p), int(x.q))
    return x


class FieldElem:
    """A scalar tagged with its field. Mixing fields raises ``TypeError``."""

    __slots__ = ("field", "value")

    def __init__(self, value, field: Field = QQ):
        self.field = field
        self.value = field(value)

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise TypeError(f"mixed fields {self.field.label} and {other.field.label}")
            return other.value
        return self.field(other)

    def __add__(self, other):
        return FieldElem(self.value + self._other(other), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.value - self._other(other), self.field)

    def __rsub__(self, other):
        return FieldElem(self._other(other) - self.value, self.field)

    def __mul__(self, other):
        return FieldElem(self.value * self._other(other), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o == 0:
            raise ZeroDivisionError("division by zero")
        return FieldElem(self.value / o, self.field)

    def __neg__(self):
        return FieldElem(-self.value, self.field)

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field.one, self.field) / self

    def __eq__(self, other):
        try:
            return self.value == self._other(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.field, to_python(self.value)))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElem({to_python(self.value)}, {self.field.label})"
