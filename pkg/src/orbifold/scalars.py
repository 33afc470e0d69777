"""Scalar fields: the rationals, real quadratic extensions Q(sqrt d), and complex doubles."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def _squarefree(d: int) -> bool:
    if d in (0, 1):
        return False
    d = abs(d)
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class QuadraticNumber:
    """Exact element a + b*sqrt(d) of Q(sqrt d)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 5):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise ValueError(f"cannot mix Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Rational)):
            return QuadraticNumber(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.a * o.a + self.d * self.b * o.b,
                               self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt %d)" % self.d)
        c = self.conjugate()
        return QuadraticNumber(c.a / n, c.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = QuadraticNumber(1, 0, self.d)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __complex__(self):
        return complex(float(self))

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return format_scalar(self)


# ---------------------------------------------------------------------------
# Fields


@dataclass(frozen=True)
class Field:
    """Base class. Concrete fields: :class:`Rationals`, :class:`QuadraticField`,
    :class:`ComplexFloats`."""

    @property
    def exact(self) -> bool:
        return True

    @property
    def name(self) -> str:
        raise NotImplementedError

    def __call__(self, x):
        raise NotImplementedError

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def eq(self, x, y) -> bool:
        return self(x) == self(y)

    def is_zero(self, x) -> bool:
        return self(x) == 0

    def inverse(self, x):
        x = self(x)
        if self.is_zero(x):
            raise ZeroDivisionError("scalar is not invertible")
        return 1 / x if not isinstance(x, QuadraticNumber) else x.inverse()

    def characteristic_divides(self, n: int) -> bool:
        return n == 0


@dataclass(frozen=True)
class Rationals(Field):
    @property
    def name(self) -> str:
        return "Q"

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, QuadraticNumber):
            if x.b != 0:
                raise ValueError(f"{x} is not rational")
            return x.a
        if isinstance(x, str):
            return parse_scalar(x, self)
        if isinstance(x, float):
            raise TypeError("refusing to coerce a float into Q; pass a string or Fraction")
        return Fraction(x)


@dataclass(frozen=True)
class QuadraticField(Field):
    d: int = 5

    def __post_init__(self):
        if not _squarefree(self.d) or self.d < 0:
            raise ValueError(f"d={self.d} must be a positive square-free integer != 1")

    @property
    def name(self) -> str:
        return f"Q(sqrt:{self.d})"

    @property
    def sqrt_d(self) -> QuadraticNumber:
        return QuadraticNumber(0, 1, self.d)

    def __call__(self, x):
        if isinstance(x, QuadraticNumber):
            if x.d != self.d:
                raise ValueError(f"{x!r} does not live in {self.name}")
            return x
        if isinstance(x, str):
            return parse_scalar(x, self)
        if isinstance(x, float):
            raise TypeError("refusing to coerce a float into an exact field")
        return QuadraticNumber(x, 0, self.d)


@dataclass(frozen=True)
class ComplexFloats(Field):
    epsilon: float = 1e-9

    @property
    def exact(self) -> bool:
        return False

    @property
    def name(self) -> str:
        return "C64"

    def __call__(self, x):
        if isinstance(x, str):
            return parse_scalar(x, self)
        if isinstance(x, (list, tuple)):
            return complex(float(x[0]), float(x[1]))
        return complex(x)

    def eq(self, x, y) -> bool:
        x, y = self(x), self(y)
        scale = max(1.0, abs(x), abs(y))
        return abs(x - y) <= self.epsilon * scale

    def is_zero(self, x) -> bool:
        return abs(self(x)) <= self.epsilon


@dataclass(frozen=True)
class CharacteristicTwo(Rationals):
    """Flags arithmetic as characteristic 2 for the purpose of refusing to
    invert even integers. Only used to exercise failure paths; no GF(2)
    arithmetic is implemented."""

    @property
    def name(self) -> str:
        return "char2"

    def characteristic_divides(self, n: int) -> bool:
        return n % 2 == 0


Q = Rationals()


def field_from_name(name: str, epsilon: float = 1e-9) -> Field:
    """Parse ``"Q"``, ``"Q(sqrt:5)"`` or ``"C64"``."""
    name = name.strip()
    if name == "Q":
        return Q
    if name == "C64":
        return ComplexFloats(epsilon)
    m = re.fullmatch(r"Q\(sqrt:?\s*(-?\d+)\)", name)
    if m:
        return QuadraticField(int(m.group(1)))
    raise ValueError(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# Serialization

# the rational part is only taken when a sign follows it, so "2*sqrt(5)" is 0+2√5
_QUAD_RE = re.compile(
    r"^(?:(?P<a>[+-]?\d+(?:/\d+)?)(?=[+-]))?(?P<sign>[+-])?(?:(?P<b>\d+(?:/\d+)?)\*?)?sqrt\((?P<d>\d+)\)$"
)


def parse_scalar(s, field: Field):
    """Parse "p/q", "a+b*sqrt(d)", or a [re, im] pair into ``field``."""
    if isinstance(s, (list, tuple)):
        if len(s) != 2:
            raise ValueError(f"complex scalars need [re, im], got {s!r}")
        return field(complex(float(s[0]), float(s[1])))
    if isinstance(s, int):
        return field(s)
    if isinstance(s, float):
        if field.exact:
            raise ValueError(f"float {s!r} given for exact field {field.name}")
        return field(s)
    if not isinstance(s, str):
        raise ValueError(f"cannot parse scalar {s!r}")
    text = s.replace(" ", "")
    if "sqrt" not in text:
        if field.exact:
            return field(Fraction(text))
        return complex(Fraction(text))
    m = _QUAD_RE.match(text)
    if not m or m.group("d") is None:
        raise ValueError(f"cannot parse scalar {s!r}")
    a = Fraction(m.group("a") or 0)
    b = Fraction(m.group("b") or 1)
    if m.group("sign") == "-":
        b = -b
    d = int(m.group("d"))
    if isinstance(field, QuadraticField):
        if d != field.d:
            raise ValueError(f"{s!r} is not in {field.name}")
        return QuadraticNumber(a, b, d)
    if not field.exact:
        return complex(float(a) + float(b) * math.sqrt(d))
    raise ValueError(f"{s!r} needs a quadratic field, got {field.name}")


def format_scalar(x):
    """Inverse of :func:`parse_scalar` (JSON-ready)."""
    if isinstance(x, QuadraticNumber):
        if x.b == 0:
            return str(x.a)
        if x.a == 0:
            return f"{x.b}*sqrt({x.d})"
        sign = "+" if x.b > 0 else "-"
        return f"{x.a}{sign}{abs(x.b)}*sqrt({x.d})"
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float):
        return [x, 0.0]
    return str(Fraction(x))
