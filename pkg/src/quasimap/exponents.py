"""Exact arithmetic for real exponents and angles.

Exponents of the generalized series (and interior angles divided by pi) are
represented as

    q + sum_g  c_g * value(g)

with ``q`` and the ``c_g`` exact rationals and ``g`` drawn from a registry of
declared irrational generators (sqrt2, golden, ...).  Equality is decided
symbolically on this representation; the total order falls back to numerics,
escalating to 50-digit arithmetic when double precision cannot separate two
symbolically distinct values.
"""

from __future__ import annotations

from fractions import Fraction
import math

import mpmath

from .errors import AmbiguousExponentOrder, UnknownClass

_MP_DPS = 50

# name -> (float value, lazy mpmath value factory)
_GENERATORS: dict[str, float] = {}
_GENERATOR_MP: dict[str, "mpmath.mpf"] = {}


def declare_generator(name: str, value) -> None:
    """Register an irrational generator by name.

    ``value`` may be a float, an mpmath number, or a decimal string.  Strings
    and mpmath values are kept at 50 digits for tie-breaking comparisons.
    """
    with mpmath.workdps(_MP_DPS):
        mpval = mpmath.mpf(value) if not isinstance(value, str) else mpmath.mpf(value)
    _GENERATORS[name] = float(mpval)
    _GENERATOR_MP[name] = mpval


def generator_value(name: str) -> float:
    return _GENERATORS[name]


def _builtin_generators():
    with mpmath.workdps(_MP_DPS):
        declare_generator("sqrt2", mpmath.sqrt(2))
        declare_generator("sqrt3", mpmath.sqrt(3))
        declare_generator("sqrt5", mpmath.sqrt(5))
        declare_generator("golden", (1 + mpmath.sqrt(5)) / 2)


_builtin_generators()


class Exponent:
    """Exact real number q + sum c_g * g over the declared generators.

    Immutable.  Supports +, -, scalar multiplication by rationals, division by
    integers, exact equality and a numeric total order.
    """

    __slots__ = ("rational", "irrational", "_value")

    def __init__(self, rational=0, irrational=None):
        self.rational = Fraction(rational)
        irr = {}
        if irrational:
            for name, coeff in irrational.items():
                if name not in _GENERATORS:
                    raise KeyError(f"undeclared irrational generator {name!r}")
                c = Fraction(coeff)
                if c != 0:
                    irr[name] = c
        self.irrational = irr
        self._value = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def coerce(cls, x) -> "Exponent":
        if isinstance(x, Exponent):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, str):
            return parse_exponent(x)
        raise TypeError(f"cannot coerce {x!r} to an exact exponent (floats are not exact)")

    @classmethod
    def generator(cls, name: str, coeff=1) -> "Exponent":
        return cls(0, {name: coeff})

    # -- numerics --------------------------------------------------------------

    def value(self) -> float:
        if self._value is None:
            v = float(self.rational)
            for name, c in self.irrational.items():
                v += float(c) * _GENERATORS[name]
            self._value = v
        return self._value

    def value_mp(self):
        with mpmath.workdps(_MP_DPS):
            v = mpmath.mpf(self.rational.numerator) / self.rational.denominator
            for name, c in self.irrational.items():
                v += (mpmath.mpf(c.numerator) / c.denominator) * _GENERATOR_MP[name]
            return v

    # -- predicates ------------------------------------------------------------

    def is_rational(self) -> bool:
        return not self.irrational

    def is_integer(self) -> bool:
        return not self.irrational and self.rational.denominator == 1

    def is_zero(self) -> bool:
        return not self.irrational and self.rational == 0

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = Exponent.coerce(other)
        irr = dict(self.irrational)
        for name, c in other.irrational.items():
            irr[name] = irr.get(name, Fraction(0)) + c
        return Exponent(self.rational + other.rational, irr)

    __radd__ = __add__

    def __neg__(self):
        return Exponent(-self.rational, {n: -c for n, c in self.irrational.items()})

    def __sub__(self, other):
        return self + (-Exponent.coerce(other))

    def __rsub__(self, other):
        return Exponent.coerce(other) + (-self)

    def __mul__(self, scalar):
        s = Fraction(scalar)
        return Exponent(self.rational * s, {n: c * s for n, c in self.irrational.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = Fraction(scalar)
        return self * (1 / s)

    # -- comparisons -----------------------------------------------------------

    def _key(self):
        return (self.rational, tuple(sorted(self.irrational.items())))

    def __eq__(self, other):
        if not isinstance(other, (Exponent, int, Fraction)):
            return NotImplemented
        return self._key() == Exponent.coerce(other)._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        other = Exponent.coerce(other)
        if self == other:
            return False
        a, b = self.value(), other.value()
        if abs(a - b) > 1e-9 * max(1.0, abs(a), abs(b)):
            return a < b
        # escalate: symbolically distinct but numerically close in doubles
        am, bm = self.value_mp(), other.value_mp()
        if abs(am - bm) < mpmath.mpf(10) ** (-_MP_DPS + 10):
            raise AmbiguousExponentOrder(f"cannot order {self} vs {other}")
        return am < bm

    def __le__(self, other):
        other = Exponent.coerce(other)
        return self == other or self < other

    def __gt__(self, other):
        return Exponent.coerce(other) < self

    def __ge__(self, other):
        other = Exponent.coerce(other)
        return self == other or other < self

    # -- io ----------------------------------------------------------------------

    def __repr__(self):
        parts = []
        if self.rational != 0 or not self.irrational:
            parts.append(str(self.rational))
        for name, c in sorted(self.irrational.items()):
            parts.append(f"{c}*{name}" if c != 1 else name)
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "rational": [self.rational.numerator, self.rational.denominator],
            "irrational_multiples": {
                n: [c.numerator, c.denominator] for n, c in sorted(self.irrational.items())
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "Exponent":
        p, q = data["rational"]
        irr = {n: Fraction(c[0], c[1]) for n, c in data.get("irrational_multiples", {}).items()}
        return cls(Fraction(p, q), irr)


def parse_exponent(text: str) -> Exponent:
    """Parse '1/2', '3', 'sqrt2', 'golden', '2*sqrt2', '1/2+sqrt2'."""
    total = Exponent(0)
    for raw in text.replace(" ", "").split("+"):
        if not raw:
            continue
        if "*" in raw:
            coeff, name = raw.split("*", 1)
            total = total + Exponent.generator(name, Fraction(coeff))
        elif raw in _GENERATORS:
            total = total + Exponent.generator(raw)
        else:
            total = total + Exponent(Fraction(raw))
    return total


ZERO = Exponent(0)
ONE = Exponent(1)


# -- angles ----------------------------------------------------------------------
#
# Interior angles are carried as (angle / pi), so the same exact representation
# serves both exponents and angles.  A plain float means "numeric angle of
# undeclared rationality".

RATIONAL_PI_MULTIPLE = "RATIONAL_PI_MULTIPLE"
IRRATIONAL_PI_MULTIPLE = "IRRATIONAL_PI_MULTIPLE"


def rationality_class(angle_over_pi) -> str:
    """Decide rationality of angle/pi symbolically; floats raise UnknownClass."""
    if isinstance(angle_over_pi, float):
        raise UnknownClass("angle given as a bare float; declare it exactly")
    a = Exponent.coerce(angle_over_pi)
    if a.is_rational():
        return RATIONAL_PI_MULTIPLE
    # A nonzero combination of declared irrational generators with at most a
    # rational offset is taken as irrational; generators are declared as such.
    return IRRATIONAL_PI_MULTIPLE


def angle_radians(angle_over_pi) -> float:
    a = Exponent.coerce(angle_over_pi)
    return a.value() * math.pi
