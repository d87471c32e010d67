"""
Arithmetique exacte dans Q(sqrt(r)).

Les moments d'ordre impair d'un modele standardise par 1/sqrt(Var) et les
probabilites des lois d'appariement (qui melangent sqrt(n) et des
rationnels) s'ecrivent a + b*sqrt(r) avec a, b rationnels. Toutes les
identites de moments restent ainsi exactes.
"""

from decimal import Decimal, localcontext
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Union
import math


Number = Union[int, Fraction, "QuadraticSurd"]


def _squarefree_split(r: int) -> tuple[int, int]:
    """Ecrit r = s^2 * t avec t sans facteur carre.

    Division d'essai jusqu'a la racine cubique du reste: il reste alors au
    plus deux facteurs premiers, carre parfait ou produit sans carre.
    """
    s = 1
    t = 1
    rest = r
    d = 2
    while d * d * d <= rest:
        if rest % d == 0:
            e = 0
            while rest % d == 0:
                rest //= d
                e += 1
            s *= d ** (e // 2)
            if e % 2:
                t *= d
        d += 1 if d == 2 else 2
    root = isqrt(rest)
    if root * root == rest:
        return s * root, t
    return s, t * rest


class QuadraticSurd:
    """Nombre a + b*sqrt(r), a et b rationnels, r entier > 0 sans facteur carre."""

    __slots__ = ("a", "b", "r")

    def __init__(self, a=0, b=0, r: int = 1):
        a = Fraction(a)
        b = Fraction(b)
        r = int(r)
        if r < 0:
            raise ValueError(f"radicande negatif: {r}")
        if b == 0 or r == 0:
            b, r = Fraction(0), 1
        else:
            s, r = _squarefree_split(r)
            b *= s
            if r == 1:
                a, b = a + b, Fraction(0)
        self.a = a
        self.b = b
        self.r = r

    @classmethod
    def sqrt_of(cls, x) -> "QuadraticSurd":
        """sqrt(x) pour x rationnel >= 0: sqrt(p/q) = sqrt(p*q)/q."""
        x = Fraction(x)
        if x < 0:
            raise ValueError(f"racine d'un rationnel negatif: {x}")
        return cls(0, Fraction(1, x.denominator), x.numerator * x.denominator)

    @classmethod
    def coerce(cls, value: Number) -> "QuadraticSurd":
        if isinstance(value, QuadraticSurd):
            return value
        if isinstance(value, (Rational, int)):
            return cls(Fraction(value))
        raise TypeError(f"conversion impossible vers QuadraticSurd: {value!r}")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} n'est pas rationnel")
        return self.a

    def _common_radicand(self, other: "QuadraticSurd") -> int:
        if self.b == 0:
            return other.r
        if other.b == 0 or self.r == other.r:
            return self.r
        raise ValueError(f"radicandes incompatibles: {self.r} et {other.r}")

    # --- Arithmetique -----------------------------------------------------

    def __add__(self, other):
        try:
            other = QuadraticSurd.coerce(other)
        except TypeError:
            return NotImplemented
        r = self._common_radicand(other)
        return QuadraticSurd(self.a + other.a, self.b + other.b, r)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.r)

    def __sub__(self, other):
        try:
            other = QuadraticSurd.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = QuadraticSurd.coerce(other)
        except TypeError:
            return NotImplemented
        r = self._common_radicand(other)
        return QuadraticSurd(
            self.a * other.a + self.b * other.b * r,
            self.a * other.b + self.b * other.a,
            r,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticSurd":
        norm = self.a * self.a - self.b * self.b * self.r
        if norm == 0:
            raise ZeroDivisionError("inverse de zero dans Q(sqrt(r))")
        return QuadraticSurd(self.a / norm, -self.b / norm, self.r)

    def __truediv__(self, other):
        try:
            other = QuadraticSurd.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadraticSurd.coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QuadraticSurd(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # --- Signe et comparaisons -------------------------------------------

    def sign(self) -> int:
        """Signe exact de a + b*sqrt(r) (comparaison des carres)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        lhs = self.a * self.a
        rhs = self.b * self.b * self.r
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        return (self - QuadraticSurd.coerce(other)).sign()

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.r))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # --- Conversions -------------------------------------------------------

    def to_decimal(self, digits: int = 40) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits
            value = Decimal(self.a.numerator) / Decimal(self.a.denominator)
            if self.b != 0:
                value += (
                    Decimal(self.b.numerator) / Decimal(self.b.denominator)
                ) * Decimal(self.r).sqrt()
            return +value

    def __float__(self):
        if self.b == 0:
            return float(self.a)
        return float(self.to_decimal())

    def __repr__(self):
        if self.b == 0:
            return f"QuadraticSurd({self.a})"
        return f"QuadraticSurd({self.a} + {self.b}*sqrt({self.r}))"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({self.r})"
        return f"{self.a} + {self.b}*sqrt({self.r})"


def exact_sqrt(x) -> QuadraticSurd:
    """Raccourci pour QuadraticSurd.sqrt_of."""
    return QuadraticSurd.sqrt_of(x)


def is_close(value: Number, target: float, tol: float = 1e-12) -> bool:
    return math.isclose(float(value), target, rel_tol=0.0, abs_tol=tol)
