"""Exact coefficient arithmetic for the deformation parameter q.

Scalars are rational functions of a single indeterminate q with Gaussian
rational coefficients.  Everything is kept in a canonical reduced form
(numerator and denominator coprime, denominator monic) so that equality of
scalars is a structural comparison, never a numerical one.  The q -> 1
specialisation needed by the contraction machinery is provided by
``ScalarQ.limit_at_one``, which raises ``PoleAtOne`` on a genuine pole.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class DivisionByZero(ZeroDivisionError):
    """Raised when dividing by an exactly-zero scalar."""


class PoleAtOne(ArithmeticError):
    """Raised when specialising a scalar at q = 1 hits a pole."""


_RationalLike = Union[int, Fraction]


class GaussianRational:
    """A number a + b*i with exact rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re: _RationalLike = 0, im: _RationalLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if not norm:
            raise DivisionByZero("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        imag = "i" if abs(self.im) == 1 else f"{abs(self.im)}*i"
        if not self.re:
            return imag if self.im > 0 else f"-{imag}"
        op = "+" if self.im > 0 else "-"
        return f"{self.re}{op}{imag}"


_G_ZERO = GaussianRational(0)
_G_ONE = GaussianRational(1)


class PolyQ:
    """Polynomial in q over the Gaussian rationals, coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, GaussianRational) else GaussianRational(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("PolyQ is immutable")

    @staticmethod
    def constant(c) -> "PolyQ":
        return PolyQ([c])

    @staticmethod
    def variable() -> "PolyQ":
        return PolyQ([0, 1])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial assigned -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else _G_ZERO

    def scale(self, c: GaussianRational) -> "PolyQ":
        return PolyQ([a * c for a in self.coeffs])

    def monic(self) -> "PolyQ":
        if self.is_zero():
            return self
        return self.scale(_G_ONE / self.lead)

    def __add__(self, other: "PolyQ") -> "PolyQ":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return PolyQ(out)

    def __neg__(self) -> "PolyQ":
        return PolyQ([-c for c in self.coeffs])

    def __sub__(self, other: "PolyQ") -> "PolyQ":
        return self + (-other)

    def __mul__(self, other: "PolyQ") -> "PolyQ":
        if self.is_zero() or other.is_zero():
            return PolyQ()
        out = [_G_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for j, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for k, b in enumerate(other.coeffs):
                out[j + k] = out[j + k] + a * b
        return PolyQ(out)

    def __divmod__(self, other: "PolyQ"):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [_G_ZERO] * max(len(rem) - len(other.coeffs) + 1, 0)
        dlead = other.lead
        dlen = len(other.coeffs)
        while len(rem) >= dlen:
            c = rem[-1] / dlead
            shift = len(rem) - dlen
            quo[shift] = c
            for k, b in enumerate(other.coeffs):
                rem[shift + k] = rem[shift + k] - c * b
            while rem and rem[-1].is_zero():
                rem.pop()
        return PolyQ(quo), PolyQ(rem)

    def __floordiv__(self, other: "PolyQ") -> "PolyQ":
        return divmod(self, other)[0]

    def __mod__(self, other: "PolyQ") -> "PolyQ":
        return divmod(self, other)[1]

    def gcd(self, other: "PolyQ") -> "PolyQ":
        """Monic greatest common divisor."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def evaluate(self, value: GaussianRational) -> GaussianRational:
        acc = _G_ZERO
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def conjugate(self) -> "PolyQ":
        """Complex-conjugate the coefficients; q itself stays fixed."""
        return PolyQ([c.conjugate() for c in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, PolyQ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"PolyQ({list(self.coeffs)!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            parts.append(_poly_term_str(c, k, first=not parts))
        return "".join(parts)


def _poly_term_str(c: GaussianRational, power: int, first: bool) -> str:
    if c.im:
        if c.re:
            body = f"({c})"
            sign = "+"
        else:
            body = str(GaussianRational(0, abs(c.im)))
            sign = "+" if c.im > 0 else "-"
    else:
        sign = "+" if c.re > 0 else "-"
        body = str(abs(c.re))
    if power:
        qpart = "q" if power == 1 else f"q^{power}"
        if body == "1":
            body = qpart
        else:
            body = f"{body}*{qpart}"
    if first:
        return body if sign == "+" else f"-{body}"
    return f"{sign}{body}"


_P_ZERO = PolyQ()
_P_ONE = PolyQ.constant(1)


class ScalarQ:
    """Rational function of q in canonical reduced form.

    Invariant: numerator and denominator are coprime and the denominator is
    monic, so two equal scalars are structurally identical.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        if not isinstance(num, PolyQ):
            num = PolyQ.constant(num if isinstance(num, GaussianRational) else GaussianRational(num))
        if not isinstance(den, PolyQ):
            den = PolyQ.constant(den if isinstance(den, GaussianRational) else GaussianRational(den))
        if den.is_zero():
            raise DivisionByZero("scalar with zero denominator")
        if num.is_zero():
            num, den = _P_ZERO, _P_ONE
        elif den.degree == 0:
            lead = den.lead
            if lead != _G_ONE:
                num = num.scale(_G_ONE / lead)
            den = _P_ONE
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.lead
            den = den.monic()
            num = num.scale(_G_ONE / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarQ is immutable")

    @staticmethod
    def _coerce(value) -> "ScalarQ":
        if isinstance(value, ScalarQ):
            return value
        if isinstance(value, (int, Fraction, GaussianRational)):
            return ScalarQ(value)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.coeffs == (_G_ONE,) and self.den.coeffs == (_G_ONE,)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ScalarQ(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarQ(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ScalarQ(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("scalar division by zero")
        return ScalarQ(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if self.is_zero():
                raise DivisionByZero("zero scalar to a negative power")
            return (ONE / self) ** (-exponent)
        out = ONE
        base = self
        k = exponent
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "ScalarQ":
        """Complex conjugation; the deformation parameter q is treated as real."""
        return ScalarQ(self.num.conjugate(), self.den.conjugate())

    def limit_at_one(self) -> GaussianRational:
        """Value at q = 1; a zero denominator here is a genuine pole."""
        dval = self.den.evaluate(_G_ONE)
        if dval.is_zero():
            raise PoleAtOne(f"pole at q = 1 in {self}")
        return self.num.evaluate(_G_ONE) / dval

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"ScalarQ({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        mono = self._monomial_str()
        if mono is not None:
            return mono
        num_terms = sum(1 for c in self.num.coeffs if not c.is_zero())
        num_str = str(self.num) if num_terms == 1 else f"({self.num})"
        return f"{num_str}/({self.den})"

    def _monomial_str(self):
        # c*q^m over q^k prints as a single power c*q^(m-k).
        if any(not c.is_zero() for c in self.den.coeffs[:-1]):
            return None
        nonzero = [k for k, c in enumerate(self.num.coeffs) if not c.is_zero()]
        if len(nonzero) != 1:
            return None
        m = nonzero[0]
        c = self.num.coeffs[m]
        power = m - self.den.degree
        if power == 0:
            return str(c)
        body = str(c)
        if c.im and c.re:
            body = f"({body})"
        qpart = f"q^{power}" if power != 1 else "q"
        if body == "1":
            return qpart
        if body == "-1":
            return f"-{qpart}"
        return f"{body}*{qpart}"


ZERO = ScalarQ(0)
ONE = ScalarQ(1)
I = ScalarQ(GaussianRational(0, 1))
Q = ScalarQ(PolyQ.variable())


def sc(value) -> ScalarQ:
    """Coerce an int, Fraction, or GaussianRational to a ScalarQ."""
    out = ScalarQ._coerce(value)
    if out is NotImplemented:
        raise TypeError(f"cannot coerce {value!r} to ScalarQ")
    return out


def qpow(k: int) -> ScalarQ:
    """The scalar q**k (k may be negative)."""
    return Q ** k
