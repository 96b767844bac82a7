"""Exact rational functions: reduced quotients of sparse polynomials.

Reduction always runs through ``polynomial_gcd``, so a freshly built
quotient has coprime numerator and denominator.  The canonical scaling
makes all coefficients integers with overall gcd 1 and gives the
denominator a positive trailing (grlex-minimal) coefficient, which keeps
serialized output byte-stable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .errors import PolynomialError
from .poly import Polynomial, polynomial_gcd, rational_content


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, reduce: bool = True):
        if den is None:
            den = Polynomial.one(num.variables)
        if num.variables != den.variables:
            raise PolynomialError("numerator and denominator live in different rings")
        if den.is_zero():
            raise PolynomialError("zero denominator")
        if num.is_zero():
            num = Polynomial.zero(num.variables)
            den = Polynomial.one(num.variables)
        elif reduce:
            g = polynomial_gcd(num, den)
            if not g.is_constant():
                qn = num.exact_div(g)
                qd = den.exact_div(g)
                if qn is None or qd is None:
                    raise PolynomialError("gcd failed to divide; internal error")
                num, den = qn, qd
        num, den = _canonical_pair(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.num.variables

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "RationalFunction":
        return cls(Polynomial.constant(variables, value))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.variables != self.variables:
                raise PolynomialError("rational functions live in different rings")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return RationalFunction.constant(self.variables, other)

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + self._coerce(other)

    def __mul__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other.num.is_zero():
            raise PolynomialError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return self._coerce(other) / self

    def __pow__(self, power: int) -> "RationalFunction":
        if not isinstance(power, int):
            raise PolynomialError("powers must be integers")
        if power >= 0:
            return RationalFunction(self.num**power, self.den**power, reduce=False)
        if self.num.is_zero():
            raise PolynomialError("negative power of zero")
        return RationalFunction(self.den ** (-power), self.num ** (-power), reduce=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (RationalFunction, Polynomial, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- structure -----------------------------------------------------------

    def substitute(
        self,
        mapping: Mapping[str, Polynomial | Fraction | int],
        variables: Sequence[str] | None = None,
    ) -> "RationalFunction":
        num = self.num.substitute(mapping, variables)
        den = self.den.substitute(mapping, variables)
        if den.is_zero():
            raise PolynomialError("substitution sent the denominator to zero")
        return RationalFunction(num, den)

    def render(self) -> str:
        if self.den == Polynomial.one(self.variables):
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"

    def __repr__(self) -> str:
        return f"RationalFunction({self.render()!r})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        return cls(Polynomial.from_json(data["num"]), Polynomial.from_json(data["den"]))


def _canonical_pair(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    content = rational_content([num, den])
    if content != 1:
        num = num * (1 / content)
        den = den * (1 / content)
    trailing = den.terms()[0][1]
    if trailing < 0:
        num, den = -num, -den
    return num, den
