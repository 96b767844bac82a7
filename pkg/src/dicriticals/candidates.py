"""Assemble concrete rational functions from certificates and named equations.

A certificate fixes exponents; this module turns them into an actual quotient
of polynomials once every referenced hypersurface has a concrete equation.
Bundles with exponent zero on a target divisor become nonconstant ratios of
two distinct equations of the same class, which is why bindings may list more
than one equation per divisor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .charts import draw_fraction
from .errors import SolverError
from .poly import Polynomial
from .ratfunc import RationalFunction
from .solver import (
    LastDicriticalCertificate,
    ProfileCertificate,
    SingleDicriticalCertificate,
    SupportCertificate,
)


@dataclass(frozen=True)
class Bindings:
    """Names of the concrete equations backing each certificate ingredient."""

    primary: str | None = None  # numerator hypercurvette of the target divisor
    secondary: str | None = None  # denominator hypercurvette of the target divisor
    bundles: Mapping[int, tuple[str, ...]] = field(default_factory=dict)
    specials: Mapping[int, str] = field(default_factory=dict)
    pole: str | None = None  # extra hypercurvette carrying the pole power
    later: Mapping[int, str] = field(default_factory=dict)
    rows: Mapping[int, str] = field(default_factory=dict)  # valuation-row equations
    parts: Mapping[int, "Bindings"] = field(default_factory=dict)

    def to_json(self) -> dict:
        data: dict = {}
        if self.primary:
            data["primary"] = self.primary
        if self.secondary:
            data["secondary"] = self.secondary
        if self.bundles:
            data["bundles"] = {str(k): list(v) for k, v in sorted(self.bundles.items())}
        if self.specials:
            data["specials"] = {str(k): v for k, v in sorted(self.specials.items())}
        if self.pole:
            data["pole"] = self.pole
        if self.later:
            data["later"] = {str(k): v for k, v in sorted(self.later.items())}
        if self.rows:
            data["rows"] = {str(k): v for k, v in sorted(self.rows.items())}
        if self.parts:
            data["parts"] = {str(k): v.to_json() for k, v in sorted(self.parts.items())}
        return data

    @classmethod
    def from_json(cls, data: dict) -> "Bindings":
        return cls(
            primary=data.get("primary"),
            secondary=data.get("secondary"),
            bundles={int(k): tuple(v) for k, v in data.get("bundles", {}).items()},
            specials={int(k): v for k, v in data.get("specials", {}).items()},
            pole=data.get("pole"),
            later={int(k): v for k, v in data.get("later", {}).items()},
            rows={int(k): v for k, v in data.get("rows", {}).items()},
            parts={int(k): cls.from_json(v) for k, v in data.get("parts", {}).items()},
        )


def _lookup(equations: Mapping[str, Polynomial], name: str | None, what: str) -> Polynomial:
    if not name:
        raise SolverError(f"missing binding for {what}")
    if name not in equations:
        raise SolverError(f"missing equation {name!r} for {what}")
    return equations[name]


def _bundle_factor(
    equations: Mapping[str, Polynomial],
    bindings: Bindings,
    index: int,
    exponent: int,
    force_nonconstant: bool,
    num: Polynomial,
    den: Polynomial,
) -> tuple[Polynomial, Polynomial]:
    names = bindings.bundles.get(index, ())
    if exponent == 0 and not force_nonconstant:
        return num, den
    if exponent == 0:
        if len(names) < 2:
            raise SolverError(
                f"divisor {index} needs a nonconstant bundle with total exponent zero; "
                "bind two distinct equations"
            )
        first = _lookup(equations, names[0], f"bundle {index}")
        second = _lookup(equations, names[1], f"bundle {index}")
        if first == second:
            raise SolverError(f"bundle {index} needs two distinct equations")
        return num * first, den * second
    poly = _lookup(equations, names[0] if names else None, f"bundle {index}")
    if exponent > 0:
        return num * poly**exponent, den
    return num, den * poly ** (-exponent)


def build_support(
    cert: SupportCertificate,
    equations: Mapping[str, Polynomial],
    bindings: Bindings,
) -> RationalFunction:
    """Product of hypercurvette bundles realizing a support certificate."""
    variables = _ring(equations)
    num = Polynomial.one(variables)
    den = Polynomial.one(variables)
    for index, exponent in enumerate(cert.exponents, start=1):
        force = index in cert.needs_split
        num, den = _bundle_factor(equations, bindings, index, exponent, force, num, den)
    return RationalFunction(num, den)


def build_last(
    cert: LastDicriticalCertificate,
    equations: Mapping[str, Polynomial],
    bindings: Bindings,
) -> RationalFunction:
    """Numerator and denominator of the controlled-last-divisor candidate."""
    variables = _ring(equations)
    primary = _lookup(equations, bindings.primary, "primary hypercurvette")
    secondary = _lookup(equations, bindings.secondary, "secondary hypercurvette")
    if primary == secondary:
        raise SolverError("primary and secondary hypercurvettes must be distinct")
    num = primary**cert.degree
    den = secondary**cert.degree
    for index, exponent in enumerate(cert.bundle_exponents, start=1):
        num, den = _bundle_factor(equations, bindings, index, exponent, False, num, den)
    for j in cert.special_owners:
        exponent = cert.special_exponents[j]
        if exponent < 0:
            raise SolverError("special hypersurfaces carry honest positive powers")
        poly = _lookup(equations, bindings.specials.get(j), f"special hypersurface {j}")
        den = den * poly**exponent
    return RationalFunction(num, den)


def build_parts_last(cert, equations, bindings) -> tuple[Polynomial, Polynomial]:
    rf = build_last(cert, equations, bindings)
    return rf.num, rf.den


def build_single(
    cert: SingleDicriticalCertificate,
    equations: Mapping[str, Polynomial],
    bindings: Bindings,
) -> RationalFunction:
    """Twist the base candidate by later hypercurvette powers plus a pole power."""
    f, g = build_parts_last(cert.base, equations, bindings)
    twist = Polynomial.one(f.variables)
    for j in sorted(cert.later_exponents):
        k = cert.later_exponents[j]
        if k < 1:
            raise SolverError("later hypercurvette powers must be positive")
        twist = twist * _lookup(equations, bindings.later.get(j), f"later hypercurvette {j}") ** k
    if cert.pole_power < 1:
        raise SolverError("the pole power must be a positive honest power")
    pole = _lookup(equations, bindings.pole, "pole hypercurvette")
    return RationalFunction(f * twist, g * twist + pole**cert.pole_power)


@dataclass(frozen=True)
class MobiusTwist:
    target: int
    a: Fraction
    b: Fraction


def mobius(h: RationalFunction, a: Fraction, b: Fraction) -> RationalFunction:
    """(h - a)/(h - b); generic constants keep statuses and degrees intact."""
    if a == b:
        raise SolverError("the two twist constants must be distinct")
    return RationalFunction(h.num - a * h.den, h.num - b * h.den)


def build_profile(
    cert: ProfileCertificate,
    equations: Mapping[str, Polynomial],
    bindings: Bindings,
    rng: random.Random,
) -> tuple[RationalFunction, list[MobiusTwist]]:
    """Product of twisted single-target candidates, one per prescribed divisor."""
    result: RationalFunction | None = None
    twists: list[MobiusTwist] = []
    for j in sorted(cert.parts):
        part_bindings = bindings.parts.get(j)
        if part_bindings is None:
            raise SolverError(f"missing bindings for profile part {j}")
        h = build_single(cert.parts[j], equations, part_bindings)
        a = draw_fraction(rng)
        b = draw_fraction(rng)
        while b == a:
            b = draw_fraction(rng)
        twists.append(MobiusTwist(j, a, b))
        twisted = mobius(h, a, b)
        result = twisted if result is None else result * twisted
    assert result is not None
    return result, twists


def _ring(equations: Mapping[str, Polynomial]) -> tuple[str, ...]:
    rings = {p.variables for p in equations.values()}
    if len(rings) != 1:
        raise SolverError("equations must all live in one coordinate ring")
    return rings.pop()


def build_candidate(
    cert,
    equations: Mapping[str, Polynomial],
    bindings: Bindings,
    rng: random.Random | None = None,
):
    """Dispatch on the certificate kind; profiles additionally return their twists."""
    if isinstance(cert, SupportCertificate):
        return build_support(cert, equations, bindings)
    if isinstance(cert, LastDicriticalCertificate):
        return build_last(cert, equations, bindings)
    if isinstance(cert, SingleDicriticalCertificate):
        return build_single(cert, equations, bindings)
    if isinstance(cert, ProfileCertificate):
        if rng is None:
            raise SolverError("building a profile needs a random source for the twist constants")
        return build_profile(cert, equations, bindings, rng)
    raise SolverError(f"unknown certificate type {type(cert).__name__}")
