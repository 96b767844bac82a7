"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial in variables ``(x, y, z, ...)`` is stored as a map from exponent
tuples to nonzero ``Fraction`` coefficients.  Everything is exact; no floating
point is used anywhere.

GCD strategy.  Monomial content is split off directly.  The remaining parts
are first checked for coprimality by specializing all but one variable at
integer points where the leading coefficient survives: the degree of the
specialized univariate gcd bounds the degree of the true gcd in that variable
from above, so an all-zero certificate proves coprimality.  Only when a
certificate cannot be obtained does the full primitive pseudo-remainder
recursion run.  This keeps the common case (reduced fractions staying
reduced under substitution) cheap without ever trusting a random draw.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Mapping, Sequence

from .errors import PolynomialError

Exponents = tuple[int, ...]

# Deterministic evaluation points for coprimality certificates.
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _as_fraction(value) -> Fraction:
    if isinstance(value, bool):
        raise PolynomialError("boolean is not a valid coefficient")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise PolynomialError(f"coefficient must be int or Fraction, got {type(value).__name__}")


def _term_key(item):
    exps = item[0]
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponents, Fraction] | None = None):
        vs = tuple(variables)
        if len(set(vs)) != len(vs):
            raise PolynomialError("duplicate variable names")
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            e = tuple(int(v) for v in exps)
            if len(e) != len(vs):
                raise PolynomialError("exponent tuple length does not match variable count")
            if any(v < 0 for v in e):
                raise PolynomialError("negative exponent")
            c = clean.get(e, Fraction(0)) + _as_fraction(coeff)
            if c:
                clean[e] = c
            else:
                clean.pop(e, None)
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Polynomial":
        vs = tuple(variables)
        return cls(vs, {(0,) * len(vs): _as_fraction(value)})

    @classmethod
    def one(cls, variables: Sequence[str]) -> "Polynomial":
        return cls.constant(variables, 1)

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        vs = tuple(variables)
        if name not in vs:
            raise PolynomialError(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in vs)
        return cls(vs, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Exponents, coeff=1) -> "Polynomial":
        return cls(variables, {tuple(exps): _as_fraction(coeff)})

    # -- basic queries -------------------------------------------------------

    def terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms sorted by (total degree, exponent tuple); canonical order."""
        return sorted(self._terms.items(), key=_term_key)

    def coefficient(self, exps: Exponents) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolynomialError("polynomial is not constant")
        zero_exps = (0,) * len(self.variables)
        return self._terms.get(zero_exps, Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def _var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise PolynomialError(f"unknown variable {name!r}") from None

    def degree_in(self, name: str) -> int:
        idx = self._var_index(name)
        if not self._terms:
            return -1
        return max(e[idx] for e in self._terms)

    def order_in(self, name: str) -> int:
        """Smallest exponent of ``name`` over all terms (the vanishing order)."""
        idx = self._var_index(name)
        if not self._terms:
            raise PolynomialError("vanishing order of the zero polynomial is undefined")
        return min(e[idx] for e in self._terms)

    def monomial_content(self) -> Exponents:
        """Componentwise minimum exponent vector (all zero for the zero polynomial)."""
        if not self._terms:
            return (0,) * len(self.variables)
        mins = None
        for e in self._terms:
            mins = e if mins is None else tuple(min(a, b) for a, b in zip(mins, e))
        return mins

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise PolynomialError("polynomials live in different variable rings")
            return other
        return Polynomial.constant(self.variables, other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + self._coerce(other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = _as_fraction(other)
            return Polynomial(self.variables, {e: k * c for e, k in self._terms.items()})
        other = self._coerce(other)
        terms: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.variables, terms)

    def __rmul__(self, other) -> "Polynomial":
        return self.__mul__(other)

    def __pow__(self, power: int) -> "Polynomial":
        if not isinstance(power, int) or power < 0:
            raise PolynomialError("polynomial powers must be nonnegative integers")
        result = Polynomial.one(self.variables)
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                return self == Polynomial.constant(self.variables, other)
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        return hash((self.variables, frozenset(self._terms.items())))

    # -- substitution --------------------------------------------------------

    def substitute(
        self,
        mapping: Mapping[str, "Polynomial | Fraction | int"],
        variables: Sequence[str] | None = None,
    ) -> "Polynomial":
        """Substitute polynomials or constants for variables.

        With ``variables=None`` the result lives in the same ring and any
        unmapped variable is substituted by itself.  Otherwise the result
        lives in the given ring and every variable that actually occurs must
        be covered by the mapping.
        """
        target = self.variables if variables is None else tuple(variables)
        images: dict[str, Polynomial] = {}
        for name, value in mapping.items():
            self._var_index(name)
            if isinstance(value, Polynomial):
                if value.variables != target:
                    raise PolynomialError("substitution image lives in the wrong ring")
                images[name] = value
            else:
                images[name] = Polynomial.constant(target, value)
        if variables is None:
            for name in self.variables:
                if name not in images:
                    images[name] = Polynomial.variable(target, name)
        else:
            for idx, name in enumerate(self.variables):
                if name not in images and any(e[idx] for e in self._terms):
                    raise PolynomialError(f"variable {name!r} occurs but has no image")

        powers: dict[str, list[Polynomial]] = {n: [Polynomial.one(target)] for n in images}

        def power(name: str, k: int) -> Polynomial:
            cache = powers[name]
            while len(cache) <= k:
                cache.append(cache[-1] * images[name])
            return cache[k]

        result = Polynomial.zero(target)
        for exps, coeff in self._terms.items():
            term = Polynomial.constant(target, coeff)
            for idx, e in enumerate(exps):
                if e:
                    term = term * power(self.variables[idx], e)
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Fraction | int]) -> Fraction:
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            value = coeff
            for idx, e in enumerate(exps):
                if e:
                    value *= _as_fraction(point[self.variables[idx]]) ** e
            total += value
        return total

    def set_to_zero(self, name: str) -> "Polynomial":
        """Substitute 0 for one variable (keeps the ring)."""
        idx = self._var_index(name)
        return Polynomial(self.variables, {e: c for e, c in self._terms.items() if e[idx] == 0})

    def divide_by_monomial(self, exps: Exponents) -> "Polynomial":
        exps = tuple(exps)
        terms = {}
        for e, c in self._terms.items():
            shifted = tuple(a - b for a, b in zip(e, exps))
            if any(v < 0 for v in shifted):
                raise PolynomialError("monomial does not divide every term")
            terms[shifted] = c
        return Polynomial(self.variables, terms)

    # -- division ------------------------------------------------------------

    def exact_div(self, divisor: "Polynomial") -> "Polynomial | None":
        """Exact quotient self/divisor, or None when it does not divide."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise PolynomialError("division by the zero polynomial")
        if self.is_zero():
            return self
        lead_d, lc_d = max(divisor._terms.items(), key=_term_key)
        rem = dict(self._terms)
        quot: dict[Exponents, Fraction] = {}
        while rem:
            lead_r, lc_r = max(rem.items(), key=_term_key)
            q_exp = tuple(a - b for a, b in zip(lead_r, lead_d))
            if any(v < 0 for v in q_exp):
                return None
            q_coeff = lc_r / lc_d
            quot[q_exp] = quot.get(q_exp, Fraction(0)) + q_coeff
            for e, c in divisor._terms.items():
                t = tuple(a + b for a, b in zip(e, q_exp))
                nv = rem.get(t, Fraction(0)) - c * q_coeff
                if nv:
                    rem[t] = nv
                else:
                    rem.pop(t, None)
        return Polynomial(self.variables, quot)

    def as_univariate(self, name: str) -> dict[int, "Polynomial"]:
        """View as a univariate polynomial in ``name`` with polynomial coefficients."""
        idx = self._var_index(name)
        coeffs: dict[int, dict[Exponents, Fraction]] = {}
        for e, c in self._terms.items():
            stripped = tuple(0 if k == idx else v for k, v in enumerate(e))
            coeffs.setdefault(e[idx], {})[stripped] = c
        return {d: Polynomial(self.variables, t) for d, t in coeffs.items()}

    @classmethod
    def from_univariate(cls, name: str, coeffs: Mapping[int, "Polynomial"]) -> "Polynomial":
        result = None
        for d, poly in coeffs.items():
            idx = poly._var_index(name)
            shifted = {}
            for e, c in poly._terms.items():
                lst = list(e)
                lst[idx] += d
                shifted[tuple(lst)] = c
            part = cls(poly.variables, shifted)
            result = part if result is None else result + part
        if result is None:
            raise PolynomialError("empty coefficient map")
        return result

    # -- rendering and serialization ------------------------------------------

    def render(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exps, coeff in self.terms():
            factors = []
            for name, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}**{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not pieces:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self.render()!r})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.variables),
            "terms": [
                {"exps": list(e), "num": c.numerator, "den": c.denominator}
                for e, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        from .jsonio import require_int

        vs = tuple(str(v) for v in data["vars"])
        terms: dict[Exponents, Fraction] = {}
        for item in data["terms"]:
            exps = tuple(require_int(v, "exponent") for v in item["exps"])
            num = require_int(item["num"], "numerator")
            den = require_int(item["den"], "denominator")
            terms[exps] = terms.get(exps, Fraction(0)) + Fraction(num, den)
        return cls(vs, terms)


# -- rational normalization -------------------------------------------------


def rational_content(polys: Iterable[Polynomial]) -> Fraction:
    """Positive rational c such that dividing by c makes all coefficients
    integers with overall gcd 1.  Zero polynomials are ignored."""
    num_gcd = 0
    den_lcm = 1
    for p in polys:
        for _, c in p._terms.items():
            num_gcd = int_gcd(num_gcd, c.numerator)
            den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
    if num_gcd == 0:
        return Fraction(1)
    return Fraction(num_gcd, den_lcm)


def primitive_part(p: Polynomial) -> Polynomial:
    """Scale to integer coefficients with gcd 1 and positive trailing term."""
    if p.is_zero():
        return p
    scaled = p * (1 / rational_content([p]))
    first = scaled.terms()[0]
    if first[1] < 0:
        scaled = -scaled
    return scaled


# -- univariate integer gcd (primitive pseudo-remainder sequence) -----------


def _int_list_primitive(coeffs: list[int]) -> list[int]:
    g = 0
    for c in coeffs:
        g = int_gcd(g, c)
    if g in (0, 1):
        out = list(coeffs)
    else:
        out = [c // g for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    if out and out[-1] < 0:
        out = [-c for c in out]
    return out


def univariate_int_gcd(a: list[int], b: list[int]) -> list[int]:
    """GCD of two integer coefficient lists (index = degree), primitive output."""
    a = _int_list_primitive(list(a))
    b = _int_list_primitive(list(b))
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        # pseudo-remainder of a by b
        r = list(a)
        lc_b = b[-1]
        while len(r) >= len(b):
            lc_r = r[-1]
            shift = len(r) - len(b)
            r = [c * lc_b for c in r]
            for i, c in enumerate(b):
                r[shift + i] -= lc_r * c
            while r and r[-1] == 0:
                r.pop()
            if not r:
                break
        a, b = b, _int_list_primitive(r)
    return a


def _to_int_list(coeffs: list[Fraction]) -> list[int]:
    den = 1
    for c in coeffs:
        den = den * c.denominator // int_gcd(den, c.denominator)
    return [int(c * den) for c in coeffs]


def univariate_gcd_degree(a: list[Fraction], b: list[Fraction]) -> int:
    g = univariate_int_gcd(_to_int_list(a), _to_int_list(b))
    return len(g) - 1 if g else -1


# -- multivariate gcd --------------------------------------------------------


def _specialize_univariate(p: Polynomial, name: str, point: Mapping[str, int]) -> list[Fraction]:
    idx = p._var_index(name)
    coeffs: dict[int, Fraction] = {}
    for exps, coeff in p._terms.items():
        value = coeff
        for k, e in enumerate(exps):
            if k == idx or not e:
                continue
            value *= Fraction(point[p.variables[k]]) ** e
        coeffs[exps[idx]] = coeffs.get(exps[idx], Fraction(0)) + value
    deg = max(coeffs) if coeffs else -1
    out = [coeffs.get(d, Fraction(0)) for d in range(deg + 1)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _certified_coprime(p: Polynomial, q: Polynomial, common: list[str]) -> bool:
    """True only when specialization certificates prove gcd(p, q) constant.

    Soundness: if the leading coefficient of p in v survives the point, the
    degree in v of any common factor is bounded by the specialized gcd degree.
    """
    for v in common:
        deg_v = p.degree_in(v)
        others = [w for w in p.variables if w != v]
        done = False
        for attempt in range(8):
            point = {w: _PRIMES[(k + attempt) % len(_PRIMES)] + attempt for k, w in enumerate(others)}
            pl = _specialize_univariate(p, v, point)
            if len(pl) - 1 != deg_v:
                continue  # leading coefficient vanished; try another point
            ql = _specialize_univariate(q, v, point)
            if not ql:
                continue
            if univariate_gcd_degree(pl, ql) > 0:
                return False
            done = True
            break
        if not done:
            return False
    return True


def _coeff_gcd(polys: Iterable[Polynomial]) -> Polynomial:
    result = None
    for p in polys:
        result = p if result is None else polynomial_gcd(result, p)
        if result.is_constant() and not result.is_zero():
            break
    if result is None:
        raise PolynomialError("empty gcd fold")
    return primitive_part(result)


def _pseudo_rem(a: dict[int, Polynomial], b: dict[int, Polynomial]) -> dict[int, Polynomial]:
    db = max(b)
    lc_b = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lc_r = r[dr]
        new: dict[int, Polynomial] = {}
        for e, c in r.items():
            new[e] = c * lc_b
        for e, c in b.items():
            t = e + dr - db
            cur = new.get(t)
            term = lc_r * c
            new[t] = (cur - term) if cur is not None else -term
        r = {e: c for e, c in new.items() if not c.is_zero()}
    return r


def _univ_primitive(u: dict[int, Polynomial]) -> dict[int, Polynomial]:
    if not u:
        return u
    cont = _coeff_gcd(u.values())
    if cont.is_constant():
        scale = 1 / rational_content(list(u.values()))
        return {e: c * scale for e, c in u.items()}
    out = {}
    for e, c in u.items():
        q = c.exact_div(cont)
        if q is None:
            raise PolynomialError("content does not divide a coefficient")
        out[e] = q
    return out


def _prs_gcd(p: Polynomial, q: Polynomial, main: str) -> Polynomial:
    pu = p.as_univariate(main)
    qu = q.as_univariate(main)
    cont_p = _coeff_gcd(pu.values())
    cont_q = _coeff_gcd(qu.values())
    pp = _univ_primitive(pu)
    qq = _univ_primitive(qu)
    cont = polynomial_gcd(cont_p, cont_q)
    a, b = (pp, qq) if max(pp) >= max(qq) else (qq, pp)
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _univ_primitive(r)
    core = Polynomial.from_univariate(main, a)
    return primitive_part(cont * core)


def polynomial_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Greatest common divisor, normalized to a primitive integer polynomial."""
    if p.variables != q.variables:
        raise PolynomialError("polynomials live in different variable rings")
    if p.is_zero():
        return primitive_part(q)
    if q.is_zero():
        return primitive_part(p)
    mono_p = p.monomial_content()
    mono_q = q.monomial_content()
    shared = tuple(min(a, b) for a, b in zip(mono_p, mono_q))
    ps = p.divide_by_monomial(mono_p)
    qs = q.divide_by_monomial(mono_q)
    mono = Polynomial.monomial(p.variables, shared)
    if ps.is_constant() or qs.is_constant():
        return mono
    common = [v for v in p.variables if ps.degree_in(v) > 0 and qs.degree_in(v) > 0]
    if not common:
        return mono
    if _certified_coprime(ps, qs, common):
        return mono
    main = min(common, key=lambda v: min(ps.degree_in(v), qs.degree_in(v)))
    core = _prs_gcd(ps, qs, main)
    return primitive_part(mono * core)
