"""Exact rational functions: quotients of multivariate polynomials over Q(i).

Canonical form: gcd(num, den) = 1, denominator monic in graded-lex order,
unused variables pruned, zero represented as 0/1.  All operations return
normalized values, so structural equality is mathematical equality.
"""

from __future__ import annotations

from typing import Dict, Mapping

from .poly import Polynomial, divexact, poly_gcd
from .scalars import GaussianRational


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial, _normalized: bool = False):
        if not _normalized:
            num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    # -- construction ---------------------------------------------------------

    @staticmethod
    def from_poly(p: Polynomial) -> "RationalFunction":
        return RationalFunction(p, Polynomial.one(), _normalized=True)

    @staticmethod
    def const(c) -> "RationalFunction":
        return RationalFunction.from_poly(Polynomial.const(c))

    @staticmethod
    def variable(name: str) -> "RationalFunction":
        return RationalFunction.from_poly(Polynomial.variable(name))

    @staticmethod
    def zero() -> "RationalFunction":
        return RationalFunction.from_poly(Polynomial.zero())

    @staticmethod
    def one() -> "RationalFunction":
        return RationalFunction.from_poly(Polynomial.one())

    # -- queries ----------------------------------------------------------------

    @property
    def variables(self) -> tuple:
        return tuple(sorted(set(self.num.variables) | set(self.den.variables)))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.num.is_one and self.den.is_one

    def constant_value(self) -> GaussianRational:
        if self.variables:
            raise ValueError("not a constant rational function")
        return self.num.constant_value() / self.den.constant_value()

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other) -> "RationalFunction":
        o = _coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "RationalFunction":
        o = _coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        o = _coerce(other)
        if o.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return _coerce(other) / self

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            if self.is_zero:
                raise ZeroDivisionError("negative power of zero")
            return RationalFunction(self.den, self.num) ** (-n)
        out = RationalFunction.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "RationalFunction":
        return self ** (-1)

    def derivative(self, var: str) -> "RationalFunction":
        # Quotient rule; normalization cancels the common factors.
        return RationalFunction(
            self.num.derivative(var) * self.den - self.num * self.den.derivative(var),
            self.den * self.den,
        )

    def substitute(self, mapping: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        """Evaluate at var -> RationalFunction; unmapped variables persist.

        Raises ZeroDivisionError when the substituted denominator vanishes
        identically.
        """
        num = _poly_substitute(self.num, mapping)
        den = _poly_substitute(self.den, mapping)
        if den.is_zero:
            raise ZeroDivisionError("substitution makes the denominator vanish")
        return num / den

    # -- equality / display -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, GaussianRational, Polynomial)):
            other = _coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        return rf_str(self)

    def __repr__(self):
        return f"RationalFunction<{rf_str(self)}>"


def _coerce(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction.from_poly(x)
    return RationalFunction.const(GaussianRational.coerce(x))


def _normalize(num: Polynomial, den: Polynomial):
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    if num.is_zero:
        return Polynomial.zero(), Polynomial.one()
    if den.is_constant:
        inv = den.constant_value().inverse()
        return num.scale(inv), Polynomial.one()
    g = poly_gcd(num, den)
    if not g.is_one:
        qn = divexact(num, g)
        qd = divexact(den, g)
        assert qn is not None and qd is not None
        num, den = qn, qd
    lc = den.leading_coeff()
    if not lc.is_one:
        inv = lc.inverse()
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


def _poly_substitute(p: Polynomial, mapping: Mapping[str, RationalFunction]) -> RationalFunction:
    out = RationalFunction.zero()
    images = []
    for v in p.variables:
        if v in mapping:
            images.append(_coerce(mapping[v]))
        else:
            images.append(RationalFunction.variable(v))
    # Cache powers per variable to keep repeated exponents cheap.
    powers: Dict[tuple, RationalFunction] = {}
    for e, c in p.terms.items():
        term = RationalFunction.const(c)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in powers:
                    powers[key] = images[i] ** k
                term = term * powers[key]
        out = out + term
    return out


def rf_normalize(f: RationalFunction) -> RationalFunction:
    """Idempotent re-normalization (values are already canonical)."""
    return RationalFunction(f.num, f.den)


def rf_str(f: RationalFunction) -> str:
    """Canonical serialization; parses back to the same value."""
    from .poly import poly_str

    if f.den.is_one:
        return poly_str(f.num)
    return f"({poly_str(f.num)})/({poly_str(f.den)})"
