"""Sparse multivariate polynomials with exact rational coefficients.

Used by the moment-closure elimination, where every solved moment becomes a
polynomial in the remaining search variables and coefficients must stay exact.
Variables are identified by integer ids handed out by the caller.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

# A monomial is a sorted tuple of (variable id, exponent) pairs with exponent > 0.
Monomial = tuple[tuple[int, int], ...]

_ONE: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged: dict[int, int] = dict(a)
    for var, exp in b:
        merged[var] = merged.get(var, 0) + exp
    return tuple(sorted(merged.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(exp for _, exp in m)


class Poly:
    """Immutable sparse polynomial over the rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        cleaned = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    cleaned[mono] = Fraction(coeff)
        self.terms: dict[Monomial, Fraction] = cleaned

    @staticmethod
    def constant(value: Rational | int) -> "Poly":
        value = Fraction(value)
        return Poly({_ONE: value}) if value else Poly()

    @staticmethod
    def variable(var_id: int) -> "Poly":
        return Poly({((var_id, 1),): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ONE in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(_ONE, Fraction(0))

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(_mono_degree(m) for m in self.terms)

    def variables(self) -> set[int]:
        out: set[int] = set()
        for mono in self.terms:
            out.update(var for var, _ in mono)
        return out

    def leading_coefficient(self) -> Fraction:
        """Coefficient of the largest monomial in (degree, id-tuple) order."""
        if not self.terms:
            return Fraction(0)
        lead = max(self.terms, key=lambda m: (_mono_degree(m), m))
        return self.terms[lead]

    def __add__(self, other: "Poly") -> "Poly":
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
        return Poly(terms)

    def __sub__(self, other: "Poly") -> "Poly":
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) - coeff
        return Poly(terms)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
        return Poly(terms)

    def scale(self, factor: Rational) -> "Poly":
        factor = Fraction(factor)
        if not factor:
            return Poly()
        return Poly({m: c * factor for m, c in self.terms.items()})

    def evaluate(self, values: dict[int, float]) -> float:
        """Evaluate with float variable values (exact for constants)."""
        total = 0.0
        for mono, coeff in self.terms.items():
            term = float(coeff)
            for var, exp in mono:
                term *= values[var] ** exp
            total += term
        return total

    def partial(self, values: dict[int, Fraction]) -> "Poly":
        """Substitute exact values for a subset of variables."""
        terms: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            factor = coeff
            rest = []
            for var, exp in mono:
                if var in values:
                    factor *= Fraction(values[var]) ** exp
                else:
                    rest.append((var, exp))
            key = tuple(rest)
            terms[key] = terms.get(key, Fraction(0)) + factor
        return Poly(terms)

    def evaluate_exact(self, values: dict[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            term = coeff
            for var, exp in mono:
                term *= values[var] ** exp
            total += term
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def format(self, names: dict[int, str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (_mono_degree(m), m)):
            coeff = self.terms[mono]
            factors = [
                names[var] + (f"^{exp}" if exp > 1 else "") for var, exp in mono
            ]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append("*".join([str(coeff)] + factors))
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Poly({self.format({v: f'x{v}' for v in self.variables()})})"


ZERO = Poly()
ONE = Poly.constant(1)
