"""Multitrace polynomials: rational combinations of N^p * Tr(w1)*Tr(w2)*...

Coefficients are kept linear in named coupling symbols (every action we build
is a sum of couplings times fixed trace polynomials), which lets generated
relations print symbolically while closures substitute exact numeric values.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .words import CyclicWord, Word, moment_key

# A coefficient is a linear form in coupling symbols; key None is the constant.
CoeffMap = tuple[tuple[str | None, Fraction], ...]


def _normalize_coeff(parts: dict[str | None, Fraction]) -> CoeffMap:
    items = [(k, Fraction(v)) for k, v in parts.items() if v]
    items.sort(key=lambda kv: (kv[0] is not None, kv[0] or ""))
    return tuple(items)


@dataclass(frozen=True)
class LinCoeff:
    """Linear form c0 + sum_k c_k * symbol_k with rational c's."""

    parts: CoeffMap = ()

    @staticmethod
    def of(value: Rational) -> "LinCoeff":
        return LinCoeff(_normalize_coeff({None: Fraction(value)}))

    @staticmethod
    def of_symbol(symbol: str, coeff: Rational = 1) -> "LinCoeff":
        return LinCoeff(_normalize_coeff({symbol: Fraction(coeff)}))

    def __add__(self, other: "LinCoeff") -> "LinCoeff":
        merged = dict(self.parts)
        for k, v in other.parts:
            merged[k] = merged.get(k, Fraction(0)) + v
        return LinCoeff(_normalize_coeff(merged))

    def scale(self, factor: Rational) -> "LinCoeff":
        factor = Fraction(factor)
        return LinCoeff(_normalize_coeff({k: v * factor for k, v in self.parts}))

    def is_zero(self) -> bool:
        return not self.parts

    def evaluate(self, symbol_values: dict[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for k, v in self.parts:
            total += v if k is None else v * symbol_values[k]
        return total

    def constant_part(self) -> Fraction:
        for k, v in self.parts:
            if k is None:
                return v
        return Fraction(0)

    def symbol_part(self, symbol: str) -> Fraction:
        for k, v in self.parts:
            if k == symbol:
                return v
        return Fraction(0)

    def format(self) -> str:
        if not self.parts:
            return "0"
        bits = []
        for k, v in self.parts:
            if k is None:
                bits.append(str(v))
            elif v == 1:
                bits.append(k)
            elif v == -1:
                bits.append(f"-{k}")
            else:
                bits.append(f"{v}*{k}")
        return " + ".join(bits).replace("+ -", "- ")


@dataclass(frozen=True)
class TraceMonomial:
    """N^n_power times a product of traces of the given cyclic words."""

    n_power: int
    factors: tuple[CyclicWord, ...]

    def __post_init__(self):
        if any(len(f) == 0 for f in self.factors):
            raise ValueError("trace factors must be non-empty words")
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    def degree(self) -> int:
        return sum(len(f) for f in self.factors)

    def trace_count(self) -> int:
        return self.n_power + len(self.factors)


def _word_str(w: Word, names: tuple[str, ...]) -> str:
    letters = w.letters
    if len(set(letters)) == 1 and len(letters) > 1:
        return f"{names[letters[0]]}^{len(letters)}"
    return "".join(names[l] for l in letters)


class MultiTracePolynomial:
    """A finite sum of trace monomials with LinCoeff coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[TraceMonomial, LinCoeff] | None = None):
        cleaned = {}
        if terms:
            for mono, coeff in terms.items():
                if not coeff.is_zero():
                    cleaned[mono] = coeff
        self.terms: dict[TraceMonomial, LinCoeff] = cleaned

    def __add__(self, other: "MultiTracePolynomial") -> "MultiTracePolynomial":
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, LinCoeff()) + coeff
        return MultiTracePolynomial(terms)

    def scale(self, factor: Rational) -> "MultiTracePolynomial":
        return MultiTracePolynomial(
            {m: c.scale(factor) for m, c in self.terms.items()}
        )

    def scale_by_lin(self, lin: LinCoeff) -> "MultiTracePolynomial":
        """Multiply a numeric-coefficient polynomial by a coupling form."""
        out: dict[TraceMonomial, LinCoeff] = {}
        for mono, coeff in self.terms.items():
            for k, _ in coeff.parts:
                if k is not None:
                    raise ValueError("cannot multiply two symbolic couplings")
            out[mono] = lin.scale(coeff.constant_part())
        return MultiTracePolynomial(out)

    def substitute(self, symbol_values: dict[str, Fraction]) -> "MultiTracePolynomial":
        """Replace coupling symbols by exact numeric values."""
        return MultiTracePolynomial(
            {m: LinCoeff.of(c.evaluate(symbol_values)) for m, c in self.terms.items()}
        )

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(m.degree() for m in self.terms)

    def items(self):
        return sorted(
            self.terms.items(),
            key=lambda mc: (mc[0].degree(), -mc[0].n_power, mc[0].factors),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiTracePolynomial):
            return NotImplemented
        return self.terms == other.terms

    def format(self, names: tuple[str, ...] = ("H",)) -> str:
        """Pretty form like ``2*N*Tr(H^2) + 2*(Tr(H))^2``."""
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.items():
            bits = []
            ctext = coeff.format()
            prefix = ""
            bare = mono.n_power == 0 and not mono.factors
            if " " in ctext or "+" in ctext.strip("-"):
                bits.append(f"({ctext})")
            elif ctext == "-1" and not bare:
                prefix = "-"
            elif ctext != "1" or bare:
                bits.append(ctext)
            if mono.n_power == 1:
                bits.append("N")
            elif mono.n_power > 1:
                bits.append(f"N^{mono.n_power}")
            grouped: dict[CyclicWord, int] = {}
            for f in mono.factors:
                grouped[f] = grouped.get(f, 0) + 1
            for f in sorted(grouped):
                count = grouped[f]
                text = f"Tr({_word_str(f.rep, names)})"
                bits.append(text if count == 1 else f"({text})^{count}")
            parts.append(prefix + ("*".join(bits) if bits else "1"))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiTracePolynomial({self.format()})"


def monomial(
    coeff: Rational | LinCoeff,
    n_power: int = 0,
    factors: tuple[Word | CyclicWord, ...] = (),
) -> MultiTracePolynomial:
    keys = tuple(
        f if isinstance(f, CyclicWord) else moment_key(f) for f in factors
    )
    lin = coeff if isinstance(coeff, LinCoeff) else LinCoeff.of(coeff)
    return MultiTracePolynomial({TraceMonomial(n_power, keys): lin})
