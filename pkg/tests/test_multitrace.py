"""Exact multitrace polynomial arithmetic and formatting."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from diracboot.multitrace import (
    LinCoeff,
    MultiTracePolynomial,
    TraceMonomial,
    monomial,
)
from diracboot.words import Word, moment_key


H = Word((0,))
H2 = Word((0, 0))
H3 = Word((0, 0, 0))
AB = Word((0, 1))

rationals = st.fractions(
    min_value=-10, max_value=10, max_denominator=12
)


class TestLinCoeff:
    def test_of_constant(self):
        c = LinCoeff.of(Fraction(3, 2))
        assert c.constant_part() == Fraction(3, 2)
        assert c.symbol_part("g") == 0
        assert not c.is_zero()

    def test_of_symbol(self):
        c = LinCoeff.of_symbol("g", Fraction(1, 6))
        assert c.constant_part() == 0
        assert c.symbol_part("g") == Fraction(1, 6)

    def test_add_merges_symbols(self):
        c = LinCoeff.of(2) + LinCoeff.of_symbol("g") + LinCoeff.of_symbol("g", 3)
        assert c.constant_part() == 2
        assert c.symbol_part("g") == 4

    def test_add_cancels_to_zero(self):
        c = LinCoeff.of_symbol("g") + LinCoeff.of_symbol("g", -1)
        assert c.is_zero()

    def test_scale(self):
        c = (LinCoeff.of(1) + LinCoeff.of_symbol("g", 2)).scale(Fraction(1, 2))
        assert c.constant_part() == Fraction(1, 2)
        assert c.symbol_part("g") == 1

    def test_evaluate(self):
        c = LinCoeff.of(Fraction(1, 4)) + LinCoeff.of_symbol("g", Fraction(1, 6))
        assert c.evaluate({"g": Fraction(3)}) == Fraction(3, 4)

    @pytest.mark.parametrize(
        "coeff, text",
        [
            (LinCoeff(), "0"),
            (LinCoeff.of(Fraction(1, 2)), "1/2"),
            (LinCoeff.of_symbol("g"), "g"),
            (LinCoeff.of_symbol("g", -1), "-g"),
            (LinCoeff.of_symbol("g", Fraction(2, 3)), "2/3*g"),
            (LinCoeff.of(1) + LinCoeff.of_symbol("g", -2), "1 - 2*g"),
        ],
    )
    def test_format(self, coeff, text):
        assert coeff.format() == text

    @given(rationals, rationals, rationals)
    def test_evaluate_is_linear(self, a, b, x):
        c = LinCoeff.of(a) + LinCoeff.of_symbol("g", b)
        assert c.evaluate({"g": x}) == a + b * x


class TestTraceMonomial:
    def test_degree_and_trace_count(self):
        mono = TraceMonomial(1, (moment_key(H2), moment_key(H3)))
        assert mono.degree() == 5
        assert mono.trace_count() == 3

    def test_factors_are_sorted(self):
        a = TraceMonomial(0, (moment_key(H3), moment_key(H)))
        b = TraceMonomial(0, (moment_key(H), moment_key(H3)))
        assert a == b

    def test_rejects_empty_factor(self):
        with pytest.raises(ValueError):
            TraceMonomial(0, (moment_key(Word(())),))


class TestMultiTracePolynomial:
    def test_add_merges_and_cancels(self):
        p = monomial(2, 1, (H2,)) + monomial(-2, 1, (H2,))
        assert p == MultiTracePolynomial()
        assert p.format() == "0"

    def test_scale(self):
        p = monomial(Fraction(1, 2), 1, (H2,)).scale(4)
        assert p == monomial(2, 1, (H2,))

    def test_scale_by_lin_attaches_coupling(self):
        p = monomial(3, 1, (H2,)).scale_by_lin(LinCoeff.of_symbol("g"))
        (coeff,) = p.terms.values()
        assert coeff.symbol_part("g") == 3
        assert coeff.constant_part() == 0

    def test_scale_by_lin_rejects_symbolic_base(self):
        p = monomial(LinCoeff.of_symbol("g"), 1, (H2,))
        with pytest.raises(ValueError):
            p.scale_by_lin(LinCoeff.of_symbol("t"))

    def test_substitute_produces_numeric_terms(self):
        p = monomial(LinCoeff.of_symbol("g", Fraction(1, 6)), 1, (H3,))
        q = p.substitute({"g": Fraction(3)})
        (coeff,) = q.terms.values()
        assert coeff.constant_part() == Fraction(1, 2)
        assert coeff.symbol_part("g") == 0

    def test_degree(self):
        p = monomial(1, 0, (H2, H2)) + monomial(1, 1, (H3,))
        assert p.degree() == 4
        assert MultiTracePolynomial().degree() == 0

    @pytest.mark.parametrize(
        "poly, text",
        [
            (monomial(2, 1, (H2,)) + monomial(2, 0, (H, H)), "2*N*Tr(H^2) + 2*(Tr(H))^2"),
            (monomial(1, 2), "N^2"),
            (monomial(-1, 0, (H,)), "-Tr(H)"),
            (monomial(Fraction(1, 2), 1, (H2,)), "1/2*N*Tr(H^2)"),
            (monomial(LinCoeff.of_symbol("g"), 1, (H3,)), "g*N*Tr(H^3)"),
            (monomial(1, 0, (H, H3)), "Tr(H)*Tr(H^3)"),
        ],
    )
    def test_format(self, poly, text):
        assert poly.format() == text

    def test_format_two_letters(self):
        p = monomial(-8, 1, (Word((0, 1, 0, 1)),)) + monomial(16, 0, (AB, AB))
        assert p.format(("A", "B")) == "-8*N*Tr(ABAB) + 16*(Tr(AB))^2"

    def test_format_parenthesizes_mixed_coefficient(self):
        p = monomial(LinCoeff.of(1) + LinCoeff.of_symbol("g", 2), 1, (H2,))
        assert p.format() == "(1 + 2*g)*N*Tr(H^2)"

    @given(rationals, rationals)
    def test_addition_is_commutative(self, a, b):
        p = monomial(a, 1, (H2,))
        q = monomial(b, 0, (H, H))
        assert p + q == q + p

    @given(rationals)
    def test_scale_matches_repeated_addition(self, a):
        p = monomial(a, 1, (H2,)) + monomial(a, 0, (H3,))
        assert p + p + p == p.scale(3)
