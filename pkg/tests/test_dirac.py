"""Dirac operator expansions over the supported Clifford signatures.

The numeric oracle builds D = sum_i gamma_i (x) (X_i (x) 1 + eps_i 1 (x) X_i^T)
explicitly with Kronecker products and compares Tr D^k against the symbolic
multitrace expansion evaluated on the same matrices.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from diracboot.dirac import (
    SUPPORTED_SIGNATURES,
    EnsembleSpec,
    alphabet_size,
    build_action,
    conjectured_m2,
    cubic_ensemble,
    dirac_moment,
    expand_dirac_power,
    fermionic_quartic_ensemble,
    gamma_basis,
    gaussian_ensemble,
    quartic_ensemble,
    two_matrix_quartic_ensemble,
)
from diracboot.multitrace import LinCoeff, MultiTracePolynomial, TraceMonomial, monomial
from diracboot.words import Word, apply_symmetry, moment_key

H = Word((0,))
H2 = Word((0, 0))
H3 = Word((0, 0, 0))
H4 = Word((0, 0, 0, 0))


def gamma_numpy(mat):
    return np.array([[re + 1j * im for re, im in row] for row in mat])


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def dirac_matrix(signature, mats):
    basis = gamma_basis(signature)
    n = mats[0].shape[0]
    eye = np.eye(n)
    total = 0
    for letter, gamma, eps in basis.terms:
        module = np.kron(mats[letter], eye) + eps * np.kron(eye, mats[letter].T)
        total = total + np.kron(gamma_numpy(gamma), module)
    return total


def eval_multitrace(poly, mats, n):
    total = 0j
    for mono, coeff in poly.terms.items():
        value = complex(coeff.constant_part())
        for factor in mono.factors:
            prod = np.eye(n, dtype=complex)
            for letter in factor.rep.letters:
                prod = prod @ mats[letter]
            value *= np.trace(prod)
        total += value * n**mono.n_power
    return total


class TestExpandDiracPower:
    def test_rejects_nonpositive_power(self):
        with pytest.raises(ValueError):
            expand_dirac_power((1, 0), 0)

    def test_rejects_unknown_signature(self):
        with pytest.raises(ValueError):
            expand_dirac_power((3, 0), 2)

    @pytest.mark.parametrize(
        "signature, k, text",
        [
            ((1, 0), 1, "2*N*Tr(H)"),
            ((1, 0), 2, "2*N*Tr(H^2) + 2*(Tr(H))^2"),
        ],
    )
    def test_single_matrix_strings(self, signature, k, text):
        assert expand_dirac_power(signature, k).format() == text

    def test_two_matrix_square(self):
        expected = (
            monomial(4, 1, (Word((0, 0)),))
            + monomial(4, 1, (Word((1, 1)),))
            + monomial(4, 0, (Word((0,)), Word((0,))))
            + monomial(4, 0, (Word((1,)), Word((1,))))
        )
        assert expand_dirac_power((2, 0), 2) == expected

    def test_two_matrix_quartic_has_twelve_terms(self):
        poly = expand_dirac_power((2, 0), 4)
        assert len(poly.terms) == 12
        abab = TraceMonomial(1, (moment_key(Word((0, 1, 0, 1))),))
        ab_sq = TraceMonomial(0, (moment_key(Word((0, 1))),) * 2)
        assert poly.terms[abab].constant_part() == -8
        assert poly.terms[ab_sq].constant_part() == 16

    @pytest.mark.parametrize("signature, eps", [((1, 0), 1), ((0, 1), -1)])
    @pytest.mark.parametrize("k", range(1, 7))
    def test_binomial_identity(self, signature, eps, k):
        expected = MultiTracePolynomial()
        for j in range(k + 1):
            coeff = math.comb(k, j) * eps ** (k - j)
            sizes = [m for m in (j, k - j) if m > 0]
            factors = tuple(Word((0,) * m) for m in sizes)
            expected = expected + monomial(coeff, 2 - len(sizes), factors)
        assert expand_dirac_power(signature, k) == expected

    @pytest.mark.parametrize("signature", SUPPORTED_SIGNATURES)
    @pytest.mark.parametrize("k", range(1, 5))
    def test_matches_kronecker_construction(self, signature, k):
        rng = np.random.default_rng(11 * k + 100 * signature[0] + signature[1])
        n = 3
        mats = [random_hermitian(rng, n) for _ in range(alphabet_size(signature))]
        d = dirac_matrix(signature, mats)
        direct = np.trace(np.linalg.matrix_power(d, k))
        symbolic = eval_multitrace(expand_dirac_power(signature, k), mats, n)
        assert abs(direct - symbolic) < 1e-9 * max(1.0, abs(direct))

    def test_scaling_weight_is_two(self):
        for signature in SUPPORTED_SIGNATURES:
            for k in range(1, 5):
                for mono in expand_dirac_power(signature, k).terms:
                    assert mono.trace_count() == 2

    @pytest.mark.parametrize("k", [2, 4])
    def test_two_matrix_expansion_symmetries(self, k):
        spec = two_matrix_quartic_ensemble(1, 1)
        poly = expand_dirac_power((2, 0), k)
        for action in spec.symmetries:
            mapped: dict[TraceMonomial, LinCoeff] = {}
            for mono, coeff in poly.terms.items():
                sign = 1
                factors = []
                for f in mono.factors:
                    image, s = apply_symmetry(f.rep, action)
                    sign *= s
                    factors.append(moment_key(image))
                key = TraceMonomial(mono.n_power, tuple(factors))
                mapped[key] = mapped.get(key, LinCoeff()) + coeff.scale(sign)
            assert MultiTracePolynomial(mapped) == poly


class TestBuildAction:
    def test_quartic_type_10(self):
        action = build_action(
            (1, 0), {2: LinCoeff.of_symbol("g"), 4: LinCoeff.of(1)}
        )
        expected = (
            monomial(LinCoeff.of_symbol("g", 2), 1, (H2,))
            + monomial(2, 1, (H4,))
            + monomial(LinCoeff.of_symbol("g", 2), 0, (H, H))
            + monomial(8, 0, (H, H3))
            + monomial(6, 0, (H2, H2))
        )
        assert action == expected

    def test_quartic_type_01_flips_odd_trace_terms(self):
        action = build_action(
            (0, 1), {2: LinCoeff.of_symbol("g"), 4: LinCoeff.of(1)}
        )
        expected = (
            monomial(LinCoeff.of_symbol("g", 2), 1, (H2,))
            + monomial(2, 1, (H4,))
            + monomial(LinCoeff.of_symbol("g", -2), 0, (H, H))
            + monomial(-8, 0, (H, H3))
            + monomial(6, 0, (H2, H2))
        )
        assert action == expected

    def test_cubic(self):
        action = build_action(
            (1, 0),
            {2: LinCoeff.of(Fraction(1, 4)), 3: LinCoeff.of_symbol("g", Fraction(1, 6))},
        )
        expected = (
            monomial(Fraction(1, 2), 1, (H2,))
            + monomial(Fraction(1, 2), 0, (H, H))
            + monomial(LinCoeff.of_symbol("g", Fraction(1, 3)), 1, (H3,))
            + monomial(LinCoeff.of_symbol("g"), 0, (H, H2))
        )
        assert action == expected

    def test_linear_in_couplings(self):
        doubled = build_action((1, 0), {2: LinCoeff.of(2)})
        assert doubled == expand_dirac_power((1, 0), 2).scale(2)

    def test_rejects_coupling_on_vanishing_power(self):
        assert not expand_dirac_power((0, 1), 1).terms
        with pytest.raises(ValueError):
            build_action((0, 1), {1: LinCoeff.of(1)})


class TestDiracMoment:
    def test_single_matrix_square(self):
        table = {moment_key(H): 0.0, moment_key(H2): 1.0}
        assert dirac_moment((1, 0), 2, table) == pytest.approx(2.0)

    def test_commutator_kills_rank_one(self):
        c = 0.7
        table = {moment_key(H): c, moment_key(H2): c * c}
        assert dirac_moment((0, 1), 2, table) == pytest.approx(0.0, abs=1e-15)

    def test_two_matrix_square_symmetric(self):
        m2 = 0.37
        table = {
            moment_key(Word((0,))): 0.0,
            moment_key(Word((1,))): 0.0,
            moment_key(Word((0, 0))): m2,
            moment_key(Word((1, 1))): m2,
        }
        assert dirac_moment((2, 0), 2, table) == pytest.approx(8 * m2)

    def test_missing_moment_raises(self):
        with pytest.raises(KeyError):
            dirac_moment((1, 0), 2, {moment_key(H): 0.0})


class TestConjecturedM2:
    def test_unit_couplings(self):
        assert conjectured_m2(1.0, 1.0) == pytest.approx(0.25)

    def test_pure_quartic(self):
        assert conjectured_m2(0.0, 1.0) == pytest.approx(math.sqrt(8) / 8)
        assert conjectured_m2(0.0, 1.0) == pytest.approx(0.353553, abs=1e-6)

    def test_large_t2_asymptote(self):
        t2 = 1e6
        assert conjectured_m2(t2, 1.0) == pytest.approx(1 / (2 * t2), rel=1e-5)

    @pytest.mark.parametrize("t4", [0.0, -1.0])
    def test_rejects_nonpositive_t4(self, t4):
        with pytest.raises(ValueError):
            conjectured_m2(1.0, t4)


class TestEnsembles:
    def test_gaussian_action(self):
        spec = gaussian_ensemble()
        assert spec.action.format() == "1/2*N*Tr(H^2)"
        assert spec.alphabet == 1

    def test_cubic_substitutes_coupling(self):
        spec = cubic_ensemble(Fraction(3))
        numeric = spec.numeric_action()
        cubic_term = TraceMonomial(1, (moment_key(H3),))
        assert numeric.terms[cubic_term].constant_part() == 1

    def test_quartic_loop_action_coefficient(self):
        spec = quartic_ensemble(1)
        square_pair = TraceMonomial(0, (moment_key(H2), moment_key(H2)))
        assert spec.action.terms[square_pair].constant_part() == 6
        assert spec.loop_action.terms[square_pair].constant_part() == 4
        others = set(spec.action.terms) - {square_pair}
        for mono in others:
            assert spec.action.terms[mono] == spec.loop_action.terms[mono]

    def test_quartic_rejects_rank_two_signature(self):
        with pytest.raises(ValueError):
            quartic_ensemble(1, signature=(2, 0))

    def test_two_matrix_letters_and_symmetries(self):
        spec = two_matrix_quartic_ensemble(1, 1)
        assert spec.alphabet == 2
        assert spec.letter_names == ("A", "B")
        assert len(spec.symmetries) == 3

    def test_two_matrix_rejects_nonpositive_t4(self):
        with pytest.raises(ValueError):
            two_matrix_quartic_ensemble(1, 0)

    def test_fermionic_rejects_negative_mass(self):
        with pytest.raises(ValueError):
            fermionic_quartic_ensemble(-3.99, 1.0, mass=-0.1)

    def test_fermionic_carries_determinant_data(self):
        spec = fermionic_quartic_ensemble(-3.99, 1.0, mass=2.0)
        assert spec.fermionic is not None
        assert spec.fermionic.mass == 2.0
        assert spec.signature == (0, 1)

    def test_action_letters_must_fit_alphabet(self):
        bad = monomial(1, 1, (Word((1, 1)),))
        with pytest.raises(ValueError):
            EnsembleSpec(name="bad", alphabet=1, letter_names=("H",), action=bad)

    @pytest.mark.parametrize(
        "signature, size",
        [((1, 0), 1), ((0, 1), 1), ((2, 0), 2), ((1, 1), 2), ((0, 2), 2)],
    )
    def test_alphabet_sizes(self, signature, size):
        assert alphabet_size(signature) == size

    def test_gamma_basis_rejects_unknown(self):
        with pytest.raises(ValueError):
            gamma_basis((2, 1))
