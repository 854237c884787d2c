"""Moment-matrix construction and positivity tests."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diracboot.positivity import (
    MomentMatrix,
    build_moment_matrix,
    carleman_indicator,
    hankel_from_sequence,
    leading_minors,
    psd_check,
)
from diracboot.words import Word, adjoint, enumerate_words, moment_key


def single_matrix_table(values_by_length):
    return {
        moment_key(Word((0,) * k)): v for k, v in enumerate(values_by_length)
    }


def numeric_table(mats, max_len):
    """Tracial moments of explicit Hermitian matrices; a genuine state."""
    n = mats[0].shape[0]
    table = {}
    for w in enumerate_words(len(mats), max_len):
        prod = np.eye(n, dtype=complex)
        for letter in w.letters:
            prod = prod @ mats[letter]
        table.setdefault(moment_key(w), np.trace(prod).real / n)
    return table


class TestHankel:
    def test_semicircle_two_by_two(self):
        assert hankel_from_sequence([1, 0, 1]).entries.tolist() == [[1, 0], [0, 1]]

    def test_gaussian_minors(self):
        matrix = hankel_from_sequence([1, 0, 1, 0, 3, 0, 15])
        assert matrix.size == 4
        assert leading_minors(matrix) == [1, 1, 2, 12]

    def test_unit_mass_at_zero(self):
        matrix = hankel_from_sequence([1, 0, 0])
        assert matrix.entries.tolist() == [[1, 0], [0, 0]]

    def test_variance_below_mean_square(self):
        matrix = hankel_from_sequence([1, 0.5, 0.2])
        assert np.linalg.det(matrix.entries) == pytest.approx(-0.05)

    def test_rejects_even_length(self):
        with pytest.raises(ValueError):
            hankel_from_sequence([1, 0])

    def test_rejects_wrong_mass(self):
        with pytest.raises(ValueError):
            hankel_from_sequence([2, 0, 1])

    def test_float_input_has_no_exact_entries(self):
        matrix = hankel_from_sequence([1, 0.5, 0.2])
        assert matrix.exact is None
        with pytest.raises(ValueError):
            leading_minors(matrix)


class TestBuildMomentMatrix:
    def test_empty_word_basis(self):
        table = single_matrix_table([1])
        matrix = build_moment_matrix(table, 1, 0)
        assert matrix.entries.tolist() == [[1]]

    def test_symmetric_single_matrix(self):
        m2, m4 = Fraction(1, 10), Fraction(11, 200)
        table = single_matrix_table([1, 0, m2, 0, m4])
        matrix = build_moment_matrix(table, 1, 2)
        expected = [[1, 0, m2], [0, m2, 0], [m2, 0, m4]]
        assert matrix.entries.tolist() == [[float(v) for v in row] for row in expected]
        assert matrix.exact == tuple(tuple(map(Fraction, row)) for row in expected)

    def test_two_letter_length_one(self):
        values = {"": 1.0, "A": 0.1, "B": 0.2, "AA": 0.5, "AB": 0.05, "BB": 0.4}
        table = {
            moment_key(Word.from_str(k) if k else Word()): v for k, v in values.items()
        }
        matrix = build_moment_matrix(table, 2, 1)
        assert matrix.entries.tolist() == [
            [1.0, 0.1, 0.2],
            [0.1, 0.5, 0.05],
            [0.2, 0.05, 0.4],
        ]

    def test_matches_hankel_for_single_matrix(self):
        catalan = [1, 0, 1, 0, 2, 0, 5]
        table = single_matrix_table(catalan)
        matrix = build_moment_matrix(table, 1, 3)
        hankel = hankel_from_sequence(catalan)
        assert np.array_equal(matrix.entries, hankel.entries)

    def test_custom_basis(self):
        table = single_matrix_table([1, 0, Fraction(1, 8), 0, Fraction(1, 20)])
        matrix = build_moment_matrix(table, 1, 2, basis=(Word(), Word((0, 0))))
        assert matrix.entries.tolist() == [[1.0, 0.125], [0.125, 0.05]]

    def test_missing_moment_names_the_pair(self):
        table = single_matrix_table([1, 0, 0.5])
        with pytest.raises(KeyError, match="basis pair"):
            build_moment_matrix(table, 1, 2)

    def test_numeric_state_is_feasible_and_symmetric(self):
        rng = np.random.default_rng(2)
        mats = []
        for _ in range(2):
            a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
            mats.append((a + a.conj().T) / 2)
        matrix = build_moment_matrix(numeric_table(mats, 4), 2, 2)
        assert np.allclose(matrix.entries, matrix.entries.T)
        report = psd_check(matrix)
        assert report.feasible


class TestPsdCheck:
    def test_gaussian_matrix_is_interior(self):
        report = psd_check(hankel_from_sequence([1, 0, 1, 0, 3, 0, 15]))
        assert report.feasible
        assert report.min_eigenvalue > 0
        assert report.first_negative_minor is None

    def test_boundary_matrix_is_feasible(self):
        report = psd_check(hankel_from_sequence([1, 0, 0]))
        assert report.feasible
        assert report.min_eigenvalue == pytest.approx(0.0, abs=1e-12)

    def test_negative_determinant_is_infeasible(self):
        report = psd_check(hankel_from_sequence([1, 0.5, 0.2]))
        assert not report.feasible
        assert report.first_negative_minor == 2

    def test_tolerance_is_relative_to_norm(self):
        entries = np.diag([1.0, -5e-11])
        matrix = MomentMatrix(basis=(Word(), Word((0,))), entries=entries)
        assert psd_check(matrix, tol=1e-10).feasible
        assert not psd_check(matrix, tol=1e-12).feasible

    def test_rejects_non_finite_entries(self):
        matrix = MomentMatrix(
            basis=(Word(),), entries=np.array([[float("nan")]])
        )
        with pytest.raises(ValueError):
            psd_check(matrix)


class TestCarleman:
    def test_gaussian_partial_sum(self):
        value = carleman_indicator([1, 3, 15])
        assert value == pytest.approx(1 + 3 ** (-0.25) + 15 ** (-1 / 6))
        assert value == pytest.approx(2.396, abs=1e-3)

    def test_all_ones(self):
        assert carleman_indicator([1.0] * 7) == pytest.approx(7.0)

    def test_factorial_growth_keeps_terms_decaying(self):
        moments = [math.factorial(2 * k) for k in range(1, 6)]
        value = carleman_indicator(moments)
        assert value < 2.0
        assert value > carleman_indicator(moments[:3])

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            carleman_indicator([1.0, 0.0])


measures = st.lists(
    st.tuples(
        st.floats(min_value=-2, max_value=2),
        st.floats(min_value=0.05, max_value=1),
    ),
    min_size=1,
    max_size=5,
)


@given(measures)
def test_realizable_moments_pass_at_every_truncation(atoms):
    total = sum(w for _, w in atoms)
    moments = [
        sum(w * x**k for x, w in atoms) / total for k in range(7)
    ]
    for n in (1, 2, 3):
        report = psd_check(hankel_from_sequence(moments[: 2 * n + 1]))
        assert report.feasible


@given(measures)
def test_moment_matrix_entries_pair_adjoint_with_product(atoms):
    total = sum(w for _, w in atoms)
    moments = [
        sum(w * x**k for x, w in atoms) / total for k in range(5)
    ]
    table = single_matrix_table(moments)
    matrix = build_moment_matrix(table, 1, 2)
    for i, u in enumerate(matrix.basis):
        for j, v in enumerate(matrix.basis):
            expected = table[moment_key(adjoint(u) * v)]
            assert matrix.entries[i, j] == pytest.approx(expected)
