"""Word algebra: canonicalization, adjoints, symmetry actions, enumeration."""
import pytest
from hypothesis import given, strategies as st

from diracboot.words import (
    CyclicWord,
    SymmetryAction,
    Word,
    adjoint,
    apply_symmetry,
    canonical_cyclic,
    enumerate_words,
    moment_key,
    symmetry_group,
)


def W(text):
    return Word.from_str(text)


words = st.builds(
    Word, st.lists(st.integers(0, 2), max_size=10).map(tuple)
)


@pytest.mark.parametrize(
    "raw,canon",
    [("BAA", "AAB"), ("ABB", "ABB"), ("", "1"), ("BA", "AB"), ("CAB", "ABC")],
)
def test_canonical_cyclic_examples(raw, canon):
    assert canonical_cyclic(W(raw)).to_str() == canon


def test_canonical_cyclic_rotations_of_abb():
    rotations = {canonical_cyclic(W("ABB").rotate(k)).to_str() for k in range(3)}
    assert rotations == {"ABB"}


@pytest.mark.parametrize("raw,rev", [("AAB", "BAA"), ("A", "A"), ("", "")])
def test_adjoint_examples(raw, rev):
    assert adjoint(W(raw)) == W(rev)


def test_apply_symmetry_examples():
    flip_a = SymmetryAction.flip(0, 2)
    swap = SymmetryAction.swap(0, 1, 2)
    assert apply_symmetry(W("AAB"), flip_a) == (W("AAB"), 1)
    assert apply_symmetry(W("A"), flip_a) == (W("A"), -1)
    assert apply_symmetry(W("AB"), swap) == (W("BA"), 1)


def test_enumerate_words_examples():
    unary = enumerate_words(1, 3)
    assert [w.to_str("H") for w in unary] == ["1", "H", "HH", "HHH"]
    binary = enumerate_words(2, 2)
    assert [w.to_str() for w in binary] == ["1", "A", "B", "AA", "AB", "BA", "BB"]
    assert enumerate_words(2, 0) == [Word()]


def test_enumerate_words_graded_and_duplicate_free():
    out = enumerate_words(3, 4)
    assert len(out) == sum(3 ** k for k in range(5))
    assert len(set(out)) == len(out)
    assert out == sorted(out)


def test_word_string_round_trip():
    assert Word((0, 0, 1)).to_str() == "AAB"
    assert Word.from_str("AAB") == Word((0, 0, 1))
    assert str(Word()) == "1"
    assert str(CyclicWord(Word())) == "1"


@given(words)
def test_canonical_cyclic_idempotent(w):
    c = canonical_cyclic(w)
    assert canonical_cyclic(c.rep) == c


@given(words, st.integers(0, 9))
def test_canonical_cyclic_rotation_invariant(w, k):
    assert canonical_cyclic(w.rotate(k)) == canonical_cyclic(w)


@given(words)
def test_adjoint_involution(w):
    assert adjoint(adjoint(w)) == w


@given(words, st.integers(0, 9))
def test_moment_key_depends_only_on_cyclic_class(w, k):
    assert moment_key(w.rotate(k)) == moment_key(w)
    assert moment_key(adjoint(w)) == moment_key(w)


@given(words)
def test_involutive_action_returns_plus_one(w):
    flip = SymmetryAction.flip(1, 3)
    once, s1 = apply_symmetry(w, flip)
    twice, s2 = apply_symmetry(once, flip)
    assert twice == w
    assert s1 * s2 == 1


@given(words)
def test_symmetry_composition_matches_sequential_application(w):
    flip = SymmetryAction.flip(0, 3)
    swap = SymmetryAction.swap(0, 1, 3)
    step_w, s1 = apply_symmetry(w, flip)
    step_w, s2 = apply_symmetry(step_w, swap)
    comp_w, sc = apply_symmetry(w, swap.compose(flip))
    assert comp_w == step_w
    assert sc == s1 * s2


def test_symmetry_group_closure():
    group = symmetry_group([SymmetryAction.flip(0, 2), SymmetryAction.swap(0, 1, 2)], 2)
    assert len(group) == 8
    reps = {apply_symmetry(W("AB"), g) for g in group}
    assert (W("BA"), 1) in reps
