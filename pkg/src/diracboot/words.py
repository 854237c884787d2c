"""Words over a finite alphabet of Hermitian matrix letters.

Letters are integers 0..alphabet-1 and print as capital Latin letters, so
``Word((0, 0, 1))`` prints as ``AAB``.  Moments of products of traces are
indexed by cyclic equivalence classes; the canonical representative of a
class is the lexicographically least rotation.  Because every letter is
Hermitian, the adjoint of a word is its reversal, and a moment and its
adjoint moment are identified at storage time.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

_ALPHA = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class Word:
    """A finite word; graded lexicographic order (length first, then letters)."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if any(l < 0 for l in self.letters):
            raise ValueError("letters must be non-negative integers")

    def __lt__(self, other: "Word") -> bool:
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def __le__(self, other: "Word") -> bool:
        return self == other or self < other

    def __gt__(self, other: "Word") -> bool:
        return other < self

    def __ge__(self, other: "Word") -> bool:
        return self == other or other < self

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def rotate(self, k: int) -> "Word":
        n = len(self.letters)
        if n == 0:
            return self
        k %= n
        return Word(self.letters[k:] + self.letters[:k])

    def to_str(self, names: str | tuple[str, ...] = _ALPHA) -> str:
        """Serialize as a letter string; the empty word serializes as "1"."""
        if not self.letters:
            return "1"
        return "".join(names[l] for l in self.letters)

    def __str__(self) -> str:
        return self.to_str()

    @staticmethod
    def from_str(text: str, names: str | tuple[str, ...] = _ALPHA) -> "Word":
        if text == "1" or text == "":
            return Word()
        index = {name: i for i, name in enumerate(names)}
        try:
            return Word(tuple(index[ch] for ch in text))
        except KeyError as exc:
            raise ValueError(f"unknown letter {exc.args[0]!r} in word {text!r}") from None


EMPTY = Word()


def adjoint(w: Word) -> Word:
    """Adjoint of a word of Hermitian letters: the reversal."""
    return Word(w.letters[::-1])


def _least_rotation(seq: tuple[int, ...]) -> int:
    """Booth's algorithm: index of the lexicographically least rotation."""
    n = len(seq)
    doubled = seq + seq
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = doubled[j]
        i = f[j - k - 1]
        while i != -1 and sj != doubled[k + i + 1]:
            if sj < doubled[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != doubled[k + i + 1]:
            if sj < doubled[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


@dataclass(frozen=True)
class CyclicWord:
    """Cyclic equivalence class, stored via its canonical representative."""

    rep: Word

    def __len__(self) -> int:
        return len(self.rep)

    def __lt__(self, other: "CyclicWord") -> bool:
        return self.rep < other.rep

    def __le__(self, other: "CyclicWord") -> bool:
        return self.rep <= other.rep

    def __gt__(self, other: "CyclicWord") -> bool:
        return other.rep < self.rep

    def __ge__(self, other: "CyclicWord") -> bool:
        return other.rep <= self.rep

    def to_str(self, names: str | tuple[str, ...] = _ALPHA) -> str:
        return self.rep.to_str(names)

    def __str__(self) -> str:
        return self.rep.to_str()


def canonical_cyclic(w: Word) -> CyclicWord:
    """Canonical representative of the cyclic class: least rotation.

    >>> str(canonical_cyclic(Word.from_str("BAA")))
    'AAB'
    >>> str(canonical_cyclic(Word.from_str("ABB")))
    'ABB'
    >>> str(canonical_cyclic(Word()))
    '1'
    """
    if len(w) == 0:
        return CyclicWord(w)
    return CyclicWord(w.rotate(_least_rotation(w.letters)))


def moment_key(w: Word) -> CyclicWord:
    """Storage key of the moment of a word: min of its cyclic class and the
    cyclic class of its adjoint (Hermitian letters make the two moments equal).
    """
    a = canonical_cyclic(w)
    b = canonical_cyclic(adjoint(w))
    return a if a.rep <= b.rep else b


@dataclass(frozen=True)
class SymmetryAction:
    """Letter relabeling combined with per-letter sign flips.

    ``signs[i]`` is the sign picked up by letter ``i`` and ``perm[i]`` the
    letter it maps to.  Applying the action to a word multiplies the signs of
    all letters in the word and relabels them; it does not canonicalize.
    """

    signs: tuple[int, ...]
    perm: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) != len(self.perm):
            raise ValueError("signs and perm must have equal length")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("perm must be a permutation of 0..n-1")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    def compose(self, other: "SymmetryAction") -> "SymmetryAction":
        """self after other (apply ``other`` first)."""
        n = len(self.perm)
        if n != len(other.perm):
            raise ValueError("alphabet size mismatch")
        perm = tuple(self.perm[other.perm[i]] for i in range(n))
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(n))
        return SymmetryAction(signs, perm)

    @staticmethod
    def identity(alphabet: int) -> "SymmetryAction":
        return SymmetryAction((1,) * alphabet, tuple(range(alphabet)))

    @staticmethod
    def flip(letter: int, alphabet: int) -> "SymmetryAction":
        signs = tuple(-1 if i == letter else 1 for i in range(alphabet))
        return SymmetryAction(signs, tuple(range(alphabet)))

    @staticmethod
    def swap(a: int, b: int, alphabet: int) -> "SymmetryAction":
        perm = list(range(alphabet))
        perm[a], perm[b] = perm[b], perm[a]
        return SymmetryAction((1,) * alphabet, tuple(perm))


def apply_symmetry(w: Word, action: SymmetryAction) -> tuple[Word, int]:
    """Apply a symmetry action to a word, returning (image word, sign).

    >>> apply_symmetry(Word.from_str("AAB"), SymmetryAction.flip(0, 2))
    (Word(letters=(0, 0, 1)), 1)
    >>> apply_symmetry(Word.from_str("AB"), SymmetryAction.swap(0, 1, 2))[0].to_str()
    'BA'
    """
    sign = 1
    letters = []
    for l in w.letters:
        sign *= action.signs[l]
        letters.append(action.perm[l])
    return Word(tuple(letters)), sign


def symmetry_group(generators: Iterable[SymmetryAction], alphabet: int) -> list[SymmetryAction]:
    """Finite group generated by the given actions (breadth-first closure)."""
    gens = list(generators)
    seen = {(SymmetryAction.identity(alphabet).signs, SymmetryAction.identity(alphabet).perm)}
    group = [SymmetryAction.identity(alphabet)]
    frontier = list(group)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                c = h.compose(g)
                key = (c.signs, c.perm)
                if key not in seen:
                    seen.add(key)
                    group.append(c)
                    nxt.append(c)
        frontier = nxt
        if len(group) > 4096:
            raise ValueError("symmetry group too large")
    return group


def enumerate_words(alphabet: int, max_len: int) -> list[Word]:
    """All words of length <= max_len in graded lexicographic order.

    >>> [str(w) for w in enumerate_words(1, 3)]
    ['1', 'A', 'AA', 'AAA']
    >>> [str(w) for w in enumerate_words(2, 2)]
    ['1', 'A', 'B', 'AA', 'AB', 'BA', 'BB']
    """
    if alphabet < 1:
        raise ValueError("alphabet must have at least one letter")
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    out = []
    for n in range(max_len + 1):
        for letters in itertools.product(range(alphabet), repeat=n):
            out.append(Word(letters))
    return out


def iter_words_of_length(alphabet: int, length: int) -> Iterator[Word]:
    for letters in itertools.product(range(alphabet), repeat=length):
        yield Word(letters)
