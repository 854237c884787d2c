"""Word-indexed moment matrices and positive semidefiniteness tests.

For any genuine noncommutative distribution the matrix M[u, v] = m(adjoint(u)
concat v), indexed by words u, v, is a Gram matrix and therefore positive
semidefinite.  Imposing that condition on candidate moment tables is the
bootstrap constraint; this module builds the matrices and tests them, with an
exact-rational minor mode for small cases.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .words import CyclicWord, Word, adjoint, enumerate_words, moment_key


@dataclass(frozen=True)
class MomentMatrix:
    """Symmetric moment matrix over an ordered word basis.

    ``entries`` is the float matrix used for eigenvalue tests; ``exact`` keeps
    the rational entries whenever the source moments were all rational.
    """

    basis: tuple[Word, ...]
    entries: np.ndarray
    exact: tuple[tuple[Fraction, ...], ...] | None = None

    @property
    def size(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class PsdReport:
    feasible: bool
    min_eigenvalue: float
    tolerance: float
    spectral_norm: float
    first_negative_minor: int | None = None
    closure_ok: bool = True


def hankel_from_sequence(moments: Sequence) -> MomentMatrix:
    """Hankel matrix H[i, j] = m_{i+j} from the sequence m_0 .. m_{2n}.

    >>> hankel_from_sequence([1, 0, 1]).entries.tolist()
    [[1.0, 0.0], [0.0, 1.0]]
    """
    if len(moments) % 2 == 0:
        raise ValueError("need an odd-length sequence m_0 .. m_{2n}")
    if moments[0] != 1:
        raise ValueError(f"m_0 must be 1, got {moments[0]!r}")
    n = (len(moments) - 1) // 2
    size = n + 1
    entries = np.empty((size, size))
    for i in range(size):
        for j in range(size):
            entries[i, j] = float(moments[i + j])
    exact = None
    if all(isinstance(m, Rational) for m in moments):
        exact = tuple(
            tuple(Fraction(moments[i + j]) for j in range(size)) for i in range(size)
        )
    basis = tuple(Word((0,) * k) for k in range(size))
    return MomentMatrix(basis=basis, entries=entries, exact=exact)


def build_moment_matrix(
    table: dict[CyclicWord, float | Fraction],
    alphabet: int,
    lam: int,
    basis: Sequence[Word] | None = None,
) -> MomentMatrix:
    """Moment matrix over all words of length <= lam (or a custom basis).

    The table must be keyed by canonical moment classes and cover every
    product adjoint(u)·v of basis words.
    """
    words = tuple(basis) if basis is not None else tuple(enumerate_words(alphabet, lam))
    size = len(words)
    values: list[list[float | Fraction]] = []
    for u in words:
        ustar = adjoint(u)
        row = []
        for v in words:
            key = moment_key(ustar * v)
            try:
                row.append(table[key])
            except KeyError:
                raise KeyError(
                    f"moment table missing {key!r} needed for basis pair "
                    f"({u!r}, {v!r})"
                ) from None
        values.append(row)
    entries = np.array([[float(v) for v in row] for row in values])
    exact = None
    if all(isinstance(v, Rational) for row in values for v in row):
        exact = tuple(tuple(Fraction(v) for v in row) for row in values)
    return MomentMatrix(basis=words, entries=entries, exact=exact)


def leading_minors(matrix: MomentMatrix) -> list[Fraction]:
    """Exact determinants of all leading principal submatrices.

    Requires the matrix to carry exact rational entries.
    """
    if matrix.exact is None:
        raise ValueError("matrix has no exact rational entries")
    out = []
    for k in range(1, matrix.size + 1):
        out.append(_det_fraction([list(row[:k]) for row in matrix.exact[:k]]))
    return out


def _det_fraction(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if rows[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            det = -det
        pivot = rows[col][col]
        det *= pivot
        for r in range(col + 1, n):
            factor = rows[r][col] / pivot
            if factor:
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def psd_check(matrix: MomentMatrix, tol: float = 1e-10) -> PsdReport:
    """Feasibility = smallest eigenvalue >= -tol * max(1, spectral norm)."""
    entries = matrix.entries
    if not np.all(np.isfinite(entries)):
        raise ValueError("moment matrix has non-finite entries")
    sym = 0.5 * (entries + entries.T)
    eigs = np.linalg.eigvalsh(sym)
    min_eig = float(eigs[0])
    norm = float(max(abs(eigs[0]), abs(eigs[-1])))
    feasible = min_eig >= -tol * max(1.0, norm)
    first_neg = None
    if not feasible:
        for k in range(1, matrix.size + 1):
            if np.linalg.det(sym[:k, :k]) < 0.0:
                first_neg = k
                break
    return PsdReport(
        feasible=feasible,
        min_eigenvalue=min_eig,
        tolerance=tol,
        spectral_norm=norm,
        first_negative_minor=first_neg,
    )


def carleman_indicator(even_moments: Sequence[float]) -> float:
    """Partial sum of m_{2k}^(-1/(2k)) over the given m_2, m_4, ....

    Divergence of the full series certifies a determinate moment problem;
    the partial sum is a diagnostic only.

    >>> round(carleman_indicator([1, 3, 15]), 3)
    2.397
    """
    total = 0.0
    for k, m in enumerate(even_moments, start=1):
        if m <= 0:
            raise ValueError(f"even moment m_{2 * k} = {m} must be positive")
        total += float(m) ** (-1.0 / (2 * k))
    return total
