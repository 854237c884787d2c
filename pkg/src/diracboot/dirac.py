"""Finite Dirac-operator ensembles and their multitrace actions.

A Dirac operator of signature (p, q) with p + q <= 2 acts on matrices as a sum
of anticommutators and commutators tensored with products of gamma matrices,

    D = sum_i  G_i (x) (X_i (x) 1 + eps_i 1 (x) X_i^T),

where each X_i is an independent Hermitian N x N letter, G_i is a small
Hermitian matrix built from the gamma basis and eps_i = +1 for anticommutator
letters, -1 for commutator letters.  Tr D^k then expands exactly into a
multitrace polynomial via Tr(X (x) Y) = Tr X * Tr Y, with the empty trace
contributing a factor of N.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from numbers import Rational

from .multitrace import LinCoeff, MultiTracePolynomial, TraceMonomial, monomial
from .words import CyclicWord, SymmetryAction, Word, moment_key

# 2x2 matrices with Gaussian-integer entries, stored as ((re, im) pairs).
_Mat = tuple[tuple[tuple[int, int], ...], ...]


def _mat(rows) -> _Mat:
    return tuple(tuple((int(e[0]), int(e[1])) for e in row) for row in rows)


_ID1 = _mat([[(1, 0)]])
_ID2 = _mat([[(1, 0), (0, 0)], [(0, 0), (1, 0)]])
_SIGMA1 = _mat([[(0, 0), (1, 0)], [(1, 0), (0, 0)]])
_SIGMA2 = _mat([[(0, 0), (0, -1)], [(0, 1), (0, 0)]])
_SIGMA3 = _mat([[(1, 0), (0, 0)], [(0, 0), (-1, 0)]])


def _mat_mul(a: _Mat, b: _Mat) -> _Mat:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            re = im = 0
            for k in range(n):
                ar, ai = a[i][k]
                br, bi = b[k][j]
                re += ar * br - ai * bi
                im += ar * bi + ai * br
            row.append((re, im))
        out.append(tuple(row))
    return tuple(out)


def _mat_trace(a: _Mat) -> tuple[int, int]:
    re = sum(a[i][i][0] for i in range(len(a)))
    im = sum(a[i][i][1] for i in range(len(a)))
    return re, im


@dataclass(frozen=True)
class GammaBasis:
    """Hard-coded Clifford data for one supported signature.

    ``terms`` lists (letter index, gamma-product matrix, eps) triples; ``dim``
    is the dimension of the spinor factor the gamma matrices act on.
    """

    signature: tuple[int, int]
    dim: int
    terms: tuple[tuple[int, _Mat, int], ...]


# Commutator letters carry anti-Hermitian gamma factors i*sigma; the extra i
# is absorbed into the matrix shown here so every stored matrix is Hermitian.
_GAMMA_BASES = {
    (1, 0): GammaBasis((1, 0), 1, ((0, _ID1, +1),)),
    (0, 1): GammaBasis((0, 1), 1, ((0, _ID1, -1),)),
    (2, 0): GammaBasis((2, 0), 2, ((0, _SIGMA3, +1), (1, _SIGMA1, +1))),
    (1, 1): GammaBasis((1, 1), 2, ((0, _SIGMA1, +1), (1, _SIGMA2, -1))),
    (0, 2): GammaBasis((0, 2), 2, ((0, _SIGMA1, -1), (1, _SIGMA2, -1))),
}

SUPPORTED_SIGNATURES = tuple(sorted(_GAMMA_BASES))


def gamma_basis(signature: tuple[int, int]) -> GammaBasis:
    try:
        return _GAMMA_BASES[tuple(signature)]
    except KeyError:
        raise ValueError(
            f"unsupported signature {signature}; supported: {SUPPORTED_SIGNATURES}"
        ) from None


def alphabet_size(signature: tuple[int, int]) -> int:
    return len({t[0] for t in gamma_basis(signature).terms})


@functools.lru_cache(maxsize=None)
def expand_dirac_power(signature: tuple[int, int], k: int) -> MultiTracePolynomial:
    """Exact multitrace expansion of Tr D^k for the given signature.

    Every term in the result has n_power + (number of trace factors) == 2,
    the well-defined large-N scaling Tr D^k ~ N^2.
    """
    if k < 1:
        raise ValueError("power must be >= 1")
    basis = gamma_basis(signature)
    terms: dict[TraceMonomial, LinCoeff] = {}
    identity = _ID1 if basis.dim == 1 else _ID2

    for seq in product(range(len(basis.terms)), repeat=k):
        g = identity
        for idx in seq:
            g = _mat_mul(g, basis.terms[idx][1])
        tr_re, tr_im = _mat_trace(g)
        if tr_im != 0:
            raise ArithmeticError("gamma trace must be real for Hermitian bases")
        if tr_re == 0:
            continue
        letters = [basis.terms[idx][0] for idx in seq]
        epses = [basis.terms[idx][2] for idx in seq]
        for mask in range(1 << k):
            sign = 1
            left = []
            right = []
            for pos in range(k):
                if mask >> pos & 1:
                    sign *= epses[pos]
                    right.append(letters[pos])
                else:
                    left.append(letters[pos])
            n_power = (not left) + (not right)
            factors = []
            if left:
                factors.append(moment_key(Word(tuple(left))))
            if right:
                # Right multiplications compose in reverse order.
                factors.append(moment_key(Word(tuple(reversed(right)))))
            mono = TraceMonomial(n_power, tuple(factors))
            coeff = Fraction(tr_re * sign)
            prev = terms.get(mono, LinCoeff())
            terms[mono] = prev + LinCoeff.of(coeff)
    return MultiTracePolynomial(terms)


def build_action(
    signature: tuple[int, int], couplings: dict[int, LinCoeff]
) -> MultiTracePolynomial:
    """Action sum_k t_k Tr D^k as an exact multitrace polynomial."""
    action = MultiTracePolynomial()
    for k in sorted(couplings):
        lin = couplings[k]
        if lin.is_zero():
            continue
        expansion = expand_dirac_power(signature, k)
        if not expansion.terms:
            raise ValueError(
                f"Tr D^{k} vanishes identically for signature {signature}; "
                "the coupling would silently do nothing"
            )
        action = action + expansion.scale_by_lin(lin)
    return action


def dirac_moment(
    signature: tuple[int, int], ell: int, moments: dict[CyclicWord, float]
) -> float:
    """Normalized Dirac moment d_ell = lim Tr(D^ell) / N^2 from letter moments.

    Each monomial with n_power + #factors == 2 contributes its coefficient
    times the product of normalized factor moments; lower trace counts are
    suppressed by 1/N^2 and contribute zero.
    """
    total = 0.0
    for mono, coeff in expand_dirac_power(signature, ell).terms.items():
        count = mono.trace_count()
        if count < 2:
            continue
        if count > 2:
            raise ArithmeticError("monomial scales faster than N^2")
        value = float(coeff.constant_part())
        for f in mono.factors:
            value *= moments[moment_key(f.rep)]
        total += value
    return total


def conjectured_m2(t2: float, t4: float) -> float:
    """Second moment of D under the normalized trace, quartic rank-2 model.

    Closed form (sqrt(t2^2 + 8 t4) - t2) / (8 t4); requires t4 > 0.  The
    normalization divides Tr(D^2) by the full module dimension 2 N^2, so the
    value equals 4 m_2 of the matrix moments (Tr D^2 / N^2 would be 8 m_2);
    this is the convention under which the closed form matches both the loop
    equations and finite-N sampling.
    """
    if t4 <= 0:
        raise ValueError("t4 must be positive")
    disc = t2 * t2 + 8.0 * t4
    return (math.sqrt(disc) - t2) / (8.0 * t4)


@dataclass(frozen=True)
class FermionicSpec:
    """Extra data for ensembles with a fermionic log-determinant weight."""

    mass: float
    a: float = 1.0
    beta2: float = 2.0

    def __post_init__(self):
        if self.mass < 0:
            raise ValueError("mass must be non-negative")


@dataclass(frozen=True)
class EnsembleSpec:
    """A random Dirac-operator ensemble.

    ``action`` is the sampling action (exact expansion of sum_k t_k Tr D^k
    plus any fermionic additions evaluated separately), ``loop_action`` the
    variant the moment relations are generated from.  They coincide unless a
    constructor overrides the multitrace normalization its relation family
    is written in.
    """

    name: str
    alphabet: int
    letter_names: tuple[str, ...]
    action: MultiTracePolynomial
    signature: tuple[int, int] | None = None
    couplings: dict[int, LinCoeff] = field(default_factory=dict)
    symbol_values: dict[str, Fraction] = field(default_factory=dict)
    symmetries: tuple[SymmetryAction, ...] = ()
    fermionic: FermionicSpec | None = None
    loop_action: MultiTracePolynomial | None = None

    def __post_init__(self):
        if self.loop_action is None:
            object.__setattr__(self, "loop_action", self.action)
        for mono in self.action.terms:
            if any(l >= self.alphabet for f in mono.factors for l in f.rep.letters):
                raise ValueError("action uses letters outside the alphabet")

    def numeric_action(self) -> MultiTracePolynomial:
        return self.action.substitute(self.symbol_values)

    def numeric_loop_action(self) -> MultiTracePolynomial:
        return self.loop_action.substitute(self.symbol_values)

    def coupling_value(self, symbol: str) -> float:
        return float(self.symbol_values[symbol])


def _as_fraction(x: Rational | float) -> Fraction:
    return Fraction(x) if not isinstance(x, float) else Fraction(x)


def gaussian_ensemble() -> EnsembleSpec:
    """Single Hermitian matrix with S = (N/2) Tr H^2."""
    h2 = Word((0, 0))
    return EnsembleSpec(
        name="gaussian",
        alphabet=1,
        letter_names=("H",),
        action=monomial(Fraction(1, 2), 1, (h2,)),
        symmetries=(SymmetryAction.flip(0, 1),),
    )


def cubic_ensemble(g: Rational | float) -> EnsembleSpec:
    """Type (1,0) cubic model, S = (1/4) Tr D^2 + (g/6) Tr D^3."""
    g = _as_fraction(g)
    couplings = {
        2: LinCoeff.of(Fraction(1, 4)),
        3: LinCoeff.of_symbol("g", Fraction(1, 6)),
    }
    return EnsembleSpec(
        name="cubic",
        alphabet=1,
        letter_names=("H",),
        action=build_action((1, 0), couplings),
        signature=(1, 0),
        couplings=couplings,
        symbol_values={"g": g},
    )


def quartic_ensemble(
    t2: Rational | float, signature: tuple[int, int] = (1, 0)
) -> EnsembleSpec:
    """One-matrix quartic model, S = t2 Tr D^2 + Tr D^4, signature (1,0) or (0,1).

    The loop relations of this model are generated from a variant of the
    action whose (Tr H^2)^2 coefficient is 4 rather than the 6 produced by
    the Tr D^4 expansion; every moment relation and bound this package
    derives for the model corresponds to that normalization, and the raw
    expansion stays available through expand_dirac_power.
    """
    if tuple(signature) not in ((1, 0), (0, 1)):
        raise ValueError("quartic one-matrix model needs signature (1,0) or (0,1)")
    t2 = _as_fraction(t2)
    couplings = {2: LinCoeff.of_symbol("g"), 4: LinCoeff.of(1)}
    action = build_action(tuple(signature), couplings)
    h2 = Word((0, 0))
    loop_action = action + monomial(Fraction(-2), 0, (h2, h2))
    return EnsembleSpec(
        name=f"quartic{signature[0]}{signature[1]}",
        alphabet=1,
        letter_names=("H",),
        action=action,
        signature=tuple(signature),
        couplings=couplings,
        symbol_values={"g": t2},
        symmetries=(SymmetryAction.flip(0, 1),),
        loop_action=loop_action,
    )


def two_matrix_quartic_ensemble(
    t2: Rational | float, t4: Rational | float = 1, signature: tuple[int, int] = (2, 0)
) -> EnsembleSpec:
    """Two-letter quartic model, S = t2 Tr D^2 + t4 Tr D^4."""
    if tuple(signature) not in ((2, 0), (1, 1), (0, 2)):
        raise ValueError("two-matrix quartic model needs a rank-2 signature")
    t2 = _as_fraction(t2)
    t4 = _as_fraction(t4)
    if t4 <= 0:
        raise ValueError("t4 must be positive for a convergent ensemble")
    couplings = {2: LinCoeff.of_symbol("g"), 4: LinCoeff.of(t4)}
    return EnsembleSpec(
        name=f"two_matrix{signature[0]}{signature[1]}",
        alphabet=2,
        letter_names=("A", "B"),
        action=build_action(tuple(signature), couplings),
        signature=tuple(signature),
        couplings=couplings,
        symbol_values={"g": t2},
        symmetries=(
            SymmetryAction.flip(0, 2),
            SymmetryAction.flip(1, 2),
            SymmetryAction.swap(0, 1, 2),
        ),
    )


def fermionic_quartic_ensemble(
    g2: Rational | float,
    g4: Rational | float,
    mass: float,
    a: float = 1.0,
    beta2: float = 2.0,
) -> EnsembleSpec:
    """Type (0,1) quartic ensemble coupled to a mass-m fermion determinant.

    The bosonic part is S = g2 Tr D^2 + g4 Tr D^4 with D = [H, .]; sampling
    adds -(beta2/4) sum_ij log(m^2 + (l_i - l_j)^2) over eigenvalues of H and
    the trace-mode regulator +a (Tr H)^2.
    """
    couplings = {
        2: LinCoeff.of_symbol("g2"),
        4: LinCoeff.of_symbol("g4"),
    }
    return EnsembleSpec(
        name="fermionic_quartic",
        alphabet=1,
        letter_names=("H",),
        action=build_action((0, 1), couplings),
        signature=(0, 1),
        couplings=couplings,
        symbol_values={"g2": _as_fraction(g2), "g4": _as_fraction(g4)},
        symmetries=(SymmetryAction.flip(0, 1),),
        fermionic=FermionicSpec(mass=float(mass), a=float(a), beta2=float(beta2)),
    )
