"""Large-N loop equations and moment closures for multitrace ensembles.

For a word W and letter i, integration by parts gives

    sum_{W = U i V} E[Tr U Tr V] = E[ sum over action terms of the cyclic
                                      derivative contracted with W ],

and at leading order in 1/N expectations of trace products factorize into
products of normalized moments m_w = lim Tr(w)/N.  Relations are generated
with exact rational coefficients, kept linear in coupling symbols.

A closure eliminates moments degree by degree: each degree-d relation is
linear in its degree-d moments once lower moments are substituted, so exact
Gaussian elimination solves what it can, promotes the rest to search
variables, and records leftover polynomial identities among search variables
as constraints.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from ._poly import Poly
from .dirac import EnsembleSpec
from .multitrace import LinCoeff, MultiTracePolynomial
from .words import (
    CyclicWord,
    SymmetryAction,
    Word,
    apply_symmetry,
    iter_words_of_length,
    moment_key,
    symmetry_group,
)

# A side of a relation maps sorted moment-key tuples to coefficients; the
# empty tuple is the constant term (every m_empty factor equals one).
TermMap = dict[tuple[CyclicWord, ...], LinCoeff]


class ClosureError(ValueError):
    """Raised when elimination meets a genuinely inconsistent relation."""


def cyclic_gradient(
    poly: MultiTracePolynomial, letter: int
) -> list[tuple[LinCoeff, int, tuple[CyclicWord, ...], Word]]:
    """Cyclic derivative of a multitrace polynomial with respect to a letter.

    For each occurrence of the letter in each trace factor, emits
    (coefficient, N power, untouched factors, rotated remainder word): the
    occurrence at position p of factor F = P letter Q contributes the word QP.
    """
    out: dict[tuple[int, tuple[CyclicWord, ...], Word], LinCoeff] = {}
    for mono, coeff in poly.terms.items():
        for idx, f in enumerate(mono.factors):
            others = mono.factors[:idx] + mono.factors[idx + 1 :]
            letters = f.rep.letters
            for pos, l in enumerate(letters):
                if l != letter:
                    continue
                qp = Word(letters[pos + 1 :] + letters[:pos])
                key = (mono.n_power, tuple(sorted(others)), qp)
                out[key] = out.get(key, LinCoeff()) + coeff
    return [
        (coeff, n_power, others, qp)
        for (n_power, others, qp), coeff in sorted(
            out.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].letters)
        )
        if not coeff.is_zero()
    ]


class _Canonicalizer:
    """Maps words to symmetry-reduced moment representatives with signs."""

    def __init__(self, group: list[SymmetryAction] | None):
        self.group = group
        self._cache: dict[Word, tuple[CyclicWord | None, int]] = {}

    def __call__(self, w: Word) -> tuple[CyclicWord | None, int]:
        """Return (representative, sign), or (None, 0) for a forced zero."""
        base = moment_key(w)
        if self.group is None:
            return base, 1
        if base.rep in self._cache:
            return self._cache[base.rep]
        images: dict[CyclicWord, set[int]] = {}
        for action in self.group:
            img, sign = apply_symmetry(base.rep, action)
            images.setdefault(moment_key(img), set()).add(sign)
        result: tuple[CyclicWord | None, int]
        if any(len(signs) > 1 for signs in images.values()):
            result = (None, 0)
        else:
            rep = min(images)
            result = (rep, next(iter(images[rep])))
        for key in images:
            img_sign = next(iter(images[key])) if result[0] is not None else 0
            self._cache[key.rep] = (result[0], result[1] * img_sign if result[0] else 0)
        # Sign bookkeeping: m_base = s_g * m_{g(base)}; the cached sign for an
        # image key is the sign relating that key back to the representative.
        self._cache[base.rep] = result
        return result


@dataclass(frozen=True)
class MomentRelation:
    """One loop equation: sum(lhs) = sum(rhs), exact in the large-N limit."""

    source_word: Word
    letter: int
    lhs: TermMap
    rhs: TermMap

    def residual_terms(self) -> TermMap:
        """lhs - rhs as a single map (the relation states this sums to zero)."""
        combined = dict(self.lhs)
        for key, coeff in self.rhs.items():
            combined[key] = combined.get(key, LinCoeff()) + coeff.scale(-1)
        return {k: c for k, c in combined.items() if not c.is_zero()}

    def moments(self) -> set[CyclicWord]:
        out: set[CyclicWord] = set()
        for side in (self.lhs, self.rhs):
            for key in side:
                out.update(key)
        return out

    def max_degree(self) -> int:
        degrees = [sum(len(w) for w in key) for side in (self.lhs, self.rhs) for key in side]
        return max(degrees, default=0)


def _accumulate(side: TermMap, key: tuple[CyclicWord, ...], coeff: LinCoeff) -> None:
    if coeff.is_zero():
        return
    prev = side.get(key, LinCoeff())
    total = prev + coeff
    if total.is_zero():
        side.pop(key, None)
    else:
        side[key] = total


def generate_sde(
    spec: EnsembleSpec,
    w: Word,
    letter: int = 0,
    action: MultiTracePolynomial | None = None,
    symmetry: list[SymmetryAction] | None = None,
) -> MomentRelation:
    """Loop equation from inserting word ``w`` and differentiating ``letter``.

    ``action`` defaults to the spec's loop action with symbolic couplings.
    With ``symmetry`` given, moments are identified along the group orbit and
    forced-zero moments are dropped from both sides.
    """
    if action is None:
        action = spec.loop_action
    canon = _Canonicalizer(symmetry)

    def reduced(words: list[Word]) -> tuple[tuple[CyclicWord, ...], int] | None:
        keys = []
        sign = 1
        for word in words:
            if len(word) == 0:
                continue
            rep, s = canon(word)
            if rep is None:
                return None
            keys.append(rep)
            sign *= s
        return tuple(sorted(keys)), sign

    for mono in action.terms:
        if mono.trace_count() != 2:
            raise ValueError(
                f"action term with N^{mono.n_power} and {len(mono.factors)} "
                "trace factors does not scale as N^2"
            )

    lhs: TermMap = {}
    letters = w.letters
    for pos, l in enumerate(letters):
        if l != letter:
            continue
        pieces = reduced([Word(letters[:pos]), Word(letters[pos + 1 :])])
        if pieces is None:
            continue
        key, sign = pieces
        _accumulate(lhs, key, LinCoeff.of(sign))

    rhs: TermMap = {}
    for coeff, _, others, qp in cyclic_gradient(action, letter):
        pieces = reduced([w * qp] + [o.rep for o in others])
        if pieces is None:
            continue
        key, sign = pieces
        _accumulate(rhs, key, coeff.scale(sign))

    return MomentRelation(source_word=w, letter=letter, lhs=lhs, rhs=rhs)


def _moment_name(w: CyclicWord, letter_names: tuple[str, ...]) -> str:
    if len(letter_names) == 1:
        return f"m_{len(w)}"
    return "m_" + w.rep.to_str(letter_names)


def format_relation(rel: MomentRelation, letter_names: tuple[str, ...] = ("H",)) -> str:
    """Render like ``0 = 2*m_1 + g*(2*m_2 + 2*m_1^2)``."""

    def product_text(key: tuple[CyclicWord, ...]) -> str:
        if not key:
            return "1"
        grouped: dict[CyclicWord, int] = {}
        for w in key:
            grouped[w] = grouped.get(w, 0) + 1
        bits = []
        for w in sorted(grouped):
            name = _moment_name(w, letter_names)
            bits.append(name if grouped[w] == 1 else f"{name}^{grouped[w]}")
        return "*".join(bits)

    def side_text(side: TermMap) -> str:
        if not side:
            return "0"
        by_symbol: dict[str | None, list[tuple[tuple[CyclicWord, ...], Fraction]]] = {}
        for key in sorted(side, key=lambda k: (sum(len(w) for w in k), len(k), k)):
            for sym, val in side[key].parts:
                by_symbol.setdefault(sym, []).append((key, val))

        def chunk(terms: list[tuple[tuple[CyclicWord, ...], Fraction]]) -> str:
            bits = []
            for key, val in terms:
                prod = product_text(key)
                if prod == "1":
                    bits.append(str(val))
                elif val == 1:
                    bits.append(prod)
                elif val == -1:
                    bits.append(f"-{prod}")
                else:
                    bits.append(f"{val}*{prod}")
            return " + ".join(bits).replace("+ -", "- ")

        parts = []
        if None in by_symbol:
            parts.append(chunk(by_symbol.pop(None)))
        for sym in sorted(by_symbol):
            parts.append(f"{sym}*({chunk(by_symbol[sym])})")
        return " + ".join(parts)

    return f"{side_text(rel.lhs)} = {side_text(rel.rhs)}"


def relation_residual(
    rel: MomentRelation,
    moments: dict[CyclicWord, float],
    symbol_values: dict[str, float] | None = None,
) -> float:
    """Absolute value of lhs - rhs evaluated on a moment table."""
    symbol_values = symbol_values or {}
    total = 0.0
    for key, coeff in rel.residual_terms().items():
        value = 0.0
        for sym, frac in coeff.parts:
            value += float(frac) * (1.0 if sym is None else symbol_values[sym])
        for w in key:
            value *= moments[w]
        total += value
    return abs(total)


@dataclass
class Closure:
    """Triangular solution of the loop equations up to a degree.

    Every moment class of degree <= max_degree is exactly one of: a search
    variable, a symmetry-forced zero, or solved by a polynomial recipe in the
    search variables.  ``constraints`` are polynomial identities among search
    variables implied by relations that eliminated to zero rows.
    """

    spec: EnsembleSpec
    max_degree: int
    impose_symmetry: bool
    search_variables: list[CyclicWord]
    solved: dict[CyclicWord, Poly]
    zeros: frozenset[CyclicWord]
    constraints: list[Poly]
    canon_map: dict[CyclicWord, tuple[CyclicWord | None, int]] = field(repr=False, default_factory=dict)

    def variable_names(self) -> list[str]:
        return [_moment_name(w, self.spec.letter_names) for w in self.search_variables]

    def variable_index(self, name: str) -> int:
        """Index of a search variable; 'm2' and 'm_2' are both accepted."""
        wanted = name.replace("_", "")
        for i, candidate in enumerate(self.variable_names()):
            if candidate.replace("_", "") == wanted:
                return i
        raise KeyError(
            f"unknown search variable {name!r}; available: {self.variable_names()}"
        )

    def _values_by_id(
        self, assignment: dict[str, float | Fraction]
    ) -> dict[int, float | Fraction]:
        by_id: dict[int, float | Fraction] = {}
        for key, value in assignment.items():
            by_id[self.variable_index(key)] = value
        missing = [
            n for i, n in enumerate(self.variable_names()) if i not in by_id
        ]
        if missing:
            raise KeyError(f"assignment missing search variables {missing}")
        return by_id

    def evaluate(
        self, assignment: dict[str, float | Fraction], exact: bool = False
    ) -> dict[CyclicWord, float | Fraction]:
        """Moment table on all moment-key classes up to max_degree."""
        by_id = self._values_by_id(assignment)
        zero = Fraction(0) if exact else 0.0
        base: dict[CyclicWord, float | Fraction] = {}
        for idx, word in enumerate(self.search_variables):
            base[word] = Fraction(by_id[idx]) if exact else float(by_id[idx])
        for word, poly in self.solved.items():
            if exact:
                base[word] = poly.evaluate_exact({i: Fraction(v) for i, v in by_id.items()})
            else:
                base[word] = poly.evaluate({i: float(v) for i, v in by_id.items()})
        table: dict[CyclicWord, float | Fraction] = {
            moment_key(Word()): Fraction(1) if exact else 1.0
        }
        for word, (rep, sign) in self.canon_map.items():
            table[word] = zero if rep is None else sign * base[rep]
        return table

    def constraint_violation(self, assignment: dict[str, float | Fraction]) -> float:
        """Largest absolute value among the closure's constraint polynomials."""
        by_id = {i: float(v) for i, v in self._values_by_id(assignment).items()}
        worst = 0.0
        for poly in self.constraints:
            worst = max(worst, abs(poly.evaluate(by_id)))
        return worst


def build_closure(
    spec: EnsembleSpec, max_degree: int, impose_symmetry: bool = False
) -> Closure:
    """Eliminate the loop-equation hierarchy degree by degree.

    Couplings are substituted with their exact numeric values before
    elimination, so the recipe set is re-derived per coupling value and
    degenerate couplings change which moments are solvable rather than
    producing divisions by zero.
    """
    group = (
        symmetry_group(spec.symmetries, spec.alphabet) if impose_symmetry else None
    )
    if impose_symmetry and not spec.symmetries:
        raise ValueError("spec declares no symmetries to impose")
    action = spec.numeric_loop_action()
    shift = action.degree() - 1
    canon = _Canonicalizer(group)

    search_variables: list[CyclicWord] = []
    var_ids: dict[CyclicWord, int] = {}
    solved: dict[CyclicWord, Poly] = {}
    zeros: set[CyclicWord] = set()
    constraints: list[Poly] = []

    def value_poly(rep: CyclicWord) -> Poly | None:
        if rep in var_ids:
            return Poly.variable(var_ids[rep])
        return solved.get(rep)

    def promote(rep: CyclicWord) -> None:
        var_ids[rep] = len(search_variables)
        search_variables.append(rep)

    canon_map: dict[CyclicWord, tuple[CyclicWord | None, int]] = {}

    for degree in range(1, max_degree + 1):
        unknowns: set[CyclicWord] = set()
        for w in iter_words_of_length(spec.alphabet, degree):
            base = moment_key(w)
            rep, sign = canon(base.rep)
            canon_map[base] = (rep, sign)
            if rep is None:
                zeros.add(base)
                continue
            if rep not in solved and rep not in var_ids:
                unknowns.add(rep)
        columns = sorted(unknowns, reverse=True)
        col_index = {c: i for i, c in enumerate(columns)}

        rows: list[tuple[dict[int, Fraction], Poly]] = []
        source_len = degree - shift
        if source_len >= 0:
            for w in iter_words_of_length(spec.alphabet, source_len):
                for letter in range(spec.alphabet):
                    rel = generate_sde(spec, w, letter, action=action, symmetry=group)
                    coeffs: dict[int, Fraction] = {}
                    known = Poly()
                    bad = False
                    for key, lin in rel.residual_terms().items():
                        c = lin.constant_part()
                        unknown_col = None
                        poly = Poly.constant(c)
                        for word in key:
                            if word in col_index:
                                if unknown_col is not None:
                                    raise AssertionError(
                                        "two top-degree moments in one term"
                                    )
                                unknown_col = col_index[word]
                                continue
                            vp = value_poly(word)
                            if vp is None:
                                # Moment beyond this degree (possible when a
                                # relation is revisited); skip such relations.
                                bad = True
                                break
                            poly = poly * vp
                        if bad:
                            break
                        if unknown_col is None:
                            known = known + poly
                        else:
                            if not poly.is_constant():
                                raise AssertionError("nonlinear top-degree term")
                            coeffs[unknown_col] = (
                                coeffs.get(unknown_col, Fraction(0))
                                + poly.constant_value()
                            )
                    if bad:
                        continue
                    coeffs = {k: v for k, v in coeffs.items() if v}
                    rows.append((coeffs, known))

        # Exact Gaussian elimination; pivot on the largest moment available.
        pivots: dict[int, tuple[dict[int, Fraction], Poly]] = {}
        for coeffs, known in rows:
            coeffs = dict(coeffs)
            for pcol in sorted(pivots):
                factor = coeffs.pop(pcol, None)
                if factor is None:
                    continue
                prow, pknown = pivots[pcol]
                for c, v in prow.items():
                    coeffs[c] = coeffs.get(c, Fraction(0)) - factor * v
                    if not coeffs[c]:
                        del coeffs[c]
                known = known - pknown.scale(factor)
            lead = min(coeffs) if coeffs else None
            if lead is None:
                if known.is_zero():
                    continue
                if known.is_constant():
                    raise ClosureError(
                        f"inconsistent relation at degree {degree}: "
                        f"0 = {known.constant_value()}"
                    )
                norm = known.scale(1 / known.leading_coefficient())
                if norm not in constraints:
                    constraints.append(norm)
                continue
            inv = 1 / coeffs[lead]
            coeffs = {c: v * inv for c, v in coeffs.items() if c != lead}
            known = known.scale(inv)
            for pcol, (prow, pknown) in list(pivots.items()):
                if lead in prow:
                    factor = prow[lead]
                    new_row = dict(prow)
                    del new_row[lead]
                    for c, v in coeffs.items():
                        new_row[c] = new_row.get(c, Fraction(0)) - factor * v
                        if not new_row[c]:
                            del new_row[c]
                    pivots[pcol] = (new_row, pknown - known.scale(factor))
            pivots[lead] = (coeffs, known)

        free_cols = [i for i in range(len(columns)) if i not in pivots]
        for i in sorted(free_cols, key=lambda i: columns[i]):
            promote(columns[i])
        if free_cols and source_len >= 0:
            names = ", ".join(str(columns[i]) for i in free_cols)
            warnings.warn(
                f"degree {degree}: relations leave {len(free_cols)} moment(s) "
                f"undetermined; promoted to search variables: {names}",
                stacklevel=2,
            )
        for pcol in sorted(pivots):
            prow, pknown = pivots[pcol]
            expr = pknown.scale(-1)
            for c, v in prow.items():
                expr = expr - Poly.variable(var_ids[columns[c]]).scale(v)
            solved[columns[pcol]] = expr

    canon_map.pop(moment_key(Word()), None)
    return Closure(
        spec=spec,
        max_degree=max_degree,
        impose_symmetry=impose_symmetry,
        search_variables=search_variables,
        solved=solved,
        zeros=frozenset(zeros),
        constraints=constraints,
        canon_map=canon_map,
    )
